//! Seeded generators of random polynomials, forms and derivations, used by
//! the identity checks and the nilpotency probe.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::Derivation;
use crate::jetalg::{Coeff, GradedForm, ModelContext, MultiIndex, Parity, ScalarPoly};

/// Size bounds for generated objects.
#[derive(Clone, Copy, Debug)]
pub struct Bounds {
    pub max_jet_order: usize,
    /// Maximal number of jet factors in a monomial.
    pub max_degree: usize,
    /// Maximal total degree in the base coordinates.
    pub max_base_degree: usize,
    pub max_terms: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_jet_order: 2,
            max_degree: 3,
            max_base_degree: 1,
            max_terms: 3,
        }
    }
}

pub struct RandomForms {
    rng: ChaCha8Rng,
    pub bounds: Bounds,
}

impl RandomForms {
    pub fn new(seed: u64, bounds: Bounds) -> Self {
        RandomForms {
            rng: ChaCha8Rng::seed_from_u64(seed),
            bounds,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Uniform integer in `lo..=hi`.
    pub fn rng_range(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    /// Small nonzero rational.
    pub fn coeff(&mut self) -> Coeff {
        let mut num: i64 = self.rng.gen_range(1..=5);
        if self.rng.gen_bool(0.4) {
            num = -num;
        }
        let den: i64 = if self.rng.gen_bool(0.2) { self.rng.gen_range(2..=3) } else { 1 };
        Coeff::new(num.into(), den.into())
    }

    fn monomial(&mut self, ctx: &ModelContext, allow_jets: bool) -> ScalarPoly {
        let n = ctx.base_dim();
        let mut m = ScalarPoly::one();
        if n > 0 {
            let base_deg = self.rng.gen_range(0..=self.bounds.max_base_degree);
            for _ in 0..base_deg {
                m = &m * &ScalarPoly::base_coord(self.rng.gen_range(0..n));
            }
        }
        if allow_jets && !ctx.fields().is_empty() {
            let deg = self.rng.gen_range(0..=self.bounds.max_degree);
            for _ in 0..deg {
                let a = self.rng.gen_range(0..ctx.fields().len());
                let idx = self.multi_index(n, self.bounds.max_jet_order);
                m = &m * &ScalarPoly::jet(ctx.jet_var(a, idx));
            }
        }
        m
    }

    pub fn multi_index(&mut self, n: usize, max_order: usize) -> MultiIndex {
        let order = self.rng.gen_range(0..=max_order);
        let mut e = vec![0u16; n];
        if n > 0 {
            for _ in 0..order {
                e[self.rng.gen_range(0..n)] += 1;
            }
        }
        MultiIndex::from_exponents(e)
    }

    /// Random scalar polynomial of mixed parity.
    pub fn scalar(&mut self, ctx: &ModelContext) -> ScalarPoly {
        let terms = self.rng.gen_range(1..=self.bounds.max_terms);
        let mut out = ScalarPoly::zero();
        for _ in 0..terms {
            let m = self.monomial(ctx, true);
            out += &m.scale(&self.coeff());
        }
        out
    }

    /// Random scalar polynomial of a single parity (possibly zero).
    pub fn scalar_of_parity(&mut self, ctx: &ModelContext, parity: Parity) -> ScalarPoly {
        let terms = self.rng.gen_range(1..=self.bounds.max_terms);
        let mut out = ScalarPoly::zero();
        for _ in 0..terms {
            for _attempt in 0..8 {
                let m = self.monomial(ctx, true);
                if !m.is_zero() && m.parity() == Some(parity) {
                    out += &m.scale(&self.coeff());
                    break;
                }
            }
        }
        out
    }

    /// Random polynomial in the base coordinates only.
    pub fn base_poly(&mut self, ctx: &ModelContext) -> ScalarPoly {
        let terms = self.rng.gen_range(1..=self.bounds.max_terms);
        let mut out = ScalarPoly::zero();
        for _ in 0..terms {
            let m = self.monomial(ctx, false);
            out += &m.scale(&self.coeff());
        }
        out
    }

    /// Random wedge word with `k` contact factors and `m` distinct `dx`.
    fn word(&mut self, ctx: &ModelContext, k: usize, m: usize) -> GradedForm {
        let n = ctx.base_dim();
        let mut dirs: Vec<usize> = (0..n).collect();
        dirs.shuffle(&mut self.rng);
        let mut out = GradedForm::one();
        for &l in dirs.iter().take(m) {
            out = &out * &ctx.dx(l);
        }
        for _ in 0..k {
            let a = self.rng.gen_range(0..ctx.fields().len());
            let idx = self.multi_index(n, self.bounds.max_jet_order);
            out = &out * &GradedForm::contact(ctx.jet_var(a, idx));
        }
        out
    }

    /// Random form of bidegree `(k, m)`; may be zero when generators collide.
    pub fn form(&mut self, ctx: &ModelContext, k: usize, m: usize) -> GradedForm {
        assert!(m <= ctx.base_dim(), "horizontal degree exceeds base dimension");
        assert!(k == 0 || !ctx.fields().is_empty(), "contact forms need fields");
        let terms = self.rng.gen_range(1..=self.bounds.max_terms);
        let mut out = GradedForm::zero();
        for _ in 0..terms {
            let coeff = self.monomial(ctx, true).scale(&self.coeff()).into_form();
            out += &coeff * &self.word(ctx, k, m);
        }
        out
    }

    /// Random form of bidegree `(k, m)` that is nonzero (retrying a bounded
    /// number of times).
    pub fn nonzero_form(&mut self, ctx: &ModelContext, k: usize, m: usize) -> GradedForm {
        for _ in 0..64 {
            let f = self.form(ctx, k, m);
            if !f.is_zero() {
                return f;
            }
        }
        panic!("could not generate a nonzero ({k},{m}) form");
    }

    /// Random parity-homogeneous derivation. `projected` restricts `υ^λ` to
    /// the base coordinates; `vertical` forces `υ^λ = 0`.
    pub fn derivation(&mut self, ctx: &ModelContext, parity: Parity, projected: bool, vertical: bool) -> Derivation {
        let horizontal = (0..ctx.base_dim())
            .map(|_| {
                if vertical || self.rng.gen_bool(0.3) {
                    ScalarPoly::zero()
                } else if projected {
                    if parity.is_odd() {
                        ScalarPoly::zero()
                    } else {
                        self.base_poly(ctx)
                    }
                } else {
                    self.scalar_of_parity(ctx, parity)
                }
            })
            .collect();
        let characteristics = ctx
            .fields()
            .iter()
            .map(|f| self.scalar_of_parity(ctx, parity + f.parity))
            .collect();
        Derivation::with_parity(ctx, horizontal, characteristics, parity).expect("generated derivation is homogeneous")
    }
}
