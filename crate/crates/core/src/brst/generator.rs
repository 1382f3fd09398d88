use num::Zero;

use crate::calculus::{lie, Derivation};
use crate::jetalg::{Coeff, FieldSpec, GradedForm, ModelContext, Parity, ScalarPoly};
use crate::random::{Bounds, RandomForms};

use super::{BrstError, LieStructure};

/// Seed of the randomized nilpotency probe.
pub const PROBE_SEED: u64 = 0x6a09_e667_f3bc_c908;
/// Number of random horizontal forms tried by the probe.
pub const PROBE_SAMPLES: usize = 24;

/// The BRST model over a Lie algebra: even gauge fields `a^r_λ`, odd ghosts
/// `C^r`, and the generator.
#[derive(Clone, Debug)]
pub struct BrstModel {
    pub ctx: ModelContext,
    /// `gauge[r][λ]` is the field index of `a^r_λ`.
    pub gauge: Vec<Vec<usize>>,
    /// `ghosts[r]` is the field index of `C^r`.
    pub ghosts: Vec<usize>,
    pub generator: Derivation,
}

/// Name of the gauge field `a^r_λ` (1-based `r`).
pub fn gauge_name(r: usize, coord: &str) -> String {
    format!("a{}_{}", r + 1, coord)
}

/// Name of the ghost `C^r` (1-based `r`).
pub fn ghost_name(r: usize) -> String {
    format!("C{}", r + 1)
}

/// Field roster of the BRST model (gauge fields first, then ghosts).
pub fn brst_fields(g: &LieStructure, coords: &[String]) -> Vec<FieldSpec> {
    let mut fields = Vec::new();
    for r in 0..g.dim() {
        for c in coords {
            fields.push(FieldSpec::new(gauge_name(r, c), Parity::Even));
        }
    }
    for r in 0..g.dim() {
        fields.push(FieldSpec::new(ghost_name(r), Parity::Odd));
    }
    fields
}

/// The BRST generator on the model built by [`brst_fields`]:
/// `υ(a^r_λ) = C^r_λ + c^r_pq a^p_λ C^q` and `υ(C^r) = −½ c^r_pq C^p C^q`.
///
/// With derivations acting from the left, the ghost transformation carries a
/// minus sign; that is the sign for which nilpotency is equivalent to the
/// Jacobi identity.
pub fn brst_generator(g: &LieStructure, coords: &[String]) -> Result<BrstModel, BrstError> {
    if g.dim() == 0 {
        return Err(BrstError::EmptyAlgebra);
    }
    let ctx = ModelContext::new(coords.to_vec(), brst_fields(g, coords))?;
    let n = ctx.base_dim();
    let dim = g.dim();
    let gauge: Vec<Vec<usize>> = (0..dim).map(|r| (0..n).map(|l| r * n + l).collect()).collect();
    let ghosts: Vec<usize> = (0..dim).map(|r| dim * n + r).collect();
    let ghost = |r: usize| ScalarPoly::jet(ctx.field_var(ghosts[r]));
    let field = |a: usize| ScalarPoly::jet(ctx.field_var(a));
    let mut chars = vec![ScalarPoly::zero(); ctx.fields().len()];
    for r in 0..dim {
        for l in 0..n {
            let mut c = ScalarPoly::jet(ctx.jet_var(ghosts[r], crate::jetalg::MultiIndex::unit(n, l)));
            for p in 0..dim {
                for q in 0..dim {
                    let k = g.constant(r, p, q);
                    if !k.is_zero() {
                        c += &(&field(gauge[p][l]) * &ghost(q)).scale(&k);
                    }
                }
            }
            chars[gauge[r][l]] = c;
        }
        let mut c = ScalarPoly::zero();
        let minus_half = Coeff::new((-1).into(), 2.into());
        for p in 0..dim {
            for q in 0..dim {
                let k = g.constant(r, p, q);
                if !k.is_zero() {
                    c += &(&ghost(p) * &ghost(q)).scale(&(k * &minus_half));
                }
            }
        }
        chars[ghosts[r]] = c;
    }
    let generator = Derivation::with_parity(&ctx, vec![ScalarPoly::zero(); n], chars, Parity::Odd)?;
    Ok(BrstModel {
        ctx,
        gauge,
        ghosts,
        generator,
    })
}

/// Which test settled the nilpotency question.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Criterion {
    /// The zero derivation.
    Zero,
    /// Even derivations are never nilpotent.
    Parity,
    /// `L_v(υ^a) = 0` for every field (sufficient, and necessary since
    /// `L_v L_v s^a = L_v(υ^a)`).
    Characteristics,
    /// The characteristic test passed but the randomized probe found a form
    /// with `L_v L_v φ ≠ 0`.
    Probe,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeOutcome {
    pub seed: u64,
    pub samples: usize,
    /// First sample with `L_v L_v φ ≠ 0`, if any.
    pub counterexample: Option<(GradedForm, GradedForm)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NilpotencyReport {
    pub nilpotent: bool,
    pub criterion: Criterion,
    /// A field `a` with `L_v(υ^a) ≠ 0`, and that value.
    pub witness: Option<(usize, GradedForm)>,
    /// Not run for even derivations.
    pub probe: Option<ProbeOutcome>,
}

/// Decides whether the vertical derivation `v` has nilpotent Lie derivative
/// on horizontal forms.
pub fn nilpotency_check(ctx: &ModelContext, v: &Derivation) -> Result<NilpotencyReport, BrstError> {
    if !v.is_vertical() {
        return Err(BrstError::NotVertical);
    }
    if v.is_zero() {
        return Ok(NilpotencyReport {
            nilpotent: true,
            criterion: Criterion::Zero,
            witness: None,
            probe: None,
        });
    }
    if !v.parity().is_odd() {
        return Ok(NilpotencyReport {
            nilpotent: false,
            criterion: Criterion::Parity,
            witness: None,
            probe: None,
        });
    }
    let witness = (0..ctx.fields().len()).find_map(|a| {
        let w = lie(v, &v.characteristic(a).to_form());
        (!w.is_zero()).then_some((a, w))
    });
    let probe = probe(ctx, v);
    let criterion = if witness.is_none() && probe.counterexample.is_some() {
        Criterion::Probe
    } else {
        Criterion::Characteristics
    };
    Ok(NilpotencyReport {
        nilpotent: witness.is_none() && probe.counterexample.is_none(),
        criterion,
        witness,
        probe: Some(probe),
    })
}

fn probe(ctx: &ModelContext, v: &Derivation) -> ProbeOutcome {
    let mut gen = RandomForms::new(PROBE_SEED, Bounds::default());
    let n = ctx.base_dim();
    let mut counterexample = None;
    for _ in 0..PROBE_SAMPLES {
        let m = gen.rng_range(0, n);
        let phi = gen.form(ctx, 0, m);
        let twice = lie(v, &lie(v, &phi));
        if !twice.is_zero() {
            counterexample = Some((phi, twice));
            break;
        }
    }
    ProbeOutcome {
        seed: PROBE_SEED,
        samples: PROBE_SAMPLES,
        counterexample,
    }
}

/// `s_υ φ = (−1)^{|φ|} L_υ φ` on horizontal forms.
pub fn s_operator(v: &Derivation, phi: &GradedForm) -> Result<GradedForm, BrstError> {
    if !v.is_vertical() || !v.parity().is_odd() && !v.is_zero() {
        return Err(BrstError::NotOddVertical);
    }
    if !phi.is_horizontal() {
        return Err(BrstError::NotHorizontal);
    }
    let mut out = GradedForm::zero();
    for ((_, m), piece) in phi.bidegree_split() {
        let image = lie(v, &piece);
        out += if m % 2 == 1 { -image } else { image };
    }
    Ok(out)
}
