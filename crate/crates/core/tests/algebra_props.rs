use gradjet::calculus::{d, d_h};
use gradjet::jetalg::{GradedForm, ModelContext, Parity};
use gradjet::random::{Bounds, RandomForms};
use proptest::prelude::*;

fn ctx() -> ModelContext {
    ModelContext::build(&["t", "x"], &[("u", Parity::Even), ("c", Parity::Odd)])
}

fn small() -> Bounds {
    Bounds {
        max_jet_order: 1,
        max_degree: 2,
        max_base_degree: 1,
        max_terms: 2,
    }
}

/// A random form of one parity and one total degree.
fn homogeneous(gen: &mut RandomForms, ctx: &ModelContext, odd: bool) -> (GradedForm, usize) {
    let (k, m) = (gen.rng_range(0, 1), gen.rng_range(0, 1));
    let (even_part, odd_part) = gen.form(ctx, k, m).parity_split();
    (if odd { odd_part } else { even_part }, k + m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wedge_is_associative(seed in any::<u64>()) {
        let ctx = ctx();
        let mut gen = RandomForms::new(seed, small());
        let a = gen.form(&ctx, 1, 0);
        let b = gen.form(&ctx, 0, 1);
        let c = gen.form(&ctx, 1, 1);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn wedge_is_graded_commutative(seed in any::<u64>(), pa in any::<bool>(), pb in any::<bool>()) {
        let ctx = ctx();
        let mut gen = RandomForms::new(seed, small());
        let (a, da) = homogeneous(&mut gen, &ctx, pa);
        let (b, db) = homogeneous(&mut gen, &ctx, pb);
        let negative = ((da * db) % 2 == 1) ^ (pa && pb);
        let ba = &b * &a;
        prop_assert_eq!(&a * &b, if negative { -&ba } else { ba });
    }

    #[test]
    fn differentials_are_graded_derivations(seed in any::<u64>()) {
        let ctx = ctx();
        let mut gen = RandomForms::new(seed, small());
        let (a, da) = homogeneous(&mut gen, &ctx, seed % 2 == 1);
        let b = gen.form(&ctx, 1, 0);
        for op in [d as fn(&GradedForm) -> GradedForm, d_h] {
            let left = &op(&a) * &b;
            let right = &a * &op(&b);
            let expected = if da % 2 == 1 { &left - &right } else { &left + &right };
            prop_assert_eq!(op(&(&a * &b)), expected);
        }
    }
}
