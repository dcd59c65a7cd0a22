use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use acx::canon::can_ac;
use acx::ordering::{AcRpo, OrderResult, OrderingMode};
use acx::problem::{parse_problem, render_problem};
use acx::prover::{context_for, prove, ProveOptions};
use acx::random::{ac_shuffle, random_problem, random_term, RandomParams};

fn params() -> impl Strategy<Value = RandomParams> {
    (2usize..=6, 1usize..=2, 1usize..=4, 1usize..=3).prop_map(|(c, a, h, d)| RandomParams {
        max_constants: c,
        max_ac_symbols: a,
        max_hypotheses: h,
        max_depth: d,
    })
}

proptest! {
    #[test]
    fn rendered_problems_parse_back(seed in any::<u64>(), params in params()) {
        let p = random_problem(&mut ChaCha8Rng::seed_from_u64(seed), &params);
        let text = render_problem(&p);
        prop_assert_eq!(parse_problem(&text).unwrap(), p);
    }

    #[test]
    fn can_ac_ignores_arrangement(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_problem(&mut rng, &RandomParams::default());
        let t = random_term(&mut rng, &p, 4);
        let s = ac_shuffle(&mut rng, t);
        prop_assert_eq!(can_ac(s), can_ac(t));
        prop_assert_eq!(can_ac(can_ac(t)), can_ac(t));
    }

    #[test]
    fn canonization_does_not_increase(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_problem(&mut rng, &RandomParams::default());
        let mut ctx = context_for(&p, OrderingMode::Direct, None);
        let t = random_term(&mut rng, &p, 4);
        let c = ctx.global_can(t).unwrap();
        let r = AcRpo::compare(c, t, ctx.precedence());
        prop_assert!(matches!(r, OrderResult::Less | OrderResult::Equivalent), "{} => {} {:?}", t, c, r);
    }

    #[test]
    fn hypotheses_are_valid_goals(seed in any::<u64>()) {
        let mut p = random_problem(&mut ChaCha8Rng::seed_from_u64(seed), &RandomParams::default());
        p.goals = p.hypotheses.clone();
        for mode in [OrderingMode::Abstracted, OrderingMode::Direct] {
            let r = prove(&p, &ProveOptions { mode, ..Default::default() }).unwrap();
            prop_assert!(r.verdict.is_valid());
        }
    }
}
