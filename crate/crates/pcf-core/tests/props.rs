//! Seed-driven property tests over randomly generated terms and
//! strategies.

use proptest::prelude::*;

use pcf_core::arena::Arena;
use pcf_core::denote::Denoter;
use pcf_core::generate::{random_canonical_term, random_y_term, rng_from_seed};
use pcf_core::parse::{parse_term, parse_type};
use pcf_core::strategy::Strategy;
use pcf_core::syntax::{substitute, Term, Ty};

fn pool() -> Vec<Ty> {
    vec![
        parse_type("nat -> nat").unwrap(),
        parse_type("nat -> nat -> nat").unwrap(),
        parse_type("(nat -> nat) -> nat").unwrap(),
    ]
}

fn canonical(point: &Strategy) -> Strategy {
    let root = &point.cod().roots[0];
    let dom = Arena::product(
        root.children.iter().map(|c| Arena { roots: vec![c.clone()] }),
    );
    point.resplit(dom, Arena::flat(root.answers)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Printing then parsing restores the exact AST.
    #[test]
    fn print_parse_round_trip(seed: u64, which in 0usize..3) {
        let mut rng = rng_from_seed(seed);
        let m = random_canonical_term(&mut rng, &pool()[which], 3, 3);
        let back = parse_term(&m.to_string()).unwrap();
        prop_assert_eq!(back, m);
    }

    /// Finite fixpoint stages form an increasing chain of strategies.
    #[test]
    fn unrolling_chain_is_monotone(seed: u64, k in 0u32..4) {
        let mut rng = rng_from_seed(seed);
        let m = random_y_term(&mut rng, 3);
        let lo = Denoter::new(3, k).denote_closed(&m).unwrap();
        let hi = Denoter::new(3, k + 1).denote_closed(&m).unwrap();
        prop_assert!(lo.included_in(&hi));
    }

    /// Fixpoint-free terms denote the same strategy at every unrolling
    /// depth.
    #[test]
    fn fixpoint_free_denotations_ignore_unrolling(seed: u64, which in 0usize..3) {
        let mut rng = rng_from_seed(seed);
        let m = random_canonical_term(&mut rng, &pool()[which], 3, 3);
        let a = Denoter::new(3, 0).denote_closed(&m).unwrap();
        let b = Denoter::new(3, 7).denote_closed(&m).unwrap();
        prop_assert_eq!(a, b);
    }

    /// Beta reduction is invisible to denotation: `(\x. M) N` and
    /// `M[N/x]` denote the same strategy.
    #[test]
    fn substitution_instance(seed: u64, which in 0usize..3, n in 0u32..3) {
        let mut rng = rng_from_seed(seed);
        let target = Ty::arrow(Ty::Nat, pool()[which].clone());
        let f = random_canonical_term(&mut rng, &target, 3, 3);
        let (x, body) = match &f {
            Term::Lam(x, _, body) => (x.clone(), body.as_ref().clone()),
            _ => unreachable!("canonical terms at arrow type start with a binder"),
        };
        let applied = Term::app(f.clone(), Term::Num(n));
        let substituted = substitute(&body, &x, &Term::Num(n));
        let lhs = canonical(&Denoter::new(3, 4).denote_closed(&applied).unwrap());
        let rhs = canonical(&Denoter::new(3, 4).denote_closed(&substituted).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}
