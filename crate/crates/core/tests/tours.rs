use endspace_core::quotient::QuotientChain;
use endspace_core::sources::{Builtin, Source};
use endspace_core::tours::{check_euler, lift_euler, span_walk, verify_thread, DEFAULT_TOUR_LIMIT};

fn lifts(s: &dyn Source, depth: usize) {
    let t = lift_euler(s, depth, 0, DEFAULT_TOUR_LIMIT).unwrap();
    assert!(t.complete, "{} stopped at level {}", s.name(), t.last_level());
    let chain = QuotientChain::build(s, depth).unwrap();
    assert!(verify_thread(&chain, &t).ok);
}

#[test]
fn symmetric_ray_lifts_to_twelve() {
    lifts(&Builtin::SymmetricRay, 12);
}

#[test]
fn necklace_lifts_to_twelve() {
    lifts(&Builtin::Necklace(3), 12);
}

#[test]
fn spanning_walks_to_ten() {
    for s in [Builtin::SymmetricRay, Builtin::Necklace(3)] {
        let t = span_walk(&s, 10).unwrap();
        let chain = QuotientChain::build(&s, 10).unwrap();
        assert!(verify_thread(&chain, &t).ok, "{}", s.name());
        assert_eq!(t.walks.len(), 10);
    }
}

#[test]
fn passing_builtins_are_solid_at_every_level() {
    for s in [Builtin::SymmetricRay, Builtin::Necklace(3), Builtin::Necklace(2)] {
        let c = check_euler(&s, 12).unwrap();
        assert!(c.is_ok(), "{}", s.name());
        assert!(c.non_solid_levels.is_empty());
    }
}

#[test]
fn zchain_degrees_balance_but_a_cut_does_not() {
    let s = Builtin::ZChain;
    for v in 0..20 {
        let d = s.degree(v).value;
        assert_eq!((d.in_degree.finite(), d.out_degree.finite()), (Some(1), Some(1)));
    }
    assert!(!check_euler(&s, 20).unwrap().is_ok());
}
