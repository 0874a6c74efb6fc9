use std::sync::Arc;

use proptest::prelude::*;

use eulerch::aggmap::compose;
use eulerch::build::{polygon, polygon_aggregation, polygon_coarsening, simplex_sphere, subdivision_tower};
use eulerch::cellx::chain_sphere;
use eulerch::euler::{euler_cochain, euler_cochain_of_cells, euler_local, formal_euler, hodge_sdrs, verify_cocycle};
use eulerch::hodge::{build_sdr, pseudo_random_weights, verify_sdr, weighted_sdr};
use eulerch::locsys::{to_chain_system, CellLocalSystem, SimplicialBase};

fn chain_sizes() -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    prop::collection::vec(1usize..4, 2..4).prop_flat_map(|mid| {
        let m1 = mid.iter().sum::<usize>();
        (Just(mid), prop::collection::vec(1usize..3, m1))
    })
}

#[test]
fn coarsenings_compose() {
    let a = compose(&polygon_coarsening(2, 6), &polygon_coarsening(2, 3)).unwrap();
    assert_eq!(a, polygon_coarsening(4, 3));
}

#[test]
fn constant_systems_have_zero_cochains() {
    for s in [polygon(5), simplex_sphere(2)] {
        let cs = CellLocalSystem::constant(SimplicialBase::simplex(2), Arc::new(s));
        assert!(euler_cochain_of_cells(&cs).unwrap().is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn local_value_matches_the_tower_system((mid, inner) in chain_sizes()) {
        let chain = [polygon_aggregation(&inner), polygon_aggregation(&mid)];
        let q = euler_local(&chain).unwrap();
        let ls = to_chain_system(&CellLocalSystem::from_tower(&chain).unwrap()).unwrap();
        let sdrs = hodge_sdrs(&ls).unwrap();
        prop_assert_eq!(&q, &formal_euler(&ls, &sdrs, &[0, 1, 2]).unwrap());
        let rev = ls.reversed();
        let sdrs = hodge_sdrs(&rev).unwrap();
        prop_assert_eq!(-q, formal_euler(&rev, &sdrs, &[0, 1, 2]).unwrap());
    }

    #[test]
    fn weighted_retractions_satisfy_the_identities(m in 2usize..9, seed in any::<u64>()) {
        let s = polygon(m);
        let w = pseudo_random_weights(&chain_sphere(&s), seed);
        let r = verify_sdr(&weighted_sdr(&s, &w));
        prop_assert!(r.is_ok(), "{:?}", r.reason());
        prop_assert!(verify_sdr(&build_sdr(&s).unwrap()).is_ok());
    }

    #[test]
    fn stellar_towers_give_cocycles(picks in prop::collection::vec(any::<usize>(), 3)) {
        let mut it = picks.into_iter();
        let tower = subdivision_tower(Arc::new(polygon(3)), 3, |m| it.next().unwrap() % m);
        let cs = CellLocalSystem::from_tower(&tower).unwrap();
        let t = euler_cochain(&to_chain_system(&cs).unwrap()).unwrap();
        prop_assert!(verify_cocycle(&t).is_ok());
        prop_assert_eq!(euler_cochain(&to_chain_system(&cs).unwrap().reversed()).unwrap(), t.negated());
    }
}
