mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use u35_core::context::{U35Context, GROUP_ORDER};
use u35_core::hsgraph::{
    automorphism_group, automorphism_group_order, build_hs_graph, derived_subgroup,
    fixed_subgraph, verify_srg,
};
use u35_core::permcore::cache::{decode, encode};
use u35_core::permcore::{enumerate_group, CacheError, EnumeratedGroup, Permutation};
use u35_core::shapes::CLOSURE_CAP;

use common::ctx;

#[test]
fn orders_from_the_graph() {
    let ctx = ctx();
    assert_eq!(ctx.aut_order(), 252_000);
    assert_eq!(ctx.group().order(), GROUP_ORDER);
    assert_eq!(automorphism_group_order(ctx.graph()), 252_000);
    // Index 2: every element of Aut squares into the derived subgroup.
    let aut = enumerate_group(&automorphism_group(ctx.graph()).unwrap(), 252_000).unwrap();
    assert!(aut.generators().iter().all(|g| ctx.group().contains(&g.then(g))));
    assert!(aut.generators().iter().any(|g| !ctx.group().contains(g)));
}

#[test]
fn derived_subgroup_is_perfect() {
    let g = ctx().group();
    let d = derived_subgroup(g).unwrap();
    assert_eq!(d.order(), g.order());
}

#[test]
fn element_order_census() {
    let g = ctx().group();
    let count = |o: u64| g.elements().iter().filter(|p| p.order() == o).count();
    assert_eq!(count(1), 1);
    assert_eq!(count(2), 525);
    assert_eq!(count(3), 3500);
    let total: usize = [1, 2, 3, 4, 5, 6, 7, 8, 10].iter().map(|&o| count(o)).sum();
    assert_eq!(total as u64, GROUP_ORDER);
}

#[test]
fn class_times_centralizer_is_the_group_order() {
    let ctx = ctx();
    let g = ctx.group();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..6 {
        let x = g.element(rng.gen_range(0..g.order() as usize));
        let class = g.conjugacy_class(x).unwrap().len() as u64;
        let cent = g.centralizer(x).unwrap().order();
        assert_eq!(class * cent, GROUP_ORDER, "{:?}", x.cycle_type());
    }
}

#[test]
fn order_three_centralizers_and_normalizers() {
    let ctx = ctx();
    let g = ctx.group();
    for rho in [0, 999, 1749] {
        let r = ctx.subgroup_generator(rho);
        assert_eq!(g.centralizer(r).unwrap().order(), 36);
        assert_eq!(g.normalizer(&ctx.subgroup_handle(rho)).unwrap().order(), 72);
        assert_eq!(g.conjugacy_class(r).unwrap().len(), 3500);
    }
}

#[test]
fn sylow_three_normalizer_has_index_1750() {
    let ctx = ctx();
    let g = ctx.group();
    let r = *ctx.subgroup_generator(0);
    let s = (1..ctx.subgroup_count())
        .map(|i| *ctx.subgroup_generator(i))
        .find(|s| s.commutes_with(&r))
        .unwrap();
    let sylow = g.subgroup_closure(&[r, s], CLOSURE_CAP).unwrap();
    assert_eq!(sylow.order(), 9);
    let n = g.normalizer(&sylow).unwrap();
    assert_eq!(GROUP_ORDER / n.order(), 1750);
}

#[test]
fn capped_and_exact_closures_agree() {
    let ctx = ctx();
    let g = ctx.group();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..10 {
        let t = *ctx.involution(rng.gen_range(0..525));
        let r = *ctx.subgroup_generator(rng.gen_range(0..1750));
        let capped = g.subgroup_closure(&[t, r], CLOSURE_CAP).unwrap();
        let exact = g.subgroup_closure_exact(&[t, r]).unwrap();
        if capped.is_whole_group_sentinel() {
            assert_eq!(exact.order(), GROUP_ORDER);
        } else {
            assert_eq!(capped.order(), exact.order());
        }
    }
}

#[test]
fn involution_fixed_subgraphs_are_petersen() {
    let ctx = ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..25 {
        let t = ctx.involution(rng.gen_range(0..525));
        let (sub, fixed) = fixed_subgraph(t, ctx.graph());
        assert_eq!(fixed.len(), 10);
        assert!(verify_srg(&sub, 10, 3, 0, 1).passed());
        let c = ctx.group().centralizer(t).unwrap();
        assert_eq!(c.order(), 240);
        assert_eq!(c.involutions().len(), 21);
    }
}

#[test]
fn vertex_stabilizer_is_a7() {
    let ctx = ctx();
    let h = ctx.vertex_stabilizer(0).unwrap();
    assert_eq!(h.order(), 2520);
}

#[test]
fn context_from_stored_elements() {
    let ctx = ctx();
    let g = ctx.group();
    let rebuilt = EnumeratedGroup::from_parts(
        decode(&encode(g.elements())).unwrap(),
        decode(&encode(g.generators())).unwrap(),
    )
    .unwrap();
    let again = U35Context::from_group(build_hs_graph().unwrap(), 252_000, rebuilt).unwrap();
    assert_eq!(again.involutions(), ctx.involutions());
    assert_eq!(again.subgroup_count(), ctx.subgroup_count());
}

#[test]
fn cache_corruption_is_a_checksum_error() {
    let g = ctx().group();
    let mut bytes = encode(&g.generators()[..1]);
    let n = bytes.len();
    bytes[n - 40] ^= 0x10;
    assert!(matches!(decode(&bytes), Err(CacheError::Checksum)));
}

#[test]
fn wrong_group_is_refused() {
    let g = enumerate_group(&[*ctx().involution(0)], 2).unwrap();
    assert!(U35Context::from_group(build_hs_graph().unwrap(), 252_000, g).is_err());
}

fn group_element() -> impl Strategy<Value = Permutation> {
    (0..GROUP_ORDER as usize).prop_map(|i| *ctx().group().element(i))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_is_closed_and_preserves_the_graph(a in group_element(), b in group_element()) {
        let g = ctx().group();
        prop_assert!(g.contains(&a.then(&b)));
        prop_assert!(g.contains(&a.inverse()));
        prop_assert!(ctx().graph().preserves(&a));
    }

    #[test]
    fn conjugation_permutes_the_index_tables(g in group_element(), i in 0usize..525, s in 0usize..1750) {
        let ctx = ctx();
        let j = ctx.conjugate_involution(i, &g);
        prop_assert_eq!(*ctx.involution(j), ctx.involution(i).conjugate_by(&g));
        let k = ctx.conjugate_subgroup(s, &g);
        let image = ctx.subgroup_generator(s).conjugate_by(&g);
        prop_assert_eq!(ctx.subgroup_of(&image), Some(k));
    }
}
