mod common;

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use u35_core::exact::{int, rat, rational_rank, AffineScalar, ExactScalar};
use u35_core::gram::*;
use u35_core::nortsak::build_all_algebras;
use u35_core::shapes::{
    classify_pair_rho_sigma, classify_pair_t_rho, containment_facts, solve_shape, suborbit_table,
};

use common::ctx;

struct Fixture {
    pairs: PairClassification,
    gram: GramMatrix,
}

fn fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let ctx = ctx();
        let table = suborbit_table(ctx).unwrap();
        let facts = containment_facts(&build_all_algebras().unwrap()).unwrap();
        let shape = solve_shape(&table, &facts).unwrap();
        let pairs = PairClassification::compute(ctx, 0).unwrap();
        let gram = assemble_gram(ctx, &pairs, &shape, true).unwrap();
        Fixture { pairs, gram }
    })
}

fn pasechnik() -> &'static PasechnikSet {
    static P: OnceLock<PasechnikSet> = OnceLock::new();
    P.get_or_init(|| pasechnik_vectors(ctx()).unwrap())
}

fn c(n: i64, d: i64) -> AffineScalar {
    AffineScalar::constant(rat(n, d))
}

fn small(entries: &[&[i64]]) -> GramMatrix {
    let n = entries.len();
    let axes = (0..n).map(AxisId::Majorana).collect();
    let rows: Vec<Vec<AffineScalar>> = entries
        .iter()
        .map(|r| r.iter().map(|&v| c(v, 1)).collect())
        .collect();
    GramMatrix::from_entries(axes, &rows)
}

#[test]
fn dimensions_and_unknown_support() {
    let m = &fixture().gram;
    assert_eq!(m.dim(), 2275);
    assert!(m.is_symmetric());
    assert!(m.has_unknown());
    // 1750 subgroups, each generating the whole group with 432 others.
    assert_eq!(m.unknown_support(), 1750 * 432);
    assert_eq!(m.majorana_block().dim(), 525);
    assert!(!m.majorana_block().has_unknown());
}

#[test]
fn majorana_entries_follow_the_product_order() {
    let ctx = ctx();
    let m = &fixture().gram;
    let expected = |order: u64| match order {
        1 => rat(1, 1),
        2 => rat(1, 8),
        3 => rat(13, 256),
        4 => rat(1, 64),
        5 => rat(3, 128),
        6 => rat(5, 256),
        o => panic!("order {o}"),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..2000 {
        let i = rng.gen_range(0..525);
        let j = rng.gen_range(0..525);
        let order = ctx.involution(i).then(ctx.involution(j)).order();
        let e = m.entry_for(AxisId::Majorana(i), AxisId::Majorana(j)).unwrap();
        assert_eq!(*e, AffineScalar::constant(expected(order)), "({i},{j})");
    }
}

#[test]
fn three_a_diagonal_and_named_entries() {
    let ctx = ctx();
    let m = &fixture().gram;
    for s in [0, 17, 1749] {
        assert_eq!(*m.entry_for(AxisId::ThreeA(s), AxisId::ThreeA(s)).unwrap(), c(8, 5));
    }
    // An involution and an order-3 subgroup generating A5 pair to 1/18.
    let (t, rho) = (0..525)
        .flat_map(|t| (0..50).map(move |r| (t, r)))
        .find(|&(t, r)| {
            ctx.group()
                .subgroup_closure(&[*ctx.involution(t), *ctx.subgroup_generator(r)], 2520)
                .unwrap()
                .order()
                == 60
        })
        .expect("an A5 pair");
    assert_eq!(*m.entry_for(AxisId::Majorana(t), AxisId::ThreeA(rho)).unwrap(), c(1, 18));
}

#[test]
fn mixed_entries_match_direct_classification() {
    let ctx = ctx();
    let m = &fixture().gram;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..300 {
        let t = rng.gen_range(0..525);
        let rho = rng.gen_range(0..1750);
        let class = classify_pair_t_rho(ctx, ctx.involution(t), rho).unwrap();
        let e = m.entry_for(AxisId::Majorana(t), AxisId::ThreeA(rho)).unwrap();
        assert_eq!(*e, AffineScalar::constant(class.inner_product()));
    }
}

#[test]
fn subgroup_entries_match_direct_classification() {
    let ctx = ctx();
    let m = &fixture().gram;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..150 {
        let rho = rng.gen_range(0..1750);
        let sigma = rng.gen_range(0..1750);
        let class = classify_pair_rho_sigma(ctx, rho, sigma).unwrap();
        let e = m.entry_for(AxisId::ThreeA(rho), AxisId::ThreeA(sigma)).unwrap();
        assert_eq!(*e, class.inner_product(), "({rho},{sigma}) {class:?}");
    }
}

#[test]
fn classification_is_transported_from_the_base() {
    let ctx = ctx();
    let pairs = &fixture().pairs;
    assert_eq!(pairs.base(), 0);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let rho = rng.gen_range(0..1750);
        let g = pairs.conjugator_to_base(ctx, rho);
        assert_eq!(ctx.conjugate_subgroup(rho, g), 0);
    }
}

#[test]
fn gram_is_invariant_under_the_group() {
    let ctx = ctx();
    let m = &fixture().gram;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let order = ctx.group().order() as usize;
    for _ in 0..1000 {
        let i = rng.gen_range(0..m.dim());
        let j = rng.gen_range(0..m.dim());
        let g = ctx.group().element(rng.gen_range(0..order));
        let a = m.axes()[i].conjugate(ctx, g);
        let b = m.axes()[j].conjugate(ctx, g);
        assert_eq!(m.entry(i, j), m.entry_for(a, b).unwrap());
        assert_eq!(m.entry(i, j), m.entry(j, i));
    }
}

#[test]
fn axis_ids_round_trip() {
    for p in [0, 524, 525, 2274] {
        assert_eq!(AxisId::from_position(p).position(), p);
    }
    assert!(AxisId::from_position(524).is_majorana());
    assert!(!AxisId::from_position(525).is_majorana());
    assert_eq!(AxisId::Majorana(3).to_string(), "a3");
    assert_eq!(AxisId::ThreeA(7).to_string(), "u7");
}

#[test]
fn default_primes_are_documented_primes() {
    let trial = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
    assert_eq!(DEFAULT_PRIMES.len(), 3);
    for p in DEFAULT_PRIMES {
        assert!(trial(p) && is_prime(p));
        assert!(p > 1 << 20);
    }
    // First prime above 2^20, the 100000th prime, last prime below 2^21.
    assert!(((1 << 20)..DEFAULT_PRIMES[0]).all(|n| !trial(n)));
    assert!((DEFAULT_PRIMES[2] + 1..1 << 21).all(|n| !trial(n)));
    let count = (2..=DEFAULT_PRIMES[1]).filter(|&n| trial(n)).count();
    assert_eq!(count, 100_000);
}

#[test]
fn primality_agrees_with_trial_division() {
    let trial = |n: u64| n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d));
    for n in 0..20_000 {
        assert_eq!(is_prime(n), trial(n), "{n}");
    }
    // Carmichael numbers and a strong pseudoprime to base 2.
    for n in [561, 1105, 1729, 2047, 3_215_031_751, 4_759_123_141] {
        assert!(!is_prime(n) || trial(n));
    }
}

#[test]
fn invalid_primes_are_rejected() {
    let m = small(&[&[1, 0], &[0, 1]]);
    for p in [0, 1, 2, 3, 4, 5, 1_048_575] {
        assert!(matches!(rank_mod_p(&m, None, p), Err(GramError::InvalidPrime(_))), "{p}");
    }
    assert!(rank_mod_p_dense(&[1, 0, 0, 1], 2, 2, 9).is_err());
}

#[test]
fn primes_dividing_a_denominator_are_rejected() {
    let axes = vec![AxisId::Majorana(0)];
    let m = GramMatrix::from_entries(axes, &[vec![c(1, 7)]]);
    assert!(rank_mod_p(&m, None, 7).is_err());
    assert_eq!(rank_mod_p(&m, None, 11).unwrap(), 1);
}

#[test]
fn trivial_ranks() {
    let zero = small(&[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]]);
    let id = small(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
    for p in DEFAULT_PRIMES {
        assert_eq!(rank_mod_p(&zero, None, p).unwrap(), 0);
        assert_eq!(rank_mod_p(&id, None, p).unwrap(), 3);
    }
    assert_eq!(rank_exact(&zero, None).unwrap(), 0);
    assert_eq!(rank_exact(&id, None).unwrap(), 3);
    let s = symmetric_exact(&id, None).unwrap();
    assert!(s.positive_definite());
}

#[test]
fn symmetric_exact_signs() {
    let pd = symmetric_exact(&small(&[&[2, 1], &[1, 2]]), None).unwrap();
    assert_eq!(pd.rank, 2);
    assert!(pd.positive_definite());
    let indefinite = symmetric_exact(&small(&[&[1, 2], &[2, 1]]), None).unwrap();
    assert_eq!(indefinite.rank, 2);
    assert!(!indefinite.positive_definite());
    // Zero diagonal forces the general elimination.
    let hyperbolic = symmetric_exact(&small(&[&[0, 1], &[1, 0]]), None).unwrap();
    assert_eq!(hyperbolic.rank, 2);
    assert!(!hyperbolic.positive_definite());
    let singular = symmetric_exact(&small(&[&[1, 1], &[1, 1]]), None).unwrap();
    assert_eq!(singular.rank, 1);
    assert!(!singular.positive_definite());
}

#[test]
fn modular_rank_of_a_known_singular_matrix() {
    // Third row is the sum of the first two; the leading 2×2 minor is 3.
    let m = small(&[&[1, 2, 3], &[2, 7, 9], &[3, 9, 12]]);
    assert_eq!(rank_exact(&m, None).unwrap(), 2);
    for p in DEFAULT_PRIMES {
        assert_eq!(rank_mod_p(&m, None, p).unwrap(), 2);
    }
    assert_eq!(rank_mod_p(&m, None, 7).unwrap(), 2);
}

#[test]
fn large_primes_use_the_wide_path() {
    let p = 4_294_967_311; // above 2^32
    assert!(is_prime(p));
    let m = small(&[&[1, 2, 3], &[2, 7, 9], &[3, 9, 12]]);
    assert_eq!(rank_mod_p(&m, None, p).unwrap(), 2);
}

fn integer_matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
        (Just(r), Just(c), proptest::collection::vec(-3i64..=3, r * c))
    })
}

proptest! {
    #[test]
    fn modular_rank_bounds_and_matches_exact((r, c, a) in integer_matrix()) {
        let big: Vec<Vec<BigInt>> = a.chunks(c).map(|row| row.iter().map(|&v| BigInt::from(v)).collect()).collect();
        let rational: Vec<Vec<ExactScalar>> = a.chunks(c).map(|row| row.iter().map(|&v| int(v)).collect()).collect();
        let exact = bareiss_rank(&big);
        prop_assert_eq!(exact, rational_rank(&rational));
        for p in [7u64, 1_048_583, 2_097_143, 4_294_967_311] {
            let res: Vec<u64> = a.iter().map(|&v| v.rem_euclid(p as i64) as u64).collect();
            let rp = rank_mod_p_dense(&res, r, c, p).unwrap();
            prop_assert!(rp <= exact);
            if p > 1 << 20 {
                // Entries are tiny, so no large prime divides a nonzero minor.
                prop_assert_eq!(rp, exact);
            }
        }
    }

    #[test]
    fn echelon_contains_its_rows((r, c, a) in integer_matrix()) {
        let p = 1_299_709u64;
        let res: Vec<u64> = a.iter().map(|&v| v.rem_euclid(p as i64) as u64).collect();
        let e = ModpEchelon::of_dense(res.clone(), r, c, p);
        prop_assert_eq!(e.rank(), rank_mod_p_dense(&res, r, c, p).unwrap());
        for row in a.chunks(c) {
            let v: Vec<i128> = row.iter().map(|&x| x as i128).collect();
            prop_assert!(e.contains(&v));
        }
    }
}

#[test]
fn majorana_block_mod_p_rank() {
    let maj = fixture().gram.majorana_block();
    let r = rank_consensus(&maj, None, &DEFAULT_PRIMES).unwrap();
    assert_eq!(r.agreed(), Some(525));
}

#[test]
fn pasechnik_vectors_have_thirteen_terms() {
    let set = pasechnik();
    assert_eq!(set.vectors.len(), 1750);
    for v in set.vectors.iter().take(50) {
        assert_eq!(v.len(), 13);
        let fours = v.iter().filter(|(a, k)| !a.is_majorana() && **k == int(45)).count();
        let nines = v.iter().filter(|(a, k)| a.is_majorana() && **k == int(-32)).count();
        assert_eq!((fours, nines), (4, 9));
    }
}

#[test]
fn pasechnik_norm_expansion() {
    let m = &fixture().gram;
    let set = pasechnik();
    let (subs, invs) = (&set.subgroups[0], &set.involutions[0]);
    let sum = |xs: &[AxisId], ys: &[AxisId]| -> ExactScalar {
        let mut s = ExactScalar::zero();
        for &a in xs {
            for &b in ys {
                s += m.entry_for(a, b).unwrap().eval(&ExactScalar::zero());
            }
        }
        s
    };
    let u: Vec<AxisId> = subs.iter().map(|&s| AxisId::ThreeA(s)).collect();
    let a: Vec<AxisId> = invs.iter().map(|&t| AxisId::Majorana(t)).collect();
    // 45²·(4·8/5), 2·45·32·(36·1/4), 32²·(9 + 72·13/256)
    assert_eq!(sum(&u, &u) * int(45 * 45), int(12_960));
    assert_eq!(sum(&u, &a) * int(2 * 45 * 32), int(25_920));
    assert_eq!(sum(&a, &a) * int(32 * 32), int(12_960));
    let norm = m.pair(&set.vectors[0], &set.vectors[0]).unwrap();
    assert!(norm.is_zero());
}

#[test]
fn each_subgroup_has_twelve_pasechnik_partners() {
    let set = pasechnik();
    let mut partners = vec![std::collections::BTreeSet::new(); 1750];
    for four in &set.subgroups {
        for &r in four {
            partners[r].extend(four.iter().copied().filter(|&s| s != r));
        }
    }
    assert!(partners.iter().all(|p| p.len() == 12));
    // The partners are exactly the commuting subgroups.
    let ctx = ctx();
    let commuting: Vec<usize> = (1..1750)
        .filter(|&s| ctx.subgroup_generator(0).commutes_with(ctx.subgroup_generator(s)))
        .collect();
    assert_eq!(commuting, partners[0].iter().copied().collect::<Vec<_>>());
}

#[test]
fn relations_determine_x() {
    let m = &fixture().gram;
    let set = pasechnik();
    assert_eq!(solve_x(m, &set.vectors).unwrap(), rat(4, 81));
    let check = check_relations(m, &set.vectors[..100], &rat(4, 81)).unwrap();
    assert!(check.passed());
    assert_eq!(check.columns, 2275);
    let wrong = check_relations(m, &set.vectors[..100], &rat(1, 20)).unwrap();
    assert!(!wrong.passed());
}

#[test]
fn solve_x_on_synthetic_systems() {
    let axes = vec![AxisId::ThreeA(0), AxisId::ThreeA(1)];
    let x = AffineScalar::unknown();
    let mut two_x = AffineScalar::zero();
    two_x.add_assign_scaled(&x, &int(2));
    let rel = RelationVector::from_terms([(AxisId::ThreeA(0), int(1)), (AxisId::ThreeA(1), int(-1))]);

    // (u0 - u1, u0 - u1) = 1 - 2x + 1 and (u0 - u1, u0) = 1 - x: x = 1.
    let m = GramMatrix::from_entries(axes.clone(), &[vec![c(1, 1), x.clone()], vec![x.clone(), c(1, 1)]]);
    assert_eq!(solve_x(&m, std::slice::from_ref(&rel)).unwrap(), int(1));

    // No x anywhere and a nonzero pairing.
    let m = GramMatrix::from_entries(axes.clone(), &[vec![c(1, 1), c(0, 1)], vec![c(0, 1), c(1, 1)]]);
    assert!(matches!(solve_x(&m, std::slice::from_ref(&rel)), Err(GramError::Inconsistent)));

    // Every equation is 0 = 0.
    let m = GramMatrix::from_entries(axes.clone(), &[vec![x.clone(), x.clone()], vec![x.clone(), x.clone()]]);
    assert!(matches!(solve_x(&m, std::slice::from_ref(&rel)), Err(GramError::Unconstrained)));

    // Two equations with different roots: 1 - x = 0 and 1 - 2x = 0.
    let axes3 = vec![AxisId::ThreeA(0), AxisId::ThreeA(1), AxisId::ThreeA(2)];
    let m = GramMatrix::from_entries(
        axes3,
        &[
            vec![c(1, 1), x.clone(), two_x.clone()],
            vec![x.clone(), c(0, 1), c(0, 1)],
            vec![two_x, c(0, 1), c(0, 1)],
        ],
    );
    let r = RelationVector::basis(AxisId::ThreeA(0));
    assert!(matches!(solve_x(&m, &[r]), Err(GramError::Inconsistent)));
}

#[test]
fn export_format() {
    let axes = vec![AxisId::Majorana(0), AxisId::ThreeA(0)];
    let x = AffineScalar::unknown();
    let m = GramMatrix::from_entries(axes, &[vec![c(1, 1), x.clone()], vec![x, c(0, 1)]]);
    let mut fixed = Vec::new();
    let manifest = export_matrix(&m, Some(&rat(4, 81)), &mut fixed).unwrap();
    assert_eq!(String::from_utf8(fixed).unwrap(), "0 0 103680\n0 1 5120\n");
    assert_eq!(manifest.entries, 2);
    assert_eq!(manifest.scaling_factor, 103_680);
    assert_eq!(manifest.x_status, "fixed 4/81");
    let mut symbolic = Vec::new();
    let manifest = export_matrix(&m, None, &mut symbolic).unwrap();
    assert_eq!(String::from_utf8(symbolic).unwrap(), "0 0 103680 0\n0 1 0 103680\n");
    assert_eq!(manifest.format, "i j constant x_coeff");
}

#[test]
fn export_rejects_values_off_the_scale() {
    let m = GramMatrix::from_entries(vec![AxisId::Majorana(0)], &[vec![c(1, 7)]]);
    assert!(export_matrix(&m, None, Vec::new()).is_err());
}

#[test]
fn gamma_minus_structure_and_linking() {
    let ctx = ctx();
    let dec = gamma_minus_orbits(ctx, &fixture().pairs, 0).unwrap();
    assert_eq!(dec.normalizer_order, 72);
    assert_eq!(dec.gamma_minus.len(), 432);
    assert!(dec.orbits.iter().all(|o| o.len() == 72));
    assert_eq!(dec.common_normalizing_pairs, 0);
    assert_eq!(dec.indicator(2).len(), 72);
    for sigma in dec.representatives() {
        let link = find_s3_s4_involution(ctx, 0, sigma).unwrap();
        let t = ctx.involution(link.t);
        let r = ctx.subgroup_generator(0);
        assert_eq!(r.conjugate_by(t), r.inverse());
        assert!(link.count >= 1);
        let report = resurrection_inner_check(ctx, &fixture().gram, 0, sigma, link.t).unwrap();
        assert_eq!(report.root_value, rat(4, 81));
        assert_eq!(report.root, "4/81");
        let l = &report.labelling;
        let mut us = vec![l.u_i, l.u_j, l.u_k, l.u_l];
        us.sort_unstable();
        us.dedup();
        assert_eq!(us.len(), 4);
    }
}

#[test]
fn f_combinations_sum_to_zero() {
    let v = f_combinations([(0, 1), (2, 3), (4, 5)]);
    assert_eq!(v[0], [1, 1, -1, -1, 0, 0]);
    assert_eq!(v[1], [-1, -1, 0, 0, 1, 1]);
    assert_eq!(v[2], [0, 0, 1, 1, -1, -1]);
    for i in 0..6 {
        assert_eq!(v.iter().map(|r| r[i]).sum::<i64>(), 0);
    }
}

#[test]
fn complement_of_v_plus() {
    let ctx = ctx();
    let f = fixture();
    let dec = gamma_minus_orbits(ctx, &f.pairs, 0).unwrap();
    let v = v_decomposition(&f.gram, &rat(4, 81), &dec, &DEFAULT_PRIMES[..2]).unwrap();
    assert_eq!(v.v_plus_size, 2275 - 432);
    assert_eq!(v.v_plus_rank.agreed(), Some(796));
    assert_eq!(v.full_rank.agreed(), Some(798));
    assert!(v.complement.dimension.iter().all(|&(_, d)| d == 2));
    // Six level sets of 72, each orbit meeting three of them in 24 points.
    assert_eq!(v.complement.classes.len(), 6);
    assert!(v.complement.classes.iter().all(|c| c.len() == 72));
    assert!(v.complement.classes_agree);
    for row in &v.complement.orbit_class_intersections {
        let mut r = row.clone();
        r.sort_unstable();
        assert_eq!(r, [0, 0, 0, 24, 24, 24]);
    }
    assert!(v.complement.orbit_sums_vanish);
    assert!(v.complement.orbit_span_intersection.iter().all(|&(_, d)| d == 0));
    assert!(v.valid_pairings.is_empty());
    assert!(v.realized_pairings.is_empty());
    assert!(matches!(v.require_pairing(), Err(GramError::NoValidPairing)));
}

#[test]
fn restriction_keeps_entries() {
    let m = &fixture().gram;
    let idx = [3, 600, 1200];
    let r = m.restrict(&idx);
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            assert_eq!(r.entry(a, b), m.entry(i, j));
        }
    }
    let one = BigInt::one();
    assert!(m.majorana_block().common_denominator(None).unwrap() > one);
}
