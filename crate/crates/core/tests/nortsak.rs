use num_traits::Zero;
use proptest::prelude::*;
use u35_core::exact::{int, parse_rational, rat, ExactScalar, FormalVector};
use u35_core::nortsak::*;

fn alg(tag: &str) -> AlgebraSpec {
    build_algebra(tag.parse().unwrap()).unwrap()
}

/// "1/8:a0 -1/8:a_r" -> formal vector.
fn vector(terms: &str) -> FormalVector<String> {
    FormalVector::from_terms(terms.split_whitespace().map(|t| {
        let (c, l) = t.split_once(':').unwrap();
        (l.to_string(), parse_rational(c).unwrap())
    }))
}

fn is_eigenvector(a: &AlgebraSpec, axis: &str, ev: &str, v: &str) -> bool {
    let c = a.coords(&vector(v)).unwrap();
    let lambda = parse_rational(ev).unwrap();
    let prod = a.multiply(&a.unit(axis).unwrap(), &c);
    prod == c.iter().map(|x| x * &lambda).collect::<Vec<_>>()
}

#[test]
fn dimensions() {
    for (tag, dim) in [("2A", 3), ("2B", 2), ("3A", 4), ("3C", 3), ("4A", 5), ("4B", 5), ("5A", 6), ("6A", 8)] {
        assert_eq!(alg(tag).dim(), dim, "{tag}");
    }
}

#[test]
fn stated_norms() {
    assert_eq!(alg("3A").inner_of("u_r", "u_r").unwrap(), rat(8, 5));
    let b = alg("2B");
    assert!(b.product_of("a0", "a1").unwrap().is_zero());
    assert!(b.inner_of("a0", "a1").unwrap().is_zero());
    assert_eq!(alg("5A").inner_of("w_r", "w_r").unwrap(), rat(875, 524288));
}

#[test]
fn tabulated_products() {
    let cases = [
        ("2A", "a0", "a1", "1/8:a0 1/8:a1 -1/8:a_r"),
        ("2A", "a0", "a_r", "1/8:a0 1/8:a_r -1/8:a1"),
        ("3A", "a0", "a1", "2/32:a0 2/32:a1 1/32:a-1 -135/2048:u_r"),
        ("3A", "a0", "u_r", "2/9:a0 -1/9:a1 -1/9:a-1 5/32:u_r"),
        ("3A", "u_r", "u_r", "1:u_r"),
        ("3C", "a0", "a1", "1/64:a0 1/64:a1 -1/64:a-1"),
        ("4A", "a0", "a1", "3/64:a0 3/64:a1 1/64:a2 1/64:a-1 -3/64:v_r"),
        ("4A", "a0", "v_r", "5/16:a0 -2/16:a1 -1/16:a2 -2/16:a-1 3/16:v_r"),
        ("4A", "v_r", "v_r", "1:v_r"),
        ("4B", "a0", "a1", "1/64:a0 1/64:a1 -1/64:a-1 -1/64:a2 1/64:a_r2"),
        ("4B", "a0", "a2", "1/8:a0 1/8:a2 -1/8:a_r2"),
        ("5A", "a0", "a1", "3/128:a0 3/128:a1 -1/128:a2 -1/128:a-1 -1/128:a-2 1:w_r"),
        ("5A", "a0", "a2", "3/128:a0 3/128:a2 -1/128:a1 -1/128:a-1 -1/128:a-2 -1:w_r"),
        ("5A", "a0", "w_r", "7/4096:a1 7/4096:a-1 -7/4096:a2 -7/4096:a-2 7/32:w_r"),
        ("5A", "w_r", "w_r", "175/524288:a-2 175/524288:a-1 175/524288:a0 175/524288:a1 175/524288:a2"),
        ("6A", "a0", "a1", "1/64:a0 1/64:a1 -1/64:a-2 -1/64:a-1 -1/64:a2 -1/64:a3 1/64:a_r3 45/2048:u_r2"),
        ("6A", "a0", "a2", "2/32:a0 2/32:a2 1/32:a-2 -135/2048:u_r2"),
        ("6A", "a0", "u_r2", "2/9:a0 -1/9:a2 -1/9:a-2 5/32:u_r2"),
        ("6A", "a0", "a3", "1/8:a0 1/8:a3 -1/8:a_r3"),
    ];
    for (tag, x, y, expected) in cases {
        assert_eq!(alg(tag).product_of(x, y).unwrap(), vector(expected), "{tag} {x}*{y}");
        assert_eq!(alg(tag).product_of(y, x).unwrap(), vector(expected), "{tag} {y}*{x}");
    }
    assert!(alg("4A").product_of("a0", "a2").unwrap().is_zero());
    assert!(alg("6A").product_of("a_r3", "u_r2").unwrap().is_zero());
}

#[test]
fn tabulated_inner_products() {
    let cases = [
        ("2A", "a0", "a1", (1, 8)),
        ("2A", "a0", "a_r", (1, 8)),
        ("2A", "a1", "a_r", (1, 8)),
        ("3A", "a0", "a1", (13, 256)),
        ("3A", "a0", "u_r", (1, 4)),
        ("3C", "a0", "a1", (1, 64)),
        ("4A", "a0", "a1", (1, 32)),
        ("4A", "a0", "a2", (0, 1)),
        ("4A", "a0", "v_r", (3, 8)),
        ("4A", "v_r", "v_r", (2, 1)),
        ("4B", "a0", "a1", (1, 64)),
        ("4B", "a0", "a2", (1, 8)),
        ("4B", "a0", "a_r2", (1, 8)),
        ("5A", "a0", "a1", (3, 128)),
        ("5A", "a0", "w_r", (0, 1)),
        ("6A", "a0", "a1", (5, 256)),
        ("6A", "a0", "a2", (13, 256)),
        ("6A", "a0", "a3", (1, 8)),
        ("6A", "a_r3", "u_r2", (0, 1)),
    ];
    for (tag, x, y, (p, q)) in cases {
        assert_eq!(alg(tag).inner_of(x, y).unwrap(), rat(p, q), "{tag} ({x},{y})");
    }
}

#[test]
fn completed_entries_follow_rotation() {
    let a = alg("5A");
    assert_eq!(a.inner_of("a1", "a-2").unwrap(), rat(3, 128));
    assert_eq!(
        a.product_of("a1", "a2").unwrap(),
        vector("3/128:a1 3/128:a2 -1/128:a-2 -1/128:a0 -1/128:a-1 1:w_r")
    );
    let six = alg("6A");
    assert_eq!(six.product_of("a1", "a_r3").unwrap(), vector("1/8:a1 1/8:a_r3 -1/8:a-2"));
}

#[test]
fn tabulated_eigenvectors() {
    let cases = [
        ("2A", "0", "1:a1 1:a_r -1/4:a0"),
        ("2A", "1/4", "1:a1 -1:a_r"),
        ("2B", "0", "1:a1"),
        ("3A", "0", "1:u_r -10/27:a0 32/27:a1 32/27:a-1"),
        ("3A", "1/4", "1:u_r -8/45:a0 -32/45:a1 -32/45:a-1"),
        ("3A", "1/32", "1:a1 -1:a-1"),
        ("3C", "0", "1:a1 1:a-1 -1/32:a0"),
        ("3C", "1/32", "1:a1 -1:a-1"),
        ("4A", "0", "1:v_r -1/2:a0 2:a1 2:a-1 1:a2"),
        ("4A", "0", "1:a2"),
        ("4A", "1/4", "1:v_r -1/3:a0 -2/3:a1 -2/3:a-1 -1/3:a2"),
        ("4A", "1/32", "1:a1 -1:a-1"),
        ("4B", "0", "1:a1 1:a-1 -1/32:a0 -1/8:a_r2 1/8:a2"),
        ("4B", "0", "1:a2 1:a_r2 -1/4:a0"),
        ("4B", "1/4", "1:a2 -1:a_r2"),
        ("4B", "1/32", "1:a1 -1:a-1"),
        ("5A", "0", "1:w_r 3/512:a0 -15/128:a1 -15/128:a-1 -1/128:a2 -1/128:a-2"),
        ("5A", "0", "1:w_r -3/512:a0 1/128:a1 1/128:a-1 15/128:a2 15/128:a-2"),
        ("5A", "1/4", "1:w_r 1/128:a1 1/128:a-1 -1/128:a2 -1/128:a-2"),
        ("5A", "1/32", "1:a1 -1:a-1"),
        ("5A", "1/32", "1:a2 -1:a-2"),
        ("6A", "0", "1:a3 1:a_r3 -1/4:a0"),
        ("6A", "0", "1:u_r2 -10/27:a0 32/27:a2 32/27:a-2"),
        ("6A", "1/4", "1:a3 -1:a_r3"),
        ("6A", "1/32", "1:a1 -1:a-1"),
        ("6A", "1/32", "1:a2 -1:a-2"),
    ];
    for (tag, ev, v) in cases {
        assert!(is_eigenvector(&alg(tag), "a0", ev, v), "{tag} {ev}: {v}");
    }
}

#[test]
fn six_a_long_eigenvectors() {
    let a = alg("6A");
    // Forms with coefficients 2^4, 2^3 on the axis sums are not eigenvectors;
    // the kernels contain the versions with 2^8 and 2^5.
    assert!(!is_eigenvector(&a, "a0", "0", "1:u_r2 2/45:a0 -16/45:a1 -16/45:a-1 -8/45:a2 -8/45:a-2 -8/45:a3 8/45:a_r3"));
    assert!(!is_eigenvector(&a, "a0", "1/4", "1:u_r2 -8/45:a0 -8/45:a2 -8/45:a-2 -8/45:a3 8/45:a_r3"));
    assert!(is_eigenvector(&a, "a0", "0", "1:u_r2 2/45:a0 -256/45:a1 -256/45:a-1 -32/45:a2 -32/45:a-2 -32/45:a3 32/45:a_r3"));
    assert!(is_eigenvector(&a, "a0", "1/4", "1:u_r2 -8/45:a0 -32/45:a2 -32/45:a-2 -32/45:a3 32/45:a_r3"));
    let spaces = ad_eigenspaces(&a, "a0").unwrap();
    let dims: Vec<usize> = Eigenvalue::ALL.iter().map(|e| spaces[e].len()).collect();
    assert_eq!(dims, vec![1, 3, 2, 2]);
}

#[test]
fn eigenspaces_of_small_algebras() {
    let b = alg("2B");
    let spaces = ad_eigenspaces(&b, "a0").unwrap();
    assert_eq!(spaces[&Eigenvalue::Zero], vec![FormalVector::basis("a1".to_string())]);
    let three = alg("3A");
    let zero = &ad_eigenspaces(&three, "a0").unwrap()[&Eigenvalue::Zero];
    assert_eq!(zero.len(), 1);
    let expected = vector("1:u_r -10/27:a0 32/27:a1 32/27:a-1");
    let c = zero[0].coeff(&"u_r".to_string());
    assert_eq!(zero[0].scaled(&c.recip()), expected);
    for a in build_all_algebras().unwrap() {
        for axis in a.majorana_axes() {
            assert_eq!(ad_eigenspaces(&a, axis).unwrap()[&Eigenvalue::One].len(), 1);
        }
    }
}

#[test]
fn non_axis_is_rejected() {
    let a = alg("3A");
    assert!(matches!(ad_eigenspaces(&a, "u_r"), Err(NortsakError::NotMajorana { .. })));
}

#[test]
fn spectrum_violation_is_reported() {
    let text = "algebra 2B 2\nbasis a0 a1\nmajorana a0 a1\nprod a0 a1 1/2:a1 1/2:a0\n\
                prod a0 a0 1:a0\ninner a0 a1 0\ninner a0 a0 1\n";
    let a = parse_algebras(text).unwrap().remove(0);
    let err = ad_eigenspaces(&a, "a0").unwrap_err();
    assert!(err.to_string().contains("spectrum violation"), "{err}");
}

#[test]
fn fusion_rules() {
    let table = FusionTable::majorana();
    assert!(table.is_symmetric());
    assert_eq!(table.allowed(Eigenvalue::Zero, Eigenvalue::Zero), &[Eigenvalue::Zero]);
    assert!(!table
        .allowed(Eigenvalue::ThirtySecond, Eigenvalue::ThirtySecond)
        .contains(&Eigenvalue::ThirtySecond));
    assert_eq!(
        table.allowed(Eigenvalue::Quarter, Eigenvalue::Quarter),
        &[Eigenvalue::One, Eigenvalue::Zero]
    );
    let report = verify_fusion(&alg("4A"), "a0", &table).unwrap();
    assert!(report.passed(), "{report:?}");
    assert_eq!(report.pairs_checked, 15);
}

#[test]
fn tau_and_sigma() {
    let r = verify_tau_sigma(&alg("3A"), "a0").unwrap();
    assert!(r.passed());
    assert_eq!(r.tau_fixed, vec!["a0", "u_r"]);
    let image = |r: &TauSigmaReport, l: &str| r.tau_images.iter().find(|(b, _)| b == l).unwrap().1.clone();
    assert_eq!(image(&r, "a1"), "(1)a-1");
    assert_eq!(image(&r, "a-1"), "(1)a1");

    let r = verify_tau_sigma(&alg("2B"), "a0").unwrap();
    assert_eq!(r.tau_fixed, vec!["a0", "a1"]);

    let r = verify_tau_sigma(&alg("6A"), "a0").unwrap();
    assert!(r.passed());
    for l in ["a3", "a_r3", "u_r2"] {
        assert!(r.tau_fixed.iter().any(|f| f == l), "{l}");
    }
}

#[test]
fn norton_inequality() {
    let a = alg("2A");
    let a0 = a.unit("a0").unwrap();
    let a1 = a.unit("a1").unwrap();
    assert!(norton_inequality_check(&a, &a0, &a1));
    // a0*a1 = (a0 + a1 - a_r)/8 and the three axes pairwise have inner product 1/8.
    let uv = a.multiply(&a0, &a1);
    assert_eq!(a.inner(&uv, &uv), rat(1, 64) * (int(3) - rat(2, 8)));
    assert_eq!(a.inner(&a.multiply(&a0, &a0), &a.multiply(&a1, &a1)), rat(1, 8));
    let v = vec![int(2), int(-1), int(3)];
    assert!(norton_inequality_check(&a, &v, &v));
    for alg in build_all_algebras().unwrap() {
        assert_eq!(sampled_norton_check(&alg, 200, 11), 200, "{}", alg.tag());
    }
}

#[test]
fn every_algebra_passes_all_checks() {
    for a in build_all_algebras().unwrap() {
        let report = verify_algebra(&a, 50, 3);
        assert!(report.passed(), "{report:#?}");
        assert_eq!(report.axes.len(), a.majorana_axes().count());
    }
}

#[test]
fn axis_pair_inner_products() {
    assert_eq!(alg("6A").axis_pair_inner(-1), Some(rat(5, 256)));
    assert_eq!(alg("6A").axis_pair_inner(4), Some(rat(13, 256)));
    assert_eq!(alg("5A").axis_pair_inner(3), Some(rat(3, 128)));
    assert_eq!(alg("2B").axis_pair_inner(1), Some(ExactScalar::zero()));
}

fn small_vector(dim: usize) -> impl Strategy<Value = Vec<ExactScalar>> {
    proptest::collection::vec(-4i64..=4, dim).prop_map(|v| v.into_iter().map(int).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn form_is_associative_and_product_commutative(
        idx in 0usize..8,
        seed in proptest::collection::vec(-4i64..=4, 24),
    ) {
        let a = &build_all_algebras().unwrap()[idx];
        let n = a.dim();
        let vec = |k: usize| -> Vec<ExactScalar> { seed[k * 8..k * 8 + n].iter().map(|&x| int(x)).collect() };
        let (x, y, z) = (vec(0), vec(1), vec(2));
        prop_assert_eq!(a.multiply(&x, &y), a.multiply(&y, &x));
        prop_assert_eq!(a.inner(&x, &a.multiply(&y, &z)), a.inner(&a.multiply(&x, &y), &z));
    }

    #[test]
    fn norton_holds_for_sampled_pairs(u in small_vector(8), v in small_vector(8)) {
        let a = alg("6A");
        prop_assert!(norton_inequality_check(&a, &u, &v));
    }
}
