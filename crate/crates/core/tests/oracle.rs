use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use proptest::prelude::*;

use klein_core::catalog::Catalog;
use klein_core::exact::{count_real_roots, Interval, MultiPoly, Tower};
use klein_core::exec::Execution;
use klein_core::galois::Case;
use klein_core::oracle::*;

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() < tol
}

fn matches_set(got: &[Complex64], want: &[Complex64], tol: f64) -> bool {
    got.len() == want.len() && want.iter().all(|w| got.iter().any(|g| close(*g, *w, tol)))
}

#[test]
fn cube_roots_of_t() {
    let qt = Tower::rationals().with_function("t").unwrap();
    let p = MultiPoly::parse(&qt, &["X"], "X^3 - t").unwrap();
    let roots = numeric_roots_poly(&p, "X", &NumericConfig::at(8)).unwrap();
    let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    let two = Complex64::new(2.0, 0.0);
    assert!(matches_set(&roots, &[two, two * w, two * w * w], 1e-8), "{roots:?}");
}

#[test]
fn roots_of_unity() {
    let p = MultiPoly::parse(&Tower::rationals(), &["X"], "X^12 - 1").unwrap();
    let roots = numeric_roots_poly(&p, "X", &NumericConfig::default()).unwrap();
    let want: Vec<Complex64> = (0..12).map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 12.0)).collect();
    assert!(matches_set(&roots, &want, 1e-8));
}

#[test]
fn residuals_have_all_roots_real() {
    let cat = Catalog::paper();
    let checks = residual_real_roots(&cat, &NumericConfig::default()).unwrap();
    let got: Vec<(usize, usize, usize)> = checks.iter().map(|c| (c.sturm, c.numeric, c.degree)).collect();
    assert_eq!(got, [(3, 3, 3), (4, 4, 4), (4, 4, 4)]);
}

#[test]
fn config_rejects_zero_t() {
    let p = MultiPoly::parse(&Tower::rationals(), &["X"], "X^2 - 2").unwrap();
    assert!(numeric_roots_poly(&p, "X", &NumericConfig::at(0)).is_err());
}

fn audits(case: Case) -> &'static [AuditReport] {
    static CACHE: OnceLock<Vec<(Case, Vec<AuditReport>)>> = OnceLock::new();
    let all = CACHE.get_or_init(|| {
        let cat = Catalog::paper();
        let cfgs: Vec<NumericConfig> = [2, 3, 5].into_iter().map(NumericConfig::at).collect();
        [Case::E6, Case::E7, Case::E8, Case::Dn(5), Case::Dn(6), Case::An(3)]
            .into_iter()
            .map(|c| (c, audit_case(&cat, c, &cfgs, Execution::default()).unwrap_or_else(|e| panic!("{c}: {e}"))))
            .collect()
    });
    &all.iter().find(|(c, _)| *c == case).unwrap().1
}

#[test]
fn s6_line_graph() {
    for r in audits(Case::E6) {
        assert!(r.passed(), "{:?}", r.checks);
        assert_eq!(r.count, 27);
        assert!(r.max_residue < 1e-8);
        assert!(r.degrees.iter().all(|&d| d == 10), "{:?}", r.degrees);
        assert_eq!(r.edges, 135);
    }
}

#[test]
fn s7_bitangent_graph() {
    for r in audits(Case::E7) {
        assert!(r.passed(), "{:?}", r.checks);
        assert_eq!(r.count, 56);
        // each (−1)-curve of a degree 2 del Pezzo meets 28 others
        assert!(r.degrees.iter().all(|&d| d == 28));
    }
}

#[test]
fn s8_graph() {
    for r in audits(Case::E8) {
        assert!(r.passed(), "{:?}", r.checks);
        assert_eq!(r.count, 240);
        assert!(r.max_residue < 1e-8, "{}", r.max_residue);
        // E·E' ∈ {1, 2, 3} for 126 + 56 + 1 of the other 239 classes in degree 1
        assert!(r.degrees.iter().all(|&d| d == 183));
    }
}

#[test]
fn conic_bundles() {
    for case in [Case::Dn(5), Case::Dn(6), Case::An(3)] {
        for r in audits(case) {
            assert!(r.passed(), "{case}: {:?}", r.checks);
        }
    }
}

#[test]
fn exact_verdicts_reproduced_at_three_values() {
    for case in [Case::E6, Case::E7, Case::E8, Case::Dn(5), Case::Dn(6), Case::An(3)] {
        let rs = audits(case);
        assert_eq!(rs.len(), 3);
        for r in rs {
            for f in &r.families {
                assert!(f.mismatches.is_empty(), "{case} {}: {:?}", f.family, f.mismatches);
                let exact = f.exact_differences.as_ref().unwrap();
                if f.exact_complete {
                    assert_eq!(&f.numeric_differences, exact, "{case} {}", f.family);
                } else {
                    assert!(exact.is_subset(&f.numeric_differences), "{case} {}", f.family);
                }
            }
        }
    }
}

#[test]
fn sequential_audit_agrees() {
    let cat = Catalog::paper();
    let cfg = [NumericConfig::at(2)];
    let a = audit_case(&cat, Case::E6, &cfg, Execution::Sequential).unwrap();
    let b = &audits(Case::E6)[0];
    assert_eq!(a[0].degrees, b.degrees);
    assert_eq!(a[0].max_residue, b.max_residue);
}

fn cubic_or_quartic() -> impl Strategy<Value = Vec<i64>> {
    (3usize..=4).prop_flat_map(|d| prop::collection::vec(-20i64..=20, d).prop_map(move |mut c| {
        c.push(if c.len() % 2 == 0 { 1 } else { -1 });
        c
    }))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    // Sturm counts against the root finder on random squarefree polynomials
    #[test]
    fn sturm_agrees_with_numeric(c in cubic_or_quartic()) {
        let p = MultiPoly::from_univariate_rationals(&Tower::rationals(), "X", &c);
        let d = klein_core::exact::discriminant(&p, "X").unwrap();
        prop_assume!(!d.is_zero());
        let cfg = NumericConfig::default();
        let check = real_root_check("p", &p, "X", &cfg).unwrap();
        prop_assert_eq!(check.degree, c.len() - 1);
        prop_assert_eq!(check.sturm, check.numeric);
        prop_assert_eq!(check.sturm, count_real_roots(&p, "X", &Interval::All).unwrap());
    }

    #[test]
    fn root_count_equals_degree(c in prop::collection::vec(-50i64..=50, 2..9), t in 1i64..9) {
        // Σ c_k X^k + X^n − t, specialized at t
        let qt = Tower::rationals().with_function("t").unwrap();
        let n = c.len();
        let p = &MultiPoly::from_univariate_rationals(&qt, "X", &c)
            + &MultiPoly::parse(&qt, &["X"], &format!("X^{n} - t")).unwrap();
        let mut at = c.clone();
        at[0] -= t;
        at.push(1);
        let d = klein_core::exact::discriminant(&MultiPoly::from_univariate_rationals(&Tower::rationals(), "X", &at), "X").unwrap();
        prop_assume!(!d.is_zero());
        let roots = numeric_roots_poly(&p, "X", &NumericConfig::at(t)).unwrap();
        prop_assert_eq!(roots.len(), n);
    }
}
