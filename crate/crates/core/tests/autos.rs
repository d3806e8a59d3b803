use proptest::prelude::*;

use klein_core::autos::*;
use klein_core::catalog::Catalog;
use klein_core::exact::{q, MultiPoly, Tower};
use klein_core::exec::Execution;
use klein_core::galois::Case;

const XYZ: [&str; 3] = ["x", "y", "z"];

fn qi() -> Tower {
    Tower::rationals().adjoin_root("i", "i^2 + 1").unwrap()
}

#[test]
fn invariance_examples() {
    let cat = Catalog::paper();
    let d4 = klein_equation(&cat, Case::Dn(4)).unwrap();
    assert_eq!(d4, MultiPoly::parse(&Tower::rationals(), &XYZ, "x^3 + x*y^2 + z^2").unwrap());
    let tau = PolyMap::parse(&qi(), &XYZ, &["-1/2*x + i/2*y", "3/2*i*x - 1/2*y", "z"]).unwrap();
    assert!(check_invariance(&d4, &tau).unwrap().is_unit_invariant());

    let a2 = klein_equation(&cat, Case::An(2)).unwrap();
    let shear = PolyMap::parse(&Tower::rationals(), &XYZ, &["x + y", "y", "z + 2*x + y"]).unwrap();
    assert!(check_invariance(&a2, &shear).unwrap().is_unit_invariant());

    let e6 = klein_equation(&cat, Case::E6).unwrap();
    let shift = PolyMap::parse(&Tower::rationals(), &XYZ, &["x + 1", "y", "z"]).unwrap();
    match check_invariance(&e6, &shift).unwrap() {
        Invariance::NotInvariant(r) => assert!(!r.is_zero()),
        other => panic!("{other:?}"),
    }
}

#[test]
fn orders() {
    let qq = Tower::rationals();
    let tau = PolyMap::parse(&qi(), &XYZ, &["-1/2*x + i/2*y", "3/2*i*x - 1/2*y", "z"]).unwrap();
    assert_eq!(map_order(&tau, 10).unwrap(), Some(3));
    // linear part: trace −1, determinant 1, so λ² + λ + 1
    let i = qi().gen("i").unwrap();
    let (a, b, c, d) = (qi().frac(-1, 2), &i * &qi().frac(1, 2), &i * &qi().frac(3, 2), qi().frac(-1, 2));
    assert_eq!(&a + &d, qi().int(-1));
    assert_eq!(&(&a * &d) - &(&b * &c), qi().one());
    let sigma = PolyMap::parse(&qq, &XYZ, &["x", "-y", "z"]).unwrap();
    assert_eq!(map_order(&sigma, 10).unwrap(), Some(2));
    assert_eq!(map_order(&PolyMap::identity(&qq, &XYZ).unwrap(), 10).unwrap(), Some(1));
    let shear = PolyMap::parse(&qq, &XYZ, &["x + y", "y", "z"]).unwrap();
    assert_eq!(map_order(&shear, 10).unwrap(), None);
}

#[test]
fn projective_kind_checks_weights() {
    let qq = Tower::rationals();
    let c = |s: &[&str]| s.iter().map(|p| MultiPoly::parse(&qq, &XYZ, p).unwrap()).collect::<Vec<_>>();
    assert!(PolyMap::new(c(&["x", "y + x^2", "z"]), MapKind::Projective(vec![1, 2, 3])).is_ok());
    assert!(PolyMap::new(c(&["x", "y + x", "z"]), MapKind::Projective(vec![1, 2, 3])).is_err());
}

fn group(case: Case) -> DiagonalGroupDescriptor {
    diagonal_group(&Catalog::paper(), case, 7, Execution::default()).unwrap_or_else(|e| panic!("{case}: {e}"))
}

#[test]
fn diagonal_groups() {
    let e6 = group(Case::E6);
    assert_eq!(e6.conditions, "alpha^4 = beta^3 = gamma^2");
    assert_eq!(e6.label, "C* x Z/2");
    assert_eq!(e6.parametrization.as_ref().unwrap().components, ["s^3", "s^4", "s^6*eps"]);
    let e7 = group(Case::E7);
    assert_eq!(e7.conditions, "alpha^3*beta = beta^3 = gamma^2");
    assert_eq!(e7.label, "C*");
    let e8 = group(Case::E8);
    assert_eq!(e8.conditions, "alpha^5 = beta^3 = gamma^2");
    assert_eq!(e8.label, "C*");
    assert_eq!(e8.parametrization.as_ref().unwrap().components, ["s^6", "s^10", "s^15"]);
    for d in [&e6, &e7, &e8] {
        assert!(d.verified(), "{d:#?}");
        assert_eq!(d.checks.len(), 9);
    }
    for n in 4..=9 {
        let d = group(Case::Dn(n));
        assert!(d.verified(), "{d:#?}");
        assert_eq!(d.label, "C* x Z/2");
        assert_eq!(d.parametrization.as_ref().unwrap().components[2], format!("s^{}*e2", n - 1));
    }
    assert!(diagonal_group(&Catalog::paper(), Case::An(3), 7, Execution::default()).is_err());
}

#[test]
fn diagonal_group_sequential_agrees() {
    let a = group(Case::Dn(5));
    let b = diagonal_group(&Catalog::paper(), Case::Dn(5), 7, Execution::Sequential).unwrap();
    assert_eq!(format!("{:?}", a.checks), format!("{:?}", b.checks));
}

#[test]
fn tau_normalizes() {
    let r = tau_report(&Catalog::paper(), 6, 3).unwrap();
    assert!(r.verified(), "{r:#?}");
    assert_eq!(r.order, Some(3));
    // the conjugates preserve d₄ but leave the diagonal torus
    assert!(r.conjugations.iter().any(|c| !c.diagonal));
}

#[test]
fn shear_family() {
    let cat = Catalog::paper();
    let polys = [(2, ["1", "y", "3 - y^2"]), (3, ["y^2", "1 + y", "-2/3*y^5"]), (5, ["1 + y + y^3", "y^4", "7"])];
    for (n, ps) in polys {
        for p in ps {
            let r = verify_an_wild_family(&cat, n, &parse_shear_poly(p).unwrap()).unwrap();
            assert!(r.verified && r.divisible, "n={n} P={p}: {r:?}");
        }
    }
    assert!(parse_shear_poly("x + y").is_err());
    assert!(verify_an_wild_family(&cat, 1, &parse_shear_poly("1").unwrap()).is_err());
}

#[test]
fn shear_n2_expansion() {
    // (x + y)² − y(z + 2x + y) = x² − yz
    let r = verify_an_wild_family(&Catalog::paper(), 2, &parse_shear_poly("1").unwrap()).unwrap();
    assert_eq!(r.map, ["x + y", "y", "2*x + y + z"]);
}

#[test]
fn smith_form_orders_group() {
    // the torsion of {v : v^{d_j} = 1} equals the 2×2-minor gcd of the difference rows
    let (f, _) = smith_normal_form(&[vec![-3, 2, 0], vec![-3, -1, 2]], 3);
    assert_eq!(f, [1, 1]);
    let (f, _) = smith_normal_form(&[vec![-4, 0, 0], vec![0, -6, 0]], 3);
    assert_eq!(f, [2, 12]);
}

fn det3(v: &[Vec<i64>]) -> i64 {
    v[0][0] * (v[1][1] * v[2][2] - v[1][2] * v[2][1]) - v[0][1] * (v[1][0] * v[2][2] - v[1][2] * v[2][0])
        + v[0][2] * (v[1][0] * v[2][1] - v[1][1] * v[2][0])
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

proptest! {
    #[test]
    fn smith_invariants(rows in prop::collection::vec(prop::collection::vec(-20i64..20, 3), 1..3)) {
        let (f, v) = smith_normal_form(&rows, 3);
        prop_assert_eq!(det3(&v).abs(), 1);
        prop_assert!(f.windows(2).all(|w| w[1] % w[0] == 0));
        // product of factors = gcd of the maximal minors
        let minors: i64 = if rows.len() == 1 {
            rows[0].iter().fold(0, |g, &x| gcd(g, x))
        } else {
            let m = |i: usize, j: usize| rows[0][i] * rows[1][j] - rows[0][j] * rows[1][i];
            gcd(gcd(m(0, 1), m(0, 2)), m(1, 2))
        };
        if f.len() == rows.len() {
            prop_assert_eq!(f.iter().product::<i64>(), minors);
        } else {
            prop_assert_eq!(minors, 0);
        }
    }

    #[test]
    fn closure_of_dn_group(n in 4u32..12, l in 1i64..9, m in 1i64..9, s1 in prop::bool::ANY, s2 in prop::bool::ANY) {
        let cat = Catalog::paper();
        let d = group(Case::Dn(n));
        let qq = Tower::rationals();
        let el = |x: i64, a: bool, b: bool| {
            let x = qq.rational(&q(x, 1));
            vec![x.pow(2), x.pow(n as u64 - 2).scale(&q(if a { 1 } else { -1 }, 1)), x.pow(n as u64 - 1).scale(&q(if b { 1 } else { -1 }, 1))]
        };
        let (g, h) = (el(l, s1, s2), el(m, s2, s1));
        let prod: Vec<_> = g.iter().zip(&h).map(|(a, b)| a * b).collect();
        prop_assert!(d.satisfies(&prod).unwrap());
        let f = klein_equation(&cat, Case::Dn(n)).unwrap();
        let inv = check_invariance(&f, &PolyMap::diagonal(&XYZ, &prod).unwrap()).unwrap();
        prop_assert!(inv.lambda().is_some());
    }
}
