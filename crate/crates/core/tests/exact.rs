use proptest::prelude::*;

use klein_core::catalog::Catalog;
use klein_core::exact::*;

fn qx(text: &str) -> MultiPoly {
    MultiPoly::parse(&Tower::rationals(), &["x"], text).unwrap()
}

const Q: &str = "x^3 - 29496*x^2 + 401808*x - 64";

#[test]
fn division() {
    let (q, r) = poly_divmod(&qx("x^2 - 3"), &qx("x - 2"), "x").unwrap();
    assert_eq!((q, r), (qx("x + 2"), qx("1")));
    let p = qx("3*x^4 - x + 7");
    assert_eq!(poly_divmod(&p, &qx("1"), "x").unwrap(), (p.clone(), qx("0")));
    assert_eq!(poly_divmod(&qx(Q), &qx(Q), "x").unwrap(), (qx("1"), qx("0")));
    assert!(poly_divmod(&p, &qx("0"), "x").is_err());
}

#[test]
fn resultants() {
    assert_eq!(resultant(&qx("x^2 - 3"), &qx("x - 2"), "x").unwrap().to_rational(), Some(q(1, 1)));
    assert!(resultant(&qx(Q), &qx(Q), "x").unwrap().is_zero());
    // after X = e¹⁸/t the two denominators of d cannot vanish together
    let r = resultant(&qx("115*x - 28"), &qx("11*x + 34"), "x").unwrap();
    assert_eq!(r.to_rational(), Some(q(115 * 34 + 28 * 11, 1)));
    let s = sylvester_resultant(&qx("x^3 - 2*x + 5"), &qx("7*x^2 - x - 1"), "x").unwrap();
    assert_eq!(s, resultant(&qx("x^3 - 2*x + 5"), &qx("7*x^2 - x - 1"), "x").unwrap());
}

#[test]
fn sturm_counts() {
    assert_eq!(count_real_roots(&qx(Q), "x", &Interval::All).unwrap(), 3);
    assert_eq!(count_real_roots(&qx("x^2 + 1"), "x", &Interval::All).unwrap(), 0);
    let cat = Catalog::paper();
    for p in cat.polys("s8.Q").unwrap() {
        let p = MultiPoly::parse(&Tower::rationals(), &["x"], &p.to_string().replace('X', "x")).unwrap();
        assert_eq!(count_real_roots(&p, "x", &Interval::All).unwrap(), 4);
    }
}

#[test]
fn vieta_on_q() {
    let (s, p) = vieta_sum_product(&qx(Q), "x").unwrap();
    assert_eq!((s.to_rational(), p.to_rational()), (Some(q(29496, 1)), Some(q(64, 1))));
}

#[test]
fn inverses() {
    let q3 = Tower::rationals().adjoin_root("sqrt3", "sqrt3^2 - 3").unwrap();
    let r = q3.gen("sqrt3").unwrap();
    assert_eq!(r.inv().unwrap(), &r * &q3.frac(1, 3));
    assert!(q3.one().inv().unwrap().is_one());
    assert!(q3.zero().inv().is_err());

    // μ¹² = c·t: μ⁻¹ = μ¹¹/(ct)
    let c = q(-5, 27);
    let base = Tower::rationals().with_function("t").unwrap();
    let t = base.gen("t").unwrap();
    let rad = &t * &base.rational(&c);
    let tw = base.with_radical("mu", 12, &rad).unwrap();
    let mu = tw.gen("mu").unwrap();
    let want = &mu.pow(11) * &tw.lift(&rad).unwrap().inv().unwrap();
    assert_eq!(mu.inv().unwrap(), want);
}

#[test]
fn squares() {
    let qt = Tower::rationals().with_function("t").unwrap();
    let v = ["W", "X"];
    let quad = MultiPoly::parse(&qt, &v, "3*W^2 - 2*t*W*X + 5*X^2").unwrap();
    let root = is_square(&quad.pow(2)).unwrap().unwrap();
    assert!(root == quad || root == -&quad);
    assert_eq!(is_square(&quad.zero_like()).unwrap(), Some(quad.zero_like()));

    let tw4 = MultiPoly::parse(&qt, &v, "t*W^4").unwrap();
    assert_eq!(is_square(&tw4).unwrap(), None);
    let t = qt.gen("t").unwrap();
    let qs = qt.with_radical("s", 2, &t).unwrap();
    let root = is_square(&tw4.lift(&qs).unwrap()).unwrap().unwrap();
    assert_eq!(root, MultiPoly::parse(&qs, &v, "s*W^2").unwrap());
}

#[test]
fn reducible_modulus_is_reported() {
    // x² − 4 is not a field modulus: x − 2 is a zero divisor
    let bad = Tower::rationals().adjoin_root("r", "r^2 - 4").unwrap();
    let e = &bad.gen("r").unwrap() - &bad.int(2);
    match e.inv() {
        Err(AlgebraError::TowerZeroDivisor { generator, .. }) => assert_eq!(generator, "r"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn canonical_text() {
    let p = MultiPoly::parse(&Tower::rationals(), &["x", "y"], "y^2 + x*y + x^2 + 1").unwrap();
    assert_eq!(p.to_string(), "x^2 + x*y + y^2 + 1");
    assert!(MultiPoly::parse(&Tower::rationals(), &["x"], "x +* 2").is_err());
    assert!(MultiPoly::parse(&Tower::rationals(), &["x"], "y").is_err());
}

fn small_poly() -> impl Strategy<Value = String> {
    prop::collection::vec((-5i64..=5, 0u32..3, 0u32..3), 0..5).prop_map(|ts| {
        let mut s = String::from("0");
        for (c, a, b) in ts {
            s.push_str(&format!(" + ({c})*x^{a}*y^{b}"));
        }
        s
    })
}

fn xy(text: &str) -> MultiPoly {
    MultiPoly::parse(&Tower::rationals(), &["x", "y"], text).unwrap()
}

fn uni(c: &[i64]) -> MultiPoly {
    MultiPoly::from_univariate_rationals(&Tower::rationals(), "x", c)
}

fn nonzero_uni(max_deg: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-6i64..=6, 1..=max_deg + 1).prop_filter("nonzero", |c| c.iter().any(|&x| x != 0))
}

fn radical_tower() -> Tower {
    let base = Tower::rationals().adjoin_root("i", "i^2 + 1").unwrap().with_function("t").unwrap();
    let t = base.gen("t").unwrap();
    base.with_radical("mu", 6, &(&t * &base.frac(-5, 27))).unwrap()
}

proptest! {
    #[test]
    fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
        let (p, q, r) = (xy(&a), xy(&b), xy(&c));
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn divmod_round_trip(n in nonzero_uni(7), d in nonzero_uni(4)) {
        let (num, den) = (uni(&n), uni(&d));
        let (q, r) = poly_divmod(&num, &den, "x").unwrap();
        prop_assert_eq!(&(&q * &den) + &r, num);
        prop_assert!(r.is_zero() || r.degree_in("x").unwrap() < den.degree_in("x").unwrap());
    }

    #[test]
    fn resultant_detects_common_factor(f in nonzero_uni(2), g in nonzero_uni(3), h in nonzero_uni(3), plant in any::<bool>()) {
        let (f, g, h) = (uni(&f), uni(&g), uni(&h));
        let (p, q) = if plant { (&f * &g, &f * &h) } else { (g.clone(), h.clone()) };
        prop_assume!(p.degree_in("x").unwrap() > 0 || q.degree_in("x").unwrap() > 0);
        let res = resultant(&p, &q, "x").unwrap();
        let gcd = poly_gcd(&p, &q, "x").unwrap();
        prop_assert_eq!(res.is_zero(), gcd.degree_in("x").unwrap() > 0);
    }
}

proptest! {
    // inversion over ℚ(i)(t)[μ] is an extended gcd with rational-function
    // coefficients, so fewer cases
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn inverse_in_radical_tower(c in prop::collection::vec(-4i64..=4, 1..6), d in 1i64..4) {
        let tw = radical_tower();
        let mu = tw.gen("mu").unwrap();
        let t = tw.gen("t").unwrap();
        let i = tw.gen("i").unwrap();
        let mut e = tw.zero();
        for (k, &ck) in c.iter().enumerate() {
            let coef = &tw.int(ck) + &(&i * &tw.int(k as i64 - 2));
            e = &e + &(&coef * &mu.pow(k as u64));
        }
        e = &e + &(&t * &tw.int(d));
        prop_assume!(!e.is_zero());
        prop_assert!((&e.inv().unwrap() * &e).is_one());
    }
}
