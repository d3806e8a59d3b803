//! S₇: curves Y = aW + bX, Z = cW² + dWX + eX² on X³Y + Y³W + Z² = tW⁴.

use std::sync::Arc;

use serde::Serialize;

use super::ratfn::{div_monomial, monomial_content, RatFn};
use super::{
    as_variables, binary_collapse, replay_fail, restrict, solve_linear, CurveError, EliminationTrace, Family,
    FamilyLabel,
};
use crate::catalog::Catalog;
use crate::exact::{
    count_real_roots, discriminant, irreducible_over_q, resultant, resultant_poly, vieta_sum_product, FieldElement,
    Interval, MultiPoly, Tower,
};
use crate::geometry::{SurfaceName, SurfaceSpec};

const V: [&str; 6] = ["a", "b", "c", "d", "e", "t"];

#[derive(Clone, Debug)]
pub struct S7Enumeration {
    pub families: Vec<Arc<Family>>,
    pub trace: EliminationTrace,
    /// The cubic whose roots are e¹⁸/t.
    pub q: MultiPoly,
    pub q_real_roots: usize,
    pub q_vieta: (String, String),
    /// The system left on the branch e = 0.
    pub e0_system: Vec<String>,
    pub guards: S7Guards,
}

#[derive(Clone, Debug, Serialize)]
pub struct S7Guards {
    /// Res(denominator of d, numerator of d) in X = e¹⁸/t.
    pub d_num_den: String,
    /// Res(denominator of d, Q).
    pub d_den_q: String,
    pub q_discriminant: String,
}

impl S7Enumeration {
    pub fn count(&self) -> usize {
        self.families.iter().map(|f| f.count()).sum()
    }
}

/// Coefficients of W^{4−k}X^k in the restricted equation, polynomials in
/// (a, b, c, d, e, t).
fn restricted_coefficients(surface: &MultiPoly) -> Result<Vec<MultiPoly>, CurveError> {
    let f = as_variables(surface, &["W", "X", "Y", "Z", "t"])?;
    let vars = ["W", "X", "a", "b", "c", "d", "e", "t"];
    let q = Tower::rationals();
    let v = |n: &str| MultiPoly::var(&q, &vars, n);
    let (w, x) = (v("W")?, v("X")?);
    let y = &(&v("a")? * &w) + &(&v("b")? * &x);
    let z = &(&(&v("c")? * &w.pow(2)) + &(&v("d")? * &(&w * &x))) + &(&v("e")? * &x.pow(2));
    let g = f.compose(&[w, x, y, z, v("t")?])?;
    let by = g.collect_in(&["W", "X"])?;
    (0..5u32)
        .map(|k| match by.get(&vec![4 - k, k]) {
            Some(p) => Ok(p.with_vars(&V)?),
            None => Ok(MultiPoly::zero(&q, &V)),
        })
        .collect()
}

/// Solves the numerator of r for `var` (degree one required).
fn solve_for(r: &RatFn, var: &str) -> Result<RatFn, CurveError> {
    let parts = r.num.as_univariate(var)?;
    if parts.len() != 2 || r.den.degree_in(var)? > 0 {
        return replay_fail(&format!("solve {var}"), format!("{} is not linear in {var}", r.num));
    }
    Ok(RatFn::new(-&parts[0], parts[1].clone())?)
}

fn catalog_ratfn(cat: &Catalog, key: &str) -> Result<RatFn, CurveError> {
    let p = cat.polys(key)?;
    match p.len() {
        1 => Ok(RatFn::poly(&p[0])),
        _ => Ok(RatFn::new(p[0].clone(), p[1].clone())?),
    }
}

fn expect_same(step: &str, derived: &RatFn, printed: &RatFn) -> Result<(), CurveError> {
    if derived.same_as(printed) {
        Ok(())
    } else {
        replay_fail(step, format!("derived {derived:?}, printed {printed:?}"))
    }
}

pub(crate) fn q_poly(p: &MultiPoly) -> Result<MultiPoly, CurveError> {
    Ok(MultiPoly::parse(&Tower::rationals(), &["X"], &p.to_string())?)
}

pub fn enumerate_s7(cat: &Catalog) -> Result<S7Enumeration, CurveError> {
    let surface = SurfaceSpec::build(SurfaceName::S7, cat)?;
    let co = restricted_coefficients(surface.equation())?;
    let mut trace = EliminationTrace::default();

    // Top coefficients are linear in b, a, c in turn.
    let b = solve_for(&RatFn::poly(&co[4]), "b")?;
    expect_same("b", &b, &catalog_ratfn(cat, "s7.b")?)?;
    trace.push("b from X^4", &co[4], format!("{b:?}"));
    let co3 = RatFn::poly(&co[3]).substitute("b", &b)?;
    let a = solve_for(&co3, "a")?;
    expect_same("a", &a, &catalog_ratfn(cat, "s7.a")?)?;
    trace.push("a from W X^3", &co[3], format!("{a:?}"));
    let co2 = RatFn::poly(&co[2]).substitute_all(&[("b", &b), ("a", &a)])?;
    let c = solve_for(&co2, "c")?;
    expect_same("c", &c, &catalog_ratfn(cat, "s7.c")?)?;
    trace.push("c from W^2 X^2", &co[2], format!("{c:?}"));

    let sub = |p: &MultiPoly| RatFn::poly(p).substitute_all(&[("b", &b), ("a", &a), ("c", &c)]);
    let c0 = sub(&co[0])?;
    let c1 = sub(&co[1])?;
    let printed = cat.polys("s7.coefficients")?;
    expect_same("W^4 coefficient", &c0, &RatFn::new(printed[0].clone(), printed[1].clone())?)?;
    expect_same("W^3 X coefficient", &c1, &RatFn::new(printed[2].clone(), printed[3].clone())?)?;
    trace.push("W^4, W^3 X after a, b, c", "", format!("{c0:?}; {c1:?}"));

    // The printed multipliers kill d² and d³ and leave a linear equation.
    let m = cat.polys("s7.multipliers")?;
    let comb = c0.mul(&RatFn::poly(&m[0])).add(&c1.mul(&RatFn::poly(&m[1])));
    let d = solve_for(&comb, "d")?;
    expect_same("d", &d, &catalog_ratfn(cat, "s7.d")?)?;
    trace.push("d from combination", format!("{comb:?}"), format!("{d:?}"));

    let r1 = c1.substitute("d", &d)?;
    expect_same("residual", &r1, &catalog_ratfn(cat, "s7.residual")?)?;
    let r0 = c0.substitute("d", &d)?;
    trace.push("W^3 X after d", "", format!("{r1:?}"));

    // R: the residual numerator without its monomial and constant factors.
    let r = div_monomial(&r1.num, &monomial_content(&r1.num)).monic()?;
    let q = binary_collapse(&r, "e", "t", 18)?.monic()?;
    let q_printed = q_poly(&cat.poly("s7.Q")?)?;
    if q != q_printed.monic()? {
        return replay_fail("Q", format!("derived {q}, printed {q_printed}"));
    }
    trace.push("collapse X = e^18/t", &r, &q);
    for (k, rk) in [(0, &r0), (1, &r1)] {
        if rk.num.div_exact(&r)?.is_none() {
            return replay_fail("soundness", format!("R does not divide the W^{} coefficient", 4 - k));
        }
    }

    // Independent route: eliminate d from the two numerators directly.
    let res = resultant_poly(&c0.num, &c1.num, "d")?;
    let stripped = div_monomial(&res, &monomial_content(&res));
    if stripped.proportionality(&r)?.is_none() {
        return replay_fail("resultant", format!("Res_d = {res} is not a monomial times R"));
    }
    trace.push("Res_d", "", &res);

    // Q: three real roots, squarefree, irreducible.
    let disc = discriminant(&q, "X")?;
    if disc.is_zero() {
        return replay_fail("Q", "repeated roots");
    }
    let q_real_roots = count_real_roots(&q, "X", &Interval::All)?;
    let (vs, vp) = vieta_sum_product(&q, "X")?;
    if irreducible_over_q(&q, "X")? != Some(true) {
        return replay_fail("Q", "not certified irreducible");
    }

    // d must be finite and e ≠ 0 off Q = 0.
    let dp = cat.polys("s7.d")?;
    let d_num = binary_collapse(&dp[0], "e", "t", 18)?;
    let d_den = binary_collapse(&dp[1], "e", "t", 18)?;
    let g1 = resultant(&d_den, &d_num, "X")?;
    let g2 = resultant(&d_den, &q, "X")?;
    if g1.is_zero() || g2.is_zero() {
        return replay_fail("guards", format!("Res = {g1}, {g2}"));
    }
    let guards = S7Guards { d_num_den: g1.to_string(), d_den_q: g2.to_string(), q_discriminant: disc.to_string() };

    let (e0_system, e0) = e_zero_branch(&co, cat, &surface)?;
    let main = main_family(cat, &surface, &q)?;
    Ok(S7Enumeration {
        families: vec![Arc::new(main), Arc::new(e0)],
        trace,
        q,
        q_real_roots,
        q_vieta: (vs.to_string(), vp.to_string()),
        e0_system,
        guards,
    })
}

/// e = 0 forces b = a = d = 0 and leaves c² = t.
fn e_zero_branch(co: &[MultiPoly], cat: &Catalog, surface: &SurfaceSpec) -> Result<(Vec<String>, Family), CurveError> {
    let q = Tower::rationals();
    let zero = |p: &MultiPoly, v: &str| p.substitute(v, &MultiPoly::zero(&q, &V));
    let mut eqs: Vec<MultiPoly> = co.iter().map(|p| zero(p, "e")).collect::<Result<_, _>>()?;
    for (k, v) in [(4, "b"), (3, "a")] {
        let s = solve_linear(&eqs[k..=k], &[v])?;
        eqs = eqs.iter().map(|p| p.substitute(v, &s[0].1)).collect::<Result<_, _>>()?;
    }
    match crate::exact::is_square(&eqs[2])? {
        Some(r) if r == MultiPoly::var(&q, &V, "d")? => {}
        _ => return replay_fail("e = 0", format!("W^2 X^2 coefficient {} is not d^2", eqs[2])),
    }
    eqs = eqs.iter().map(|p| zero(p, "d")).collect::<Result<_, _>>()?;
    let system: Vec<String> = eqs.iter().filter(|p| !p.is_zero()).map(|p| p.to_string()).collect();
    let expected = MultiPoly::parse(&q, &V, "c^2 - t")?;
    if eqs[1..].iter().any(|p| !p.is_zero()) || eqs[0] != expected {
        return replay_fail("e = 0", format!("left with {system:?}"));
    }

    let tower = Tower::rationals().with_function("t")?;
    let t = tower.gen("t")?;
    let tower = tower.with_radical("s", 2, &t)?;
    let vars = ["W", "X", "Y", "Z"];
    let derived = MultiPoly::parse(&tower, &vars, "Z - s*W^2")?;
    let printed = cat.polys_in("s7.e0_curves", &tower, &vars)?.swap_remove(0);
    if derived != printed {
        return replay_fail("e = 0 curves", format!("derived {derived}, printed {printed}"));
    }
    let y = MultiPoly::var(&tower, &vars, "Y")?;
    let solved = solve_linear(&[y, printed.clone()], &["Y", "Z"])?;
    let residue = restrict(surface, &tower, &solved)?;
    let fam = Family {
        label: FamilyLabel::S7E0,
        surface: SurfaceName::S7,
        tower,
        vars: vars.iter().map(|s| s.to_string()).collect(),
        equations: vec![MultiPoly::var(printed.tower(), &vars, "Y")?, printed],
        parameter: "s".into(),
        order: 2,
        constants: 1,
        residue,
        chart: 0,
    };
    check_member(&fam)?;
    Ok((system, fam))
}

/// e¹⁸ = θ t with Q(θ) = 0; every other coefficient is a function of e.
fn main_family(cat: &Catalog, surface: &SurfaceSpec, q: &MultiPoly) -> Result<Family, CurveError> {
    let theta = Tower::rationals().with_algebraic("theta", &MultiPoly::parse(&Tower::rationals(), &["theta"], &q.to_string().replace('X', "theta"))?)?;
    let tt = theta.with_function("t")?;
    let radicand = &tt.gen("theta")? * &tt.gen("t")?;
    let tower = tt.with_radical("e", 18, &radicand)?;
    let e = tower.gen("e")?;
    let t = tower.gen("t")?;
    let at = |key: &str, d: &FieldElement| -> Result<FieldElement, CurveError> {
        let p = cat.polys(key)?;
        let z = tower.zero();
        let pt = [z.clone(), z.clone(), z.clone(), d.clone(), e.clone(), t.clone()];
        let mut v = p[0].eval(&pt)?;
        if p.len() > 1 {
            v = v.checked_div(&p[1].eval(&pt)?)?;
        }
        Ok(v)
    };
    let d = at("s7.d", &tower.zero())?;
    let (a, b, c) = (at("s7.a", &d)?, at("s7.b", &d)?, at("s7.c", &d)?);
    let vars = ["W", "X", "Y", "Z"];
    let v = |n: &str| MultiPoly::var(&tower, &vars, n);
    let (w, x) = (v("W")?, v("X")?);
    let ly = &v("Y")? - &(&w.scale(&a) + &x.scale(&b));
    let lz = &v("Z")? - &(&(&w.pow(2).scale(&c) + &(&w * &x).scale(&d)) + &x.pow(2).scale(&e));
    let solved = solve_linear(&[ly.clone(), lz.clone()], &["Y", "Z"])?;
    let residue = restrict(surface, &tower, &solved)?;
    let fam = Family {
        label: FamilyLabel::S7Main,
        surface: SurfaceName::S7,
        tower,
        vars: vars.iter().map(|s| s.to_string()).collect(),
        equations: vec![ly, lz],
        parameter: "e".into(),
        order: 18,
        constants: q.degree_in("X")? as usize,
        residue,
        chart: 0,
    };
    check_member(&fam)?;
    Ok(fam)
}

pub(crate) fn check_member(f: &Family) -> Result<(), CurveError> {
    if f.certified() {
        Ok(())
    } else {
        Err(CurveError::Membership { family: f.label.to_string(), residue: f.residue.to_string() })
    }
}
