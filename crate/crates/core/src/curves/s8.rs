//! S₈: curves Y = aW² + bWX + cX², Z = i(dW³ + eW²X + fWX² + gX³) on
//! X⁵W + Y³ + Z² = tW⁶, with c = μ², g = μ³.

use std::sync::Arc;

use super::ratfn::RatFn;
use super::s7::{check_member, q_poly};
use super::{
    as_variables, isobaric_collapse, replay_fail, restrict, solve_linear, CurveError, EliminationTrace, Family,
    FamilyLabel,
};
use crate::catalog::Catalog;
use crate::exact::{
    count_real_roots, discriminant, irreducible_over_q, resultant, resultant_poly, FieldElement, Interval, MultiPoly,
    Tower,
};
use crate::geometry::{SurfaceName, SurfaceSpec};

const V: [&str; 7] = ["a", "b", "mu", "t", "d", "e", "f"];
const BT: [&str; 3] = ["B", "A", "T"];

#[derive(Clone, Debug)]
pub struct S8Branch {
    /// P_i(B), B = bμ⁴.
    pub p: MultiPoly,
    /// Q_i(T), T = tμ³⁰.
    pub q: MultiPoly,
    /// B as a function of T on this branch: −c₀(T)/c₁(T).
    pub beta: (MultiPoly, MultiPoly),
    pub real_roots: usize,
    /// Whether the printed closed form for b agrees with β modulo Q_i
    /// (None: no closed form printed for this branch).
    pub printed_b_agrees: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct S8Enumeration {
    pub families: Vec<Arc<Family>>,
    pub branches: Vec<S8Branch>,
    pub trace: EliminationTrace,
    /// The W⁶ equation, collapsed to (B, T).
    pub n0: MultiPoly,
    pub guards: Vec<(String, String)>,
}

impl S8Enumeration {
    pub fn count(&self) -> usize {
        self.families.iter().map(|f| f.count()).sum()
    }
}

fn coefficients(surface: &MultiPoly) -> Result<Vec<MultiPoly>, CurveError> {
    let f = as_variables(surface, &["W", "X", "Y", "Z", "t"])?;
    let qi = Tower::rationals().adjoin_root("i", "i^2 + 1")?;
    let vars = ["W", "X", "a", "b", "mu", "t", "d", "e", "f"];
    let v = |n: &str| MultiPoly::var(&qi, &vars, n);
    let (w, x, mu) = (v("W")?, v("X")?, v("mu")?);
    let y = &(&(&v("a")? * &w.pow(2)) + &(&v("b")? * &(&w * &x))) + &(&mu.pow(2) * &x.pow(2));
    let g = &(&(&v("d")? * &w.pow(3)) + &(&v("e")? * &(&w.pow(2) * &x)))
        + &(&(&v("f")? * &(&w * &x.pow(2))) + &(&mu.pow(3) * &x.pow(3)));
    let z = g.scale(&qi.gen("i")?);
    let h = f.compose(&[w, x, y, z, v("t")?])?;
    let h = MultiPoly::parse(&Tower::rationals(), &vars, &h.to_string())?;
    let by = h.collect_in(&["W", "X"])?;
    (0..7u32)
        .map(|k| match by.get(&vec![6 - k, k]) {
            Some(p) => Ok(p.with_vars(&V)?),
            None => Ok(MultiPoly::zero(&Tower::rationals(), &V)),
        })
        .collect()
}

fn solve_for(r: &RatFn, var: &str) -> Result<RatFn, CurveError> {
    let parts = r.num.as_univariate(var)?;
    if parts.len() != 2 || r.den.degree_in(var)? > 0 {
        return replay_fail(&format!("solve {var}"), format!("{} is not linear in {var}", r.num));
    }
    Ok(RatFn::new(-&parts[0], parts[1].clone())?)
}

/// A catalog entry in (a, b, μ), moved into the replay variables.
fn printed(cat: &Catalog, key: &str) -> Result<Vec<MultiPoly>, CurveError> {
    cat.polys(key)?.iter().map(|p| Ok(p.with_vars(&V)?)).collect()
}

fn printed_ratfn(cat: &Catalog, key: &str) -> Result<RatFn, CurveError> {
    let p = printed(cat, key)?;
    Ok(RatFn::new(p[0].clone(), p[1].clone())?)
}

fn expect_same(step: &str, derived: &RatFn, printed: &RatFn) -> Result<(), CurveError> {
    if derived.same_as(printed) {
        Ok(())
    } else {
        replay_fail(step, format!("derived {derived:?}, printed {printed:?}"))
    }
}

/// Collapse to (B, A, T); the μ-weight is returned separately.
fn collapse(p: &MultiPoly) -> Result<(i64, MultiPoly), CurveError> {
    let p = p.with_vars(&["a", "b", "mu", "t"])?;
    // μ-weights making every coefficient equation isobaric
    Ok(isobaric_collapse(&p, "mu", &[("b", 4), ("a", 10), ("t", 30)], &BT)?)
}

fn in_bt(p: &MultiPoly) -> Result<MultiPoly, CurveError> {
    Ok(p.with_vars(&BT)?)
}

/// Last nonzero pseudo-remainder of A and B in `var`, stopping at degree 1.
fn linear_remainder(a: &MultiPoly, b: &MultiPoly, var: &str) -> Result<MultiPoly, CurveError> {
    let (mut a, mut b) = (a.clone(), b.clone());
    loop {
        let db = b.degree_in(var)?;
        if db <= 1 {
            return Ok(b);
        }
        let lb = b.as_univariate(var)?.pop().unwrap();
        let x = b.var_like(var)?;
        while !a.is_zero() && a.degree_in(var)? >= db {
            let la = a.as_univariate(var)?.pop().unwrap();
            let k = a.degree_in(var)? - db;
            a = &(&a * &lb) - &(&(&la * &x.pow(k)) * &b);
        }
        if a.is_zero() {
            return replay_fail("Euclid", "remainder vanished before degree 1");
        }
        // drop the content in the other variables picked up by pseudo-division
        let a2 = super::ratfn::div_monomial(&a, &super::ratfn::monomial_content(&a));
        a = std::mem::replace(&mut b, a2);
    }
}

/// p(β) · c₁^deg reduced modulo q(T).
fn at_beta_mod(p: &MultiPoly, beta: &(MultiPoly, MultiPoly), q: &MultiPoly) -> Result<MultiPoly, CurveError> {
    let num = beta.0.clone();
    let den = beta.1.clone();
    let r = RatFn { num, den };
    let (n, _) = super::ratfn::subst_poly(p, "B", &r)?;
    Ok(n.divrem_in("T", q)?.1)
}

pub fn enumerate_s8(cat: &Catalog) -> Result<S8Enumeration, CurveError> {
    let surface = SurfaceSpec::build(SurfaceName::S8, cat)?;
    let co = coefficients(surface.equation())?;
    let mut trace = EliminationTrace::default();
    if !co[6].is_zero() {
        return replay_fail("X^6", format!("c = mu^2, g = mu^3 leave {}", co[6]));
    }
    let f = solve_for(&RatFn::poly(&co[5]), "f")?;
    expect_same("f", &f, &printed_ratfn(cat, "s8.f")?)?;
    trace.push("f from W X^5", &co[5], format!("{f:?}"));
    let e = solve_for(&RatFn::poly(&co[4]).substitute("f", &f)?, "e")?;
    expect_same("e", &e, &printed_ratfn(cat, "s8.e")?)?;
    trace.push("e from W^2 X^4", &co[4], format!("{e:?}"));
    let d = solve_for(&RatFn::poly(&co[3]).substitute_all(&[("f", &f), ("e", &e)])?, "d")?;
    expect_same("d", &d, &printed_ratfn(cat, "s8.d")?)?;
    trace.push("d from W^3 X^3", &co[3], format!("{d:?}"));

    let sub = |p: &MultiPoly| RatFn::poly(p).substitute_all(&[("f", &f), ("e", &e), ("d", &d)]);
    let c4 = sub(&co[2])?;
    let c5 = sub(&co[1])?;
    let l4 = c4.num.as_univariate("a")?;
    let l5 = c5.num.as_univariate("a")?;
    if l4.len() != 3 || l5.len() != 3 {
        return replay_fail("a", "W^4 X^2 and W^5 X are not quadratic in a");
    }
    let lin = &(&l5[2] * &c4.num) - &(&l4[2] * &c5.num);
    let la = lin.as_univariate("a")?;
    let a = solve_for(&RatFn::poly(&lin), "a")?;
    let a_printed = printed(cat, "s8.a")?;
    expect_same("a", &a, &RatFn::new(a_printed[0].clone(), a_printed[1].clone())?)?;
    trace.push("a from combination", &lin, format!("{a:?}"));

    // Denominator of a: 30 μ¹⁰ · guard, and guard = 0 contradicts L₀ = 0.
    let guard = printed(cat, "s8.guard")?.swap_remove(0);
    let mu10 = MultiPoly::parse(&Tower::rationals(), &V, "30*mu^10")?;
    if a_printed[1] != &mu10 * &guard {
        return replay_fail("guard", format!("denominator of a is not 30 mu^10 ({guard})"));
    }
    let (_, guard_c) = collapse(&guard)?;
    let (_, l0_c) = collapse(&la[0])?;
    let mut guards = vec![];
    let g0 = resultant(&to_b(&guard_c)?, &to_b(&l0_c)?, "B")?;
    guards.push(("Res_B(guard, L0)".to_string(), g0.to_string()));

    // Substituting a: both equations factor through P₁P₂.
    let (_, n4) = collapse(&c4.substitute("a", &a)?.num)?;
    let (_, n5) = collapse(&c5.substitute("a", &a)?.num)?;
    let ps: Vec<MultiPoly> =
        printed(cat, "s8.P")?.iter().map(|p| collapse(p).map(|x| x.1)).collect::<Result<_, _>>()?;
    let p12 = &ps[0] * &ps[1];
    let (Some(k4), Some(k5)) = (n4.div_exact(&p12)?, n5.div_exact(&p12)?) else {
        return replay_fail("P", "P1 P2 does not divide both equations");
    };
    let cof = resultant(&to_b(&k4)?, &to_b(&k5)?, "B")?;
    if cof.is_zero() {
        return replay_fail("P", "cofactors share a root");
    }
    trace.push("after a", "", format!("P1 P2 * ({k4}), P1 P2 * ({k5})"));

    let c0 = sub(&co[0])?.substitute("a", &a)?;
    let (_, n0) = collapse(&c0.num)?;
    trace.push("W^6 collapsed", "", &n0);

    let qs: Vec<MultiPoly> =
        cat.polys("s8.Q")?.iter().map(|q| rename_x_to_t(&q_poly(q)?)).collect::<Result<_, _>>()?;
    let b1 = b1_printed(cat)?;
    let mut branches = vec![];
    let mut families = vec![];
    for (idx, (p, q)) in ps.iter().zip(&qs).enumerate() {
        let gp = resultant(&to_b(&guard_c)?, &to_b(p)?, "B")?;
        if g0.is_zero() && gp.is_zero() {
            return replay_fail("guard", "guard = 0 compatible with the equations");
        }
        guards.push((format!("Res_B(guard, P{})", idx + 1), gp.to_string()));
        let res = resultant_poly(p, &n0, "B")?;
        if res.proportionality(q)?.is_none() {
            return replay_fail(&format!("Q{}", idx + 1), format!("Res_B(P, n0) = {res}"));
        }
        let lin = linear_remainder(&n0, p, "B")?;
        let lc = lin.as_univariate("B")?;
        let beta = (-&lc[0], lc[1].clone());
        if resultant(&to_t(&beta.1)?, &to_t(q)?, "T")?.is_zero() {
            return replay_fail("Euclid", "linear coefficient vanishes on Q");
        }
        for (name, poly) in [("P", p), ("n0", &n0)] {
            if !at_beta_mod(poly, &beta, q)?.is_zero() {
                return replay_fail("Euclid", format!("{name}(beta) is not 0 mod Q{}", idx + 1));
            }
        }
        let printed_b_agrees = match (idx, &b1) {
            (0, Some((bn, bd))) => {
                let cross = &(&beta.0 * bd) - &(bn * &beta.1);
                let agree = cross.divrem_in("T", q)?.1.is_zero();
                let on_p = at_beta_mod(p, &(bn.clone(), bd.clone()), q)?.is_zero();
                if !agree || !on_p {
                    return replay_fail("b1", "printed b on the first branch is not the common root");
                }
                Some(true)
            }
            _ => None,
        };
        let qx = to_t(q)?;
        let disc = discriminant(&qx, "T")?;
        if disc.is_zero() || irreducible_over_q(&qx, "T")? != Some(true) {
            return replay_fail(&format!("Q{}", idx + 1), "not squarefree and irreducible");
        }
        let real_roots = count_real_roots(&qx, "T", &Interval::All)?;
        trace.push(&format!("branch {}", idx + 1), &lin, format!("B = ({}) / ({})", beta.0, beta.1));
        families.push(Arc::new(branch_family(cat, &surface, idx, &qx, &beta)?));
        branches.push(S8Branch { p: p.clone(), q: qx, beta, real_roots, printed_b_agrees });
    }
    let q12 = resultant(&branches[0].q, &branches[1].q, "T")?;
    if q12.is_zero() {
        return replay_fail("Q", "Q1 and Q2 share a root");
    }
    Ok(S8Enumeration { families, branches, trace, n0, guards })
}

fn rename_x_to_t(q: &MultiPoly) -> Result<MultiPoly, CurveError> {
    Ok(MultiPoly::parse(&Tower::rationals(), &BT, &q.to_string().replace('X', "T"))?)
}

fn to_b(p: &MultiPoly) -> Result<MultiPoly, CurveError> {
    Ok(p.with_vars(&["B"])?)
}

fn to_t(p: &MultiPoly) -> Result<MultiPoly, CurveError> {
    Ok(p.with_vars(&["T"])?)
}

/// A printed b = num/den in (μ, t) as B = bμ⁴ over ℚ[T].
fn collapse_b(num: &MultiPoly, den: &MultiPoly, step: &str) -> Result<(MultiPoly, MultiPoly), CurveError> {
    let col = |x: &MultiPoly| {
        isobaric_collapse(x, "mu", &[("t", 30)], &["T"]).map_err(CurveError::from)
    };
    let (kn, n) = col(num)?;
    let (kd, d) = col(den)?;
    if kn - kd != -4 {
        return replay_fail(step, format!("printed b has mu-weight {}", kn - kd));
    }
    Ok((in_bt(&n)?, in_bt(&d)?))
}

fn b1_printed(cat: &Catalog) -> Result<Option<(MultiPoly, MultiPoly)>, CurveError> {
    let p = cat.polys("s8.b1")?;
    Ok(Some(collapse_b(&p[0], &p[1], "b1")?))
}

/// The closed form printed for b on the second branch. It is not the common
/// root of P₂ and the W⁶ equation, so it stays out of the catalog and is
/// only ever compared, never used.
pub const PRINTED_B2: [&str; 2] = [
    "-10*(224784123775200*mu^90*t^3 + 2858233826211840*mu^60*t^2 + 7607560177676934*mu^30*t - 9692094622039483)",
    "mu^4*(15103883194560000*mu^90*t^3 + 194657569344061200*mu^60*t^2 + 526365630369285480*mu^30*t \
     - 667567630291039199)",
];

impl S8Branch {
    /// Whether b = num/den agrees with the derived β modulo Q_i.
    pub fn closed_form_agrees(&self, num: &str, den: &str) -> Result<bool, CurveError> {
        let parse = |s: &str| MultiPoly::parse(&Tower::rationals(), &["mu", "t"], s);
        let (bn, bd) = collapse_b(&parse(num)?, &parse(den)?, "b")?;
        let q = self.q.with_vars(&BT)?;
        let cross = &(&self.beta.0 * &bd) - &(&bn * &self.beta.1);
        Ok(cross.divrem_in("T", &q)?.1.is_zero())
    }
}

/// μ³⁰ = θ/t over ℚ(i)(θ)(t), B = β(θ), b = Bμ⁻⁴.
fn branch_family(
    cat: &Catalog,
    surface: &SurfaceSpec,
    idx: usize,
    q: &MultiPoly,
    beta: &(MultiPoly, MultiPoly),
) -> Result<Family, CurveError> {
    let qi = Tower::rationals().adjoin_root("i", "i^2 + 1")?;
    let th = qi.with_algebraic("theta", &MultiPoly::parse(&qi, &["theta"], &q.to_string().replace('T', "theta"))?)?;
    let tt = th.with_function("t")?;
    let radicand = tt.gen("theta")?.checked_div(&tt.gen("t")?)?;
    let tower = tt.with_radical("mu", 30, &radicand)?;
    let theta = tower.gen("theta")?;
    let mu = tower.gen("mu")?;
    let ev = |p: &MultiPoly| -> Result<FieldElement, CurveError> { Ok(to_t(p)?.eval(std::slice::from_ref(&theta))?) };
    let big_b = ev(&beta.0)?.checked_div(&ev(&beta.1)?)?;
    // μ⁻⁴ = μ²⁶ t / θ
    let b = big_b.checked_div(&mu.pow(4))?;
    let at = |key: &str, a: &FieldElement| -> Result<FieldElement, CurveError> {
        let p = cat.polys(key)?;
        let pt = [a.clone(), b.clone(), mu.clone()];
        Ok(p[0].eval(&pt)?.checked_div(&p[1].eval(&pt)?)?)
    };
    let a = at("s8.a", &tower.zero())?;
    let (d, e, f) = (at("s8.d", &a)?, at("s8.e", &a)?, at("s8.f", &a)?);
    let (c, g) = (mu.pow(2), mu.pow(3));
    let vars = ["W", "X", "Y", "Z"];
    let v = |n: &str| MultiPoly::var(&tower, &vars, n);
    let (w, x) = (v("W")?, v("X")?);
    let ly = &v("Y")? - &(&(&w.pow(2).scale(&a) + &(&w * &x).scale(&b)) + &x.pow(2).scale(&c));
    let gform = &(&w.pow(3).scale(&d) + &(&w.pow(2) * &x).scale(&e))
        + &(&(&w * &x.pow(2)).scale(&f) + &x.pow(3).scale(&g));
    let lz = &v("Z")? - &gform.scale(&tower.gen("i")?);
    let solved = solve_linear(&[ly.clone(), lz.clone()], &["Y", "Z"])?;
    let residue = restrict(surface, &tower, &solved)?;
    let fam = Family {
        label: FamilyLabel::S8Main(idx as u8 + 1),
        surface: SurfaceName::S8,
        tower,
        vars: vars.iter().map(|s| s.to_string()).collect(),
        equations: vec![ly, lz],
        parameter: "mu".into(),
        order: 30,
        constants: q.degree_in("T")? as usize,
        residue,
        chart: 0,
    };
    check_member(&fam)?;
    Ok(fam)
}
