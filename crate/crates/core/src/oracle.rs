//! Floating-point cross-check of the exact engine: t is specialized to a
//! rational number, every generator of a family's tower gets a complex
//! value, and the curves are rebuilt, sampled and intersected numerically.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::catalog::Catalog;
use crate::curves::{
    certify_s6_lines, enumerate_an, enumerate_dn, enumerate_s7, enumerate_s8, solve_linear, CurveError, Family,
};
use crate::exact::{
    count_real_roots, refine_root, AlgebraError, CFixed, Embedding, FieldElement, Interval, MultiPoly, StepData, Tower,
};
use crate::exec::Execution;
use crate::galois::{analyze, Case, FamilyMeetings, GaloisError};
use crate::geometry::{GeometryError, SurfaceSpec};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Galois(#[from] GaloisError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("root finder did not converge for degree {degree} within {iterations} iterations")]
    NoConvergence { degree: usize, iterations: usize },
    #[error("roots not separated: {0}")]
    Clustered(String),
    #[error("{0}")]
    Input(String),
}

type Res<T> = Result<T, OracleError>;

#[derive(Clone, Debug, Serialize)]
pub struct NumericConfig {
    #[serde(serialize_with = "show")]
    pub t: BigRational,
    /// Relative residue bound (against the 1-norm of the terms).
    pub tol: f64,
    /// Two curves meet when the second form is below this at a root of the first.
    pub meet_tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

fn show<S: serde::Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig { t: BigRational::from_integer(2.into()), tol: 1e-8, meet_tol: 1e-6, max_iter: 500, seed: 0 }
    }
}

impl NumericConfig {
    pub fn at(t: i64) -> NumericConfig {
        NumericConfig { t: BigRational::from_integer(t.into()), ..Default::default() }
    }

    fn t_value(&self) -> Res<f64> {
        if self.t.is_zero() {
            return Err(OracleError::Input("t = 0 is the singular fibre".into()));
        }
        if !(self.tol > 0.0 && self.meet_tol > 0.0) {
            return Err(OracleError::Input("tolerances must be positive".into()));
        }
        self.t.to_f64().ok_or_else(|| OracleError::Input(format!("t = {} is out of range", self.t)))
    }
}

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// |p(z)| against Σ|a_j||z|^j.
pub fn relative_residue(c: &[Complex64], z: Complex64) -> f64 {
    let (p, _) = horner(c, z);
    let scale: f64 = c.iter().rev().fold(0.0, |acc, a| acc * z.norm() + a.norm());
    if scale == 0.0 { 0.0 } else { p.norm() / scale }
}

/// Initial radii from the upper convex hull of (j, log|a_j|).
fn newton_polygon_radii(c: &[Complex64]) -> Vec<f64> {
    let n = c.len() - 1;
    let pts: Vec<(usize, f64)> =
        c.iter().enumerate().filter(|(_, a)| a.norm() > 0.0).map(|(j, a)| (j, a.norm().ln())).collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut radii = Vec::with_capacity(n);
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        let r = ((a.1 - b.1) / (b.0 - a.0) as f64).exp();
        radii.extend(std::iter::repeat_n(r, b.0 - a.0));
    }
    radii
}

/// All roots of Σ c_j X^j (low to high) by Aberth–Ehrlich iteration on the
/// monic polynomial rescaled by X = σX′, σ the geometric mean of the root
/// moduli. Sorted by real part, then imaginary part.
pub fn numeric_roots(coeffs: &[Complex64], cfg: &NumericConfig) -> Res<Vec<Complex64>> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|a| a.norm() == 0.0) {
        c.pop();
    }
    if c.len() <= 1 {
        return if c.is_empty() { Err(OracleError::Input("zero polynomial".into())) } else { Ok(Vec::new()) };
    }
    let zeros = c.iter().take_while(|a| a.norm() == 0.0).count();
    let c = c.split_off(zeros);
    let n = c.len() - 1;
    let mut roots = vec![Complex64::zero(); zeros];
    if n == 0 {
        return Ok(roots);
    }
    let sigma = (c[0].norm() / c[n].norm()).powf(1.0 / n as f64);
    let b: Vec<Complex64> = c.iter().enumerate().map(|(j, a)| a * sigma.powi(j as i32) / (c[n] * sigma.powi(n as i32))).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let offset: f64 = rng.random_range(0.0..2.0 * PI);
    let radii = newton_polygon_radii(&b);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radii[k], 2.0 * PI * k as f64 / n as f64 + offset + 0.4))
        .collect();
    let mut converged = vec![false; n];
    for _ in 0..cfg.max_iter {
        for i in 0..n {
            if converged[i] {
                continue;
            }
            let (p, dp) = horner(&b, z[i]);
            if p.norm() == 0.0 {
                converged[i] = true;
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            z[i] -= w;
            if w.norm() <= 1e-15 * z[i].norm().max(1e-300) {
                converged[i] = true;
            }
        }
        if converged.iter().all(|&c| c) {
            break;
        }
    }
    // one Newton step on the unscaled polynomial
    let mut out: Vec<Complex64> = z
        .iter()
        .map(|&r| {
            let x = r * sigma;
            let (p, dp) = horner(&c, x);
            let y = if dp.norm() > 0.0 { x - p / dp } else { x };
            if relative_residue(&c, y) <= relative_residue(&c, x) { y } else { x }
        })
        .collect();
    if out.iter().any(|&x| relative_residue(&c, x) > cfg.tol || !x.is_finite()) {
        return Err(OracleError::NoConvergence { degree: n, iterations: cfg.max_iter });
    }
    for i in 0..n {
        for j in 0..i {
            let d = (out[i] - out[j]).norm();
            if d <= 1e-12 * out[i].norm().max(out[j].norm()) {
                return Err(OracleError::Clustered(format!("{} and {}", out[i], out[j])));
            }
        }
    }
    roots.append(&mut out);
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(roots)
}

/// A tower element at high-precision generator values, rounded to f64.
fn ev(c: &FieldElement, gens: &[CFixed]) -> Res<Complex64> {
    c.eval_fixed(gens)
        .map(|z| z.to_c64())
        .ok_or_else(|| OracleError::Input(format!("pole while evaluating {}", c)))
}

/// Chooses a root numerically and refines it in fixed point, so that large
/// polynomial coefficients in the generators do not cancel catastrophically
/// in double precision.
fn refined(c: &[CFixed], z: Complex64) -> Res<CFixed> {
    refine_root(c, z, 6).ok_or_else(|| OracleError::Clustered("singular Newton step".into()))
}

fn exact_coeffs(m: &[FieldElement], gens: &[CFixed]) -> Res<Vec<CFixed>> {
    m.iter()
        .map(|a| a.eval_fixed(gens).ok_or_else(|| OracleError::Input(format!("pole while evaluating {a}"))))
        .collect()
}

fn radical_coeffs(n: usize, r: CFixed) -> Vec<CFixed> {
    let mut c = vec![CFixed::zero(); n + 1];
    c[0] = -&r;
    c[n] = CFixed::one();
    c
}

/// Values of i, √3 and t used for every tower: the upper roots and t itself.
fn base_value(tower: &Tower, k: usize, vals: &[CFixed], cfg: &NumericConfig) -> Res<CFixed> {
    Ok(match tower.step_data(k) {
        StepData::Function => CFixed::rational(&cfg.t),
        StepData::Algebraic(m) => {
            let c = exact_coeffs(&m, vals)?;
            let cf: Vec<Complex64> = c.iter().map(|z| z.to_c64()).collect();
            refined(&c, principal(&numeric_roots(&cf, cfg)?))?
        }
        StepData::Radical(n, r) => {
            let rv = exact_coeffs(&[r], vals)?.pop().unwrap();
            let z = rv.to_c64().powf(1.0 / n as f64);
            refined(&radical_coeffs(n, rv), z)?
        }
    })
}

fn principal(roots: &[Complex64]) -> Complex64 {
    let key = |z: &Complex64| (if z.im.abs() > 1e-9 * z.norm() { z.im } else { 0.0 }, z.re);
    *roots.iter().max_by(|a, b| key(a).partial_cmp(&key(b)).unwrap()).unwrap()
}

/// Index of the step holding the conjugate constants (θ: roots of Q, Q₁, …).
fn constants_step(fam: &Family) -> Option<usize> {
    if fam.constants <= 1 {
        return None;
    }
    (0..fam.tower.depth()).rev().find(|&k| matches!(fam.tower.step_data(k), StepData::Algebraic(ref m) if m.len() == fam.constants + 1))
}

/// Generator values for every member of a family, in member order.
fn member_embeddings(fam: &Family, cfg: &NumericConfig) -> Res<Vec<Vec<CFixed>>> {
    cfg.t_value()?;
    let cstep = constants_step(fam);
    let mut out = Vec::with_capacity(fam.count());
    for root in 0..fam.constants {
        for power in 0..fam.order {
            let mut vals: Vec<CFixed> = Vec::with_capacity(fam.tower.depth());
            for k in 0..fam.tower.depth() {
                let v = match (fam.tower.step_data(k), cstep) {
                    (StepData::Algebraic(m), Some(c)) if c == k => {
                        let coeffs = exact_coeffs(&m, &vals)?;
                        let cf: Vec<Complex64> = coeffs.iter().map(|z| z.to_c64()).collect();
                        let roots = numeric_roots(&cf, cfg)?;
                        if roots.len() != fam.constants {
                            return Err(OracleError::Clustered(format!("{}: {} constants", fam.label, roots.len())));
                        }
                        refined(&coeffs, roots[root])?
                    }
                    (StepData::Radical(n, r), _) if fam.tower.generators()[k] == fam.parameter => {
                        let rv = exact_coeffs(&[r], &vals)?.pop().unwrap();
                        let rf = rv.to_c64();
                        if !(rf.norm() > 0.0 && rf.is_finite()) {
                            return Err(OracleError::Input(format!("{}: radicand vanishes at t = {}", fam.label, cfg.t)));
                        }
                        let z = rf.powf(1.0 / n as f64) * Complex64::from_polar(1.0, 2.0 * PI * power as f64 / n as f64);
                        refined(&radical_coeffs(n, rv), z)?
                    }
                    _ => base_value(&fam.tower, k, &vals, cfg)?,
                };
                vals.push(v);
            }
            out.push(vals);
        }
    }
    Ok(out)
}

/// Homogeneous binary form Σ c_j u^{d−j} v^j, with the absolute sizes of
/// what was summed into each coefficient (to detect cancellation).
#[derive(Clone, Debug)]
struct Form {
    c: Vec<Complex64>,
    abs: Vec<f64>,
}

impl Form {
    fn constant(z: Complex64) -> Form {
        Form { c: vec![z], abs: vec![z.norm()] }
    }

    /// The zero form, homogeneous of every degree.
    fn zero() -> Form {
        Form { c: vec![], abs: vec![] }
    }

    fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    fn mul(&self, o: &Form) -> Form {
        if self.c.is_empty() || o.c.is_empty() {
            return Form::zero();
        }
        let n = self.c.len() + o.c.len() - 1;
        let mut c = vec![Complex64::zero(); n];
        let mut abs = vec![0.0; n];
        for (i, (a, aa)) in self.c.iter().zip(&self.abs).enumerate() {
            for (j, (b, bb)) in o.c.iter().zip(&o.abs).enumerate() {
                c[i + j] += a * b;
                abs[i + j] += aa * bb;
            }
        }
        Form { c, abs }
    }

    fn add_assign(&mut self, o: &Form) -> Res<()> {
        if o.c.is_empty() {
            return Ok(());
        }
        if self.c.is_empty() {
            *self = o.clone();
            return Ok(());
        }
        if self.degree() != o.degree() {
            return Err(OracleError::Input("inhomogeneous curve equation".into()));
        }
        for j in 0..self.c.len() {
            self.c[j] += o.c[j];
            self.abs[j] += o.abs[j];
        }
        Ok(())
    }

    fn is_zero(&self, tol: f64) -> bool {
        self.c.iter().zip(&self.abs).all(|(a, s)| a.norm() <= tol * s.max(f64::MIN_POSITIVE))
    }

    fn rel_eval(&self, u: Complex64, v: Complex64) -> f64 {
        let d = self.degree() as i32;
        let mut val = Complex64::zero();
        let mut scale = 0.0;
        for (j, (a, s)) in self.c.iter().zip(&self.abs).enumerate() {
            let m = u.powi(d - j as i32) * v.powi(j as i32);
            val += a * m;
            scale += s * m.norm();
        }
        if scale == 0.0 { 0.0 } else { val.norm() / scale }
    }

    /// Projective roots (u : v), normalized to unit length.
    fn roots(&self, tol: f64, cfg: &NumericConfig) -> Res<Vec<(Complex64, Complex64)>> {
        if self.c.is_empty() {
            return Err(OracleError::Input("roots of the zero form".into()));
        }
        let cleaned: Vec<Complex64> = self
            .c
            .iter()
            .zip(&self.abs)
            .map(|(a, s)| if a.norm() <= tol * s { Complex64::zero() } else { *a })
            .collect();
        // in r = v/u: Σ c_j r^j; missing top degree means roots at u = 0
        let top = cleaned.iter().rposition(|a| a.norm() > 0.0).unwrap_or(0);
        let mut out: Vec<(Complex64, Complex64)> = numeric_roots(&cleaned[..=top], cfg)?
            .into_iter()
            .map(|r| {
                let n = (1.0 + r.norm_sqr()).sqrt();
                (Complex64::new(1.0 / n, 0.0), r / n)
            })
            .collect();
        out.extend((top..self.degree()).map(|_| (Complex64::zero(), Complex64::new(1.0, 0.0))));
        Ok(out)
    }
}

/// A member rebuilt numerically: its equations and its parametrization by
/// the two free coordinates.
#[derive(Clone, Debug)]
pub struct NumericCurve {
    pub name: String,
    pub family: usize,
    pub root: usize,
    pub power: usize,
    equations: Vec<Vec<(Vec<u32>, Complex64)>>,
    /// Per coordinate, a form in the free coordinates (u, v).
    param: Vec<Form>,
    vars: Vec<String>,
    gen_names: Vec<String>,
    values: Vec<Complex64>,
}

fn numeric_poly(p: &MultiPoly, gens: &[CFixed]) -> Res<Vec<(Vec<u32>, Complex64)>> {
    p.terms().map(|(m, c)| Ok((m.0.clone(), ev(&c, gens)?))).collect()
}

fn substitute(eq: &[(Vec<u32>, Complex64)], param: &[Form]) -> Res<Form> {
    let mut acc: Option<Form> = None;
    for (m, c) in eq {
        let mut t = Form::constant(*c);
        for (i, &e) in m.iter().enumerate() {
            for _ in 0..e {
                t = t.mul(&param[i]);
            }
        }
        match &mut acc {
            None => acc = Some(t),
            Some(a) => a.add_assign(&t)?,
        }
    }
    acc.ok_or_else(|| OracleError::Input("empty equation".into()))
}

/// Which coordinate each equation is solved for: linear with a constant
/// coefficient and absent from the other equations.
fn targets(fam: &Family) -> Res<Vec<String>> {
    let mut out = Vec::new();
    for (i, eq) in fam.equations.iter().enumerate() {
        let pick = fam.vars.iter().find(|v| {
            !out.contains(*v)
                && eq.as_univariate(v).is_ok_and(|p| p.len() == 2 && p[1].is_constant())
                && fam.equations.iter().enumerate().all(|(j, e)| j == i || e.degree_in(v).is_ok_and(|d| d == 0))
        });
        match pick {
            Some(v) => out.push(v.clone()),
            None => return Err(OracleError::Input(format!("{}: equation {i} has no solvable coordinate", fam.label))),
        }
    }
    Ok(out)
}

pub fn rebuild_family(fam: &Family, index: usize, cfg: &NumericConfig) -> Res<Vec<NumericCurve>> {
    let tg = targets(fam)?;
    let tr: Vec<&str> = tg.iter().map(|s| s.as_str()).collect();
    let solved = solve_linear(&fam.equations, &tr)?;
    let free: Vec<usize> = (0..fam.vars.len()).filter(|&i| !tg.contains(&fam.vars[i])).collect();
    if free.len() != 2 {
        return Err(OracleError::Input(format!("{}: curve is not a parametrized P^1", fam.label)));
    }
    let embs = member_embeddings(fam, cfg)?;
    let mut out = Vec::with_capacity(embs.len());
    for (idx, exact) in embs.into_iter().enumerate() {
        let values: Vec<Complex64> = exact.iter().map(|z| z.to_c64()).collect();
        let mut param = Vec::with_capacity(fam.vars.len());
        for (i, v) in fam.vars.iter().enumerate() {
            let form = if let Some(k) = free.iter().position(|&f| f == i) {
                let mut c = vec![Complex64::zero(); 2];
                c[k] = Complex64::new(1.0, 0.0);
                Form { abs: vec![if k == 0 { 1.0 } else { 0.0 }, if k == 1 { 1.0 } else { 0.0 }], c }
            } else {
                let (_, expr) = solved.iter().find(|(n, _)| n == v).unwrap();
                let mut f: Option<Form> = None;
                for (m, c) in expr.terms() {
                    let d = (m.0[free[0]] + m.0[free[1]]) as usize;
                    let mut t = Form { c: vec![Complex64::zero(); d + 1], abs: vec![0.0; d + 1] };
                    let z = ev(&c, &exact)?;
                    t.c[m.0[free[1]] as usize] = z;
                    t.abs[m.0[free[1]] as usize] = z.norm();
                    match &mut f {
                        None => f = Some(t),
                        Some(a) => a.add_assign(&t)?,
                    }
                }
                f.unwrap_or_else(Form::zero)
            };
            param.push(form);
        }
        let (root, power) = (idx / fam.order, idx % fam.order);
        out.push(NumericCurve {
            name: format!("{}[{root},{power}]", fam.label),
            family: index,
            root,
            power,
            equations: fam.equations.iter().map(|e| numeric_poly(e, &exact)).collect::<Res<_>>()?,
            param,
            vars: fam.vars.clone(),
            gen_names: fam.tower.generators().iter().map(|g| g.to_string()).collect(),
            values,
        });
    }
    Ok(out)
}

impl NumericCurve {
    fn point(&self, u: Complex64, v: Complex64) -> Vec<Complex64> {
        self.param
            .iter()
            .map(|f| {
                let d = f.degree() as i32;
                f.c.iter().enumerate().map(|(j, a)| a * u.powi(d - j as i32) * v.powi(j as i32)).sum()
            })
            .collect()
    }

    /// Largest relative residue of the surface equation at `k` random points.
    fn membership(&self, surface: &SurfaceSpec, chart: usize, k: usize, rng: &mut ChaCha8Rng) -> Res<f64> {
        let eq = &surface.equations[chart];
        let gens = surface.base.generators();
        let values: Vec<Complex64> = gens
            .iter()
            .map(|g| self.generator(g).ok_or_else(|| OracleError::Input(format!("{g} has no value"))))
            .collect::<Res<_>>()?;
        let emb = Embedding { values };
        let order: Vec<usize> = eq
            .vars()
            .iter()
            .map(|v| self.vars.iter().position(|w| w == v).ok_or_else(|| OracleError::Input(format!("no coordinate {v}"))))
            .collect::<Res<_>>()?;
        let mut worst: f64 = 0.0;
        for _ in 0..k {
            let u = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let v = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let p = self.point(u, v);
            let pt: Vec<Complex64> = order.iter().map(|&i| p[i]).collect();
            let (val, scale) = eq.eval_numeric(&emb, &pt);
            worst = worst.max(if scale == 0.0 { 0.0 } else { val.norm() / scale });
        }
        Ok(worst)
    }

    fn generator(&self, name: &str) -> Option<Complex64> {
        self.gen_names.iter().position(|g| g == name).map(|i| self.values[i])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    Same,
    Meet,
    Disjoint,
}

/// How B's equations restrict to A's parametrization; the second value is
/// the decisive relative size (small for meetings).
fn relation(a: &NumericCurve, b: &NumericCurve, cfg: &NumericConfig) -> Res<(Relation, f64)> {
    let forms: Vec<Form> = b.equations.iter().map(|e| substitute(e, &a.param)).collect::<Res<_>>()?;
    let live: Vec<&Form> = forms.iter().filter(|f| !f.is_zero(cfg.meet_tol)).collect();
    match live.as_slice() {
        [] => Ok((Relation::Same, 0.0)),
        [f] => Ok(if f.degree() == 0 { (Relation::Disjoint, 1.0) } else { (Relation::Meet, 0.0) }),
        [f, g] => {
            if f.degree() == 0 || g.degree() == 0 {
                return Ok((Relation::Disjoint, 1.0));
            }
            let (f, g) = if f.degree() <= g.degree() { (f, g) } else { (g, f) };
            let best = f
                .roots(cfg.meet_tol, cfg)?
                .into_iter()
                .map(|(u, v)| g.rel_eval(u, v))
                .fold(f64::INFINITY, f64::min);
            Ok((if best <= cfg.meet_tol { Relation::Meet } else { Relation::Disjoint }, best))
        }
        _ => Err(OracleError::Input("curves must be cut by two equations".into())),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyAudit {
    pub family: String,
    pub members: usize,
    pub max_residue: f64,
    /// k such that members j and j + k (same constant) meet, for every j.
    pub numeric_differences: BTreeSet<usize>,
    pub exact_differences: Option<BTreeSet<usize>>,
    pub exact_complete: bool,
    /// Pairs where the exact claim and the numeric graph disagree.
    pub mismatches: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub surface: String,
    pub config: NumericConfig,
    pub expected: usize,
    pub count: usize,
    pub max_residue: f64,
    pub worst_curve: String,
    pub edges: usize,
    pub degrees: Vec<usize>,
    /// Largest decisive value among meetings and smallest among disjoint
    /// pairs: the gap the meet tolerance sits in.
    pub meet_margin: (f64, f64),
    pub families: Vec<FamilyAudit>,
    pub checks: Vec<OracleCheck>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn case_families(cat: &Catalog, case: Case) -> Res<Vec<Arc<Family>>> {
    Ok(match case {
        Case::E6 => certify_s6_lines(cat)?.families,
        Case::E7 => enumerate_s7(cat)?.families,
        Case::E8 => enumerate_s8(cat)?.families,
        Case::Dn(n) => enumerate_dn(cat, n)?,
        Case::An(n) => enumerate_an(cat, n)?,
    })
}

/// Rebuilds every member, samples 5 points per curve on the surface and
/// compares the intersection graph with the exact meeting sets.
pub fn numeric_curve_audit(
    surface: &SurfaceSpec,
    families: &[Arc<Family>],
    exact: Option<&[FamilyMeetings]>,
    cfg: &NumericConfig,
    exec: Execution,
) -> Res<AuditReport> {
    let indexed: Vec<(usize, &Arc<Family>)> = families.iter().enumerate().collect();
    let curves: Vec<NumericCurve> =
        exec.try_map(&indexed, |(i, f)| rebuild_family(f, *i, cfg))?.into_iter().flatten().collect();
    let residues: Vec<f64> = exec.try_map(&curves, |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (c.family as u64) << 32 ^ (c.root * 1000 + c.power) as u64);
        c.membership(surface, families[c.family].chart, 5, &mut rng)
    })?;
    let n = curves.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let rel = exec.try_map(&pairs, |&(i, j)| relation(&curves[i], &curves[j], cfg))?;

    let mut same = vec![false; n];
    let mut degrees = vec![0usize; n];
    let mut meets = vec![BTreeSet::new(); n];
    let mut margin = (0.0f64, f64::INFINITY);
    for (&(i, j), &(r, v)) in pairs.iter().zip(&rel) {
        match r {
            Relation::Same => same[j] = true,
            Relation::Meet => {
                degrees[i] += 1;
                degrees[j] += 1;
                meets[i].insert(j);
                meets[j].insert(i);
                margin.0 = margin.0.max(v);
            }
            Relation::Disjoint => margin.1 = margin.1.min(v),
        }
    }
    let count = same.iter().filter(|&&s| !s).count();
    let expected: usize = families.iter().map(|f| f.count()).sum();
    let (worst, max_residue) =
        residues.iter().enumerate().fold((0, 0.0f64), |acc, (i, &r)| if r > acc.1 { (i, r) } else { acc });

    let mut fam_audits = Vec::new();
    let mut offset = 0;
    for f in families {
        let members = f.count();
        let local = |root: usize, p: usize| offset + root * f.order + p;
        let numeric_differences: BTreeSet<usize> = (1..f.order)
            .filter(|&k| {
                (0..f.constants)
                    .all(|r| (0..f.order).all(|j| meets[local(r, j)].contains(&local(r, (j + k) % f.order))))
            })
            .collect();
        let claim = exact.and_then(|e| e.iter().find(|m| m.family == f.label));
        let mut mismatches = Vec::new();
        if let Some(m) = claim {
            for r in 0..f.constants {
                for a in 0..f.order {
                    for b in 0..f.order {
                        if a == b {
                            continue;
                        }
                        let k = (b + f.order - a) % f.order;
                        let said = m.differences.contains(&k);
                        let seen = meets[local(r, a)].contains(&local(r, b));
                        if (said && !seen) || (m.complete && !said && seen) {
                            mismatches.push(format!("{} / {}: exact {said}, numeric {seen}", curves[local(r, a)].name, curves[local(r, b)].name));
                        }
                    }
                }
            }
        }
        let max_res = residues[offset..offset + members].iter().cloned().fold(0.0, f64::max);
        fam_audits.push(FamilyAudit {
            family: f.label.to_string(),
            members,
            max_residue: max_res,
            numeric_differences,
            exact_differences: claim.map(|m| m.differences.clone()),
            exact_complete: claim.is_some_and(|m| m.complete),
            mismatches,
        });
        offset += members;
    }

    let mut checks = vec![
        OracleCheck {
            name: "count".into(),
            passed: count == expected,
            detail: format!("{count} distinct curves, {expected} expected"),
        },
        OracleCheck {
            name: "membership".into(),
            passed: max_residue < cfg.tol,
            detail: format!("max relative residue {max_residue:.3e} on {}", curves.get(worst).map_or("-", |c| &c.name)),
        },
    ];
    if exact.is_some() {
        let bad: Vec<&String> = fam_audits.iter().flat_map(|f| &f.mismatches).collect();
        checks.push(OracleCheck {
            name: "exact agreement".into(),
            passed: bad.is_empty(),
            detail: if bad.is_empty() { "all exact verdicts reproduced".into() } else { format!("{} mismatches, first {}", bad.len(), bad[0]) },
        });
    }
    Ok(AuditReport {
        surface: surface.name.to_string(),
        config: cfg.clone(),
        expected,
        count,
        max_residue,
        worst_curve: curves.get(worst).map_or(String::new(), |c| c.name.clone()),
        edges: meets.iter().map(|m| m.len()).sum::<usize>() / 2,
        degrees,
        meet_margin: margin,
        families: fam_audits,
        checks,
    })
}

/// Audits a case at several specializations against one exact analysis.
pub fn audit_case(cat: &Catalog, case: Case, cfgs: &[NumericConfig], exec: Execution) -> Res<Vec<AuditReport>> {
    let surface = SurfaceSpec::build(case.surface(), cat)?;
    let families = case_families(cat, case)?;
    let exact = analyze(cat, case)?;
    cfgs.iter().map(|cfg| numeric_curve_audit(&surface, &families, Some(&exact.families), cfg, exec)).collect()
}

/// Roots of a univariate polynomial whose coefficients may involve i, √3
/// and t, under the embedding i ↦ i, √3 ↦ 1.732…, t ↦ cfg.t.
pub fn numeric_roots_poly(p: &MultiPoly, var: &str, cfg: &NumericConfig) -> Res<Vec<Complex64>> {
    cfg.t_value()?;
    let tower = p.tower();
    let mut vals = Vec::new();
    for k in 0..tower.depth() {
        vals.push(base_value(tower, k, &vals, cfg)?);
    }
    let emb = Embedding { values: vals.iter().map(|z| z.to_c64()).collect() };
    numeric_roots(&p.numeric_coefficients(var, &emb)?, cfg)
}

#[derive(Clone, Debug, Serialize)]
pub struct RealRootCheck {
    pub name: String,
    pub polynomial: String,
    pub sturm: usize,
    pub numeric: usize,
    pub degree: usize,
}

/// Sturm counts against numeric roots with |Im z| < tol·|z|.
pub fn real_root_check(name: &str, p: &MultiPoly, var: &str, cfg: &NumericConfig) -> Res<RealRootCheck> {
    let sturm = count_real_roots(p, var, &Interval::All)?;
    let roots = numeric_roots_poly(p, var, cfg)?;
    let numeric = roots.iter().filter(|z| z.im.abs() < cfg.tol * z.norm().max(1.0)).count();
    Ok(RealRootCheck { name: name.into(), polynomial: p.to_string(), sturm, numeric, degree: roots.len() })
}

/// Q, Q₁ and Q₂ from the catalog.
pub fn residual_real_roots(cat: &Catalog, cfg: &NumericConfig) -> Res<Vec<RealRootCheck>> {
    let mut out = vec![real_root_check("Q", &cat.poly("s7.Q")?, "X", cfg)?];
    for (i, p) in cat.polys("s8.Q")?.iter().enumerate() {
        out.push(real_root_check(&format!("Q{}", i + 1), p, "X", cfg)?);
    }
    Ok(out)
}
