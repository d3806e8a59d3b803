//! Galois orbits of curve families over K = ℂ(t^{1/m}), exact intersection
//! witnesses between conjugate curves, minimal-model bookkeeping and the
//! rationality verdicts.
//!
//! A family with parameter μ, μᴺ = c·t, splits over ℂ(s), sᵐ = t, as
//! Xᴺ − c·sᵐ = ∏ (X^{N/g} − c^{1/g} ζ_g^b s^{m/g}) with g = gcd(N, m): the
//! orbit of member j (parameter ζ_N^j μ) is {j' : j' ≡ j mod g}.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::catalog::{BaseField, Catalog};
use crate::curves::{
    certify_s6_lines, enumerate_an, enumerate_dn, enumerate_s7, enumerate_s8, solve_linear, CurveError, Family,
    FamilyLabel,
};
use crate::exact::{AlgebraError, FieldElement, MultiPoly, Tower};
use crate::exec::Execution;
use crate::geometry::{on_surface, GeometryError, PointSpec, SurfaceName, SurfaceSpec};

#[derive(Debug, Error)]
pub enum GaloisError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("degenerate line: {0}")]
    DegenerateLine(String),
    #[error("intersection witness for {pair} failed: {detail}")]
    Witness { pair: String, detail: String },
    #[error("no rule decides {case} over m = {m}: {detail}")]
    Undecided { case: Case, m: u32, detail: String },
    #[error("consistency failure for {case}, m = {m}: rule table says rational = {rule}, but a = {a}")]
    Inconsistent { case: Case, m: u32, rule: bool, a: u32 },
    #[error("{0}")]
    Input(String),
}

type Res<T> = Result<T, GaloisError>;

/// The surfaces the verdicts are about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Case {
    An(u32),
    Dn(u32),
    E6,
    E7,
    E8,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Case::An(n) => write!(f, "a{n}"),
            Case::Dn(n) => write!(f, "d{n}"),
            Case::E6 => write!(f, "e6"),
            Case::E7 => write!(f, "e7"),
            Case::E8 => write!(f, "e8"),
        }
    }
}

impl FromStr for Case {
    type Err = GaloisError;
    fn from_str(s: &str) -> Res<Case> {
        let bad = || GaloisError::Input(format!("unknown case {s:?} (expected aN, dN, e6, e7 or e8)"));
        let num = |r: &str, min: u32| -> Res<u32> {
            let n: u32 = r.trim_start_matches(['_', ':']).parse().map_err(|_| bad())?;
            if n < min || n > 64 {
                return Err(GaloisError::Input(format!("{s}: n must be in {min}..=64")));
            }
            Ok(n)
        };
        match s.to_ascii_lowercase().as_str() {
            "e6" => Ok(Case::E6),
            "e7" => Ok(Case::E7),
            "e8" => Ok(Case::E8),
            l if l.starts_with('a') => Ok(Case::An(num(&l[1..], 2)?)),
            l if l.starts_with('d') => Ok(Case::Dn(num(&l[1..], 4)?)),
            _ => Err(bad()),
        }
    }
}

impl Case {
    /// The degree a with "rational over ℂ(t^{1/m}) ⟺ a | m".
    pub fn degree(self, cat: &Catalog) -> Res<u32> {
        let e = |i: usize| -> Res<u32> {
            let v = cat.coeffs("degrees.e")?[i]
                .to_rational()
                .filter(|q| q.is_integer())
                .and_then(|q| u32::try_from(q.to_integer()).ok())
                .filter(|&v| v > 0);
            v.ok_or_else(|| GaloisError::Input("degrees.e must hold positive integers".into()))
        };
        Ok(match self {
            Case::An(_) => 1,
            Case::Dn(n) => 1 << (2 * (n - 1)).trailing_zeros(),
            Case::E6 => e(0)?,
            Case::E7 => e(1)?,
            Case::E8 => e(2)?,
        })
    }

    pub fn surface(self) -> SurfaceName {
        match self {
            Case::An(n) => SurfaceName::An(n),
            Case::Dn(n) => SurfaceName::Dn(n),
            Case::E6 => SurfaceName::S6,
            Case::E7 => SurfaceName::S7,
            Case::E8 => SurfaceName::S8,
        }
    }
}

/// K = ℂ(s) with sᵐ = t.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BaseExtension {
    pub m: u32,
}

impl BaseExtension {
    pub fn new(m: u32) -> Res<BaseExtension> {
        if m == 0 {
            return Err(GaloisError::Input("m must be at least 1".into()));
        }
        Ok(BaseExtension { m })
    }

    /// ℚ(t)(s: sᵐ = t); the constants of K beyond ℚ never matter here.
    pub fn tower(&self) -> Res<Tower> {
        let qt = BaseField::Qt.tower();
        Ok(qt.with_radical("s", self.m as usize, &qt.gen("t")?)?)
    }
}

/// Blocks of {0, …, N−1} under j ↦ j mod gcd(N, m).
pub fn orbit_structure(n: usize, m: u32) -> Vec<Vec<usize>> {
    let g = n.gcd(&(m as usize));
    (0..g).map(|b| (b..n).step_by(g).collect()).collect()
}

// ---------------------------------------------------------------------------
// exact intersections

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub family: FamilyLabel,
    /// Order of ξ = ζ_N^k; the witness covers every k of that order.
    pub xi_order: usize,
    pub method: String,
    pub tower: String,
    pub point: Vec<String>,
}

/// Replaces the identifier `name` (whole tokens only) in canonical text.
fn replace_ident(text: &str, name: &str, with: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut word = String::new();
    let flush = |word: &mut String, out: &mut String| {
        if !word.is_empty() {
            out.push_str(if word == name { with } else { word });
            word.clear();
        }
    };
    for c in text.chars() {
        if c.is_ascii_alphanumeric() || c == '_' {
            if word.is_empty() && c.is_ascii_digit() {
                out.push(c);
            } else {
                word.push(c);
            }
        } else {
            flush(&mut word, &mut out);
            out.push(c);
        }
    }
    flush(&mut word, &mut out);
    out
}

/// The curve with its parameter p replaced by factor·p, read into `tower`.
pub fn conjugate_equations(eqs: &[MultiPoly], tower: &Tower, param: &str, factor: &str) -> Res<Vec<MultiPoly>> {
    eqs.iter()
        .map(|e| {
            let vars: Vec<&str> = e.vars().iter().map(|s| s.as_str()).collect();
            let text = replace_ident(&e.to_string(), param, &format!("({factor}*{param})"));
            Ok(MultiPoly::parse(tower, &vars, &text)?)
        })
        .collect()
}

fn row(form: &MultiPoly) -> Res<Vec<FieldElement>> {
    let t = form.tower();
    let n = form.vars().len();
    if !form.eval(&vec![t.zero(); n])?.is_zero() || form.total_degree().unwrap_or(1) != 1 {
        return Err(GaloisError::DegenerateLine(format!("{form} is not a linear form")));
    }
    (0..n)
        .map(|i| {
            let mut p = vec![t.zero(); n];
            p[i] = t.one();
            Ok(form.eval(&p)?)
        })
        .collect()
}

/// Laplace expansion; fine for the 2×2 … 4×4 matrices used here.
fn det(m: &[Vec<FieldElement>]) -> FieldElement {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    let mut acc = m[0][0].tower().zero();
    for j in 0..m.len() {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<FieldElement>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect())
            .collect();
        let term = &m[0][j] * &det(&minor);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

fn line_rows(l: &[MultiPoly]) -> Res<Vec<Vec<FieldElement>>> {
    if l.len() != 2 {
        return Err(GaloisError::DegenerateLine(format!("{} forms instead of 2", l.len())));
    }
    let rows = vec![row(&l[0])?, row(&l[1])?];
    let n = rows[0].len();
    let independent = (0..n).any(|a| {
        (a + 1..n).any(|b| !(&(&rows[0][a] * &rows[1][b]) - &(&rows[0][b] * &rows[1][a])).is_zero())
    });
    if !independent {
        return Err(GaloisError::DegenerateLine(format!("{} and {} are dependent", l[0], l[1])));
    }
    Ok(rows)
}

/// Two lines of ℙ³, each cut by two linear forms over one tower, meet iff
/// the stacked 4×4 matrix is singular.
pub fn lines_intersect_p3(l1: &[MultiPoly], l2: &[MultiPoly]) -> Res<bool> {
    if l1.iter().chain(l2).any(|f| f.tower() != l1[0].tower()) {
        return Err(AlgebraError::TowerMismatch.into());
    }
    let mut m = line_rows(l1)?;
    m.extend(line_rows(l2)?);
    if m.iter().any(|r| r.len() != 4) {
        return Err(GaloisError::DegenerateLine("lines must live in P^3".into()));
    }
    Ok(det(&m).is_zero())
}

/// The common point of two meeting lines: signed 3×3 minors of three
/// independent rows span the kernel.
pub fn line_meeting_point(l1: &[MultiPoly], l2: &[MultiPoly]) -> Res<Option<Vec<FieldElement>>> {
    if !lines_intersect_p3(l1, l2)? {
        return Ok(None);
    }
    let mut m = line_rows(l1)?;
    m.extend(line_rows(l2)?);
    for skip in 0..4 {
        let rows: Vec<&Vec<FieldElement>> = m.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, r)| r).collect();
        let v: Vec<FieldElement> = (0..4)
            .map(|j| {
                let minor: Vec<Vec<FieldElement>> = rows
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let d = det(&minor);
                if j % 2 == 0 {
                    d
                } else {
                    -&d
                }
            })
            .collect();
        if v.iter().any(|x| !x.is_zero()) {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

fn verify_point(
    pair: &str,
    surface: &SurfaceSpec,
    curves: &[&[MultiPoly]],
    point: &[FieldElement],
) -> Res<()> {
    let fail = |detail: String| Err(GaloisError::Witness { pair: pair.to_string(), detail });
    if point.iter().all(|c| c.is_zero()) {
        return fail("zero point".into());
    }
    for eq in curves.iter().flat_map(|c| c.iter()) {
        let v = eq.transfer(point[0].tower())?.eval(point)?;
        if !v.is_zero() {
            return fail(format!("{eq} does not vanish: {v}"));
        }
    }
    if !on_surface(surface, &PointSpec::new(point.to_vec()))? {
        return fail("point is not on the surface".into());
    }
    Ok(())
}

/// How the paper produces a common point of L_μ and L_{ξμ}.
#[derive(Clone, Copy, Debug)]
enum Recipe {
    /// Free coordinates fixed to these values; the solved ones follow.
    Fixed([i64; 2]),
    /// Root of the binary quadratic cut out by setting target j to zero.
    Quadratic(usize),
    /// Root r of the binary cubic at (r : 1) with target j zero.
    Cubic(usize),
}

fn weighted_witness(
    fam: &Family,
    surface: &SurfaceSpec,
    targets: [&str; 2],
    order: usize,
    recipe: Recipe,
) -> Res<Witness> {
    let pair = format!("{} vs its conjugate by a root of unity of order {order}", fam.label);
    let (ring, factor) = if order == 2 {
        (fam.tower.clone(), "-1".to_string())
    } else {
        // a ring, not necessarily a field: only ring operations follow
        (fam.tower.with_root_of_unity("zeta", order)?, "zeta".to_string())
    };
    let own: Vec<MultiPoly> = fam.equations.iter().map(|e| e.lift(&ring)).collect::<Result<_, _>>()?;
    let conj = conjugate_equations(&fam.equations, &ring, &fam.parameter, &factor)?;
    let vars: Vec<&str> = fam.vars.iter().map(|s| s.as_str()).collect();
    let free: Vec<usize> = (0..vars.len()).filter(|&i| !targets.contains(&vars[i])).collect();
    if free.len() != 2 {
        return Err(GaloisError::Witness { pair, detail: "expected two free coordinates".into() });
    }
    let at = |p: &MultiPoly, f: [&FieldElement; 2]| -> Res<FieldElement> {
        let z = f[0].tower().zero();
        let mut pt = vec![z; vars.len()];
        pt[free[0]] = f[0].clone();
        pt[free[1]] = f[1].clone();
        Ok(p.transfer(f[0].tower())?.eval(&pt)?)
    };
    let (tower, fv, method) = match recipe {
        Recipe::Fixed(v) => (ring.clone(), [ring.int(v[0]), ring.int(v[1])], format!("fixed point at ({}, {})", v[0], v[1])),
        Recipe::Quadratic(j) => {
            let (o, z) = (ring.one(), ring.zero());
            let al = at(&own[j], [&o, &z])?;
            let ga = at(&own[j], [&z, &o])?;
            let be = &(&at(&own[j], [&o, &o])? - &al) - &ga;
            let disc = &(&be * &be) - &(&(&al * &ga) * &ring.int(4));
            let mp = &MultiPoly::var(&ring, &["sigma"], "sigma")?.pow(2) - &MultiPoly::constant(&ring, &["sigma"], &disc);
            let t2 = ring.with_algebraic("sigma", &mp)?;
            let sigma = t2.gen("sigma")?;
            let p = [&t2.lift(&ga)? * &t2.int(2), &sigma - &t2.lift(&be)?];
            (t2, p, format!("root of the quadratic on {} = 0", targets[j]))
        }
        Recipe::Cubic(j) => {
            let r = MultiPoly::var(&ring, &["r"], "r")?;
            let one = MultiPoly::constant(&ring, &["r"], &ring.one());
            let zero = MultiPoly::zero(&ring, &["r"]);
            let images: Vec<MultiPoly> = (0..vars.len())
                .map(|i| if i == free[0] { r.clone() } else if i == free[1] { one.clone() } else { zero.clone() })
                .collect();
            let h = own[j].compose(&images)?;
            if h.degree_in("r")? != 3 {
                return Err(GaloisError::Witness { pair, detail: format!("{h} is not a cubic") });
            }
            let t2 = ring.with_algebraic("r", &h)?;
            let p = [t2.gen("r")?, t2.one()];
            (t2, p, format!("root of the cubic on {} = 0", targets[j]))
        }
    };
    let solved = solve_linear(&own, &targets)?;
    let mut point = vec![tower.zero(); vars.len()];
    point[free[0]] = fv[0].clone();
    point[free[1]] = fv[1].clone();
    for (name, expr) in &solved {
        let i = vars.iter().position(|v| v == name).unwrap();
        point[i] = at(expr, [&fv[0], &fv[1]])?;
    }
    let own_t: Vec<MultiPoly> = own.iter().map(|e| e.lift(&tower)).collect::<Result<_, _>>()?;
    let conj_t: Vec<MultiPoly> = conj.iter().map(|e| e.lift(&tower)).collect::<Result<_, _>>()?;
    verify_point(&pair, surface, &[&own_t, &conj_t], &point)?;
    Ok(Witness {
        family: fam.label,
        xi_order: order,
        method,
        tower: tower.describe(),
        point: point.iter().map(|c| c.to_string()).collect(),
    })
}

/// Meeting pattern of one family: member j meets member j + k exactly for
/// the listed k.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyMeetings {
    pub family: FamilyLabel,
    pub order: usize,
    pub constants: usize,
    pub differences: BTreeSet<usize>,
    /// Every difference outside the set is certified disjoint (otherwise
    /// only singleton orbits may be declared contractible).
    pub complete: bool,
    pub reason: String,
    pub witnesses: Vec<Witness>,
}

impl FamilyMeetings {
    fn meet(&self, a: usize, b: usize) -> bool {
        let n = self.order;
        a != b && self.differences.contains(&((b + n - a % n) % n))
    }
}

fn differences_of_orders(n: usize, orders: &[usize]) -> BTreeSet<usize> {
    (1..n).filter(|k| orders.contains(&(n / n.gcd(k)))).collect()
}

fn s6_meetings(cat: &Catalog) -> Res<Vec<FamilyMeetings>> {
    let surface = SurfaceSpec::build(SurfaceName::S6, cat)?;
    let lines = certify_s6_lines(cat)?;
    let mut out = Vec::new();
    for fam in &lines.families {
        let tower = if fam.tower.has_generator("sqrt3") {
            fam.tower.clone()
        } else {
            let b = BaseField::QiSqrt3.tower().with_function("t")?;
            b.with_radical(&fam.parameter, fam.order, &b.gen("t")?)?
        };
        let eqs: Vec<MultiPoly> = fam.equations.iter().map(|e| e.transfer(&tower)).collect::<Result<_, _>>()?;
        let mut differences = BTreeSet::new();
        let mut witnesses = Vec::new();
        for k in 1..fam.order {
            // ζ₁₂ = (√3 + i)/2
            let factor = format!("((sqrt3 + i)/2)^{}", 12 / fam.order * k);
            let conj = conjugate_equations(&eqs, &tower, &fam.parameter, &factor)?;
            if let Some(p) = line_meeting_point(&eqs, &conj)? {
                let pair = format!("{} members 0 and {k}", fam.label);
                verify_point(&pair, &surface, &[&eqs, &conj], &p)?;
                differences.insert(k);
                witnesses.push(Witness {
                    family: fam.label,
                    xi_order: fam.order / fam.order.gcd(&k),
                    method: format!("kernel of the stacked forms, k = {k}"),
                    tower: tower.describe(),
                    point: p.iter().map(|c| c.to_string()).collect(),
                });
            }
        }
        out.push(FamilyMeetings {
            family: fam.label,
            order: fam.order,
            constants: fam.constants,
            differences,
            complete: true,
            reason: "every conjugate pair tested by the 4x4 determinant".into(),
            witnesses,
        });
    }
    Ok(out)
}

fn weighted_meetings(
    fam: &Family,
    surface: &SurfaceSpec,
    targets: [&str; 2],
    recipes: &[(usize, Recipe)],
    complete: bool,
    reason: &str,
) -> Res<FamilyMeetings> {
    let witnesses = recipes
        .iter()
        .map(|&(order, r)| weighted_witness(fam, surface, targets, order, r))
        .collect::<Res<Vec<_>>>()?;
    let orders: Vec<usize> = recipes.iter().map(|r| r.0).collect();
    Ok(FamilyMeetings {
        family: fam.label,
        order: fam.order,
        constants: fam.constants,
        differences: differences_of_orders(fam.order, &orders),
        complete,
        reason: reason.into(),
        witnesses,
    })
}

fn disjoint_fibres(fam: &Family, reason: &str) -> FamilyMeetings {
    FamilyMeetings {
        family: fam.label,
        order: fam.order,
        constants: fam.constants,
        differences: BTreeSet::new(),
        complete: true,
        reason: reason.into(),
        witnesses: Vec::new(),
    }
}

// ---------------------------------------------------------------------------
// minimal models and verdicts

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MinimalModelDescriptor {
    DelPezzo(u32),
    /// Singular fibres left after contraction, not counting the fibre at
    /// infinity (at most one more).
    ConicBundle(u32),
}

impl fmt::Display for MinimalModelDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinimalModelDescriptor::DelPezzo(d) => write!(f, "del Pezzo surface of degree {d}"),
            MinimalModelDescriptor::ConicBundle(d) => write!(f, "conic bundle with {d} (+ at most 1) singular fibres"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Rule {
    /// Blown down to ℙ².
    ProjectivePlane,
    /// Minimal del Pezzo surface of degree ≤ 4.
    MinimalDelPezzoLowDegree,
    /// Minimal conic bundle with ≥ 4 singular fibres.
    ConicBundleManyFibres,
    /// Conic bundle with ≤ 1 singular fibre and a K-point.
    ConicBundleFewFibresWithPoint,
}

#[derive(Clone, Debug, Serialize)]
pub struct Orbit {
    pub members: Vec<usize>,
    pub pairwise_intersecting: bool,
    pub contractible: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    pub family: FamilyLabel,
    pub order: usize,
    /// Orbits repeat once per conjugate constant (root of Q, Q₁, …).
    pub constants: usize,
    pub g: usize,
    pub orbits: Vec<Orbit>,
}

/// Everything about a case that does not depend on m.
#[derive(Clone, Debug, Serialize)]
pub struct CaseData {
    pub case: Case,
    pub a: u32,
    pub families: Vec<FamilyMeetings>,
    /// Singular fibres of a conic bundle as pairs of (family, member).
    pub fibres: Vec<[(usize, usize); 2]>,
    #[serde(skip)]
    surface: Arc<SurfaceSpec>,
}

pub fn analyze(cat: &Catalog, case: Case) -> Res<CaseData> {
    let surface = SurfaceSpec::build(case.surface(), cat)?;
    let mut fibres = Vec::new();
    let families = match case {
        Case::E6 => s6_meetings(cat)?,
        Case::E7 => {
            let s7 = enumerate_s7(cat)?;
            let mut v = Vec::new();
            for f in &s7.families {
                v.push(match f.label {
                    FamilyLabel::S7E0 => weighted_meetings(
                        f, &surface, ["Y", "Z"], &[(2, Recipe::Fixed([0, 1]))], true, "two curves, met at (0:1:0:0)",
                    )?,
                    _ => weighted_meetings(
                        f,
                        &surface,
                        ["Y", "Z"],
                        &[(2, Recipe::Quadratic(1)), (3, Recipe::Fixed([1, 0]))],
                        false,
                        "only conjugate pairs with xi of order 2 or 3 are decided",
                    )?,
                });
            }
            v
        }
        Case::E8 => {
            let s8 = enumerate_s8(cat)?;
            let recipes = [(2, Recipe::Cubic(1)), (3, Recipe::Quadratic(0)), (5, Recipe::Fixed([1, 0]))];
            s8.families
                .iter()
                .map(|f| {
                    weighted_meetings(f, &surface, ["Y", "Z"], &recipes, false, "only xi of order 2, 3 or 5 are decided")
                })
                .collect::<Res<_>>()?
        }
        Case::Dn(n) => {
            let fams = enumerate_dn(cat, n)?;
            let x0 = weighted_meetings(&fams[0], &surface, ["x", "z"], &[(2, Recipe::Fixed([0, 1]))], true, "one fibre")?;
            let mu = weighted_meetings(
                &fams[1],
                &surface,
                ["x", "z"],
                &[(2, Recipe::Fixed([1, 0]))],
                true,
                "other members lie in other fibres",
            )?;
            fibres.push([(0, 0), (0, 1)]);
            let h = fams[1].order / 2;
            fibres.extend((0..h).map(|j| [(1, j), (1, j + h)]));
            vec![x0, mu]
        }
        Case::An(n) => {
            let fams = enumerate_an(cat, n)?;
            fibres.extend((0..n as usize).map(|j| [(0, j), (1, j)]));
            fams.iter().map(|f| disjoint_fibres(f, "members lie in distinct fibres")).collect()
        }
    };
    Ok(CaseData { case, a: case.degree(cat)?, families, fibres, surface: Arc::new(surface) })
}

fn orbit_reports(data: &CaseData, ext: BaseExtension) -> Res<Vec<OrbitReport>> {
    data.families
        .iter()
        .map(|f| {
            let blocks = orbit_structure(f.order, ext.m);
            let orbits = blocks
                .into_iter()
                .map(|members| {
                    let hit = members.iter().any(|&a| members.iter().any(|&b| f.meet(a, b)));
                    if !hit && !f.complete && members.len() > 1 {
                        return Err(GaloisError::Undecided {
                            case: data.case,
                            m: ext.m,
                            detail: format!("disjointness inside an orbit of {} is not decided", f.family),
                        });
                    }
                    Ok(Orbit { contractible: !hit, pairwise_intersecting: hit, members })
                })
                .collect::<Res<_>>()?;
            Ok(OrbitReport {
                family: f.family,
                order: f.order,
                constants: f.constants,
                g: f.order.gcd(&(ext.m as usize)),
                orbits,
            })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelReport {
    pub ext: BaseExtension,
    pub descriptor: MinimalModelDescriptor,
    pub orbits: Vec<OrbitReport>,
    pub contracted: Vec<String>,
    /// Steps taken from the paper rather than computed.
    pub axioms: Vec<String>,
}

pub fn minimal_model(data: &CaseData, ext: BaseExtension) -> Res<ModelReport> {
    let orbits = orbit_reports(data, ext)?;
    let mut contracted = Vec::new();
    let mut axioms = Vec::new();
    let descriptor = match data.case {
        Case::E6 | Case::E7 | Case::E8 => {
            let d0 = match data.case {
                Case::E6 => 3,
                Case::E7 => 2,
                _ => 1,
            };
            if orbits.iter().all(|o| o.g == o.order) {
                contracted.push(format!("{} pairwise disjoint (-1)-curves, all defined over K", 9 - d0));
                axioms.push("a del Pezzo surface whose (-1)-curves are all defined over K blows down to P^2".into());
                MinimalModelDescriptor::DelPezzo(9)
            } else {
                let with: Vec<usize> =
                    (0..orbits.len()).filter(|&i| orbits[i].orbits.iter().any(|o| o.contractible)).collect();
                if with.len() > 1 {
                    return Err(GaloisError::Undecided {
                        case: data.case,
                        m: ext.m,
                        detail: "contractible orbits in several families".into(),
                    });
                }
                let mut k = 0;
                if let Some(&fi) = with.first() {
                    let fam = &data.families[fi];
                    let mut chosen: Vec<&Orbit> = Vec::new();
                    for o in orbits[fi].orbits.iter().filter(|o| o.contractible) {
                        let disjoint = chosen
                            .iter()
                            .all(|c| c.members.iter().all(|&a| o.members.iter().all(|&b| !fam.meet(a, b))));
                        if disjoint && (fam.complete || o.members.len() == 1) {
                            k += o.members.len() * fam.constants;
                            contracted.push(format!("{} members {:?}", fam.family, o.members));
                            chosen.push(o);
                        }
                    }
                    axioms.push("after this contraction no further curve is contractible over K".into());
                }
                MinimalModelDescriptor::DelPezzo(d0 + k as u32)
            }
        }
        Case::An(_) | Case::Dn(_) => {
            let orbit_of = |(f, j): (usize, usize)| (f, j % orbits[f].g);
            let mut done: BTreeSet<(usize, usize)> = BTreeSet::new();
            for fib in &data.fibres {
                let (a, b) = (orbit_of(fib[0]), orbit_of(fib[1]));
                if a == b || done.contains(&a) || done.contains(&b) {
                    continue;
                }
                let report = &orbits[a.0];
                let orbit = &report.orbits[a.1];
                // one component of each fibre the orbit touches
                let clash = data.fibres.iter().any(|f| orbit_of(f[0]) == a && orbit_of(f[1]) == a);
                if !orbit.contractible || clash {
                    continue;
                }
                contracted.push(format!("{} members {:?}", report.family, orbit.members));
                done.insert(a);
            }
            let left = data
                .fibres
                .iter()
                .filter(|f| !done.contains(&orbit_of(f[0])) && !done.contains(&orbit_of(f[1])))
                .count();
            axioms.push("the fibre at infinity adds at most one singular fibre".into());
            MinimalModelDescriptor::ConicBundle(left as u32)
        }
    };
    Ok(ModelReport { ext, descriptor, orbits, contracted, axioms })
}

/// A K-point of the affine chart, checked exactly.
fn k_point(data: &CaseData, ext: BaseExtension) -> Res<Option<Vec<String>>> {
    let k = ext.tower()?;
    let s = k.gen("s")?;
    let t = k.gen("t")?;
    let coords = match data.case {
        // (w, y, z, x) = (1, 1, −t, 0)
        Case::An(_) => vec![k.one(), k.one(), -&t, k.zero()],
        // z² = t at x = y = 0
        Case::Dn(_) if ext.m % 2 == 0 => vec![k.one(), k.zero(), s.pow(ext.m as u64 / 2), k.zero()],
        _ => return Ok(None),
    };
    if !on_surface(&data.surface, &PointSpec::new(coords.clone()))? {
        return Ok(None);
    }
    Ok(Some(coords.iter().map(|c| c.to_string()).collect()))
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub case: Case,
    pub m: u32,
    pub rational: bool,
    pub rule: Rule,
    pub a: u32,
    pub descriptor: MinimalModelDescriptor,
    pub point: Option<Vec<String>>,
    pub model: ModelReport,
}

pub fn rationality_verdict(data: &CaseData, ext: BaseExtension) -> Res<Verdict> {
    let model = minimal_model(data, ext)?;
    let undecided = |detail: String| GaloisError::Undecided { case: data.case, m: ext.m, detail };
    let mut point = None;
    let (rational, rule) = match model.descriptor {
        MinimalModelDescriptor::DelPezzo(9) => (true, Rule::ProjectivePlane),
        MinimalModelDescriptor::DelPezzo(d) if d <= 4 => (false, Rule::MinimalDelPezzoLowDegree),
        MinimalModelDescriptor::DelPezzo(d) => return Err(undecided(format!("del Pezzo of degree {d}"))),
        MinimalModelDescriptor::ConicBundle(d) => {
            // the same answer whether or not the fibre at infinity is singular
            if d >= 4 {
                (false, Rule::ConicBundleManyFibres)
            } else if d + 1 <= 1 {
                point = k_point(data, ext)?;
                if point.is_none() {
                    return Err(undecided("no K-point found".into()));
                }
                (true, Rule::ConicBundleFewFibresWithPoint)
            } else {
                return Err(undecided(format!("{d} singular fibres")));
            }
        }
    };
    if rational != (ext.m % data.a == 0) {
        return Err(GaloisError::Inconsistent { case: data.case, m: ext.m, rule: rational, a: data.a });
    }
    Ok(Verdict { case: data.case, m: ext.m, rational, rule, a: data.a, descriptor: model.descriptor, point, model })
}

#[derive(Clone, Debug, Serialize)]
pub struct GridCell {
    pub case: Case,
    pub m: u32,
    pub rational: bool,
    pub a: u32,
    pub descriptor: MinimalModelDescriptor,
    pub rule: Rule,
    pub divides: bool,
}

/// Verdicts for every case and every m in `ms`.
pub fn verdict_grid(cat: &Catalog, cases: &[Case], ms: &[u32], exec: Execution) -> Res<Vec<GridCell>> {
    let data = exec.try_map(cases, |&c| analyze(cat, c))?;
    let cells: Vec<(usize, u32)> = (0..data.len()).flat_map(|i| ms.iter().map(move |&m| (i, m))).collect();
    exec.try_map(&cells, |&(i, m)| {
        let v = rationality_verdict(&data[i], BaseExtension::new(m)?)?;
        Ok(GridCell {
            case: v.case,
            m,
            rational: v.rational,
            a: v.a,
            descriptor: v.descriptor,
            rule: v.rule,
            divides: m % v.a == 0,
        })
    })
}

pub const DEFAULT_GRID_CASES: [Case; 5] = [Case::An(3), Case::Dn(5), Case::E6, Case::E7, Case::E8];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn idents() {
        assert_eq!(replace_ident("theta*e^2 + e3 + 2*e", "e", "(z*e)"), "theta*(z*e)^2 + e3 + 2*(z*e)");
        assert_eq!(replace_ident("sqrt3*s", "s", "(-1*s)"), "sqrt3*(-1*s)");
    }

    #[test]
    fn cases() {
        assert_eq!("d5".parse::<Case>().unwrap(), Case::Dn(5));
        assert_eq!("A3".parse::<Case>().unwrap(), Case::An(3));
        assert!("d3".parse::<Case>().is_err());
        assert!("e9".parse::<Case>().is_err());
    }
}
