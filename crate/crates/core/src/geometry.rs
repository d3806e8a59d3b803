//! Ambient spaces, the surface catalog, membership tests and the
//! contraction S₆′ → S₆.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::catalog::Catalog;
use crate::exact::{AlgebraError, FieldElement, MultiPoly, Tower};

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("equation is zero")]
    ZeroEquation,
    #[error("mixed weighted degrees: {0}")]
    MixedDegrees(String),
    #[error("unknown surface {0:?}")]
    UnknownSurface(String),
    #[error("point has {got} coordinates, ambient needs {expected}")]
    PointArity { expected: usize, got: usize },
    #[error("all coordinates are zero")]
    ZeroPoint,
    #[error("chart {0} does not exist")]
    NoChart(usize),
}

type Res<T> = Result<T, GeometryError>;

/// Monomial map on (w, y, z, x): row i is the exponent vector of the image
/// of coordinate i.
pub type MonomialMap = [[i64; 4]; 4];

/// ℙ²-bundle F_{a,b} = ℙ(𝒪 ⊕ 𝒪(a) ⊕ 𝒪(b)) over ℙ¹, glued from two charts
/// ℙ² × 𝔸¹ with coordinates ((w:y:z), x).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Atlas {
    pub a: i64,
    pub b: i64,
    pub forward: MonomialMap,
    pub backward: MonomialMap,
    /// Charts actually carrying equations (the A_n bundle only has one).
    pub charts: usize,
}

fn transition(a: i64, b: i64) -> MonomialMap {
    // ((w:y:z), x) ⇢ ((w : x^{-a} y : x^{-b} z), 1/x)
    [[1, 0, 0, 0], [0, 1, 0, -a], [0, 0, 1, -b], [0, 0, 0, -1]]
}

impl Atlas {
    pub fn new(a: i64, b: i64) -> Atlas {
        Atlas { a, b, forward: transition(a, b), backward: transition(a, b), charts: 2 }
    }

    /// Negative control: the inverse direction uses (b, a).
    pub fn corrupted(a: i64, b: i64) -> Atlas {
        Atlas { a, b, forward: transition(a, b), backward: transition(b, a), charts: 2 }
    }

    /// The fibration to ℙ¹ on each chart.
    pub fn fibration(&self) -> [&'static str; 2] {
        ["((w:y:z),x) -> (x:1)", "((w:y:z),x) -> (1:x)"]
    }
}

pub fn compose_maps(outer: &MonomialMap, inner: &MonomialMap) -> MonomialMap {
    let mut out = [[0; 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            out[i][k] = (0..4).map(|j| outer[i][j] * inner[j][k]).sum();
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum AmbientSpace {
    WeightedProjective(Vec<u32>),
    /// Affine space graded by weights (the t = 0 Klein surfaces are
    /// quasi-homogeneous).
    WeightedAffine(Vec<u32>),
    ChartAtlas(Atlas),
}

impl AmbientSpace {
    pub fn weights(&self) -> Vec<u32> {
        match self {
            AmbientSpace::WeightedProjective(w) | AmbientSpace::WeightedAffine(w) => w.clone(),
            // fibre coordinates w, y, z have weight one, x is the base
            AmbientSpace::ChartAtlas(_) => vec![1, 1, 1, 0],
        }
    }

    pub fn dim(&self) -> usize {
        self.weights().len()
    }
}

/// True iff backward ∘ forward is the identity.
pub fn chart_transition_check(a: &AmbientSpace) -> bool {
    match a {
        AmbientSpace::ChartAtlas(at) => {
            let id = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];
            compose_maps(&at.backward, &at.forward) == id
        }
        _ => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SurfaceName {
    S6prime,
    S6,
    S7,
    S8,
    An(u32),
    Dn(u32),
    KleinE6,
    KleinE7,
    KleinE8,
    KleinDn(u32),
    KleinAn(u32),
}

impl FromStr for SurfaceName {
    type Err = GeometryError;
    fn from_str(s: &str) -> Res<SurfaceName> {
        let bad = || GeometryError::UnknownSurface(s.to_string());
        let num = |rest: &str, min: u32| -> Res<u32> {
            let n: u32 = rest.parse().map_err(|_| bad())?;
            if n < min || n > 64 {
                return Err(bad());
            }
            Ok(n)
        };
        Ok(match s {
            "s6prime" => SurfaceName::S6prime,
            "s6" => SurfaceName::S6,
            "s7" => SurfaceName::S7,
            "s8" => SurfaceName::S8,
            "klein-e6" => SurfaceName::KleinE6,
            "klein-e7" => SurfaceName::KleinE7,
            "klein-e8" => SurfaceName::KleinE8,
            _ => {
                if let Some(r) = s.strip_prefix("an:") {
                    SurfaceName::An(num(r, 1)?)
                } else if let Some(r) = s.strip_prefix("dn:") {
                    SurfaceName::Dn(num(r, 4)?)
                } else if let Some(r) = s.strip_prefix("klein-an:") {
                    SurfaceName::KleinAn(num(r, 1)?)
                } else if let Some(r) = s.strip_prefix("klein-dn:") {
                    SurfaceName::KleinDn(num(r, 4)?)
                } else {
                    return Err(bad());
                }
            }
        })
    }
}

impl fmt::Display for SurfaceName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceName::S6prime => write!(f, "s6prime"),
            SurfaceName::S6 => write!(f, "s6"),
            SurfaceName::S7 => write!(f, "s7"),
            SurfaceName::S8 => write!(f, "s8"),
            SurfaceName::An(n) => write!(f, "an:{n}"),
            SurfaceName::Dn(n) => write!(f, "dn:{n}"),
            SurfaceName::KleinE6 => write!(f, "klein-e6"),
            SurfaceName::KleinE7 => write!(f, "klein-e7"),
            SurfaceName::KleinE8 => write!(f, "klein-e8"),
            SurfaceName::KleinDn(n) => write!(f, "klein-dn:{n}"),
            SurfaceName::KleinAn(n) => write!(f, "klein-an:{n}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SurfaceSpec {
    pub name: SurfaceName,
    pub ambient: AmbientSpace,
    pub vars: Vec<String>,
    /// One equation per chart (a single one outside atlases).
    pub equations: Vec<MultiPoly>,
    pub base: Tower,
    /// Weighted degree, validated at construction.
    pub degree: u32,
}

const WYZX: [&str; 4] = ["w", "y", "z", "x"];

/// Σ c_k · monomial_k over the given variables.
fn templated(tower: &Tower, vars: &[&str], coeffs: &[FieldElement], monos: &[Vec<u32>]) -> MultiPoly {
    let z = MultiPoly::zero(tower, vars);
    coeffs.iter().zip(monos).fold(z.clone(), |acc, (c, m)| &acc + &z.monomial_like(m, c))
}

/// Chart equations of the D_n conic bundle over ℚ(t), variables (w, y, z, x).
fn dn_charts(cat: &Catalog, n: u32) -> Res<Vec<MultiPoly>> {
    let tower = crate::catalog::BaseField::Qt.tower();
    let c0 = cat.coeffs("surface.dn.chart0")?;
    let m = n - 1;
    let f0 = templated(&tower, &WYZX, &c0, &[vec![2, 0, 0, m], vec![0, 2, 0, 1], vec![0, 0, 2, 0], vec![2, 0, 0, 0]]);
    let finf = if n % 2 == 0 {
        let c = cat.coeffs("surface.dn.chartinf.even")?;
        templated(&tower, &WYZX, &c, &[vec![2, 0, 0, 0], vec![0, 2, 0, 0], vec![0, 0, 2, 1], vec![2, 0, 0, m]])
    } else {
        let c = cat.coeffs("surface.dn.chartinf.odd")?;
        templated(&tower, &WYZX, &c, &[vec![2, 0, 0, 0], vec![0, 2, 0, 1], vec![0, 0, 2, 0], vec![2, 0, 0, m]])
    };
    Ok(vec![f0, finf])
}

impl SurfaceSpec {
    pub fn build(name: SurfaceName, cat: &Catalog) -> Res<SurfaceSpec> {
        let wxyz = || vec!["W".to_string(), "X".into(), "Y".into(), "Z".into()];
        let xyz = || vec!["x".to_string(), "y".into(), "z".into()];
        let (ambient, vars, equations) = match name {
            SurfaceName::S6prime => (
                AmbientSpace::WeightedProjective(vec![1, 1, 1, 2]),
                wxyz(),
                vec![cat.poly("surface.s6prime")?],
            ),
            SurfaceName::S6 => (
                AmbientSpace::WeightedProjective(vec![1, 1, 1, 1]),
                wxyz(),
                vec![cat.poly("surface.s6")?],
            ),
            SurfaceName::S7 => (
                AmbientSpace::WeightedProjective(vec![1, 1, 1, 2]),
                wxyz(),
                vec![cat.poly("surface.s7")?],
            ),
            SurfaceName::S8 => (
                AmbientSpace::WeightedProjective(vec![1, 1, 2, 3]),
                wxyz(),
                vec![cat.poly("surface.s8")?],
            ),
            SurfaceName::Dn(n) => {
                if n < 4 {
                    return Err(GeometryError::UnknownSurface(name.to_string()));
                }
                let k = (n / 2) as i64;
                let (a, b) = if n % 2 == 0 { (k - 1, k - 1) } else { (k - 1, k) };
                (
                    AmbientSpace::ChartAtlas(Atlas::new(a, b)),
                    WYZX.iter().map(|s| s.to_string()).collect(),
                    dn_charts(cat, n)?,
                )
            }
            SurfaceName::An(n) => {
                let tower = crate::catalog::BaseField::Qt.tower();
                let c = cat.coeffs("surface.an.chart")?;
                let f = templated(&tower, &WYZX, &c, &[vec![2, 0, 0, n], vec![0, 1, 1, 0], vec![2, 0, 0, 0]]);
                let mut at = Atlas::new(0, n as i64);
                at.charts = 1;
                (AmbientSpace::ChartAtlas(at), WYZX.iter().map(|s| s.to_string()).collect(), vec![f])
            }
            SurfaceName::KleinE6 => {
                (AmbientSpace::WeightedAffine(vec![3, 4, 6]), xyz(), vec![cat.poly("klein.e6")?])
            }
            SurfaceName::KleinE7 => {
                (AmbientSpace::WeightedAffine(vec![4, 6, 9]), xyz(), vec![cat.poly("klein.e7")?])
            }
            SurfaceName::KleinE8 => {
                (AmbientSpace::WeightedAffine(vec![6, 10, 15]), xyz(), vec![cat.poly("klein.e8")?])
            }
            SurfaceName::KleinDn(n) => {
                let c = cat.coeffs("klein.dn")?;
                let f = templated(&Tower::rationals(), &["x", "y", "z"], &c, &[
                    vec![n - 1, 0, 0],
                    vec![1, 2, 0],
                    vec![0, 0, 2],
                ]);
                (AmbientSpace::WeightedAffine(vec![2, n - 2, n - 1]), xyz(), vec![f])
            }
            SurfaceName::KleinAn(n) => {
                let c = cat.coeffs("klein.an")?;
                let f = templated(&Tower::rationals(), &["x", "y", "z"], &c, &[vec![n, 0, 0], vec![0, 1, 1]]);
                (AmbientSpace::WeightedAffine(vec![2, n, n]), xyz(), vec![f])
            }
        };
        let base = equations[0].tower().clone();
        let mut s = SurfaceSpec { name, ambient, vars, equations, base, degree: 0 };
        s.degree = check_homogeneous(&s)?;
        Ok(s)
    }

    pub fn equation(&self) -> &MultiPoly {
        &self.equations[0]
    }

    pub fn var_refs(&self) -> Vec<&str> {
        self.vars.iter().map(|s| s.as_str()).collect()
    }
}

/// Common weighted degree of all terms of every chart equation.
pub fn check_homogeneous(s: &SurfaceSpec) -> Res<u32> {
    let w = s.ambient.weights();
    let mut degree = None;
    for eq in &s.equations {
        degree = Some(weighted_degree(eq, &w)?);
    }
    degree.ok_or(GeometryError::ZeroEquation)
}

pub fn weighted_degree(p: &MultiPoly, weights: &[u32]) -> Res<u32> {
    let degs = p.weighted_degrees(weights);
    match degs.len() {
        0 => Err(GeometryError::ZeroEquation),
        1 => Ok(*degs.iter().next().unwrap()),
        _ => {
            let listing: Vec<String> = p
                .terms()
                .map(|(m, c)| {
                    let single = p.monomial_like(&m.0, &c);
                    format!("{single} (degree {})", m.weighted_degree(weights))
                })
                .collect();
            Err(GeometryError::MixedDegrees(listing.join(", ")))
        }
    }
}

/// A point of the ambient space, with chart index for atlases.
#[derive(Clone, Debug)]
pub struct PointSpec {
    pub coords: Vec<FieldElement>,
    pub chart: usize,
}

impl PointSpec {
    pub fn new(coords: Vec<FieldElement>) -> PointSpec {
        PointSpec { coords, chart: 0 }
    }

    /// Weighted rescaling (λ^{w_i} x_i).
    pub fn rescale(&self, weights: &[u32], lambda: &FieldElement) -> PointSpec {
        let coords = self.coords.iter().zip(weights).map(|(c, &w)| c * &lambda.pow(w as u64)).collect();
        PointSpec { coords, chart: self.chart }
    }

    /// Scales so that the first nonzero coordinate of lowest weight is 1.
    /// Only possible when that weight is 1 or the coordinate already is 1;
    /// returns None otherwise.
    pub fn normalized(&self, weights: &[u32]) -> Res<Option<PointSpec>> {
        let nz: Vec<usize> = (0..self.coords.len()).filter(|&i| !self.coords[i].is_zero()).collect();
        let Some(&first) = nz.iter().min_by_key(|&&i| (weights[i], i)) else {
            return Err(GeometryError::ZeroPoint);
        };
        let c = &self.coords[first];
        if c.is_one() {
            return Ok(Some(self.clone()));
        }
        if weights[first] != 1 {
            return Ok(None);
        }
        Ok(Some(self.rescale(weights, &c.inv()?)))
    }
}

/// Whether the point lies on the surface (exact normal-form zero).
pub fn on_surface(s: &SurfaceSpec, p: &PointSpec) -> Res<bool> {
    let eq = s.equations.get(p.chart).ok_or(GeometryError::NoChart(p.chart))?;
    if p.coords.len() != s.vars.len() {
        return Err(GeometryError::PointArity { expected: s.vars.len(), got: p.coords.len() });
    }
    let degenerate = match s.ambient {
        AmbientSpace::WeightedProjective(_) => p.coords.iter().all(|c| c.is_zero()),
        AmbientSpace::ChartAtlas(_) => p.coords[..3].iter().all(|c| c.is_zero()),
        AmbientSpace::WeightedAffine(_) => false,
    };
    if degenerate {
        return Err(GeometryError::ZeroPoint);
    }
    let tower = p.coords[0].tower();
    if p.coords.iter().any(|c| c.tower() != tower) {
        return Err(AlgebraError::TowerMismatch.into());
    }
    if !s.base.generators().iter().all(|g| tower.has_generator(g)) {
        return Err(AlgebraError::TowerMismatch.into());
    }
    let eq = eq.transfer(tower)?;
    Ok(eq.eval(&p.coords)?.is_zero())
}

/// Outcome of the S₆′ → S₆ verification.
#[derive(Clone, Debug)]
pub struct ContractionReport {
    /// cubic ∘ φ₁ − W²·(quartic); must be 0.
    pub chart1_residue: MultiPoly,
    /// cubic ∘ φ₂ reduced modulo the quartic; must be 0.
    pub chart2_residue: MultiPoly,
    /// W·φ₂ − (Z − iX²)·φ₁ reduced modulo the quartic, per component.
    pub overlap_residues: Vec<MultiPoly>,
    /// φ₁ restricted to W = 0, Z = iX².
    pub blown_down_image: Vec<MultiPoly>,
}

impl ContractionReport {
    pub fn blown_down_to_point(&self) -> bool {
        let img = &self.blown_down_image;
        img[..3].iter().all(|p| p.is_zero()) && !img[3].is_zero()
    }

    pub fn ok(&self) -> bool {
        self.chart1_residue.is_zero()
            && self.chart2_residue.is_zero()
            && self.overlap_residues.iter().all(|p| p.is_zero())
            && self.blown_down_to_point()
    }
}

pub fn verify_contraction_s6(cat: &Catalog) -> Res<ContractionReport> {
    let cubic = cat.poly("surface.s6")?;
    let quartic = cat.poly("surface.s6prime")?;
    let phi1 = cat.polys("contraction.chart1")?;
    let phi2 = cat.polys("contraction.chart2")?;
    let w = quartic.var_like("W")?;
    let chart1_residue = &cubic.compose(&phi1)? - &(&(&w * &w) * &quartic);
    let (_, chart2_residue) = cubic.compose(&phi2)?.divrem_in("Z", &quartic)?;
    let u = quartic.parse_like("Z - i*X^2")?;
    let overlap_residues = phi1
        .iter()
        .zip(&phi2)
        .map(|(a, b)| Ok((&(&w * b) - &(&u * a)).divrem_in("Z", &quartic)?.1))
        .collect::<Res<Vec<_>>>()?;
    let on_curve = [
        quartic.zero_like(),
        quartic.var_like("X")?,
        quartic.var_like("Y")?,
        quartic.parse_like("i*X^2")?,
    ];
    let blown_down_image = phi1.iter().map(|p| p.compose(&on_curve)).collect::<Result<_, _>>()?;
    Ok(ContractionReport { chart1_residue, chart2_residue, overlap_residues, blown_down_image })
}

/// Applies a monomial map to a polynomial in (w, y, z, x) and clears the
/// negative powers of x. Returns (image, k) with image = x^k · (F ∘ map).
pub fn apply_monomial_map(f: &MultiPoly, map: &MonomialMap) -> Res<(MultiPoly, i64)> {
    let mut imgs: Vec<(Vec<i64>, FieldElement)> = Vec::new();
    for (m, c) in f.terms() {
        let mut e = [0i64; 4];
        for (i, &ei) in m.0.iter().enumerate() {
            for k in 0..4 {
                e[k] += ei as i64 * map[i][k];
            }
        }
        imgs.push((e.to_vec(), c));
    }
    let shift = imgs.iter().map(|(e, _)| -e[3]).max().unwrap_or(0).max(0);
    let mut out = f.zero_like();
    for (mut e, c) in imgs {
        e[3] += shift;
        if e.iter().any(|&x| x < 0) {
            return Err(AlgebraError::Inexact("negative exponent in fibre coordinates".into()).into());
        }
        let exps: Vec<u32> = e.iter().map(|&x| x as u32).collect();
        out = &out + &f.monomial_like(&exps, &c);
    }
    Ok((out, shift))
}

/// For a two-chart atlas surface: transforms the chart-∞ equation by the
/// transition and returns the monomial unit x^k with
/// x^k · (F∞ ∘ T) = F₀, or None when they disagree.
pub fn chart_agreement(s: &SurfaceSpec) -> Res<Option<i64>> {
    let AmbientSpace::ChartAtlas(at) = &s.ambient else {
        return Ok(None);
    };
    if s.equations.len() < 2 {
        return Ok(None);
    }
    let (img, k) = apply_monomial_map(&s.equations[1], &at.forward)?;
    Ok((img == s.equations[0]).then_some(k))
}

/// The Klein surface a fibration degenerates to at t = 0.
pub fn klein_of(name: SurfaceName) -> Option<SurfaceName> {
    match name {
        SurfaceName::S6prime => Some(SurfaceName::KleinE6),
        SurfaceName::S7 => Some(SurfaceName::KleinE7),
        SurfaceName::S8 => Some(SurfaceName::KleinE8),
        SurfaceName::Dn(n) => Some(SurfaceName::KleinDn(n)),
        SurfaceName::An(n) => Some(SurfaceName::KleinAn(n)),
        _ => None,
    }
}

/// First chart at W = 1, t = 0 minus the Klein equation; zero when the
/// special fibre is the Klein surface.
pub fn klein_fibre_residue(cat: &Catalog, name: SurfaceName) -> Res<MultiPoly> {
    let klein = klein_of(name).ok_or_else(|| GeometryError::UnknownSurface(format!("{name} has no Klein fibre")))?;
    let s = SurfaceSpec::build(name, cat)?;
    let f = SurfaceSpec::build(klein, cat)?;
    let mut vars: Vec<String> = s.vars.iter().map(|v| v.to_lowercase()).collect();
    vars.push("t".into());
    let refs: Vec<&str> = vars.iter().map(|v| v.as_str()).collect();
    let q = Tower::rationals();
    let g = MultiPoly::parse(&q, &refs, &s.equation().to_string().to_lowercase())?;
    let g = g.substitute_values(&[("w", q.one()), ("t", q.zero())])?;
    Ok(&g.with_vars(&["x", "y", "z"])? - f.equation())
}
