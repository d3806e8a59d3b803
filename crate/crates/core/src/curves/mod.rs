//! Exceptional curves: the elimination chains for S₇ and S₈, the 27 lines
//! of S₆ and the fibre components of the A_n / D_n conic bundles.
//!
//! Curves come in families. A family is one generic curve over a tower in
//! which the parameter (μ, e, α, …) is a radical generator; its members are
//! the images of that curve under the embeddings of the tower, so certifying
//! the generic curve certifies every member.

pub mod ratfn;
mod conic;
mod s6;
mod s7;
mod s8;

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::exact::{AlgebraError, MultiPoly, Tower};
use crate::geometry::{GeometryError, SurfaceName, SurfaceSpec};

pub use conic::{dn_fibre_at_infinity, enumerate_an, enumerate_dn};
pub use s6::{certify_s6_lines, s6_line_forms, S6Lines};
pub use s7::{enumerate_s7, S7Enumeration, S7Guards};
pub use s8::{enumerate_s8, S8Branch, S8Enumeration, PRINTED_B2};

#[derive(Debug, Error)]
pub enum CurveError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("replay step {step} failed: {detail}")]
    Replay { step: String, detail: String },
    #[error("{family} is not on the surface: residue {residue}")]
    Membership { family: String, residue: String },
}

pub(crate) fn replay_fail<T>(step: &str, detail: impl fmt::Display) -> Result<T, CurveError> {
    Err(CurveError::Replay { step: step.to_string(), detail: detail.to_string() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Branch {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FamilyLabel {
    S6L123,
    S6Lmu(Branch),
    S7E0,
    S7Main,
    S8Main(u8),
    DnX0,
    DnMu,
    DnInf,
    AnFiberY,
    AnFiberZ,
}

impl fmt::Display for FamilyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyLabel::S6L123 => write!(f, "S6-L123"),
            FamilyLabel::S6Lmu(Branch::Plus) => write!(f, "S6-Lmu(+)"),
            FamilyLabel::S6Lmu(Branch::Minus) => write!(f, "S6-Lmu(-)"),
            FamilyLabel::S7E0 => write!(f, "S7-e0"),
            FamilyLabel::S7Main => write!(f, "S7-main"),
            FamilyLabel::S8Main(b) => write!(f, "S8-main({b})"),
            FamilyLabel::DnX0 => write!(f, "Dn-x0"),
            FamilyLabel::DnMu => write!(f, "Dn-mu"),
            FamilyLabel::DnInf => write!(f, "Dn-inf"),
            FamilyLabel::AnFiberY => write!(f, "An-fiber(y=0)"),
            FamilyLabel::AnFiberZ => write!(f, "An-fiber(z=0)"),
        }
    }
}

/// One generic curve; its members are indexed by (constant root, power of
/// the primitive N-th root of unity applied to the parameter).
#[derive(Clone, Debug)]
pub struct Family {
    pub label: FamilyLabel,
    pub surface: SurfaceName,
    pub tower: Tower,
    pub vars: Vec<String>,
    pub equations: Vec<MultiPoly>,
    /// Radical generator indexing the members ("" when there is none).
    pub parameter: String,
    /// N: conjugates of the parameter over the constants.
    pub order: usize,
    /// Number of conjugate constants (roots of Q, Q₁, …), 1 if none.
    pub constants: usize,
    /// The surface equation restricted to the generic curve; zero.
    pub residue: MultiPoly,
    /// Chart of the surface the equations live in.
    pub chart: usize,
}

impl Family {
    pub fn count(&self) -> usize {
        self.order * self.constants
    }

    pub fn certified(&self) -> bool {
        self.residue.is_zero()
    }

    pub fn relation(&self) -> String {
        self.tower.describe()
    }

    pub fn members(self: &Arc<Self>) -> Vec<CurveSpec> {
        let mut out = Vec::with_capacity(self.count());
        for root in 0..self.constants {
            for power in 0..self.order {
                out.push(CurveSpec { family: self.clone(), root, power });
            }
        }
        out
    }
}

/// A member of a family: the generic curve with the parameter replaced by
/// ζ_N^power times its value at the given constant root.
#[derive(Clone, Debug)]
pub struct CurveSpec {
    pub family: Arc<Family>,
    pub root: usize,
    pub power: usize,
}

impl CurveSpec {
    pub fn label(&self) -> FamilyLabel {
        self.family.label
    }

    pub fn equations(&self) -> &[MultiPoly] {
        &self.family.equations
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceStep {
    pub name: String,
    pub input: String,
    pub output: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct EliminationTrace {
    pub steps: Vec<TraceStep>,
}

impl EliminationTrace {
    pub(crate) fn push(&mut self, name: &str, input: impl fmt::Display, output: impl fmt::Display) {
        self.steps.push(TraceStep { name: name.into(), input: input.to_string(), output: output.to_string() });
    }
}

/// Solves each equation for its target variable, which must occur linearly
/// with a constant coefficient and in no other equation.
pub fn solve_linear(eqs: &[MultiPoly], targets: &[&str]) -> Result<Vec<(String, MultiPoly)>, AlgebraError> {
    let mut out = Vec::new();
    for (eq, v) in eqs.iter().zip(targets) {
        let parts = eq.as_univariate(v)?;
        if parts.len() != 2 {
            return Err(AlgebraError::Inexact(format!("{eq} is not linear in {v}")));
        }
        let c = parts[1]
            .constant_value()
            .ok_or_else(|| AlgebraError::Inexact(format!("coefficient of {v} is not constant")))?;
        out.push((v.to_string(), (-&parts[0]).scale(&c.inv()?)));
    }
    Ok(out)
}

/// Surface equation (moved into the family tower) with the solved
/// coordinates substituted.
pub fn restrict(surface: &SurfaceSpec, tower: &Tower, solved: &[(String, MultiPoly)]) -> Result<MultiPoly, CurveError> {
    restrict_equation(surface.equation(), tower, solved)
}

pub fn restrict_equation(f: &MultiPoly, tower: &Tower, solved: &[(String, MultiPoly)]) -> Result<MultiPoly, CurveError> {
    let f = f.transfer(tower)?;
    let mut images = Vec::new();
    for v in f.vars().iter() {
        match solved.iter().find(|(n, _)| n == v) {
            Some((_, p)) => images.push(p.clone()),
            None => images.push(f.var_like(v)?),
        }
    }
    Ok(f.compose(&images)?)
}

/// Reads a polynomial over ℚ whose text names tower generators as
/// variables (e.g. an equation over ℚ(t) with t turned into a variable).
pub(crate) fn as_variables(p: &MultiPoly, vars: &[&str]) -> Result<MultiPoly, AlgebraError> {
    MultiPoly::parse(&Tower::rationals(), vars, &p.to_string())
}

/// Collapses a polynomial that is a binary form in (v^k, u) into a
/// univariate polynomial in X = v^k / u, after removing monomial content.
pub fn binary_collapse(p: &MultiPoly, v: &str, u: &str, k: u32) -> Result<MultiPoly, AlgebraError> {
    let p = ratfn::div_monomial(p, &ratfn::monomial_content(p));
    let iv = p.var_index(v)?;
    let iu = p.var_index(u)?;
    let mut total = None;
    let mut coeffs = Vec::new();
    for (m, c) in p.terms() {
        if m.0.iter().enumerate().any(|(i, &e)| i != iv && i != iu && e > 0) || m.0[iv] % k != 0 {
            return Err(AlgebraError::Inexact(format!("{p} is not a binary form in ({v}^{k}, {u})")));
        }
        let a = m.0[iv] / k;
        let deg = a + m.0[iu];
        if *total.get_or_insert(deg) != deg {
            return Err(AlgebraError::Inexact(format!("{p} is not homogeneous in ({v}^{k}, {u})")));
        }
        coeffs.push((a, c));
    }
    let out = MultiPoly::zero(&Tower::rationals(), &["X"]);
    Ok(coeffs.into_iter().fold(out.clone(), |acc, (a, c)| &acc + &out.monomial_like(&[a], &c)))
}

/// For a polynomial isobaric under μ ↦ λμ, u_l ↦ λ^{-r_l} u_l, returns
/// (k, P) with p = μ^k · P(μ^{r_1} u_1, …) and P over the renamed
/// variables `names`.
pub fn isobaric_collapse(
    p: &MultiPoly,
    mu: &str,
    subs: &[(&str, u32)],
    names: &[&str],
) -> Result<(i64, MultiPoly), AlgebraError> {
    let im = p.var_index(mu)?;
    let idx: Vec<usize> = subs.iter().map(|(v, _)| p.var_index(v)).collect::<Result<_, _>>()?;
    let out = MultiPoly::zero(p.tower(), names);
    let mut k = None;
    let mut acc = out.clone();
    for (m, c) in p.terms() {
        if m.0.iter().enumerate().any(|(i, &e)| i != im && !idx.contains(&i) && e > 0) {
            return Err(AlgebraError::Inexact(format!("unexpected variable in {p}")));
        }
        let w = m.0[im] as i64 - idx.iter().zip(subs).map(|(&i, (_, r))| m.0[i] as i64 * *r as i64).sum::<i64>();
        if *k.get_or_insert(w) != w {
            return Err(AlgebraError::Inexact(format!("{p} is not isobaric")));
        }
        let e: Vec<u32> = idx.iter().map(|&i| m.0[i]).collect();
        acc = &acc + &out.monomial_like(&e, &c);
    }
    Ok((k.unwrap_or(0), acc))
}
