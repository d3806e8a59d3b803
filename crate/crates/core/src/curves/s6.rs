//! The 27 lines of the cubic S₆: Z = 0, Y = αW with α³ = t, and the two
//! families L_μ with μ¹² = c± t.

use std::sync::Arc;

use super::s7::check_member;
use super::{restrict, solve_linear, Branch, CurveError, Family, FamilyLabel};
use crate::catalog::{BaseField, Catalog};
use crate::exact::{MultiPoly, Tower};
use crate::geometry::{SurfaceName, SurfaceSpec};

const WXYZ: [&str; 4] = ["W", "X", "Y", "Z"];

#[derive(Clone, Debug)]
pub struct S6Lines {
    pub families: Vec<Arc<Family>>,
}

impl S6Lines {
    pub fn count(&self) -> usize {
        self.families.iter().map(|f| f.count()).sum()
    }

    pub fn family(&self, label: FamilyLabel) -> Option<&Arc<Family>> {
        self.families.iter().find(|f| f.label == label)
    }
}

/// ℚ(i)(√3)(t)(μ) with μ¹² = c± t and the two linear forms cutting L_μ.
/// The second branch is the Galois conjugate √3 ↦ −√3 of the first.
pub fn s6_line_forms(cat: &Catalog, branch: Branch) -> Result<(Tower, Vec<MultiPoly>), CurveError> {
    let base = BaseField::QiSqrt3.tower().with_function("t")?;
    let idx = match branch {
        Branch::Plus => 0,
        Branch::Minus => 1,
    };
    let c = base.lift(&cat.coeffs("s6.mu_radicand")?[idx])?;
    let tower = base.with_radical("mu", 12, &(&c * &base.gen("t")?))?;
    let vars = ["W", "X", "Y", "Z", "mu"];
    let images: Vec<MultiPoly> = vars
        .iter()
        .map(|v| match *v {
            "mu" => Ok(MultiPoly::constant(&tower, &WXYZ, &tower.gen("mu")?)),
            _ => MultiPoly::var(&tower, &WXYZ, v),
        })
        .collect::<Result<_, _>>()?;
    let forms = cat
        .polys("s6.mu_lines")?
        .iter()
        .map(|p| {
            let p = match branch {
                Branch::Plus => p.clone(),
                Branch::Minus => p.parse_like(&p.to_string().replace("sqrt3", "(-sqrt3)"))?,
            };
            p.compose(&images)
        })
        .collect::<Result<_, _>>()?;
    Ok((tower, forms))
}

fn family(
    label: FamilyLabel,
    surface: &SurfaceSpec,
    tower: Tower,
    equations: Vec<MultiPoly>,
    targets: [&str; 2],
    parameter: &str,
    order: usize,
) -> Result<Family, CurveError> {
    let solved = solve_linear(&equations, &targets)?;
    let residue = restrict(surface, &tower, &solved)?;
    let fam = Family {
        label,
        surface: SurfaceName::S6,
        tower,
        vars: WXYZ.iter().map(|s| s.to_string()).collect(),
        equations,
        parameter: parameter.into(),
        order,
        constants: 1,
        residue,
        chart: 0,
    };
    check_member(&fam)?;
    Ok(fam)
}

pub fn certify_s6_lines(cat: &Catalog) -> Result<S6Lines, CurveError> {
    let surface = SurfaceSpec::build(SurfaceName::S6, cat)?;
    let qit = BaseField::Qi.tower().with_function("t")?;
    let tower = qit.with_radical("alpha", 3, &qit.gen("t")?)?;
    let mut eqs = vec![MultiPoly::var(&tower, &WXYZ, "Z")?];
    eqs.extend(cat.polys_in("s6.alpha_line", &tower, &WXYZ)?);
    let mut families = vec![Arc::new(family(FamilyLabel::S6L123, &surface, tower, eqs, ["Z", "Y"], "alpha", 3)?)];
    for branch in [Branch::Plus, Branch::Minus] {
        let (tower, forms) = s6_line_forms(cat, branch)?;
        families.push(Arc::new(family(FamilyLabel::S6Lmu(branch), &surface, tower, forms, ["W", "Y"], "mu", 12)?));
    }
    Ok(S6Lines { families })
}
