//! Components of the singular fibres of the A_n and D_n conic bundles,
//! in fibre coordinates (w : y : z) over the base coordinate x.

use std::sync::Arc;

use super::s7::check_member;
use super::{replay_fail, restrict_equation, solve_linear, CurveError, Family, FamilyLabel};
use crate::catalog::{BaseField, Catalog};
use crate::exact::{MultiPoly, Tower};
use crate::geometry::{SurfaceName, SurfaceSpec};

const WYZX: [&str; 4] = ["w", "y", "z", "x"];

struct Piece<'a> {
    label: FamilyLabel,
    tower: Tower,
    /// Two equations, solved for x and the second target.
    equations: [&'a str; 2],
    targets: [&'a str; 2],
    chart: usize,
    parameter: &'a str,
    order: usize,
}

fn build(surface: &SurfaceSpec, p: Piece) -> Result<Family, CurveError> {
    let equations: Vec<MultiPoly> =
        p.equations.iter().map(|e| MultiPoly::parse(&p.tower, &WYZX, e)).collect::<Result<_, _>>()?;
    let solved = solve_linear(&equations, &p.targets)?;
    let residue = restrict_equation(&surface.equations[p.chart], &p.tower, &solved)?;
    let fam = Family {
        label: p.label,
        surface: surface.name,
        tower: p.tower,
        vars: WYZX.iter().map(|s| s.to_string()).collect(),
        equations,
        parameter: p.parameter.into(),
        order: p.order,
        constants: 1,
        residue,
        chart: p.chart,
    };
    check_member(&fam)?;
    Ok(fam)
}

/// D_n: the fibre x = 0 (z = ±√t w) and the n − 1 fibres x^{n−1} = t,
/// written x = μ², z = iμy with μ^{2(n−1)} = t; 2n curves.
pub fn enumerate_dn(cat: &Catalog, n: u32) -> Result<Vec<Arc<Family>>, CurveError> {
    check_n("D_n", n, 4)?;
    let surface = SurfaceSpec::build(SurfaceName::Dn(n), cat)?;
    let qt = BaseField::Qt.tower();
    let x0 = Piece {
        label: FamilyLabel::DnX0,
        tower: qt.with_radical("s", 2, &qt.gen("t")?)?,
        equations: ["x", "z - s*w"],
        targets: ["x", "z"],
        chart: 0,
        parameter: "s",
        order: 2,
    };
    let qit = BaseField::Qi.tower().with_function("t")?;
    let mu = Piece {
        label: FamilyLabel::DnMu,
        tower: qit.with_radical("mu", 2 * (n as usize - 1), &qit.gen("t")?)?,
        equations: ["x - mu^2", "z - i*mu*y"],
        targets: ["x", "z"],
        chart: 0,
        parameter: "mu",
        order: 2 * (n as usize - 1),
    };
    [x0, mu].into_iter().map(|p| Ok(Arc::new(build(&surface, p)?))).collect()
}

/// The fibre over x = ∞ of the two-chart model, w² + y² = 0 (n even) or
/// w² + z² = 0 (n odd): two components, each defined over ℚ(i)(t).
pub fn dn_fibre_at_infinity(cat: &Catalog, n: u32) -> Result<Arc<Family>, CurveError> {
    check_n("D_n", n, 4)?;
    let surface = SurfaceSpec::build(SurfaceName::Dn(n), cat)?;
    let qt = BaseField::Qt.tower();
    let inf = Piece {
        label: FamilyLabel::DnInf,
        tower: qt.with_radical("i", 2, &-&qt.one())?,
        equations: ["x", if n % 2 == 0 { "y - i*w" } else { "z - i*w" }],
        targets: ["x", if n % 2 == 0 { "y" } else { "z" }],
        chart: 1,
        parameter: "i",
        order: 2,
    };
    Ok(Arc::new(build(&surface, inf)?))
}

fn check_n(name: &str, n: u32, min: u32) -> Result<(), CurveError> {
    if n < min {
        return replay_fail("input", format!("{name} needs n >= {min}, got {n}"));
    }
    Ok(())
}

/// A_n: the fibres xⁿ = t, each the pair y = 0, z = 0.
/// The y = 0 family is one Galois-stable orbit of pairwise disjoint curves.
pub fn enumerate_an(cat: &Catalog, n: u32) -> Result<Vec<Arc<Family>>, CurveError> {
    check_n("A_n", n, 2)?;
    let surface = SurfaceSpec::build(SurfaceName::An(n), cat)?;
    let qt = BaseField::Qt.tower();
    let tower = qt.with_radical("nu", n as usize, &qt.gen("t")?)?;
    [(FamilyLabel::AnFiberY, "y"), (FamilyLabel::AnFiberZ, "z")]
        .into_iter()
        .map(|(label, v)| {
            let p = Piece {
                label,
                tower: tower.clone(),
                equations: ["x - nu", v],
                targets: ["x", v],
                chart: 0,
                parameter: "nu",
                order: n as usize,
            };
            Ok(Arc::new(build(&surface, p)?))
        })
        .collect()
}
