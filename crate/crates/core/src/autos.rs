//! Automorphisms of the Klein surfaces f(x, y, z) = t: invariance of f under
//! explicit maps, the diagonal groups derived from the monomials of f, the
//! order-3 map τ of d₄ and the shear family of a_n.

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::catalog::Catalog;
use crate::exact::{q, AlgebraError, FieldElement, MultiPoly, Tower};
use crate::exec::Execution;
use crate::galois::Case;
use crate::geometry::{GeometryError, SurfaceName, SurfaceSpec};

#[derive(Debug, Error)]
pub enum AutoError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("{0}")]
    Input(String),
    #[error("inconsistent exponent lattice: {0}")]
    Lattice(String),
}

type Res<T> = Result<T, AutoError>;

const XYZ: [&str; 3] = ["x", "y", "z"];
const GREEK: [&str; 3] = ["alpha", "beta", "gamma"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum MapKind {
    Affine,
    /// Weighted-homogeneous components, component i of weight w_i.
    Projective(Vec<u32>),
}

/// (x₁, …, x_k) ↦ (φ₁, …, φ_k), all components over one tower.
#[derive(Clone, Debug)]
pub struct PolyMap {
    pub components: Vec<MultiPoly>,
    pub kind: MapKind,
}

fn common_tower(a: &Tower, b: &Tower) -> Res<Tower> {
    if a.is_prefix_of(b) {
        Ok(b.clone())
    } else if b.is_prefix_of(a) {
        Ok(a.clone())
    } else {
        Err(AlgebraError::TowerMismatch.into())
    }
}

impl PolyMap {
    pub fn new(components: Vec<MultiPoly>, kind: MapKind) -> Res<PolyMap> {
        let Some(first) = components.first() else {
            return Err(AutoError::Input("map without components".into()));
        };
        if components.len() != first.vars().len() {
            return Err(AutoError::Input(format!(
                "{} components for {} variables",
                components.len(),
                first.vars().len()
            )));
        }
        if components.iter().any(|c| c.tower() != first.tower() || c.vars() != first.vars()) {
            return Err(AlgebraError::TowerMismatch.into());
        }
        if let MapKind::Projective(w) = &kind {
            if w.len() != components.len() {
                return Err(AutoError::Input("weight count differs from component count".into()));
            }
            for (i, c) in components.iter().enumerate() {
                if c.weighted_degrees(w).into_iter().collect::<Vec<_>>() != [w[i]] {
                    return Err(AutoError::Input(format!("component {i} is not of weight {}", w[i])));
                }
            }
        }
        Ok(PolyMap { components, kind })
    }

    /// Affine map from component strings.
    pub fn parse(tower: &Tower, vars: &[&str], comps: &[&str]) -> Res<PolyMap> {
        let c = comps.iter().map(|s| MultiPoly::parse(tower, vars, s)).collect::<Result<_, _>>()?;
        PolyMap::new(c, MapKind::Affine)
    }

    pub fn identity(tower: &Tower, vars: &[&str]) -> Res<PolyMap> {
        let c = vars.iter().map(|v| MultiPoly::var(tower, vars, v)).collect::<Result<_, _>>()?;
        PolyMap::new(c, MapKind::Affine)
    }

    /// (c₁x₁, …, c_kx_k).
    pub fn diagonal(vars: &[&str], scalars: &[FieldElement]) -> Res<PolyMap> {
        let Some(tower) = scalars.first().map(|s| s.tower().clone()) else {
            return Err(AutoError::Input("no scalars".into()));
        };
        let c = vars
            .iter()
            .zip(scalars)
            .map(|(v, s)| Ok(MultiPoly::var(&tower, vars, v)?.scale(&tower.lift(s)?)))
            .collect::<Res<_>>()?;
        PolyMap::new(c, MapKind::Affine)
    }

    pub fn tower(&self) -> &Tower {
        self.components[0].tower()
    }

    pub fn lift(&self, tower: &Tower) -> Res<PolyMap> {
        let c = self.components.iter().map(|p| p.lift(tower)).collect::<Result<_, _>>()?;
        Ok(PolyMap { components: c, kind: self.kind.clone() })
    }

    /// self ∘ inner.
    pub fn compose(&self, inner: &PolyMap) -> Res<PolyMap> {
        let tower = common_tower(self.tower(), inner.tower())?;
        let (outer, inner) = (self.lift(&tower)?, inner.lift(&tower)?);
        let c = outer.components.iter().map(|p| p.compose(&inner.components)).collect::<Result<_, _>>()?;
        let kind = if self.kind == inner.kind { self.kind.clone() } else { MapKind::Affine };
        Ok(PolyMap { components: c, kind })
    }

    pub fn is_identity(&self) -> bool {
        self.components.iter().enumerate().all(|(i, c)| {
            c.var_like(&c.vars()[i]).is_ok_and(|v| v == *c)
        })
    }

    /// Diagonal scalars, if every component is a constant multiple of its variable.
    pub fn diagonal_scalars(&self) -> Option<Vec<FieldElement>> {
        self.components
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut e = vec![0; c.vars().len()];
                e[i] = 1;
                let a = c.coefficient(&e);
                (*c == c.monomial_like(&e, &a)).then_some(a)
            })
            .collect()
    }

    pub fn show(&self) -> Vec<String> {
        self.components.iter().map(|c| c.to_string()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Invariance {
    /// f∘φ = λ·f.
    Invariant(FieldElement),
    /// f∘φ − λ̃·f for the candidate λ̃ read off the leading monomial of f.
    NotInvariant(MultiPoly),
}

impl Invariance {
    pub fn lambda(&self) -> Option<&FieldElement> {
        match self {
            Invariance::Invariant(l) => Some(l),
            Invariance::NotInvariant(_) => None,
        }
    }

    pub fn is_unit_invariant(&self) -> bool {
        self.lambda().is_some_and(|l| l.is_one())
    }

    pub fn describe(&self) -> String {
        match self {
            Invariance::Invariant(l) => format!("lambda = {l}"),
            Invariance::NotInvariant(r) => format!("residue {r}"),
        }
    }
}

pub fn check_invariance(f: &MultiPoly, phi: &PolyMap) -> Res<Invariance> {
    if f.vars().len() != phi.components.len() {
        return Err(AlgebraError::Arity { expected: f.vars().len(), got: phi.components.len() }.into());
    }
    let tower = common_tower(f.tower(), phi.tower())?;
    let f = f.lift(&tower)?;
    let g = f.compose(&phi.lift(&tower)?.components)?;
    let Some((m, c)) = f.leading_term() else {
        return Err(AutoError::Input("zero polynomial".into()));
    };
    let lambda = g.coefficient(&m.0).checked_div(&c)?;
    let residue = &g - &f.scale(&lambda);
    Ok(if residue.is_zero() && !lambda.is_zero() {
        Invariance::Invariant(lambda)
    } else {
        Invariance::NotInvariant(residue)
    })
}

/// Smallest k ≤ bound with φᵏ = id.
pub fn map_order(phi: &PolyMap, bound: u32) -> Res<Option<u32>> {
    let mut p = phi.clone();
    for k in 1..=bound {
        if p.is_identity() {
            return Ok(Some(k));
        }
        p = phi.compose(&p)?;
    }
    Ok(None)
}

/// Smith form of an integer matrix with n columns: the nonzero invariant
/// factors and a unimodular V such that U·A·V is diagonal.
pub fn smith_normal_form(a: &[Vec<i64>], n: usize) -> (Vec<i64>, Vec<Vec<i64>>) {
    let mut a = a.to_vec();
    let m = a.len();
    let mut v: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let mut diag = Vec::new();
    for t in 0..m.min(n) {
        loop {
            let pivot = (t..m)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].abs());
            let Some((pi, pj)) = pivot else {
                return (diag, v);
            };
            a.swap(t, pi);
            for row in a.iter_mut().chain(v.iter_mut()) {
                row.swap(t, pj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..m {
                let k = a[i][t] / p;
                for j in t..n {
                    a[i][j] -= k * a[t][j];
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..n {
                let k = a[t][j] / p;
                for row in a.iter_mut().skip(t).chain(v.iter_mut()) {
                    row[j] -= k * row[t];
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            if let Some(i) = (t + 1..m).find(|&i| (t + 1..n).any(|j| a[i][j] % p != 0)) {
                for j in t..n {
                    a[t][j] += a[i][j];
                }
                continue;
            }
            break;
        }
        diag.push(a[t][t].abs());
    }
    (diag, v)
}

fn mono_str(e: &[i64], names: &[&str]) -> String {
    let parts: Vec<String> = e
        .iter()
        .zip(names)
        .filter(|(&k, _)| k != 0)
        .map(|(&k, n)| if k == 1 { n.to_string() } else { format!("{n}^{k}") })
        .collect();
    if parts.is_empty() { "1".into() } else { parts.join("*") }
}

fn monomial_value(v: &[FieldElement], e: &[i64]) -> Res<FieldElement> {
    let mut acc = v[0].tower().one();
    for (x, &k) in v.iter().zip(e) {
        acc = &acc * &x.powi(k)?;
    }
    Ok(acc)
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

/// A family t ↦ (c₁t^{k₁}, ±c₂t^{k₂}, ±c₃t^{k₃}); the signs range over the
/// listed choices.
#[derive(Clone, Debug, Serialize)]
pub struct Parametrization {
    pub components: Vec<String>,
    #[serde(skip)]
    polys: Vec<MultiPoly>,
    #[serde(skip)]
    sign_vars: Vec<String>,
}

impl Parametrization {
    fn sign_choices(&self) -> Vec<Vec<i64>> {
        let k = self.sign_vars.len();
        (0..1u32 << k).map(|b| (0..k).map(|i| if b >> i & 1 == 1 { -1 } else { 1 }).collect()).collect()
    }

    /// The three scalars at parameter value `s` (an element of any tower).
    fn at(&self, s: &FieldElement, signs: &[i64]) -> Res<Vec<FieldElement>> {
        let tower = s.tower();
        let mut point = vec![s.clone()];
        point.extend(signs.iter().map(|&e| tower.int(e)));
        self.polys.iter().map(|p| Ok(p.eval(&point)?)).collect()
    }

    /// (cᵢ, kᵢ) when every component is a single monomial in s.
    fn monomials(&self, signs: &[i64]) -> Option<Vec<(FieldElement, i64)>> {
        let qq = Tower::rationals();
        let vars: Vec<&str> = self.polys[0].vars().iter().map(|v| v.as_str()).collect();
        let vals: Vec<(&str, FieldElement)> =
            vars[1..].iter().zip(signs).map(|(v, &e)| (*v, qq.int(e))).collect();
        self.polys
            .iter()
            .map(|p| {
                let p = if vals.is_empty() { p.clone() } else { p.substitute_values(&vals).ok()? };
                if p.num_terms() != 1 {
                    return None;
                }
                let (m, c) = p.leading_term()?;
                Some((c, m.0[0] as i64))
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagonalGroupDescriptor {
    pub case: String,
    pub equation: String,
    /// Exponent vectors of the monomials of f, leading first.
    pub monomials: Vec<Vec<i64>>,
    pub conditions: String,
    pub invariant_factors: Vec<i64>,
    pub free_rank: usize,
    pub label: String,
    pub parametrization: Option<Parametrization>,
    pub checks: Vec<Check>,
}

impl DiagonalGroupDescriptor {
    pub fn verified(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Whether the scalars (α, β, γ) satisfy every exponent condition.
    pub fn satisfies(&self, v: &[FieldElement]) -> Res<bool> {
        let first = monomial_value(v, &self.monomials[0])?;
        for m in &self.monomials[1..] {
            if monomial_value(v, m)? != first {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn klein_surface(case: Case) -> Res<SurfaceName> {
    Ok(match case {
        Case::E6 => SurfaceName::KleinE6,
        Case::E7 => SurfaceName::KleinE7,
        Case::E8 => SurfaceName::KleinE8,
        Case::Dn(n) => SurfaceName::KleinDn(n),
        Case::An(_) => {
            return Err(AutoError::Input("a_n has no diagonal parametrization; see the shear family".into()))
        }
    })
}

pub fn klein_equation(cat: &Catalog, case: Case) -> Res<MultiPoly> {
    let name = match case {
        Case::An(n) => SurfaceName::KleinAn(n),
        c => klein_surface(c)?,
    };
    Ok(SurfaceSpec::build(name, cat)?.equation().clone())
}

fn parametrization(cat: &Catalog, case: Case) -> Res<Result<Parametrization, String>> {
    let qq = Tower::rationals();
    let (polys, sign_vars) = match case {
        Case::E6 | Case::E7 | Case::E8 => (cat.polys(&format!("autos.param.{case}"))?, vec!["eps".to_string()]),
        Case::Dn(n) => {
            let c = cat.coeffs("autos.param.dn")?;
            let vars = ["s", "e1", "e2"];
            let mut polys = Vec::new();
            for (i, sign) in ["1", "e1", "e2"].iter().enumerate() {
                let e = &c[2 * i] + &c[2 * i + 1].scale(&q(n as i64, 1));
                let k = e.to_rational().filter(|r| r.is_integer() && *r.numer() >= 0.into());
                let Some(k) = k else {
                    return Ok(Err(format!("exponent {e} of component {i} is not a natural number")));
                };
                polys.push(MultiPoly::parse(&qq, &vars, &format!("{sign}*s^{k}"))?);
            }
            (polys, vec!["e1".into(), "e2".into()])
        }
        Case::An(_) => unreachable!(),
    };
    Ok(Ok(Parametrization { components: polys.iter().map(|p| p.to_string()).collect(), polys, sign_vars }))
}

fn random_rational(rng: &mut ChaCha8Rng) -> num_rational::BigRational {
    loop {
        let n: i64 = rng.random_range(-12..=12);
        if n != 0 {
            return q(n, rng.random_range(1..=7));
        }
    }
}

/// The diagonal maps (αx, βy, γz) preserving f up to a unit, derived from
/// the monomials of f, together with the checks on the printed family.
pub fn diagonal_group(cat: &Catalog, case: Case, seed: u64, exec: Execution) -> Res<DiagonalGroupDescriptor> {
    klein_surface(case)?;
    let f = klein_equation(cat, case)?;
    // distinct monomials are linearly independent, so f∘δ = λf forces each
    // monomial to rescale by the same λ
    let mut monomials: Vec<Vec<i64>> =
        f.terms().map(|(m, _)| m.0.iter().map(|&e| e as i64).collect()).collect();
    monomials.sort_by(|a, b| b.cmp(a));
    if monomials.len() < 2 {
        return Err(AutoError::Lattice(format!("{f} has a single monomial")));
    }
    let rows: Vec<Vec<i64>> =
        monomials[1..].iter().map(|m| m.iter().zip(&monomials[0]).map(|(a, b)| a - b).collect()).collect();
    let (factors, v) = smith_normal_form(&rows, 3);
    let free_rank = 3 - factors.len();
    if free_rank == 0 {
        return Err(AutoError::Lattice(format!("{f}: only finitely many diagonal maps")));
    }
    let mut label = vec![if free_rank == 1 { "C*".to_string() } else { format!("(C*)^{free_rank}") }];
    label.extend(factors.iter().filter(|&&d| d > 1).map(|d| format!("Z/{d}")));
    let conditions = monomials.iter().map(|m| mono_str(m, &GREEK)).collect::<Vec<_>>().join(" = ");
    let mut desc = DiagonalGroupDescriptor {
        case: case.to_string(),
        equation: f.to_string(),
        monomials,
        conditions,
        invariant_factors: factors.clone(),
        free_rank,
        label: label.join(" x "),
        parametrization: None,
        checks: Vec::new(),
    };

    let param = match parametrization(cat, case)? {
        Ok(p) => p,
        Err(why) => {
            desc.checks.push(Check::new("parametrization", false, why));
            return Ok(desc);
        }
    };

    // identically in the parameter, over ℚ(s)
    let qs = Tower::rationals().with_function("s")?;
    let s = qs.gen("s")?;
    let mut ok_cond = true;
    let mut ok_inv = true;
    let mut lambdas = Vec::new();
    for signs in param.sign_choices() {
        let vals = param.at(&s, &signs)?;
        ok_cond &= vals.iter().all(|v| !v.is_zero()) && desc.satisfies(&vals)?;
        match check_invariance(&f, &PolyMap::diagonal(&XYZ, &vals)?)? {
            Invariance::Invariant(l) if l == monomial_value(&vals, &desc.monomials[0])? => {
                lambdas.push(l.to_string())
            }
            other => {
                ok_inv = false;
                lambdas.push(other.describe());
            }
        }
    }
    desc.checks.push(Check::new(
        "parametrization satisfies the exponent conditions in Q(s)",
        ok_cond,
        desc.conditions.clone(),
    ));
    desc.checks.push(Check::new("f(alpha x, beta y, gamma z) = lambda f in Q(s)", ok_inv, lambdas.join("; ")));

    // random specializations over ℚ
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let choices = param.sign_choices();
    let specs: Vec<(num_rational::BigRational, Vec<i64>)> =
        (0..5).map(|_| (random_rational(&mut rng), choices[rng.random_range(0..choices.len())].clone())).collect();
    let qq = Tower::rationals();
    let spec_results = exec.try_map(&specs, |(s0, signs)| -> Res<(String, bool)> {
        let vals = param.at(&qq.rational(s0), signs)?;
        let inv = check_invariance(&f, &PolyMap::diagonal(&XYZ, &vals)?)?;
        Ok((format!("s = {s0}, signs {signs:?}: {}", inv.describe()), inv.lambda().is_some()))
    })?;
    for (i, (detail, ok)) in spec_results.into_iter().enumerate() {
        desc.checks.push(Check::new(format!("specialization {}", i + 1), ok, detail));
    }

    // exact solutions u ↦ v = u^V, u_k of order dividing the k-th factor
    let sample = |rng: &mut ChaCha8Rng| -> Res<Vec<FieldElement>> {
        let u: Vec<FieldElement> = (0..3)
            .map(|k| match factors.get(k) {
                // only the square roots of unity are rational
                Some(&d) if d % 2 == 0 && rng.random_bool(0.5) => qq.int(-1),
                Some(_) => qq.one(),
                None => qq.rational(&random_rational(rng)),
            })
            .collect();
        (0..3).map(|i| monomial_value(&u, &v[i])).collect()
    };
    let samples: Vec<Vec<FieldElement>> = (0..20).map(|_| sample(&mut rng)).collect::<Res<_>>()?;
    let hits = exec.try_map(&samples, |vals| -> Res<Option<String>> {
        if !desc.satisfies(vals)? {
            return Ok(None);
        }
        for signs in param.sign_choices() {
            let Some(mono) = param.monomials(&signs) else { continue };
            let ks: Vec<i64> = mono.iter().map(|m| m.1).collect();
            let Some(c) = bezout(&ks) else { continue };
            // s = Π (vᵢ/cᵢ)^{bᵢ} is the only candidate when gcd(kᵢ) = 1
            let mut s0 = qq.one();
            for ((val, (ci, _)), &b) in vals.iter().zip(&mono).zip(&c) {
                s0 = &s0 * &val.checked_div(ci)?.powi(b)?;
            }
            if param.at(&s0, &signs)? == *vals {
                return Ok(Some(format!("s = {s0}, signs {signs:?}")));
            }
        }
        Ok(None)
    })?;
    let missed = hits.iter().filter(|h| h.is_none()).count();
    desc.checks.push(Check::new(
        "parametrization hits 20 sampled solutions",
        missed == 0,
        format!("{} of 20 hit", 20 - missed),
    ));

    let mut closed = true;
    for _ in 0..10 {
        let (a, b) = (sample(&mut rng)?, sample(&mut rng)?);
        let prod: Vec<FieldElement> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        let inv: Vec<FieldElement> = a.iter().map(|x| x.inv()).collect::<Result<_, _>>()?;
        closed &= desc.satisfies(&prod)? && desc.satisfies(&inv)?;
    }
    desc.checks.push(Check::new("closed under products and inverses (10 pairs)", closed, ""));
    desc.parametrization = Some(param);
    Ok(desc)
}

/// Integers bᵢ with Σ bᵢkᵢ = 1, if gcd(kᵢ) = 1.
fn bezout(ks: &[i64]) -> Option<Vec<i64>> {
    let mut g = 0i64;
    let mut coeffs: Vec<i64> = Vec::new();
    for &k in ks {
        let e = g.extended_gcd(&k);
        coeffs.iter_mut().for_each(|c| *c *= e.x);
        coeffs.push(e.y);
        g = e.gcd;
        if g < 0 {
            g = -g;
            coeffs.iter_mut().for_each(|c| *c = -*c);
        }
    }
    (g == 1).then_some(coeffs)
}

#[derive(Clone, Debug, Serialize)]
pub struct Conjugation {
    pub lambda: String,
    pub signs: [i64; 2],
    pub invariant: bool,
    pub diagonal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TauReport {
    pub map: Vec<String>,
    pub order: Option<u32>,
    pub invariance: String,
    pub conjugations: Vec<Conjugation>,
    pub checks: Vec<Check>,
}

impl TauReport {
    pub fn verified(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// τ on d₄: order, exact invariance, and τ∘δ∘τ⁻¹ for random diagonal δ.
pub fn tau_report(cat: &Catalog, samples: usize, seed: u64) -> Res<TauReport> {
    let tau = PolyMap::new(cat.polys("autos.tau")?, MapKind::Affine)?;
    let f = klein_equation(cat, Case::Dn(4))?;
    let order = map_order(&tau, 12)?;
    let inv = check_invariance(&f, &tau)?;
    let tau_inv = tau.compose(&tau)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let qq = Tower::rationals();
    let mut conjugations = Vec::new();
    for _ in 0..samples {
        let l = qq.rational(&random_rational(&mut rng));
        let signs = [if rng.random_bool(0.5) { 1 } else { -1 }, if rng.random_bool(0.5) { 1 } else { -1 }];
        let delta =
            PolyMap::diagonal(&XYZ, &[l.pow(2), l.pow(2).scale(&q(signs[0], 1)), l.pow(3).scale(&q(signs[1], 1))])?;
        let conj = tau.compose(&delta)?.compose(&tau_inv)?;
        conjugations.push(Conjugation {
            lambda: l.to_string(),
            signs,
            invariant: check_invariance(&f, &conj)?.lambda().is_some(),
            diagonal: conj.diagonal_scalars().is_some(),
        });
    }
    let checks = vec![
        Check::new("tau has order 3", order == Some(3), format!("{order:?}")),
        Check::new("d4 o tau = d4", inv.is_unit_invariant(), inv.describe()),
        Check::new(
            "tau conjugates of diagonal maps preserve d4",
            conjugations.iter().all(|c| c.invariant),
            format!("{samples} samples"),
        ),
    ];
    Ok(TauReport { map: tau.show(), order, invariance: inv.describe(), conjugations, checks })
}

#[derive(Clone, Debug, Serialize)]
pub struct ShearReport {
    pub n: u32,
    pub p: String,
    pub map: Vec<String>,
    pub divisible: bool,
    pub invariance: String,
    pub verified: bool,
}

/// P as a polynomial in y over ℚ, in the variables (x, y, z).
pub fn parse_shear_poly(text: &str) -> Res<MultiPoly> {
    let p = MultiPoly::parse(&Tower::rationals(), &XYZ, text)?;
    if p.degree_in("x")? > 0 || p.degree_in("z")? > 0 {
        return Err(AutoError::Input(format!("P = {text} must be a polynomial in y")));
    }
    Ok(p)
}

/// (x, y, z) ↦ (x + yP, y, z + ((x + yP)ⁿ − xⁿ)/y) against xⁿ − yz.
pub fn verify_an_wild_family(cat: &Catalog, n: u32, p: &MultiPoly) -> Res<ShearReport> {
    if n < 2 {
        return Err(AutoError::Input(format!("a_n needs n >= 2, got {n}")));
    }
    let f = klein_equation(cat, Case::An(n))?;
    let tower = common_tower(f.tower(), p.tower())?;
    let p = p.lift(&tower)?.with_vars(&XYZ)?;
    let [x, y, z] = XYZ.map(|v| MultiPoly::var(&tower, &XYZ, v));
    let (x, y, z) = (x?, y?, z?);
    let x1 = &x + &(&y * &p);
    let num = &x1.pow(n) - &x.pow(n);
    let report = |map: Vec<String>, divisible, invariance: String, verified| ShearReport {
        n,
        p: p.to_string(),
        map,
        divisible,
        invariance,
        verified,
    };
    let Some(quot) = num.div_exact(&y)? else {
        return Ok(report(Vec::new(), false, "not a polynomial map".into(), false));
    };
    let phi = PolyMap::new(vec![x1, y.clone(), &z + &quot], MapKind::Affine)?;
    let inv = check_invariance(&f, &phi)?;
    Ok(report(phi.show(), true, inv.describe(), inv.is_unit_invariant()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith_small() {
        let (d, v) = smith_normal_form(&[vec![-4, 3, 0], vec![-4, 0, 2]], 3);
        assert_eq!(d, [1, 2]);
        let det = v[0][0] * (v[1][1] * v[2][2] - v[1][2] * v[2][1]) - v[0][1] * (v[1][0] * v[2][2] - v[1][2] * v[2][0])
            + v[0][2] * (v[1][0] * v[2][1] - v[1][1] * v[2][0]);
        assert_eq!(det.abs(), 1);
    }

    #[test]
    fn bezout_identity() {
        let c = bezout(&[3, 4, 6]).unwrap();
        assert_eq!(c[0] * 3 + c[1] * 4 + c[2] * 6, 1);
        assert!(bezout(&[4, 6]).is_none());
    }
}
