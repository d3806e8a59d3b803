//! The Picard lattice of ℙ² blown up in r points, its root system, Dynkin
//! classification, Coxeter numbers and (−1)-classes.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::exec::Execution;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("{0}")]
    Input(String),
    #[error("diagram is not of type ADE: {0}")]
    NotAde(String),
    #[error("Coxeter number mismatch for {label}: reflection order {reflection}, roots/rank {roots}")]
    Mismatch { label: String, reflection: u64, roots: u64 },
}

type Res<T> = Result<T, LatticeError>;

pub type Vector = Vec<i64>;

/// ℤ^{r+1} with basis e₀, …, e_r and form diag(1, −1, …, −1).
#[derive(Clone, Debug, Serialize)]
pub struct PicardLattice {
    pub r: usize,
    pub names: Vec<String>,
    pub gram: Vec<Vec<i64>>,
}

impl PicardLattice {
    pub fn new(r: usize) -> PicardLattice {
        let gram = (0..=r)
            .map(|i| (0..=r).map(|j| if i != j { 0 } else if i == 0 { 1 } else { -1 }).collect())
            .collect();
        PicardLattice { r, names: (0..=r).map(|i| format!("e{i}")).collect(), gram }
    }

    /// −3e₀ + e₁ + … + e_r.
    pub fn canonical(&self) -> Vector {
        let mut k = vec![1; self.r + 1];
        k[0] = -3;
        k
    }

    pub fn form(&self) -> Form {
        Form(self.gram.clone())
    }

    pub fn show(&self, v: &[i64]) -> String {
        show(v, &self.names)
    }
}

fn show(v: &[i64], names: &[String]) -> String {
    let mut s = String::new();
    for (c, n) in v.iter().zip(names) {
        if *c == 0 {
            continue;
        }
        let sign = if *c < 0 { "-" } else if s.is_empty() { "" } else { "+" };
        let mag = c.unsigned_abs();
        if mag == 1 {
            s.push_str(&format!("{sign}{n}"));
        } else {
            s.push_str(&format!("{sign}{mag}{n}"));
        }
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

/// A symmetric integral bilinear form.
#[derive(Clone, Debug)]
pub struct Form(pub Vec<Vec<i64>>);

impl Form {
    pub fn dot(&self, a: &[i64], b: &[i64]) -> i64 {
        let g = &self.0;
        (0..a.len()).map(|i| (0..b.len()).map(|j| a[i] * g[i][j] * b[j]).sum::<i64>()).sum()
    }

    /// s_α(v) = v − 2(v·α)/(α·α) α, for α·α = ±2.
    pub fn reflect(&self, alpha: &[i64], v: &[i64]) -> Vector {
        let c = 2 * self.dot(v, alpha) / self.dot(alpha, alpha);
        v.iter().zip(alpha).map(|(x, a)| x - c * a).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Dynkin {
    A(usize),
    D(usize),
    E(usize),
}

impl fmt::Display for Dynkin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dynkin::A(n) => write!(f, "A{n}"),
            Dynkin::D(n) => write!(f, "D{n}"),
            Dynkin::E(n) => write!(f, "E{n}"),
        }
    }
}

impl FromStr for Dynkin {
    type Err = LatticeError;
    fn from_str(s: &str) -> Res<Dynkin> {
        let bad = || LatticeError::Input(format!("unknown ADE label {s:?}"));
        let (k, n) = s.split_at(1.min(s.len()));
        let n: usize = n.parse().map_err(|_| bad())?;
        let d = match k {
            "A" | "a" if n >= 1 => Dynkin::A(n),
            "D" | "d" if n >= 4 => Dynkin::D(n),
            "E" | "e" if (6..=8).contains(&n) => Dynkin::E(n),
            _ => return Err(bad()),
        };
        Ok(d)
    }
}

impl Dynkin {
    pub fn rank(self) -> usize {
        match self {
            Dynkin::A(n) | Dynkin::D(n) | Dynkin::E(n) => n,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RootSystem {
    pub basis: Vec<String>,
    pub simple_roots: Vec<Vector>,
    /// α_i·α_j.
    pub cartan: Vec<Vec<i64>>,
    pub components: Vec<Dynkin>,
    /// Order of the product of the simple reflections.
    pub coxeter_number: u64,
    /// All roots, by closure of the simple roots under simple reflections.
    pub root_count: usize,
    #[serde(skip)]
    form: Form,
}

impl RootSystem {
    pub fn new(form: Form, basis: Vec<String>, simple_roots: Vec<Vector>) -> Res<RootSystem> {
        let norm = form.dot(&simple_roots[0], &simple_roots[0]);
        if norm.abs() != 2 || simple_roots.iter().any(|a| form.dot(a, a) != norm) {
            return Err(LatticeError::Input("simple roots must all have square 2 or all -2".into()));
        }
        let cartan: Vec<Vec<i64>> =
            simple_roots.iter().map(|a| simple_roots.iter().map(|b| form.dot(a, b)).collect()).collect();
        let components = classify(&cartan)?;
        let mut rs = RootSystem {
            basis,
            simple_roots,
            cartan,
            components,
            coxeter_number: 0,
            root_count: 0,
            form,
        };
        rs.coxeter_number = rs.reflection_order(10_000)?;
        rs.root_count = rs.roots().len();
        Ok(rs)
    }

    pub fn label(&self) -> String {
        self.components.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("x")
    }

    pub fn rank(&self) -> usize {
        self.simple_roots.len()
    }

    fn reflection_order(&self, bound: u64) -> Res<u64> {
        let dim = self.basis.len();
        let apply = |v: &Vector| self.simple_roots.iter().rev().fold(v.clone(), |v, a| self.form.reflect(a, &v));
        let unit = |i: usize| (0..dim).map(|j| i64::from(i == j)).collect::<Vector>();
        let mut cols: Vec<Vector> = (0..dim).map(unit).collect();
        for k in 1..=bound {
            cols = cols.iter().map(apply).collect();
            if (0..dim).all(|i| cols[i] == unit(i)) {
                return Ok(k);
            }
        }
        Err(LatticeError::Input(format!("Coxeter element order exceeds {bound}")))
    }

    pub fn roots(&self) -> BTreeSet<Vector> {
        let mut seen: BTreeSet<Vector> = self.simple_roots.iter().cloned().collect();
        let mut queue: VecDeque<Vector> = seen.iter().cloned().collect();
        while let Some(v) = queue.pop_front() {
            for a in &self.simple_roots {
                let w = self.form.reflect(a, &v);
                if seen.insert(w.clone()) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    pub fn show_roots(&self) -> Vec<String> {
        self.simple_roots.iter().map(|r| show(r, &self.basis)).collect()
    }
}

/// Splits a simply-laced Cartan matrix into connected ADE diagrams.
fn classify(cartan: &[Vec<i64>]) -> Res<Vec<Dynkin>> {
    let n = cartan.len();
    for i in 0..n {
        for j in 0..n {
            if i != j && cartan[i][j].abs() > 1 {
                return Err(LatticeError::NotAde("not simply laced".into()));
            }
        }
    }
    let adj: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| j != i && cartan[i][j] != 0).collect()).collect();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut nodes = vec![s];
        comp[s] = s;
        let mut k = 0;
        while k < nodes.len() {
            for &j in &adj[nodes[k]] {
                if comp[j] == usize::MAX {
                    comp[j] = s;
                    nodes.push(j);
                }
            }
            k += 1;
        }
        out.push(classify_tree(&nodes, &adj)?);
    }
    out.sort();
    Ok(out)
}

fn classify_tree(nodes: &[usize], adj: &[Vec<usize>]) -> Res<Dynkin> {
    let edges: usize = nodes.iter().map(|&v| adj[v].len()).sum::<usize>() / 2;
    if edges + 1 != nodes.len() {
        return Err(LatticeError::NotAde("diagram has a cycle".into()));
    }
    let branch: Vec<usize> = nodes.iter().copied().filter(|&v| adj[v].len() > 2).collect();
    match branch.as_slice() {
        [] => Ok(Dynkin::A(nodes.len())),
        [c] if adj[*c].len() == 3 => {
            let mut arms: Vec<usize> = adj[*c]
                .iter()
                .map(|&start| {
                    let (mut prev, mut cur, mut len) = (*c, start, 1);
                    while let Some(&next) = adj[cur].iter().find(|&&x| x != prev) {
                        prev = cur;
                        cur = next;
                        len += 1;
                    }
                    len
                })
                .collect();
            arms.sort();
            match arms.as_slice() {
                [1, 1, r] => Ok(Dynkin::D(r + 3)),
                [1, 2, 2] => Ok(Dynkin::E(6)),
                [1, 2, 3] => Ok(Dynkin::E(7)),
                [1, 2, 4] => Ok(Dynkin::E(8)),
                a => Err(LatticeError::NotAde(format!("arms {a:?}"))),
            }
        }
        _ => Err(LatticeError::NotAde("more than one branch node".into())),
    }
}

/// e₀ − e₁ − e₂ − e₃ and e_i − e_{i+1} in the blown-up lattice.
pub fn build_root_system(r: usize) -> Res<RootSystem> {
    if !(3..=8).contains(&r) {
        return Err(LatticeError::Input(format!("r must be in 3..=8, got {r}")));
    }
    let lat = PicardLattice::new(r);
    let mut roots = Vec::new();
    let mut a0 = vec![0; r + 1];
    a0[0] = 1;
    a0[1..4].iter_mut().for_each(|c| *c = -1);
    roots.push(a0);
    for i in 1..r {
        let mut v = vec![0; r + 1];
        v[i] = 1;
        v[i + 1] = -1;
        roots.push(v);
    }
    RootSystem::new(lat.form(), lat.names.clone(), roots)
}

/// The standard simple roots of an irreducible type.
pub fn standard_root_system(t: Dynkin) -> Res<RootSystem> {
    let euclid = |dim: usize| Form((0..dim).map(|i| (0..dim).map(|j| i64::from(i == j)).collect()).collect());
    let names = |dim: usize| (1..=dim).map(|i| format!("v{i}")).collect::<Vec<_>>();
    let diff = |dim: usize, i: usize| (0..dim).map(|k| i64::from(k == i) - i64::from(k == i + 1)).collect::<Vector>();
    match t {
        Dynkin::A(n) => RootSystem::new(euclid(n + 1), names(n + 1), (0..n).map(|i| diff(n + 1, i)).collect()),
        Dynkin::D(n) => {
            let mut roots: Vec<Vector> = (0..n - 1).map(|i| diff(n, i)).collect();
            let mut last = vec![0; n];
            last[n - 2] = 1;
            last[n - 1] = 1;
            roots.push(last);
            RootSystem::new(euclid(n), names(n), roots)
        }
        Dynkin::E(n) => build_root_system(n),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CoxeterReport {
    pub label: String,
    pub by_reflections: u64,
    pub by_roots: u64,
    pub roots: usize,
    pub rank: usize,
}

/// h two ways: order of the Coxeter element and |roots| / rank.
pub fn coxeter_number(t: Dynkin) -> Res<CoxeterReport> {
    let rs = standard_root_system(t)?;
    if rs.components != [t] {
        return Err(LatticeError::NotAde(format!("built {} for {t}", rs.label())));
    }
    let by_roots = (rs.root_count / rs.rank()) as u64;
    if rs.root_count % rs.rank() != 0 || by_roots != rs.coxeter_number {
        return Err(LatticeError::Mismatch { label: t.to_string(), reflection: rs.coxeter_number, roots: by_roots });
    }
    Ok(CoxeterReport {
        label: t.to_string(),
        by_reflections: rs.coxeter_number,
        by_roots,
        roots: rs.root_count,
        rank: rs.rank(),
    })
}

/// Classes v = d e₀ − Σ mᵢ eᵢ with v² = −1 and v·K = −1, i.e.
/// Σ mᵢ = 3d − 1 and Σ mᵢ² = d² + 1. Cauchy–Schwarz, (3d − 1)² ≤ r(d² + 1),
/// bounds d; each d is one stripe of the search.
pub fn minus_one_classes(r: usize, exec: Execution) -> Res<Vec<Vector>> {
    if r > 8 {
        return Err(LatticeError::Input("infinitely many classes for r > 8".into()));
    }
    let ri = r as i64;
    let ds: Vec<i64> = (-10i64..=10).filter(|&d| (3 * d - 1).pow(2) <= ri * (d * d + 1)).collect();
    let stripes = exec.map(&ds, |&d| {
        let mut out = Vec::new();
        let mut m = Vec::with_capacity(r);
        search(r, 3 * d - 1, d * d + 1, &mut m, &mut out);
        out.into_iter()
            .map(|m| std::iter::once(d).chain(m.into_iter().map(|x: i64| -x)).collect::<Vector>())
            .collect::<Vec<_>>()
    });
    let lat = PicardLattice::new(r);
    let form = lat.form();
    let k = lat.canonical();
    let all: Vec<Vector> = stripes.into_iter().flatten().collect();
    debug_assert!(all.iter().all(|v| form.dot(v, v) == -1 && form.dot(v, &k) == -1));
    Ok(all)
}

fn search(slots: usize, sum: i64, norm: i64, m: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if m.len() == slots {
        if sum == 0 && norm == 0 {
            out.push(m.clone());
        }
        return;
    }
    let left = (slots - m.len()) as i64;
    if norm < 0 || sum * sum > left * norm || (sum - norm).rem_euclid(2) != 0 {
        return;
    }
    let b = (norm as f64).sqrt() as i64;
    for x in -b..=b {
        m.push(x);
        search(slots, sum - x, norm - x * x, m, out);
        m.pop();
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryReplay {
    pub n: u32,
    pub k: u32,
    pub c_dot_d: i64,
    pub c_dot_f: i64,
    pub self_intersection: i64,
}

/// c₀ + c_n·n + c_k·k.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Lin([i64; 3]);

impl Lin {
    fn at(self, n: i64, k: i64) -> i64 {
        self.0[0] + self.0[1] * n + self.0[2] * k
    }
}

impl std::ops::Sub for Lin {
    type Output = Lin;
    fn sub(self, o: Lin) -> Lin {
        Lin([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

/// (C_n)² on the D_n compactification: C·D = 2k + 1 − n, div(w x^{k−1}/y) =
/// C − D + (k − 1)F and C·F = 2, so C² = C·D − 2(k − 1) = 3 − n, for both
/// n = 2k and n = 2k + 1.
pub fn dn_boundary_selfintersection(n: u32) -> Res<BoundaryReplay> {
    if n < 4 {
        return Err(LatticeError::Input(format!("n must be at least 4, got {n}")));
    }
    let c_dot_d = Lin([1, -1, 2]);
    let c_dot_f = 2;
    // C·(C − D + (k − 1)F) = 0
    let c2 = c_dot_d - Lin([-c_dot_f, 0, c_dot_f]);
    if c2 != Lin([3, -1, 0]) {
        return Err(LatticeError::Input("replay does not reduce to 3 - n".into()));
    }
    let k = n / 2;
    let (ni, ki) = (n as i64, k as i64);
    let cd = c_dot_d.at(ni, ki);
    if cd != if n % 2 == 0 { 1 } else { 0 } {
        return Err(LatticeError::Input(format!("C.D = {cd} for n = {n}")));
    }
    Ok(BoundaryReplay { n, k, c_dot_d: cd, c_dot_f, self_intersection: c2.at(ni, ki) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        assert_eq!(build_root_system(3).unwrap().label(), "A1xA2");
        assert_eq!(build_root_system(5).unwrap().label(), "D5");
        assert_eq!("D5".parse::<Dynkin>().unwrap(), Dynkin::D(5));
        assert!("E9".parse::<Dynkin>().is_err());
    }
}
