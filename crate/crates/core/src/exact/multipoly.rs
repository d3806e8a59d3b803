use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::BigRational;

use super::level::{join_terms, Value};
use super::{AlgebraError, FieldElement, Tower};

/// Exponent vector; ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn weighted_degree(&self, w: &[u32]) -> u32 {
        self.0.iter().zip(w).map(|(e, w)| e * w).sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over a tower.
#[derive(Clone)]
pub struct MultiPoly {
    tower: Tower,
    vars: Arc<Vec<String>>,
    pub(crate) terms: BTreeMap<Monomial, Value>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.terms == other.terms && self.tower == other.tower
    }
}
impl Eq for MultiPoly {}

type Res<T> = Result<T, AlgebraError>;

impl MultiPoly {
    pub fn zero(tower: &Tower, vars: &[&str]) -> MultiPoly {
        MultiPoly {
            tower: tower.clone(),
            vars: Arc::new(vars.iter().map(|s| s.to_string()).collect()),
            terms: BTreeMap::new(),
        }
    }

    fn empty_like(&self) -> MultiPoly {
        MultiPoly { tower: self.tower.clone(), vars: self.vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(tower: &Tower, vars: &[&str], c: &FieldElement) -> MultiPoly {
        let mut p = MultiPoly::zero(tower, vars);
        p.set_const(c);
        p
    }

    fn set_const(&mut self, c: &FieldElement) {
        assert!(c.tower == self.tower, "tower mismatch");
        if !c.is_zero() {
            self.terms.insert(Monomial(vec![0; self.vars.len()]), c.value.clone());
        }
    }

    /// The constant polynomial with the same tower and variables.
    pub fn constant_like(&self, c: &FieldElement) -> MultiPoly {
        let mut p = self.empty_like();
        p.set_const(c);
        p
    }

    pub fn one_like(&self) -> MultiPoly {
        self.constant_like(&self.tower.one())
    }

    pub fn zero_like(&self) -> MultiPoly {
        self.empty_like()
    }

    pub fn var(tower: &Tower, vars: &[&str], name: &str) -> Res<MultiPoly> {
        let mut p = MultiPoly::zero(tower, vars);
        let k = p.var_index(name)?;
        let mut e = vec![0; vars.len()];
        e[k] = 1;
        p.terms.insert(Monomial(e), tower.lv().one());
        Ok(p)
    }

    pub fn var_like(&self, name: &str) -> Res<MultiPoly> {
        let k = self.var_index(name)?;
        let mut p = self.empty_like();
        let mut e = vec![0; self.vars.len()];
        e[k] = 1;
        p.terms.insert(Monomial(e), self.tower.lv().one());
        Ok(p)
    }

    pub fn monomial_like(&self, exps: &[u32], c: &FieldElement) -> MultiPoly {
        assert_eq!(exps.len(), self.vars.len());
        let mut p = self.empty_like();
        if !c.is_zero() {
            p.terms.insert(Monomial(exps.to_vec()), c.value.clone());
        }
        p
    }

    /// Univariate polynomial with rational coefficients (low to high).
    pub fn from_univariate_rationals<T: Clone + Into<num_bigint::BigInt>>(
        tower: &Tower,
        var: &str,
        coeffs: &[T],
    ) -> MultiPoly {
        let mut p = MultiPoly::zero(tower, &[var]);
        for (k, c) in coeffs.iter().enumerate() {
            let q = BigRational::from_integer(c.clone().into());
            let v = tower.lv().from_q(q);
            if !tower.lv().is_zero(&v) {
                p.terms.insert(Monomial(vec![k as u32]), v);
            }
        }
        p
    }

    pub fn parse(tower: &Tower, vars: &[&str], text: &str) -> Res<MultiPoly> {
        super::parse::parse_poly(tower, vars, text)
    }

    /// Parses with the same tower and variables as `self`.
    pub fn parse_like(&self, text: &str) -> Res<MultiPoly> {
        let vars: Vec<&str> = self.vars.iter().map(|s| s.as_str()).collect();
        MultiPoly::parse(&self.tower, &vars, text)
    }

    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Res<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| AlgebraError::UnknownSymbol(name.to_string()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn constant_value(&self) -> Option<FieldElement> {
        if !self.is_constant() {
            return None;
        }
        Some(self.coefficient(&vec![0; self.vars.len()]))
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, FieldElement)> + '_ {
        self.terms.iter().map(|(m, v)| (m, self.tower.wrap(v.clone())))
    }

    pub fn coefficient(&self, exps: &[u32]) -> FieldElement {
        match self.terms.get(&Monomial(exps.to_vec())) {
            Some(v) => self.tower.wrap(v.clone()),
            None => self.tower.zero(),
        }
    }

    pub fn leading_term(&self) -> Option<(Monomial, FieldElement)> {
        self.terms.iter().next_back().map(|(m, v)| (m.clone(), self.tower.wrap(v.clone())))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn degree_in(&self, var: &str) -> Res<u32> {
        let k = self.var_index(var)?;
        Ok(self.terms.keys().map(|m| m.0[k]).max().unwrap_or(0))
    }

    /// Set of weighted degrees of the terms.
    pub fn weighted_degrees(&self, weights: &[u32]) -> BTreeSet<u32> {
        self.terms.keys().map(|m| m.weighted_degree(weights)).collect()
    }

    fn check(&self, other: &MultiPoly) {
        assert!(self.tower == other.tower, "tower mismatch");
        assert!(self.vars == other.vars, "variable mismatch: {:?} vs {:?}", self.vars, other.vars);
    }

    fn add_term(&mut self, m: Monomial, v: Value) {
        let lv = self.tower.lv();
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                if !lv.is_zero(&v) {
                    e.insert(v);
                }
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = lv.add(e.get(), &v);
                if lv.is_zero(&s) {
                    e.remove();
                } else {
                    e.insert(s);
                }
            }
        }
    }

    pub fn scale(&self, c: &FieldElement) -> MultiPoly {
        assert!(c.tower == self.tower, "tower mismatch");
        let lv = self.tower.lv();
        if c.is_zero() {
            return self.empty_like();
        }
        let mut p = self.empty_like();
        for (m, v) in &self.terms {
            p.terms.insert(m.clone(), lv.mul(v, &c.value));
        }
        p
    }

    pub fn scale_q(&self, q: &BigRational) -> MultiPoly {
        self.scale(&self.tower.rational(q))
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = self.one_like();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, var: &str) -> Res<MultiPoly> {
        let k = self.var_index(var)?;
        let lv = self.tower.lv();
        let mut p = self.empty_like();
        for (m, v) in &self.terms {
            if m.0[k] == 0 {
                continue;
            }
            let mut e = m.0.clone();
            let c = lv.mul_q(v, &BigRational::from_integer(e[k].into()));
            e[k] -= 1;
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    /// Simultaneous substitution of every variable by the given images.
    /// Images must share variables and a tower extending this one.
    pub fn compose(&self, images: &[MultiPoly]) -> Res<MultiPoly> {
        if images.len() != self.vars.len() {
            return Err(AlgebraError::Arity { expected: self.vars.len(), got: images.len() });
        }
        let Some(first) = images.first() else {
            return Err(AlgebraError::Arity { expected: 1, got: 0 });
        };
        let target = first.tower.clone();
        if !self.tower.is_prefix_of(&target) {
            return Err(AlgebraError::TowerMismatch);
        }
        for im in images {
            if im.tower != target || im.vars != first.vars {
                return Err(AlgebraError::TowerMismatch);
            }
        }
        let mut powers: Vec<Vec<MultiPoly>> = images.iter().map(|im| vec![im.one_like()]).collect();
        let mut out = first.empty_like();
        let tlv = target.lv();
        let from = self.tower.depth();
        for (m, v) in &self.terms {
            let mut t = first.empty_like();
            t.terms.insert(Monomial(vec![0; first.vars.len()]), tlv.lift_from(from, v.clone()));
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Substitutes one variable, keeping the others.
    pub fn substitute(&self, var: &str, q: &MultiPoly) -> Res<MultiPoly> {
        let k = self.var_index(var)?;
        let mut images = Vec::with_capacity(self.vars.len());
        for (i, name) in self.vars.iter().enumerate() {
            if i == k {
                images.push(q.clone());
            } else {
                images.push(q.var_like(name)?);
            }
        }
        self.compose(&images)
    }

    /// Substitutes several variables by constants.
    pub fn substitute_values(&self, values: &[(&str, FieldElement)]) -> Res<MultiPoly> {
        let mut images = Vec::with_capacity(self.vars.len());
        let tower = values.first().map(|(_, v)| v.tower.clone()).unwrap_or(self.tower.clone());
        let vars: Vec<&str> = self.vars.iter().map(|s| s.as_str()).collect();
        for name in &vars {
            match values.iter().find(|(n, _)| n == name) {
                Some((_, v)) => images.push(MultiPoly::constant(&tower, &vars, v)),
                None => images.push(MultiPoly::var(&tower, &vars, name)?),
            }
        }
        self.compose(&images)
    }

    pub fn eval(&self, point: &[FieldElement]) -> Res<FieldElement> {
        if point.len() != self.vars.len() {
            return Err(AlgebraError::Arity { expected: self.vars.len(), got: point.len() });
        }
        let target = point.first().map(|p| p.tower.clone()).unwrap_or(self.tower.clone());
        if !self.tower.is_prefix_of(&target) || point.iter().any(|p| p.tower != target) {
            return Err(AlgebraError::TowerMismatch);
        }
        let mut acc = target.zero();
        let mut cache: Vec<Vec<FieldElement>> = point.iter().map(|_| vec![target.one()]).collect();
        for (m, v) in &self.terms {
            let mut t = target.lift(&self.tower.wrap(v.clone()))?;
            for (i, &e) in m.0.iter().enumerate() {
                while cache[i].len() <= e as usize {
                    let next = cache[i].last().unwrap() * &point[i];
                    cache[i].push(next);
                }
                if e > 0 {
                    t = &t * &cache[i][e as usize];
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Numeric value and the sum of absolute term values (for relative residues).
    pub fn eval_numeric(
        &self,
        emb: &super::Embedding,
        point: &[Complex64],
    ) -> (Complex64, f64) {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for (m, v) in &self.terms {
            let mut t = self.tower.lv().eval(v, &emb.values);
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= point[i].powu(e);
                }
            }
            acc += t;
            scale += t.norm();
        }
        (acc, scale)
    }

    /// Re-expresses over a new variable list; every variable actually used
    /// must appear in it.
    pub fn with_vars(&self, vars: &[&str]) -> Res<MultiPoly> {
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            let used = self.terms.keys().any(|m| m.0[i] > 0);
            match vars.iter().position(|n| n == v) {
                Some(j) => map.push(Some(j)),
                None if !used => map.push(None),
                None => return Err(AlgebraError::UnknownSymbol(v.clone())),
            }
        }
        let mut p = MultiPoly::zero(&self.tower, vars);
        for (m, v) in &self.terms {
            let mut e = vec![0; vars.len()];
            for (i, &x) in m.0.iter().enumerate() {
                if let Some(j) = map[i] {
                    e[j] += x;
                }
            }
            p.add_term(Monomial(e), v.clone());
        }
        Ok(p)
    }

    /// Moves the polynomial into an extension tower.
    pub fn lift(&self, tower: &Tower) -> Res<MultiPoly> {
        if !self.tower.is_prefix_of(tower) {
            return Err(AlgebraError::TowerMismatch);
        }
        let from = self.tower.depth();
        let lv = tower.lv();
        Ok(MultiPoly {
            tower: tower.clone(),
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), lv.lift_from(from, v.clone())))
                .collect(),
        })
    }

    /// Moves the polynomial into another tower by generator name
    /// (see `Tower::transfer`).
    pub fn transfer(&self, tower: &Tower) -> Res<MultiPoly> {
        if self.tower.is_prefix_of(tower) {
            return self.lift(tower);
        }
        let mut p = MultiPoly { tower: tower.clone(), vars: self.vars.clone(), terms: BTreeMap::new() };
        for (m, c) in self.terms() {
            p.add_term(m.clone(), tower.transfer(&c)?.value);
        }
        Ok(p)
    }

    /// Applies a coefficient map into a (possibly different) tower.
    pub fn map_coefficients(
        &self,
        tower: &Tower,
        f: impl Fn(&FieldElement) -> FieldElement,
    ) -> MultiPoly {
        let mut p = MultiPoly { tower: tower.clone(), vars: self.vars.clone(), terms: BTreeMap::new() };
        for (m, c) in self.terms() {
            let d = f(&c);
            assert!(d.tower == *tower, "coefficient map left the target tower");
            p.add_term(m.clone(), d.value);
        }
        p
    }

    /// Dense coefficient list (low to high) of a polynomial in `var` alone.
    pub fn univariate_coefficients(&self, var: &str) -> Res<Vec<FieldElement>> {
        let k = self.var_index(var)?;
        let mut out = vec![];
        for (m, v) in &self.terms {
            if m.0.iter().enumerate().any(|(i, &e)| i != k && e > 0) {
                return Err(AlgebraError::NotUnivariate(var.to_string()));
            }
            let e = m.0[k] as usize;
            if out.len() <= e {
                out.resize(e + 1, self.tower.zero());
            }
            out[e] = self.tower.wrap(v.clone());
        }
        Ok(out)
    }

    /// Coefficients with respect to `var`, as polynomials in the same
    /// variables (not involving `var`), low to high.
    pub fn as_univariate(&self, var: &str) -> Res<Vec<MultiPoly>> {
        let k = self.var_index(var)?;
        let mut out: Vec<MultiPoly> = vec![];
        for (m, v) in &self.terms {
            let e = m.0[k] as usize;
            while out.len() <= e {
                out.push(self.empty_like());
            }
            let mut mm = m.0.clone();
            mm[k] = 0;
            out[e].terms.insert(Monomial(mm), v.clone());
        }
        Ok(out)
    }

    pub fn from_univariate(var: &str, coeffs: &[MultiPoly]) -> Res<MultiPoly> {
        let first = coeffs.first().ok_or(AlgebraError::Arity { expected: 1, got: 0 })?;
        let x = first.var_like(var)?;
        let mut acc = first.empty_like();
        for c in coeffs.iter().rev() {
            acc = &(&acc * &x) + c;
        }
        Ok(acc)
    }

    /// Coefficients with respect to a subset of variables: maps each
    /// exponent pattern in `vars` to its coefficient polynomial.
    pub fn collect_in(&self, vars: &[&str]) -> Res<BTreeMap<Vec<u32>, MultiPoly>> {
        let idx: Vec<usize> = vars.iter().map(|v| self.var_index(v)).collect::<Res<_>>()?;
        let mut out: BTreeMap<Vec<u32>, MultiPoly> = BTreeMap::new();
        for (m, v) in &self.terms {
            let key: Vec<u32> = idx.iter().map(|&i| m.0[i]).collect();
            let mut mm = m.0.clone();
            for &i in &idx {
                mm[i] = 0;
            }
            out.entry(key).or_insert_with(|| self.empty_like()).terms.insert(Monomial(mm), v.clone());
        }
        Ok(out)
    }

    /// Division with remainder in `var`; the divisor's leading coefficient
    /// in `var` must be a nonzero constant.
    pub fn divrem_in(&self, var: &str, den: &MultiPoly) -> Res<(MultiPoly, MultiPoly)> {
        self.check(den);
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        let dc = den.as_univariate(var)?;
        let lc = dc
            .last()
            .unwrap()
            .constant_value()
            .ok_or_else(|| AlgebraError::Inexact("leading coefficient not constant".into()))?;
        let lc_inv = lc.inv()?;
        let dd = dc.len() - 1;
        let x = self.var_like(var)?;
        let mut r = self.clone();
        let mut q = self.empty_like();
        loop {
            let rc = r.as_univariate(var)?;
            if r.is_zero() || rc.len() - 1 < dd {
                break;
            }
            let k = rc.len() - 1 - dd;
            let c = rc.last().unwrap().scale(&lc_inv);
            let t = &c * &x.pow(k as u32);
            q = &q + &t;
            r = &r - &(&t * den);
        }
        Ok((q, r))
    }

    /// Exact quotient, or None if `den` does not divide `self`.
    pub fn div_exact(&self, den: &MultiPoly) -> Res<Option<MultiPoly>> {
        self.check(den);
        let Some((lm, lc)) = den.leading_term() else {
            return Err(AlgebraError::DivisionByZero);
        };
        let lc_inv = lc.inv()?;
        let mut r = self.clone();
        let mut q = self.empty_like();
        while let Some((m, c)) = r.leading_term() {
            if !lm.divides(&m) {
                return Ok(None);
            }
            let e: Vec<u32> = m.0.iter().zip(&lm.0).map(|(a, b)| a - b).collect();
            let t = self.monomial_like(&e, &(&c * &lc_inv));
            r = &r - &(&t * den);
            q = &q + &t;
        }
        Ok(Some(q))
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Res<MultiPoly> {
        match self.leading_term() {
            None => Ok(self.clone()),
            Some((_, c)) => Ok(self.scale(&c.inv()?)),
        }
    }

    /// Returns λ with self = λ·other, if the two are proportional.
    pub fn proportionality(&self, other: &MultiPoly) -> Res<Option<FieldElement>> {
        self.check(other);
        let (Some((m1, c1)), Some((m2, c2))) = (self.leading_term(), other.leading_term()) else {
            return Ok((self.is_zero() && other.is_zero()).then(|| self.tower.one()));
        };
        if m1 != m2 || self.num_terms() != other.num_terms() {
            return Ok(None);
        }
        let lambda = c1.checked_div(&c2)?;
        Ok((*self == other.scale(&lambda)).then_some(lambda))
    }

    /// Numeric coefficient list of a univariate polynomial.
    pub fn numeric_coefficients(&self, var: &str, emb: &super::Embedding) -> Res<Vec<Complex64>> {
        Ok(self.univariate_coefficients(var)?.iter().map(|c| c.eval(emb)).collect())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lv = self.tower.lv();
        let mut parts: Vec<(bool, String)> = Vec::new();
        for (m, v) in self.terms.iter().rev() {
            let mono: Vec<String> = m
                .0
                .iter()
                .zip(self.vars.iter())
                .filter(|(e, _)| **e > 0)
                .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
                .collect();
            let mono = mono.join("*");
            let ct = lv.terms(v);
            if ct.len() == 1 {
                let (neg, body) = &ct[0];
                let s = if mono.is_empty() {
                    body.clone()
                } else if body == "1" {
                    mono
                } else {
                    format!("{body}*{mono}")
                };
                parts.push((*neg, s));
            } else {
                let c = join_terms(&ct);
                let s = if mono.is_empty() { format!("({c})") } else { format!("({c})*{mono}") };
                parts.push((false, s));
            }
        }
        f.write_str(&join_terms(&parts))
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.check(rhs);
        let mut p = self.clone();
        for (m, v) in &rhs.terms {
            p.add_term(m.clone(), v.clone());
        }
        p
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        let lv = self.tower.lv();
        let mut p = self.empty_like();
        for (m, v) in &self.terms {
            p.terms.insert(m.clone(), lv.neg(v));
        }
        p
    }
}

impl Sub<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.check(rhs);
        let lv = self.tower.lv();
        let mut p = self.clone();
        for (m, v) in &rhs.terms {
            p.add_term(m.clone(), lv.neg(v));
        }
        p
    }
}

impl Mul<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.check(rhs);
        let lv = self.tower.lv();
        let mut acc: std::collections::HashMap<Monomial, Value> = std::collections::HashMap::new();
        for (m1, v1) in &self.terms {
            for (m2, v2) in &rhs.terms {
                let e: Vec<u32> = m1.0.iter().zip(&m2.0).map(|(a, b)| a + b).collect();
                let t = lv.mul(v1, v2);
                match acc.entry(Monomial(e)) {
                    std::collections::hash_map::Entry::Vacant(x) => {
                        x.insert(t);
                    }
                    std::collections::hash_map::Entry::Occupied(mut x) => {
                        let s = lv.add(x.get(), &t);
                        x.insert(s);
                    }
                }
            }
        }
        let mut p = self.empty_like();
        p.terms = acc.into_iter().filter(|(_, v)| !lv.is_zero(v)).collect();
        p
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: &MultiPoly) -> MultiPoly {
                (&self).$m(rhs)
            }
        }
        impl $tr<MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                self.$m(&rhs)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}
