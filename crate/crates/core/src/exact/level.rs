//! Level-indexed arithmetic on raw tower values.
//!
//! A tower with k steps is handled as a slice of steps; the field at level k
//! is the field generated by the first k steps. Values carry no tower
//! pointer, the level supplies the context.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::fixed::CFixed;
use super::AlgebraError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Value {
    /// Base field element.
    Q(BigRational),
    /// Residue class modulo an algebraic/radical relation; coefficients
    /// low to high, trimmed, fewer than the relation degree.
    P(Vec<Value>),
    /// Rational function num/den; coprime, den monic.
    F(Vec<Value>, Vec<Value>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum StepKind {
    /// Monic modulus over the level below, coefficients low to high.
    Algebraic(Vec<Value>),
    /// g^n = radicand.
    Radical(usize, Value),
    Function,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Step {
    pub name: String,
    pub kind: StepKind,
}

type Res<T> = Result<T, AlgebraError>;

#[derive(Clone, Copy)]
pub(crate) struct Lv<'a>(pub &'a [Step]);

impl<'a> Lv<'a> {
    pub fn split(self) -> Option<(Lv<'a>, &'a Step)> {
        self.0.split_last().map(|(s, rest)| (Lv(rest), s))
    }

    pub fn depth(self) -> usize {
        self.0.len()
    }

    pub fn zero(self) -> Value {
        match self.split() {
            None => Value::Q(BigRational::zero()),
            Some((b, s)) => match s.kind {
                StepKind::Function => Value::F(vec![], vec![b.one()]),
                _ => Value::P(vec![]),
            },
        }
    }

    pub fn one(self) -> Value {
        self.from_q(BigRational::one())
    }

    pub fn from_q(self, q: BigRational) -> Value {
        match self.split() {
            None => Value::Q(q),
            Some((b, s)) => {
                if q.is_zero() {
                    return self.zero();
                }
                let c = b.from_q(q);
                match s.kind {
                    StepKind::Function => Value::F(vec![c], vec![b.one()]),
                    _ => Value::P(vec![c]),
                }
            }
        }
    }

    pub fn from_int(self, n: i64) -> Value {
        self.from_q(BigRational::from_integer(BigInt::from(n)))
    }

    /// Embeds a value of the level directly below.
    pub fn embed(self, v: Value) -> Value {
        let (b, s) = self.split().expect("embed into base level");
        if b.is_zero(&v) {
            return self.zero();
        }
        match s.kind {
            StepKind::Function => Value::F(vec![v], vec![b.one()]),
            _ => Value::P(vec![v]),
        }
    }

    /// Embeds a value living at level `from` (a prefix of this level).
    pub fn lift_from(self, from: usize, v: Value) -> Value {
        if from == self.depth() {
            return v;
        }
        let mut out = v;
        for k in from + 1..=self.depth() {
            out = Lv(&self.0[..k]).embed(out);
        }
        out
    }

    /// The top generator as a value of this level.
    pub fn gen(self) -> Value {
        let (b, s) = self.split().expect("base level has no generator");
        match &s.kind {
            StepKind::Function => Value::F(vec![b.zero(), b.one()], vec![b.one()]),
            _ => self.reduce(vec![b.zero(), b.one()]),
        }
    }

    pub fn is_zero(self, v: &Value) -> bool {
        match v {
            Value::Q(r) => r.is_zero(),
            Value::P(c) => c.is_empty(),
            Value::F(n, _) => n.is_empty(),
        }
    }

    pub fn is_one(self, v: &Value) -> bool {
        self.as_q(v).is_some_and(|q| q.is_one())
    }

    /// Returns the rational value if `v` lies in the base field.
    pub fn as_q(self, v: &Value) -> Option<BigRational> {
        match v {
            Value::Q(r) => Some(r.clone()),
            Value::P(c) => {
                let b = self.split()?.0;
                match c.len() {
                    0 => Some(BigRational::zero()),
                    1 => b.as_q(&c[0]),
                    _ => None,
                }
            }
            Value::F(n, d) => {
                let b = self.split()?.0;
                if d.len() != 1 {
                    return None;
                }
                match n.len() {
                    0 => Some(BigRational::zero()),
                    1 => b.as_q(&n[0]),
                    _ => None,
                }
            }
        }
    }

    pub fn neg(self, a: &Value) -> Value {
        match a {
            Value::Q(x) => Value::Q(-x),
            Value::P(c) => {
                let b = self.split().unwrap().0;
                Value::P(pneg(b, c))
            }
            Value::F(n, d) => {
                let b = self.split().unwrap().0;
                Value::F(pneg(b, n), d.clone())
            }
        }
    }

    pub fn add(self, a: &Value, c: &Value) -> Value {
        match (a, c) {
            (Value::Q(x), Value::Q(y)) => Value::Q(x + y),
            (Value::P(x), Value::P(y)) => {
                let b = self.split().unwrap().0;
                Value::P(padd(b, x, y))
            }
            (Value::F(n1, d1), Value::F(n2, d2)) => {
                let b = self.split().unwrap().0;
                if self.is_zero(a) {
                    return c.clone();
                }
                if self.is_zero(c) {
                    return a.clone();
                }
                if d1 == d2 {
                    norm_frac(b, padd(b, n1, n2), d1.clone())
                } else {
                    let num = padd(b, &pmul(b, n1, d2), &pmul(b, n2, d1));
                    norm_frac(b, num, pmul(b, d1, d2))
                }
            }
            _ => panic!("level mismatch in add"),
        }
    }

    pub fn sub(self, a: &Value, c: &Value) -> Value {
        self.add(a, &self.neg(c))
    }

    pub fn mul(self, a: &Value, c: &Value) -> Value {
        match (a, c) {
            (Value::Q(x), Value::Q(y)) => Value::Q(x * y),
            (Value::P(x), Value::P(y)) => {
                let b = self.split().unwrap().0;
                if x.is_empty() || y.is_empty() {
                    return Value::P(vec![]);
                }
                if x.len() == 1 {
                    return Value::P(pscale(b, y, &x[0]));
                }
                if y.len() == 1 {
                    return Value::P(pscale(b, x, &y[0]));
                }
                self.reduce(pmul(b, x, y))
            }
            (Value::F(n1, d1), Value::F(n2, d2)) => {
                let b = self.split().unwrap().0;
                if n1.is_empty() || n2.is_empty() {
                    return self.zero();
                }
                let g1 = pgcd(b, n1, d2);
                let g2 = pgcd(b, n2, d1);
                let (n1, d2) = (pdiv_exact(b, n1, &g1), pdiv_exact(b, d2, &g1));
                let (n2, d1) = (pdiv_exact(b, n2, &g2), pdiv_exact(b, d1, &g2));
                Value::F(pmul(b, &n1, &n2), pmul(b, &d1, &d2))
            }
            _ => panic!("level mismatch in mul"),
        }
    }

    pub fn mul_q(self, a: &Value, q: &BigRational) -> Value {
        if q.is_zero() {
            return self.zero();
        }
        match a {
            Value::Q(x) => Value::Q(x * q),
            Value::P(c) => {
                let b = self.split().unwrap().0;
                Value::P(c.iter().map(|v| b.mul_q(v, q)).collect())
            }
            Value::F(n, d) => {
                let b = self.split().unwrap().0;
                Value::F(n.iter().map(|v| b.mul_q(v, q)).collect(), d.clone())
            }
        }
    }

    pub fn pow(self, a: &Value, mut e: u64) -> Value {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn inv(self, a: &Value) -> Res<Value> {
        if self.is_zero(a) {
            return Err(AlgebraError::DivisionByZero);
        }
        match a {
            Value::Q(x) => Ok(Value::Q(x.recip())),
            Value::F(n, d) => {
                let b = self.split().unwrap().0;
                Ok(norm_frac(b, d.clone(), n.clone()))
            }
            Value::P(c) => {
                let (b, s) = self.split().unwrap();
                // monomial fast path for radicals: (u g^k)^-1 = u^-1 g^(n-k) / r
                if let StepKind::Radical(n, r) = &s.kind {
                    let k = c.len() - 1;
                    if c[..k].iter().all(|v| b.is_zero(v)) {
                        let u = &c[k];
                        if k == 0 {
                            return Ok(Value::P(vec![b.inv(u)?]));
                        }
                        let coeff = b.inv(&b.mul(u, r))?;
                        let mut out = vec![b.zero(); n - k + 1];
                        out[n - k] = coeff;
                        return Ok(self.reduce(out));
                    }
                }
                let m = self.modulus();
                let (g, s_coef) = pxgcd_left(b, c, &m)?;
                if g.len() > 1 {
                    return Err(AlgebraError::TowerZeroDivisor {
                        generator: s.name.clone(),
                        factor: fmt_poly(b, &g, &s.name),
                    });
                }
                let g0inv = b.inv(&g[0])?;
                Ok(self.reduce(pscale(b, &s_coef, &g0inv)))
            }
        }
    }

    /// Modulus polynomial of an algebraic or radical top step.
    pub fn modulus(self) -> Vec<Value> {
        let (b, s) = self.split().unwrap();
        match &s.kind {
            StepKind::Algebraic(m) => m.clone(),
            StepKind::Radical(n, r) => {
                let mut m = vec![b.zero(); n + 1];
                m[0] = b.neg(r);
                m[*n] = b.one();
                m
            }
            StepKind::Function => panic!("function level has no modulus"),
        }
    }

    /// Reduces a polynomial in the top generator modulo its relation.
    pub fn reduce(self, mut v: Vec<Value>) -> Value {
        let (b, s) = self.split().unwrap();
        match &s.kind {
            StepKind::Radical(n, r) => {
                let n = *n;
                let mut i = v.len();
                while i > n {
                    i -= 1;
                    if b.is_zero(&v[i]) {
                        continue;
                    }
                    let c = std::mem::replace(&mut v[i], b.zero());
                    let t = b.mul(&c, r);
                    v[i - n] = b.add(&v[i - n], &t);
                }
            }
            StepKind::Algebraic(m) => {
                let n = m.len() - 1;
                let mut i = v.len();
                while i > n {
                    i -= 1;
                    if b.is_zero(&v[i]) {
                        continue;
                    }
                    let c = std::mem::replace(&mut v[i], b.zero());
                    for j in 0..n {
                        if !b.is_zero(&m[j]) {
                            let t = b.mul(&c, &m[j]);
                            v[i - n + j] = b.sub(&v[i - n + j], &t);
                        }
                    }
                }
            }
            StepKind::Function => panic!("reduce on function level"),
        }
        ptrim(b, &mut v);
        Value::P(v)
    }

    /// Numeric value under an embedding of the generators (one value per step).
    pub fn eval(self, v: &Value, gens: &[Complex64]) -> Complex64 {
        match v {
            Value::Q(q) => Complex64::new(q_to_f64(q), 0.0),
            Value::P(c) => {
                let b = self.split().unwrap().0;
                peval(b, c, gens, gens[self.depth() - 1])
            }
            Value::F(n, d) => {
                let b = self.split().unwrap().0;
                let x = gens[self.depth() - 1];
                peval(b, n, gens, x) / peval(b, d, gens, x)
            }
        }
    }

    /// Value under fixed-point generator values; None on a vanishing
    /// denominator.
    pub fn eval_fixed(self, v: &Value, gens: &[CFixed]) -> Option<CFixed> {
        match v {
            Value::Q(q) => Some(CFixed::rational(q)),
            Value::P(c) => {
                let b = self.split().unwrap().0;
                peval_fixed(b, c, gens, &gens[self.depth() - 1])
            }
            Value::F(n, d) => {
                let b = self.split().unwrap().0;
                let x = &gens[self.depth() - 1];
                peval_fixed(b, n, gens, x)?.div(&peval_fixed(b, d, gens, x)?)
            }
        }
    }

    /// Signed terms of the canonical text form.
    pub fn terms(self, v: &Value) -> Vec<(bool, String)> {
        match v {
            Value::Q(q) => {
                if q.is_zero() {
                    vec![]
                } else {
                    vec![(q.is_negative(), fmt_rat_abs(q))]
                }
            }
            Value::P(c) => {
                let (b, s) = self.split().unwrap();
                poly_terms(b, c, &s.name)
            }
            Value::F(n, d) => {
                let (b, s) = self.split().unwrap();
                if d.len() == 1 {
                    poly_terms(b, n, &s.name)
                } else {
                    vec![(
                        false,
                        format!("({})/({})", fmt_poly(b, n, &s.name), fmt_poly(b, d, &s.name)),
                    )]
                }
            }
        }
    }

    pub fn fmt(self, v: &Value) -> String {
        join_terms(&self.terms(v))
    }

    /// First nonzero rational in canonical order (highest powers first).
    pub fn leading_rational(self, v: &Value) -> Option<BigRational> {
        match v {
            Value::Q(q) => (!q.is_zero()).then(|| q.clone()),
            Value::P(c) | Value::F(c, _) => {
                let b = self.split().unwrap().0;
                c.iter().rev().find_map(|x| b.leading_rational(x))
            }
        }
    }
}

pub(crate) fn q_to_f64(q: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // huge numerators and denominators: scale by bit length first
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = nb - db;
    let scaled = if shift > 0 {
        BigRational::new(q.numer().clone(), q.denom() << (shift as usize))
    } else {
        BigRational::new(q.numer() << ((-shift) as usize), q.denom().clone())
    };
    let n = scaled.numer().to_f64().unwrap_or(f64::NAN);
    let d = scaled.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        n / d * 2f64.powi(shift as i32)
    } else {
        let n = (scaled.numer() >> 960usize).to_f64().unwrap_or(f64::NAN);
        let d = (scaled.denom() >> 960usize).to_f64().unwrap_or(f64::NAN);
        n / d * 2f64.powi(shift as i32)
    }
}

fn fmt_rat_abs(q: &BigRational) -> String {
    let n = q.numer().abs();
    if q.denom().is_one() {
        n.to_string()
    } else {
        format!("{}/{}", n, q.denom())
    }
}

fn pow_str(name: &str, j: usize) -> String {
    match j {
        0 => String::new(),
        1 => name.to_string(),
        _ => format!("{name}^{j}"),
    }
}

fn poly_terms(b: Lv, c: &[Value], name: &str) -> Vec<(bool, String)> {
    let mut out = Vec::new();
    for j in (0..c.len()).rev() {
        if b.is_zero(&c[j]) {
            continue;
        }
        let g = pow_str(name, j);
        for (neg, body) in b.terms(&c[j]) {
            let body = if j == 0 {
                body
            } else if body == "1" {
                g.clone()
            } else {
                format!("{body}*{g}")
            };
            out.push((neg, body));
        }
    }
    out
}

pub(crate) fn join_terms(t: &[(bool, String)]) -> String {
    if t.is_empty() {
        return "0".to_string();
    }
    let mut s = String::new();
    for (i, (neg, body)) in t.iter().enumerate() {
        match (i, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        s.push_str(body);
    }
    s
}

pub(crate) fn fmt_poly(b: Lv, c: &[Value], name: &str) -> String {
    join_terms(&poly_terms(b, c, name))
}

fn peval(b: Lv, c: &[Value], gens: &[Complex64], x: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for v in c.iter().rev() {
        acc = acc * x + b.eval(v, gens);
    }
    acc
}

fn peval_fixed(b: Lv, c: &[Value], gens: &[CFixed], x: &CFixed) -> Option<CFixed> {
    let mut acc = CFixed::zero();
    for v in c.iter().rev() {
        acc = &(&acc * x) + &b.eval_fixed(v, gens)?;
    }
    Some(acc)
}

// ---- dense univariate polynomials over a level ----

pub(crate) fn ptrim(b: Lv, v: &mut Vec<Value>) {
    while v.last().is_some_and(|x| b.is_zero(x)) {
        v.pop();
    }
}

pub(crate) fn pneg(b: Lv, a: &[Value]) -> Vec<Value> {
    a.iter().map(|x| b.neg(x)).collect()
}

pub(crate) fn padd(b: Lv, x: &[Value], y: &[Value]) -> Vec<Value> {
    let (long, short) = if x.len() >= y.len() { (x, y) } else { (y, x) };
    let mut out: Vec<Value> = long.to_vec();
    for (i, v) in short.iter().enumerate() {
        if !b.is_zero(v) {
            out[i] = b.add(&out[i], v);
        }
    }
    ptrim(b, &mut out);
    out
}

pub(crate) fn psub(b: Lv, x: &[Value], y: &[Value]) -> Vec<Value> {
    padd(b, x, &pneg(b, y))
}

pub(crate) fn pmul(b: Lv, x: &[Value], y: &[Value]) -> Vec<Value> {
    if x.is_empty() || y.is_empty() {
        return vec![];
    }
    let mut out = vec![b.zero(); x.len() + y.len() - 1];
    for (i, u) in x.iter().enumerate() {
        if b.is_zero(u) {
            continue;
        }
        for (j, v) in y.iter().enumerate() {
            if b.is_zero(v) {
                continue;
            }
            let t = b.mul(u, v);
            out[i + j] = b.add(&out[i + j], &t);
        }
    }
    ptrim(b, &mut out);
    out
}

pub(crate) fn pscale(b: Lv, x: &[Value], c: &Value) -> Vec<Value> {
    if b.is_zero(c) {
        return vec![];
    }
    if b.is_one(c) {
        return x.to_vec();
    }
    let mut out: Vec<Value> = x.iter().map(|v| b.mul(v, c)).collect();
    ptrim(b, &mut out);
    out
}

/// Division with remainder; `m` must be nonzero.
pub(crate) fn pdivrem(b: Lv, a: &[Value], m: &[Value]) -> Res<(Vec<Value>, Vec<Value>)> {
    if m.is_empty() {
        return Err(AlgebraError::DivisionByZero);
    }
    let mut r = a.to_vec();
    ptrim(b, &mut r);
    if r.len() < m.len() {
        return Ok((vec![], r));
    }
    let dm = m.len() - 1;
    let lc_inv = b.inv(&m[dm])?;
    let mut q = vec![b.zero(); r.len() - dm];
    while r.len() > dm && !r.is_empty() {
        let k = r.len() - 1 - dm;
        let c = b.mul(&r[r.len() - 1], &lc_inv);
        for j in 0..dm {
            if !b.is_zero(&m[j]) {
                let t = b.mul(&c, &m[j]);
                r[k + j] = b.sub(&r[k + j], &t);
            }
        }
        r.pop();
        ptrim(b, &mut r);
        q[k] = c;
    }
    ptrim(b, &mut q);
    Ok((q, r))
}

pub(crate) fn pdiv_exact(b: Lv, a: &[Value], g: &[Value]) -> Vec<Value> {
    if g.len() == 1 && b.is_one(&g[0]) {
        return a.to_vec();
    }
    let (q, r) = pdivrem(b, a, g).expect("exact division by nonzero polynomial");
    debug_assert!(r.is_empty(), "inexact polynomial division");
    q
}

pub(crate) fn pmonic(b: Lv, a: &[Value]) -> Res<Vec<Value>> {
    match a.last() {
        None => Ok(vec![]),
        Some(lc) if b.is_one(lc) => Ok(a.to_vec()),
        Some(lc) => {
            let inv = b.inv(lc)?;
            Ok(pscale(b, a, &inv))
        }
    }
}

fn low_order(b: Lv, a: &[Value]) -> usize {
    a.iter().position(|v| !b.is_zero(v)).unwrap_or(0)
}

fn is_monomial(b: Lv, a: &[Value]) -> bool {
    !a.is_empty() && a[..a.len() - 1].iter().all(|v| b.is_zero(v))
}

fn xpow(b: Lv, k: usize) -> Vec<Value> {
    let mut v = vec![b.zero(); k + 1];
    v[k] = b.one();
    v
}

/// Monic gcd. Panics only if the level below contains zero divisors that
/// the Euclidean algorithm runs into; use `pgcd_checked` to observe those.
pub(crate) fn pgcd(b: Lv, x: &[Value], y: &[Value]) -> Vec<Value> {
    pgcd_checked(b, x, y).expect("gcd over a level with zero divisors")
}

pub(crate) fn pgcd_checked(b: Lv, x: &[Value], y: &[Value]) -> Res<Vec<Value>> {
    if x.is_empty() {
        return pmonic(b, y);
    }
    if y.is_empty() {
        return pmonic(b, x);
    }
    if x.len() == 1 || y.len() == 1 {
        return Ok(vec![b.one()]);
    }
    if is_monomial(b, x) {
        return Ok(xpow(b, (x.len() - 1).min(low_order(b, y))));
    }
    if is_monomial(b, y) {
        return Ok(xpow(b, (y.len() - 1).min(low_order(b, x))));
    }
    let (mut u, mut v) = if x.len() >= y.len() {
        (x.to_vec(), y.to_vec())
    } else {
        (y.to_vec(), x.to_vec())
    };
    while !v.is_empty() {
        let (_, r) = pdivrem(b, &u, &v)?;
        let r = pmonic(b, &r)?;
        u = v;
        v = r;
    }
    pmonic(b, &u)
}

/// Returns (g, s) with s·a ≡ g (mod m), g = gcd(a, m) monic.
pub(crate) fn pxgcd_left(b: Lv, a: &[Value], m: &[Value]) -> Res<(Vec<Value>, Vec<Value>)> {
    let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
    let (mut s0, mut s1): (Vec<Value>, Vec<Value>) = (vec![], vec![b.one()]);
    ptrim(b, &mut r1);
    while !r1.is_empty() {
        let (q, r) = pdivrem(b, &r0, &r1)?;
        let s = psub(b, &s0, &pmul(b, &q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    let lc_inv = b.inv(r0.last().unwrap())?;
    Ok((pscale(b, &r0, &lc_inv), pscale(b, &s0, &lc_inv)))
}

/// Canonical fraction: coprime, monic denominator.
pub(crate) fn norm_frac(b: Lv, num: Vec<Value>, den: Vec<Value>) -> Value {
    let mut num = num;
    let mut den = den;
    ptrim(b, &mut num);
    ptrim(b, &mut den);
    assert!(!den.is_empty(), "zero denominator");
    if num.is_empty() {
        return Value::F(vec![], vec![b.one()]);
    }
    if den.len() > 1 {
        let g = pgcd(b, &num, &den);
        if g.len() > 1 {
            num = pdiv_exact(b, &num, &g);
            den = pdiv_exact(b, &den, &g);
        }
    }
    let lc = den.last().unwrap().clone();
    if !b.is_one(&lc) {
        let inv = b.inv(&lc).expect("invertible leading coefficient");
        num = pscale(b, &num, &inv);
        den = pscale(b, &den, &inv);
    }
    Value::F(num, den)
}
