use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::level::{self, Lv, Step, StepKind, Value};
use super::{AlgebraError, MultiPoly};

/// An ordered list of extension steps over ℚ.
///
/// Cheap to clone; towers are compared structurally, so two towers built by
/// the same sequence of steps are interchangeable.
#[derive(Clone)]
pub struct Tower(Arc<Vec<Step>>);

impl PartialEq for Tower {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}
impl Eq for Tower {}

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

/// A generator's defining data, with coefficients in the tower below it.
#[derive(Clone, Debug)]
pub enum StepData {
    Function,
    /// Monic minimal polynomial, coefficients low to high.
    Algebraic(Vec<FieldElement>),
    Radical(usize, FieldElement),
}

/// What a generator of a tower is.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepInfo {
    Algebraic { name: String, minpoly: String },
    Function { name: String },
    Radical { name: String, exponent: usize, radicand: String },
}

impl Tower {
    pub fn rationals() -> Tower {
        Tower(Arc::new(Vec::new()))
    }

    pub(crate) fn steps(&self) -> &[Step] {
        &self.0
    }

    pub(crate) fn lv(&self) -> Lv<'_> {
        Lv(&self.0)
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn generators(&self) -> Vec<&str> {
        self.0.iter().map(|s| s.name.as_str()).collect()
    }

    pub fn has_generator(&self, name: &str) -> bool {
        self.0.iter().any(|s| s.name == name)
    }

    fn check_name(&self, name: &str) -> Result<(), AlgebraError> {
        let ok = !name.is_empty()
            && name.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !ok {
            return Err(AlgebraError::InvalidTower(format!("bad generator name {name:?}")));
        }
        if self.has_generator(name) {
            return Err(AlgebraError::InvalidTower(format!("duplicate generator {name}")));
        }
        Ok(())
    }

    fn push(&self, step: Step) -> Tower {
        let mut v = (*self.0).clone();
        v.push(step);
        Tower(Arc::new(v))
    }

    /// Adjoins a transcendental generator (a rational-function step).
    pub fn with_function(&self, name: &str) -> Result<Tower, AlgebraError> {
        self.check_name(name)?;
        Ok(self.push(Step { name: name.to_string(), kind: StepKind::Function }))
    }

    /// Adjoins a root of `minpoly`, a univariate polynomial in `name` over
    /// this tower. The polynomial is made monic; irreducibility is the
    /// caller's promise (violations surface as zero-divisor errors).
    pub fn with_algebraic(&self, name: &str, minpoly: &MultiPoly) -> Result<Tower, AlgebraError> {
        self.check_name(name)?;
        if minpoly.tower() != self {
            return Err(AlgebraError::TowerMismatch);
        }
        let coeffs = minpoly.univariate_coefficients(name)?;
        if coeffs.len() < 2 {
            return Err(AlgebraError::InvalidTower(format!(
                "minimal polynomial of {name} is constant"
            )));
        }
        let lv = self.lv();
        let mut vals: Vec<Value> = coeffs.into_iter().map(|c| c.value).collect();
        let lc = lv.inv(vals.last().unwrap())?;
        vals = vals.iter().map(|v| lv.mul(v, &lc)).collect();
        Ok(self.push(Step { name: name.to_string(), kind: StepKind::Algebraic(vals) }))
    }

    /// Convenience: adjoins a root of the polynomial given in text form.
    pub fn adjoin_root(&self, name: &str, minpoly: &str) -> Result<Tower, AlgebraError> {
        let p = MultiPoly::parse(self, &[name], minpoly)?;
        self.with_algebraic(name, &p)
    }

    /// Adjoins `name` with `name^n = radicand`.
    pub fn with_radical(
        &self,
        name: &str,
        n: usize,
        radicand: &FieldElement,
    ) -> Result<Tower, AlgebraError> {
        self.check_name(name)?;
        if n == 0 {
            return Err(AlgebraError::InvalidTower("radical exponent must be positive".into()));
        }
        if radicand.tower != *self {
            return Err(AlgebraError::TowerMismatch);
        }
        if radicand.is_zero() {
            return Err(AlgebraError::InvalidTower("zero radicand".into()));
        }
        Ok(self.push(Step {
            name: name.to_string(),
            kind: StepKind::Radical(n, radicand.value.clone()),
        }))
    }

    /// Adjoins a primitive k-th root of unity via the k-th cyclotomic polynomial.
    pub fn with_root_of_unity(&self, name: &str, k: usize) -> Result<Tower, AlgebraError> {
        let phi = cyclotomic(k);
        let p = MultiPoly::from_univariate_rationals(self, name, &phi);
        self.with_algebraic(name, &p)
    }

    pub fn step_data(&self, k: usize) -> StepData {
        let below = self.prefix(k);
        match &self.0[k].kind {
            StepKind::Function => StepData::Function,
            StepKind::Algebraic(m) => StepData::Algebraic(m.iter().map(|v| below.wrap(v.clone())).collect()),
            StepKind::Radical(n, r) => StepData::Radical(*n, below.wrap(r.clone())),
        }
    }

    pub fn steps_info(&self) -> Vec<StepInfo> {
        let mut out = Vec::new();
        for k in 0..self.depth() {
            let lv = Lv(&self.0[..k]);
            let s = &self.0[k];
            out.push(match &s.kind {
                StepKind::Function => StepInfo::Function { name: s.name.clone() },
                StepKind::Algebraic(m) => StepInfo::Algebraic {
                    name: s.name.clone(),
                    minpoly: level::fmt_poly(lv, m, &s.name),
                },
                StepKind::Radical(n, r) => StepInfo::Radical {
                    name: s.name.clone(),
                    exponent: *n,
                    radicand: lv.fmt(r),
                },
            });
        }
        out
    }

    /// One-line description, e.g. `Q(i)(t)[mu: mu^12 = ...]`.
    pub fn describe(&self) -> String {
        let mut s = String::from("Q");
        for info in self.steps_info() {
            match info {
                StepInfo::Function { name } => s.push_str(&format!("({name})")),
                StepInfo::Algebraic { name, minpoly } => {
                    s.push_str(&format!("[{name}: {minpoly} = 0]"))
                }
                StepInfo::Radical { name, exponent, radicand } => {
                    s.push_str(&format!("[{name}: {name}^{exponent} = {radicand}]"))
                }
            }
        }
        s
    }

    pub fn zero(&self) -> FieldElement {
        self.wrap(self.lv().zero())
    }

    pub fn one(&self) -> FieldElement {
        self.wrap(self.lv().one())
    }

    pub fn int(&self, n: i64) -> FieldElement {
        self.wrap(self.lv().from_int(n))
    }

    pub fn rational(&self, q: &BigRational) -> FieldElement {
        self.wrap(self.lv().from_q(q.clone()))
    }

    pub fn frac(&self, n: i64, d: i64) -> FieldElement {
        self.rational(&BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub(crate) fn wrap(&self, value: Value) -> FieldElement {
        FieldElement { tower: self.clone(), value }
    }

    /// The generator with the given name.
    pub fn gen(&self, name: &str) -> Result<FieldElement, AlgebraError> {
        let k = self
            .0
            .iter()
            .position(|s| s.name == name)
            .ok_or_else(|| AlgebraError::UnknownSymbol(name.to_string()))?;
        let v = Lv(&self.0[..=k]).gen();
        Ok(self.wrap(self.lv().lift_from(k + 1, v)))
    }

    /// Parses canonical (or any well-formed) text into an element.
    pub fn parse(&self, text: &str) -> Result<FieldElement, AlgebraError> {
        super::parse::parse_field(self, text)
    }

    pub fn is_prefix_of(&self, other: &Tower) -> bool {
        self.depth() <= other.depth() && self.0[..] == other.0[..self.depth()]
    }

    /// Moves an element of a prefix tower into this tower.
    pub fn lift(&self, e: &FieldElement) -> Result<FieldElement, AlgebraError> {
        if !e.tower.is_prefix_of(self) {
            return Err(AlgebraError::TowerMismatch);
        }
        Ok(self.wrap(self.lv().lift_from(e.tower.depth(), e.value.clone())))
    }

    /// Moves an element into this tower by generator name: a plain lift when
    /// the source is a prefix, otherwise a re-parse of the canonical text.
    /// Generators of the same name must satisfy the same relations.
    pub fn transfer(&self, e: &FieldElement) -> Result<FieldElement, AlgebraError> {
        if e.tower.is_prefix_of(self) {
            return self.lift(e);
        }
        self.parse(&e.to_string())
    }

    /// The prefix tower with the first `k` steps.
    pub fn prefix(&self, k: usize) -> Tower {
        Tower(Arc::new(self.0[..k].to_vec()))
    }
}

/// Coefficients (low to high) of the k-th cyclotomic polynomial.
pub fn cyclotomic(k: usize) -> Vec<BigInt> {
    assert!(k >= 1);
    // x^k - 1 divided by Φ_d for proper divisors d
    let mut p: Vec<BigInt> = vec![BigInt::zero(); k + 1];
    p[0] = -BigInt::one();
    p[k] = BigInt::one();
    for d in 1..k {
        if k % d == 0 {
            let q = cyclotomic(d);
            p = int_div_exact(&p, &q);
        }
    }
    p
}

fn int_div_exact(a: &[BigInt], m: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    let mut q = vec![BigInt::zero(); a.len() - dm];
    for k in (0..q.len()).rev() {
        let c = &r[k + dm] / &m[dm];
        for j in 0..=dm {
            let t = &c * &m[j];
            r[k + j] -= t;
        }
        q[k] = c;
    }
    q
}

/// A value-semantic element of a tower.
#[derive(Clone)]
pub struct FieldElement {
    pub(crate) tower: Tower,
    pub(crate) value: Value,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && self.tower == other.tower
    }
}
impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.value.hash(state);
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tower.lv().fmt(&self.value))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Numeric values for every generator of a tower, in step order.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub values: Vec<Complex64>,
}

impl FieldElement {
    pub fn tower(&self) -> &Tower {
        &self.tower
    }

    fn lv(&self) -> Lv<'_> {
        self.tower.lv()
    }

    fn same(&self, other: &FieldElement) {
        assert!(self.tower == other.tower, "tower mismatch: {:?} vs {:?}", self.tower, other.tower);
    }

    pub fn is_zero(&self) -> bool {
        self.lv().is_zero(&self.value)
    }

    pub fn is_one(&self) -> bool {
        self.lv().is_one(&self.value)
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.lv().as_q(&self.value)
    }

    /// Multiplicative inverse via extended Euclid against the generator
    /// relations; reports the factor when the relation turns out reducible.
    pub fn inv(&self) -> Result<FieldElement, AlgebraError> {
        Ok(self.tower.wrap(self.lv().inv(&self.value)?))
    }

    pub fn checked_div(&self, other: &FieldElement) -> Result<FieldElement, AlgebraError> {
        self.same(other);
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        self.tower.wrap(self.lv().pow(&self.value, e))
    }

    /// Integer power; negative exponents invert.
    pub fn powi(&self, e: i64) -> Result<FieldElement, AlgebraError> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    pub fn scale(&self, q: &BigRational) -> FieldElement {
        self.tower.wrap(self.lv().mul_q(&self.value, q))
    }

    pub fn eval(&self, emb: &Embedding) -> Complex64 {
        assert!(emb.values.len() >= self.tower.depth(), "embedding too short");
        self.lv().eval(&self.value, &emb.values)
    }

    /// Value at fixed-point generator values (one per step).
    pub fn eval_fixed(&self, gens: &[super::CFixed]) -> Option<super::CFixed> {
        assert!(gens.len() >= self.tower.depth(), "embedding too short");
        self.lv().eval_fixed(&self.value, gens)
    }

    pub fn leading_rational(&self) -> Option<BigRational> {
        self.lv().leading_rational(&self.value)
    }

    /// Exact sign for elements of ℚ or ℚ(√d), d > 0 rational, with √d > 0.
    pub fn sign(&self) -> Result<Ordering, AlgebraError> {
        if let Some(q) = self.to_rational() {
            return Ok(q.cmp(&BigRational::zero()));
        }
        let steps = self.tower.steps();
        if steps.len() == 1 {
            if let StepKind::Algebraic(m) = &steps[0].kind {
                if m.len() == 3 {
                    let lv = Lv(&[]);
                    let c1 = lv.as_q(&m[1]).unwrap();
                    let c0 = lv.as_q(&m[0]).unwrap();
                    if c1.is_zero() && c0.is_negative() {
                        let d = -c0;
                        let Value::P(c) = &self.value else { unreachable!() };
                        let a = lv.as_q(&c[0]).unwrap();
                        let b = lv.as_q(&c[1]).unwrap();
                        let sa = a.cmp(&BigRational::zero());
                        let sb = b.cmp(&BigRational::zero());
                        if sa == sb || sa == Ordering::Equal {
                            return Ok(sb);
                        }
                        if sb == Ordering::Equal {
                            return Ok(sa);
                        }
                        // a + b√d with opposite signs: compare a² with b²d
                        let c = (&a * &a).cmp(&(&b * &b * &d));
                        return Ok(if c == Ordering::Greater { sa } else { sb });
                    }
                }
            }
        }
        Err(AlgebraError::Unordered(self.tower.describe()))
    }

    /// Square root in the same tower when one can be decided.
    ///
    /// `Ok(None)` means provably not a square; cases the engine cannot decide
    /// return `Err(Unsupported)`.
    pub fn sqrt(&self) -> Result<Option<FieldElement>, AlgebraError> {
        let lv = self.lv();
        Ok(value_sqrt(lv, &self.value)?.map(|v| self.tower.wrap(v)))
    }
}

fn rat_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &n * &n == *q.numer() && &d * &d == *q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

fn value_sqrt(lv: Lv, v: &Value) -> Result<Option<Value>, AlgebraError> {
    if lv.is_zero(v) {
        return Ok(Some(lv.zero()));
    }
    match v {
        Value::Q(q) => Ok(rat_sqrt(q).map(Value::Q)),
        Value::F(n, d) => {
            let b = lv.split().unwrap().0;
            let (Some(sn), Some(sd)) = (poly_sqrt(b, n)?, poly_sqrt(b, d)?) else {
                return Ok(None);
            };
            // the denominator is monic, so its root may come out with sign -1
            Ok(Some(level::norm_frac(b, sn, sd)))
        }
        Value::P(c) => {
            let (b, s) = lv.split().unwrap();
            let k = c.len() - 1;
            let monomial = c[..k].iter().all(|x| b.is_zero(x));
            if monomial {
                let u = &c[k];
                if k % 2 == 0 {
                    if let Some(r) = value_sqrt(b, u)? {
                        let mut out = vec![b.zero(); k / 2 + 1];
                        out[k / 2] = r;
                        return Ok(Some(lv.reduce(out)));
                    }
                    if k > 0 {
                        return Err(AlgebraError::Unsupported("square root of monomial".into()));
                    }
                }
                if let StepKind::Radical(2, r) = &s.kind {
                    if k == 0 {
                        // (x + y g)^2 = x^2 + y^2 r + 2xy g, so a square of a
                        // constant is x^2 or y^2 r
                        let Some(y) = value_sqrt(b, &b.mul(u, &b.inv(r)?))? else {
                            return Ok(None);
                        };
                        return Ok(Some(Value::P(vec![b.zero(), y])));
                    }
                }
                if let StepKind::Algebraic(m) = &s.kind {
                    if m.len() == 3 && k == 0 && b.is_zero(&m[1]) {
                        let r = b.neg(&m[0]);
                        let Some(y) = value_sqrt(b, &b.mul(u, &b.inv(&r)?))? else {
                            return Ok(None);
                        };
                        return Ok(Some(Value::P(vec![b.zero(), y])));
                    }
                }
            }
            Err(AlgebraError::Unsupported(format!(
                "square root over generator {}",
                s.name
            )))
        }
    }
}

/// Square root of a univariate polynomial over a level, coefficient by
/// coefficient from the top.
fn poly_sqrt(b: Lv, p: &[Value]) -> Result<Option<Vec<Value>>, AlgebraError> {
    if p.is_empty() {
        return Ok(Some(vec![]));
    }
    let deg = p.len() - 1;
    if deg % 2 == 1 {
        return Ok(None);
    }
    let h = deg / 2;
    let Some(top) = value_sqrt(b, &p[deg])? else {
        return Ok(None);
    };
    let two_top_inv = b.inv(&b.mul_q(&top, &BigRational::from_integer(2.into())))?;
    let mut q = vec![b.zero(); h + 1];
    q[h] = top;
    for j in (0..h).rev() {
        // coefficient of x^(h+j) in q^2 determines q_j
        let mut acc = p[h + j].clone();
        for a in (j + 1)..h {
            acc = b.sub(&acc, &b.mul(&q[a], &q[h + j - a]));
        }
        q[j] = b.mul(&acc, &two_top_inv);
    }
    let sq = level::pmul(b, &q, &q);
    let mut pv = p.to_vec();
    level::ptrim(b, &mut pv);
    Ok((sq == pv).then_some(q))
}

macro_rules! binop {
    ($tr:ident, $m:ident, $lvop:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                self.same(rhs);
                self.tower.wrap(self.lv().$lvop(&self.value, &rhs.value))
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                (&self).$m(rhs)
            }
        }
        impl $tr<FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.tower.wrap(self.lv().neg(&self.value))
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}
