//! Univariate toolkit: division, gcd, resultants, discriminants, Sturm chains.

use std::cmp::Ordering;

use num_rational::BigRational;

use super::level::{self, Value};
use super::{AlgebraError, FieldElement, MultiPoly};

type Res<T> = Result<T, AlgebraError>;

fn dense(p: &MultiPoly, var: &str) -> Res<Vec<Value>> {
    Ok(p.univariate_coefficients(var)?.into_iter().map(|c| c.value).collect())
}

fn from_dense(like: &MultiPoly, var: &str, c: &[Value]) -> Res<MultiPoly> {
    let k = like.var_index(var)?;
    let mut out = like.zero_like();
    for (e, v) in c.iter().enumerate() {
        let mut exps = vec![0; like.vars().len()];
        exps[k] = e as u32;
        out = &out + &like.monomial_like(&exps, &like.tower().wrap(v.clone()));
    }
    Ok(out)
}

fn same_field(p: &MultiPoly, q: &MultiPoly) -> Res<()> {
    if p.tower() != q.tower() || p.vars() != q.vars() {
        return Err(AlgebraError::TowerMismatch);
    }
    Ok(())
}

/// Quotient and remainder of univariate polynomials in `var`.
pub fn poly_divmod(num: &MultiPoly, den: &MultiPoly, var: &str) -> Res<(MultiPoly, MultiPoly)> {
    same_field(num, den)?;
    let a = dense(num, var)?;
    let m = dense(den, var)?;
    if m.is_empty() {
        return Err(AlgebraError::DivisionByZero);
    }
    let lv = num.tower().lv();
    let (q, r) = level::pdivrem(lv, &a, &m)?;
    Ok((from_dense(num, var, &q)?, from_dense(num, var, &r)?))
}

/// Monic greatest common divisor.
pub fn poly_gcd(p: &MultiPoly, q: &MultiPoly, var: &str) -> Res<MultiPoly> {
    same_field(p, q)?;
    let lv = p.tower().lv();
    let g = level::pgcd_checked(lv, &dense(p, var)?, &dense(q, var)?)?;
    from_dense(p, var, &g)
}

/// Resultant by the Euclidean recurrence
/// res(A,B) = (−1)^{mn} lc(B)^{m−deg R} res(B, R), R = A mod B.
pub fn resultant(p: &MultiPoly, q: &MultiPoly, var: &str) -> Res<FieldElement> {
    same_field(p, q)?;
    let tower = p.tower();
    let lv = tower.lv();
    let mut a = dense(p, var)?;
    let mut b = dense(q, var)?;
    if a.is_empty() || b.is_empty() {
        return Ok(tower.zero());
    }
    if a.len() == 1 && b.len() == 1 {
        return Err(AlgebraError::NoVariable(var.to_string()));
    }
    let mut acc = lv.one();
    loop {
        let m = a.len() - 1;
        let n = b.len() - 1;
        if n == 0 {
            acc = lv.mul(&acc, &lv.pow(&b[0], m as u64));
            return Ok(tower.wrap(acc));
        }
        if m == 0 {
            acc = lv.mul(&acc, &lv.pow(&a[0], n as u64));
            return Ok(tower.wrap(acc));
        }
        let (_, r) = level::pdivrem(lv, &a, &b)?;
        if r.is_empty() {
            return Ok(tower.zero());
        }
        let dr = r.len() - 1;
        if (m * n) % 2 == 1 {
            acc = lv.neg(&acc);
        }
        acc = lv.mul(&acc, &lv.pow(b.last().unwrap(), (m - dr) as u64));
        a = b;
        b = r;
    }
}

/// The Sylvester matrix of p and q in `var` (rows of p-shifts, then q-shifts).
pub fn sylvester_matrix(p: &MultiPoly, q: &MultiPoly, var: &str) -> Res<Vec<Vec<FieldElement>>> {
    same_field(p, q)?;
    let a = p.univariate_coefficients(var)?;
    let b = q.univariate_coefficients(var)?;
    let (m, n) = (a.len().saturating_sub(1), b.len().saturating_sub(1));
    if m == 0 && n == 0 {
        return Err(AlgebraError::NoVariable(var.to_string()));
    }
    let size = m + n;
    let z = p.tower().zero();
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![z.clone(); size];
        for (j, c) in a.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![z.clone(); size];
        for (j, c) in b.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Determinant by fraction-field Gaussian elimination.
pub fn determinant(mut m: Vec<Vec<FieldElement>>) -> Res<FieldElement> {
    let n = m.len();
    let Some(first) = m.first().and_then(|r| r.first()).cloned() else {
        return Err(AlgebraError::Arity { expected: 1, got: 0 });
    };
    let tower = first.tower().clone();
    let mut det = tower.one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Ok(tower.zero());
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let pinv = m[col][col].inv()?;
        det = &det * &m[col][col];
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] * &pinv;
            for c in col..n {
                let t = &f * &m[col][c];
                m[r][c] = &m[r][c] - &t;
            }
        }
    }
    Ok(det)
}

/// Resultant as the Sylvester determinant (independent of the Euclidean route).
pub fn sylvester_resultant(p: &MultiPoly, q: &MultiPoly, var: &str) -> Res<FieldElement> {
    if p.is_zero() || q.is_zero() {
        return Ok(p.tower().zero());
    }
    determinant(sylvester_matrix(p, q, var)?)
}

/// disc(p) = (−1)^{n(n−1)/2} res(p, p′) / lc(p).
pub fn discriminant(p: &MultiPoly, var: &str) -> Res<FieldElement> {
    let n = p.degree_in(var)? as usize;
    if n == 0 {
        return Err(AlgebraError::NoVariable(var.to_string()));
    }
    let dp = p.derivative(var)?;
    let lc = p.univariate_coefficients(var)?.pop().unwrap();
    let r = if n == 1 { p.tower().one() } else { resultant(p, &dp, var)?.checked_div(&lc)? };
    Ok(if (n * (n - 1) / 2) % 2 == 1 { -r } else { r })
}

/// p / gcd(p, p′), made monic.
pub fn squarefree_part(p: &MultiPoly, var: &str) -> Res<MultiPoly> {
    let g = poly_gcd(p, &p.derivative(var)?, var)?;
    let (q, _) = poly_divmod(p, &g, var)?;
    q.monic()
}

/// Negated-remainder sequence p, p′, −rem(p, p′), …
#[derive(Clone, Debug)]
pub struct SturmChain {
    pub var: String,
    pub polys: Vec<MultiPoly>,
}

/// Real-line interval for root counting: everything, or (lo, hi].
#[derive(Clone, Debug)]
pub enum Interval {
    All,
    HalfOpen(BigRational, BigRational),
}

impl SturmChain {
    pub fn new(p: &MultiPoly, var: &str) -> Res<SturmChain> {
        let mut polys = vec![p.clone(), p.derivative(var)?];
        while !polys.last().unwrap().is_zero() {
            let k = polys.len();
            let (_, r) = poly_divmod(&polys[k - 2], &polys[k - 1], var)?;
            if r.is_zero() {
                break;
            }
            polys.push(-&r);
        }
        Ok(SturmChain { var: var.to_string(), polys })
    }

    fn variations(signs: impl Iterator<Item = Ordering>) -> usize {
        let mut last = Ordering::Equal;
        let mut count = 0;
        for s in signs {
            if s == Ordering::Equal {
                continue;
            }
            if last != Ordering::Equal && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    fn signs_at_infinity(&self, positive: bool) -> Res<Vec<Ordering>> {
        self.polys
            .iter()
            .map(|p| {
                let c = p.univariate_coefficients(&self.var)?;
                let deg = c.len() - 1;
                let s = c.last().unwrap().sign()?;
                Ok(if !positive && deg % 2 == 1 { s.reverse() } else { s })
            })
            .collect()
    }

    fn signs_at(&self, x: &BigRational) -> Res<Vec<Ordering>> {
        self.polys
            .iter()
            .map(|p| {
                let t = p.tower();
                p.eval(&[t.rational(x)])?.sign()
            })
            .collect()
    }

    pub fn count(&self, interval: &Interval) -> Res<usize> {
        let (lo, hi) = match interval {
            Interval::All => (self.signs_at_infinity(false)?, self.signs_at_infinity(true)?),
            Interval::HalfOpen(a, b) => (self.signs_at(a)?, self.signs_at(b)?),
        };
        let (vl, vh) = (Self::variations(lo.into_iter()), Self::variations(hi.into_iter()));
        Ok(vl.saturating_sub(vh))
    }
}

/// Exact number of distinct real roots of a squarefree polynomial.
pub fn count_real_roots(p: &MultiPoly, var: &str, interval: &Interval) -> Res<usize> {
    if p.degree_in(var)? == 0 {
        return Ok(0);
    }
    if p.vars().len() != 1 {
        p.univariate_coefficients(var)?;
    }
    // fail early on unordered fields
    for c in p.univariate_coefficients(var)? {
        if !c.is_zero() {
            c.sign()?;
        }
    }
    let chain = SturmChain::new(p, var)?;
    if chain.polys.last().unwrap().degree_in(var)? > 0 {
        return Err(AlgebraError::RepeatedRoots);
    }
    chain.count(interval)
}

/// Vieta data for a monic-normalized polynomial: (−a_{n−1}/a_n, (−1)^n a_0/a_n).
pub fn vieta_sum_product(p: &MultiPoly, var: &str) -> Res<(FieldElement, FieldElement)> {
    let c = p.univariate_coefficients(var)?;
    let n = c.len() - 1;
    if n == 0 {
        return Err(AlgebraError::NoVariable(var.to_string()));
    }
    let lc_inv = c[n].inv()?;
    let sum = -(&c[n - 1] * &lc_inv);
    let prod = &c[0] * &lc_inv;
    Ok((sum, if n % 2 == 1 { -prod } else { prod }))
}

/// Fraction-free (Bareiss) determinant of a matrix of polynomials.
pub fn bareiss_determinant(mut m: Vec<Vec<MultiPoly>>) -> Res<MultiPoly> {
    let n = m.len();
    let Some(one) = m.first().and_then(|r| r.first()).map(|p| p.one_like()) else {
        return Err(AlgebraError::Arity { expected: 1, got: 0 });
    };
    let mut sign = false;
    let mut prev = one.clone();
    for k in 0..n {
        let Some(piv) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return Ok(one.zero_like());
        };
        if piv != k {
            m.swap(piv, k);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t
                    .div_exact(&prev)?
                    .ok_or_else(|| AlgebraError::Inexact("Bareiss step not exact".into()))?;
            }
            m[i][k] = one.zero_like();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    Ok(if sign { -d } else { d })
}

/// Resultant in `var` of polynomials with polynomial coefficients (Sylvester
/// determinant, evaluated fraction-free).
pub fn resultant_poly(p: &MultiPoly, q: &MultiPoly, var: &str) -> Res<MultiPoly> {
    same_field(p, q)?;
    let a = p.as_univariate(var)?;
    let b = q.as_univariate(var)?;
    let (m, n) = (a.len().saturating_sub(1), b.len().saturating_sub(1));
    if m == 0 && n == 0 {
        return Err(AlgebraError::NoVariable(var.to_string()));
    }
    if p.is_zero() || q.is_zero() {
        return Ok(p.zero_like());
    }
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for (coeffs, count) in [(&a, n), (&b, m)] {
        for i in 0..count {
            let mut row = vec![p.zero_like(); size];
            for (j, c) in coeffs.iter().rev().enumerate() {
                row[i + j] = c.clone();
            }
            rows.push(row);
        }
    }
    bareiss_determinant(rows)
}
