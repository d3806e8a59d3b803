//! Irreducibility over ℚ from factorization patterns modulo small primes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{AlgebraError, MultiPoly};

type P = Vec<u64>;

fn trim(mut a: P) -> P {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv(a: u64, p: u64) -> u64 {
    pow(a, p - 2, p)
}

fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

fn rem(a: &P, m: &P, p: u64) -> P {
    let mut a = a.clone();
    let dm = m.len() - 1;
    let li = inv(m[dm], p);
    while a.len() > dm {
        let c = a.pop().unwrap() * li % p;
        if c == 0 {
            continue;
        }
        let off = a.len() - dm;
        for (j, &mj) in m[..dm].iter().enumerate() {
            a[off + j] = (a[off + j] + p - c * mj % p) % p;
        }
    }
    trim(a)
}

fn div(a: &P, m: &P, p: u64) -> P {
    let mut a = a.clone();
    let dm = m.len() - 1;
    let li = inv(m[dm], p);
    let mut q = vec![0; a.len().saturating_sub(dm)];
    while a.len() > dm {
        let c = a.pop().unwrap() * li % p;
        let off = a.len() - dm;
        q[off] = c;
        for (j, &mj) in m[..dm].iter().enumerate() {
            a[off + j] = (a[off + j] + p - c * mj % p) % p;
        }
    }
    trim(q)
}

fn mulmod(a: &P, b: &P, m: &P, p: u64) -> P {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut r = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x * y) % p;
        }
    }
    rem(&trim(r), m, p)
}

fn gcd(mut a: P, mut b: P, p: u64) -> P {
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn powmod(base: &P, mut e: u64, m: &P, p: u64) -> P {
    let mut r = vec![1];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(&r, &b, m, p);
        }
        b = mulmod(&b, &b, m, p);
        e >>= 1;
    }
    r
}

/// Degrees of the irreducible factors of a squarefree f mod p.
fn factor_degrees(f: &P, p: u64) -> Vec<usize> {
    let mut f = f.clone();
    let mut out = Vec::new();
    let mut h = vec![0, 1];
    let mut i = 1;
    while f.len() > 1 {
        if 2 * i > f.len() - 1 {
            out.push(f.len() - 1);
            break;
        }
        h = powmod(&h, p, &f, p);
        let mut hx = h.clone();
        hx.resize(hx.len().max(2), 0);
        hx[1] = (hx[1] + p - 1) % p;
        let g = gcd(f.clone(), trim(hx), p);
        let dg = g.len() - 1;
        if dg > 0 {
            out.extend(std::iter::repeat_n(i, dg / i));
            f = div(&f, &g, p);
            h = rem(&h, &f, p);
        }
        i += 1;
    }
    out
}

fn subset_sums(d: &[usize], n: usize) -> Vec<bool> {
    let mut s = vec![false; n + 1];
    s[0] = true;
    for &k in d {
        for j in (k..=n).rev() {
            s[j] |= s[j - k];
        }
    }
    s
}

/// Some(true) if the univariate rational polynomial is irreducible over ℚ,
/// as certified by combining factor-degree patterns modulo primes; None if
/// the primes tried do not decide.
pub fn irreducible_over_q(f: &MultiPoly, var: &str) -> Result<Option<bool>, AlgebraError> {
    let c = f.univariate_coefficients(var)?;
    let qs: Vec<_> = c
        .iter()
        .map(|x| x.to_rational().ok_or_else(|| AlgebraError::Unsupported("coefficients must be rational".into())))
        .collect::<Result<_, _>>()?;
    let n = qs.len().saturating_sub(1);
    if n == 0 {
        return Ok(Some(false));
    }
    if n == 1 {
        return Ok(Some(true));
    }
    let l = qs.iter().fold(BigInt::from(1), |acc, q| acc.lcm(q.denom()));
    let lq = num_rational::BigRational::from_integer(l);
    let ints: Vec<BigInt> = qs.iter().map(|q| (q * &lq).to_integer()).collect();
    if ints[0].is_zero() {
        return Ok(Some(false));
    }
    let mut possible = vec![true; n + 1];
    let mut tried = 0;
    for p in (3u64..2000).filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)) {
        let bp = BigInt::from(p);
        let red: P = trim(ints.iter().map(|a| a.mod_floor(&bp).to_u64().unwrap()).collect());
        if red.len() != n + 1 {
            continue;
        }
        // squarefree mod p
        let der: P = trim(red.iter().enumerate().skip(1).map(|(i, &a)| a * (i as u64 % p) % p).collect());
        if der.is_empty() || gcd(red.clone(), der, p).len() > 1 {
            continue;
        }
        let s = subset_sums(&factor_degrees(&red, p), n);
        for (k, ok) in possible.iter_mut().enumerate() {
            *ok &= s[k];
        }
        tried += 1;
        if (1..n).all(|k| !possible[k]) {
            return Ok(Some(true));
        }
        if tried >= 40 {
            break;
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Tower;

    fn p(s: &str) -> MultiPoly {
        MultiPoly::parse(&Tower::rationals(), &["x"], s).unwrap()
    }

    #[test]
    fn patterns() {
        assert_eq!(irreducible_over_q(&p("x^4 + 1"), "x").unwrap(), None);
        assert_eq!(irreducible_over_q(&p("x^3 - 2"), "x").unwrap(), Some(true));
        assert_eq!(irreducible_over_q(&p("x^4 - 10*x^2 + 1"), "x").unwrap(), None);
        assert_eq!(irreducible_over_q(&p("x^5 - x - 1"), "x").unwrap(), Some(true));
        assert_eq!(irreducible_over_q(&p("(x^2 + 1)*(x^2 + 3)"), "x").unwrap(), None);
    }
}
