//! Quotients of polynomials, just enough to replay elimination chains
//! (no multivariate gcd: only monomial content is cancelled).

use std::fmt;

use crate::exact::{AlgebraError, FieldElement, MultiPoly};

type Res<T> = Result<T, AlgebraError>;

#[derive(Clone)]
pub struct RatFn {
    pub num: MultiPoly,
    pub den: MultiPoly,
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

/// Exponentwise minimum over all terms (zero polynomial: empty).
pub fn monomial_content(p: &MultiPoly) -> Vec<u32> {
    let mut it = p.terms().map(|(m, _)| m.0.clone());
    let Some(mut g) = it.next() else {
        return vec![0; p.vars().len()];
    };
    for m in it {
        for (a, b) in g.iter_mut().zip(&m) {
            *a = (*a).min(*b);
        }
    }
    g
}

pub fn div_monomial(p: &MultiPoly, e: &[u32]) -> MultiPoly {
    let mut out = p.zero_like();
    for (m, c) in p.terms() {
        let d: Vec<u32> = m.0.iter().zip(e).map(|(a, b)| a - b).collect();
        out = &out + &p.monomial_like(&d, &c);
    }
    out
}

impl RatFn {
    pub fn poly(p: &MultiPoly) -> RatFn {
        RatFn { num: p.clone(), den: p.one_like() }
    }

    pub fn new(num: MultiPoly, den: MultiPoly) -> Res<RatFn> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(RatFn { num, den }.tidy())
    }

    /// Cancels common monomials and makes the denominator's leading
    /// coefficient 1.
    fn tidy(self) -> RatFn {
        if self.num.is_zero() {
            return RatFn { den: self.den.one_like(), num: self.num };
        }
        let a = monomial_content(&self.num);
        let b = monomial_content(&self.den);
        let g: Vec<u32> = a.iter().zip(&b).map(|(x, y)| *x.min(y)).collect();
        let (mut num, mut den) = if g.iter().any(|&x| x > 0) {
            (div_monomial(&self.num, &g), div_monomial(&self.den, &g))
        } else {
            (self.num, self.den)
        };
        if let Some((_, lc)) = den.leading_term() {
            if !lc.is_one() {
                let inv = lc.inv().expect("nonzero leading coefficient");
                num = num.scale(&inv);
                den = den.scale(&inv);
            }
        }
        RatFn { num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFn) -> RatFn {
        if self.den == o.den {
            return RatFn { num: &self.num + &o.num, den: self.den.clone() }.tidy();
        }
        RatFn { num: &(&self.num * &o.den) + &(&o.num * &self.den), den: &self.den * &o.den }.tidy()
    }

    pub fn neg(&self) -> RatFn {
        RatFn { num: -&self.num, den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFn) -> RatFn {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFn) -> RatFn {
        RatFn { num: &self.num * &o.num, den: &self.den * &o.den }.tidy()
    }

    pub fn div(&self, o: &RatFn) -> Res<RatFn> {
        RatFn::new(&self.num * &o.den, &self.den * &o.num)
    }

    pub fn scale(&self, c: &FieldElement) -> RatFn {
        RatFn { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Equality as rational functions (cross multiplication).
    pub fn same_as(&self, o: &RatFn) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }

    /// Substitutes `var` by a rational function in every variable.
    pub fn substitute(&self, var: &str, r: &RatFn) -> Res<RatFn> {
        let (n1, d1) = subst_poly(&self.num, var, r)?;
        let (n2, d2) = subst_poly(&self.den, var, r)?;
        // (n1 / r.den^d1) / (n2 / r.den^d2)
        let (num, den) = if d1 >= d2 {
            (n1, &n2 * &r.den.pow(d1 - d2))
        } else {
            (&n1 * &r.den.pow(d2 - d1), n2)
        };
        RatFn::new(num, den)
    }

    pub fn substitute_all(&self, subs: &[(&str, &RatFn)]) -> Res<RatFn> {
        let mut out = self.clone();
        for (v, r) in subs {
            out = out.substitute(v, r)?;
        }
        Ok(out)
    }
}

/// p(var = r.num / r.den) = N / r.den^D with D = deg_var p; returns (N, D).
pub fn subst_poly(p: &MultiPoly, var: &str, r: &RatFn) -> Res<(MultiPoly, u32)> {
    let coeffs = p.as_univariate(var)?;
    let deg = coeffs.len().saturating_sub(1) as u32;
    let mut out = p.zero_like();
    let mut num_pow = p.one_like();
    for (k, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            out = &out + &(&(c * &num_pow) * &r.den.pow(deg - k as u32));
        }
        if k + 1 < coeffs.len() {
            num_pow = &num_pow * &r.num;
        }
    }
    Ok((out, deg))
}
