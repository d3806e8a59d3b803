//! Complex fixed-point numbers with big-integer parts, for evaluating tower
//! elements far beyond double precision without rational blow-up.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

/// Fractional bits: absolute precision 2^−384 ≈ 2.5e−116.
pub const FRAC_BITS: usize = 384;

/// (re + i·im)·2^−FRAC_BITS.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CFixed {
    re: BigInt,
    im: BigInt,
}

fn fix(q: &BigRational) -> BigInt {
    (q.numer() << FRAC_BITS) / q.denom()
}

fn unfix(x: &BigInt) -> f64 {
    BigRational::new(x.clone(), BigInt::from(1) << FRAC_BITS).to_f64().unwrap_or(f64::NAN)
}

impl CFixed {
    pub fn zero() -> CFixed {
        CFixed { re: BigInt::zero(), im: BigInt::zero() }
    }

    pub fn one() -> CFixed {
        CFixed { re: BigInt::from(1) << FRAC_BITS, im: BigInt::zero() }
    }

    pub fn rational(q: &BigRational) -> CFixed {
        CFixed { re: fix(q), im: BigInt::zero() }
    }

    pub fn from_c64(z: Complex64) -> Option<CFixed> {
        Some(CFixed { re: fix(&BigRational::from_float(z.re)?), im: fix(&BigRational::from_float(z.im)?) })
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(unfix(&self.re), unfix(&self.im))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn div(&self, o: &CFixed) -> Option<CFixed> {
        let den = &o.re * &o.re + &o.im * &o.im;
        if den.is_zero() {
            return None;
        }
        let re = &self.re * &o.re + &self.im * &o.im;
        let im = &self.im * &o.re - &self.re * &o.im;
        Some(CFixed { re: (re << FRAC_BITS) / &den, im: (im << FRAC_BITS) / &den })
    }
}

/// Newton refinement of a root of Σ c_j x^j from a double-precision start.
pub fn refine_root(c: &[CFixed], x0: Complex64, steps: usize) -> Option<CFixed> {
    let mut x = CFixed::from_c64(x0)?;
    for _ in 0..steps {
        let mut p = CFixed::zero();
        let mut dp = CFixed::zero();
        for a in c.iter().rev() {
            dp = &(&dp * &x) + &p;
            p = &(&p * &x) + a;
        }
        if p.is_zero() {
            break;
        }
        x = &x - &p.div(&dp)?;
    }
    Some(x)
}

impl Add for &CFixed {
    type Output = CFixed;
    fn add(self, o: &CFixed) -> CFixed {
        CFixed { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &CFixed {
    type Output = CFixed;
    fn sub(self, o: &CFixed) -> CFixed {
        CFixed { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul for &CFixed {
    type Output = CFixed;
    fn mul(self, o: &CFixed) -> CFixed {
        if self.im.is_zero() && o.im.is_zero() {
            return CFixed { re: (&self.re * &o.re) >> FRAC_BITS, im: BigInt::zero() };
        }
        CFixed {
            re: (&self.re * &o.re - &self.im * &o.im) >> FRAC_BITS,
            im: (&self.re * &o.im + &self.im * &o.re) >> FRAC_BITS,
        }
    }
}

impl Neg for &CFixed {
    type Output = CFixed;
    fn neg(self) -> CFixed {
        CFixed { re: -&self.re, im: -&self.im }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt2_and_i() {
        let q = |n: i64| CFixed::rational(&BigRational::from_integer(n.into()));
        let r = refine_root(&[q(-2), q(0), q(1)], Complex64::new(1.4, 0.0), 8).unwrap();
        let err = (&(&r * &r) - &q(2)).to_c64();
        assert!(err.norm() < 1e-100);
        let i = refine_root(&[q(1), q(0), q(1)], Complex64::new(1e-9, 0.99), 8).unwrap();
        assert_eq!((&i * &i).to_c64(), Complex64::new(-1.0, 0.0));
    }
}
