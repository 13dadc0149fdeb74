//! Exact rationals backed by `num-rational`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

pub fn ratio<A: Into<BigInt>, B: Into<BigInt>>(num: A, den: B) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn int<A: Into<BigInt>>(n: A) -> Rational {
    Rational::from_integer(n.into())
}

pub fn from_big(n: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from(n.clone()))
}

/// `2^(-e)`.
pub fn pow2_neg(e: u64) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << (e as usize))
}

/// Exponent `e` if `r == 2^(-e)` for some `e >= 0`.
pub fn neg_log2(r: &Rational) -> Option<u64> {
    if !r.numer().is_one() || !r.denom().is_positive() {
        return None;
    }
    let d = r.denom();
    if (d & (d - BigInt::one())).is_zero() {
        Some(d.bits() - 1)
    } else {
        None
    }
}

/// Parses `p/q` or `p`.
pub fn parse(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => Some(Rational::from_integer(text.parse().ok()?)),
    }
}

pub fn floor_div(a: &BigUint, b: &BigUint) -> BigUint {
    a.div_floor(b)
}
