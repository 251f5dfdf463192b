//! Arbitrary-precision rational scalars.
//!
//! `BigRat` is kept in lowest terms with a positive denominator by
//! `num_rational`; equality is plain component equality.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type BigRat = num_rational::BigRational;

/// `n/d` as a `BigRat`. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> BigRat {
    BigRat::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as a `BigRat`.
pub fn rint(n: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

pub fn is_integer(r: &BigRat) -> bool {
    r.denom().is_one()
}

/// `r` as an `i64` when it is an integer fitting the type.
pub fn to_i64(r: &BigRat) -> Option<i64> {
    if !is_integer(r) {
        return None;
    }
    let n = r.numer();
    i64::try_from(n.clone()).ok()
}

/// Falling factorial `a (a-1) ... (a-k+1)` with rational `a`.
pub fn falling(a: &BigRat, k: usize) -> BigRat {
    let mut acc = BigRat::one();
    for i in 0..k {
        acc *= a - rint(i as i64);
    }
    acc
}

pub fn factorial(n: usize) -> BigRat {
    falling(&rint(n as i64), n)
}

pub fn binomial(n: usize, k: usize) -> BigRat {
    if k > n {
        return BigRat::zero();
    }
    falling(&rint(n as i64), k) / factorial(k)
}

/// Parse `p`, `-p`, or `p/q` in decimal.
pub fn parse_rat(s: &str) -> Option<BigRat> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRat::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(BigRat::from_integer(n))
    }
}

/// Sign of `r` as -1, 0, 1.
pub fn sign(r: &BigRat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_reduce() {
        assert_eq!(parse_rat("6/4").unwrap(), rat(3, 2));
        assert_eq!(parse_rat("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rat(" 7 ").unwrap(), rint(7));
        assert!(parse_rat("1/0").is_none());
        assert_eq!(format!("{}", rat(-17, 4)), "-17/4");
    }

    #[test]
    fn falling_factorials() {
        // 5*4*3
        assert_eq!(falling(&rint(5), 3), rint(60));
        assert_eq!(falling(&rat(1, 2), 2), rat(-1, 4));
        assert_eq!(factorial(5), rint(120));
        assert_eq!(binomial(6, 2), rint(15));
    }
}
