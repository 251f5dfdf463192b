//! Rational functions in `x` over `BigRat`, in canonical form: numerator and
//! denominator coprime, denominator monic and nonzero.

use crate::poly::UniPoly;
use crate::rat::BigRat;
use crate::{Error, Result};
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: UniPoly,
    den: UniPoly,
}

impl RatFunc {
    pub fn new(num: UniPoly, den: UniPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: UniPoly, den: UniPoly) -> Self {
        if num.is_zero() {
            return RatFunc {
                num: UniPoly::zero(),
                den: UniPoly::one(),
            };
        }
        if den.is_one() {
            return RatFunc { num, den };
        }
        if den.is_constant() {
            let inv = BigRat::one() / den.constant_term();
            return RatFunc {
                num: num.scale(&inv),
                den: UniPoly::one(),
            };
        }
        let g = num.gcd(&den);
        let mut num = num.div_exact(&g).expect("gcd divides");
        let mut den = den.div_exact(&g).expect("gcd divides");
        let lead = den.leading();
        if !lead.is_one() {
            den = den.scale(&(BigRat::one() / lead.clone()));
            num = num.scale(&(BigRat::one() / lead));
        }
        RatFunc { num, den }
    }

    pub fn from_poly(p: UniPoly) -> Self {
        RatFunc {
            num: p,
            den: UniPoly::one(),
        }
    }

    pub fn constant(c: BigRat) -> Self {
        RatFunc::from_poly(UniPoly::constant(c))
    }

    pub fn zero() -> Self {
        RatFunc::from_poly(UniPoly::zero())
    }

    pub fn one() -> Self {
        RatFunc::from_poly(UniPoly::one())
    }

    pub fn x() -> Self {
        RatFunc::from_poly(UniPoly::x())
    }

    pub fn num(&self) -> &UniPoly {
        &self.num
    }

    pub fn den(&self) -> &UniPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&UniPoly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<BigRat> {
        self.is_constant().then(|| self.num.constant_term())
    }

    pub fn inv(&self) -> Result<Self> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        RatFunc::normalized(self.num.scale(c), self.den.clone())
    }

    /// Evaluate at a scalar; error when the denominator vanishes there.
    pub fn eval(&self, at: &BigRat) -> Result<BigRat> {
        let d = self.den.eval(at);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(at) / d)
    }

    pub fn derivative(&self) -> Self {
        // (n/d)' = (n'd - nd')/d^2
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFunc::normalized(n, &self.den * &self.den)
    }

    /// Substitute `x -> a x + b`.
    pub fn compose_affine(&self, a: &BigRat, b: &BigRat) -> Self {
        RatFunc::normalized(
            self.num.compose_affine(a, b),
            self.den.compose_affine(a, b),
        )
    }

    /// Substitute `x -> 1/x` and clear powers: `f(1/x) = num(1/x)/den(1/x)`
    /// returned as a canonical rational function.
    pub fn compose_inverse(&self) -> Self {
        let n = self.num.deg0();
        let d = self.den.deg0();
        let m = n.max(d);
        // x^m f(1/x): reverse coefficient lists padded to length m+1
        let rev = |p: &UniPoly, m: usize| {
            let mut v = vec![BigRat::zero(); m + 1];
            for i in 0..=p.deg0() {
                v[m - i] = p.coeff(i);
            }
            UniPoly::new(v)
        };
        RatFunc::normalized(rev(&self.num, m), rev(&self.den, m))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(RatFunc::normalized(
                self.num.pow(e as usize),
                self.den.pow(e as usize),
            ))
        } else {
            self.inv()?.pow(-e)
        }
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::normalized(num, &self.den * &rhs.den)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        let num = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        RatFunc::normalized(num, &self.den * &rhs.den)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        assert!(!rhs.is_zero(), "division by zero rational function");
        RatFunc::normalized(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
