//! Dense univariate polynomials over `BigRat`.
//!
//! Coefficients are indexed by degree with trailing zeros stripped, so the
//! empty vector is the zero polynomial and the last entry is nonzero
//! otherwise. Degrees in this crate stay small (below ~40), so the dense
//! representation wins on simplicity and constant factors.

use crate::rat::{binomial, BigRat};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<BigRat>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        UniPoly::constant(BigRat::one())
    }

    pub fn x() -> Self {
        UniPoly::new(vec![BigRat::zero(), BigRat::one()])
    }

    pub fn constant(c: BigRat) -> Self {
        UniPoly::new(vec![c])
    }

    /// Monomial `c x^k`.
    pub fn monomial(c: BigRat, k: usize) -> Self {
        if c.is_zero() {
            return UniPoly::zero();
        }
        let mut v = vec![BigRat::zero(); k + 1];
        v[k] = c;
        UniPoly { coeffs: v }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        UniPoly::new(coeffs.iter().map(|&c| crate::rat::rint(c)).collect())
    }

    /// `x - c`.
    pub fn x_minus(c: &BigRat) -> Self {
        UniPoly::new(vec![-c.clone(), BigRat::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with deg 0 for the zero polynomial (convenient in bounds).
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeff(&self, k: usize) -> BigRat {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.coeffs
    }

    pub fn leading(&self) -> BigRat {
        self.coeffs.last().cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn constant_term(&self) -> BigRat {
        self.coeff(0)
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        if c.is_zero() {
            return UniPoly::zero();
        }
        UniPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, at: &BigRat) -> BigRat {
        let mut acc = BigRat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * at + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * crate::rat::rint(i as i64))
                .collect(),
        )
    }

    /// Substitute `x -> a x + b`.
    pub fn compose_affine(&self, a: &BigRat, b: &BigRat) -> Self {
        let mut acc = UniPoly::zero();
        let lin = UniPoly::new(vec![b.clone(), a.clone()]);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &UniPoly::constant(c.clone());
        }
        acc
    }

    /// Substitute `x -> x + c` (shift of variable).
    pub fn shift_var(&self, c: &BigRat) -> Self {
        self.compose_affine(&BigRat::one(), c)
    }

    /// Substitute `x -> 1 - x`.
    pub fn compose_one_minus_x(&self) -> Self {
        self.compose_affine(&-BigRat::one(), &BigRat::one())
    }

    /// General composition `self(inner(x))`.
    pub fn compose(&self, inner: &UniPoly) -> Self {
        let mut acc = UniPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &UniPoly::constant(c.clone());
        }
        acc
    }

    pub fn pow(&self, mut e: usize) -> Self {
        let mut base = self.clone();
        let mut acc = UniPoly::one();
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

    /// Euclidean division: `(q, r)` with `self = q*div + r`, `deg r < deg div`.
    pub fn divmod(&self, div: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        if div.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dlead = div.leading();
        let dd = div.deg0();
        let mut rem = self.clone();
        let mut q = vec![BigRat::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = rem.leading() / dlead.clone();
            let k = rd - dd;
            // rem -= c x^k * div
            let mut coeffs = rem.coeffs;
            for (i, dc) in div.coeffs.iter().enumerate() {
                coeffs[i + k] -= dc * &c;
            }
            rem = UniPoly::new(coeffs);
            q[k] = c;
        }
        Ok((UniPoly::new(q), rem))
    }

    /// Exact division; error if the remainder is nonzero.
    pub fn div_exact(&self, div: &UniPoly) -> Result<UniPoly> {
        let (q, r) = self.divmod(div)?;
        if !r.is_zero() {
            return Err(Error::NotDivisible(format!(
                "polynomial division left remainder {r}"
            )));
        }
        Ok(q)
    }

    /// Clear denominators and integer content: returns `(p, c)` with
    /// `self = c * p`, `p` having coprime integer coefficients and positive
    /// leading coefficient. Zero maps to `(0, 1)`.
    pub fn primitive_part(&self) -> (UniPoly, BigRat) {
        if self.is_zero() {
            return (UniPoly::zero(), BigRat::one());
        }
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut content = BigInt::zero();
        for i in &ints {
            content = content.gcd(i);
        }
        if ints.last().unwrap().is_negative() {
            content = -content;
        }
        let prim = UniPoly::new(
            ints.iter()
                .map(|i| BigRat::from_integer(i / &content))
                .collect(),
        );
        (prim, BigRat::new(content, den))
    }

    /// Monic greatest common divisor via primitive Euclidean remainders over
    /// the integers (avoids rational-coefficient blowup).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.is_constant() || other.is_constant() {
            return UniPoly::one();
        }
        let mut a = self.primitive_part().0;
        let mut b = other.primitive_part().0;
        if a.deg0() < b.deg0() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            if b.is_constant() {
                return UniPoly::one();
            }
            // pseudo-remainder keeps coefficients integral
            let d = a.deg0() as i64 - b.deg0() as i64 + 1;
            let scaled = a.scale(&b.leading().pow(d.max(0) as i32));
            let (_, r) = scaled.divmod(&b).expect("b nonzero");
            a = b;
            b = r.primitive_part().0;
        }
        a.monic()
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let l = self.leading();
        UniPoly::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    /// Multiplicity of the root `at` (0 when not a root).
    pub fn root_multiplicity(&self, at: &BigRat) -> usize {
        let mut p = self.clone();
        let mut m = 0;
        let lin = UniPoly::x_minus(at);
        while !p.is_zero() && p.eval(at).is_zero() {
            p = p.div_exact(&lin).expect("root divides");
            m += 1;
        }
        m
    }

    /// All rational roots with multiplicity. Returns `None` when the divisor
    /// enumeration of the leading/constant coefficients becomes too large to
    /// be worth it (callers fall back to keeping the polynomial symbolic).
    pub fn rational_roots(&self) -> Option<Vec<(BigRat, usize)>> {
        if self.is_zero() {
            return Some(vec![]);
        }
        let mut p = self.primitive_part().0;
        let mut roots: Vec<(BigRat, usize)> = Vec::new();
        // root 0
        let mut zmult = 0;
        while !p.is_zero() && p.coeff(0).is_zero() {
            p = UniPoly::new(p.coeffs[1..].to_vec());
            zmult += 1;
        }
        if zmult > 0 {
            roots.push((BigRat::zero(), zmult));
        }
        if p.is_constant() {
            return Some(roots);
        }
        let lead = p.leading().numer().abs();
        let cons = p.coeff(0).numer().abs();
        let dl = small_divisors(&lead)?;
        let dc = small_divisors(&cons)?;
        if dl.len() * dc.len() > 200_000 {
            return None;
        }
        // Cauchy bound: every root has |r| <= 1 + max |a_i|/|a_n|
        let lead_abs = p.leading().abs();
        let mut maxratio = BigRat::zero();
        for c in p.coeffs() {
            let r = c.abs() / &lead_abs;
            if r > maxratio {
                maxratio = r;
            }
        }
        let bound = maxratio + BigRat::one();
        let mut candidates: Vec<BigRat> = Vec::new();
        for q in &dl {
            for pnum in &dc {
                let r = BigRat::new(pnum.clone(), q.clone());
                if r > bound {
                    continue;
                }
                candidates.push(r.clone());
                candidates.push(-r);
            }
        }
        candidates.sort();
        candidates.dedup();
        for cand in candidates {
            let m = p.root_multiplicity(&cand);
            if m > 0 {
                for _ in 0..m {
                    p = p.div_exact(&UniPoly::x_minus(&cand)).unwrap();
                }
                roots.push((cand, m));
            }
            if p.is_constant() {
                break;
            }
        }
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        Some(roots)
    }

    /// Splits into linear factors over Q: the sorted root multiset when the
    /// polynomial is a product of rational linear factors.
    pub fn all_rational_roots(&self) -> Option<Vec<BigRat>> {
        let deg = self.degree()?;
        let roots = self.rational_roots()?;
        let total: usize = roots.iter().map(|(_, m)| m).sum();
        if total != deg {
            return None;
        }
        let mut out = Vec::with_capacity(deg);
        for (r, m) in roots {
            for _ in 0..m {
                out.push(r.clone());
            }
        }
        Some(out)
    }
}

/// Divisors of `n` (positive). `None` when `n` does not fit `u128` or the
/// divisor set would explode.
fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    if n.is_zero() {
        return Some(vec![BigInt::one()]);
    }
    let m: u128 = u128::try_from(n.abs()).ok()?;
    let mut primes: Vec<(u128, u32)> = Vec::new();
    factorize_u128(m, &mut primes);
    primes.sort_unstable();
    let mut merged: Vec<(u128, u32)> = Vec::new();
    for (p, e) in primes {
        match merged.last_mut() {
            Some((q, f)) if *q == p => *f += e,
            _ => merged.push((p, e)),
        }
    }
    let mut divs: Vec<u128> = vec![1];
    for (p, e) in merged {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for &d0 in &divs {
            let mut pw: u128 = 1;
            for i in 0..=e {
                next.push(d0.checked_mul(pw)?);
                if i < e {
                    pw = pw.checked_mul(p)?;
                }
            }
        }
        divs = next;
        if divs.len() > 20_000 {
            return None;
        }
    }
    Some(divs.into_iter().map(BigInt::from).collect())
}

/// Factor `n >= 1` into primes (with repetition collected by the caller),
/// trial division for small factors and Pollard's rho for the rest.
fn factorize_u128(mut n: u128, out: &mut Vec<(u128, u32)>) {
    if n <= 1 {
        return;
    }
    for p in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    let mut d = 53u128;
    while d * d <= n && d < 10_000 {
        let mut e = 0;
        while n % d == 0 {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 2;
    }
    if n == 1 {
        return;
    }
    if is_prime_u128(n) {
        out.push((n, 1));
        return;
    }
    let f = pollard_rho(n);
    factorize_u128(f, out);
    factorize_u128(n / f, out);
}

fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    // m < 2^127 in practice; use 256-bit via split when needed
    if let (Ok(a64), Ok(b64), Ok(m64)) = (u64::try_from(a), u64::try_from(b), u64::try_from(m)) {
        return ((a64 as u128 * b64 as u128) % m64 as u128) as u128;
    }
    // slow path: double-and-add
    let mut result: u128 = 0;
    let mut a = a % m;
    let mut b = b % m;
    while b > 0 {
        if b & 1 == 1 {
            result = (result + a) % m;
        }
        a = (a << 1) % m;
        b >>= 1;
    }
    result
}

fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc: u128 = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn is_prime_u128(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    // Miller-Rabin with fixed witnesses (deterministic below 3.3 * 10^24)
    let d = n - 1;
    let r = d.trailing_zeros();
    let d = d >> r;
    'witness: for a in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u128) -> u128 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c: u128 = 1;
    loop {
        let f = |x: u128| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u128, 2u128, 1u128);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            let diff = x.abs_diff(y);
            d = gcd_u128(diff, n);
        }
        if d != n && d != 0 {
            return d;
        }
        c += 1;
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Binomial shift helper: coefficient polynomials of D^j o f for f a
/// polynomial, i.e. the j-th derivative scaled by C(n, j).
pub fn nth_derivative(p: &UniPoly, n: usize) -> UniPoly {
    let mut q = p.clone();
    for _ in 0..n {
        q = q.derivative();
    }
    q
}

/// `sum_k C(j,k) f^(k) D^(j-k)` expansion helper used by operator products:
/// returns the list `[C(j,k) * f^(k)]` for k = 0..=j.
pub fn leibniz_row(f: &UniPoly, j: usize) -> Vec<UniPoly> {
    let mut out = Vec::with_capacity(j + 1);
    let mut der = f.clone();
    for k in 0..=j {
        out.push(der.scale(&binomial(j, k)));
        if k < j {
            der = der.derivative();
        }
    }
    out
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) + rhs.coeff(i));
        }
        UniPoly::new(v)
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) - rhs.coeff(i));
        }
        UniPoly::new(v)
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut v = vec![BigRat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                v[i + j] += a * b;
            }
        }
        UniPoly::new(v)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sgn, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sgn == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sgn} ")?;
            }
            let show_coeff = !mag.is_one() || i == 0;
            if show_coeff {
                if mag.denom().is_one() {
                    write!(f, "{mag}")?;
                } else {
                    write!(f, "({mag})")?;
                }
                if i > 0 {
                    write!(f, "*")?;
                }
            }
            if i == 1 {
                write!(f, "x")?;
            } else if i > 1 {
                write!(f, "x^{i}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rint};

    fn p(coeffs: &[i64]) -> UniPoly {
        UniPoly::from_i64(coeffs)
    }

    #[test]
    fn gcd_common_factor() {
        // gcd(x^2 - 1, x - 1) = x - 1
        let g = p(&[-1, 0, 1]).gcd(&p(&[-1, 1]));
        assert_eq!(g, p(&[-1, 1]));
    }

    #[test]
    fn derivative_triple_root() {
        // d/dx [x^3 (x-1)^3] vanishes at x = 1
        let q = &p(&[0, 0, 0, 1]) * &p(&[-1, 1]).pow(3);
        assert!(q.derivative().eval(&rint(1)).is_zero());
    }

    #[test]
    fn divmod_remultiplies() {
        // oracle: q*b + r == a, deg r < deg b
        let a = p(&[3, 0, 0, 0, 0, 1]); // x^5 + 3
        let b = p(&[1, 0, 1]); // x^2 + 1
        let (q, r) = a.divmod(&b).unwrap();
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.deg0() < b.deg0());
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        // (x - 1/2)^2 (x + 3) x
        let q = &(&UniPoly::x_minus(&rat(1, 2)).pow(2) * &p(&[3, 1])) * &UniPoly::x();
        let roots = q.rational_roots().unwrap();
        assert_eq!(
            roots,
            vec![
                (rint(-3), 1),
                (rint(0), 1),
                (rat(1, 2), 2),
            ]
        );
        assert_eq!(
            q.all_rational_roots().unwrap(),
            vec![rint(-3), rint(0), rat(1, 2), rat(1, 2)]
        );
    }

    #[test]
    fn affine_composition() {
        // (1-x)^2 = 1 - 2x + x^2
        let q = p(&[0, 0, 1]).compose_one_minus_x();
        assert_eq!(q, p(&[1, -2, 1]));
        let shifted = p(&[0, 0, 1]).shift_var(&rint(3)); // (x+3)^2
        assert_eq!(shifted, p(&[9, 6, 1]));
    }
}
