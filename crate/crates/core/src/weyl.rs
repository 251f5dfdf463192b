//! The operator algebra `Q(x)[D]` with `D = d/dx` and `theta = x D`.
//!
//! Operators are stored densely: `coeffs[j]` is the rational-function
//! coefficient of `D^j`. Composition uses `D o f = f o D + f'` iterated
//! (Leibniz), so `order(A o B) = order(A) + order(B)` whenever both are
//! nonzero. The module also provides the `(x, theta, D)`-form: any operator
//! with polynomial coefficients is uniquely
//!
//! ```text
//! P = x^q P_{-q}(theta) + ... + x P_{-1}(theta)
//!     + P_0(theta) + P_1(theta) D + ... + P_p(theta) D^p
//! ```
//!
//! with the degree bounds deg P_{-q}, ..., deg P_0 <= n and
//! deg P_k <= n - k for k = 1..p.

use crate::poly::UniPoly;
use crate::rat::{binomial, falling, BigRat};
use crate::ratfunc::RatFunc;
use crate::{Error, Result};
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq)]
pub struct DiffOp {
    coeffs: Vec<RatFunc>,
}

impl DiffOp {
    pub fn new(mut coeffs: Vec<RatFunc>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        DiffOp { coeffs }
    }

    pub fn zero() -> Self {
        DiffOp { coeffs: vec![] }
    }

    pub fn one() -> Self {
        DiffOp::func(RatFunc::one())
    }

    /// Multiplication operator by a rational function.
    pub fn func(f: RatFunc) -> Self {
        DiffOp::new(vec![f])
    }

    pub fn from_poly(p: UniPoly) -> Self {
        DiffOp::func(RatFunc::from_poly(p))
    }

    pub fn constant(c: BigRat) -> Self {
        DiffOp::func(RatFunc::constant(c))
    }

    pub fn x() -> Self {
        DiffOp::func(RatFunc::x())
    }

    /// The derivation `D`.
    pub fn d() -> Self {
        DiffOp::new(vec![RatFunc::zero(), RatFunc::one()])
    }

    pub fn d_power(k: usize) -> Self {
        let mut v = vec![RatFunc::zero(); k + 1];
        v[k] = RatFunc::one();
        DiffOp::new(v)
    }

    /// `theta = x D`.
    pub fn theta() -> Self {
        DiffOp::new(vec![RatFunc::zero(), RatFunc::x()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Order in `D`; `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn order0(&self) -> usize {
        self.order().unwrap_or(0)
    }

    pub fn coeff(&self, j: usize) -> RatFunc {
        self.coeffs.get(j).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn leading(&self) -> RatFunc {
        self.coeffs.last().cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        DiffOp::new(self.coeffs.iter().map(|f| f.scale(c)).collect())
    }

    /// Left multiplication by the function `f` (as an operator, `f o self`).
    pub fn lmul_func(&self, f: &RatFunc) -> Self {
        DiffOp::new(self.coeffs.iter().map(|c| c * f).collect())
    }

    /// Composition power.
    pub fn pow(&self, e: usize) -> Self {
        let mut acc = DiffOp::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Apply the operator to a polynomial; the result is a rational function
    /// (exact, no truncation).
    pub fn apply_poly(&self, p: &UniPoly) -> RatFunc {
        let mut acc = RatFunc::zero();
        let mut der = p.clone();
        for c in &self.coeffs {
            if !c.is_zero() {
                acc = &acc + &(c * &RatFunc::from_poly(der.clone()));
            }
            der = der.derivative();
        }
        acc
    }

    /// Apply to a rational function.
    pub fn apply_func(&self, f: &RatFunc) -> RatFunc {
        let mut acc = RatFunc::zero();
        let mut der = f.clone();
        for c in &self.coeffs {
            if !c.is_zero() {
                acc = &acc + &(c * &der);
            }
            der = der.derivative();
        }
        acc
    }

    /// The coefficients with denominators cleared: `(lcm, coeffs)` with
    /// `lcm * self` having the returned polynomial coefficients.
    pub fn cleared(&self) -> (UniPoly, Vec<UniPoly>) {
        let mut lcm = UniPoly::one();
        for c in &self.coeffs {
            let g = lcm.gcd(c.den());
            lcm = &lcm * &c.den().div_exact(&g).expect("gcd divides");
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let extra = lcm.div_exact(c.den()).expect("lcm divisible");
                c.num() * &extra
            })
            .collect();
        (lcm, coeffs)
    }

    pub fn has_polynomial_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_polynomial())
    }

    /// Content-free polynomial-coefficient representative with positive
    /// leading scalar: the canonical form for equality up to scalar.
    pub fn polynomial_normalize(&self) -> Self {
        if self.is_zero() {
            return DiffOp::zero();
        }
        let (_, coeffs) = self.cleared();
        let mut gcd = UniPoly::zero();
        for c in &coeffs {
            gcd = gcd.gcd(c);
        }
        let reduced: Vec<UniPoly> = coeffs
            .iter()
            .map(|c| c.div_exact(&gcd).expect("content divides"))
            .collect();
        // shared scalar content across all coefficients
        let mut all = Vec::new();
        for c in &reduced {
            all.extend_from_slice(c.coeffs());
        }
        let (_, content) = UniPoly::new(all).primitive_part();
        let mut final_coeffs: Vec<UniPoly> = reduced
            .iter()
            .map(|c| c.scale(&(BigRat::one() / &content)))
            .collect();
        if final_coeffs.last().unwrap().leading().is_negative() {
            final_coeffs = final_coeffs.iter().map(|c| -c).collect();
        }
        DiffOp::new(final_coeffs.into_iter().map(RatFunc::from_poly).collect())
    }

    /// When `self = c * other` for a scalar `c`, return it.
    pub fn eq_up_to_scalar(&self, other: &DiffOp) -> Option<BigRat> {
        if self.is_zero() {
            return other.is_zero().then(BigRat::one);
        }
        if other.is_zero() || self.order() != other.order() {
            return None;
        }
        // ratio from the first nonzero coefficient pair
        let mut ratio: Option<BigRat> = None;
        for j in 0..self.coeffs.len() {
            let a = self.coeff(j);
            let b = other.coeff(j);
            match (a.is_zero(), b.is_zero()) {
                (true, true) => continue,
                (true, false) | (false, true) => return None,
                (false, false) => {
                    let r = &a / &b;
                    let c = r.as_constant()?;
                    match &ratio {
                        None => ratio = Some(c),
                        Some(r0) => {
                            if *r0 != c {
                                return None;
                            }
                        }
                    }
                }
            }
        }
        ratio
    }

    /// Right Euclidean division: `(q, r)` with `self = q o div + r` and
    /// `order(r) < order(div)`.
    pub fn right_divmod(&self, div: &DiffOp) -> Result<(DiffOp, DiffOp)> {
        if div.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dord = div.order().unwrap();
        let dlead = div.leading();
        let mut rem = self.clone();
        let mut q = DiffOp::zero();
        while let Some(rord) = rem.order() {
            if rord < dord {
                break;
            }
            let c = &rem.leading() / &dlead;
            let k = rord - dord;
            let mut term = vec![RatFunc::zero(); k + 1];
            term[k] = c;
            let term = DiffOp::new(term);
            rem = &rem - &(&term * div);
            q = &q + &term;
        }
        Ok((q, rem))
    }

    /// Exact right quotient; error when a remainder is left.
    pub fn right_div_exact(&self, div: &DiffOp) -> Result<DiffOp> {
        let (q, r) = self.right_divmod(div)?;
        if !r.is_zero() {
            return Err(Error::NotDivisible(format!(
                "right division left a remainder of order {:?}",
                r.order()
            )));
        }
        Ok(q)
    }

    /// Left division by `D^k`: the operator `b` with `D^k o b = self`.
    pub fn left_div_d(&self, k: usize) -> Result<DiffOp> {
        let mut a = self.clone();
        for _ in 0..k {
            a = a.left_div_d_once()?;
        }
        Ok(a)
    }

    fn left_div_d_once(&self) -> Result<DiffOp> {
        let Some(m) = self.order() else {
            return Ok(DiffOp::zero());
        };
        if m == 0 {
            return Err(Error::NotDivisible(
                "operator of order 0 is not left-divisible by D".into(),
            ));
        }
        // D o b has D^j coefficient b_{j-1} + b_j', solved top down
        let mut b = vec![RatFunc::zero(); m];
        b[m - 1] = self.coeff(m);
        for j in (1..m).rev() {
            b[j - 1] = &self.coeff(j) - &b[j].derivative();
        }
        if self.coeff(0) != b[0].derivative() {
            return Err(Error::NotDivisible(
                "constant-in-D structure obstructs left division by D".into(),
            ));
        }
        Ok(DiffOp::new(b))
    }

    /// Largest `k` with `self` left-divisible by `D^k`, together with the
    /// quotient.
    pub fn strip_left_d(&self) -> (usize, DiffOp) {
        let mut k = 0;
        let mut cur = self.clone();
        while let Ok(next) = cur.left_div_d_once() {
            cur = next;
            k += 1;
            if cur.is_zero() {
                break;
            }
        }
        (k, cur)
    }

    /// Formal adjoint `sum (-1)^j D^j o p_j`. An involution and an
    /// anti-homomorphism on the nose; the family symmetry bookkeeping
    /// applies it to polynomial-coefficient representatives, but the
    /// definition is honest for rational coefficients too.
    pub fn adjoint(&self) -> DiffOp {
        let mut acc = DiffOp::zero();
        for (j, p) in self.coeffs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            // (-1)^j D^j o p = sum_k (-1)^j C(j,k) p^(k) D^(j-k)
            let sign = if j % 2 == 0 { BigRat::one() } else { -BigRat::one() };
            let mut v = vec![RatFunc::zero(); j + 1];
            let mut der = p.clone();
            for k in 0..=j {
                v[j - k] = der.scale(&(&sign * &binomial(j, k)));
                if k < j {
                    der = der.derivative();
                }
            }
            acc = &acc + &DiffOp::new(v);
        }
        acc
    }

    /// Substitution `x -> 1 - x`, `D -> -D`.
    pub fn subst_one_minus_x(&self) -> DiffOp {
        DiffOp::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| {
                    let f = c.compose_affine(&-BigRat::one(), &BigRat::one());
                    if j % 2 == 0 {
                        f
                    } else {
                        -&f
                    }
                })
                .collect(),
        )
    }

    /// Substitution `x -> 1/x`: coefficients composed with `1/x` and
    /// `D -> -x^2 D` (so the result is again an operator in the same
    /// variable).
    pub fn subst_inverse(&self) -> DiffOp {
        // -x^2 D
        let d_new = DiffOp::new(vec![
            RatFunc::zero(),
            RatFunc::from_poly(UniPoly::from_i64(&[0, 0, -1])),
        ]);
        let mut acc = DiffOp::zero();
        let mut dpow = DiffOp::one();
        for (j, c) in self.coeffs.iter().enumerate() {
            if j > 0 {
                dpow = &dpow * &d_new;
            }
            if c.is_zero() {
                continue;
            }
            acc = &acc + &dpow.lmul_func(&c.compose_inverse());
        }
        acc
    }

    pub fn to_json(&self) -> serde_json::Value {
        let coeffs: Vec<serde_json::Value> = self
            .coeffs
            .iter()
            .map(|c| {
                serde_json::json!({
                    "num": c.num().coeffs().iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                    "den": c.den().coeffs().iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({ "coeffs": coeffs })
    }
}

impl Add for &DiffOp {
    type Output = DiffOp;
    fn add(self, rhs: &DiffOp) -> DiffOp {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DiffOp::new((0..n).map(|j| &self.coeff(j) + &rhs.coeff(j)).collect())
    }
}

impl Sub for &DiffOp {
    type Output = DiffOp;
    fn sub(self, rhs: &DiffOp) -> DiffOp {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        DiffOp::new((0..n).map(|j| &self.coeff(j) - &rhs.coeff(j)).collect())
    }
}

impl Neg for &DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        DiffOp::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &DiffOp {
    type Output = DiffOp;
    /// Composition `self o rhs`.
    fn mul(self, rhs: &DiffOp) -> DiffOp {
        if self.is_zero() || rhs.is_zero() {
            return DiffOp::zero();
        }
        let n = self.order0() + rhs.order0();
        let mut out = vec![RatFunc::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            // D^i o b_j D^j = sum_k C(i,k) b_j^(k) D^(i+j-k)
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let mut der = b.clone();
                for k in 0..=i {
                    let c = &der.scale(&binomial(i, k));
                    out[i + j - k] = &out[i + j - k] + &(a * c);
                    if k < i {
                        der = der.derivative();
                    }
                }
            }
        }
        DiffOp::new(out)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&DiffOp> for DiffOp {
            type Output = DiffOp;
            fn $method(self, rhs: &DiffOp) -> DiffOp {
                (&self).$method(rhs)
            }
        }
        impl $trait<DiffOp> for &DiffOp {
            type Output = DiffOp;
            fn $method(self, rhs: DiffOp) -> DiffOp {
                self.$method(&rhs)
            }
        }
        impl $trait<DiffOp> for DiffOp {
            type Output = DiffOp;
            fn $method(self, rhs: DiffOp) -> DiffOp {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        -&self
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if j == 0 {
                write!(f, "({c})")?;
            } else if c.is_one() {
                if j == 1 {
                    write!(f, "D")?;
                } else {
                    write!(f, "D^{j}")?;
                }
            } else if j == 1 {
                write!(f, "({c})*D")?;
            } else {
                write!(f, "({c})*D^{j}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Falling-factorial polynomial `t (t-1) ... (t-n+1)` in the indeterminate.
pub fn falling_poly(n: usize) -> UniPoly {
    let mut acc = UniPoly::one();
    for i in 0..n {
        acc = &acc * &UniPoly::x_minus(&crate::rat::rint(i as i64));
    }
    acc
}

/// The `(x, theta, D)`-form of an operator with polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaForm {
    /// `xparts[k]` is the theta-polynomial multiplying `x^{k+1}`.
    pub xparts: Vec<UniPoly>,
    /// `dparts[k]` is the theta-polynomial multiplying `D^k`.
    pub dparts: Vec<UniPoly>,
}

impl ThetaForm {
    pub fn q(&self) -> usize {
        self.xparts.len()
    }

    pub fn p(&self) -> usize {
        self.dparts.len().saturating_sub(1)
    }

    /// Theta-polynomial at `D^k` (`k >= 0`) or `x^{-k}` (`k < 0`).
    pub fn part(&self, k: isize) -> UniPoly {
        if k >= 0 {
            self.dparts.get(k as usize).cloned().unwrap_or_else(UniPoly::zero)
        } else {
            self.xparts
                .get((-k - 1) as usize)
                .cloned()
                .unwrap_or_else(UniPoly::zero)
        }
    }

    /// Build a pure `(theta, D)`-form (no x-parts).
    pub fn from_dparts(dparts: Vec<UniPoly>) -> Self {
        let mut t = ThetaForm {
            xparts: vec![],
            dparts,
        };
        t.trim();
        t
    }

    pub fn new(xparts: Vec<UniPoly>, dparts: Vec<UniPoly>) -> Self {
        let mut t = ThetaForm { xparts, dparts };
        t.trim();
        t
    }

    fn trim(&mut self) {
        while self.xparts.last().is_some_and(|p| p.is_zero()) {
            self.xparts.pop();
        }
        while self.dparts.last().is_some_and(|p| p.is_zero()) {
            self.dparts.pop();
        }
    }

    /// Replace `theta` by `theta - shift` in every part.
    pub fn substitute_theta(&self, shift: &BigRat) -> ThetaForm {
        let sub = |p: &UniPoly| p.compose_affine(&BigRat::one(), &-shift.clone());
        ThetaForm::new(
            self.xparts.iter().map(sub).collect(),
            self.dparts.iter().map(sub).collect(),
        )
    }

    /// Back to an operator in `(x, D)`-form.
    pub fn to_op(&self) -> DiffOp {
        let max_theta_deg = self
            .xparts
            .iter()
            .chain(self.dparts.iter())
            .map(|p| p.deg0())
            .max()
            .unwrap_or(0);
        let stirling = stirling2(max_theta_deg);
        let mut acc = DiffOp::zero();
        // theta^m = sum_i S(m,i) x^i D^i
        let expand = |p: &UniPoly| -> Vec<BigRat> {
            // returns d_i with p(theta) = sum_i d_i x^i D^i
            let mut d = vec![BigRat::zero(); p.deg0() + 1];
            for (m, c) in p.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (i, s) in stirling[m].iter().enumerate() {
                    if !s.is_zero() {
                        d[i] += c * s;
                    }
                }
            }
            d
        };
        for (k, p) in self.dparts.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let d = expand(p);
            let n = d.len() - 1 + k;
            let mut v = vec![RatFunc::zero(); n + 1];
            for (i, di) in d.iter().enumerate() {
                if !di.is_zero() {
                    v[i + k] = &v[i + k] + &RatFunc::from_poly(UniPoly::monomial(di.clone(), i));
                }
            }
            acc = &acc + &DiffOp::new(v);
        }
        for (k, p) in self.xparts.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let d = expand(p);
            let mut v = vec![RatFunc::zero(); d.len()];
            for (i, di) in d.iter().enumerate() {
                if !di.is_zero() {
                    v[i] = &v[i] + &RatFunc::from_poly(UniPoly::monomial(di.clone(), i + k + 1));
                }
            }
            acc = &acc + &DiffOp::new(v);
        }
        acc
    }
}

/// Stirling numbers of the second kind, rows 0..=n.
fn stirling2(n: usize) -> Vec<Vec<BigRat>> {
    let mut s = vec![vec![BigRat::zero(); n + 1]; n + 1];
    s[0][0] = BigRat::one();
    for m in 1..=n {
        for i in 1..=m {
            let lower = s[m - 1][i - 1].clone();
            let same = &s[m - 1][i] * BigRat::from_integer((i as i64).into());
            s[m][i] = lower + same;
        }
    }
    s
}

/// Convert a polynomial-coefficient operator to its unique
/// `(x, theta, D)`-form.
pub fn to_theta_form(op: &DiffOp) -> Result<ThetaForm> {
    if !op.has_polynomial_coeffs() {
        return Err(Error::NotDivisible(
            "theta form requires polynomial coefficients".into(),
        ));
    }
    let n = op.order0();
    let mut xparts: Vec<UniPoly> = vec![];
    let mut dparts: Vec<UniPoly> = vec![UniPoly::zero(); n + 1];
    for (j, c) in op.coeffs().iter().enumerate() {
        let p = c.as_poly().unwrap();
        for (i, coeff) in p.coeffs().iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            if i >= j {
                // x^{i-j} * ff_j(theta)
                let term = falling_poly(j).scale(coeff);
                let slot = i - j;
                if slot == 0 {
                    dparts[0] = &dparts[0] + &term;
                } else {
                    if xparts.len() < slot {
                        xparts.resize(slot, UniPoly::zero());
                    }
                    xparts[slot - 1] = &xparts[slot - 1] + &term;
                }
            } else {
                // ff_i(theta) D^{j-i}
                let term = falling_poly(i).scale(coeff);
                dparts[j - i] = &dparts[j - i] + &term;
            }
        }
    }
    let t = ThetaForm::new(xparts, dparts);
    debug_assert!(theta_degree_bounds_hold(&t, n));
    Ok(t)
}

/// Degree bounds of the `(x, theta, D)`-form.
pub fn theta_degree_bounds_hold(t: &ThetaForm, n: usize) -> bool {
    t.xparts.iter().all(|p| p.deg0() <= n)
        && t.dparts
            .iter()
            .enumerate()
            .all(|(k, p)| p.is_zero() || p.deg0() <= n - k)
}

/// Where a series lives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SingPoint {
    Zero,
    One,
    Infinity,
}

impl fmt::Display for SingPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingPoint::Zero => write!(f, "0"),
            SingPoint::One => write!(f, "1"),
            SingPoint::Infinity => write!(f, "infinity"),
        }
    }
}

/// A truncated local expansion. At a finite base point `c` it represents
/// `sum_m coeffs[m] (x-c)^(exponent+m)`; at infinity it represents
/// `sum_m coeffs[m] x^(-exponent-m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    pub base: SingPoint,
    pub exponent: BigRat,
    pub coeffs: Vec<BigRat>,
}

impl Series {
    /// Truncation order: number of known coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_vanishing(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Drop leading zero coefficients, adjusting the exponent.
    pub fn normalized(&self) -> Series {
        let mut k = 0;
        while k < self.coeffs.len() && self.coeffs[k].is_zero() {
            k += 1;
        }
        let step = crate::rat::rint(k as i64);
        Series {
            base: self.base,
            exponent: &self.exponent + &step,
            coeffs: self.coeffs[k..].to_vec(),
        }
    }

    pub fn add(&self, other: &Series) -> Option<Series> {
        if self.base != other.base {
            return None;
        }
        let diff = &other.exponent - &self.exponent;
        let d = crate::rat::to_i64(&diff)?;
        let (lo, hi, off) = if d >= 0 {
            (self, other, d as usize)
        } else {
            (other, self, (-d) as usize)
        };
        let n = lo.coeffs.len().min(off + hi.coeffs.len()).min(lo.coeffs.len());
        let mut coeffs = lo.coeffs[..n].to_vec();
        for (i, c) in hi.coeffs.iter().enumerate() {
            if off + i < n {
                coeffs[off + i] += c;
            }
        }
        Some(Series {
            base: lo.base,
            exponent: lo.exponent.clone(),
            coeffs,
        })
    }
}

/// Laurent data of a rational function at a base point: `f = t^shift *
/// (c_0 + c_1 t + ...)` in the local coordinate `t` (`x`, `x-1`, or `1/x`).
fn laurent(f: &RatFunc, base: SingPoint, n_terms: usize) -> Option<(i64, Vec<BigRat>)> {
    if f.is_zero() {
        return None;
    }
    let (num, den) = match base {
        SingPoint::Zero => (f.num().clone(), f.den().clone()),
        SingPoint::One => (
            f.num().shift_var(&BigRat::one()),
            f.den().shift_var(&BigRat::one()),
        ),
        SingPoint::Infinity => {
            let g = f.compose_inverse();
            (g.num().clone(), g.den().clone())
        }
    };
    let strip = |p: &UniPoly| -> (i64, UniPoly) {
        let mut v = 0usize;
        let mut c = p.coeffs().to_vec();
        while v < c.len() && c[v].is_zero() {
            v += 1;
        }
        (v as i64, UniPoly::new(c.split_off(v)))
    };
    let (vn, n1) = strip(&num);
    let (vd, d1) = strip(&den);
    // power-series inverse of d1 to n_terms
    let d0 = d1.coeff(0);
    let mut inv = vec![BigRat::zero(); n_terms];
    if n_terms > 0 {
        inv[0] = BigRat::one() / &d0;
        for m in 1..n_terms {
            let mut acc = BigRat::zero();
            for k in 1..=m {
                acc += &d1.coeff(k) * &inv[m - k];
            }
            inv[m] = -acc / &d0;
        }
    }
    let mut series = vec![BigRat::zero(); n_terms];
    for m in 0..n_terms {
        let mut acc = BigRat::zero();
        for k in 0..=m {
            acc += n1.coeff(k) * &inv[m - k];
        }
        series[m] = acc;
    }
    Some((vn - vd, series))
}

/// Apply an operator (rational coefficients allowed) to a truncated series,
/// tracking the exponent exactly. The result keeps as many coefficients as
/// the truncation supports.
pub fn apply_to_series(op: &DiffOp, u: &Series) -> Result<Series> {
    if op.is_zero() {
        return Ok(Series {
            base: u.base,
            exponent: u.exponent.clone(),
            coeffs: vec![BigRat::zero(); u.coeffs.len()],
        });
    }
    let n = u.coeffs.len();
    if n <= op.order0() {
        return Err(Error::TruncationTooShort(format!(
            "series with {} coefficients applied to operator of order {}",
            n,
            op.order0()
        )));
    }
    let n_terms = n; // Laurent terms per coefficient
    // offsets: finite base: term j contributes at offset m + (shift_j - j) + l
    // infinity: offset m + (j - shift_j) + l   (x^{-...} convention)
    let mut parts: Vec<(usize, i64, Vec<BigRat>)> = Vec::new();
    let mut min_off = i64::MAX;
    for (j, c) in op.coeffs().iter().enumerate() {
        if let Some((shift, ser)) = laurent(c, u.base, n_terms) {
            let base_off = match u.base {
                SingPoint::Infinity => j as i64 + shift,
                _ => shift - j as i64,
            };
            min_off = min_off.min(base_off);
            parts.push((j, base_off, ser));
        }
    }
    if parts.is_empty() {
        return Ok(Series {
            base: u.base,
            exponent: u.exponent.clone(),
            coeffs: vec![BigRat::zero(); n],
        });
    }
    let out_len = n;
    let mut out = vec![BigRat::zero(); out_len];
    for (j, base_off, ser) in &parts {
        for (m, um) in u.coeffs.iter().enumerate() {
            if um.is_zero() {
                continue;
            }
            // derivative factor
            let arg = match u.base {
                SingPoint::Infinity => -(&u.exponent + &crate::rat::rint(m as i64)),
                _ => &u.exponent + &crate::rat::rint(m as i64),
            };
            let dfac = falling(&arg, *j);
            if dfac.is_zero() {
                continue;
            }
            let um_d = um * &dfac;
            for (l, cl) in ser.iter().enumerate() {
                if cl.is_zero() {
                    continue;
                }
                let w = m as i64 + base_off + l as i64 - min_off;
                if w < 0 || w as usize >= out_len {
                    continue;
                }
                out[w as usize] += &um_d * cl;
            }
        }
    }
    // only offsets w with w <= n-1 are fully determined; we kept out_len = n
    let exponent = match u.base {
        SingPoint::Infinity => &u.exponent + &BigRat::from_integer(min_off.into()),
        _ => &u.exponent + &BigRat::from_integer(min_off.into()),
    };
    Ok(Series {
        base: u.base,
        exponent,
        coeffs: out,
    })
}

/// Contribution table for the Frobenius recursion: `transfer(op, base, rho,
/// m, t)` is the factor by which `u_m` contributes to the output coefficient
/// at offset `t` (both relative to the minimal output offset). Also returns
/// the indicial polynomial evaluator.
pub struct SeriesAction {
    base: SingPoint,
    parts: Vec<(usize, i64, Vec<BigRat>)>,
    pub min_off: i64,
}

impl SeriesAction {
    pub fn new(op: &DiffOp, base: SingPoint, n_terms: usize) -> Result<SeriesAction> {
        if op.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut parts = Vec::new();
        let mut min_off = i64::MAX;
        for (j, c) in op.coeffs().iter().enumerate() {
            if let Some((shift, ser)) = laurent(c, base, n_terms) {
                let base_off = match base {
                    SingPoint::Infinity => j as i64 + shift,
                    _ => shift - j as i64,
                };
                min_off = min_off.min(base_off);
                parts.push((j, base_off, ser));
            }
        }
        Ok(SeriesAction {
            base,
            parts,
            min_off,
        })
    }

    /// Factor transferring `u_m` (series coefficient at exponent `rho + m`)
    /// to output offset `t` (relative to the minimal output offset).
    pub fn transfer(&self, rho: &BigRat, m: usize, t: usize) -> BigRat {
        let mut acc = BigRat::zero();
        for (j, base_off, ser) in &self.parts {
            let l = t as i64 + self.min_off - m as i64 - base_off;
            if l < 0 || (l as usize) >= ser.len() {
                continue;
            }
            let cl = &ser[l as usize];
            if cl.is_zero() {
                continue;
            }
            let arg = match self.base {
                SingPoint::Infinity => -(rho + &crate::rat::rint(m as i64)),
                _ => rho + &crate::rat::rint(m as i64),
            };
            acc += cl * &falling(&arg, *j);
        }
        acc
    }

    /// Indicial polynomial: the transfer of `u_m` to offset `m` as a
    /// polynomial in `rho + m`.
    pub fn indicial(&self) -> UniPoly {
        let mut acc = UniPoly::zero();
        for (j, base_off, ser) in &self.parts {
            if *base_off != self.min_off || ser.is_empty() || ser[0].is_zero() {
                continue;
            }
            let arg = match self.base {
                SingPoint::Infinity => -&UniPoly::x(),
                _ => UniPoly::x(),
            };
            let mut ff = UniPoly::one();
            for i in 0..*j {
                ff = &ff * &(&arg - &UniPoly::constant(crate::rat::rint(i as i64)));
            }
            acc = &acc + &ff.scale(&ser[0]);
        }
        acc
    }
}
