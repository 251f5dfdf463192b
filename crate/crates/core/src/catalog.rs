//! The named operator families.
//!
//! `E2(a,b,c)` is the Gauss hypergeometric operator; `H3..H6` are the
//! order-3..6 Fuchsian families with singular points {0,1,oo}, one accessory
//! parameter and schemes R3..R6; `G6(e,a)` assigns the accessory parameter
//! of `H6` the cubic polynomial `S10 + a0 + a1 t21 + ... + a6 t33` of the
//! local exponents, and `E6(e) = G6(e,0)`. The `saE*` constructors give the
//! self-adjoint instances.
//!
//! `H6` is assembled in its `(theta, D)`-form
//!
//! ```text
//! H6 = T0 + T1 D + T2 D^2 + T3 D^3,
//! T0 = (th+s+2)(th+s+1)(th+s) B0,   B0 = (th+e7)(th+e8)(th+e9),
//! T1 = (th+s+2)(th+s+1) B1,         B1 = -3 th^3 + T12 th^2 + T11 th + T10,
//! T2 = (th+s+2) B2,                 B2 =  3 th^3 + T22 th^2 + T21 th + T20,
//! T3 = -(th+3-e1)(th+3-e2)(th+3-e3),
//! ```
//!
//! with `T12, T22, T11, T21, T20 - T10` fixed polynomials of the exponents;
//! `T10` is the accessory parameter. The `(x, D)`-form is always derived
//! from this, never built independently; `nolog_residuals_h6` provides the
//! independent cross-check through the no-logarithm equations at infinity.

use crate::fuchs::RiemannScheme;
use crate::poly::UniPoly;
use crate::rat::{is_integer, rat, rint, BigRat};
use crate::weyl::{DiffOp, ThetaForm};
use crate::{Error, Result};
use num_traits::{One, Zero};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    E2,
    H3,
    H4,
    H5,
    H6,
    G6,
    E6,
    SaE2,
    SaE3,
    SaE4,
    SaE5,
    SaE6,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::E2 => "E2",
            Family::H3 => "H3",
            Family::H4 => "H4",
            Family::H5 => "H5",
            Family::H6 => "H6",
            Family::G6 => "G6",
            Family::E6 => "E6",
            Family::SaE2 => "saE2",
            Family::SaE3 => "saE3",
            Family::SaE4 => "saE4",
            Family::SaE5 => "saE5",
            Family::SaE6 => "saE6",
        };
        write!(f, "{s}")
    }
}

/// Instantiated local-exponent parameters with the derived symmetric
/// functions. For `H6` the vector is `(e1..e9)`; `H5` uses the same
/// formulas with `e9 = 0` appended, so the symmetric functions below are
/// written for nine entries and shorter families simply ignore them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentSet {
    pub e: Vec<BigRat>,
}

impl ExponentSet {
    pub fn new(e: Vec<BigRat>) -> Self {
        ExponentSet { e }
    }

    pub fn from_i64(e: &[i64]) -> Self {
        ExponentSet::new(e.iter().map(|&x| rint(x)).collect())
    }

    pub fn at(&self, i: usize) -> BigRat {
        self.e.get(i - 1).cloned().unwrap_or_else(BigRat::zero)
    }

    fn block(&self, b: usize) -> [BigRat; 3] {
        let base = 3 * b;
        [self.at(base + 1), self.at(base + 2), self.at(base + 3)]
    }

    /// Elementary symmetric functions of block `i` (1 = at 0, 2 = at 1,
    /// 3 = at infinity).
    pub fn s1(&self, i: usize) -> BigRat {
        let [a, b, c] = self.block(i - 1);
        a + b + c
    }

    pub fn s2(&self, i: usize) -> BigRat {
        let [a, b, c] = self.block(i - 1);
        &a * &b + &a * &c + &b * &c
    }

    pub fn s3(&self, i: usize) -> BigRat {
        let [a, b, c] = self.block(i - 1);
        &(&a * &b) * &c
    }

    /// The Fuchs-determined exponent `s = -(s11 + s12 + s13 - 6)/3`.
    pub fn s(&self) -> BigRat {
        -(self.s1(1) + self.s1(2) + self.s1(3) - rint(6)) / rint(3)
    }

    /// `r = -s`, the convention used for `H5`.
    pub fn r(&self) -> BigRat {
        -self.s()
    }

    /// Shift-invariant symmetric functions `t_{2i} = s_{2i} - s_{1i}^2/3`.
    pub fn t2(&self, i: usize) -> BigRat {
        let s1 = self.s1(i);
        self.s2(i) - &s1 * &s1 / rint(3)
    }

    /// `t_{3i} = 2 s_{1i}^3/27 - s_{1i} s_{2i}/3 + s_{3i}`.
    pub fn t3(&self, i: usize) -> BigRat {
        let s1 = self.s1(i);
        let s2 = self.s2(i);
        rint(2) * &s1 * &s1 * &s1 / rint(27) - &s1 * &s2 / rint(3) + self.s3(i)
    }

    /// Apply integer offsets entrywise.
    pub fn shifted(&self, offsets: &[i64]) -> ExponentSet {
        assert_eq!(offsets.len(), self.e.len(), "offset arity mismatch");
        ExponentSet::new(
            self.e
                .iter()
                .zip(offsets)
                .map(|(e, &o)| e + rint(o))
                .collect(),
        )
    }
}

/// How the accessory parameter is assigned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AccessoryAssignment {
    /// A free rational value (the `H_j` situation).
    Free(BigRat),
    /// `T10 = S10(e) + a0 + a1 t21 + a2 t22 + a3 t23 + a4 t31 + a5 t32 +
    /// a6 t33` (the `G6`/`E6` situation).
    S10PlusR([BigRat; 7]),
}

impl AccessoryAssignment {
    pub fn zero_r() -> Self {
        AccessoryAssignment::S10PlusR(std::array::from_fn(|_| BigRat::zero()))
    }

    pub fn resolve(&self, e: &ExponentSet) -> BigRat {
        match self {
            AccessoryAssignment::Free(v) => v.clone(),
            AccessoryAssignment::S10PlusR(a) => {
                let mut acc = s10(e) + a[0].clone();
                for i in 1..=3 {
                    acc += &a[i] * &e.t2(i);
                }
                for i in 1..=3 {
                    acc += &a[3 + i] * &e.t3(i);
                }
                acc
            }
        }
    }
}

/// A constructed catalog operator together with its bookkeeping.
#[derive(Clone, Debug)]
pub struct NamedOperator {
    pub family: Family,
    pub exponents: ExponentSet,
    pub assignment: AccessoryAssignment,
    /// The resolved accessory value (`None` for the rigid `E2`).
    pub accessory: Option<BigRat>,
    pub op: DiffOp,
    pub scheme: RiemannScheme,
}

// ---------------------------------------------------------------------------
// theta-polynomial helpers

/// `theta + c`.
pub(crate) fn lin(c: BigRat) -> UniPoly {
    UniPoly::new(vec![c, BigRat::one()])
}

pub(crate) fn prod(factors: &[UniPoly]) -> UniPoly {
    factors.iter().fold(UniPoly::one(), |acc, f| &acc * f)
}

/// Rising factorial `a (a+1) ... (a+k-1)`.
pub fn rising(a: &BigRat, k: usize) -> BigRat {
    let mut acc = BigRat::one();
    for i in 0..k {
        acc *= a + &rint(i as i64);
    }
    acc
}

// ---------------------------------------------------------------------------
// coefficient polynomials of H6

/// `T12 = s11 - 2 s13 - 9`.
pub fn t12(e: &ExponentSet) -> BigRat {
    e.s1(1) - rint(2) * e.s1(3) - rint(9)
}

/// `T22 = -2 s11 + s13 + 18`.
pub fn t22(e: &ExponentSet) -> BigRat {
    rint(-2) * e.s1(1) + e.s1(3) + rint(18)
}

/// `T11 = -8 + (s11^2 + 2 s11 s13 - s12^2 + s13^2)/3 + s11 - 5 s13 - s21 +
/// s22 - 2 s23`.
pub fn t11(e: &ExponentSet) -> BigRat {
    let (s11, s12, s13) = (e.s1(1), e.s1(2), e.s1(3));
    rint(-8)
        + (&s11 * &s11 + rint(2) * &s11 * &s13 - &s12 * &s12 + &s13 * &s13) / rint(3)
        + &s11
        - rint(5) * &s13
        - e.s2(1)
        + e.s2(2)
        - rint(2) * e.s2(3)
}

/// `T21 = 35 + (-s11^2 - 2 s11 s13 + s12^2 - s13^2)/3 - 7 s11 + 5 s13 +
/// 2 s21 - s22 + s23`.
pub fn t21(e: &ExponentSet) -> BigRat {
    let (s11, s12, s13) = (e.s1(1), e.s1(2), e.s1(3));
    rint(35)
        + (-(&s11 * &s11) - rint(2) * &s11 * &s13 + &s12 * &s12 - &s13 * &s13) / rint(3)
        - rint(7) * &s11
        + rint(5) * &s13
        + rint(2) * e.s2(1)
        - e.s2(2)
        + e.s2(3)
}

/// `T20 = -T10 + (polynomial of the exponents)`.
pub fn t20(e: &ExponentSet, t10: &BigRat) -> BigRat {
    let (s11, s12, s13) = (e.s1(1), e.s1(2), e.s1(3));
    let (s21, s22) = (e.s2(1), e.s2(2));
    let (s31, s32, s33) = (e.s3(1), e.s3(2), e.s3(3));
    -t10.clone()
        + rint(19)
        + (&s11 * &s11 * &s13 - &s11 * &s12 * &s12 + &s11 * &s13 * &s13 - &s12 * &s12 * &s13)
            / rint(9)
        + (&s13 * &s13 * &s13 + &s11 * &s11 * &s11 - rint(2) * &s12 * &s12 * &s12) / rint(27)
        + (rint(-2) * &s11 * &s11 - rint(4) * &s11 * &s13
            + &s11 * &s22
            + rint(2) * &s12 * &s12
            + &s22 * &s12
            - rint(2) * &s13 * &s13
            + &s22 * &s13)
            / rint(3)
        - rint(5) * &s11
        + rint(4) * &s13
        + rint(3) * &s21
        - rint(2) * &s22
        - &s31
        - &s32
        - &s33
}

/// The cubic polynomial `S10` of the exponents that makes the block-shift
/// operators compatible with a single accessory assignment.
pub fn s10(e: &ExponentSet) -> BigRat {
    let (s11, s12, s13) = (e.s1(1), e.s1(2), e.s1(3));
    let (s21, s22, s23) = (e.s2(1), e.s2(2), e.s2(3));
    let (s31, s32, s33) = (e.s3(1), e.s3(2), e.s3(3));
    (rint(-5) - &s21 + &s22 - rint(5) * &s23 + &s31 - &s32 - rint(3) * &s33) / rint(2)
        + (&s11 - rint(7) * &s13 + &s11 * &s13 + &s11 * &s23 - &s13 * &s21 + &s13 * &s22)
            / rint(3)
        + (&s11 * &s11 - &s12 * &s12 + &s13 * &s13 - &s11 * &s21 + &s12 * &s22 + &s13 * &s23)
            / rint(6)
        + (&s11 * &s11 - &s12 * &s12) * &s13 / rint(9)
        + (&s11 * &s11 * &s11 - &s12 * &s12 * &s12) / rint(27)
}

/// The four theta-blocks of `H6(e, T10)`.
pub fn h6_theta_blocks(e: &ExponentSet, t10: &BigRat) -> [UniPoly; 4] {
    let s = e.s();
    let b0 = prod(&[lin(e.at(7)), lin(e.at(8)), lin(e.at(9))]);
    let (b1, b2) = h6_b1_b2(e, t10);
    let t0 = &prod(&[lin(&s + &rint(2)), lin(&s + &rint(1)), lin(s.clone())]) * &b0;
    let t1 = &prod(&[lin(&s + &rint(2)), lin(&s + &rint(1))]) * &b1;
    let t2 = &lin(&s + &rint(2)) * &b2;
    let t3 = -&prod(&[
        lin(rint(3) - e.at(1)),
        lin(rint(3) - e.at(2)),
        lin(rint(3) - e.at(3)),
    ]);
    [t0, t1, t2, t3]
}

/// `B1` and `B2` with the accessory slot filled.
pub fn h6_b1_b2(e: &ExponentSet, t10: &BigRat) -> (UniPoly, UniPoly) {
    (
        UniPoly::new(vec![t10.clone(), t11(e), t12(e), rint(-3)]),
        UniPoly::new(vec![t20(e, t10), t21(e), t22(e), rint(3)]),
    )
}

// ---------------------------------------------------------------------------
// builders

/// Gauss operator `(th+a)(th+b) - (th+c) D = x(x-1)D^2 + ((a+b+1)x - c)D + ab`.
pub fn build_e2(a: &BigRat, b: &BigRat, c: &BigRat) -> NamedOperator {
    let e0 = prod(&[lin(a.clone()), lin(b.clone())]);
    let e1 = -&lin(c.clone());
    let theta = ThetaForm::from_dparts(vec![e0, e1]);
    let op = theta.to_op();
    let scheme = RiemannScheme::new(
        vec![BigRat::zero(), BigRat::one() - c],
        vec![BigRat::zero(), c - a - b],
        vec![a.clone(), b.clone()],
    );
    NamedOperator {
        family: Family::E2,
        exponents: ExponentSet::new(vec![a.clone(), b.clone(), c.clone()]),
        assignment: AccessoryAssignment::Free(BigRat::zero()),
        accessory: None,
        op,
        scheme,
    }
}

/// `H6(e, T10)` assembled from its theta-blocks.
pub fn build_h6(e: &ExponentSet, t10: &BigRat) -> NamedOperator {
    assert_eq!(e.e.len(), 9, "H6 takes nine exponents");
    let [t0, t1, t2, t3] = h6_theta_blocks(e, t10);
    let theta = ThetaForm::from_dparts(vec![t0, t1, t2, t3]);
    let op = theta.to_op();
    let s = e.s();
    let scheme = RiemannScheme::new(
        vec![rint(0), rint(1), rint(2), e.at(1), e.at(2), e.at(3)],
        vec![rint(0), rint(1), rint(2), e.at(4), e.at(5), e.at(6)],
        vec![
            s.clone(),
            &s + &rint(1),
            &s + &rint(2),
            e.at(7),
            e.at(8),
            e.at(9),
        ],
    );
    NamedOperator {
        family: Family::H6,
        exponents: e.clone(),
        assignment: AccessoryAssignment::Free(t10.clone()),
        accessory: Some(t10.clone()),
        op,
        scheme,
    }
}

/// `H5(e1..e8, B510) = H6(e, e9 = 0, T10 = B510) / D` (exact right division).
pub fn build_h5(e: &ExponentSet, b510: &BigRat) -> NamedOperator {
    assert_eq!(e.e.len(), 8, "H5 takes eight exponents");
    let mut e9 = e.e.clone();
    e9.push(BigRat::zero());
    let h6 = build_h6(&ExponentSet::new(e9), b510);
    let op = h6
        .op
        .right_div_exact(&DiffOp::d())
        .expect("H6 with e9 = 0 is right-divisible by D");
    let s = e.s(); // the padded e9 = 0 contributes nothing to the sums
    let scheme = RiemannScheme::new(
        vec![
            rint(0),
            rint(1),
            e.at(1) - rint(1),
            e.at(2) - rint(1),
            e.at(3) - rint(1),
        ],
        vec![
            rint(0),
            rint(1),
            e.at(4) - rint(1),
            e.at(5) - rint(1),
            e.at(6) - rint(1),
        ],
        vec![
            &s + &rint(1),
            &s + &rint(2),
            &s + &rint(3),
            e.at(7) + rint(1),
            e.at(8) + rint(1),
        ],
    );
    NamedOperator {
        family: Family::H5,
        exponents: e.clone(),
        assignment: AccessoryAssignment::Free(b510.clone()),
        accessory: Some(b510.clone()),
        op,
        scheme,
    }
}

/// The closed `(x, theta, D)`-form of `H5`, used as a cross-check on the
/// division route.
pub fn h5_closed_form(e: &ExponentSet, b510: &BigRat) -> DiffOp {
    let mut e9 = e.e.clone();
    e9.push(BigRat::zero());
    let e9 = ExponentSet::new(e9);
    let s = e9.s();
    let (b51, b52) = h6_b1_b2(&e9, b510);
    let t0bar = prod(&[
        lin(&s + &rint(1)),
        lin(&s + &rint(2)),
        lin(&s + &rint(3)),
        lin(e.at(7) + rint(1)),
        lin(e.at(8) + rint(1)),
    ]);
    let t1bar = &prod(&[lin(&s + &rint(1)), lin(&s + &rint(2))]) * &b51;
    let t2bar = &lin(&s + &rint(2)) * &b52;
    let t3bar = -&prod(&[
        lin(rint(3) - e.at(1)),
        lin(rint(3) - e.at(2)),
        lin(rint(3) - e.at(3)),
    ]);
    ThetaForm::new(vec![t0bar], vec![t1bar, t2bar, t3bar]).to_op()
}

/// `H4(c1..c7, T10)` with `c8` fixed by the Fuchs relation.
pub fn build_h4(c: &ExponentSet, t10: &BigRat) -> NamedOperator {
    assert_eq!(c.e.len(), 7, "H4 takes seven exponents");
    let c8 = rint(4) - c.e.iter().fold(BigRat::zero(), |a, b| a + b);
    let t0 = prod(&[lin(c.at(5)), lin(c.at(6)), lin(c.at(7)), lin(c8.clone())]);
    let t12 = c.at(1) + c.at(2) - c.at(5) - c.at(6) - c.at(7) - &c8 - rint(5);
    let t11 = rint(3) * (c.at(1) + c.at(2)) - c.at(1) * c.at(2) + c.at(3) * c.at(4)
        - c.at(5) * c.at(6)
        - c.at(5) * c.at(7)
        - c.at(5) * &c8
        - c.at(6) * c.at(7)
        - c.at(6) * &c8
        - c.at(7) * &c8
        - rint(8);
    let t1 = UniPoly::new(vec![t10.clone(), t11, t12, rint(-2)]);
    let t2 = prod(&[lin(rint(2) - c.at(1)), lin(rint(2) - c.at(2))]);
    let theta = ThetaForm::from_dparts(vec![t0, t1, t2]);
    let op = theta.to_op();
    let scheme = RiemannScheme::new(
        vec![rint(0), rint(1), c.at(1), c.at(2)],
        vec![rint(0), rint(1), c.at(3), c.at(4)],
        vec![c.at(5), c.at(6), c.at(7), c8],
    );
    NamedOperator {
        family: Family::H4,
        exponents: c.clone(),
        assignment: AccessoryAssignment::Free(t10.clone()),
        accessory: Some(t10.clone()),
        op,
        scheme,
    }
}

/// `H3(b1..b6, a00)` with `b7` fixed by the Fuchs relation.
pub fn build_h3(b: &ExponentSet, a00: &BigRat) -> NamedOperator {
    assert_eq!(b.e.len(), 6, "H3 takes six exponents");
    let b7 = rint(3) - b.e.iter().fold(BigRat::zero(), |a, x| a + x);
    let sn = prod(&[lin(b.at(5)), lin(b.at(6)), lin(b7.clone())]);
    let s0 = UniPoly::new(vec![
        a00.clone(),
        -b.at(1) * b.at(2) + (b.at(3) - rint(1)) * (b.at(4) - rint(1))
            - b.at(5) * b.at(6)
            - (b.at(5) + b.at(6)) * &b7,
        rint(2) * b.at(1) + rint(2) * b.at(2) + b.at(3) + b.at(4) - rint(3),
        rint(-2),
    ]);
    let s1 = prod(&[lin(rint(1) - b.at(1)), lin(rint(1) - b.at(2))]);
    let theta = ThetaForm::new(vec![sn], vec![s0, s1]);
    let op = theta.to_op();
    let scheme = RiemannScheme::new(
        vec![rint(0), b.at(1), b.at(2)],
        vec![rint(0), b.at(3), b.at(4)],
        vec![b.at(5), b.at(6), b7],
    );
    NamedOperator {
        family: Family::H3,
        exponents: b.clone(),
        assignment: AccessoryAssignment::Free(a00.clone()),
        accessory: Some(a00.clone()),
        op,
        scheme,
    }
}

/// `G6(e, a0..a6) = H6(e, S10(e) + a0 + a1 t21 + ... + a6 t33)`.
pub fn build_g6(e: &ExponentSet, a: &[BigRat; 7]) -> NamedOperator {
    let assignment = AccessoryAssignment::S10PlusR(a.clone());
    let t10 = assignment.resolve(e);
    let mut named = build_h6(e, &t10);
    named.family = Family::G6;
    named.assignment = assignment;
    named
}

/// `E6(e) = G6(e, 0)`.
pub fn build_e6(e: &ExponentSet) -> NamedOperator {
    let mut named = build_g6(e, &std::array::from_fn(|_| BigRat::zero()));
    named.family = Family::E6;
    named
}

/// Self-adjoint instances. For odd order self-adjointness means
/// `adjoint(P) = -P`; the accessory value is solved from that linear
/// condition where the sources do not pin it directly.
pub fn build_self_adjoint(which: Family) -> Result<NamedOperator> {
    let half = rat(1, 2);
    match which {
        Family::SaE2 => {
            let mut n = build_e2(&half, &half, &BigRat::one());
            n.family = Family::SaE2;
            Ok(n)
        }
        Family::SaE3 => {
            let b = ExponentSet::from_i64(&[0, 0, 0, 0, 1, 1]);
            let mut n = build_h3(&b, &rat(-1, 2));
            n.family = Family::SaE3;
            Ok(n)
        }
        Family::SaE4 => {
            let c = ExponentSet::new(vec![half.clone(); 7]);
            let t10 = solve_self_adjoint_accessory(|t| build_h4(&c, t).op, 4)?;
            let mut n = build_h4(&c, &t10);
            n.family = Family::SaE4;
            Ok(n)
        }
        Family::SaE5 => {
            let e = ExponentSet::new(vec![
                rat(3, 2),
                rat(3, 2),
                rat(3, 2),
                rat(3, 2),
                rat(3, 2),
                rat(3, 2),
                BigRat::zero(),
                BigRat::zero(),
            ]);
            let b510 = solve_self_adjoint_accessory(|t| build_h5(&e, t).op, 5)?;
            let mut n = build_h5(&e, &b510);
            n.family = Family::SaE5;
            Ok(n)
        }
        Family::SaE6 => {
            let e = ExponentSet::new(vec![
                rint(1),
                rint(1),
                rint(1),
                rint(1),
                rint(1),
                rint(1),
                half.clone(),
                half.clone(),
                half,
            ]);
            let mut n = build_h6(&e, &rat(-17, 4));
            n.family = Family::SaE6;
            Ok(n)
        }
        other => Err(Error::SymmetryUnavailable(format!(
            "{other} is not a self-adjoint constructor"
        ))),
    }
}

/// Solve `adjoint(H(t)) = (-1)^order H(t)` for the accessory slot `t`; the
/// condition is affine in `t`.
fn solve_self_adjoint_accessory(
    build: impl Fn(&BigRat) -> DiffOp,
    order: usize,
) -> Result<BigRat> {
    let sign = if order % 2 == 0 { rint(1) } else { rint(-1) };
    let residual = |t: &BigRat| {
        let h = build(t);
        &h.adjoint() - &h.scale(&sign)
    };
    let r0 = residual(&BigRat::zero());
    let r1 = residual(&BigRat::one());
    let slope = &r1 - &r0;
    for j in 0..=slope.order0() {
        let s = slope.coeff(j);
        if s.is_zero() {
            continue;
        }
        let tval = -(&r0.coeff(j) / &s).as_constant().ok_or_else(|| {
            Error::SymmetryUnavailable("self-adjoint condition is not scalar-affine".into())
        })?;
        if residual(&tval).is_zero() {
            return Ok(tval);
        }
        return Err(Error::SymmetryUnavailable(
            "self-adjoint condition inconsistent".into(),
        ));
    }
    Err(Error::SymmetryUnavailable(
        "operator is self-adjoint for every accessory value".into(),
    ))
}

// ---------------------------------------------------------------------------
// accessory extraction and oracles

/// The accessory parameter `T10` of an operator in the `H6` shape: the
/// constant term of `B1 = T1 / ((th+s+2)(th+s+1))`. Note the raw `(x, D)`
/// coefficient is `p10 = (s+1)(s+2) T10`.
pub fn extract_t10(op: &DiffOp, s: &BigRat) -> Result<BigRat> {
    let theta = crate::weyl::to_theta_form(op)?;
    let b1 = theta
        .part(1)
        .div_exact(&prod(&[lin(s + &rint(2)), lin(s + &rint(1))]))
        .map_err(|_| Error::RecognitionFailure("H6 theta-block T1".into()))?;
    Ok(b1.coeff(0))
}

/// Rescale an operator so its leading coefficient equals the family head
/// (`x(x-1)` for E2, `x^2(x-1)^2` for H3/H4, `x^3(x-1)^3` for H5/H6). The
/// ratio must be a nonzero constant.
pub fn normalize_to_family_head(family: Family, op: &DiffOp) -> Result<DiffOp> {
    let sq = |k: usize| &UniPoly::x().pow(k) * &UniPoly::from_i64(&[-1, 1]).pow(k);
    let head = match family {
        Family::E2 | Family::SaE2 => sq(1),
        Family::H3 | Family::SaE3 | Family::H4 | Family::SaE4 => sq(2),
        _ => sq(3),
    };
    let ratio = (&crate::ratfunc::RatFunc::from_poly(head) / &op.leading())
        .as_constant()
        .ok_or_else(|| Error::RecognitionFailure(format!("head of {family}")))?;
    Ok(op.scale(&ratio))
}

/// Extract the accessory parameter of a catalog operator given up to a
/// scalar multiple of its family normalization.
pub fn extract_accessory(family: Family, op: &DiffOp) -> Result<BigRat> {
    let op = normalize_to_family_head(family, op)?;
    let theta = crate::weyl::to_theta_form(&op)?;
    match family {
        Family::E2 | Family::SaE2 => Err(Error::SymmetryUnavailable(
            "E2 is rigid; it has no accessory parameter".into(),
        )),
        Family::H3 | Family::SaE3 => Ok(theta.part(0).coeff(0)),
        Family::H4 | Family::SaE4 => Ok(theta.part(1).coeff(0)),
        Family::H5 | Family::SaE5 => {
            // B51 = T1bar / ((th+s+1)(th+s+2)); its constant term
            let t1bar = theta.part(0);
            let s = infinity_block_start(&op)? - rint(1);
            let b51 = t1bar
                .div_exact(&prod(&[lin(&s + &rint(1)), lin(&s + &rint(2))]))
                .map_err(|_| Error::RecognitionFailure("H5 theta-block shape".into()))?;
            Ok(b51.coeff(0))
        }
        Family::H6 | Family::G6 | Family::E6 | Family::SaE6 => {
            let s = infinity_block_start(&op)?;
            extract_t10(&op, &s)
        }
    }
}

/// Start of the `{v, v+1, v+2}` exponent block at infinity, located without
/// root extraction: `gcd(f(rho), f(rho+1), f(rho+2))` is exactly `rho - v`
/// when the remaining exponents are in general position.
pub fn infinity_block_start(op: &DiffOp) -> Result<BigRat> {
    let ind = crate::fuchs::local_exponents_raw(op, crate::weyl::SingPoint::Infinity)?.indicial;
    let g = ind
        .gcd(&ind.shift_var(&rint(1)))
        .gcd(&ind.shift_var(&rint(2)));
    if g.deg0() != 1 {
        return Err(Error::RecognitionFailure(format!(
            "integer-step 3-block at infinity is not unique: gcd {g}"
        )));
    }
    Ok(-g.coeff(0))
}

/// The `(x, D)`-coefficient layout of an `H6`-shaped operator:
///
/// ```text
/// p6 = x^3(x-1)^3, p5 = (p50 + p51 x) x^2 (x-1)^2,
/// p4 = (p40 + p41 x + p42 x^2) x (x-1), p3 = p30 + .. + p33 x^3,
/// p2 = p20 + p21 x + p22 x^2, p1 = p10 + p11 x, p0 constant.
/// ```
#[derive(Clone, Debug)]
pub struct H6Coeffs {
    pub p50: BigRat,
    pub p51: BigRat,
    pub p40: BigRat,
    pub p41: BigRat,
    pub p42: BigRat,
    pub p3: [BigRat; 4],
    pub p2: [BigRat; 3],
    pub p1: [BigRat; 2],
    pub p0: BigRat,
}

impl H6Coeffs {
    pub fn from_op(op: &DiffOp) -> Result<H6Coeffs> {
        if op.order() != Some(6) || !op.has_polynomial_coeffs() {
            return Err(Error::RecognitionFailure("H6 coefficient shape".into()));
        }
        let head = &UniPoly::from_i64(&[0, 0, 0, 1]) * &UniPoly::from_i64(&[-1, 1]).pow(3);
        if op.coeff(6).as_poly() != Some(&head) {
            return Err(Error::RecognitionFailure("H6 head x^3(x-1)^3".into()));
        }
        let xx = |j: usize, div: &UniPoly| -> Result<UniPoly> {
            op.coeff(j)
                .as_poly()
                .unwrap()
                .div_exact(div)
                .map_err(|_| Error::RecognitionFailure(format!("divisibility of p{j}")))
        };
        let q5 = xx(
            5,
            &(&UniPoly::from_i64(&[0, 0, 1]) * &UniPoly::from_i64(&[1, -2, 1])),
        )?;
        let q4 = xx(4, &(&UniPoly::x() * &UniPoly::from_i64(&[-1, 1])))?;
        let p3 = op.coeff(3).as_poly().unwrap().clone();
        let p2 = op.coeff(2).as_poly().unwrap().clone();
        let p1 = op.coeff(1).as_poly().unwrap().clone();
        let p0 = op.coeff(0).as_poly().unwrap().clone();
        if q5.deg0() > 1
            || q4.deg0() > 2
            || p3.deg0() > 3
            || p2.deg0() > 2
            || p1.deg0() > 1
            || !p0.is_constant()
        {
            return Err(Error::RecognitionFailure("H6 degree pattern".into()));
        }
        Ok(H6Coeffs {
            p50: q5.coeff(0),
            p51: q5.coeff(1),
            p40: q4.coeff(0),
            p41: q4.coeff(1),
            p42: q4.coeff(2),
            p3: [p3.coeff(0), p3.coeff(1), p3.coeff(2), p3.coeff(3)],
            p2: [p2.coeff(0), p2.coeff(1), p2.coeff(2)],
            p1: [p1.coeff(0), p1.coeff(1)],
            p0: p0.constant_term(),
        })
    }

    /// Indicial polynomial at infinity, whose roots are the six exponents
    /// there.
    pub fn f_at_infinity(&self, rho: &BigRat) -> BigRat {
        rising(rho, 6) - &self.p51 * rising(rho, 5) + &self.p42 * rising(rho, 4)
            - &self.p3[3] * rising(rho, 3)
            + &self.p2[2] * rising(rho, 2)
            - &self.p1[1] * rho
            + self.p0.clone()
    }

    /// First no-logarithm polynomial at infinity.
    pub fn g(&self, rho: &BigRat) -> BigRat {
        rint(-3) * rising(rho, 6) - (&self.p50 - &(rint(2) * &self.p51)) * rising(rho, 5)
            + (&self.p41 - &self.p42) * rising(rho, 4)
            - &self.p3[2] * rising(rho, 3)
            + &self.p2[1] * rising(rho, 2)
            - &self.p1[0] * rho
    }

    /// Second no-logarithm polynomial at infinity.
    pub fn h(&self, rho: &BigRat) -> BigRat {
        rint(3) * rising(rho, 6) - (rint(-2) * &self.p50 + &self.p51) * rising(rho, 5)
            + (&self.p40 - &self.p41) * rising(rho, 4)
            - &self.p3[1] * rising(rho, 3)
            + &self.p2[0] * rising(rho, 2)
    }
}

/// The no-logarithm residuals `[g(s), g(s+1), h(s)]` of an `H6`-shaped
/// operator, computed from the raw `(x, D)`-coefficients; all three vanish
/// exactly for a correctly built `H6`.
pub fn nolog_residuals_h6(op: &DiffOp, s: &BigRat) -> Result<[BigRat; 3]> {
    let c = H6Coeffs::from_op(op)?;
    Ok([c.g(s), c.g(&(s + &rint(1))), c.h(s)])
}

/// Independent determination of the accessory-linked coefficients: given the
/// exponent-determined coefficients of an `H6`-shaped operator and `T10`,
/// solve `g(s) = g(s+1) = h(s) = 0` for `{p20, p21, p32}` given the raw
/// `p10` slot, and return `(p10, p20, p21, p32)`.
pub fn solve_accessory_coeffs(
    coeffs: &H6Coeffs,
    s: &BigRat,
    p10: &BigRat,
) -> (BigRat, BigRat, BigRat, BigRat) {
    let g_known = |rho: &BigRat| {
        rint(-3) * rising(rho, 6) - (&coeffs.p50 - &(rint(2) * &coeffs.p51)) * rising(rho, 5)
            + (&coeffs.p41 - &coeffs.p42) * rising(rho, 4)
    };
    let r3 = |rho: &BigRat| rising(rho, 3);
    let r2 = |rho: &BigRat| rising(rho, 2);
    let s1 = s + &rint(1);
    // -p32 r3 + p21 r2 = -(g_known - p10 rho) at rho = s and s+1
    let (a11, a12, b1) = (-r3(s), r2(s), -(g_known(s) - p10 * s));
    let (a21, a22, b2) = (-r3(&s1), r2(&s1), -(g_known(&s1) - p10 * &s1));
    let det = &a11 * &a22 - &a12 * &a21;
    let p32 = (&b1 * &a22 - &a12 * &b2) / &det;
    let p21 = (&a11 * &b2 - &b1 * &a21) / &det;
    let h_known = rint(3) * rising(s, 6)
        - (rint(-2) * &coeffs.p50 + &coeffs.p51) * rising(s, 5)
        + (&coeffs.p40 - &coeffs.p41) * rising(s, 4)
        - &coeffs.p3[1] * rising(s, 3);
    let p20 = -h_known / rising(s, 2);
    (p10.clone(), p20, p21, p32)
}

// ---------------------------------------------------------------------------
// genericity

/// Paper-style genericity: pairwise differences within each exponent list
/// non-integral where the family expects it, plus the family's reducibility
/// quantities non-integral. Violations are warnings, not errors.
pub fn genericity_violations(family: Family, e: &ExponentSet) -> Vec<String> {
    let mut out = Vec::new();
    let mut noninteger = |v: &BigRat, what: &str| {
        if is_integer(v) {
            out.push(format!("{what} = {v} is an integer"));
        }
    };
    match family {
        Family::H6 | Family::G6 | Family::E6 => {
            let s = e.s();
            noninteger(&s, "s");
            for i in 1..=6 {
                noninteger(&(e.at(i) + &s), &format!("e{i}+s"));
            }
            for i in 7..=9 {
                noninteger(&e.at(i), &format!("e{i}"));
            }
            for i in 1..=9 {
                for j in (i + 1)..=9 {
                    noninteger(&(e.at(i) - e.at(j)), &format!("e{i}-e{j}"));
                }
            }
        }
        Family::H5 => {
            let r = e.r();
            noninteger(&r, "r");
            for i in 1..=6 {
                noninteger(&(e.at(i) - &r), &format!("e{i}-r"));
            }
            for i in 1..=8 {
                for j in (i + 1)..=8 {
                    noninteger(&(e.at(i) - e.at(j)), &format!("e{i}-e{j}"));
                }
            }
        }
        Family::H4 => {
            let c8 = rint(4) - e.e.iter().fold(BigRat::zero(), |a, b| a + b);
            for i in 5..=7 {
                noninteger(&e.at(i), &format!("c{i}"));
            }
            noninteger(&c8, "c8");
        }
        Family::H3 => {
            for i in 1..=6 {
                for j in (i + 1)..=6 {
                    noninteger(&(e.at(i) - e.at(j)), &format!("b{i}-b{j}"));
                }
            }
        }
        Family::E2 => {
            let (a, b, c) = (e.at(1), e.at(2), e.at(3));
            noninteger(&a, "a");
            noninteger(&b, "b");
            noninteger(&(&c - &a), "c-a");
            noninteger(&(&c - &b), "c-b");
        }
        _ => {}
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuchs::{no_log_check, riemann_scheme, scheme_matches};
    use crate::ratfunc::RatFunc;
    use crate::weyl::SingPoint;

    pub(crate) fn h6_generic() -> (ExponentSet, BigRat) {
        let e = ExponentSet::new(vec![
            rat(1, 7),
            rat(2, 7),
            rat(4, 7),
            rat(1, 5),
            rat(2, 5),
            rat(3, 5),
            rat(1, 11),
            rat(2, 11),
            rat(6, 11),
        ]);
        (e, rat(3, 13))
    }

    #[test]
    fn e2_x_d_form_matches() {
        // (th+a)(th+b)-(th+c)D = x(x-1)D^2 + ((a+b+1)x - c)D + ab
        let (a, b, c) = (rat(1, 3), rat(2, 5), rat(3, 7));
        let n = build_e2(&a, &b, &c);
        let expect = &(&DiffOp::from_poly(UniPoly::from_i64(&[0, -1, 1])) * &DiffOp::d_power(2))
            + &(&(&DiffOp::from_poly(UniPoly::new(vec![-c.clone(), &(&a + &b) + &rint(1)]))
                * &DiffOp::d())
                + &DiffOp::constant(&a * &b));
        assert_eq!(n.op, expect);
        // symmetric in a, b
        assert_eq!(build_e2(&b, &a, &c).op, n.op);
        // scheme is computed correctly
        assert_eq!(riemann_scheme(&n.op).unwrap(), n.scheme);
        assert!(scheme_matches(&n.op, &n.scheme).unwrap());
    }

    #[test]
    fn sa_e2_display() {
        // x(x-1)D^2 + (2x-1)D + 1/4
        let n = build_self_adjoint(Family::SaE2).unwrap();
        let expect = crate::parse::parse_op("x*(x-1)*D^2 + (2*x-1)*D + 1/4").unwrap();
        assert_eq!(n.op, expect);
        assert_eq!(n.op.adjoint(), n.op);
    }

    #[test]
    fn h6_head_and_scheme() {
        let (e, t10) = h6_generic();
        let n = build_h6(&e, &t10);
        assert_eq!(n.op.order(), Some(6));
        let head = &UniPoly::from_i64(&[0, 0, 0, 1]) * &UniPoly::from_i64(&[-1, 1]).pow(3);
        assert_eq!(n.op.coeff(6).as_poly(), Some(&head));
        assert!(scheme_matches(&n.op, &n.scheme).unwrap());
        assert!(n.scheme.fuchs_relation_holds());
        // accessory round-trips; the raw coefficient is p10 = (s+1)(s+2) T10
        let s = e.s();
        assert_eq!(extract_t10(&n.op, &s).unwrap(), t10);
        assert_eq!(extract_accessory(Family::H6, &n.op).unwrap(), t10);
        let p10 = n.op.coeff(1).num().coeff(0);
        assert_eq!(p10, (&s + &rint(1)) * (&s + &rint(2)) * &t10);
    }

    #[test]
    fn h6_no_log_at_all_points() {
        let (e, t10) = h6_generic();
        let n = build_h6(&e, &t10);
        let block = vec![rint(0), rint(1), rint(2)];
        assert!(no_log_check(&n.op, SingPoint::Zero, &block).unwrap());
        assert!(no_log_check(&n.op, SingPoint::One, &block).unwrap());
        let s = e.s();
        let sblock = vec![s.clone(), &s + &rint(1), &s + &rint(2)];
        assert!(no_log_check(&n.op, SingPoint::Infinity, &sblock).unwrap());
    }

    #[test]
    fn h6_nolog_equations_vanish() {
        let (e, t10) = h6_generic();
        let n = build_h6(&e, &t10);
        let res = nolog_residuals_h6(&n.op, &e.s()).unwrap();
        assert_eq!(res, [rint(0), rint(0), rint(0)]);
        // and f has exactly the advertised roots at infinity
        let c = H6Coeffs::from_op(&n.op).unwrap();
        let s = e.s();
        for root in [
            s.clone(),
            &s + &rint(1),
            &s + &rint(2),
            e.at(7),
            e.at(8),
            e.at(9),
        ] {
            assert!(c.f_at_infinity(&root).is_zero(), "f({root}) != 0");
        }
        // perturbing an accessory-linked coefficient breaks g(s) = 0 and the
        // generic no-log check sees it
        let mut coeffs: Vec<RatFunc> = n.op.coeffs().to_vec();
        coeffs[2] = &coeffs[2] + &RatFunc::from_poly(UniPoly::from_i64(&[0, 1]));
        let bad = DiffOp::new(coeffs);
        let resbad = nolog_residuals_h6(&bad, &s).unwrap();
        assert!(!resbad.iter().all(|r| r.is_zero()));
        let sblock = vec![s.clone(), &s + &rint(1), &s + &rint(2)];
        assert!(!no_log_check(&bad, SingPoint::Infinity, &sblock).unwrap());
    }

    #[test]
    fn h6_accessory_affects_only_four_coefficients() {
        let (e, t10) = h6_generic();
        let a = build_h6(&e, &t10).op;
        let b = build_h6(&e, &(&t10 + &rat(5, 3))).op;
        let diff = &a - &b;
        // free slots are {p10, p20, p21, p32}; p31 is linked to p32 through
        // the exponent-determined sum p31 + p32, so the support is
        // x^0 D^1, {x^0, x^1} D^2, {x^1, x^2} D^3 with the D^3 changes equal
        // and opposite
        for (j, c) in diff.coeffs().iter().enumerate() {
            match j {
                1 => assert!(c.as_poly().unwrap().deg0() == 0),
                2 => assert!(c.as_poly().unwrap().deg0() <= 1),
                3 => {
                    let p = c.as_poly().unwrap();
                    assert!(p.coeff(0).is_zero() && p.coeff(3).is_zero());
                    assert_eq!(p.coeff(1), -p.coeff(2), "p31 + p32 must stay fixed");
                }
                _ => assert!(c.is_zero(), "unexpected change in D^{j}"),
            }
        }
        // scheme unchanged: both match the same claimed scheme
        let scheme = build_h6(&e, &t10).scheme;
        assert!(scheme_matches(&a, &scheme).unwrap());
        assert!(scheme_matches(&b, &scheme).unwrap());
    }

    #[test]
    fn h6_accessory_coeffs_from_nolog_equations() {
        let (e, t10) = h6_generic();
        let n = build_h6(&e, &t10);
        let c = H6Coeffs::from_op(&n.op).unwrap();
        // feed the raw p10 slot; the no-log equations then pin the rest
        let s = e.s();
        let p10_in = (&s + &rint(1)) * (&s + &rint(2)) * &t10;
        let (p10, p20, p21, p32) = solve_accessory_coeffs(&c, &s, &p10_in);
        assert_eq!(p10, c.p1[0]);
        assert_eq!(p20, c.p2[0]);
        assert_eq!(p21, c.p2[1]);
        assert_eq!(p32, c.p3[2]);
    }

    #[test]
    fn h6_t_identities() {
        // the identities tying T11 + T21 and T10 + T20 to the exponents
        let (e, t10) = h6_generic();
        let (s11, s13) = (e.s1(1), e.s1(3));
        let (s21, s23) = (e.s2(1), e.s2(3));
        assert_eq!(t11(&e) + t21(&e), &s21 - &s23 - rint(6) * &s11 + rint(27));
        let s = e.s();
        // the x=1 exponent condition; the scheme computation pins T11 with
        // its s22 term, so the condition carries the matching -s22
        let lhs = t11(&e) + rint(3) * &s * &s
            - (rint(-2) * &s11 - rint(2) * &s13 + rint(12)) * &s
            - rint(5) * &s11
            + &s13
            + &s21
            - e.s2(2)
            + rint(2) * &s23
            + rint(20);
        assert!(lhs.is_zero());
        let lhs2 = &t10
            + &t20(&e, &t10)
            + &s * &s * &s
            + (&s11 + &s13 - rint(6)) * &s * &s
            - (-t11(&e) + rint(5) * &s11 - &s13 - &s21 - rint(2) * &s23 - rint(20)) * &s
            + e.s3(2)
            + e.s3(3)
            + rint(9) * &s11
            - rint(3) * &s21
            + e.s3(1)
            - rint(27);
        assert!(lhs2.is_zero());
    }

    #[test]
    fn h6_adjoint_parameter_map() {
        let (e, t10) = h6_generic();
        let n = build_h6(&e, &t10);
        let s12 = e.s1(2);
        let s = e.s();
        let t10p = rint(6) * &s * &s + (rint(4) * &s12 - rint(18)) * &s
            - rint(6) * &s12
            - rint(2) * e.s2(1)
            + rint(2) * e.s2(2)
            - rint(4) * e.s2(3)
            + rint(8)
            - &t10;
        let eadj = ExponentSet::new(
            (1..=9)
                .map(|i| {
                    if i <= 6 {
                        rint(2) - e.at(i)
                    } else {
                        rint(1) - e.at(i)
                    }
                })
                .collect(),
        );
        let adj = build_h6(&eadj, &t10p);
        assert_eq!(n.op.adjoint(), adj.op);
    }

    #[test]
    fn h5_division_matches_closed_form() {
        let e = ExponentSet::new(vec![
            rat(1, 7),
            rat(2, 7),
            rat(4, 7),
            rat(1, 5),
            rat(2, 5),
            rat(3, 5),
            rat(1, 11),
            rat(2, 11),
        ]);
        let b510 = rat(5, 13);
        let n = build_h5(&e, &b510);
        assert_eq!(n.op, h5_closed_form(&e, &b510));
        assert!(scheme_matches(&n.op, &n.scheme).unwrap());
        assert_eq!(extract_accessory(Family::H5, &n.op).unwrap(), b510);
        // H6(e9=0) = H5 o D exactly
        let mut e9 = e.e.clone();
        e9.push(rint(0));
        let h6 = build_h6(&ExponentSet::new(e9), &b510);
        assert_eq!(&n.op * &DiffOp::d(), h6.op);
    }

    #[test]
    fn h4_and_h3_schemes() {
        let c = ExponentSet::new(vec![
            rat(1, 7),
            rat(2, 7),
            rat(1, 5),
            rat(2, 5),
            rat(1, 11),
            rat(2, 11),
            rat(3, 11),
        ]);
        let n4 = build_h4(&c, &rat(1, 3));
        assert!(scheme_matches(&n4.op, &n4.scheme).unwrap());
        assert!(n4.scheme.fuchs_relation_holds());
        assert_eq!(extract_accessory(Family::H4, &n4.op).unwrap(), rat(1, 3));

        let b = ExponentSet::new(vec![
            rat(1, 7),
            rat(2, 7),
            rat(1, 5),
            rat(2, 5),
            rat(1, 11),
            rat(2, 11),
        ]);
        let n3 = build_h3(&b, &rat(-2, 3));
        assert!(scheme_matches(&n3.op, &n3.scheme).unwrap());
        assert!(n3.scheme.fuchs_relation_holds());
        assert_eq!(extract_accessory(Family::H3, &n3.op).unwrap(), rat(-2, 3));
        // H3 head is x^2(x-1)^2 D^3
        let head = &UniPoly::from_i64(&[0, 0, 1]) * &UniPoly::from_i64(&[1, -2, 1]);
        assert_eq!(n3.op.coeff(3).as_poly(), Some(&head));
    }

    #[test]
    fn h3_adjoint_parameter_map() {
        let b = ExponentSet::new(vec![
            rat(1, 7),
            rat(2, 7),
            rat(1, 5),
            rat(2, 5),
            rat(1, 11),
            rat(2, 11),
        ]);
        let a00 = rat(-2, 3);
        let n = build_h3(&b, &a00);
        let badj = ExponentSet::new(vec![
            -b.at(1),
            -b.at(2),
            -b.at(3),
            -b.at(4),
            rint(2) - b.at(5),
            rint(2) - b.at(6),
        ]);
        // note the +b3 b4 term: the S0-block of H3 treats the blocks at 0
        // and 1 asymmetrically, and the adjoint accessory inherits that
        let a00p = -b.at(1) * b.at(2) + b.at(3) * b.at(4)
            + (b.at(1) + b.at(2) + b.at(3) + b.at(4)) * (b.at(5) + b.at(6) - rint(2))
            + (b.at(5) - rint(1)) * (b.at(5) - rint(1))
            + (b.at(6) - rint(1)) * (b.at(6) - rint(1))
            + (b.at(5) - rint(1)) * (b.at(6) - rint(1))
            - rint(1)
            - &a00;
        let adj = build_h3(&badj, &a00p);
        // odd order: adjoint flips the sign of the head
        assert_eq!(n.op.adjoint(), -&adj.op);
    }

    #[test]
    fn sa_e3_display() {
        let n = build_self_adjoint(Family::SaE3).unwrap();
        let expect = crate::parse::parse_op(
            "x^2*(x-1)^2*D^3 + 3*x*(x-1)*(2*x-1)*D^2 + (7*x^2-7*x+1)*D + x - 1/2",
        )
        .unwrap();
        assert_eq!(n.op, expect);
        assert_eq!(n.op.adjoint(), -&n.op);
    }

    #[test]
    fn sa_e4_display() {
        let n = build_self_adjoint(Family::SaE4).unwrap();
        let expect = crate::parse::parse_op(
            "x^2*(x-1)^2*D^4 + 4*x*(x-1)*(2*x-1)*D^3 + (29/2*x^2 - 29/2*x + 9/4)*D^2 + (5*x - 5/2)*D + 1/16",
        )
        .unwrap();
        assert_eq!(n.op, expect);
        assert_eq!(n.op.adjoint(), n.op);
    }

    #[test]
    fn sa_e5_display() {
        let n = build_self_adjoint(Family::SaE5).unwrap();
        let expect = crate::parse::parse_op(
            "x^3*(x-1)^3*D^5 + (15*x^2*(2*x-1)*(x-1)^2)/2*D^4 \
             + x*(x-1)*(256*x^2-256*x+49)/4*D^3 \
             + 3*(2*x-1)*(112*x^2-112*x+9)/8*D^2 + (24*x^2 - 24*x + 17/4)*D",
        )
        .unwrap();
        assert_eq!(n.op, expect);
        assert_eq!(n.op.adjoint(), -&n.op);
    }

    #[test]
    fn sa_e6_display() {
        let n = build_self_adjoint(Family::SaE6).unwrap();
        assert_eq!(n.accessory, Some(rat(-17, 4)));
        let expect = crate::parse::parse_op(
            "x^3*(x-1)^3*D^6 + 9*x^2*(x-1)^2*(2*x-1)*D^5 \
             + (391*x^2 - 391*x + 76)*(x-1)*x/4*D^4 \
             + (2*x-1)*(91*x^2 - 91*x + 8)*D^3 \
             + (1539/16*x^2 - 1539/16*x + 18)*D^2 + (51*x/8 - 51/16)*D - 3/64",
        )
        .unwrap();
        assert_eq!(n.op, expect);
        assert_eq!(n.op.adjoint(), n.op);
    }

    #[test]
    fn g6_definitional_identity() {
        let (e, _) = h6_generic();
        let a: [BigRat; 7] = [
            rat(1, 2),
            rat(-1, 3),
            rat(2, 5),
            rat(0, 1),
            rat(1, 7),
            rat(-2, 7),
            rat(3, 4),
        ];
        let g = build_g6(&e, &a);
        let t10 = g.assignment.resolve(&e);
        let h = build_h6(&e, &t10);
        assert!((&g.op - &h.op).is_zero());
        // a = 0 gives T10 = S10 exactly
        let e6 = build_e6(&e);
        assert_eq!(e6.accessory, Some(s10(&e)));
    }

    #[test]
    fn genericity_flags_integers() {
        let (e, _) = h6_generic();
        assert!(genericity_violations(Family::H6, &e).is_empty());
        let mut bad = e.clone();
        bad.e[8] = rint(2);
        assert!(!genericity_violations(Family::H6, &bad).is_empty());
    }
}
