//! Shift relations, S-values and reducibility certificates.
//!
//! A shift triple `(P, Q, alpha)` for a family `H` with accessory slot `u`
//! satisfies the operator identity
//!
//! ```text
//! H(sh(e), u - alpha) o P = Q o H(e, u)     for all u,
//! ```
//!
//! so `P` maps solutions of `H(e, u)` to solutions of the shifted equation.
//! The solver treats the accessory as a formal linear slot `H = H0 + u H1`
//! and the product `alpha * P` as an independent unknown operator, which
//! keeps the whole computation linear over Q; the proportionality
//! `S = alpha P` is checked after the nullspace is computed.

use crate::catalog::{
    build_e2, build_h3, build_h4, build_h5, build_h6, h6_b1_b2, lin, prod, s10, ExponentSet,
    Family,
};
use crate::linalg::QMatrix;
use crate::poly::UniPoly;
use crate::rat::{is_integer, rint, BigRat};
use crate::ratfunc::RatFunc;
use crate::weyl::{DiffOp, ThetaForm};
use crate::{Error, Result};
use num_traits::{One, Zero};

/// Integer offsets applied to the exponent labels of one family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftDescriptor {
    pub family: Family,
    pub name: &'static str,
    pub offsets: Vec<i64>,
}

impl ShiftDescriptor {
    pub fn apply(&self, e: &ExponentSet) -> ExponentSet {
        e.shifted(&self.offsets)
    }

    pub fn inverse(&self) -> ShiftDescriptor {
        ShiftDescriptor {
            family: self.family,
            name: self.name,
            offsets: self.offsets.iter().map(|o| -o).collect(),
        }
    }

    /// The descending block shifts of H6 from the shift-operator theorem.
    pub fn h6_sh1() -> Self {
        ShiftDescriptor {
            family: Family::H6,
            name: "sh1",
            offsets: vec![-1, -1, -1, 0, 0, 0, 0, 0, 0],
        }
    }

    pub fn h6_sh2() -> Self {
        ShiftDescriptor {
            family: Family::H6,
            name: "sh2",
            offsets: vec![0, 0, 0, -1, -1, -1, 0, 0, 0],
        }
    }

    pub fn h6_sh3() -> Self {
        ShiftDescriptor {
            family: Family::H6,
            name: "sh3",
            offsets: vec![-1, -1, -1, -1, -1, -1, 1, 1, 1],
        }
    }

    pub fn h5_m0() -> Self {
        ShiftDescriptor {
            family: Family::H5,
            name: "-0",
            offsets: vec![-1, -1, -1, 0, 0, 0, 0, 0],
        }
    }

    pub fn h5_0m() -> Self {
        ShiftDescriptor {
            family: Family::H5,
            name: "0-",
            offsets: vec![0, 0, 0, -1, -1, -1, 0, 0],
        }
    }

    pub fn e2_a(up: bool) -> Self {
        ShiftDescriptor {
            family: Family::E2,
            name: if up { "a+" } else { "a-" },
            offsets: vec![if up { 1 } else { -1 }, 0, 0],
        }
    }

    pub fn e2_b(up: bool) -> Self {
        ShiftDescriptor {
            family: Family::E2,
            name: if up { "b+" } else { "b-" },
            offsets: vec![0, if up { 1 } else { -1 }, 0],
        }
    }

    pub fn e2_c(up: bool) -> Self {
        ShiftDescriptor {
            family: Family::E2,
            name: if up { "c+" } else { "c-" },
            offsets: vec![0, 0, if up { 1 } else { -1 }],
        }
    }
}

/// A solved shift relation.
#[derive(Clone, Debug)]
pub struct ShiftTriple {
    pub p: DiffOp,
    pub q: DiffOp,
    pub alpha: BigRat,
    pub descriptor: ShiftDescriptor,
}

/// An S-value: the constant to which the composition of a shift operator
/// and its inverse reduces modulo the operator.
#[derive(Clone, Debug)]
pub struct SValue {
    pub value: BigRat,
    pub shift: ShiftDescriptor,
}

/// Build a family member with a given accessory value (ignored for E2).
pub fn build_family(family: Family, e: &ExponentSet, accessory: &BigRat) -> DiffOp {
    match family {
        Family::E2 => build_e2(&e.at(1), &e.at(2), &e.at(3)).op,
        Family::H3 => build_h3(e, accessory).op,
        Family::H4 => build_h4(e, accessory).op,
        Family::H5 => build_h5(e, accessory).op,
        Family::H6 => build_h6(e, accessory).op,
        other => panic!("build_family: unsupported family {other}"),
    }
}

/// The linear accessory split `H(e, u) = H0(e) + u H1(e)` (H1 = 0 for E2).
pub fn family_linear_split(family: Family, e: &ExponentSet) -> (DiffOp, DiffOp) {
    let h0 = build_family(family, e, &BigRat::zero());
    let h1 = &build_family(family, e, &BigRat::one()) - &h0;
    (h0, h1)
}

/// Per-derivative degree bounds for a solver unknown operator.
#[derive(Clone, Debug)]
pub struct Ansatz {
    pub deg_p: Vec<usize>,
    pub deg_q: Vec<usize>,
}

impl Ansatz {
    /// Uniform bounds: order `ord`, every coefficient of degree `<= deg`.
    pub fn uniform(ord: usize, deg: usize) -> Self {
        Ansatz {
            deg_p: vec![deg; ord + 1],
            deg_q: vec![deg; ord + 1],
        }
    }
}

struct UnknownLayout {
    // (d-power, x-degree-bound) per operator
    slots: Vec<(usize, usize)>,
}

impl UnknownLayout {
    fn new(degs: &[usize]) -> Self {
        UnknownLayout {
            slots: degs.iter().copied().enumerate().collect(),
        }
    }

    fn count(&self) -> usize {
        self.slots.iter().map(|(_, d)| d + 1).sum()
    }

    fn monomials(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.count());
        for &(j, d) in &self.slots {
            for i in 0..=d {
                out.push((j, i));
            }
        }
        out
    }

    fn assemble(&self, coeffs: &[BigRat]) -> DiffOp {
        let mut polys: Vec<UniPoly> = Vec::new();
        let mut idx = 0;
        for &(_, d) in &self.slots {
            let v = coeffs[idx..idx + d + 1].to_vec();
            polys.push(UniPoly::new(v));
            idx += d + 1;
        }
        DiffOp::new(polys.into_iter().map(RatFunc::from_poly).collect())
    }
}

/// Row collector mapping operators to dense coefficient vectors.
struct ResidualSpace {
    max_order: usize,
    max_deg: usize,
}

impl ResidualSpace {
    fn dims(&self) -> usize {
        (self.max_order + 1) * (self.max_deg + 1)
    }

    fn flatten(&self, op: &DiffOp) -> Vec<BigRat> {
        let mut v = vec![BigRat::zero(); self.dims()];
        for (j, c) in op.coeffs().iter().enumerate() {
            let p = c.as_poly().expect("polynomial residual");
            for (i, a) in p.coeffs().iter().enumerate() {
                v[j * (self.max_deg + 1) + i] = a.clone();
            }
        }
        v
    }
}

/// Solve the shift relation for `(P, Q, alpha)` with the given ansatz.
///
/// Unknowns are the polynomial coefficients of `P`, `Q` and `S := alpha P`;
/// the identity in the formal accessory `u` splits into the `u`-linear part
/// `H1' P - Q H1 = 0` and the constant part `H0' P - H1' S - Q H0 = 0`.
pub fn solve_shift_relation(
    family: Family,
    e: &ExponentSet,
    sh: &ShiftDescriptor,
    ansatz: &Ansatz,
) -> Result<ShiftTriple> {
    let eshift = sh.apply(e);
    let (h0, h1) = family_linear_split(family, e);
    let (h0s, h1s) = family_linear_split(family, &eshift);
    let has_accessory = !h1.is_zero();

    let p_layout = UnknownLayout::new(&ansatz.deg_p);
    let q_layout = UnknownLayout::new(&ansatz.deg_q);
    let s_layout = UnknownLayout::new(&ansatz.deg_p);
    let np = p_layout.count();
    let nq = q_layout.count();
    let ns = if has_accessory { s_layout.count() } else { 0 };

    let max_order = h0.order0() + p_layout.slots.len();
    let max_deg = 2 + ansatz
        .deg_p
        .iter()
        .chain(ansatz.deg_q.iter())
        .copied()
        .max()
        .unwrap_or(0)
        + [&h0, &h1, &h0s, &h1s]
            .iter()
            .flat_map(|h| h.coeffs().iter().map(|c| c.num().deg0()))
            .max()
            .unwrap_or(0);
    let space = ResidualSpace { max_order, max_deg };

    // columns: P coefficients, then Q, then S
    let ncols = np + nq + ns;
    let mut rows_by_eq: Vec<Vec<Vec<BigRat>>> = vec![vec![Vec::new(); ncols]; 2];

    let mono = |j: usize, i: usize| -> DiffOp {
        let mut v = vec![RatFunc::zero(); j + 1];
        v[j] = RatFunc::from_poly(UniPoly::monomial(BigRat::one(), i));
        DiffOp::new(v)
    };

    for (col, (j, i)) in p_layout.monomials().iter().enumerate() {
        let m = mono(*j, *i);
        rows_by_eq[0][col] = space.flatten(&(&h1s * &m)); // u-part from H1' P
        rows_by_eq[1][col] = space.flatten(&(&h0s * &m)); // constant part
    }
    for (col, (j, i)) in q_layout.monomials().iter().enumerate() {
        let m = mono(*j, *i);
        rows_by_eq[0][np + col] = space.flatten(&(-&(&m * &h1)));
        rows_by_eq[1][np + col] = space.flatten(&(-&(&m * &h0)));
    }
    if has_accessory {
        for (col, (j, i)) in s_layout.monomials().iter().enumerate() {
            let m = mono(*j, *i);
            rows_by_eq[0][np + nq + col] = vec![BigRat::zero(); space.dims()];
            rows_by_eq[1][np + nq + col] = space.flatten(&(-&(&h1s * &m)));
        }
    }

    // assemble the matrix: equations are the residual coordinates of both
    // u-parts (only the constant part when there is no accessory)
    let eqs: &[usize] = if has_accessory { &[0, 1] } else { &[1] };
    let mut matrix_rows: Vec<Vec<BigRat>> = Vec::new();
    for &eq in eqs {
        for r in 0..space.dims() {
            let mut row = Vec::with_capacity(ncols);
            let mut nonzero = false;
            for col in 0..ncols {
                let v = rows_by_eq[eq][col]
                    .get(r)
                    .cloned()
                    .unwrap_or_else(BigRat::zero);
                nonzero |= !v.is_zero();
                row.push(v);
            }
            if nonzero {
                matrix_rows.push(row);
            }
        }
    }
    let basis = QMatrix::from_rows(matrix_rows).nullspace();
    if basis.is_empty() {
        return Err(Error::NoSolution);
    }
    if basis.len() > 1 {
        return Err(Error::NonUnique(basis.len()));
    }
    triple_from_vector(&basis[0], &p_layout, &q_layout, np, nq, has_accessory, sh)
}

fn triple_from_vector(
    v: &[BigRat],
    p_layout: &UnknownLayout,
    q_layout: &UnknownLayout,
    np: usize,
    nq: usize,
    has_accessory: bool,
    sh: &ShiftDescriptor,
) -> Result<ShiftTriple> {
    let p = p_layout.assemble(&v[..np]);
    let q = q_layout.assemble(&v[np..np + nq]);
    if p.is_zero() || q.is_zero() {
        return Err(Error::NoSolution);
    }
    let alpha = if has_accessory {
        let s = p_layout.assemble(&v[np + nq..]);
        if s.is_zero() {
            BigRat::zero()
        } else {
            s.eq_up_to_scalar(&p).ok_or_else(|| {
                Error::NoSolution
            })?
        }
    } else {
        BigRat::zero()
    };
    // normalize: leading scalar of the leading coefficient of P equals 1
    let scale = BigRat::one() / p.leading().num().leading();
    Ok(ShiftTriple {
        p: p.scale(&scale),
        q: q.scale(&scale),
        alpha,
        descriptor: sh.clone(),
    })
}

/// Check a shift triple exactly: `H(sh(e), u - alpha) o P - Q o H(e, u) = 0`
/// as an identity in the formal slot `u` (checked at u = 0 and u = 1).
pub fn verify_triple(family: Family, e: &ExponentSet, t: &ShiftTriple) -> bool {
    let eshift = t.descriptor.apply(e);
    for u in [BigRat::zero(), BigRat::one()] {
        let lhs = &build_family(family, &eshift, &(&u - &t.alpha)) * &t.p;
        let rhs = &t.q * &build_family(family, e, &u);
        if lhs != rhs {
            return false;
        }
    }
    true
}

/// Given a known shift operator `P`, complete it to a triple by solving the
/// (linear) system for `Q` and the shifted accessory value: with
/// `H' = H'0 + v H'1`, solve `H'0 P + v H'1 P - Q (H0 + u H1) = 0` for
/// `(v, Q)` at the concrete accessory `u` of the source. Returns `(Q, alpha
/// = u - v)`.
pub fn complete_triple(
    family: Family,
    e: &ExponentSet,
    u: &BigRat,
    sh: &ShiftDescriptor,
    p: &DiffOp,
) -> Result<(DiffOp, BigRat)> {
    let eshift = sh.apply(e);
    let (h0s, h1s) = family_linear_split(family, &eshift);
    let h = build_family(family, e, u);
    let a = &h0s * p;
    let b = &h1s * p;
    // Q = (a + v b) / H exactly; remainder condition fixes v
    // divide a and b separately: a = qa H + ra, b = qb H + rb; need ra + v rb = 0
    let (qa, ra) = a.right_divmod(&h)?;
    let (qb, rb) = b.right_divmod(&h)?;
    let v = if rb.is_zero() {
        if !ra.is_zero() {
            return Err(Error::NoSolution);
        }
        BigRat::zero()
    } else {
        (-&ra)
            .eq_up_to_scalar(&rb)
            .ok_or(Error::NoSolution)?
    };
    let q = &qa + &qb.scale(&v);
    Ok((q, u - &v))
}

// ---------------------------------------------------------------------------
// printed shift operators

/// Theorem-level shift operators of H6 for the descending generator shifts.
pub fn h6_triple(sh: &ShiftDescriptor, e: &ExponentSet) -> ShiftTriple {
    let s = e.s();
    let (s11, s12, s13) = (e.s1(1), e.s1(2), e.s1(3));
    let (s21, s22, s23) = (e.s2(1), e.s2(2), e.s2(3));
    let xm1 = UniPoly::from_i64(&[-1, 1]);
    match sh.name {
        "sh1" => ShiftTriple {
            p: &DiffOp::from_poly(xm1.clone()) * &DiffOp::d() + DiffOp::constant(s.clone()),
            q: &DiffOp::from_poly(xm1) * &DiffOp::d() + DiffOp::constant(&s + &rint(3)),
            alpha: &s13 + &s23 + rint(1),
            descriptor: sh.clone(),
        },
        "sh2" => ShiftTriple {
            p: DiffOp::theta() + DiffOp::constant(s.clone()),
            q: DiffOp::theta() + DiffOp::constant(&s + &rint(3)),
            alpha: BigRat::zero(),
            descriptor: sh.clone(),
        },
        "sh3" => ShiftTriple {
            p: DiffOp::d(),
            q: DiffOp::d(),
            alpha: rint(20) - &s11 * &s11 / rint(3) - rint(2) * &s11 * &s13 / rint(3)
                + &s12 * &s12 / rint(3)
                - &s13 * &s13 / rint(3)
                - rint(2) * &s11
                + rint(7) * &s13
                + &s21
                - &s22
                + rint(2) * &s23,
            descriptor: sh.clone(),
        },
        other => panic!("h6_triple: unknown generator {other}"),
    }
}

/// Descending H5 shift triples (derived from the H6 ones at `e9 = 0`).
pub fn h5_triple(sh: &ShiftDescriptor, e: &ExponentSet) -> ShiftTriple {
    let r = e.r();
    let xm1 = UniPoly::from_i64(&[-1, 1]);
    let alpha_m0 = (e.at(7) + rint(1)) * (e.at(8) + rint(1));
    match sh.name {
        "-0" => ShiftTriple {
            p: &DiffOp::from_poly(xm1.clone()) * &DiffOp::d() + DiffOp::constant(rint(1) - &r),
            q: &DiffOp::from_poly(xm1) * &DiffOp::d() + DiffOp::constant(rint(3) - &r),
            alpha: alpha_m0,
            descriptor: sh.clone(),
        },
        "0-" => ShiftTriple {
            p: DiffOp::theta() + DiffOp::constant(rint(1) - &r),
            q: DiffOp::theta() + DiffOp::constant(rint(3) - &r),
            alpha: BigRat::zero(),
            descriptor: sh.clone(),
        },
        other => panic!("h5_triple: unknown generator {other}"),
    }
}

/// The printed shift-operator pairs of the Gauss operator.
pub fn e2_pair(sh: &ShiftDescriptor, e: &ExponentSet) -> (DiffOp, DiffOp) {
    let (a, b, c) = (e.at(1), e.at(2), e.at(3));
    let d = DiffOp::d;
    let th = DiffOp::theta;
    let xx1 = || DiffOp::from_poly(&UniPoly::x() * &UniPoly::from_i64(&[-1, 1]));
    match sh.name {
        // P_{a+} = xD + a, Q_{a+} = xD + a + 1
        "a+" => (
            th() + DiffOp::constant(a.clone()),
            th() + DiffOp::constant(&a + &rint(1)),
        ),
        "b+" => (
            th() + DiffOp::constant(b.clone()),
            th() + DiffOp::constant(&b + &rint(1)),
        ),
        // P_{a-} = x(x-1)D + a + bx - c, Q_{a-} = P_{a-} + x - 1
        "a-" => {
            let p = &xx1() * &d() + DiffOp::from_poly(UniPoly::new(vec![&a - &c, b.clone()]));
            let q = &p + &DiffOp::from_poly(UniPoly::from_i64(&[-1, 1]));
            (p, q)
        }
        "b-" => {
            let p = &xx1() * &d() + DiffOp::from_poly(UniPoly::new(vec![&b - &c, a.clone()]));
            let q = &p + &DiffOp::from_poly(UniPoly::from_i64(&[-1, 1]));
            (p, q)
        }
        // P_{c+} = (x-1)D + a + b - c = Q_{c+}
        "c+" => {
            let p = &DiffOp::from_poly(UniPoly::from_i64(&[-1, 1])) * &d()
                + DiffOp::constant(&a + &b - &c);
            (p.clone(), p)
        }
        // P_{c-} = xD + c - 1 = Q_{c-}
        "c-" => {
            let p = th() + DiffOp::constant(&c - &rint(1));
            (p.clone(), p)
        }
        other => panic!("e2_pair: unknown shift {other}"),
    }
}

// ---------------------------------------------------------------------------
// S-values

/// Remainder of `pplus_shifted o pminus` after right division by `h`; the
/// remainder must be an order-0 constant. When `weight` is supplied the
/// quotient is checked against it.
pub fn svalue(
    pplus_shifted: &DiffOp,
    pminus: &DiffOp,
    h: &DiffOp,
    weight: Option<&DiffOp>,
) -> Result<BigRat> {
    let c = pplus_shifted * pminus;
    let (q, r) = c.right_divmod(h)?;
    let value = match r.order() {
        None => BigRat::zero(),
        Some(0) => r
            .coeff(0)
            .as_constant()
            .ok_or_else(|| Error::NotConstant(format!("remainder {r}")))?,
        Some(k) => {
            return Err(Error::NotConstant(format!("remainder has order {k}")));
        }
    };
    if let Some(w) = weight {
        if &q != w {
            return Err(Error::NotConstant(format!(
                "weight mismatch: quotient {q}, expected {w}"
            )));
        }
    }
    Ok(value)
}

/// `P_{0+0}` of H6 together with its S-value: the order-5 operator with
/// `(th + s - 1) o P_{0+0} = x^3 H6(e, u) + Sv_{0+0}`.
pub fn h6_p0p0(e: &ExponentSet, u: &BigRat) -> Result<(DiffOp, BigRat)> {
    let s = e.s();
    let (b1, b2) = h6_b1_b2(e, u);
    let b0 = prod(&[lin(e.at(7)), lin(e.at(8)), lin(e.at(9))]);
    let shift1 = |p: &UniPoly| p.compose_affine(&BigRat::one(), &-BigRat::one());
    let shift2 = |p: &UniPoly| p.compose_affine(&BigRat::one(), &rint(-2));
    let pm3 = &prod(&[lin(&s + &rint(1)), lin(s.clone())]) * &b0;
    let pm2 = &(&UniPoly::x() * &lin(s.clone())) * &shift1(&b1);
    let pm1 = &(&UniPoly::x() * &UniPoly::x_minus(&BigRat::one())) * &shift2(&b2);
    // P0 = (Sv - th(th-1)(th-2)(th-e1)(th-e2)(th-e3)) / (th + s - 1)
    let sv = (rint(1) - &s)
        * (-&s)
        * (rint(-1) - &s)
        * (rint(1) - &s - e.at(1))
        * (rint(1) - &s - e.at(2))
        * (rint(1) - &s - e.at(3));
    let ff = prod(&[
        UniPoly::x(),
        UniPoly::x_minus(&rint(1)),
        UniPoly::x_minus(&rint(2)),
        UniPoly::x_minus(&e.at(1)),
        UniPoly::x_minus(&e.at(2)),
        UniPoly::x_minus(&e.at(3)),
    ]);
    let num = &UniPoly::constant(sv.clone()) - &ff;
    let p0 = num
        .div_exact(&lin(&s - &rint(1)))
        .map_err(|_| Error::ObstructionAtPole(format!("theta + s - 1 with s = {s}")))?;
    let op = ThetaForm::new(vec![pm1, pm2, pm3], vec![p0]).to_op();
    Ok((op, sv))
}

/// `P_{+00}` of H6 with its S-value: transported from `P_{0+0}` by the
/// coordinate change `x -> 1-x` (which swaps the blocks at 0 and 1 and moves
/// the accessory by the `S10` rule), with the overall sign chosen so that
/// the head is `+x^3 (x-1)^5 D^5` and the descending S-value comes out as
/// `Sv_{-00} = -s(s+1)(s+2)(s+e4)(s+e5)(s+e6)`. The defining relation is
/// `P_{-00}(e1+1) o P_{+00} = (x-1)^3 H6(e, u) + Sv_{+00}`.
pub fn h6_pp00(e: &ExponentSet, u: &BigRat) -> Result<(DiffOp, BigRat)> {
    let eswap = ExponentSet::new(vec![
        e.at(4),
        e.at(5),
        e.at(6),
        e.at(1),
        e.at(2),
        e.at(3),
        e.at(7),
        e.at(8),
        e.at(9),
    ]);
    let uswap = s10(&eswap) + s10(e) - u;
    let (p, _) = h6_p0p0(&eswap, &uswap)?;
    let s = e.s();
    let sv = -(rint(1) - &s)
        * (-&s)
        * (rint(-1) - &s)
        * (rint(1) - &s - e.at(4))
        * (rint(1) - &s - e.at(5))
        * (rint(1) - &s - e.at(6));
    Ok((-&p.subst_one_minus_x(), sv))
}

/// `P_{++-}` of H6 evaluated at the parameters shifted by `sh3`: the right
/// quotient `(H6(e, u) - p0) / D`, with S-value `-p0 = -s(s+1)(s+2) e7 e8 e9`.
pub fn h6_ppm(e: &ExponentSet, u: &BigRat) -> (DiffOp, BigRat) {
    let h = build_h6(e, u).op;
    let p0 = h.coeff(0).as_constant().expect("H6 constant term");
    let r = (&h - &DiffOp::constant(p0.clone()))
        .right_div_exact(&DiffOp::d())
        .expect("H6 - p0 ends in D");
    (r, -p0)
}

/// Ascending block-shift triples of H5, derived from the H6 inverse
/// operators at `e9 = 0`: with `D o P_6 = P_1 o D`, the remainder of `P_1`
/// modulo `H5` is the shift operator, and `(Q, alpha)` follow by the linear
/// completion.
pub fn h5_ascending_triple(
    e: &ExponentSet,
    b510: &BigRat,
    first_block: bool,
) -> Result<ShiftTriple> {
    assert_eq!(e.e.len(), 8, "H5 takes eight exponents");
    let mut e9 = e.e.clone();
    e9.push(BigRat::zero());
    let e9 = ExponentSet::new(e9);
    let p6 = if first_block {
        h6_pp00(&e9, b510)?.0
    } else {
        h6_p0p0(&e9, b510)?.0
    };
    let a = &DiffOp::d() * &p6;
    let (p1, r) = a.right_divmod(&DiffOp::d())?;
    if !r.is_zero() {
        return Err(Error::NotDivisible(
            "D o P is not right-divisible by D at e9 = 0".into(),
        ));
    }
    let h5 = build_h5(e, b510).op;
    let (_, p2) = p1.right_divmod(&h5)?;
    let sh = ShiftDescriptor {
        family: Family::H5,
        name: if first_block { "+0" } else { "0+" },
        offsets: if first_block {
            vec![1, 1, 1, 0, 0, 0, 0, 0]
        } else {
            vec![0, 0, 0, 1, 1, 1, 0, 0]
        },
    };
    // the transport carries an (r+1) head factor; normalize to the unit
    // head x^3 (x-1)^4 (resp. x^4 (x-1)^3) of the tabulated operators
    let lead = p2.leading();
    let scale = lead.den().leading() / lead.num().leading();
    let p2 = p2.scale(&scale);
    let (q, alpha) = complete_triple(Family::H5, e, b510, &sh, &p2)?;
    Ok(ShiftTriple {
        p: p2,
        q,
        alpha,
        descriptor: sh,
    })
}

/// Remote S-value by direct composition: the chain
/// `P_+(e_-) ... P_+(e_-k) o P_-(e_-(k-1)) ... P_-(e)` reduced modulo
/// `H(e, u)` must equal the product of the single-step S-values.
pub fn remote_svalue_direct(
    h: &DiffOp,
    pminus_at: impl Fn(usize) -> DiffOp,
    pplus_at: impl Fn(usize) -> DiffOp,
    k: usize,
) -> Result<BigRat> {
    // chain applied right-to-left: P_-(e), P_-(e_-1), ..., then ascends
    let mut chain = DiffOp::one();
    for j in 0..k {
        chain = &pminus_at(j) * &chain;
    }
    for j in (0..k).rev() {
        chain = &pplus_at(j) * &chain;
    }
    let (_, r) = chain.right_divmod(h)?;
    match r.order() {
        None => Ok(BigRat::zero()),
        Some(0) => r
            .coeff(0)
            .as_constant()
            .ok_or_else(|| Error::NotConstant(format!("remote remainder {r}"))),
        Some(k) => Err(Error::NotConstant(format!("remote remainder order {k}"))),
    }
}

// ---------------------------------------------------------------------------
// Q from P via the adjoint symmetry

/// For a family with adjoint symmetry `H(e)^* = H(adj(e))` (up to the sign
/// of the head) and a shift relation `H(sigma(e)) P = Q H(e)`, the partner
/// is `Q = (-1)^(order P) P(adj(sigma(e)))^*`.
pub fn q_from_p_via_adjoint(
    p_builder: impl Fn(&ExponentSet) -> DiffOp,
    adj: impl Fn(&ExponentSet) -> ExponentSet,
    sh: &ShiftDescriptor,
    e: &ExponentSet,
) -> DiffOp {
    let params = adj(&sh.apply(e));
    let p_at = p_builder(&params);
    let nu = p_at.order0();
    let sign = if nu % 2 == 0 { rint(1) } else { rint(-1) };
    p_at.adjoint().scale(&sign)
}

/// Adjoint parameter maps of the families (exponent part only).
pub fn adjoint_params(family: Family, e: &ExponentSet) -> ExponentSet {
    match family {
        Family::E2 => ExponentSet::new(vec![
            rint(1) - e.at(1),
            rint(1) - e.at(2),
            rint(2) - e.at(3),
        ]),
        Family::H3 => ExponentSet::new(vec![
            -e.at(1),
            -e.at(2),
            -e.at(3),
            -e.at(4),
            rint(2) - e.at(5),
            rint(2) - e.at(6),
        ]),
        Family::H4 => ExponentSet::new((1..=7).map(|i| rint(1) - e.at(i)).collect()),
        Family::H5 => ExponentSet::new(
            (1..=8)
                .map(|i| {
                    if i <= 6 {
                        rint(3) - e.at(i)
                    } else {
                        -e.at(i)
                    }
                })
                .collect(),
        ),
        Family::H6 | Family::G6 | Family::E6 => ExponentSet::new(
            (1..=9)
                .map(|i| {
                    if i <= 6 {
                        rint(2) - e.at(i)
                    } else {
                        rint(1) - e.at(i)
                    }
                })
                .collect(),
        ),
        other => panic!("adjoint_params: unsupported family {other}"),
    }
}

// ---------------------------------------------------------------------------
// reducibility certificates

/// Report which of the family's integrality conditions hold; the list is
/// empty for generic exponents.
pub fn reducibility_certificate(family: Family, e: &ExponentSet) -> Vec<String> {
    let mut out = Vec::new();
    let mut check = |v: &BigRat, what: String| {
        if is_integer(v) {
            out.push(format!("{what} = {v} is an integer"));
        }
    };
    match family {
        Family::E2 => {
            let (a, b, c) = (e.at(1), e.at(2), e.at(3));
            check(&a, "a".into());
            check(&b, "b".into());
            check(&(&c - &a), "c-a".into());
            check(&(&c - &b), "c-b".into());
        }
        Family::H4 => {
            let c8 = rint(4) - e.e.iter().fold(BigRat::zero(), |a, b| a + b);
            for i in 5..=7 {
                check(&e.at(i), format!("e{i}"));
            }
            check(&c8, "e8".into());
        }
        Family::H5 => {
            let r = e.r();
            check(&r, "r".into());
            for i in 1..=6 {
                check(&(e.at(i) - &r), format!("e{i}-r"));
            }
        }
        Family::H6 | Family::G6 | Family::E6 => {
            let s = e.s();
            check(&s, "s".into());
            for i in 1..=6 {
                check(&(e.at(i) + &s), format!("e{i}+s"));
            }
            for i in 7..=9 {
                check(&e.at(i), format!("e{i}"));
            }
        }
        other => panic!("reducibility_certificate: unsupported family {other}"),
    }
    out
}

/// Verify that the solver's accessory drop for a generator shift of H6 is
/// compatible with the `G6` assignment: `alpha(e) = T10(e) - T10(sh(e))`
/// with `T10 = S10 + R` and `R` shift-invariant.
pub fn g6_shift_consistency(e: &ExponentSet, a: &[BigRat; 7], sh: &ShiftDescriptor) -> bool {
    let t10 = |f: &ExponentSet| {
        let mut acc = s10(f) + a[0].clone();
        for i in 1..=3 {
            acc += &a[i] * &f.t2(i);
        }
        for i in 1..=3 {
            acc += &a[3 + i] * &f.t3(i);
        }
        acc
    };
    let triple = h6_triple(sh, e);
    let drop = t10(e) - t10(&sh.apply(e));
    triple.alpha == drop
}
