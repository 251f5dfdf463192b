//! Explicit factorizations at special parameter values, Kummer
//! factorizations of the Gauss operator, polynomial solutions, the
//! interpolative expression of `E6` and its `[1113]` decomposition, and the
//! transport of factorizations along shift relations.

use crate::catalog::{
    build_e2, build_e6, build_h3, build_h4, build_h5, build_h6, extract_accessory,
    normalize_to_family_head, ExponentSet, Family, NamedOperator,
};
use crate::fuchs::{frobenius_series, local_exponents, no_log_check};
use crate::linalg::QMatrix;
use crate::poly::UniPoly;
use crate::rat::{factorial, is_integer, rint, to_i64, BigRat};
use crate::ratfunc::RatFunc;
use crate::shifts::ShiftTriple;
use crate::transforms::addition_raw;
use crate::weyl::{DiffOp, SingPoint};
use crate::{Error, Result};
use num_traits::{One, Signed, Zero};

/// An ordered factorization `source = factors[0] o factors[1] o ...`.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub factors: Vec<DiffOp>,
    pub type_tag: Vec<usize>,
    /// Rational singular points of the factors outside {0, 1}; these are
    /// apparent.
    pub apparent_singularities: Vec<BigRat>,
}

impl Factorization {
    pub fn new(factors: Vec<DiffOp>) -> Self {
        let type_tag = factors.iter().map(|f| f.order0()).collect();
        let apparent_singularities = collect_extra_singularities(&factors);
        Factorization {
            factors,
            type_tag,
            apparent_singularities,
        }
    }

    /// Compose the factors back, left to right.
    pub fn remultiply(&self) -> DiffOp {
        self.factors
            .iter()
            .fold(DiffOp::one(), |acc, f| &acc * f)
    }

    /// Exact equality of the re-multiplied product with `source`, up to a
    /// scalar.
    pub fn verifies_against(&self, source: &DiffOp) -> bool {
        self.remultiply()
            .polynomial_normalize()
            .eq_up_to_scalar(&source.polynomial_normalize())
            .is_some()
    }
}

fn collect_extra_singularities(factors: &[DiffOp]) -> Vec<BigRat> {
    let mut out = Vec::new();
    for f in factors {
        let (_, coeffs) = f.cleared();
        if let Some(lead) = coeffs.last() {
            if let Some(roots) = lead.rational_roots() {
                for (r, _) in roots {
                    if !r.is_zero() && r != rint(1) && !out.contains(&r) {
                        out.push(r);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Each reported extra singular point must be apparent: the local monodromy
/// is trivial, i.e. all local exponents are integers and the Frobenius
/// recursion produces no logarithm. (Right factors even have non-negative
/// exponents there, since their solutions sit inside the source's; left
/// factors can have honest poles.)
pub fn extra_singularities_are_apparent(f: &DiffOp) -> Result<bool> {
    let (_, coeffs) = f.cleared();
    let lead = coeffs.last().cloned().unwrap_or_else(UniPoly::zero);
    let Some(roots) = lead.rational_roots() else {
        return Ok(true);
    };
    for (root, _) in roots {
        if root.is_zero() || root == rint(1) {
            continue;
        }
        // shift the point to the origin and run the generic checks there
        let moved = DiffOp::new(
            f.coeffs()
                .iter()
                .map(|c| c.compose_affine(&BigRat::one(), &root))
                .collect(),
        );
        let data = local_exponents(&moved, SingPoint::Zero)?;
        let Some(exps) = data.exponents else {
            return Ok(false);
        };
        if !exps.iter().all(is_integer) {
            return Ok(false);
        }
        if !no_log_check(&moved, SingPoint::Zero, &exps)? {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// generic helpers: first-order factors and intertwiners

/// Polynomial kernel of an operator on polynomials of degree `<= bound`.
pub fn polynomial_solutions(h: &DiffOp, bound: usize) -> Vec<UniPoly> {
    let (_, coeffs) = h.cleared();
    let hpoly = DiffOp::new(coeffs.into_iter().map(RatFunc::from_poly).collect());
    let mut maxdeg = 0usize;
    let mut images: Vec<UniPoly> = Vec::with_capacity(bound + 1);
    for k in 0..=bound {
        let img = hpoly.apply_poly(&UniPoly::monomial(BigRat::one(), k));
        let p = img.as_poly().expect("polynomial image").clone();
        maxdeg = maxdeg.max(p.deg0());
        images.push(p);
    }
    let mut rows = Vec::with_capacity(maxdeg + 1);
    for r in 0..=maxdeg {
        rows.push(images.iter().map(|p| p.coeff(r)).collect::<Vec<_>>());
    }
    QMatrix::from_rows(rows)
        .nullspace()
        .into_iter()
        .map(UniPoly::new)
        .collect()
}

/// Search a first-order right factor `D - (alpha/x + beta/(x-1) + f'/f)`
/// with `f` polynomial: a hyperexponential solution `x^alpha (x-1)^beta f`.
/// Returns the factor and the cofactor `g` with `op = g o factor`.
pub fn split_right_first_order(op: &DiffOp) -> Result<(DiffOp, DiffOp)> {
    let exps0 = point_exponents(op, SingPoint::Zero)?;
    let exps1 = point_exponents(op, SingPoint::One)?;
    let expsi = point_exponents(op, SingPoint::Infinity)?;
    for alpha in &exps0 {
        for beta in &exps1 {
            for gamma in &expsi {
                let d = -gamma - alpha - beta;
                let Some(deg) = to_i64(&d).filter(|v| *v >= 0) else {
                    continue;
                };
                let twisted = addition_raw(
                    op,
                    &crate::transforms::GaugeFactor::new(-alpha.clone(), -beta.clone()),
                );
                for f in polynomial_solutions(&twisted, deg as usize) {
                    if f.is_zero() {
                        continue;
                    }
                    let logder = &RatFunc::new(
                        UniPoly::constant(alpha.clone()),
                        UniPoly::x(),
                    )
                    .unwrap()
                        + &(&RatFunc::new(
                            UniPoly::constant(beta.clone()),
                            UniPoly::from_i64(&[-1, 1]),
                        )
                        .unwrap()
                            + &(&RatFunc::from_poly(f.derivative()) / &RatFunc::from_poly(f)));
                    let factor = &DiffOp::d() - &DiffOp::func(logder);
                    if let Ok((q, r)) = op.right_divmod(&factor) {
                        if r.is_zero() {
                            return Ok((q, factor));
                        }
                    }
                }
            }
        }
    }
    Err(Error::NotReducible(
        "no hyperexponential right factor found".into(),
    ))
}

/// First-order left factor via the adjoint: `op = r* o g*` when
/// `op* = g o r` with `r` of order one.
pub fn split_left_first_order(op: &DiffOp) -> Result<(DiffOp, DiffOp)> {
    let adj = op.adjoint();
    let (g, r) = split_right_first_order(&adj)?;
    Ok((r.adjoint(), g.adjoint()))
}

fn point_exponents(op: &DiffOp, pt: SingPoint) -> Result<Vec<BigRat>> {
    let data = local_exponents(op, pt)?;
    data.exponents.ok_or_else(|| {
        Error::RecognitionFailure(format!("exponents at {pt} do not split over Q"))
    })
}

/// Solve `G o P = W o F` for `(G, W)` with prescribed orders and a uniform
/// degree bound; used to transport invariant subspaces along order-one shift
/// operators.
pub fn solve_intertwiner(
    p: &DiffOp,
    f: &DiffOp,
    g_order: usize,
    deg: usize,
) -> Result<(DiffOp, DiffOp)> {
    let w_order = g_order + p.order0() - f.order0();
    let layout = |ord: usize| -> Vec<(usize, usize)> {
        (0..=ord).flat_map(|j| (0..=deg).map(move |i| (j, i))).collect()
    };
    let gmon = layout(g_order);
    let wmon = layout(w_order);
    let max_order = g_order + p.order0() + 1;
    let max_deg = 2 * deg
        + 2
        + [p, f]
            .iter()
            .flat_map(|h| h.coeffs().iter().map(|c| c.num().deg0()))
            .max()
            .unwrap_or(0);
    let dims = (max_order + 1) * (max_deg + 1);
    let flatten = |op: &DiffOp| -> Vec<BigRat> {
        let mut v = vec![BigRat::zero(); dims];
        for (j, c) in op.coeffs().iter().enumerate() {
            let pp = c.as_poly().expect("polynomial residual");
            for (i, a) in pp.coeffs().iter().enumerate() {
                v[j * (max_deg + 1) + i] = a.clone();
            }
        }
        v
    };
    let mono = |j: usize, i: usize| -> DiffOp {
        let mut v = vec![RatFunc::zero(); j + 1];
        v[j] = RatFunc::from_poly(UniPoly::monomial(BigRat::one(), i));
        DiffOp::new(v)
    };
    let mut cols: Vec<Vec<BigRat>> = Vec::new();
    for (j, i) in &gmon {
        cols.push(flatten(&(&mono(*j, *i) * p)));
    }
    for (j, i) in &wmon {
        cols.push(flatten(&(-&(&mono(*j, *i) * f))));
    }
    let mut rows = Vec::new();
    for r in 0..dims {
        let mut row = Vec::with_capacity(cols.len());
        let mut nonzero = false;
        for c in &cols {
            nonzero |= !c[r].is_zero();
            row.push(c[r].clone());
        }
        if nonzero {
            rows.push(row);
        }
    }
    let ns = QMatrix::from_rows(rows).nullspace();
    for v in &ns {
        let g = assemble(&v[..gmon.len()], g_order, deg);
        let w = assemble(&v[gmon.len()..], w_order, deg);
        if g.order() == Some(g_order) && !w.is_zero() {
            return Ok((g, w));
        }
    }
    Err(Error::CaseUndetermined(
        "no intertwiner of the requested order".into(),
    ))
}

fn assemble(coeffs: &[BigRat], ord: usize, deg: usize) -> DiffOp {
    let mut polys = Vec::with_capacity(ord + 1);
    for j in 0..=ord {
        polys.push(RatFunc::from_poly(UniPoly::new(
            coeffs[j * (deg + 1)..(j + 1) * (deg + 1)].to_vec(),
        )));
    }
    DiffOp::new(polys)
}

// ---------------------------------------------------------------------------
// recognition of "essentially the same" operators

/// Recognize `op` as `H3` after a right gauge `x^a (x-1)^b`: try zeroing
/// every pair of exponents at 0 and 1 and compare against the catalog
/// builder, up to a scalar and a left function multiple (the polynomial
/// normalization).
pub fn recognize_essentially_h3(op: &DiffOp) -> Result<NamedOperator> {
    let exps0 = point_exponents(op, SingPoint::Zero)?;
    let exps1 = point_exponents(op, SingPoint::One)?;
    for a in &exps0 {
        for b in &exps1 {
            let gauged = addition_raw(
                op,
                &crate::transforms::GaugeFactor::new(-a.clone(), -b.clone()),
            )
            .polynomial_normalize();
            let Ok(normalized) = normalize_to_family_head(Family::H3, &gauged) else {
                continue;
            };
            let Ok(acc) = extract_accessory(Family::H3, &normalized) else {
                continue;
            };
            let b0: Vec<BigRat> = exps0.iter().filter(|e| *e != a).map(|e| e - a).collect();
            let b1: Vec<BigRat> = exps1.iter().filter(|e| *e != b).map(|e| e - b).collect();
            if b0.len() != 2 || b1.len() != 2 {
                continue;
            }
            let mut params = vec![b0[0].clone(), b0[1].clone(), b1[0].clone(), b1[1].clone()];
            // b5, b6 from the remaining infinity exponents, b7 by Fuchs
            let expsi = point_exponents(&normalized, SingPoint::Infinity)?;
            params.push(expsi[0].clone());
            params.push(expsi[1].clone());
            let cand = build_h3(&ExponentSet::new(params), &acc);
            if cand.op == normalized {
                return Ok(cand);
            }
        }
    }
    Err(Error::RecognitionFailure("essentially H3".into()))
}

/// Recognize `op` as `H5` directly (no gauge): used for the `e9 = 1` right
/// quotient, which lands on the nose.
pub fn recognize_h5_exact(op: &DiffOp, expected: &ExponentSet) -> Result<NamedOperator> {
    let normalized = normalize_to_family_head(Family::H5, &op.polynomial_normalize())?;
    let acc = extract_accessory(Family::H5, &normalized)?;
    let cand = build_h5(expected, &acc);
    if cand.op == normalized {
        Ok(cand)
    } else {
        Err(Error::RecognitionFailure("essentially H5".into()))
    }
}

/// Recognize an order-4 operator as `H4` after exchanging `x = 1` and
/// `x = infinity` (the substitution `x -> x/(x-1)`) and a right gauge.
pub fn recognize_essentially_h4_swapped(op: &DiffOp) -> Result<NamedOperator> {
    // x -> x/(x-1) as 1-x composed with 1/x composed with 1-x
    let sub = op
        .subst_one_minus_x()
        .subst_inverse()
        .subst_one_minus_x()
        .polynomial_normalize();
    recognize_essentially_h4(&sub)
}

/// Recognize `op` as `H4` after a right gauge.
pub fn recognize_essentially_h4(op: &DiffOp) -> Result<NamedOperator> {
    let exps0 = point_exponents(op, SingPoint::Zero)?;
    let exps1 = point_exponents(op, SingPoint::One)?;
    for a in &exps0 {
        for b in &exps1 {
            let gauged = addition_raw(
                op,
                &crate::transforms::GaugeFactor::new(-a.clone(), -b.clone()),
            )
            .polynomial_normalize();
            let Ok(normalized) = normalize_to_family_head(Family::H4, &gauged) else {
                continue;
            };
            // the gauged scheme must carry {0,1} blocks at 0 and 1
            let Ok(g0) = point_exponents(&normalized, SingPoint::Zero) else {
                continue;
            };
            let Ok(g1) = point_exponents(&normalized, SingPoint::One) else {
                continue;
            };
            let gi = point_exponents(&normalized, SingPoint::Infinity)?;
            let strip01 = |v: &[BigRat]| -> Option<Vec<BigRat>> {
                let mut pool = v.to_vec();
                for w in [rint(0), rint(1)] {
                    let pos = pool.iter().position(|x| *x == w)?;
                    pool.remove(pos);
                }
                Some(pool)
            };
            let (Some(c12), Some(c34)) = (strip01(&g0), strip01(&g1)) else {
                continue;
            };
            let Ok(acc) = extract_accessory(Family::H4, &normalized) else {
                continue;
            };
            let params = ExponentSet::new(vec![
                c12[0].clone(),
                c12[1].clone(),
                c34[0].clone(),
                c34[1].clone(),
                gi[0].clone(),
                gi[1].clone(),
                gi[2].clone(),
            ]);
            let cand = build_h4(&params, &acc);
            if cand.op == normalized {
                return Ok(cand);
            }
        }
    }
    Err(Error::RecognitionFailure("essentially H4".into()))
}

// ---------------------------------------------------------------------------
// H6 special factorizations

/// The special-value cases of `H6`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum H6Case {
    E9Zero,
    E9One,
    SOne,
    SZero,
    SMinusOne,
    SMinusTwo,
}

/// Factor `H6(e, T10)` at one of the special parameter values; the middle
/// factor is recognized against the catalog where the sources assert it is
/// "essentially" `H3` or `H5`.
pub fn factor_h6_special(e: &ExponentSet, t10: &BigRat, which: H6Case) -> Result<Factorization> {
    let s = e.s();
    let h6 = build_h6(e, t10).op;
    let need = |cond: bool, what: &str| -> Result<()> {
        if cond {
            Ok(())
        } else {
            Err(Error::ConditionNotMet(what.to_string()))
        }
    };
    match which {
        H6Case::E9Zero => {
            need(e.at(9).is_zero(), "e9 = 0")?;
            let h5 = h6.right_div_exact(&DiffOp::d())?;
            // the quotient is exactly the catalog H5
            let expected = ExponentSet::new(e.e[..8].to_vec());
            let cand = build_h5(&expected, t10);
            if cand.op != h5 {
                return Err(Error::RecognitionFailure("H6(e9=0)/D as H5".into()));
            }
            Ok(Factorization::new(vec![h5, DiffOp::d()]))
        }
        H6Case::E9One => {
            need(e.at(9) == rint(1), "e9 = 1")?;
            let x5 = h6.left_div_d(1)?;
            // by the middle-convolution bookkeeping with mu = e9 - 1 = 0 the
            // quotient is H5(e1+1, .., e6+1, e7-1, e8-1) on the nose
            let expected = ExponentSet::new(
                (1..=8)
                    .map(|i| {
                        if i <= 6 {
                            e.at(i) + rint(1)
                        } else {
                            e.at(i) - rint(1)
                        }
                    })
                    .collect(),
            );
            recognize_h5_exact(&x5, &expected)?;
            Ok(Factorization::new(vec![DiffOp::d(), x5]))
        }
        H6Case::SOne => {
            need(s == rint(1), "s = 1")?;
            let v = h6.left_div_d(3)?;
            recognize_essentially_h3(&v)?;
            Ok(Factorization::new(vec![
                DiffOp::d(),
                DiffOp::d(),
                DiffOp::d(),
                v,
            ]))
        }
        H6Case::SZero => {
            need(s.is_zero(), "s = 0")?;
            let y = h6.right_div_exact(&DiffOp::d())?;
            let x3 = y.left_div_d(2)?;
            recognize_essentially_h3(&x3)?;
            Ok(Factorization::new(vec![
                DiffOp::d(),
                DiffOp::d(),
                x3,
                DiffOp::d(),
            ]))
        }
        H6Case::SMinusOne => {
            need(s == rint(-1), "s = -1")?;
            let y = h6
                .right_div_exact(&DiffOp::d())?
                .right_div_exact(&DiffOp::d())?;
            let x3 = y.left_div_d(1)?;
            recognize_essentially_h3(&x3)?;
            Ok(Factorization::new(vec![
                DiffOp::d(),
                x3,
                DiffOp::d(),
                DiffOp::d(),
            ]))
        }
        H6Case::SMinusTwo => {
            need(s == rint(-2), "s = -2")?;
            let x3 = h6
                .right_div_exact(&DiffOp::d())?
                .right_div_exact(&DiffOp::d())?
                .right_div_exact(&DiffOp::d())?;
            recognize_essentially_h3(&x3)?;
            Ok(Factorization::new(vec![
                x3,
                DiffOp::d(),
                DiffOp::d(),
                DiffOp::d(),
            ]))
        }
    }
}

// ---------------------------------------------------------------------------
// Kummer factorizations of E2

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KummerType {
    I,
    II,
    III,
    IV,
}

/// The Kummer factorization data: `E2 = F1 o F2` with
/// `F2 = D - G'/G`, `G = x^mu (x-1)^nu g`.
#[derive(Clone, Debug)]
pub struct KummerFactorization {
    pub factorization: Factorization,
    pub kummer_type: KummerType,
    pub g: UniPoly,
    pub mu: BigRat,
    pub nu: BigRat,
}

/// Factor a reducible Gauss operator along the Kummer table: one of
/// `a, b, c-a, c-b` must be an integer.
pub fn factor_e2_kummer(a: &BigRat, b: &BigRat, c: &BigRat) -> Result<KummerFactorization> {
    // the b and c-b conditions reduce to the a and c-a rows with a and b
    // swapped (the operator is symmetric in a, b)
    if !is_integer(a) && is_integer(b) {
        return factor_e2_kummer(b, a, c);
    }
    if !is_integer(a) && !is_integer(&(c - a)) && is_integer(&(c - b)) {
        return factor_e2_kummer(b, a, c);
    }
    let zero = BigRat::zero();
    let (ktype, mu, nu, series_params, deg) = if let Some(av) = to_i64(a) {
        if av <= 0 {
            (
                KummerType::I,
                zero.clone(),
                zero.clone(),
                (a.clone(), b.clone(), c.clone()),
                (-av) as usize,
            )
        } else {
            (
                KummerType::IV,
                BigRat::one() - c,
                c - a - b,
                (rint(1) - a, rint(1) - b, rint(2) - c),
                (av - 1) as usize,
            )
        }
    } else if let Some(cav) = to_i64(&(c - a)) {
        if cav <= 0 {
            (
                KummerType::II,
                zero.clone(),
                c - a - b,
                (c - a, c - b, c.clone()),
                (-cav) as usize,
            )
        } else {
            (
                KummerType::III,
                BigRat::one() - c,
                zero.clone(),
                (a - c + rint(1), b - c + rint(1), rint(2) - c),
                (cav - 1) as usize,
            )
        }
    } else {
        return Err(Error::NotReducible(
            "none of a, b, c-a, c-b is an integer".into(),
        ));
    };
    // g = the terminating hypergeometric series of the stated parameters
    let (sa, sb, sc) = series_params;
    let gop = build_e2(&sa, &sb, &sc).op;
    let ser = frobenius_series(&gop, SingPoint::Zero, &BigRat::zero(), deg + 4)?;
    for k in deg + 1..ser.coeffs.len() {
        if !ser.coeffs[k].is_zero() {
            return Err(Error::NotReducible(format!(
                "hypergeometric series does not terminate at degree {deg}"
            )));
        }
    }
    let g = UniPoly::new(ser.coeffs[..=deg].to_vec());
    if g.degree() != Some(deg) {
        return Err(Error::NotReducible(format!(
            "expected polynomial of degree {deg}, found {:?}",
            g.degree()
        )));
    }
    // F2 = D - (mu/x + nu/(x-1) + g'/g)
    let logder = &RatFunc::new(UniPoly::constant(mu.clone()), UniPoly::x()).unwrap()
        + &(&RatFunc::new(UniPoly::constant(nu.clone()), UniPoly::from_i64(&[-1, 1])).unwrap()
            + &(&RatFunc::from_poly(g.derivative()) / &RatFunc::from_poly(g.clone())));
    let f2 = &DiffOp::d() - &DiffOp::func(logder);
    let e2 = build_e2(a, b, c).op;
    let (f1, r) = e2.right_divmod(&f2)?;
    if !r.is_zero() {
        return Err(Error::NotReducible(
            "Kummer right factor does not divide".into(),
        ));
    }
    Ok(KummerFactorization {
        factorization: Factorization::new(vec![f1, f2]),
        kummer_type: ktype,
        g,
        mu,
        nu,
    })
}

// ---------------------------------------------------------------------------
// H5 and H4 special factorizations

/// Factor `H5` at its reducibility values: implemented constructively for
/// `e_i - r = 1` (type [1,4] with the factor [4] essentially `H4`),
/// `e_i - r = 0` (type [4,1]) and `r = 0, 1, 2` (types [1,1,3], [1,3,1],
/// [3,1,1] with the factor [3] essentially `H3`).
pub fn factor_h5_cases(e: &ExponentSet, b510: &BigRat) -> Result<Factorization> {
    let r = e.r();
    let h5 = build_h5(e, b510).op;
    if let Some(rv) = to_i64(&r) {
        match rv {
            0 => {
                let x3 = h5.left_div_d(2)?;
                recognize_essentially_h3(&x3)?;
                return Ok(Factorization::new(vec![DiffOp::d(), DiffOp::d(), x3]));
            }
            1 => {
                let y = h5.right_div_exact(&DiffOp::d())?;
                let x3 = y.left_div_d(1)?;
                recognize_essentially_h3(&x3)?;
                return Ok(Factorization::new(vec![DiffOp::d(), x3, DiffOp::d()]));
            }
            2 => {
                let x3 = h5
                    .right_div_exact(&DiffOp::d())?
                    .right_div_exact(&DiffOp::d())?;
                recognize_essentially_h3(&x3)?;
                return Ok(Factorization::new(vec![x3, DiffOp::d(), DiffOp::d()]));
            }
            _ => {
                return Err(Error::ConditionNotMet(format!(
                    "r = {rv}: type {} is not constructed here",
                    if rv < 0 { "[1,1,3]" } else { "[3,1,1]" }
                )))
            }
        }
    }
    for i in 1..=6 {
        let diff = e.at(i) - &r;
        if let Some(d) = to_i64(&diff) {
            match d {
                1 => {
                    // type [1,4]: first-order left factor via the adjoint
                    let (f1, f4) = split_left_first_order(&h5)?;
                    recognize_essentially_h4_swapped(&f4)?;
                    return Ok(Factorization::new(vec![f1, f4]));
                }
                0 => {
                    // type [4,1]: hyperexponential right factor
                    let (f4, f1) = split_right_first_order(&h5)?;
                    return Ok(Factorization::new(vec![f4, f1]));
                }
                _ => {
                    return Err(Error::ConditionNotMet(format!(
                        "e{i} - r = {d}: type {} is not constructed here",
                        if d > 0 { "[1,4]" } else { "[4,1]" }
                    )))
                }
            }
        }
    }
    Err(Error::ConditionNotMet(
        "none of r, e_i - r is an integer".into(),
    ))
}

/// Factor `H4` at integer values of `c7`: exact `H3` factors at 0 and 1,
/// first-order splits otherwise.
pub fn factor_h4_cases(c: &ExponentSet, t10: &BigRat) -> Result<Factorization> {
    let h4 = build_h4(c, t10).op;
    let c7 = c.at(7);
    let Some(v) = to_i64(&c7) else {
        return Err(Error::ConditionNotMet("c7 is not an integer".into()));
    };
    match v {
        1 => {
            let f = h4.left_div_d(1)?;
            let expected = ExponentSet::new(c.e[..6].to_vec());
            let acc = extract_accessory(Family::H3, &f)?;
            let cand = build_h3(&expected, &acc);
            if cand.op != f {
                return Err(Error::RecognitionFailure("H4(c7=1)/D as H3".into()));
            }
            Ok(Factorization::new(vec![DiffOp::d(), f]))
        }
        0 => {
            let f = h4.right_div_exact(&DiffOp::d())?;
            let expected = ExponentSet::new(vec![
                c.at(1) - rint(1),
                c.at(2) - rint(1),
                c.at(3) - rint(1),
                c.at(4) - rint(1),
                c.at(5) + rint(1),
                c.at(6) + rint(1),
            ]);
            let acc = extract_accessory(Family::H3, &f)?;
            let cand = build_h3(&expected, &acc);
            if cand.op != f {
                return Err(Error::RecognitionFailure("H4(c7=0)/D as H3".into()));
            }
            Ok(Factorization::new(vec![f, DiffOp::d()]))
        }
        v if v >= 2 => {
            // type [1,3] by a first-order left split
            let (f1, f3) = split_left_first_order(&h4)?;
            Ok(Factorization::new(vec![f1, f3]))
        }
        _ => {
            // type [3,1] by a hyperexponential right factor
            let (f3, f1) = split_right_first_order(&h4)?;
            Ok(Factorization::new(vec![f3, f1]))
        }
    }
}

// ---------------------------------------------------------------------------
// E6: interpolative expression and the [1113] decomposition

/// `V(e1..e8) = D^3 \ E6(e, e9 = 3 - e1 - ... - e8)` (the `s = 1` member).
pub fn e6_v_operator(e8: &ExponentSet) -> Result<DiffOp> {
    assert_eq!(e8.e.len(), 8);
    let mut e = e8.e.clone();
    let e9 = rint(3) - e8.e.iter().fold(BigRat::zero(), |a, b| a + b);
    e.push(e9);
    let op = build_e6(&ExponentSet::new(e)).op;
    op.left_div_d(3)
}

/// The interpolative identity: for generic `s`,
///
/// ```text
/// E6(e) - U = -3(s-1)s(s+1)(s+2) { (x^2-x+1/3) D^2
///                                  + (x-1/2)(e7+e8+1) D + e7 e8 }
/// ```
///
/// with `U` the weighted combination of `D^k o V_j o D^(3-k)` over the
/// diagonal specializations `V_j` of `V`.
pub fn e6_interpolative_check(e: &ExponentSet) -> Result<bool> {
    assert_eq!(e.e.len(), 9);
    let s = e.s();
    for bad in [-2i64, -1, 0, 1] {
        if s == rint(bad) {
            return Err(Error::PoleAtSpecialS(s.to_string()));
        }
    }
    let e6 = build_e6(e).op;
    let spec = |k: i64| -> ExponentSet {
        // e' applied k times to the first eight entries
        ExponentSet::new(
            (1..=8)
                .map(|i| {
                    if i <= 6 {
                        e.at(i) - rint(k)
                    } else {
                        e.at(i) + rint(k)
                    }
                })
                .collect(),
        )
    };
    let v1 = e6_v_operator(&spec(0))?;
    let v0 = e6_v_operator(&spec(1))?;
    let vm1 = e6_v_operator(&spec(2))?;
    let vm2 = e6_v_operator(&spec(3))?;
    let c = (&s - &rint(1)) * &s * (&s + &rint(1)) * (&s + &rint(2)) / rint(6);
    let term = |k: usize, v: &DiffOp, den: BigRat, sign: i64| -> DiffOp {
        (&DiffOp::d_power(3 - k) * &(v * &DiffOp::d_power(k)))
            .scale(&(rint(sign) * &c / den))
    };
    let u = &(&term(0, &v1, &s - &rint(1), 1) + &term(1, &v0, s.clone(), -3))
        + &(&term(2, &vm1, &s + &rint(1), 3) + &term(3, &vm2, &s + &rint(2), -1));
    let lhs = &e6 - &u;
    let brace = &(&DiffOp::from_poly(UniPoly::new(vec![rint(1) / rint(3), rint(-1), rint(1)]))
        * &DiffOp::d_power(2))
        + &(&(&DiffOp::from_poly(UniPoly::new(vec![rint(-1) / rint(2), rint(1)]))
            * &DiffOp::d())
        .scale(&(e.at(7) + e.at(8) + rint(1)))
            + &DiffOp::constant(e.at(7) * e.at(8)));
    let rhs = brace.scale(&(rint(-3) * (&s - &rint(1)) * &s * (&s + &rint(1)) * (&s + &rint(2))));
    Ok(lhs == rhs)
}

/// The `[1113]` decomposition data of `E6` at `s = n + 1`.
#[derive(Clone, Debug)]
pub struct E6Decomposition {
    pub n: usize,
    pub q1: DiffOp,
    pub q2: DiffOp,
    pub p: DiffOp,
    pub f_values: Vec<RatFunc>,
    pub l1: DiffOp,
    pub l2: DiffOp,
    pub l3: DiffOp,
    pub kernel: Vec<RatFunc>,
}

/// Run the `[1113]` recursion for `E6(s = n+1)`: starting from
/// `Q1 = D^3, Q2 = V`, advance `Q1^{(k+1)} D = D Q1^{(k)} f^{(k)}` and
/// `Q2^{(k+1)} D = D (1/f^{(k)}) Q2^{(k)}`, build `P^{(n)}`, find the
/// rational kernel of `Q1^{(n)}` and assemble the first-order factors.
pub fn e6_1113_decomposition(e8: &ExponentSet, n: usize) -> Result<E6Decomposition> {
    assert_eq!(e8.e.len(), 8);
    let e9 = rint(3) - e8.e.iter().fold(BigRat::zero(), |a, b| a + b);
    for (i, v) in e8.e[6..].iter().enumerate() {
        if is_integer(v) {
            return Err(Error::IntegerExponent(format!("e{} = {v}", i + 7)));
        }
    }
    if is_integer(&e9) {
        return Err(Error::IntegerExponent(format!("e9 = {e9}")));
    }
    let mut q1 = DiffOp::d_power(3);
    let mut q2 = e6_v_operator(e8)?;
    let mut p = DiffOp::one();
    let mut f_values = Vec::with_capacity(n);
    for _ in 0..n {
        let f = q2.apply_func(&RatFunc::one());
        if f.is_zero() {
            return Err(Error::IntegerExponent("f^(k) vanished".into()));
        }
        let q1_next = (&(&DiffOp::d() * &q1) * &DiffOp::func(f.clone()))
            .right_div_exact(&DiffOp::d())?;
        let q2_next = (&DiffOp::d() * &(&DiffOp::func(f.inv()?) * &q2))
            .right_div_exact(&DiffOp::d())?;
        p = &(&DiffOp::d() * &DiffOp::func(f.inv()?)) * &p;
        f_values.push(f);
        q1 = q1_next;
        q2 = q2_next;
    }
    // rational kernel of Q1: poles confined to {0, 1}, degree bounded by
    // the integer exponents
    let kernel = rational_kernel(&q1, 3)?;
    if kernel.len() < 3 {
        return Err(Error::RationalKernelNotFound(format!(
            "kernel dimension {} != 3",
            kernel.len()
        )));
    }
    // order by a simple complexity measure; h3 = least complex
    let mut ordered = kernel.clone();
    ordered.sort_by_key(|h| h.num().deg0() + h.den().deg0());
    let h3 = ordered[0].clone();
    let h2 = ordered[1].clone();
    let h1 = ordered[2].clone();
    let first_order = |f: &RatFunc| -> DiffOp { &DiffOp::d() - &DiffOp::func(f.clone()) };
    let logder = |g: &RatFunc| -> RatFunc { &g.derivative() / g };
    let l3 = first_order(&logder(&h3));
    let g2 = l3.apply_func(&h2);
    let l2 = first_order(&logder(&g2));
    let g1 = l2.apply_func(&l3.apply_func(&h1));
    let l1 = first_order(&logder(&g1));
    Ok(E6Decomposition {
        n,
        q1,
        q2,
        p,
        f_values,
        l1,
        l2,
        l3,
        kernel,
    })
}

/// Rational solutions of an operator whose extra singular points are
/// apparent: kernel elements are `f(x) / D(x)` with the denominator built
/// from `x`, `x-1` (bounded by the negative integer exponents there) and
/// the square-free part of the remaining leading-coefficient factor (the
/// apparent points, where poles of increasing order are tried until the
/// expected dimension is reached).
pub fn rational_kernel(op: &DiffOp, expected_dim: usize) -> Result<Vec<RatFunc>> {
    let neg_bound = |pt: SingPoint| -> Result<usize> {
        let d = local_exponents(op, pt)?;
        let Some(exps) = d.exponents else {
            return Ok(0);
        };
        Ok(exps
            .iter()
            .filter_map(to_i64)
            .filter(|v| *v < 0)
            .map(|v| (-v) as usize)
            .max()
            .unwrap_or(0))
    };
    let mu = neg_bound(SingPoint::Zero)?;
    let nu = neg_bound(SingPoint::One)?;
    let di = local_exponents(op, SingPoint::Infinity)?;
    let deg_inf = di
        .exponents
        .unwrap_or_default()
        .iter()
        .filter_map(|e| to_i64(e))
        .map(|v| -v)
        .max()
        .unwrap_or(0)
        .max(0) as usize;
    // square-free apparent-point factor of the leading coefficient
    let (_, coeffs) = op.cleared();
    let lead = coeffs.last().cloned().unwrap_or_else(UniPoly::one);
    let mut extra = lead.clone();
    for base in [UniPoly::x(), UniPoly::from_i64(&[-1, 1])] {
        loop {
            match extra.div_exact(&base) {
                Ok(q) => extra = q,
                Err(_) => break,
            }
        }
    }
    let extra = extra
        .div_exact(&extra.gcd(&extra.derivative()))
        .unwrap_or(extra.clone())
        .monic();
    for m in 0..=4usize {
        let den = &(&UniPoly::x().pow(mu) * &UniPoly::from_i64(&[-1, 1]).pow(nu))
            * &extra.pow(m);
        let bound = den.deg0() + deg_inf + 2;
        let sols = kernel_with_denominator(op, &den, bound);
        if sols.len() >= expected_dim {
            return Ok(sols
                .into_iter()
                .map(|f| RatFunc::new(f, den.clone()).expect("nonzero denominator"))
                .collect());
        }
    }
    Err(Error::RationalKernelNotFound(format!(
        "no denominator ansatz reached dimension {expected_dim}"
    )))
}

/// Kernel elements of the form `f / den` with `f` polynomial of degree
/// `<= bound`, computed entirely in polynomial arithmetic:
/// `(f/den)^(j) = N_j / den^(j+1)` with
/// `N_(j+1) = N_j' den - (j+1) N_j den'`, so `op(f/den) = 0` iff
/// `sum_j p_j N_j den^(order-j) = 0` after clearing `den^(order+1)`.
pub fn kernel_with_denominator(op: &DiffOp, den: &UniPoly, bound: usize) -> Vec<UniPoly> {
    let (_, coeffs) = op.cleared();
    let order = coeffs.len() - 1;
    let dprime = den.derivative();
    let mut den_pows = vec![UniPoly::one()];
    for _ in 0..order {
        den_pows.push(&den_pows.last().unwrap().clone() * den);
    }
    let mut images: Vec<UniPoly> = Vec::with_capacity(bound + 1);
    let mut maxdeg = 0usize;
    for k in 0..=bound {
        let mut nj = UniPoly::monomial(BigRat::one(), k);
        let mut acc = UniPoly::zero();
        for (j, pj) in coeffs.iter().enumerate() {
            if !pj.is_zero() {
                acc = &acc + &(&(pj * &nj) * &den_pows[order - j]);
            }
            if j < order {
                nj = &(&nj.derivative() * den) - &(&nj.scale(&rint(j as i64 + 1)) * &dprime);
            }
        }
        maxdeg = maxdeg.max(acc.deg0());
        images.push(acc);
    }
    let mut rows = Vec::with_capacity(maxdeg + 1);
    for r in 0..=maxdeg {
        rows.push(images.iter().map(|p| p.coeff(r)).collect::<Vec<_>>());
    }
    QMatrix::from_rows(rows)
        .nullspace()
        .into_iter()
        .map(UniPoly::new)
        .collect()
}

// ---------------------------------------------------------------------------
// transport of factorizations along shift relations

/// Transport a factorization of `H` to one of `H'` along a shift relation
/// `H' P = Q H` with `order(P) = 1`, following the case split: if `P` is a
/// constant multiple of the last factor, drop it and prepend `Q`; if `P` is
/// right-divisible by the last factor (two-factor case), the invariant flag
/// reverses; otherwise `P` transports the filtration.
pub fn propagate_factorization(
    h: &DiffOp,
    hprime: &DiffOp,
    triple: &ShiftTriple,
    f: &Factorization,
) -> Result<Factorization> {
    let p = &triple.p;
    if p.order() != Some(1) && triple.q.order() != Some(1) {
        return Err(Error::CaseUndetermined(
            "transport needs an order-one shift operator".into(),
        ));
    }
    let consistency = (&(hprime * p) - &(&triple.q * h)).is_zero();
    if !consistency {
        return Err(Error::CaseUndetermined(
            "shift relation does not hold for the given operators".into(),
        ));
    }
    if p.order() == Some(1) {
        let last = f.factors.last().unwrap();
        if p.eq_up_to_scalar(last).is_some() {
            // H' = Q o F_1 o ... o F_{t-1}
            let mut factors = vec![triple.q.clone()];
            factors.extend_from_slice(&f.factors[..f.factors.len() - 1]);
            let cand = Factorization::new(factors);
            if cand.verifies_against(hprime) {
                return Ok(cand);
            }
            return Err(Error::CaseUndetermined(
                "dropped-factor transport does not re-multiply".into(),
            ));
        }
        if f.factors.len() == 2 {
            let (q1, r1) = p.right_divmod(last)?;
            if r1.is_zero() {
                // P = P1 o F_t: the proper subspace P1(Sol(F_1)) transports,
                // reversing the order pattern
                let front = &f.factors[0];
                let deg = 4 + front
                    .coeffs()
                    .iter()
                    .map(|c| c.num().deg0())
                    .max()
                    .unwrap_or(0);
                let (g2, _w) = solve_intertwiner(&q1, front, front.order0(), deg)?;
                let (g1, rem) = hprime.right_divmod(&g2)?;
                if !rem.is_zero() {
                    return Err(Error::CaseUndetermined(
                        "transported factor does not divide".into(),
                    ));
                }
                let cand = Factorization::new(vec![g1, g2]);
                if cand.verifies_against(hprime) {
                    return Ok(cand);
                }
                return Err(Error::CaseUndetermined(
                    "reversed transport does not re-multiply".into(),
                ));
            }
            // generic case: P keeps the filtration
            let deg = 4 + last
                .coeffs()
                .iter()
                .map(|c| c.num().deg0())
                .max()
                .unwrap_or(0);
            let (f2p, _w) = solve_intertwiner(p, last, last.order0(), deg)?;
            let (f1p, rem) = hprime.right_divmod(&f2p)?;
            if !rem.is_zero() {
                return Err(Error::CaseUndetermined(
                    "filtered transport does not divide".into(),
                ));
            }
            let cand = Factorization::new(vec![f1p, f2p]);
            if cand.verifies_against(hprime) {
                return Ok(cand);
            }
            return Err(Error::CaseUndetermined(
                "filtered transport does not re-multiply".into(),
            ));
        }
    }
    Err(Error::CaseUndetermined(
        "no applicable transport case".into(),
    ))
}

/// `E^{(n)}(1) = ((n+3)!/n!) (n+e7)(n+e8)(n+e9)` for the `s = n+1` members.
pub fn e6_en_at_one(e8: &ExponentSet, n: usize) -> BigRat {
    let e9 = rint(3) - e8.e.iter().fold(BigRat::zero(), |a, b| a + b);
    let nn = rint(n as i64);
    factorial(n + 3) / factorial(n)
        * (&nn + &e8.at(7))
        * (&nn + &e8.at(8))
        * (&nn + &e9)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use crate::shifts::{h6_triple, ShiftDescriptor};

    fn h6_e() -> ExponentSet {
        ExponentSet::new(vec![
            rat(1, 7),
            rat(2, 7),
            rat(4, 7),
            rat(1, 5),
            rat(2, 5),
            rat(3, 5),
            rat(1, 11),
            rat(2, 11),
            rat(6, 11),
        ])
    }

    #[test]
    fn h6_e9_zero_factors() {
        let mut e = h6_e();
        e.e[8] = rint(0);
        let t10 = rat(3, 13);
        let f = factor_h6_special(&e, &t10, H6Case::E9Zero).unwrap();
        assert_eq!(f.type_tag, vec![5, 1]);
        assert!(f.verifies_against(&build_h6(&e, &t10).op));
    }

    #[test]
    fn h6_e9_one_factors() {
        let mut e = h6_e();
        e.e[8] = rint(1);
        let t10 = rat(3, 13);
        let f = factor_h6_special(&e, &t10, H6Case::E9One).unwrap();
        assert_eq!(f.type_tag, vec![1, 5]);
        assert!(f.verifies_against(&build_h6(&e, &t10).op));
    }

    fn h6_with_s(sval: i64) -> ExponentSet {
        // adjust e9 so that s = sval: sum of exponents = 6 - 3 s
        let mut e = h6_e();
        let partial: BigRat = e.e[..8].iter().fold(BigRat::zero(), |a, b| a + b);
        e.e[8] = rint(6 - 3 * sval) - partial;
        e
    }

    #[test]
    fn h6_s_cases_factor() {
        let t10 = rat(3, 13);
        for (sval, case, tag) in [
            (1, H6Case::SOne, vec![1, 1, 1, 3]),
            (0, H6Case::SZero, vec![1, 1, 3, 1]),
            (-1, H6Case::SMinusOne, vec![1, 3, 1, 1]),
            (-2, H6Case::SMinusTwo, vec![3, 1, 1, 1]),
        ] {
            let e = h6_with_s(sval);
            let f = factor_h6_special(&e, &t10, case).unwrap();
            assert_eq!(f.type_tag, tag, "s = {sval}");
            assert!(
                f.verifies_against(&build_h6(&e, &t10).op),
                "s = {sval} re-multiplication"
            );
        }
    }

    #[test]
    fn h6_wrong_case_rejected() {
        let e = h6_e();
        assert!(matches!(
            factor_h6_special(&e, &rat(3, 13), H6Case::E9Zero),
            Err(Error::ConditionNotMet(_))
        ));
    }

    #[test]
    fn kummer_types_and_degrees() {
        let (b, c) = (rat(2, 5), rat(3, 7));
        for (av, ktype, deg) in [
            (-2, KummerType::I, 2usize),
            (-1, KummerType::I, 1),
            (0, KummerType::I, 0),
            (1, KummerType::IV, 0),
            (2, KummerType::IV, 1),
        ] {
            let a = rint(av);
            let k = factor_e2_kummer(&a, &b, &c).unwrap();
            assert_eq!(k.kummer_type, ktype, "a = {av}");
            assert_eq!(k.g.degree(), Some(deg), "a = {av}");
            assert!(k
                .factorization
                .verifies_against(&build_e2(&a, &b, &c).op));
        }
        // c - a rows
        let a = rat(1, 3);
        for (off, ktype, deg) in [
            (-1, KummerType::II, 1usize),
            (0, KummerType::II, 0),
            (1, KummerType::III, 0),
            (2, KummerType::III, 1),
            (3, KummerType::III, 2),
        ] {
            let c = &a + &rint(off);
            let k = factor_e2_kummer(&a, &b, &c).unwrap();
            assert_eq!(k.kummer_type, ktype, "c-a = {off}");
            assert_eq!(k.g.degree(), Some(deg), "c-a = {off}");
            assert!(k
                .factorization
                .verifies_against(&build_e2(&a, &b, &c).op));
        }
        // generic: not reducible
        assert!(matches!(
            factor_e2_kummer(&rat(1, 3), &rat(2, 5), &rat(3, 7)),
            Err(Error::NotReducible(_))
        ));
    }

    #[test]
    fn kummer_apparent_points_are_zeros_of_g() {
        // pick a case with a rational zero of g: a = -1 gives a linear g
        let (b, c) = (rat(2, 5), rat(3, 7));
        let k = factor_e2_kummer(&rint(-1), &b, &c).unwrap();
        let zeros: Vec<BigRat> = k
            .g
            .rational_roots()
            .unwrap()
            .into_iter()
            .map(|(r, _)| r)
            .collect();
        assert_eq!(k.factorization.apparent_singularities, zeros);
        for f in &k.factorization.factors {
            assert!(extra_singularities_are_apparent(f).unwrap());
        }
    }

    #[test]
    fn polynomial_solutions_of_catalog_operators() {
        // E(0, b, c) kills the constants
        let e2 = build_e2(&rint(0), &rat(2, 5), &rat(3, 7)).op;
        let sols = polynomial_solutions(&e2, 3);
        assert_eq!(sols.len(), 1);
        assert!(sols[0].is_constant());
        // H6 with e7 = -2 has a polynomial solution of degree <= 2
        let mut e = h6_e();
        e.e[6] = rint(-2);
        let h6 = build_h6(&e, &rat(3, 13)).op;
        let sols6 = polynomial_solutions(&h6, 2);
        assert_eq!(sols6.len(), 1);
        let p = &sols6[0];
        assert!(h6.apply_poly(p).is_zero());
        // H6 with e1 + s = -1: x^{e1} times a polynomial of degree <= 1
        let mut e2set = h6_e();
        // choose e1 so that e1 + s = -1: s = (6 - sum)/3 depends on e1 too;
        // s + e1 = -1 means e1 = -1 - s; with sum = e1 + rest:
        // s = (6 - e1 - rest)/3 => 3 s = 6 - e1 - rest, e1 = -1 - s
        // => 3 s = 6 + 1 + s - rest => s = (7 - rest)/2
        let rest: BigRat = e2set.e[1..].iter().fold(BigRat::zero(), |a, b| a + b);
        let s = (rint(7) - &rest) / rint(2);
        e2set.e[0] = rint(-1) - &s;
        assert_eq!(e2set.s(), s);
        let h6b = build_h6(&e2set, &rat(3, 13)).op;
        let twisted = addition_raw(
            &h6b,
            &crate::transforms::GaugeFactor::new(-e2set.at(1), rint(0)),
        );
        let sols_tw = polynomial_solutions(&twisted, 1);
        assert_eq!(sols_tw.len(), 1);
    }

    #[test]
    fn h5_factor_cases() {
        // r = 2
        let mut e = ExponentSet::new(vec![
            rat(1, 7),
            rat(2, 7),
            rat(4, 7),
            rat(1, 5),
            rat(2, 5),
            rat(3, 5),
            rat(1, 11),
            rat(2, 11),
        ]);
        // r = (sum - 6)/3 = 2 => sum = 12; adjust e8
        let partial: BigRat = e.e[..7].iter().fold(BigRat::zero(), |a, b| a + b);
        e.e[7] = rint(12) - partial;
        assert_eq!(e.r(), rint(2));
        let u = rat(5, 13);
        let f = factor_h5_cases(&e, &u).unwrap();
        assert_eq!(f.type_tag, vec![3, 1, 1]);
        assert!(f.verifies_against(&build_h5(&e, &u).op));

        // e1 - r = 1
        let mut e2 = ExponentSet::new(vec![
            rat(1, 7),
            rat(2, 7),
            rat(4, 7),
            rat(1, 5),
            rat(2, 5),
            rat(3, 5),
            rat(1, 11),
            rat(2, 11),
        ]);
        // e1 = r + 1 with r = (sum - 6)/3: e1 = (e2..e8 sum - 3)/2
        let rest: BigRat = e2.e[1..].iter().fold(BigRat::zero(), |a, b| a + b);
        e2.e[0] = (&rest - &rint(3)) / rint(2);
        assert_eq!(e2.at(1) - e2.r(), rint(1));
        let f2 = factor_h5_cases(&e2, &u).unwrap();
        assert_eq!(f2.type_tag, vec![1, 4]);
        assert!(f2.verifies_against(&build_h5(&e2, &u).op));
    }

    #[test]
    fn h4_factor_cases() {
        let mut c = ExponentSet::new(vec![
            rat(1, 7),
            rat(2, 7),
            rat(1, 5),
            rat(2, 5),
            rat(1, 11),
            rat(2, 11),
            rint(1),
        ]);
        let u = rat(1, 3);
        let f1 = factor_h4_cases(&c, &u).unwrap();
        assert_eq!(f1.type_tag, vec![1, 3]);
        assert!(f1.verifies_against(&build_h4(&c, &u).op));
        c.e[6] = rint(0);
        let f0 = factor_h4_cases(&c, &u).unwrap();
        assert_eq!(f0.type_tag, vec![3, 1]);
        assert!(f0.verifies_against(&build_h4(&c, &u).op));
        // c7 = 2: type [1,3] via search
        c.e[6] = rint(2);
        let f2 = factor_h4_cases(&c, &u).unwrap();
        assert_eq!(f2.type_tag, vec![1, 3]);
        assert!(f2.verifies_against(&build_h4(&c, &u).op));
    }

    #[test]
    fn sa_e5_is_reducible_131() {
        // saE5 = (x^3(x-1)^3 D + 3x^2(x-1)^2(2x-1)) o X o D with X
        // essentially H3
        let n = crate::catalog::build_self_adjoint(Family::SaE5).unwrap();
        let y = n.op.right_div_exact(&DiffOp::d()).unwrap();
        // left factor x^3(x-1)^3 D + 3 x^2 (x-1)^2 (2x-1)
        let cube = &UniPoly::x().pow(3) * &UniPoly::from_i64(&[-1, 1]).pow(3);
        let dcube = cube.derivative();
        let left = &DiffOp::from_poly(cube) * &DiffOp::d() + DiffOp::from_poly(dcube);
        let _ = y;
        // verify against the printed middle factor directly
        let xop = crate::parse::parse_op(
            "D^3 + 9*(2*x-1)/(2*x*(x-1))*D^2 + (76*x^2-76*x+13)/(4*x^2*(x-1)^2)*D \
             + (64*x^3-96*x^2+34*x-1)/(8*x^3*(x-1)^3)",
        )
        .unwrap();
        let prod = &(&left * &xop) * &DiffOp::d();
        assert_eq!(prod, n.op);
        let f = Factorization::new(vec![left, xop, DiffOp::d()]);
        assert_eq!(f.type_tag, vec![1, 3, 1]);
    }

    #[test]
    fn interpolative_identity_holds() {
        let e = h6_e();
        assert!(e6_interpolative_check(&e).unwrap());
        // pole detection
        let es1 = {
            let mut f = h6_e();
            let partial: BigRat = f.e[..8].iter().fold(BigRat::zero(), |a, b| a + b);
            f.e[8] = rint(3) - partial; // s = 1
            f
        };
        assert!(matches!(
            e6_interpolative_check(&es1),
            Err(Error::PoleAtSpecialS(_))
        ));
    }

    #[test]
    fn e6_1113_suite() {
        let e8 = ExponentSet::new(vec![
            rat(1, 7),
            rat(2, 7),
            rat(4, 7),
            rat(1, 5),
            rat(2, 5),
            rat(3, 5),
            rat(1, 11),
            rat(2, 11),
        ]);
        for n in 1..=2usize {
            let dec = e6_1113_decomposition(&e8, n).unwrap();
            // E^(n) = E6 at the n-fold ascending sh3 of the s = 1 member
            let mut e = e8.e.clone();
            let e9 = rint(3) - e8.e.iter().fold(BigRat::zero(), |a, b| a + b);
            e.push(e9);
            let base = ExponentSet::new(e);
            let en = build_e6(&base.shifted(&[
                -(n as i64),
                -(n as i64),
                -(n as i64),
                -(n as i64),
                -(n as i64),
                -(n as i64),
                n as i64,
                n as i64,
                n as i64,
            ]))
            .op;
            // Lemma-level identities
            assert_eq!(&dec.q1 * &dec.q2, en, "Q1 Q2 = E^(n), n = {n}");
            assert_eq!(
                &dec.q1 * &dec.p,
                DiffOp::d_power(n + 3),
                "Q1 P = D^(n+3), n = {n}"
            );
            assert_eq!(
                en.apply_func(&RatFunc::one()),
                RatFunc::constant(e6_en_at_one(&e8, n)),
                "E^(n)(1), n = {n}"
            );
            // kernel of P^(n) sits inside the polynomials of degree n+2
            let kerp = polynomial_solutions(&dec.p, n + 2);
            assert_eq!(kerp.len(), n, "dim Ker P^(n), n = {n}");
            // L1 L2 L3 recovers Q1 up to the product of the f's
            let mut ff = RatFunc::one();
            for f in &dec.f_values {
                ff = &ff * f;
            }
            let recomposed = (&(&dec.l1 * &dec.l2) * &dec.l3).lmul_func(&ff);
            assert_eq!(recomposed, dec.q1, "L1 L2 L3 recovers Q1, n = {n}");
        }
    }

    #[test]
    fn propagate_h6_e9_shift() {
        // H6(e9=0) = H5 o D with P_{--+} = D: the transported factorization
        // of H6(sh3(e)) is D o (H5-like)
        let mut e = h6_e();
        e.e[8] = rint(0);
        let t10 = rat(3, 13);
        let h = build_h6(&e, &t10).op;
        let f = factor_h6_special(&e, &t10, H6Case::E9Zero).unwrap();
        let sh3 = ShiftDescriptor::h6_sh3();
        let t = h6_triple(&sh3, &e);
        let eshift = sh3.apply(&e);
        let hprime = build_h6(&eshift, &(&t10 - &t.alpha)).op;
        let triple = ShiftTriple {
            p: t.p.clone(),
            q: t.q.clone(),
            alpha: t.alpha.clone(),
            descriptor: sh3,
        };
        let moved = propagate_factorization(&h, &hprime, &triple, &f).unwrap();
        assert_eq!(moved.type_tag, vec![1, 5]);
        assert!(moved.verifies_against(&hprime));
    }

    #[test]
    fn propagate_e2_kummer_type() {
        // a = 0 is Kummer type I with F2 = D; the a-ascending shift sends it
        // to a = 1, type IV, with the same [1,1] pattern transported through
        // the reversed case (P = x D is right-divisible by F2 = D)
        let (b, c) = (rat(2, 5), rat(3, 7));
        let a = rint(0);
        let k0 = factor_e2_kummer(&a, &b, &c).unwrap();
        let h = build_e2(&a, &b, &c).op;
        let aup = rint(1);
        let hprime = build_e2(&aup, &b, &c).op;
        let sh = ShiftDescriptor::e2_a(true);
        let (p, q) = crate::shifts::e2_pair(&sh, &ExponentSet::new(vec![a, b.clone(), c.clone()]));
        let triple = ShiftTriple {
            p,
            q,
            alpha: BigRat::zero(),
            descriptor: sh,
        };
        let moved = propagate_factorization(&h, &hprime, &triple, &k0.factorization).unwrap();
        assert_eq!(moved.type_tag, vec![1, 1]);
        assert!(moved.verifies_against(&hprime));
        // and the direct Kummer factorization at a = 1 is type IV
        let k1 = factor_e2_kummer(&aup, &b, &c).unwrap();
        assert_eq!(k1.kummer_type, KummerType::IV);
    }
}
