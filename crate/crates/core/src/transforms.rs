//! Addition (gauge conjugation), middle convolution, coordinate changes and
//! the transformation pipelines between the operator families.
//!
//! All pipelines carry their exponent bookkeeping explicitly: each one
//! computes the target parameters by the affine renaming that the
//! construction induces and then *recognizes* the transformed operator
//! against the catalog builder, exactly and up to the head normalization.

use crate::catalog::{
    build_h3, build_h4, build_h5, build_h6, extract_accessory, normalize_to_family_head,
    ExponentSet, Family, NamedOperator,
};
use crate::rat::{is_integer, rint, BigRat};
use crate::ratfunc::RatFunc;
use crate::weyl::{to_theta_form, DiffOp};
use crate::{Error, Result};
use num_traits::Zero;

/// Exponents of the gauge function `x^{g0} (x-1)^{g1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeFactor {
    pub g0: BigRat,
    pub g1: BigRat,
}

impl GaugeFactor {
    pub fn new(g0: BigRat, g1: BigRat) -> Self {
        GaugeFactor { g0, g1 }
    }

    pub fn inverse(&self) -> Self {
        GaugeFactor {
            g0: -self.g0.clone(),
            g1: -self.g1.clone(),
        }
    }
}

/// The explicit exponent renaming a pipeline induces, as labeled values.
#[derive(Clone, Debug)]
pub struct RenamingMap {
    pub labels: Vec<&'static str>,
    pub values: Vec<BigRat>,
}

impl RenamingMap {
    pub fn exponents(&self) -> ExponentSet {
        ExponentSet::new(self.values.clone())
    }
}

/// `Ad(x^{g0}(x-1)^{g1}) P = f o P o f^{-1}` with the honest
/// rational-function coefficients: substitute `D -> D - g0/x - g1/(x-1)`
/// coefficientwise.
pub fn addition_raw(op: &DiffOp, f: &GaugeFactor) -> DiffOp {
    let dfree = &DiffOp::d()
        - &DiffOp::func(
            &RatFunc::new(
                crate::poly::UniPoly::constant(f.g0.clone()),
                crate::poly::UniPoly::x(),
            )
            .unwrap()
                + &RatFunc::new(
                    crate::poly::UniPoly::constant(f.g1.clone()),
                    crate::poly::UniPoly::from_i64(&[-1, 1]),
                )
                .unwrap(),
        );
    let mut acc = DiffOp::zero();
    let mut dpow = DiffOp::one();
    for (j, c) in op.coeffs().iter().enumerate() {
        if j > 0 {
            dpow = &dpow * &dfree;
        }
        if !c.is_zero() {
            acc = &acc + &dpow.lmul_func(c);
        }
    }
    acc
}

/// Addition, normalized back to content-free polynomial coefficients.
pub fn addition(op: &DiffOp, f: &GaugeFactor) -> DiffOp {
    addition_raw(op, f).polynomial_normalize()
}

/// `x^alpha o P o x^beta` for rational `alpha, beta` with `alpha + beta`
/// an integer: equals `x^(alpha+beta) sum p_j (D + beta/x)^j`.
pub fn conj_x_powers(op: &DiffOp, alpha: &BigRat, beta: &BigRat) -> Result<DiffOp> {
    power_sandwich(op, alpha, beta, &RatFunc::x())
}

/// `(x-1)^alpha o P o (x-1)^beta` with `alpha + beta` an integer.
pub fn conj_x1_powers(op: &DiffOp, alpha: &BigRat, beta: &BigRat) -> Result<DiffOp> {
    power_sandwich(op, alpha, beta, &RatFunc::from_poly(crate::poly::UniPoly::from_i64(&[-1, 1])))
}

fn power_sandwich(op: &DiffOp, alpha: &BigRat, beta: &BigRat, base: &RatFunc) -> Result<DiffOp> {
    let total = alpha + beta;
    if !is_integer(&total) {
        return Err(Error::NotDivisible(format!(
            "power sandwich needs an integer total exponent, got {total}"
        )));
    }
    let k = crate::rat::to_i64(&total).unwrap();
    // D + beta * base'/base
    let shift = &base.derivative() / base;
    let dnew = &DiffOp::d() + &DiffOp::func(shift.scale(beta));
    let mut acc = DiffOp::zero();
    let mut dpow = DiffOp::one();
    for (j, c) in op.coeffs().iter().enumerate() {
        if j > 0 {
            dpow = &dpow * &dnew;
        }
        if !c.is_zero() {
            acc = &acc + &dpow.lmul_func(c);
        }
    }
    let factor = base.pow(k)?;
    Ok(acc.lmul_func(&factor))
}

/// Substitution `x -> 1 - x` (exact on polynomial-coefficient operators; no
/// renormalization).
pub fn coordinate_change_1mx(op: &DiffOp) -> DiffOp {
    op.subst_one_minus_x()
}

/// `x^alpha o (P|_{x -> 1/x}) o x^beta` with `alpha + beta` an integer.
/// The scalar is kept exact (no renormalization), so identities like the
/// coordinate-change symmetries can be asserted with their literal signs.
pub fn coordinate_change_inv(op: &DiffOp, alpha: &BigRat, beta: &BigRat) -> Result<DiffOp> {
    let inv = op.subst_inverse();
    conj_x_powers(&inv, alpha, beta)
}

/// Middle convolution `mc_mu`: left-multiply by `D^k` until the result has a
/// pure `(theta, D)`-form, replace `theta` by `theta - mu`, and strip `D`
/// from the left as often as possible. The result is independent of the
/// chosen `k`; this is asserted by re-running with `k + 1`.
pub fn middle_convolution(op: &DiffOp, mu: &BigRat) -> Result<DiffOp> {
    let base = op.polynomial_normalize();
    let k0 = smallest_theta_power(&base)?;
    let first = mc_with_k(&base, mu, k0)?;
    let second = mc_with_k(&base, mu, k0 + 1)?;
    if first
        .polynomial_normalize()
        .eq_up_to_scalar(&second.polynomial_normalize())
        .is_none()
    {
        return Err(Error::RecognitionFailure(
            "middle convolution depends on k".into(),
        ));
    }
    Ok(first)
}

fn smallest_theta_power(op: &DiffOp) -> Result<usize> {
    for k in 0..=(op.order0() + 8) {
        let m = &DiffOp::d_power(k) * op;
        if to_theta_form(&m)?.q() == 0 {
            return Ok(k);
        }
    }
    Err(Error::RecognitionFailure(
        "no D-power yields a (theta, D)-form".into(),
    ))
}

fn mc_with_k(op: &DiffOp, mu: &BigRat, k: usize) -> Result<DiffOp> {
    let m = &DiffOp::d_power(k) * op;
    let theta = to_theta_form(&m)?;
    if theta.q() != 0 {
        return Err(Error::RecognitionFailure(
            "operator has x-parts at this k".into(),
        ));
    }
    let shifted = theta.substitute_theta(mu).to_op();
    let (_, stripped) = shifted.strip_left_d();
    Ok(stripped)
}

/// Predicted order drop of `mc_mu` from the scheme: multiplicity (mod 1) of
/// 0 among the exponents at 0 and 1 plus multiplicity of `mu` at infinity,
/// minus the order.
pub fn mc_order_drop(scheme: &crate::fuchs::RiemannScheme, mu: &BigRat) -> i64 {
    let count = |exps: &[BigRat], v: &BigRat| {
        exps.iter().filter(|e| is_integer(&(*e - v))).count() as i64
    };
    count(&scheme.at0, &BigRat::zero()) + count(&scheme.at1, &BigRat::zero())
        + count(&scheme.atinf, mu)
        - scheme.order() as i64
}

// ---------------------------------------------------------------------------
// pipelines

fn recognize(
    family: Family,
    op: &DiffOp,
    exps: &ExponentSet,
    what: &str,
) -> Result<NamedOperator> {
    let normalized = normalize_to_family_head(family, &op.polynomial_normalize())
        .map_err(|_| Error::RecognitionFailure(format!("{what}: head shape")))?;
    let accessory = extract_accessory(family, &normalized)?;
    let built = match family {
        Family::H3 => build_h3(exps, &accessory),
        Family::H4 => build_h4(exps, &accessory),
        Family::H5 => build_h5(exps, &accessory),
        Family::H6 => build_h6(exps, &accessory),
        _ => {
            return Err(Error::RecognitionFailure(format!(
                "{what}: unsupported target family"
            )))
        }
    };
    if built.op != normalized {
        return Err(Error::RecognitionFailure(format!(
            "{what}: operator does not match the {family} form"
        )));
    }
    Ok(built)
}

/// `H3 -> H6`: left-multiply `x(x-1)`, gauge by `x^{g0}(x-1)^{g1}`, then
/// middle convolution with parameter `u`.
pub fn pipeline_h3_to_h6(
    h3: &NamedOperator,
    g0: &BigRat,
    g1: &BigRat,
    u: &BigRat,
) -> Result<(NamedOperator, RenamingMap)> {
    let b = &h3.exponents;
    let b7 = rint(3) - b.e.iter().fold(BigRat::zero(), |a, x| a + x);
    let gauged = addition_raw(&h3.op.polynomial_normalize(), &GaugeFactor::new(g0.clone(), g1.clone()));
    let l = gauged.lmul_func(&RatFunc::from_poly(
        &crate::poly::UniPoly::x() * &crate::poly::UniPoly::from_i64(&[-1, 1]),
    ));
    if !l.has_polynomial_coeffs() {
        return Err(Error::RecognitionFailure(
            "H3 -> H6: x(x-1) Ad(X) H3 is not polynomial".into(),
        ));
    }
    let m = mc_with_k(&l, u, 3)?;
    if m.order() != Some(6) {
        return Err(Error::RecognitionFailure(format!(
            "H3 -> H6 produced order {:?}",
            m.order()
        )));
    }
    let values = vec![
        g0 + u,
        b.at(1) + g0 + u,
        b.at(2) + g0 + u,
        g1 + u,
        b.at(3) + g1 + u,
        b.at(4) + g1 + u,
        b.at(5) - g0 - g1 - u,
        b.at(6) - g0 - g1 - u,
        &b7 - g0 - g1 - u,
    ];
    let map = RenamingMap {
        labels: vec!["e1", "e2", "e3", "e4", "e5", "e6", "e7", "e8", "e9"],
        values: values.clone(),
    };
    let target = recognize(Family::H6, &m, &ExponentSet::new(values), "H3 -> H6")?;
    Ok((target, map))
}

/// `H3 -> H5`: gauge by `(x-1)^{g1}`, left-multiply `(x-1)`, middle
/// convolution with `u`, then exchange 0 and infinity.
pub fn pipeline_h3_to_h5(
    h3: &NamedOperator,
    g1: &BigRat,
    u: &BigRat,
) -> Result<(NamedOperator, RenamingMap)> {
    let b = &h3.exponents;
    let b7 = rint(3) - b.e.iter().fold(BigRat::zero(), |a, x| a + x);
    let gauged = addition_raw(&h3.op.polynomial_normalize(), &GaugeFactor::new(BigRat::zero(), g1.clone()));
    let l = gauged.lmul_func(&RatFunc::from_poly(crate::poly::UniPoly::from_i64(&[-1, 1])));
    if !l.has_polynomial_coeffs() {
        return Err(Error::RecognitionFailure(
            "H3 -> H5: (x-1) Ad((x-1)^g1) H3 is not polynomial".into(),
        ));
    }
    let m = mc_with_k(&l, u, 2)?;
    if m.order() != Some(5) {
        return Err(Error::RecognitionFailure(format!(
            "H3 -> H5 produced order {:?}",
            m.order()
        )));
    }
    // exchange x = 0 and x = infinity, conjugating so the new exponents at 0
    // become {0, 1, ...}
    let c = u - &rint(1);
    let swapped = coordinate_change_inv(&m, &c, &-c.clone())?;
    let values = vec![
        b.at(5) - g1,
        b.at(6) - g1,
        &b7 - g1,
        g1 + u + rint(1),
        b.at(3) + g1 + u + rint(1),
        b.at(4) + g1 + u + rint(1),
        b.at(1),
        b.at(2),
    ];
    let map = RenamingMap {
        labels: vec!["e1", "e2", "e3", "e4", "e5", "e6", "e7", "e8"],
        values: values.clone(),
    };
    let target = recognize(Family::H5, &swapped, &ExponentSet::new(values), "H3 -> H5")?;
    Ok((target, map))
}

/// `H3 -> H4`: middle convolution with `u` directly.
pub fn pipeline_h3_to_h4(h3: &NamedOperator, u: &BigRat) -> Result<(NamedOperator, RenamingMap)> {
    let b = &h3.exponents;
    let b7 = rint(3) - b.e.iter().fold(BigRat::zero(), |a, x| a + x);
    let m = mc_with_k(&h3.op.polynomial_normalize(), u, 1)?;
    if m.order() != Some(4) {
        return Err(Error::RecognitionFailure(format!(
            "H3 -> H4 produced order {:?}",
            m.order()
        )));
    }
    let values = vec![
        b.at(1) + u,
        b.at(2) + u,
        b.at(3) + u,
        b.at(4) + u,
        b.at(5) - u,
        b.at(6) - u,
        &b7 - u,
    ];
    let map = RenamingMap {
        labels: vec!["c1", "c2", "c3", "c4", "c5", "c6", "c7"],
        values: values.clone(),
    };
    let target = recognize(Family::H4, &m, &ExponentSet::new(values), "H3 -> H4")?;
    Ok((target, map))
}

/// `H6 -> H3`: substitute `theta -> theta - (s-1)`, strip `D^3` from the
/// left, then gauge both finite points to exponent 0.
pub fn pipeline_h6_to_h3(h6: &NamedOperator) -> Result<(NamedOperator, RenamingMap)> {
    let e = &h6.exponents;
    let s = e.s();
    let t = &s - &rint(1);
    let theta = to_theta_form(&h6.op.polynomial_normalize())?;
    let shifted = theta.substitute_theta(&t).to_op();
    let (k, mch) = shifted.strip_left_d();
    if k != 3 || mch.order() != Some(3) {
        return Err(Error::RecognitionFailure(format!(
            "H6 -> H3: stripped {k} powers of D"
        )));
    }
    // x^{-(t+e1)-1} (x-1)^{-(t+e4)-1} o mcH o x^{t+e1} (x-1)^{t+e4}
    let bx = &t + &e.at(1);
    let b1 = &t + &e.at(4);
    let step1 = conj_x_powers(&mch, &(-&bx - rint(1)), &bx)?;
    let step2 = conj_x1_powers(&step1, &(-&b1 - rint(1)), &b1)?;
    let values = vec![
        e.at(2) - e.at(1),
        e.at(3) - e.at(1),
        e.at(5) - e.at(4),
        e.at(6) - e.at(4),
        e.at(1) + e.at(4) + e.at(7) + &t,
        e.at(1) + e.at(4) + e.at(8) + &t,
    ];
    let map = RenamingMap {
        labels: vec!["b1", "b2", "b3", "b4", "b5", "b6"],
        values: values.clone(),
    };
    let target = recognize(Family::H3, &step2, &ExponentSet::new(values), "H6 -> H3")?;
    Ok((target, map))
}

/// `H6 -> H5`: substitute `theta -> theta - (e9 - 1)` and strip one `D`.
pub fn pipeline_h6_to_h5(h6: &NamedOperator) -> Result<(NamedOperator, RenamingMap)> {
    let e = &h6.exponents;
    let mu = e.at(9) - rint(1);
    let theta = to_theta_form(&h6.op.polynomial_normalize())?;
    let shifted = theta.substitute_theta(&mu).to_op();
    let (k, mch) = shifted.strip_left_d();
    if k != 1 || mch.order() != Some(5) {
        return Err(Error::RecognitionFailure(format!(
            "H6 -> H5: stripped {k} powers of D"
        )));
    }
    let values = vec![
        e.at(1) + e.at(9),
        e.at(2) + e.at(9),
        e.at(3) + e.at(9),
        e.at(4) + e.at(9),
        e.at(5) + e.at(9),
        e.at(6) + e.at(9),
        e.at(7) - e.at(9),
        e.at(8) - e.at(9),
    ];
    let map = RenamingMap {
        labels: vec!["e1", "e2", "e3", "e4", "e5", "e6", "e7", "e8"],
        values: values.clone(),
    };
    let target = recognize(Family::H5, &mch, &ExponentSet::new(values), "H6 -> H5")?;
    Ok((target, map))
}

/// `H5 -> H3`: left-multiply `D`, substitute `theta -> theta - s`, strip
/// `D^3`, then gauge the finite points to exponent 0.
pub fn pipeline_h5_to_h3(h5: &NamedOperator) -> Result<(NamedOperator, RenamingMap)> {
    let e = &h5.exponents;
    let s = e.s();
    let m = &DiffOp::d() * &h5.op.polynomial_normalize();
    let theta = to_theta_form(&m)?;
    if theta.q() != 0 {
        return Err(Error::RecognitionFailure("H5 -> H3: x-parts remain".into()));
    }
    let shifted = theta.substitute_theta(&s).to_op();
    let (k, mch) = shifted.strip_left_d();
    if k != 3 || mch.order() != Some(3) {
        return Err(Error::RecognitionFailure(format!(
            "H5 -> H3: stripped {k} powers of D"
        )));
    }
    let bx = e.at(1) - rint(1) + &s;
    let b1 = e.at(4) - rint(1) + &s;
    let step1 = conj_x_powers(&mch, &-bx.clone(), &bx)?;
    let step2 = conj_x1_powers(&step1, &-b1.clone(), &b1)?;
    let values = vec![
        e.at(2) - e.at(1),
        e.at(3) - e.at(1),
        e.at(5) - e.at(4),
        e.at(6) - e.at(4),
        e.at(7) + rint(1) - &s + &bx + &b1,
        e.at(8) + rint(1) - &s + &bx + &b1,
    ];
    let map = RenamingMap {
        labels: vec!["b1", "b2", "b3", "b4", "b5", "b6"],
        values: values.clone(),
    };
    let target = recognize(Family::H3, &step2, &ExponentSet::new(values), "H5 -> H3")?;
    Ok((target, map))
}

/// `H4 -> H3`: substitute `theta -> theta - (c8 - 1)` and strip one `D`.
pub fn pipeline_h4_to_h3(h4: &NamedOperator) -> Result<(NamedOperator, RenamingMap)> {
    let c = &h4.exponents;
    let c8 = rint(4) - c.e.iter().fold(BigRat::zero(), |a, x| a + x);
    let tau = &c8 - &rint(1);
    let theta = to_theta_form(&h4.op.polynomial_normalize())?;
    let shifted = theta.substitute_theta(&tau).to_op();
    let (k, mch) = shifted.strip_left_d();
    if k != 1 || mch.order() != Some(3) {
        return Err(Error::RecognitionFailure(format!(
            "H4 -> H3: stripped {k} powers of D"
        )));
    }
    let values = vec![
        c.at(1) + &tau,
        c.at(2) + &tau,
        c.at(3) + &tau,
        c.at(4) + &tau,
        c.at(5) - &tau,
        c.at(6) - &tau,
    ];
    let map = RenamingMap {
        labels: vec!["b1", "b2", "b3", "b4", "b5", "b6"],
        values: values.clone(),
    };
    let target = recognize(Family::H3, &mch, &ExponentSet::new(values), "H4 -> H3")?;
    Ok((target, map))
}

// ---------------------------------------------------------------------------
// G6 / E6 symmetry parameter maps

pub type GParams = (ExponentSet, [BigRat; 7]);

/// Adjoint: `(2 - e1.., 2 - e4.., 1 - e7..)`, `(-a0, -a1, -a2, -a3, a4, a5, a6)`.
pub fn g6_adjoint_params(e: &ExponentSet, a: &[BigRat; 7]) -> GParams {
    let enew = ExponentSet::new(
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
    let anew = [
        -a[0].clone(),
        -a[1].clone(),
        -a[2].clone(),
        -a[3].clone(),
        a[4].clone(),
        a[5].clone(),
        a[6].clone(),
    ];
    (enew, anew)
}

/// `x -> 1-x`: blocks at 0 and 1 swap, `(-a0, -a2, -a1, -a3, -a5, -a4, -a6)`.
pub fn g6_ch1mx_params(e: &ExponentSet, a: &[BigRat; 7]) -> GParams {
    let enew = ExponentSet::new(vec![
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
    let anew = [
        -a[0].clone(),
        -a[2].clone(),
        -a[1].clone(),
        -a[3].clone(),
        -a[5].clone(),
        -a[4].clone(),
        -a[6].clone(),
    ];
    (enew, anew)
}

/// `x -> 1/x`: `(e7 - s, e4, e1 + s)` blockwise,
/// `(-a0, -a3, -a2, -a1, -a6, -a5, -a4)`.
pub fn g6_chinv_params(e: &ExponentSet, a: &[BigRat; 7]) -> GParams {
    let s = e.s();
    let enew = ExponentSet::new(vec![
        e.at(7) - &s,
        e.at(8) - &s,
        e.at(9) - &s,
        e.at(4),
        e.at(5),
        e.at(6),
        e.at(1) + &s,
        e.at(2) + &s,
        e.at(3) + &s,
    ]);
    let anew = [
        -a[0].clone(),
        -a[3].clone(),
        -a[2].clone(),
        -a[1].clone(),
        -a[6].clone(),
        -a[5].clone(),
        -a[4].clone(),
    ];
    (enew, anew)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build_e2, build_e6, build_g6, s10, t11};
    use crate::fuchs::scheme_matches;
    use crate::rat::rat;
    use num_traits::One;

    fn h3_generic() -> NamedOperator {
        build_h3(
            &ExponentSet::new(vec![
                rat(1, 7),
                rat(2, 7),
                rat(1, 5),
                rat(2, 5),
                rat(1, 11),
                rat(2, 11),
            ]),
            &rat(-2, 3),
        )
    }

    fn h6_generic() -> NamedOperator {
        build_h6(
            &ExponentSet::new(vec![
                rat(1, 7),
                rat(2, 7),
                rat(4, 7),
                rat(1, 5),
                rat(2, 5),
                rat(3, 5),
                rat(1, 11),
                rat(2, 11),
                rat(6, 11),
            ]),
            &rat(3, 13),
        )
    }

    #[test]
    fn addition_is_group_action() {
        let h3 = h3_generic();
        let f = GaugeFactor::new(rat(2, 7), rat(-3, 5));
        let there = addition(&h3.op, &f);
        let back = addition(&there, &f.inverse());
        assert!(back
            .eq_up_to_scalar(&h3.op.polynomial_normalize())
            .is_some());
        // trivial gauge is the identity
        let id = addition(&h3.op, &GaugeFactor::new(rint(0), rint(0)));
        assert!(id.eq_up_to_scalar(&h3.op.polynomial_normalize()).is_some());
    }

    #[test]
    fn mc_zero_is_identity_and_mc_inverts() {
        let h3 = h3_generic();
        let id = middle_convolution(&h3.op, &rint(0)).unwrap();
        assert!(id
            .polynomial_normalize()
            .eq_up_to_scalar(&h3.op.polynomial_normalize())
            .is_some());
        let mu = rat(3, 13);
        let fwd = middle_convolution(&h3.op, &mu).unwrap();
        let back = middle_convolution(&fwd, &-mu.clone()).unwrap();
        assert!(back
            .polynomial_normalize()
            .eq_up_to_scalar(&h3.op.polynomial_normalize())
            .is_some());
    }

    #[test]
    fn e2_coordinate_changes() {
        let (a, b, c) = (rat(1, 3), rat(2, 5), rat(3, 7));
        let e2 = build_e2(&a, &b, &c);
        // x -> 1-x lands on E(a, b, a+b-c+1)
        let moved = coordinate_change_1mx(&e2.op);
        let expect = build_e2(&a, &b, &(&a + &b - &c + rint(1)));
        assert_eq!(moved, expect.op);
        // involution
        assert_eq!(coordinate_change_1mx(&moved), e2.op);
        // x^{-a-1} E|_{x->1/x} o x^a = -E(a, 1-c+a, 1+a-b)
        let inv = coordinate_change_inv(&e2.op, &(-&a - rint(1)), &a).unwrap();
        let expect2 = build_e2(&a, &(BigRat::one() - &c + &a), &(rint(1) + &a - &b));
        assert_eq!(inv.eq_up_to_scalar(&expect2.op), Some(rint(-1)));
    }

    #[test]
    fn h6_coordinate_change_1mx_parameter_map() {
        let h6 = h6_generic();
        let e = &h6.exponents;
        let t10 = h6.accessory.clone().unwrap();
        let s = e.s();
        let (s11, s12) = (e.s1(1), e.s1(2));
        let (s23, s33) = (e.s2(3), e.s3(3));
        let t10p = rint(3) * &s * &s
            + (&s11 + &s12 - &s23 + rint(2)) * &s
            + rint(3) * &s11
            + rint(3) * &s12
            - rint(3) * &s23
            - rint(3) * &s33
            - rint(21)
            - &t10;
        let enew = ExponentSet::new(vec![
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
        let expect = build_h6(&enew, &t10p);
        assert_eq!(coordinate_change_1mx(&h6.op), expect.op);
    }

    #[test]
    fn h6_coordinate_change_inv_parameter_map() {
        // x^{-s-3} o H6|_{x -> 1/x} o x^s = -H6(e7-s.., e4.., e1+s.., T'10)
        // with T'10 = S10(e') + S10(e) - T10 (the accessory moves the same
        // way for every coordinate symmetry of H6, because a0 -> -a0 in the
        // G6 normal form)
        let h6 = h6_generic();
        let e = &h6.exponents;
        let t10 = h6.accessory.clone().unwrap();
        let s = e.s();
        let enew = ExponentSet::new(vec![
            e.at(7) - &s,
            e.at(8) - &s,
            e.at(9) - &s,
            e.at(4),
            e.at(5),
            e.at(6),
            e.at(1) + &s,
            e.at(2) + &s,
            e.at(3) + &s,
        ]);
        let t10p = s10(&enew) + s10(e) - &t10;
        let expect = build_h6(&enew, &t10p);
        let moved = coordinate_change_inv(&h6.op, &(-&s - rint(3)), &s).unwrap();
        assert_eq!(moved.eq_up_to_scalar(&expect.op), Some(rint(-1)));
        // the x -> 1-x and adjoint accessory maps have the same S10 form
        let eswap = ExponentSet::new(vec![
            e.at(4), e.at(5), e.at(6), e.at(1), e.at(2), e.at(3),
            e.at(7), e.at(8), e.at(9),
        ]);
        let t10swap = s10(&eswap) + s10(e) - &t10;
        assert_eq!(coordinate_change_1mx(&h6.op), build_h6(&eswap, &t10swap).op);
    }

    #[test]
    fn pipeline_h3_to_h6_matches_catalog() {
        let h3 = h3_generic();
        let (g0, g1, u) = (rat(2, 13), rat(-3, 13), rat(5, 13));
        let (h6, map) = pipeline_h3_to_h6(&h3, &g0, &g1, &u).unwrap();
        assert_eq!(h6.family, Family::H6);
        // s = 1 - u by the renaming
        assert_eq!(map.exponents().s(), rint(1) - &u);
        assert!(scheme_matches(&h6.op, &h6.scheme).unwrap());
        assert!(h6.scheme.fuchs_relation_holds());
    }

    #[test]
    fn pipeline_h3_to_h6_trivial_gauge_degenerates() {
        // with g0 = g1 = 0 and u = 0 the pipeline collapses: mc_0 is the
        // identity, so D^3 o x(x-1) H3 strips right back down to order 3,
        // while the order-drop formula (whose genericity hypothesis fails
        // here) would have predicted order 4
        let h3 = h3_generic();
        let l = h3
            .op
            .polynomial_normalize()
            .lmul_func(&RatFunc::from_poly(crate::poly::UniPoly::from_i64(&[0, -1, 1])));
        let m = middle_convolution(&l, &rint(0)).unwrap();
        assert_eq!(m.order(), Some(3));
        let scheme = crate::fuchs::riemann_scheme(&h3.op.polynomial_normalize()).unwrap();
        let d = mc_order_drop(&scheme, &rint(0));
        assert_eq!(scheme.order() as i64 - d, 4);
        // and the generic pipeline really gives order 6 = 3 - (-3)
        let gauged = addition(&h3.op, &GaugeFactor::new(rat(2, 13), rat(-3, 13)));
        let gauged_scheme = crate::fuchs::riemann_scheme(&gauged).unwrap();
        assert_eq!(mc_order_drop(&gauged_scheme, &rat(5, 13)), -3);
    }

    #[test]
    fn pipeline_h3_to_h5_matches_catalog() {
        let h3 = h3_generic();
        let (h5, map) = pipeline_h3_to_h5(&h3, &rat(-3, 13), &rat(5, 13)).unwrap();
        assert_eq!(h5.family, Family::H5);
        assert_eq!(map.exponents().s(), -rat(5, 13));
        assert!(h5.scheme.fuchs_relation_holds());
    }

    #[test]
    fn pipeline_h3_to_h4_matches_catalog() {
        let h3 = h3_generic();
        let (h4, _map) = pipeline_h3_to_h4(&h3, &rat(5, 13)).unwrap();
        assert_eq!(h4.family, Family::H4);
        assert!(h4.scheme.fuchs_relation_holds());
    }

    #[test]
    fn pipeline_h6_to_h3_and_back() {
        let h6 = h6_generic();
        let (h3, map) = pipeline_h6_to_h3(&h6).unwrap();
        assert_eq!(h3.family, Family::H3);
        // round trip: the renaming tells us which gauge recovers the source
        let e = &h6.exponents;
        let t = e.s() - rint(1);
        let g0 = &t + &e.at(1);
        let g1 = &t + &e.at(4);
        // source H6 exponents are recovered by the forward pipeline applied
        // to the recognized H3 with gauge (g0, g1) and u = -t... the mc
        // parameter inverts: e1 = g0 + u requires u = e.at(1) - g0' ...
        let u = -&t;
        let (h6back, backmap) = pipeline_h3_to_h6(&h3, &g0, &g1, &u).unwrap();
        let mut src = h6.exponents.e.clone();
        let mut dst = backmap.exponents().e.clone();
        src.sort();
        dst.sort();
        assert_eq!(src, dst);
        assert_eq!(h6back.op, h6.op);
        let _ = map;
    }

    #[test]
    fn pipeline_h6_to_h5_matches_remark() {
        let h6 = h6_generic();
        let (h5, map) = pipeline_h6_to_h5(&h6).unwrap();
        assert_eq!(h5.family, Family::H5);
        let e = &h6.exponents;
        assert_eq!(map.values[0], e.at(1) + e.at(9));
        assert_eq!(map.values[6], e.at(7) - e.at(9));
        assert!(h5.scheme.fuchs_relation_holds());
    }

    #[test]
    fn pipeline_h5_to_h3_matches_catalog() {
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
        let h5 = build_h5(&e, &rat(5, 13));
        let (h3, _) = pipeline_h5_to_h3(&h5).unwrap();
        assert_eq!(h3.family, Family::H3);
    }

    #[test]
    fn pipeline_h4_to_h3_matches_catalog() {
        let c = ExponentSet::new(vec![
            rat(1, 7),
            rat(2, 7),
            rat(1, 5),
            rat(2, 5),
            rat(1, 11),
            rat(2, 11),
            rat(3, 11),
        ]);
        let h4 = build_h4(&c, &rat(1, 3));
        let (h3, _) = pipeline_h4_to_h3(&h4).unwrap();
        assert_eq!(h3.family, Family::H3);
        // round trip via H3 -> H4 with the inverse parameter recovers H4
        let tau = rint(4) - c.e.iter().fold(BigRat::zero(), |a, x| a + x) - rint(1);
        let (h4back, backmap) = pipeline_h3_to_h4(&h3, &-tau.clone()).unwrap();
        let mut src = c.e.clone();
        let mut dst = backmap.exponents().e.clone();
        src.sort();
        dst.sort();
        assert_eq!(src, dst);
        assert_eq!(h4back.op, h4.op);
    }

    #[test]
    fn g6_symmetries_hold() {
        let e = h6_generic().exponents;
        let a: [BigRat; 7] = [
            rat(1, 2),
            rat(-1, 3),
            rat(2, 5),
            rat(1, 4),
            rat(1, 7),
            rat(-2, 7),
            rat(3, 4),
        ];
        let g = build_g6(&e, &a);
        // adjoint
        let (ea, aa) = g6_adjoint_params(&e, &a);
        assert_eq!(g.op.adjoint(), build_g6(&ea, &aa).op);
        // x -> 1-x
        let (ec, ac) = g6_ch1mx_params(&e, &a);
        assert_eq!(coordinate_change_1mx(&g.op), build_g6(&ec, &ac).op);
        // x -> 1/x
        let s = e.s();
        let (ei, ai) = g6_chinv_params(&e, &a);
        let moved = coordinate_change_inv(&g.op, &(-&s - rint(3)), &s).unwrap();
        // the substitution x -> 1/x with this conjugation flips the sign of
        // an order-6 head, exactly as the Gauss case flips an order-2 one
        assert_eq!(moved.eq_up_to_scalar(&build_g6(&ei, &ai).op), Some(rint(-1)));
    }

    #[test]
    fn e6_symmetries_hold() {
        let e = h6_generic().exponents;
        let n = build_e6(&e);
        // differentiation symmetry: D E6(e) = E6(e1-1.., e4-1.., e7+1..) D
        let eshift = e.shifted(&[-1, -1, -1, -1, -1, -1, 1, 1, 1]);
        let lhs = &DiffOp::d() * &n.op;
        let rhs = &build_e6(&eshift).op * &DiffOp::d();
        assert_eq!(lhs, rhs);
        // adjoint
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
        assert_eq!(n.op.adjoint(), build_e6(&eadj).op);
        // coordinate changes
        let (ec, _) = g6_ch1mx_params(&e, &Default::default());
        assert_eq!(coordinate_change_1mx(&n.op), build_e6(&ec).op);
        let s = e.s();
        let (ei, _) = g6_chinv_params(&e, &Default::default());
        let moved = coordinate_change_inv(&n.op, &(-&s - rint(3)), &s).unwrap();
        assert_eq!(moved.eq_up_to_scalar(&build_e6(&ei).op), Some(rint(-1)));
    }

    #[test]
    fn s10_satisfies_shift_differences() {
        // S10 solves the three difference equations of the descending block
        // shifts: alpha_j(e) = T10(e) - T10(sh_j(e)) with T10 = S10
        let e = h6_generic().exponents;
        let (s13, s23) = (e.s1(3), e.s2(3));
        // sh1: e1-block down by 1
        let dn1 = e.shifted(&[-1, -1, -1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(s10(&e) - s10(&dn1), &s13 + &s23 + rint(1));
        // sh2: zero difference
        let dn2 = e.shifted(&[0, 0, 0, -1, -1, -1, 0, 0, 0]);
        assert_eq!(s10(&dn2), s10(&e));
        // sh3: e1, e4 blocks down, e7 block up
        let dn3 = e.shifted(&[-1, -1, -1, -1, -1, -1, 1, 1, 1]);
        let (s11, s12) = (e.s1(1), e.s1(2));
        let (s21, s22) = (e.s2(1), e.s2(2));
        let alpha3 = rint(20) - &s11 * &s11 / rint(3) - rint(2) * &s11 * &s13 / rint(3)
            + &s12 * &s12 / rint(3)
            - &s13 * &s13 / rint(3)
            - rint(2) * &s11
            + rint(7) * &s13
            + &s21
            - &s22
            + rint(2) * &s23;
        assert_eq!(s10(&e) - s10(&dn3), alpha3);
        let _ = t11; // referenced for parity with the catalog tests
    }
}
