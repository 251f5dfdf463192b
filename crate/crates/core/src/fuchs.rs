//! Riemann schemes, local exponents, spectral types, accessory-parameter
//! counts, the no-logarithm test and Frobenius series.

use crate::poly::UniPoly;
use crate::rat::{rint, to_i64, BigRat};
use crate::weyl::{DiffOp, Series, SeriesAction, SingPoint};
use crate::{Error, Result};
use num_traits::Zero;
use std::fmt;

/// Exponent table at the three singular points {0, 1, infinity}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiemannScheme {
    pub at0: Vec<BigRat>,
    pub at1: Vec<BigRat>,
    pub atinf: Vec<BigRat>,
}

impl RiemannScheme {
    pub fn new(mut at0: Vec<BigRat>, mut at1: Vec<BigRat>, mut atinf: Vec<BigRat>) -> Self {
        at0.sort();
        at1.sort();
        atinf.sort();
        RiemannScheme { at0, at1, atinf }
    }

    pub fn order(&self) -> usize {
        self.at0.len()
    }

    pub fn rows(&self) -> [&Vec<BigRat>; 3] {
        [&self.at0, &self.at1, &self.atinf]
    }

    /// Multiset equality per point.
    pub fn same_as(&self, other: &RiemannScheme) -> bool {
        self == other // rows are kept sorted
    }

    /// Sum of all exponents equals n(n-1)(m-2)/2 with m = 3 singular points.
    pub fn fuchs_relation_holds(&self) -> bool {
        let n = self.order() as i64;
        let sum: BigRat = self
            .rows()
            .iter()
            .flat_map(|r| r.iter())
            .fold(BigRat::zero(), |a, b| a + b);
        sum == BigRat::new((n * (n - 1) / 2 * 1).into(), 1.into())
    }

    pub fn spectral_types(&self) -> [SpectralType; 3] {
        [
            SpectralType::of_exponents(&self.at0),
            SpectralType::of_exponents(&self.at1),
            SpectralType::of_exponents(&self.atinf),
        ]
    }

    pub fn to_json(&self) -> serde_json::Value {
        let row = |r: &Vec<BigRat>| -> Vec<String> { r.iter().map(|e| e.to_string()).collect() };
        serde_json::json!({
            "x=0": row(&self.at0),
            "x=1": row(&self.at1),
            "x=infinity": row(&self.atinf),
        })
    }
}

impl fmt::Display for RiemannScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = ["x=0:", "x=1:", "x=oo:"];
        let cells: Vec<Vec<String>> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(|e| e.to_string()).collect())
            .collect();
        let ncols = cells.iter().map(|r| r.len()).max().unwrap_or(0);
        let mut widths = vec![0usize; ncols];
        for row in &cells {
            for (i, c) in row.iter().enumerate() {
                widths[i] = widths[i].max(c.len());
            }
        }
        for (label, row) in labels.iter().zip(&cells) {
            write!(f, "{label:>6} ")?;
            for (i, c) in row.iter().enumerate() {
                write!(f, " {c:>width$}", width = widths[i])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// `check_fuchs_relation` on a scheme of stated order.
pub fn check_fuchs_relation(rs: &RiemannScheme, n: usize) -> bool {
    rs.order() == n && rs.at1.len() == n && rs.atinf.len() == n && rs.fuchs_relation_holds()
}

/// Partition of the operator order describing the mod-1 multiplicity pattern
/// of the exponents at one singular point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralType(pub Vec<usize>);

impl SpectralType {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        SpectralType(parts)
    }

    /// Group exponents by integer difference; part sizes are the spectral
    /// type (semisimple local monodromy assumed, as everywhere here).
    pub fn of_exponents(exps: &[BigRat]) -> Self {
        let mut classes: Vec<(BigRat, usize)> = Vec::new();
        'outer: for e in exps {
            for (rep, count) in classes.iter_mut() {
                if crate::rat::is_integer(&(e - &*rep)) {
                    *count += 1;
                    continue 'outer;
                }
            }
            classes.push((e.clone(), 1));
        }
        SpectralType::new(classes.into_iter().map(|(_, c)| c).collect())
    }

    pub fn order(&self) -> usize {
        self.0.iter().sum()
    }
}

impl fmt::Display for SpectralType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Number of accessory parameters of a Fuchsian equation of order `n` whose
/// singular points carry the given spectral types.
pub fn accessory_count(types: &[SpectralType], n: usize) -> i64 {
    let m = types.len() as i64;
    let n = n as i64;
    let mult_sq: i64 = types
        .iter()
        .flat_map(|t| t.0.iter())
        .map(|&p| (p * p) as i64)
        .sum();
    ((m - 2) * n * n - mult_sq + 2) / 2
}

/// Indicial data at a singular point.
#[derive(Clone, Debug)]
pub struct LocalData {
    pub point: SingPoint,
    /// Indicial polynomial in the exponent variable (degree = order for a
    /// regular singular point).
    pub indicial: UniPoly,
    /// The exponent multiset when the indicial polynomial splits over Q.
    pub exponents: Option<Vec<BigRat>>,
}

/// Check the Fuchsian degree pattern at one point: each coefficient may have
/// at worst the pole order a regular singular point allows.
fn regular_singular_at(op: &DiffOp, point: SingPoint) -> bool {
    let (_, coeffs) = op.cleared();
    let n = coeffs.len() - 1;
    let ord_at = |p: &UniPoly, at: &BigRat| -> i64 {
        if p.is_zero() {
            i64::MAX
        } else {
            p.root_multiplicity(at) as i64
        }
    };
    match point {
        SingPoint::Zero | SingPoint::One => {
            let at = if point == SingPoint::Zero {
                BigRat::zero()
            } else {
                crate::rat::rint(1)
            };
            let lead = ord_at(&coeffs[n], &at);
            coeffs.iter().enumerate().all(|(j, p)| {
                p.is_zero() || ord_at(p, &at) >= lead - (n as i64 - j as i64)
            })
        }
        SingPoint::Infinity => {
            let lead = coeffs[n].deg0() as i64;
            coeffs.iter().enumerate().all(|(j, p)| {
                p.is_zero() || (p.deg0() as i64) <= lead - (n as i64 - j as i64)
            })
        }
    }
}

/// Local exponents at a singular point, via the indicial polynomial of the
/// lowest-order part of the operator's action on `t^rho`.
pub fn local_exponents(op: &DiffOp, point: SingPoint) -> Result<LocalData> {
    if op.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if !regular_singular_at(op, point) {
        return Err(Error::IrregularSingularity(point.to_string()));
    }
    let action = SeriesAction::new(op, point, 1)?;
    let indicial = action.indicial();
    let n = op.order0();
    let exponents = indicial.all_rational_roots().filter(|r| r.len() == n);
    Ok(LocalData {
        point,
        indicial,
        exponents,
    })
}

/// Exact scheme verification without root extraction: at each point the
/// monic indicial polynomial must equal the product of `(rho - e)` over the
/// claimed exponents.
pub fn scheme_matches(op: &DiffOp, scheme: &RiemannScheme) -> Result<bool> {
    let rows: [(SingPoint, &Vec<BigRat>); 3] = [
        (SingPoint::Zero, &scheme.at0),
        (SingPoint::One, &scheme.at1),
        (SingPoint::Infinity, &scheme.atinf),
    ];
    for (pt, exps) in rows {
        let d = local_exponents_raw(op, pt)?;
        let want = exps
            .iter()
            .fold(UniPoly::one(), |acc, e| &acc * &UniPoly::x_minus(e));
        if d.indicial.monic() != want {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Indicial data without attempting to split the polynomial.
pub fn local_exponents_raw(op: &DiffOp, point: SingPoint) -> Result<LocalData> {
    if op.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if !regular_singular_at(op, point) {
        return Err(Error::IrregularSingularity(point.to_string()));
    }
    let action = SeriesAction::new(op, point, 1)?;
    let indicial = action.indicial();
    Ok(LocalData {
        point,
        indicial,
        exponents: None,
    })
}

/// The full Riemann scheme; requires every indicial polynomial to split into
/// rational linear factors.
pub fn riemann_scheme(op: &DiffOp) -> Result<RiemannScheme> {
    let get = |pt: SingPoint| -> Result<Vec<BigRat>> {
        let d = local_exponents(op, pt)?;
        d.exponents.ok_or_else(|| {
            Error::RecognitionFailure(format!(
                "indicial polynomial at {pt} does not split over Q: {}",
                d.indicial
            ))
        })
    };
    Ok(RiemannScheme::new(
        get(SingPoint::Zero)?,
        get(SingPoint::One)?,
        get(SingPoint::Infinity)?,
    ))
}

/// No-logarithm test for a block of exponents in integer steps at one
/// singular point. The Frobenius recursion is run once per free position in
/// the block; at every resonance the forced right-hand side must vanish for
/// every choice of the earlier free coefficients.
pub fn no_log_check(op: &DiffOp, point: SingPoint, block: &[BigRat]) -> Result<bool> {
    if block.is_empty() {
        return Ok(true);
    }
    let mut sorted = block.to_vec();
    sorted.sort();
    // a repeated exponent always forces a logarithm
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Ok(false);
        }
    }
    let rho0 = sorted[0].clone();
    let mut offsets = Vec::with_capacity(sorted.len());
    for e in &sorted {
        let d = e - &rho0;
        let Some(k) = to_i64(&d) else {
            return Err(Error::ResonanceObstruction(
                "block members must differ by integers".into(),
            ));
        };
        offsets.push(k as usize);
    }
    let depth = *offsets.last().unwrap();
    let action = SeriesAction::new(op, point, depth + 1)?;
    let ind = action.indicial();
    for &e in &offsets {
        if !ind.eval(&(&rho0 + &rint(e as i64))).is_zero() {
            // not actually exponents of the operator
            return Ok(false);
        }
    }
    for &free in &offsets {
        let mut u = vec![BigRat::zero(); depth + 1];
        u[free] = BigRat::from_integer(1.into());
        for t in (free + 1)..=depth {
            let mut rhs = BigRat::zero();
            for (m, um) in u.iter().enumerate().take(t) {
                if !um.is_zero() {
                    rhs += um * &action.transfer(&rho0, m, t);
                }
            }
            let lhs = ind.eval(&(&rho0 + &rint(t as i64)));
            if lhs.is_zero() {
                if !rhs.is_zero() {
                    return Ok(false);
                }
                u[t] = BigRat::zero();
            } else {
                u[t] = -rhs / lhs;
            }
        }
    }
    Ok(true)
}

/// Frobenius series at an exponent `rho`, truncated after `n` coefficients
/// (`u_0 = 1`). Consistent resonances pick the representative with vanishing
/// coefficient; inconsistent ones are logarithmic and error out.
pub fn frobenius_series(
    op: &DiffOp,
    point: SingPoint,
    rho: &BigRat,
    n: usize,
) -> Result<Series> {
    let action = SeriesAction::new(op, point, n + 1)?;
    let ind = action.indicial();
    if !ind.eval(rho).is_zero() {
        return Err(Error::ResonanceObstruction(format!(
            "{rho} is not a root of the indicial polynomial {ind}"
        )));
    }
    let mut u = vec![BigRat::zero(); n + 1];
    u[0] = BigRat::from_integer(1.into());
    for t in 1..=n {
        let mut rhs = BigRat::zero();
        for (m, um) in u.iter().enumerate().take(t) {
            if !um.is_zero() {
                rhs += um * &action.transfer(rho, m, t);
            }
        }
        let lhs = ind.eval(&(rho + &rint(t as i64)));
        if lhs.is_zero() {
            if !rhs.is_zero() {
                return Err(Error::ResonanceObstruction(format!(
                    "resonance at {rho} + {t} with nonzero right-hand side"
                )));
            }
            u[t] = BigRat::zero();
        } else {
            u[t] = -rhs / lhs;
        }
    }
    Ok(Series {
        base: point,
        exponent: rho.clone(),
        coeffs: u,
    })
}

/// Default series truncation: enough to separate the integer-exponent
/// collisions arising in the catalog families.
pub const DEFAULT_TRUNCATION: usize = 16;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;
    use crate::weyl::apply_to_series;

    // x(x-1)D^2 + ((a+b+1)x - c)D + ab
    fn gauss(a: BigRat, b: BigRat, c: BigRat) -> DiffOp {
        let one = BigRat::from_integer(1.into());
        let p2 = UniPoly::from_i64(&[0, -1, 1]);
        let p1 = UniPoly::new(vec![-c, &(&a + &b) + &one]);
        let p0 = UniPoly::constant(&a * &b);
        &(&DiffOp::from_poly(p2) * &DiffOp::d_power(2))
            + &(&(&DiffOp::from_poly(p1) * &DiffOp::d()) + &DiffOp::from_poly(p0))
    }

    #[test]
    fn gauss_exponents() {
        let (a, b, c) = (rat(1, 3), rat(1, 5), rat(1, 7));
        let op = gauss(a.clone(), b.clone(), c.clone());
        let at0 = local_exponents(&op, SingPoint::Zero).unwrap();
        let mut expect0 = vec![rat(0, 1), rat(6, 7)]; // {0, 1-c}
        expect0.sort();
        assert_eq!(at0.exponents.unwrap(), expect0);
        let atinf = local_exponents(&op, SingPoint::Infinity).unwrap();
        let mut expinf = vec![a, b];
        expinf.sort();
        assert_eq!(atinf.exponents.unwrap(), expinf);
        let scheme = riemann_scheme(&op).unwrap();
        assert!(scheme.fuchs_relation_holds());
    }

    #[test]
    fn gauss_series_matches_pochhammer() {
        // u_n = (a)_n (b)_n / ((c)_n (1)_n)
        let (a, b, c) = (rat(1, 3), rat(1, 5), rat(1, 7));
        let op = gauss(a.clone(), b.clone(), c.clone());
        let ser = frobenius_series(&op, SingPoint::Zero, &BigRat::zero(), 8).unwrap();
        let poch = |x: &BigRat, n: usize| crate::rat::falling(&(x + &rint(n as i64 - 1)), n);
        for m in 0..=8 {
            let expect = poch(&a, m) * poch(&b, m) / (poch(&c, m) * poch(&rint(1), m));
            assert_eq!(ser.coeffs[m], expect, "coefficient {m}");
        }
        // the operator annihilates its own Frobenius series
        let out = apply_to_series(&op, &ser).unwrap();
        assert!(out.is_vanishing());
    }

    #[test]
    fn fuchs_relation_detects_perturbation() {
        let op = gauss(rat(1, 3), rat(1, 5), rat(1, 7));
        let scheme = riemann_scheme(&op).unwrap();
        assert!(check_fuchs_relation(&scheme, 2));
        let mut bad = scheme.clone();
        bad.at0[0] = &bad.at0[0] + &rint(1);
        assert!(!check_fuchs_relation(&bad, 2));
    }

    #[test]
    fn accessory_counts_match_table() {
        let t = |parts: &[usize]| SpectralType::new(parts.to_vec());
        // order 6, (3111, 3111, 3111) -> 1
        assert_eq!(
            accessory_count(&[t(&[3, 1, 1, 1]), t(&[3, 1, 1, 1]), t(&[3, 1, 1, 1])], 6),
            1
        );
        // order 2, (11, 11, 11) -> 0
        assert_eq!(accessory_count(&[t(&[1, 1]), t(&[1, 1]), t(&[1, 1])], 2), 0);
        // order 5, (2111, 2111, 311) -> 1
        assert_eq!(
            accessory_count(&[t(&[2, 1, 1, 1]), t(&[2, 1, 1, 1]), t(&[3, 1, 1])], 5),
            1
        );
        // order 4, (211, 211, 1111) -> 1
        assert_eq!(
            accessory_count(&[t(&[2, 1, 1]), t(&[2, 1, 1]), t(&[1, 1, 1, 1])], 4),
            1
        );
        // order 3, (111, 111, 111) -> 1
        assert_eq!(
            accessory_count(&[t(&[1, 1, 1]), t(&[1, 1, 1]), t(&[1, 1, 1])], 3),
            1
        );
    }

    #[test]
    fn known_logarithmic_case_fails_no_log() {
        // x^2 D^2 - x D + 1 = (theta - 1)^2 has solutions x and x log x
        let op = &(&DiffOp::from_poly(UniPoly::from_i64(&[0, 0, 1])) * &DiffOp::d_power(2))
            + &(&(-&(&DiffOp::x() * &DiffOp::d())) + &DiffOp::one());
        let ok = no_log_check(&op, SingPoint::Zero, &[rint(1), rint(1)]).unwrap();
        assert!(!ok);
    }

    #[test]
    fn spectral_type_from_exponents() {
        let exps = vec![rint(0), rint(1), rint(2), rat(1, 7), rat(2, 7), rat(3, 7)];
        assert_eq!(SpectralType::of_exponents(&exps), SpectralType::new(vec![3, 1, 1, 1]));
    }

    #[test]
    fn irregular_singularity_detected() {
        // D^2 + x has an irregular singular point at infinity
        let op = &DiffOp::d_power(2) + &DiffOp::x();
        assert!(matches!(
            local_exponents(&op, SingPoint::Infinity),
            Err(Error::IrregularSingularity(_))
        ));
    }

    use crate::rat::rint;
}
