//! Exact linear algebra over `BigRat`: reduced row echelon form, nullspace
//! and particular solutions of small dense systems.

use crate::rat::BigRat;
use num_traits::Zero;

#[derive(Clone, Debug)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigRat>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![BigRat::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows_in: Vec<Vec<BigRat>>) -> Self {
        let rows = rows_in.len();
        let cols = rows_in.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows * cols);
        for r in rows_in {
            assert_eq!(r.len(), cols, "ragged matrix");
            data.extend(r);
        }
        QMatrix { rows, cols, data }
    }

    pub fn at(&self, r: usize, c: usize) -> &BigRat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRat) {
        self.data[r * self.cols + c] = v;
    }

    /// Scale every row by the inverse of its content, keeping entries small
    /// before elimination.
    fn normalize_rows(&mut self) {
        use num_bigint::BigInt;
        use num_integer::Integer;
        for r in 0..self.rows {
            let mut num_gcd = BigInt::from(0);
            let mut den_lcm = BigInt::from(1);
            for c in 0..self.cols {
                let v = self.at(r, c);
                if !v.is_zero() {
                    num_gcd = num_gcd.gcd(v.numer());
                    den_lcm = den_lcm.lcm(v.denom());
                }
            }
            if num_gcd.is_zero() {
                continue;
            }
            let scale = BigRat::new(den_lcm, num_gcd);
            for c in 0..self.cols {
                let v = self.at(r, c) * &scale;
                self.set(r, c, v);
            }
        }
    }

    /// In-place reduced row echelon form; returns pivot column indices.
    pub fn rref(&mut self) -> Vec<usize> {
        self.normalize_rows();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row >= self.rows {
                break;
            }
            // choose the "simplest" nonzero pivot in this column to limit blowup
            let mut best: Option<usize> = None;
            for r in row..self.rows {
                if !self.at(r, col).is_zero() {
                    let complexity = |v: &BigRat| v.numer().bits() + v.denom().bits();
                    match best {
                        None => best = Some(r),
                        Some(b) => {
                            if complexity(self.at(r, col)) < complexity(self.at(b, col)) {
                                best = Some(r);
                            }
                        }
                    }
                }
            }
            let Some(p) = best else { continue };
            self.swap_rows(row, p);
            let inv = crate::rat::BigRat::from_integer(1.into()) / self.at(row, col).clone();
            for c in col..self.cols {
                let v = self.at(row, c) * &inv;
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r != row && !self.at(r, col).is_zero() {
                    let factor = self.at(r, col).clone();
                    for c in col..self.cols {
                        let v = self.at(r, c) - &(self.at(row, c) * &factor);
                        self.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Basis of the right nullspace (vectors of length `cols`).
    pub fn nullspace(mut self) -> Vec<Vec<BigRat>> {
        let pivots = self.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivot_set.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![BigRat::zero(); self.cols];
            v[f] = BigRat::from_integer(1.into());
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -self.at(i, f).clone();
            }
            basis.push(v);
        }
        basis
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rint;

    #[test]
    fn nullspace_of_rank_one() {
        // rows are multiples of (1, 2, 3): nullspace has dimension 2
        let m = QMatrix::from_rows(vec![
            vec![rint(1), rint(2), rint(3)],
            vec![rint(2), rint(4), rint(6)],
        ]);
        let ns = m.clone().nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let dot = v[0].clone() + v[1].clone() * rint(2) + v[2].clone() * rint(3);
            assert!(dot == rint(0));
        }
    }

    #[test]
    fn full_rank_has_trivial_nullspace() {
        let m = QMatrix::from_rows(vec![
            vec![rint(1), rint(1)],
            vec![rint(1), rint(-1)],
        ]);
        assert!(m.nullspace().is_empty());
    }
}
