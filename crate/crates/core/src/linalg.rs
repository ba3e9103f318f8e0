//! Dense exact linear algebra over Q, kept in reduced row echelon form as
//! rows are added.

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type QVec = Vec<BigRational>;

/// A row space held in reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<(usize, QVec)>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, rows: Vec::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn nullity(&self) -> usize {
        self.ncols - self.rows.len()
    }

    fn reduce(&self, row: &mut QVec) {
        for (pivot, r) in &self.rows {
            if row[*pivot].is_zero() {
                continue;
            }
            let f = row[*pivot].clone();
            for (x, y) in row.iter_mut().zip(r) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
    }

    /// Add a row; returns whether the rank grew.
    pub fn add_row(&mut self, mut row: QVec) -> bool {
        assert_eq!(row.len(), self.ncols);
        self.reduce(&mut row);
        let Some(pivot) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = BigRational::one() / &row[pivot];
        for x in row.iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        for (_, r) in self.rows.iter_mut() {
            if r[pivot].is_zero() {
                continue;
            }
            let f = r[pivot].clone();
            for (x, y) in r.iter_mut().zip(&row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        let at = self.rows.partition_point(|(p, _)| *p < pivot);
        self.rows.insert(at, (pivot, row));
        true
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = (usize, &QVec)> {
        self.rows.iter().map(|(p, r)| (*p, r))
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let piv = self.pivots();
        (0..self.ncols).filter(|c| piv.binary_search(c).is_err()).collect()
    }

    /// Basis of the right kernel `{x : R x = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<QVec> {
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut v = vec![BigRational::zero(); self.ncols];
                v[f] = BigRational::one();
                for (p, r) in &self.rows {
                    v[*p] = -r[f].clone();
                }
                v
            })
            .collect()
    }
}

pub fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(v: &[i64]) -> QVec {
        v.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    #[test]
    fn kernel_of_small_matrix() {
        let mut e = Echelon::new(3);
        assert!(e.add_row(q(&[1, 2, 3])));
        assert!(e.add_row(q(&[2, 4, 7])));
        assert!(!e.add_row(q(&[3, 6, 10])));
        let ns = e.nullspace();
        assert_eq!(ns, vec![q(&[-2, 1, 0])]);
    }

    proptest! {
        #[test]
        fn nullspace_is_annihilated(m in proptest::collection::vec(proptest::collection::vec(-5i64..5, 5), 1..6)) {
            let mut e = Echelon::new(5);
            for r in &m {
                e.add_row(q(r));
            }
            let ns = e.nullspace();
            prop_assert_eq!(ns.len() + e.rank(), 5);
            for v in &ns {
                for r in &m {
                    prop_assert!(dot(&q(r), v).is_zero());
                }
            }
        }
    }
}
