//! Small dense square matrices over an arbitrary scalar field.
//!
//! Dimensions here are tiny (m ≤ 4 typically, N ≤ 8 for loop matrices), so a
//! straightforward row-major implementation with Gauss-Jordan elimination is
//! all that is needed. Pivots are chosen by magnitude, which doubles as
//! partial pivoting in float mode and as a nonzero test in exact mode.


use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Debug)]
pub struct SquareMatrix<S: Scalar> {
    dim: usize,
    data: Vec<S>,
}

impl<S: Scalar> SquareMatrix<S> {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1);
        SquareMatrix {
            dim,
            data: vec![S::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "rows must be square");
        SquareMatrix {
            dim,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Matrix with the given columns.
    pub fn from_cols(cols: Vec<Vec<S>>) -> Self {
        let dim = cols.len();
        assert!(cols.iter().all(|c| c.len() == dim));
        let mut m = Self::zeros(dim);
        for (j, col) in cols.into_iter().enumerate() {
            for (i, v) in col.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    /// `E_{ij}`: 1 in entry (i, j), zero elsewhere. 0-based.
    pub fn unit(dim: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(dim);
        m.set(i, j, S::one());
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.dim + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<S> {
        (0..self.dim).map(|j| self.get(i, j).clone()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<S> {
        (0..self.dim).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        SquareMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        SquareMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        SquareMatrix {
            dim: self.dim,
            data: self.data.iter().map(|a| -a.clone()).collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        SquareMatrix {
            dim: self.dim,
            data: self.data.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j).clone() + a.clone() * other.get(k, j).clone();
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                (0..self.dim).fold(S::zero(), |acc, j| {
                    acc + self.get(i, j).clone() * v[j].clone()
                })
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn trace(&self) -> S {
        (0..self.dim).fold(S::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Strictly upper-triangular part.
    pub fn upper(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        out
    }

    /// Strictly lower-triangular part.
    pub fn lower(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..i {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        out
    }

    /// Diagonal part.
    pub fn diagonal(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            out.set(i, i, self.get(i, i).clone());
        }
        out
    }

    pub fn det(&self) -> S {
        let n = self.dim;
        let mut a = self.clone();
        let mut det = S::one();
        for col in 0..n {
            let Some(pivot) = (col..n).max_by(|&r1, &r2| {
                a.get(r1, col)
                    .magnitude()
                    .total_cmp(&a.get(r2, col).magnitude())
            }) else {
                return S::zero();
            };
            if a.get(pivot, col).is_zero() {
                return S::zero();
            }
            if pivot != col {
                for j in 0..n {
                    let tmp = a.get(col, j).clone();
                    a.set(col, j, a.get(pivot, j).clone());
                    a.set(pivot, j, tmp);
                }
                det = -det;
            }
            let p = a.get(col, col).clone();
            det = det * p.clone();
            for r in (col + 1)..n {
                if a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone() / p.clone();
                for j in col..n {
                    let v = a.get(r, j).clone() - factor.clone() * a.get(col, j).clone();
                    a.set(r, j, v);
                }
            }
        }
        det
    }

    /// Solve `self · x = b` by Gauss-Jordan with magnitude pivoting.
    pub fn solve(&self, b: &[S]) -> Result<Vec<S>> {
        assert_eq!(b.len(), self.dim);
        let cols = self.solve_many(&[b.to_vec()])?;
        Ok(cols.into_iter().next().unwrap())
    }

    /// Solve for several right-hand sides at once.
    pub fn solve_many(&self, rhs: &[Vec<S>]) -> Result<Vec<Vec<S>>> {
        let n = self.dim;
        let k = rhs.len();
        let mut a = self.clone();
        let mut b: Vec<Vec<S>> = rhs.to_vec();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r1, &r2| {
                    a.get(r1, col)
                        .magnitude()
                        .total_cmp(&a.get(r2, col).magnitude())
                })
                .unwrap();
            if a.get(pivot, col).is_zero() {
                return Err(Error::SingularMatrix);
            }
            if pivot != col {
                for j in 0..n {
                    let tmp = a.get(col, j).clone();
                    a.set(col, j, a.get(pivot, j).clone());
                    a.set(pivot, j, tmp);
                }
                for bc in b.iter_mut() {
                    bc.swap(col, pivot);
                }
            }
            let p = a.get(col, col).clone();
            for j in 0..n {
                let v = a.get(col, j).clone() / p.clone();
                a.set(col, j, v);
            }
            for bc in b.iter_mut() {
                bc[col] = bc[col].clone() / p.clone();
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone();
                for j in 0..n {
                    let v = a.get(r, j).clone() - factor.clone() * a.get(col, j).clone();
                    a.set(r, j, v);
                }
                for bc in b.iter_mut() {
                    let v = bc[r].clone() - factor.clone() * bc[col].clone();
                    bc[r] = v;
                }
            }
        }
        let _ = k;
        Ok(b)
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.dim;
        let rhs: Vec<Vec<S>> = (0..n)
            .map(|j| {
                let mut e = vec![S::zero(); n];
                e[j] = S::one();
                e
            })
            .collect();
        let cols = self.solve_many(&rhs)?;
        Ok(Self::from_cols(cols))
    }

    /// True when this matrix fixes `e1` (first basis vector), i.e. lies in H.
    pub fn fixes_e1(&self) -> bool {
        let e1_image = self.col(0);
        e1_image[0].is_one() && e1_image.iter().skip(1).all(|v| v.is_zero())
    }
}

/// Standard basis vector `e_k` (0-based) of length `dim`.
pub fn basis_vector<S: Scalar>(dim: usize, k: usize) -> Vec<S> {
    let mut v = vec![S::zero(); dim];
    v[k] = S::one();
    v
}
