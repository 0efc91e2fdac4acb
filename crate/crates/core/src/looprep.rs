//! Loop-matrix representation of periodic difference operators.
//!
//! A finite-support operator acts on the N-dimensional spaces of
//! quasi-periodic sequences with monodromy `z`, giving an N×N matrix whose
//! entries are Laurent polynomials in `z`: an order-zero sequence becomes a
//! diagonal matrix and the shift `T` becomes `Σ E_{i,i+1} + z·E_{N,1}`.
//! The representation is an algebra homomorphism and is kept exact here so
//! homomorphism and trace identities can be tested without sampling `z`.


use crate::error::{Error, Result};
use crate::op::LaurentOperator;
use crate::scalar::Scalar;

/// A Laurent polynomial in one variable with scalar coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct LaurentPoly<S: Scalar> {
    lo: i64,
    coeffs: Vec<S>,
}

impl<S: Scalar> LaurentPoly<S> {
    fn normalized(mut lo: i64, mut coeffs: Vec<S>) -> Self {
        while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
            coeffs.pop();
        }
        while coeffs.len() > 1 && coeffs.first().unwrap().is_zero() {
            coeffs.remove(0);
            lo += 1;
        }
        if coeffs.is_empty() || (coeffs.len() == 1 && coeffs[0].is_zero()) {
            return LaurentPoly {
                lo: 0,
                coeffs: vec![S::zero()],
            };
        }
        LaurentPoly { lo, coeffs }
    }

    pub fn zero() -> Self {
        LaurentPoly {
            lo: 0,
            coeffs: vec![S::zero()],
        }
    }

    pub fn constant(c: S) -> Self {
        Self::normalized(0, vec![c])
    }

    /// `c · z^k`
    pub fn term(c: S, k: i64) -> Self {
        Self::normalized(k, vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, k: i64) -> S {
        if k < self.lo || k > self.lo + self.coeffs.len() as i64 - 1 {
            S::zero()
        } else {
            self.coeffs[(k - self.lo) as usize].clone()
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let lo = self.lo.min(other.lo);
        let hi = (self.lo + self.coeffs.len() as i64 - 1).max(other.lo + other.coeffs.len() as i64 - 1);
        let coeffs = (lo..=hi).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Self::normalized(lo, coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let lo = self.lo + other.lo;
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        let mut coeffs = vec![S::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::normalized(lo, coeffs)
    }

    /// Evaluate at a nonzero point.
    pub fn eval(&self, z: &S) -> S {
        assert!(!z.is_zero());
        let mut acc = S::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = self.lo + i as i64;
            let mut p = S::one();
            if k >= 0 {
                for _ in 0..k {
                    p = p * z.clone();
                }
            } else {
                for _ in 0..(-k) {
                    p = p / z.clone();
                }
            }
            acc = acc + c.clone() * p;
        }
        acc
    }
}

/// N×N matrix of Laurent polynomials.
#[derive(Clone, PartialEq, Debug)]
pub struct LoopMatrix<S: Scalar> {
    dim: usize,
    data: Vec<LaurentPoly<S>>,
}

impl<S: Scalar> LoopMatrix<S> {
    pub fn zeros(dim: usize) -> Self {
        LoopMatrix {
            dim,
            data: vec![LaurentPoly::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, LaurentPoly::constant(S::one()));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly<S> {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: LaurentPoly<S>) {
        self.data[i * self.dim + j] = v;
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        LoopMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.add(b))
                .collect(),
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
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn matrix_trace(&self) -> LaurentPoly<S> {
        (0..self.dim).fold(LaurentPoly::zero(), |acc, i| acc.add(self.get(i, i)))
    }

    /// Evaluate every entry at a nonzero `z`.
    pub fn eval(&self, z: &S) -> crate::matrix::SquareMatrix<S> {
        let mut out = crate::matrix::SquareMatrix::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(i, j, self.get(i, j).eval(z));
            }
        }
        out
    }
}

/// The matrix of `T` in the quasi-periodic basis: `Σ E_{i,i+1} + z E_{N,1}`.
fn shift_matrix<S: Scalar>(n: usize) -> LoopMatrix<S> {
    let mut m = LoopMatrix::zeros(n);
    for i in 0..n - 1 {
        m.set(i, i + 1, LaurentPoly::constant(S::one()));
    }
    m.set(n - 1, 0, LaurentPoly::term(S::one(), 1));
    m
}

/// The matrix of `T^{-1}`: `Σ E_{i+1,i} + z^{-1} E_{1,N}`.
fn shift_matrix_inv<S: Scalar>(n: usize) -> LoopMatrix<S> {
    let mut m = LoopMatrix::zeros(n);
    for i in 0..n - 1 {
        m.set(i + 1, i, LaurentPoly::constant(S::one()));
    }
    m.set(0, n - 1, LaurentPoly::term(S::one(), -1));
    m
}

/// Exact loop-matrix representation of a finite-support operator.
pub fn loop_matrix<S: Scalar>(d: &LaurentOperator<S>) -> Result<LoopMatrix<S>> {
    if !d.is_exact() {
        return Err(Error::InfiniteSupport);
    }
    let n = d.period();
    let fwd = shift_matrix::<S>(n);
    let bwd = shift_matrix_inv::<S>(n);
    let mut out = LoopMatrix::zeros(n);
    for i in d.lo()..=d.hi() {
        let coeff = d.coeff(i);
        if coeff.is_zero() {
            continue;
        }
        // diag(a) · (shift matrix)^i
        let mut diag = LoopMatrix::zeros(n);
        for (s, v) in coeff.values().iter().enumerate() {
            diag.set(s, s, LaurentPoly::constant(v.clone()));
        }
        let mut pow = LoopMatrix::identity(n);
        let step = if i >= 0 { &fwd } else { &bwd };
        for _ in 0..i.unsigned_abs() {
            pow = pow.mul(step);
        }
        out = out.add(&diag.mul(&pow));
    }
    Ok(out)
}

/// Representation evaluated at a concrete nonzero `z`.
pub fn matrix_rep<S: Scalar>(d: &LaurentOperator<S>, z: &S) -> Result<crate::matrix::SquareMatrix<S>> {
    if z.is_zero() {
        return Err(Error::ZeroEntry {
            what: "representation parameter z",
            site: 0,
        });
    }
    Ok(loop_matrix(d)?.eval(z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;
    use crate::seq::PeriodicSequence;

    fn seq(values: &[i64]) -> PeriodicSequence<Rat> {
        PeriodicSequence::new(values.iter().map(|&v| Rat::from_i64(v)).collect())
    }

    #[test]
    fn order_zero_becomes_diagonal() {
        let d = LaurentOperator::order_zero(seq(&[1, 2, 3]));
        let m = matrix_rep(&d, &Rat::from_i64(5)).unwrap();
        let mut expected = crate::matrix::SquareMatrix::zeros(3);
        expected.set(0, 0, Rat::from_i64(1));
        expected.set(1, 1, Rat::from_i64(2));
        expected.set(2, 2, Rat::from_i64(3));
        assert_eq!(m, expected);
    }

    #[test]
    fn shift_becomes_cyclic_matrix_with_z() {
        let t = LaurentOperator::shift_power(3, 1);
        let m = matrix_rep(&t, &Rat::from_i64(5)).unwrap();
        let mut expected = crate::matrix::SquareMatrix::zeros(3);
        expected.set(0, 1, Rat::from_i64(1));
        expected.set(1, 2, Rat::from_i64(1));
        expected.set(2, 0, Rat::from_i64(5));
        assert_eq!(m, expected);
    }

    #[test]
    fn shift_inverse_is_matrix_inverse() {
        let t = loop_matrix(&LaurentOperator::<Rat>::shift_power(4, 1)).unwrap();
        let tinv = loop_matrix(&LaurentOperator::<Rat>::shift_power(4, -1)).unwrap();
        assert_eq!(t.mul(&tinv), LoopMatrix::identity(4));
        assert_eq!(tinv.mul(&t), LoopMatrix::identity(4));
    }

    #[test]
    fn homomorphism_on_fixed_pair() {
        let d1 = LaurentOperator::from_window(3, -1, vec![seq(&[1, 2, 1]), seq(&[3, 1, 4]), seq(&[2, 2, 5])]);
        let d2 = LaurentOperator::from_window(3, 0, vec![seq(&[1, 1, 2]), seq(&[0, 3, 1])]);
        let lhs = loop_matrix(&d1.multiply(&d2).unwrap()).unwrap();
        let rhs = loop_matrix(&d1).unwrap().mul(&loop_matrix(&d2).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn trace_matches_z0_coefficient() {
        let d = LaurentOperator::from_window(
            4,
            -2,
            vec![
                seq(&[1, 2, 3, 4]),
                seq(&[5, 6, 7, 8]),
                seq(&[9, 1, 2, 3]),
                seq(&[4, 5, 6, 7]),
                seq(&[8, 9, 1, 2]),
            ],
        );
        let rep = loop_matrix(&d).unwrap();
        assert_eq!(rep.matrix_trace().coeff(0), d.trace());
    }
}
