//! Periodic and quasi-periodic bi-infinite sequences.
//!
//! One period is stored; indexing is cyclic. These are the coefficient atoms
//! of every operator in the crate. Sites are 0-based internally and all
//! wrap-around index arithmetic goes through [`site`].


use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Reduce an integer index to the canonical site in `0..n`.
pub fn site(i: i64, n: usize) -> usize {
    debug_assert!(n >= 1);
    i.rem_euclid(n as i64) as usize
}

/// An N-periodic bi-infinite scalar sequence; `value(i + N) = value(i)`.
#[derive(Clone, PartialEq, Debug)]
pub struct PeriodicSequence<S: Scalar> {
    values: Vec<S>,
}

impl<S: Scalar> PeriodicSequence<S> {
    pub fn new(values: Vec<S>) -> Self {
        assert!(!values.is_empty(), "period must be at least 1");
        PeriodicSequence { values }
    }

    pub fn constant(n: usize, v: S) -> Self {
        Self::new(vec![v; n])
    }

    pub fn zeros(n: usize) -> Self {
        Self::constant(n, S::zero())
    }

    pub fn ones(n: usize) -> Self {
        Self::constant(n, S::one())
    }

    /// Indicator sequence `δ_t`: 1 at sites ≡ t (mod N), 0 elsewhere.
    pub fn indicator(n: usize, t: i64) -> Self {
        let mut v = vec![S::zero(); n];
        v[site(t, n)] = S::one();
        Self::new(v)
    }

    pub fn period(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, i: i64) -> &S {
        &self.values[site(i, self.period())]
    }

    pub fn set(&mut self, i: i64, v: S) {
        let n = self.period();
        self.values[site(i, n)] = v;
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn has_zero_entry(&self) -> bool {
        self.values.iter().any(|v| v.is_zero())
    }

    /// Left shift by `k` steps: `result(i) = self(i + k)`.
    pub fn shift(&self, k: i64) -> Self {
        let n = self.period();
        Self::new((0..n).map(|i| self.get(i as i64 + k).clone()).collect())
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.period(), other.period());
        Self::new(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.clone() * b.clone())
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.period(), other.period());
        Self::new(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(self.values.iter().map(|a| -a.clone()).collect())
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.values.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Entrywise reciprocal; errors on a zero entry.
    pub fn recip(&self, what: &'static str) -> Result<Self> {
        let mut out = Vec::with_capacity(self.period());
        for (s, v) in self.values.iter().enumerate() {
            if v.is_zero() {
                return Err(Error::ZeroEntry { what, site: s });
            }
            out.push(S::one() / v.clone());
        }
        Ok(Self::new(out))
    }

    pub fn sum(&self) -> S {
        self.values
            .iter()
            .fold(S::zero(), |acc, v| acc + v.clone())
    }
}

/// A quasi-periodic sequence: `value(i + N) = z · value(i)` with monodromy
/// `z ≠ 0`. Stores one period and the monodromy.
#[derive(Clone, PartialEq, Debug)]
pub struct QuasiPeriodicSequence<S: Scalar> {
    values: Vec<S>,
    monodromy: S,
}

impl<S: Scalar> QuasiPeriodicSequence<S> {
    pub fn new(values: Vec<S>, monodromy: S) -> Self {
        assert!(!values.is_empty(), "period must be at least 1");
        assert!(!monodromy.is_zero(), "monodromy must be nonzero");
        QuasiPeriodicSequence { values, monodromy }
    }

    /// A periodic sequence viewed as quasi-periodic with monodromy 1.
    pub fn periodic(seq: PeriodicSequence<S>) -> Self {
        Self::new(seq.values().to_vec(), S::one())
    }

    pub fn ones(n: usize) -> Self {
        Self::new(vec![S::one(); n], S::one())
    }

    pub fn period(&self) -> usize {
        self.values.len()
    }

    pub fn monodromy(&self) -> &S {
        &self.monodromy
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn has_zero_entry(&self) -> bool {
        self.values.iter().any(|v| v.is_zero())
    }

    /// Value at an arbitrary integer index, with monodromy factors applied.
    pub fn get(&self, i: i64) -> S {
        let n = self.period() as i64;
        let r = i.rem_euclid(n);
        let q = (i - r) / n;
        let base = self.values[r as usize].clone();
        match q {
            0 => base,
            q if q > 0 => {
                let mut v = base;
                for _ in 0..q {
                    v = v * self.monodromy.clone();
                }
                v
            }
            q => {
                let mut v = base;
                for _ in 0..(-q) {
                    v = v / self.monodromy.clone();
                }
                v
            }
        }
    }

    /// The periodic ratio `self(i) / self(i + k)`, defined for any gauge use.
    pub fn ratio(&self, i: i64, k: i64) -> S {
        self.get(i) / self.get(i + k)
    }
}
