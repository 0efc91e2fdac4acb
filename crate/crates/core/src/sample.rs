//! Seeded random generators for operators, gauges, polygons, and matrices.
//!
//! Values are small rationals lifted through the scalar trait, so the same
//! seed draws the same mathematical object in rational and float mode.

use rand::Rng;

use crate::matrix::SquareMatrix;
use crate::op::LaurentOperator;
use crate::scalar::Scalar;
use crate::seq::{PeriodicSequence, QuasiPeriodicSequence};

pub fn small_scalar<S: Scalar>(rng: &mut impl Rng) -> S {
    S::from_ratio(rng.gen_range(-9i64..=9), rng.gen_range(1i64..=3))
}

pub fn nonzero_scalar<S: Scalar>(rng: &mut impl Rng) -> S {
    let num = loop {
        let v = rng.gen_range(-9i64..=9);
        if v != 0 {
            break v;
        }
    };
    S::from_ratio(num, rng.gen_range(1i64..=3))
}

pub fn sequence<S: Scalar>(rng: &mut impl Rng, n: usize) -> PeriodicSequence<S> {
    PeriodicSequence::new((0..n).map(|_| small_scalar(rng)).collect())
}

pub fn nonzero_sequence<S: Scalar>(rng: &mut impl Rng, n: usize) -> PeriodicSequence<S> {
    PeriodicSequence::new((0..n).map(|_| nonzero_scalar(rng)).collect())
}

/// Quasi-periodic nonvanishing sequence with a random nonzero monodromy.
pub fn quasi_periodic<S: Scalar>(rng: &mut impl Rng, n: usize) -> QuasiPeriodicSequence<S> {
    QuasiPeriodicSequence::new(
        (0..n).map(|_| nonzero_scalar(rng)).collect(),
        nonzero_scalar(rng),
    )
}

pub fn quasi_periodic_with_monodromy<S: Scalar>(
    rng: &mut impl Rng,
    n: usize,
    monodromy: S,
) -> QuasiPeriodicSequence<S> {
    QuasiPeriodicSequence::new((0..n).map(|_| nonzero_scalar(rng)).collect(), monodromy)
}

/// Operator with the given support window; entries may vanish.
pub fn operator<S: Scalar>(rng: &mut impl Rng, n: usize, lo: i64, hi: i64) -> LaurentOperator<S> {
    assert!(lo <= hi);
    LaurentOperator::from_window(n, lo, (lo..=hi).map(|_| sequence(rng, n)).collect())
}

/// Properly bounded operator of support `[0, m]`: extreme coefficients are
/// entrywise nonzero.
pub fn properly_bounded_operator<S: Scalar>(
    rng: &mut impl Rng,
    n: usize,
    m: usize,
) -> LaurentOperator<S> {
    let mut coeffs = Vec::with_capacity(m + 1);
    coeffs.push(nonzero_sequence(rng, n));
    for _ in 1..m {
        coeffs.push(sequence(rng, n));
    }
    if m >= 1 {
        coeffs.push(nonzero_sequence(rng, n));
    }
    LaurentOperator::from_window(n, 0, coeffs)
}

/// Order-2 operator with all three coefficient sequences nonvanishing, so
/// the cross-ratio chart is defined.
pub fn w2_chart_operator<S: Scalar>(rng: &mut impl Rng, n: usize) -> LaurentOperator<S> {
    LaurentOperator::from_window(
        n,
        0,
        vec![
            nonzero_sequence(rng, n),
            nonzero_sequence(rng, n),
            nonzero_sequence(rng, n),
        ],
    )
}

/// Operator `Σ_{r<m} a^r T^r − T^m` with nonvanishing `a^0`.
pub fn rdo_operator<S: Scalar>(rng: &mut impl Rng, n: usize, m: usize) -> LaurentOperator<S> {
    assert!(m >= 1);
    let mut coeffs = vec![nonzero_sequence(rng, n)];
    for _ in 1..m {
        coeffs.push(sequence(rng, n));
    }
    coeffs.push(PeriodicSequence::constant(n, -S::one()));
    LaurentOperator::from_window(n, 0, coeffs)
}

/// Invertible m×m matrix with small entries.
pub fn gl_matrix<S: Scalar>(rng: &mut impl Rng, m: usize) -> SquareMatrix<S> {
    loop {
        let mut a = SquareMatrix::<S>::zeros(m);
        for i in 0..m {
            for j in 0..m {
                a.set(i, j, small_scalar(rng));
            }
        }
        if !a.det().is_zero() {
            return a;
        }
    }
}

/// Non-degenerate twisted polygon with small integer lifts.
pub fn twisted_polygon<S: Scalar>(
    rng: &mut impl Rng,
    m: usize,
    n: usize,
) -> crate::polygon::TwistedPolygon<S> {
    loop {
        let lifts: Vec<Vec<S>> = (0..n)
            .map(|_| (0..m).map(|_| small_scalar(rng)).collect())
            .collect();
        let monodromy = gl_matrix(rng, m);
        if let Ok(p) = crate::polygon::TwistedPolygon::new(lifts, monodromy) {
            if p.check_nondegenerate().is_ok() {
                return p;
            }
        }
    }
}

/// Random element of H: invertible and fixing `e1`.
pub fn h_matrix<S: Scalar>(rng: &mut impl Rng, m: usize) -> SquareMatrix<S> {
    loop {
        let mut a = SquareMatrix::<S>::zeros(m);
        a.set(0, 0, S::one());
        for i in 0..m {
            for j in 1..m {
                a.set(i, j, small_scalar(rng));
            }
        }
        if !a.det().is_zero() {
            return a;
        }
    }
}
