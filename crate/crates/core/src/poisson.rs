//! The multiplicative Poisson structure on fixed-order difference operators.
//!
//! The Poisson tensor at an operator `D` is
//!
//! ```text
//! π_D(X) = D·r(X·D) − r(D·X)·D
//! ```
//!
//! and the corresponding bracket of two functionals with differentials
//! `δF, δG` (identified with operators through the trace form) is
//!
//! ```text
//! {F, G}(D) = (r(δF·D), δG·D) − (r(D·δF), D·δG).
//! ```
//!
//! Order-m upper-triangular operators are a Poisson submanifold and the
//! structure vanishes at order zero; both facts are exercised by tests
//! rather than assumed. For m = 2 the module also carries the closed-form
//! coordinate bracket table, which serves as an independent oracle for the
//! general evaluation.

use crate::error::{Error, Result};
use crate::functional::CoordPoly;
use crate::op::LaurentOperator;
use crate::scalar::Scalar;
use crate::seq::{site, PeriodicSequence, QuasiPeriodicSequence};

/// Addresses the coordinate function `a^power_site` on order-m operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoordinateIndex {
    pub power: usize,
    pub site: usize,
}

impl CoordinateIndex {
    pub fn new(power: usize, site: usize) -> Self {
        CoordinateIndex { power, site }
    }
}

/// A scalar functional of finitely many operator coefficients.
#[derive(Clone, Debug)]
pub enum OperatorFunctional {
    /// The coordinate function `a^power_site`.
    Coordinate(CoordinateIndex),
    /// A polynomial in coordinates, keyed by `(power, site)`.
    Poly(CoordPoly),
}

impl OperatorFunctional {
    pub fn eval<S: Scalar>(&self, d: &LaurentOperator<S>) -> S {
        match self {
            OperatorFunctional::Coordinate(ix) => d.entry(ix.power as i64, ix.site as i64),
            OperatorFunctional::Poly(p) => {
                p.eval(&mut |power, site| d.entry(power as i64, site as i64))
            }
        }
    }

    /// The differential `δF`, identified with an operator through the trace
    /// form: `δF = Σ (∂F/∂a^j_t) · T^{-j} ∘ δ_t`. Analytic (power rule).
    pub fn differential<S: Scalar>(&self, d: &LaurentOperator<S>) -> LaurentOperator<S> {
        let n = d.period();
        match self {
            OperatorFunctional::Coordinate(ix) => {
                LaurentOperator::coordinate_differential(n, ix.power as i64, ix.site as i64)
            }
            OperatorFunctional::Poly(p) => {
                let mut acc = LaurentOperator::zero(n);
                for (power, t) in p.keys() {
                    let partial = p
                        .derivative((power, t))
                        .eval(&mut |pw, st| d.entry(pw as i64, st as i64));
                    let unit =
                        LaurentOperator::coordinate_differential(n, power as i64, t as i64);
                    acc = acc.add(&unit.scale(&partial)).unwrap();
                }
                acc
            }
        }
    }
}

/// The Poisson tensor `π_D(X) = D·r(X·D) − r(D·X)·D`.
pub fn poisson_tensor_apply<S: Scalar>(
    d: &LaurentOperator<S>,
    x: &LaurentOperator<S>,
) -> Result<LaurentOperator<S>> {
    let left = d.multiply(&x.multiply(d)?.r_apply())?;
    let right = d.multiply(x)?.r_apply().multiply(d)?;
    left.sub(&right)
}

/// Bracket of two differentials at `D`:
/// `(r(δF·D), δG·D) − (r(D·δF), D·δG)`.
pub fn bracket_differentials<S: Scalar>(
    df: &LaurentOperator<S>,
    dg: &LaurentOperator<S>,
    d: &LaurentOperator<S>,
) -> Result<S> {
    let first = df.multiply(d)?.r_apply().inner_product(&dg.multiply(d)?)?;
    let second = d.multiply(df)?.r_apply().inner_product(&d.multiply(dg)?)?;
    Ok(first - second)
}

/// `{F, G}(D)` for two functionals with analytic differentials.
pub fn bracket_functionals<S: Scalar>(
    f: &OperatorFunctional,
    g: &OperatorFunctional,
    d: &LaurentOperator<S>,
) -> Result<S> {
    bracket_differentials(&f.differential(d), &g.differential(d), d)
}

/// `{a^p, a^q}(D)` for coordinate functions on an order-m operator.
pub fn bracket_coordinates<S: Scalar>(
    d: &LaurentOperator<S>,
    p: CoordinateIndex,
    q: CoordinateIndex,
) -> Result<S> {
    let n = d.period();
    for ix in [p, q] {
        if ix.power as i64 > d.hi() || ix.site >= n {
            return Err(Error::IndexOutOfRange {
                power: ix.power as i64,
                site: ix.site as i64,
            });
        }
    }
    let dp = LaurentOperator::coordinate_differential(n, p.power as i64, p.site as i64);
    let dq = LaurentOperator::coordinate_differential(n, q.power as i64, q.site as i64);
    bracket_differentials(&dp, &dq, d)
}

/// Closed-form m = 2 bracket table, written with the operator
/// `D = α + β T + γ T²` and coordinates (power, site). Valid for N > 2;
/// Kronecker conditions are taken mod N. This is the independent oracle the
/// general bracket is checked against.
pub fn m2_closed_form_bracket<S: Scalar>(
    d: &LaurentOperator<S>,
    p: CoordinateIndex,
    q: CoordinateIndex,
) -> S {
    let n = d.period();
    assert!(n > 2, "closed form assumes N > 2");
    assert!(d.lo() >= 0 && d.hi() <= 2);
    let a = |j: usize, t: i64| d.entry(j as i64, t);
    let half = S::from_ratio(1, 2);
    let eq = |x: i64, y: i64| site(x, n) == site(y, n);
    let i = p.site as i64;
    let j = q.site as i64;
    match (p.power, q.power) {
        (0, 0) | (2, 2) => S::zero(),
        // {α_i, β_j} = ½(δ_{j,i} α_i β_i − δ_{j,i−1} α_i β_{i−1})
        (0, 1) => {
            let mut v = S::zero();
            if eq(j, i) {
                v = v + half.clone() * a(0, i) * a(1, i);
            }
            if eq(j, i - 1) {
                v = v - half * a(0, i) * a(1, i - 1);
            }
            v
        }
        // {α_i, γ_j} = ½(δ_{j,i} α_i γ_i − δ_{j,i−2} α_i γ_{i−2})
        (0, 2) => {
            let mut v = S::zero();
            if eq(j, i) {
                v = v + half.clone() * a(0, i) * a(2, i);
            }
            if eq(j, i - 2) {
                v = v - half * a(0, i) * a(2, i - 2);
            }
            v
        }
        // {β_i, β_j} = δ_{j,i+1} α_{i+1} γ_i − δ_{j,i−1} α_i γ_{i−1}
        (1, 1) => {
            let mut v = S::zero();
            if eq(j, i + 1) {
                v = v + a(0, i + 1) * a(2, i);
            }
            if eq(j, i - 1) {
                v = v - a(0, i) * a(2, i - 1);
            }
            v
        }
        // {β_i, γ_j} = ½(δ_{j,i} β_i γ_i − δ_{j,i−1} β_i γ_{i−1})
        (1, 2) => {
            let mut v = S::zero();
            if eq(j, i) {
                v = v + half.clone() * a(1, i) * a(2, i);
            }
            if eq(j, i - 1) {
                v = v - half * a(1, i) * a(2, i - 1);
            }
            v
        }
        // antisymmetric counterparts
        (1, 0) | (2, 0) | (2, 1) => -m2_closed_form_bracket(d, q, p),
        _ => panic!("m=2 table indexed by powers 0..=2"),
    }
}

/// Conjugation `D ↦ α D α^{-1}` by a quasi-periodic nonvanishing sequence.
/// Coefficientwise: `a^i_s ↦ α_s a^i_s / α_{s+i}`.
pub fn conjugate<S: Scalar>(
    d: &LaurentOperator<S>,
    alpha: &QuasiPeriodicSequence<S>,
) -> Result<LaurentOperator<S>> {
    if alpha.period() != d.period() {
        return Err(Error::PeriodMismatch(alpha.period(), d.period()));
    }
    if alpha.has_zero_entry() {
        let bad = alpha.values().iter().position(|v| v.is_zero()).unwrap();
        return Err(Error::ZeroEntry {
            what: "conjugating sequence",
            site: bad,
        });
    }
    let n = d.period();
    let mut coeffs = Vec::new();
    for i in d.lo()..=d.hi() {
        let c = d.coeff(i);
        let vals = (0..n as i64)
            .map(|s| c.get(s).clone() * alpha.ratio(s, i))
            .collect();
        coeffs.push(PeriodicSequence::new(vals));
    }
    Ok(LaurentOperator::from_window(n, d.lo(), coeffs))
}

/// Left multiplication by a periodic nonvanishing sequence: `(αD)^i_s = α_s a^i_s`.
pub fn left_multiply<S: Scalar>(
    d: &LaurentOperator<S>,
    alpha: &PeriodicSequence<S>,
) -> Result<LaurentOperator<S>> {
    if alpha.period() != d.period() {
        return Err(Error::PeriodMismatch(alpha.period(), d.period()));
    }
    if alpha.has_zero_entry() {
        let bad = alpha.values().iter().position(|v| v.is_zero()).unwrap();
        return Err(Error::ZeroEntry {
            what: "left factor",
            site: bad,
        });
    }
    LaurentOperator::order_zero(alpha.clone()).multiply(d)
}

/// Central finite-difference differential of an arbitrary scalar map over
/// the coefficient window `[0, order] × [0, N)`.
pub fn differential_fd(
    d: &LaurentOperator<f64>,
    order: usize,
    g: &mut impl FnMut(&LaurentOperator<f64>) -> f64,
    h: f64,
) -> LaurentOperator<f64> {
    let n = d.period();
    let mut acc = LaurentOperator::zero(n);
    for j in 0..=order {
        for t in 0..n {
            let base = d.entry(j as i64, t as i64);
            let plus = g(&d.with_entry(j as i64, t as i64, base + h));
            let minus = g(&d.with_entry(j as i64, t as i64, base - h));
            let partial = (plus - minus) / (2.0 * h);
            if partial != 0.0 {
                let unit = LaurentOperator::coordinate_differential(n, j as i64, t as i64);
                acc = acc.add(&unit.scale(&partial)).unwrap();
            }
        }
    }
    acc
}

/// Residual of the Jacobi identity at `D` for three coordinate functions,
/// with outer derivatives of the inner bracket taken by central differences
/// of step `h`. Float mode only.
pub fn jacobi_residual(
    d: &LaurentOperator<f64>,
    p: CoordinateIndex,
    q: CoordinateIndex,
    r: CoordinateIndex,
    h: f64,
) -> f64 {
    let order = d.hi().max(0) as usize;
    let cyclic_term = |a: CoordinateIndex, b: CoordinateIndex, c: CoordinateIndex| -> f64 {
        // {a, {b, c}}(D)
        let inner = |op: &LaurentOperator<f64>| bracket_coordinates(op, b, c).unwrap();
        let d_inner = differential_fd(d, order, &mut { inner }, h);
        let da = LaurentOperator::coordinate_differential(d.period(), a.power as i64, a.site as i64);
        bracket_differentials(&da, &d_inner, d).unwrap()
    };
    cyclic_term(p, q, r) + cyclic_term(q, r, p) + cyclic_term(r, p, q)
}

/// All distinct coordinate pairs (p ≤ q lexicographically) on an order-m
/// operator, with their bracket values.
pub fn coordinate_bracket_table<S: Scalar>(
    d: &LaurentOperator<S>,
) -> Result<Vec<(CoordinateIndex, CoordinateIndex, S)>> {
    let n = d.period();
    let order = d.hi().max(0) as usize;
    let mut coords = Vec::new();
    for j in 0..=order {
        for t in 0..n {
            coords.push(CoordinateIndex::new(j, t));
        }
    }
    let mut out = Vec::new();
    for (k, &p) in coords.iter().enumerate() {
        for &q in &coords[k..] {
            out.push((p, q, bracket_coordinates(d, p, q)?));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use crate::scalar::Rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m2_operator(alpha: &[i64], beta: &[i64], gamma: &[i64]) -> LaurentOperator<Rat> {
        let to_seq =
            |v: &[i64]| PeriodicSequence::new(v.iter().map(|&x| Rat::from_i64(x)).collect());
        LaurentOperator::from_window(
            alpha.len(),
            0,
            vec![to_seq(alpha), to_seq(beta), to_seq(gamma)],
        )
    }

    #[test]
    fn paper_values_m2_n5() {
        // D with α_2 = 2, β_2 = 3, γ_1 = 5 among otherwise generic entries
        let d = m2_operator(&[4, 7, 2, 3, 6], &[1, 9, 3, 8, 2], &[5, 5, 7, 1, 4]);
        // {α_2, β_2} = ½ α_2 β_2 = 3
        let v = bracket_coordinates(&d, CoordinateIndex::new(0, 2), CoordinateIndex::new(1, 2))
            .unwrap();
        assert_eq!(v, Rat::from_i64(3));
        // {β_1, β_2} = α_2 γ_1 = 10
        let v = bracket_coordinates(&d, CoordinateIndex::new(1, 1), CoordinateIndex::new(1, 2))
            .unwrap();
        assert_eq!(v, Rat::from_i64(10));
        // {α_1, α_2} = 0
        let v = bracket_coordinates(&d, CoordinateIndex::new(0, 1), CoordinateIndex::new(0, 2))
            .unwrap();
        assert_eq!(v, Rat::from_i64(0));
    }

    #[test]
    fn closed_form_matches_general_bracket() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 3..=6usize {
            let d = sample::properly_bounded_operator::<Rat>(&mut rng, n, 2);
            for pj in 0..=2 {
                for pt in 0..n {
                    for qj in 0..=2 {
                        for qt in 0..n {
                            let p = CoordinateIndex::new(pj, pt);
                            let q = CoordinateIndex::new(qj, qt);
                            assert_eq!(
                                bracket_coordinates(&d, p, q).unwrap(),
                                m2_closed_form_bracket(&d, p, q),
                                "n={n} p={p:?} q={q:?}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn tensor_vanishes_at_order_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let d = LaurentOperator::order_zero(sample::nonzero_sequence::<Rat>(&mut rng, 4));
        for _ in 0..5 {
            let x = sample::operator(&mut rng, 4, -2, 2);
            assert!(poisson_tensor_apply(&d, &x).unwrap().is_zero());
        }
    }

    #[test]
    fn tensor_preserves_order_m_window() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for m in 1..=3usize {
            let d = sample::properly_bounded_operator::<Rat>(&mut rng, 5, m);
            for _ in 0..5 {
                let x = sample::operator(&mut rng, 5, -(m as i64), m as i64);
                let out = poisson_tensor_apply(&d, &x).unwrap();
                assert!(out.is_zero() || (out.lo() >= 0 && out.hi() <= m as i64), "{out:?}");
            }
        }
    }

    #[test]
    fn tensor_linearity_zero_input() {
        let d = m2_operator(&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]);
        let x = LaurentOperator::zero(3);
        assert!(poisson_tensor_apply(&d, &x).unwrap().is_zero());
    }

    #[test]
    fn tensor_unchanged_by_r_shift() {
        // π is the same with r replaced by r ± ½·Id
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let d = sample::properly_bounded_operator::<Rat>(&mut rng, 4, 2);
        let x = sample::operator(&mut rng, 4, -2, 2);
        let half = Rat::from_ratio(1, 2);
        for sign in [Rat::from_i64(1), Rat::from_i64(-1)] {
            let shift = sign * half.clone();
            // r±(Y) = r(Y) ± ½ Y
            let r_shifted = |y: &LaurentOperator<Rat>| {
                y.r_apply().add(&y.scale(&shift)).unwrap()
            };
            let left = d.multiply(&r_shifted(&x.multiply(&d).unwrap())).unwrap();
            let right = r_shifted(&d.multiply(&x).unwrap()).multiply(&d).unwrap();
            let pi_shifted = left.sub(&right).unwrap();
            assert_eq!(pi_shifted, poisson_tensor_apply(&d, &x).unwrap());
        }
    }

    #[test]
    fn bracket_functionals_cases() {
        let d = m2_operator(&[1, 2, 3, 4], &[5, 6, 7, 8], &[9, 1, 2, 3]);
        // coordinate functionals agree with the coordinate bracket
        for (p, q) in [((0, 1), (1, 3)), ((1, 2), (2, 0)), ((2, 1), (2, 3))] {
            let fp = OperatorFunctional::Coordinate(CoordinateIndex::new(p.0, p.1));
            let fq = OperatorFunctional::Coordinate(CoordinateIndex::new(q.0, q.1));
            assert_eq!(
                bracket_functionals(&fp, &fq, &d).unwrap(),
                bracket_coordinates(
                    &d,
                    CoordinateIndex::new(p.0, p.1),
                    CoordinateIndex::new(q.0, q.1)
                )
                .unwrap()
            );
        }
        let f = OperatorFunctional::Coordinate(CoordinateIndex::new(1, 2));
        assert_eq!(bracket_functionals(&f, &f, &d).unwrap(), Rat::from_i64(0));
        let c = OperatorFunctional::Poly(CoordPoly::constant(5, 2));
        assert_eq!(bracket_functionals(&c, &f, &d).unwrap(), Rat::from_i64(0));
        // a polynomial functional agrees with the chain rule over coordinates
        let g = OperatorFunctional::Poly(
            CoordPoly::term(2, 1, vec![((0, 1), 1), ((1, 3), 1)])
                .add(&CoordPoly::coordinate((2, 0))),
        );
        let lhs = bracket_functionals(&g, &f, &d).unwrap();
        let mut rhs = Rat::from_i64(0);
        for (key, coeff) in [
            (((0usize, 1usize)), d.entry(1, 3)),
            (((1, 3)), d.entry(0, 1)),
            (((2, 0)), Rat::from_i64(1) / Rat::from_i64(2)),
        ] {
            let scale = if key == (2, 0) {
                Rat::from_i64(1)
            } else {
                Rat::from_i64(2) * coeff
            };
            let term = bracket_coordinates(
                &d,
                CoordinateIndex::new(key.0, key.1),
                CoordinateIndex::new(1, 2),
            )
            .unwrap();
            rhs = rhs + scale * term;
        }
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn skew_symmetry_all_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let d = sample::properly_bounded_operator::<Rat>(&mut rng, 4, 3);
        for pj in 0..=3 {
            for qj in 0..=3 {
                for pt in 0..4 {
                    for qt in 0..4 {
                        let p = CoordinateIndex::new(pj, pt);
                        let q = CoordinateIndex::new(qj, qt);
                        let pq = bracket_coordinates(&d, p, q).unwrap();
                        let qp = bracket_coordinates(&d, q, p).unwrap();
                        assert_eq!(pq, -qp);
                    }
                }
            }
        }
    }

    #[test]
    fn conjugation_is_poisson_for_coordinates() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for m in [2usize, 3] {
            let n = 5;
            let d = sample::properly_bounded_operator::<Rat>(&mut rng, n, m);
            let alpha = sample::quasi_periodic(&mut rng, n);
            let conj = conjugate(&d, &alpha).unwrap();
            for _ in 0..12 {
                let p = CoordinateIndex::new(rng.gen_range(0..=m), rng.gen_range(0..n));
                let q = CoordinateIndex::new(rng.gen_range(0..=m), rng.gen_range(0..n));
                // pullback of coordinates through the conjugation map scales
                // them by the constants α_t / α_{t+j}
                let cp = alpha.ratio(p.site as i64, p.power as i64);
                let cq = alpha.ratio(q.site as i64, q.power as i64);
                let lhs = cp * cq * bracket_coordinates(&d, p, q).unwrap();
                let rhs = bracket_coordinates(&conj, p, q).unwrap();
                assert_eq!(lhs, rhs, "m={m} p={p:?} q={q:?}");
            }
        }
    }

    #[test]
    fn left_multiplication_is_poisson_for_coordinates() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let n = 5;
        let d = sample::properly_bounded_operator::<Rat>(&mut rng, n, 2);
        let alpha = sample::nonzero_sequence::<Rat>(&mut rng, n);
        let scaled = left_multiply(&d, &alpha).unwrap();
        for _ in 0..12 {
            let p = CoordinateIndex::new(rng.gen_range(0..=2), rng.gen_range(0..n));
            let q = CoordinateIndex::new(rng.gen_range(0..=2), rng.gen_range(0..n));
            let cp = alpha.get(p.site as i64).clone();
            let cq = alpha.get(q.site as i64).clone();
            let lhs = cp * cq * bracket_coordinates(&d, p, q).unwrap();
            let rhs = bracket_coordinates(&scaled, p, q).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn conjugate_examples() {
        // constant α acts trivially
        let d = m2_operator(&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]);
        let alpha = QuasiPeriodicSequence::new(vec![Rat::from_i64(3); 3], Rat::from_i64(1));
        assert_eq!(conjugate(&d, &alpha).unwrap(), d);

        // m = 1: D = a + bT with quasi-periodic α gives (a_s, α_s b_s / α_{s+1})
        let a = PeriodicSequence::new(vec![Rat::from_i64(1), Rat::from_i64(2)]);
        let b = PeriodicSequence::new(vec![Rat::from_i64(3), Rat::from_i64(4)]);
        let d1 = LaurentOperator::order_zero(a.clone())
            .add(&LaurentOperator::monomial(1, b.clone()))
            .unwrap();
        let alpha =
            QuasiPeriodicSequence::new(vec![Rat::from_i64(2), Rat::from_i64(5)], Rat::from_i64(7));
        let out = conjugate(&d1, &alpha).unwrap();
        assert_eq!(out.coeff(0), a);
        let expected_b: Vec<Rat> = (0..2)
            .map(|s| alpha.get(s) * b.get(s).clone() / alpha.get(s + 1))
            .collect();
        assert_eq!(out.coeff(1), PeriodicSequence::new(expected_b));

        let zero_alpha =
            QuasiPeriodicSequence::new(vec![Rat::from_i64(0), Rat::from_i64(1)], Rat::from_i64(1));
        assert!(matches!(
            conjugate(&d1, &zero_alpha),
            Err(Error::ZeroEntry { .. })
        ));
    }

    #[test]
    fn left_multiply_examples() {
        let d = m2_operator(&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]);
        let ones = PeriodicSequence::ones(3);
        assert_eq!(left_multiply(&d, &ones).unwrap(), d);
        let alpha = PeriodicSequence::new(vec![
            Rat::from_i64(2),
            Rat::from_i64(3),
            Rat::from_i64(5),
        ]);
        let out = left_multiply(&d, &alpha).unwrap();
        for j in 0..=2i64 {
            for s in 0..3i64 {
                assert_eq!(out.entry(j, s), alpha.get(s).clone() * d.entry(j, s));
            }
        }
    }

    #[test]
    fn jacobi_residual_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let h = 1e-5;
        for (m, n) in [(2usize, 4usize), (3, 5)] {
            let d = sample::properly_bounded_operator::<f64>(&mut rng, n, m);
            for _ in 0..3 {
                let pick = |rng: &mut ChaCha8Rng| {
                    CoordinateIndex::new(rng.gen_range(0..=m), rng.gen_range(0..n))
                };
                let (p, q, r) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
                let res = jacobi_residual(&d, p, q, r, h);
                assert!(res.abs() <= 1e-6, "m={m} n={n} residual={res}");
            }
            // repeated index: antisymmetry makes the sum collapse
            let p = CoordinateIndex::new(0, 1);
            let q = CoordinateIndex::new(1, 2);
            let res = jacobi_residual(&d, p, p, q, h);
            assert!(res.abs() <= 1e-6);
        }
    }

    use rand::Rng;
}
