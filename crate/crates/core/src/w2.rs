//! The m = 2 specialization: cross-ratio coordinates and the cubic bracket.
//!
//! With an order-2 operator written `α + βT + γT²`, the projection to the
//! quotient is `x_i = α_i γ_{i-1} / (β_{i-1} β_i)`, and in these coordinates
//! the reduced structure is the cubic bracket
//!
//! ```text
//! {x_i, x_{i+1}} = x_i x_{i+1} (x_i + x_{i+1} - 1),
//! {x_i, x_{i+2}} = x_i x_{i+1} x_{i+2},
//! ```
//!
//! all other pairs vanishing. For small periods the ±1/±2 stencils can land
//! on the same pair; contributions are summed, which is exactly what the
//! chain rule through the coefficient brackets produces.

use crate::error::{Error, Result};
use crate::functional::CoordPoly;
use crate::op::LaurentOperator;
use crate::poisson::{bracket_coordinates, CoordinateIndex};
use crate::polygon::{cross_ratio_from_lifts, TwistedPolygon};
use crate::scalar::{deviation, Dual, Scalar};
use crate::seq::{site, PeriodicSequence};

/// Cyclic chart of cross-ratios `x_0 … x_{N-1}`, N > 2.
#[derive(Clone, PartialEq, Debug)]
pub struct CrossRatioChart<S: Scalar> {
    values: Vec<S>,
}

impl<S: Scalar> CrossRatioChart<S> {
    pub fn new(values: Vec<S>) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::ChartDegenerate {
                site: 0,
                reason: "chart needs period N > 2",
            });
        }
        Ok(CrossRatioChart { values })
    }

    pub fn period(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, i: i64) -> S {
        self.values[site(i, self.values.len())].clone()
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    /// The cubic bracket degenerates where a coordinate is 0 or 1 and the
    /// chart itself requires finite values; report the first offender.
    pub fn check_regular(&self) -> Result<()> {
        for (s, v) in self.values.iter().enumerate() {
            if !v.magnitude().is_finite() {
                return Err(Error::ChartDegenerate {
                    site: s,
                    reason: "non-finite cross-ratio",
                });
            }
            if v.is_zero() {
                return Err(Error::ChartDegenerate {
                    site: s,
                    reason: "cross-ratio equals 0",
                });
            }
            if (v.clone() - S::one()).is_zero() {
                return Err(Error::ChartDegenerate {
                    site: s,
                    reason: "cross-ratio equals 1",
                });
            }
        }
        Ok(())
    }
}

/// `x_i = α_i γ_{i-1} / (β_{i-1} β_i)` from the coefficients of
/// `α + βT + γT²`.
pub fn cross_ratios_from_coeffs<S: Scalar>(
    alpha: &PeriodicSequence<S>,
    beta: &PeriodicSequence<S>,
    gamma: &PeriodicSequence<S>,
) -> Result<CrossRatioChart<S>> {
    let n = alpha.period();
    if beta.period() != n || gamma.period() != n {
        return Err(Error::PeriodMismatch(beta.period(), n));
    }
    if let Some(bad) = beta.values().iter().position(|v| v.is_zero()) {
        return Err(Error::ZeroEntry {
            what: "β",
            site: bad,
        });
    }
    let values = (0..n as i64)
        .map(|i| {
            alpha.get(i).clone() * gamma.get(i - 1).clone()
                / (beta.get(i - 1).clone() * beta.get(i).clone())
        })
        .collect();
    CrossRatioChart::new(values)
}

/// Chart read off an order-2 operator.
pub fn chart_from_operator<S: Scalar>(d: &LaurentOperator<S>) -> Result<CrossRatioChart<S>> {
    if d.lo() != 0 || d.hi() != 2 {
        return Err(Error::NotProperlyBounded);
    }
    cross_ratios_from_coeffs(&d.coeff(0), &d.coeff(1), &d.coeff(2))
}

/// Chart computed from polygon lifts through the determinant form of the
/// cross-ratio; the independent pipeline against the coefficient formula.
pub fn chart_from_polygon<S: Scalar>(p: &TwistedPolygon<S>) -> Result<CrossRatioChart<S>> {
    if p.dim() != 2 {
        return Err(Error::DimensionMismatch(p.dim(), 2));
    }
    let n = p.period();
    let values: Result<Vec<S>> = (0..n as i64)
        .map(|i| {
            cross_ratio_from_lifts(
                &p.lift(i - 1),
                &p.lift(i),
                &p.lift(i + 1),
                &p.lift(i + 2),
            )
        })
        .collect();
    CrossRatioChart::new(values?)
}

/// `{x_i, x_j}` of the cubic bracket, cyclic indices, stencil contributions
/// summed when the period makes several apply.
pub fn w2_bracket<S: Scalar>(x: &CrossRatioChart<S>, i: i64, j: i64) -> S {
    let n = x.period();
    let mut acc = S::zero();
    for k in [-2i64, -1, 1, 2] {
        if site(i + k, n) != site(j, n) {
            continue;
        }
        let v = match k {
            1 => {
                let (a, b) = (x.get(i), x.get(i + 1));
                a.clone() * b.clone() * (a + b - S::one())
            }
            2 => x.get(i) * x.get(i + 1) * x.get(i + 2),
            -1 => {
                let (a, b) = (x.get(i - 1), x.get(i));
                -(a.clone() * b.clone() * (a + b - S::one()))
            }
            -2 => -(x.get(i - 2) * x.get(i - 1) * x.get(i)),
            _ => unreachable!(),
        };
        acc = acc + v;
    }
    acc
}

/// Pushforward of the coefficient brackets through the chart, compared with
/// the cubic bracket; returns the maximum deviation over all index pairs
/// (exactly zero in rational mode).
pub fn verify_w2_reduction<S: Scalar>(d: &LaurentOperator<S>) -> Result<f64> {
    if d.lo() != 0 || d.hi() != 2 {
        return Err(Error::NotProperlyBounded);
    }
    let n = d.period();
    if n <= 2 {
        return Err(Error::ChartDegenerate {
            site: 0,
            reason: "reduction comparison needs N > 2",
        });
    }
    let x = chart_from_operator(d)?;

    // ∂x_i/∂(coefficient): x_i touches α_i, γ_{i-1}, β_{i-1}, β_i.
    // Jacobian rows are sparse; entries accumulate in case of collisions.
    let jacobian_row = |i: i64| -> Vec<((usize, usize), S)> {
        let xi = x.get(i);
        vec![
            ((0, site(i, n)), xi.clone() / d.entry(0, i)),
            ((2, site(i - 1, n)), xi.clone() / d.entry(2, i - 1)),
            ((1, site(i - 1, n)), -(xi.clone() / d.entry(1, i - 1))),
            ((1, site(i, n)), -(xi / d.entry(1, i))),
        ]
    };

    // coefficient bracket matrix over the coordinates that appear
    let mut max_dev: f64 = 0.0;
    for i in 0..n as i64 {
        let row_i = jacobian_row(i);
        for j in 0..n as i64 {
            let row_j = jacobian_row(j);
            let mut push = S::zero();
            for ((pj, pt), dp) in &row_i {
                for ((qj, qt), dq) in &row_j {
                    let b = bracket_coordinates(
                        d,
                        CoordinateIndex::new(*pj, *pt),
                        CoordinateIndex::new(*qj, *qt),
                    )?;
                    if b.is_zero() {
                        continue;
                    }
                    push = push + dp.clone() * dq.clone() * b;
                }
            }
            let expected = w2_bracket(&x, i, j);
            max_dev = max_dev.max(deviation(&push, &expected));
        }
    }
    Ok(max_dev)
}

/// Cyclic Jacobi sum `{x_i,{x_j,x_k}} + {x_j,{x_k,x_i}} + {x_k,{x_i,x_j}}`
/// of the cubic bracket, evaluated exactly via dual numbers.
pub fn w2_jacobi_cyclic_sum<S: Scalar>(x: &CrossRatioChart<S>, i: i64, j: i64, k: i64) -> S {
    let n = x.period();
    let term = |a: i64, b: i64, c: i64| -> S {
        // Σ_p ∂{x_b, x_c}/∂x_p · {x_a, x_p}
        let mut acc = S::zero();
        for p in 0..n as i64 {
            let dual_values: Vec<Dual<S>> = (0..n as i64)
                .map(|s| {
                    if site(s, n) == site(p, n) {
                        Dual::variable(x.get(s))
                    } else {
                        Dual::constant(x.get(s))
                    }
                })
                .collect();
            let dual_chart = CrossRatioChart::new(dual_values).unwrap();
            let partial = w2_bracket(&dual_chart, b, c).der;
            if partial.is_zero() {
                continue;
            }
            acc = acc + partial * w2_bracket(x, a, p);
        }
        acc
    };
    term(i, j, k) + term(j, k, i) + term(k, i, j)
}

/// Hamiltonians on a chart, with analytic gradients.
#[derive(Clone, Debug)]
pub enum ChartHamiltonian {
    /// `H = Σ x_i`
    SumX,
    /// `H = Σ log x_i`
    SumLogX,
    /// polynomial in the chart values, keyed by `(0, site)`
    Poly(CoordPoly),
}

impl ChartHamiltonian {
    pub fn eval(&self, x: &CrossRatioChart<f64>) -> f64 {
        match self {
            ChartHamiltonian::SumX => x.values().iter().sum(),
            ChartHamiltonian::SumLogX => x.values().iter().map(|v| v.ln()).sum(),
            ChartHamiltonian::Poly(p) => p.eval(&mut |_, s| x.get(s as i64)),
        }
    }

    pub fn gradient(&self, x: &CrossRatioChart<f64>, i: i64) -> f64 {
        match self {
            ChartHamiltonian::SumX => 1.0,
            ChartHamiltonian::SumLogX => 1.0 / x.get(i),
            ChartHamiltonian::Poly(p) => p
                .derivative((0, site(i, x.period())))
                .eval(&mut |_, s| x.get(s as i64)),
        }
    }
}

fn flow_derivative(x: &CrossRatioChart<f64>, h: &ChartHamiltonian) -> Vec<f64> {
    let n = x.period();
    (0..n as i64)
        .map(|i| {
            // only sites within the stencil contribute
            let mut acc = 0.0;
            for dj in -2i64..=2 {
                if dj == 0 {
                    continue;
                }
                let j = i + dj;
                acc += w2_bracket(x, i, j) * h.gradient(x, j);
            }
            acc
        })
        .collect()
}

/// One explicit RK4 step of `ẋ_i = Σ_j {x_i, x_j} ∂H/∂x_j`.
pub fn hamiltonian_step(
    x: &CrossRatioChart<f64>,
    h: &ChartHamiltonian,
    dt: f64,
) -> CrossRatioChart<f64> {
    let n = x.period();
    let add = |base: &CrossRatioChart<f64>, dir: &[f64], scale: f64| {
        CrossRatioChart::new(
            (0..n)
                .map(|i| base.get(i as i64) + scale * dir[i])
                .collect(),
        )
        .unwrap()
    };
    let k1 = flow_derivative(x, h);
    let k2 = flow_derivative(&add(x, &k1, dt / 2.0), h);
    let k3 = flow_derivative(&add(x, &k2, dt / 2.0), h);
    let k4 = flow_derivative(&add(x, &k3, dt), h);
    CrossRatioChart::new(
        (0..n)
            .map(|i| {
                x.get(i as i64) + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            })
            .collect(),
    )
    .unwrap()
}
