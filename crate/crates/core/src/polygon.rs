//! Twisted polygons and their dictionary with difference operators.
//!
//! A properly bounded operator of support `[0, m]` has an m-dimensional
//! kernel; reading the kernel basis off as lift vectors `γ_s ∈ R^m` produces
//! a twisted N-gon, and conversely the frame relation
//! `γ_{s+m} = Σ_r a^r_s γ_{s+r}` recovers an operator in the form
//! `Σ_{r<m} a^r T^r − T^m`. Kernel seeds are the standard basis at indices
//! `0..m-1`, which fixes the GL(m) ambiguity and makes roundtrips exact.

use crate::error::{Error, Result};
use crate::matrix::{basis_vector, SquareMatrix};
use crate::op::LaurentOperator;
use crate::scalar::Scalar;
use crate::seq::{PeriodicSequence, QuasiPeriodicSequence};

/// Lifts of a twisted N-gon over one period, plus the monodromy acting on
/// lifts: `γ_{s+N} = M γ_s`.
#[derive(Clone, PartialEq, Debug)]
pub struct TwistedPolygon<S: Scalar> {
    m: usize,
    n: usize,
    lifts: Vec<Vec<S>>,
    monodromy: SquareMatrix<S>,
}

impl<S: Scalar> TwistedPolygon<S> {
    pub fn new(lifts: Vec<Vec<S>>, monodromy: SquareMatrix<S>) -> Result<Self> {
        let n = lifts.len();
        assert!(n >= 1);
        let m = lifts[0].len();
        assert!(lifts.iter().all(|v| v.len() == m));
        if monodromy.dim() != m {
            return Err(Error::DimensionMismatch(monodromy.dim(), m));
        }
        if monodromy.det().is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(TwistedPolygon {
            m,
            n,
            lifts,
            monodromy,
        })
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn period(&self) -> usize {
        self.n
    }

    pub fn monodromy(&self) -> &SquareMatrix<S> {
        &self.monodromy
    }

    pub fn stored_lifts(&self) -> &[Vec<S>] {
        &self.lifts
    }

    /// Lift at an arbitrary index, extended through the monodromy.
    pub fn lift(&self, s: i64) -> Vec<S> {
        let n = self.n as i64;
        let r = s.rem_euclid(n);
        let q = (s - r) / n;
        let mut v = self.lifts[r as usize].clone();
        if q > 0 {
            for _ in 0..q {
                v = self.monodromy.mul_vec(&v);
            }
        } else if q < 0 {
            let inv = self
                .monodromy
                .inverse()
                .expect("monodromy invertible by construction");
            for _ in 0..(-q) {
                v = inv.mul_vec(&v);
            }
        }
        v
    }

    /// Moving frame `ρ_s = (γ_s, γ_{s+1}, …, γ_{s+m-1})` as columns.
    pub fn frame(&self, s: i64) -> SquareMatrix<S> {
        SquareMatrix::from_cols((0..self.m as i64).map(|k| self.lift(s + k)).collect())
    }

    /// Frame determinants `d_s` for one period.
    pub fn frame_determinants(&self) -> Vec<S> {
        (0..self.n as i64).map(|s| self.frame(s).det()).collect()
    }

    /// Error with the first degenerate site, if any.
    pub fn check_nondegenerate(&self) -> Result<()> {
        for (s, d) in self.frame_determinants().iter().enumerate() {
            if d.is_zero() {
                return Err(Error::DegeneratePolygon { site: s });
            }
        }
        Ok(())
    }

    /// Image under a global linear map: lifts `g·γ_s`, monodromy `g M g^{-1}`.
    pub fn transform(&self, g: &SquareMatrix<S>) -> Result<Self> {
        let g_inv = g.inverse()?;
        let lifts = self.lifts.iter().map(|v| g.mul_vec(v)).collect();
        let monodromy = g.mul(&self.monodromy).mul(&g_inv);
        TwistedPolygon::new(lifts, monodromy)
    }
}

/// The m kernel solutions of a properly bounded operator over the window
/// `[0, N+m-1]`, stored as lift vectors, with the induced monodromy.
#[derive(Clone, Debug)]
pub struct KernelWindow<S: Scalar> {
    pub m: usize,
    pub n: usize,
    pub window: Vec<Vec<S>>,
    pub monodromy: SquareMatrix<S>,
}

/// Kernel basis with standard-basis seeds: `γ_i = e_i` for `i = 0..m-1`,
/// extended by `γ_{i+m} = -(a^m_i)^{-1} Σ_{r<m} a^r_i γ_{i+r}`.
pub fn kernel_basis<S: Scalar>(d: &LaurentOperator<S>) -> Result<KernelWindow<S>> {
    if d.lo() != 0 || d.hi() < 1 || !d.is_properly_bounded() {
        return Err(Error::NotProperlyBounded);
    }
    let m = d.hi() as usize;
    let n = d.period();
    let mut window: Vec<Vec<S>> = (0..m).map(|i| basis_vector(m, i)).collect();
    for i in 0..n {
        let lead = d.entry(m as i64, i as i64);
        let mut v = vec![S::zero(); m];
        for r in 0..m {
            let c = d.entry(r as i64, i as i64);
            if c.is_zero() {
                continue;
            }
            for k in 0..m {
                v[k] = v[k].clone() + c.clone() * window[i + r][k].clone();
            }
        }
        for x in v.iter_mut() {
            *x = -(x.clone() / lead.clone());
        }
        window.push(v);
    }
    // seeds are the standard basis, so ρ_0 = I and M = ρ_N
    let monodromy =
        SquareMatrix::from_cols((0..m).map(|k| window[n + k].clone()).collect());
    Ok(KernelWindow {
        m,
        n,
        window,
        monodromy,
    })
}

/// Polygon lifts read off the kernel of a properly bounded operator.
pub fn polygon_from_operator<S: Scalar>(d: &LaurentOperator<S>) -> Result<TwistedPolygon<S>> {
    let kernel = kernel_basis(d)?;
    let lifts = kernel.window[..kernel.n].to_vec();
    let polygon = TwistedPolygon::new(lifts, kernel.monodromy)?;
    polygon.check_nondegenerate()?;
    Ok(polygon)
}

/// Operator `Σ_{r<m} a^r T^r − T^m` whose kernel contains the polygon lifts:
/// solves `ρ_s · (a^0_s, …, a^{m-1}_s)^T = γ_{s+m}` per site.
pub fn operator_from_polygon<S: Scalar>(p: &TwistedPolygon<S>) -> Result<LaurentOperator<S>> {
    let (m, n) = (p.dim(), p.period());
    let mut coeffs: Vec<Vec<S>> = vec![Vec::with_capacity(n); m];
    for s in 0..n as i64 {
        let frame = p.frame(s);
        let target = p.lift(s + m as i64);
        let x = frame.solve(&target).map_err(|_| Error::SingularFrame {
            site: s as usize,
        })?;
        for (r, v) in x.into_iter().enumerate() {
            coeffs[r].push(v);
        }
    }
    let mut windows: Vec<PeriodicSequence<S>> = coeffs
        .into_iter()
        .map(PeriodicSequence::new)
        .collect();
    windows.push(PeriodicSequence::constant(n, -S::one()));
    Ok(LaurentOperator::from_window(n, 0, windows))
}

/// The invariants `a^r_s`, r = 0..m-1, of a polygon (or of an operator in
/// the `Σ a^r T^r − T^m` form).
#[derive(Clone, PartialEq, Debug)]
pub struct CompanionSequence<S: Scalar> {
    m: usize,
    n: usize,
    coeffs: Vec<PeriodicSequence<S>>,
}

impl<S: Scalar> CompanionSequence<S> {
    pub fn new(m: usize, coeffs: Vec<PeriodicSequence<S>>) -> Self {
        assert_eq!(coeffs.len(), m);
        let n = coeffs[0].period();
        assert!(coeffs.iter().all(|c| c.period() == n));
        CompanionSequence { m, n, coeffs }
    }

    /// Read the invariants off an operator of the form `Σ a^r T^r − T^m`.
    pub fn from_rdo_operator(d: &LaurentOperator<S>) -> Result<Self> {
        if d.lo() < 0 {
            return Err(Error::NotProperlyBounded);
        }
        let m = d.hi();
        if m < 1 || d.coeff(m) != PeriodicSequence::constant(d.period(), -S::one()) {
            return Err(Error::NotProperlyBounded);
        }
        Ok(Self::new(
            m as usize,
            (0..m).map(|r| d.coeff(r)).collect(),
        ))
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn period(&self) -> usize {
        self.n
    }

    /// `a^r_s`, cyclic in `s`.
    pub fn get(&self, r: usize, s: i64) -> S {
        assert!(r < self.m);
        self.coeffs[r].get(s).clone()
    }

    pub fn set(&mut self, r: usize, s: i64, v: S) {
        self.coeffs[r].set(s, v);
    }

    pub fn to_rdo_operator(&self) -> LaurentOperator<S> {
        let mut windows = self.coeffs.clone();
        windows.push(PeriodicSequence::constant(self.n, -S::one()));
        LaurentOperator::from_window(self.n, 0, windows)
    }

    pub fn has_nonvanishing_a0(&self) -> bool {
        !self.coeffs[0].has_zero_entry()
    }
}

/// Companion matrices `A_s` with sub-identity block and last column
/// `(a^0_s, …, a^{m-1}_s)^T`; `det A_s = ±a^0_s`.
pub fn companion_matrices<S: Scalar>(inv: &CompanionSequence<S>) -> Result<Vec<SquareMatrix<S>>> {
    let (m, n) = (inv.dim(), inv.period());
    if !inv.has_nonvanishing_a0() {
        let bad = (0..n).find(|&s| inv.get(0, s as i64).is_zero()).unwrap();
        return Err(Error::ZeroEntry {
            what: "a^0",
            site: bad,
        });
    }
    Ok((0..n as i64)
        .map(|s| {
            let mut a = SquareMatrix::zeros(m);
            for i in 0..m.saturating_sub(1) {
                a.set(i + 1, i, S::one());
            }
            for r in 0..m {
                a.set(r, m - 1, inv.get(r, s));
            }
            a
        })
        .collect())
}

/// `f ∘ D ∘ g^{-1}` for quasi-periodic gauges with equal monodromy:
/// coefficientwise `(f∘D∘g^{-1})^i_s = f_s a^i_s / g_{s+i}`.
pub fn left_right_act<S: Scalar>(
    d: &LaurentOperator<S>,
    f: &QuasiPeriodicSequence<S>,
    g: &QuasiPeriodicSequence<S>,
) -> Result<LaurentOperator<S>> {
    if f.period() != d.period() || g.period() != d.period() {
        return Err(Error::PeriodMismatch(f.period(), d.period()));
    }
    if f.monodromy() != g.monodromy() {
        return Err(Error::MonodromyMismatch);
    }
    for (label, seq) in [("left gauge", f), ("right gauge", g)] {
        if let Some(bad) = seq.values().iter().position(|v| v.is_zero()) {
            return Err(Error::ZeroEntry {
                what: if label == "left gauge" {
                    "left gauge"
                } else {
                    "right gauge"
                },
                site: bad,
            });
        }
    }
    let n = d.period();
    let mut coeffs = Vec::new();
    for i in d.lo()..=d.hi() {
        let c = d.coeff(i);
        let vals = (0..n as i64)
            .map(|s| f.get(s) * c.get(s).clone() / g.get(s + i))
            .collect();
        coeffs.push(PeriodicSequence::new(vals));
    }
    Ok(LaurentOperator::from_window(n, d.lo(), coeffs))
}

/// Gauge a properly bounded operator of support `[0, m]` into the section
/// `(-1)^m + v^1 T + … + T^m`, possible when `gcd(m, N) = 1`.
///
/// The two coefficient conditions `f_s u^m_s = g_{s+m}` and
/// `f_s u^0_s = (-1)^m g_s` leave a step-m cyclic recursion
/// `g_{s+m} = c_s g_s` with `c_s = (-1)^m u^m_s / u^0_s`; walking it around
/// the cycle forces `λ^m = Π c_s`, so the gauge monodromy is an m-th root.
/// When no such root exists in the scalar field (negative product with even
/// m, or a non-perfect power in rational mode) the operator is reported as
/// lying outside the section over this field.
pub fn normalize_to_section<S: Scalar>(
    d: &LaurentOperator<S>,
) -> Result<(
    LaurentOperator<S>,
    QuasiPeriodicSequence<S>,
    QuasiPeriodicSequence<S>,
)> {
    if d.lo() != 0 || d.hi() < 1 || !d.is_properly_bounded() {
        return Err(Error::NotProperlyBounded);
    }
    let m = d.hi() as usize;
    let n = d.period();
    if num::integer::gcd(m, n) != 1 {
        return Err(Error::CoprimalityObstruction { m, n });
    }
    let sign = if m % 2 == 0 { S::one() } else { -S::one() };
    let c = |s: i64| sign.clone() * d.entry(m as i64, s) / d.entry(0, s);

    // walk positions 0, m, 2m, …, Nm over Z
    let mut walk = vec![S::one()];
    for k in 0..n {
        let prev = walk[k].clone();
        walk.push(c((k * m) as i64) * prev);
    }
    let big_c = walk[n].clone();
    let lambda = big_c.nth_root(m as u32).ok_or_else(|| Error::RootObstruction {
        root: m as u32,
        value: format!("{big_c}"),
    })?;

    let mut g_vals = vec![S::one(); n];
    for (k, val) in walk.iter().take(n).enumerate() {
        let pos = k * m;
        let (q, r) = (pos / n, pos % n);
        let mut v = val.clone();
        for _ in 0..q {
            v = v / lambda.clone();
        }
        g_vals[r] = v;
    }
    let g = QuasiPeriodicSequence::new(g_vals, lambda.clone());
    let f_vals = (0..n as i64)
        .map(|s| g.get(s + m as i64) / d.entry(m as i64, s))
        .collect();
    let f = QuasiPeriodicSequence::new(f_vals, lambda);
    let canonical = left_right_act(d, &f, &g)?;
    Ok((canonical, f, g))
}

/// The cross-ratio `[a, b, c, d] = (a-b)(c-d) / ((a-c)(b-d))`.
pub fn cross_ratio<S: Scalar>(a: &S, b: &S, c: &S, d: &S) -> Result<S> {
    let ac = a.clone() - c.clone();
    let bd = b.clone() - d.clone();
    if ac.is_zero() || bd.is_zero() {
        return Err(Error::CoincidentPoints);
    }
    let ab = a.clone() - b.clone();
    let cd = c.clone() - d.clone();
    Ok(ab * cd / (ac * bd))
}

/// Cross-ratio of four points of P^1 given by lift vectors in R², via
/// `det(V_a,V_b) det(V_c,V_d) / (det(V_a,V_c) det(V_b,V_d))`.
pub fn cross_ratio_from_lifts<S: Scalar>(
    a: &[S],
    b: &[S],
    c: &[S],
    d: &[S],
) -> Result<S> {
    let det2 = |u: &[S], v: &[S]| u[0].clone() * v[1].clone() - u[1].clone() * v[0].clone();
    let ac = det2(a, c);
    let bd = det2(b, d);
    if ac.is_zero() || bd.is_zero() {
        return Err(Error::CoincidentPoints);
    }
    Ok(det2(a, b) * det2(c, d) / (ac * bd))
}
