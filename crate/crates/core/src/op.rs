//! N-periodic pseudo-difference operators.
//!
//! An operator is a finite window of shift powers `Σ_{i=lo}^{hi} a^i T^i`
//! with N-periodic coefficient sequences, where `T` is the left shift
//! `(T ξ)_j = ξ_{j+1}`. Multiplication uses the commutation rule
//! `T^i ∘ b = (T^i b) ∘ T^i`.
//!
//! Semi-infinite tails (from inversion) are represented by truncation: a
//! `tail_floor` marks the power below which coefficients have been dropped.
//! Products and sums propagate the floor of validity and clip below it, so
//! every stored coefficient of a truncated result is exact.


use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::seq::PeriodicSequence;

#[derive(Clone, PartialEq, Debug)]
pub struct LaurentOperator<S: Scalar> {
    n: usize,
    lo: i64,
    coeffs: Vec<PeriodicSequence<S>>,
    tail_floor: Option<i64>,
}

impl<S: Scalar> LaurentOperator<S> {
    fn normalized(
        n: usize,
        mut lo: i64,
        mut coeffs: Vec<PeriodicSequence<S>>,
        tail_floor: Option<i64>,
    ) -> Self {
        if let Some(floor) = tail_floor {
            while !coeffs.is_empty() && lo < floor {
                coeffs.remove(0);
                lo += 1;
            }
        }
        while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
            coeffs.pop();
        }
        while coeffs.len() > 1 && coeffs.first().unwrap().is_zero() {
            coeffs.remove(0);
            lo += 1;
        }
        if coeffs.is_empty() || (coeffs.len() == 1 && coeffs[0].is_zero()) {
            return LaurentOperator {
                n,
                lo: 0,
                coeffs: vec![PeriodicSequence::zeros(n)],
                tail_floor,
            };
        }
        LaurentOperator {
            n,
            lo,
            coeffs,
            tail_floor,
        }
    }

    /// Build from an explicit window of coefficients for powers `lo..`.
    pub fn from_window(n: usize, lo: i64, coeffs: Vec<PeriodicSequence<S>>) -> Self {
        assert!(!coeffs.is_empty());
        assert!(coeffs.iter().all(|c| c.period() == n));
        Self::normalized(n, lo, coeffs, None)
    }

    pub fn zero(n: usize) -> Self {
        Self::from_window(n, 0, vec![PeriodicSequence::zeros(n)])
    }

    pub fn identity(n: usize) -> Self {
        Self::from_window(n, 0, vec![PeriodicSequence::ones(n)])
    }

    /// The single term `seq ∘ T^k`.
    pub fn monomial(k: i64, seq: PeriodicSequence<S>) -> Self {
        Self::from_window(seq.period(), k, vec![seq])
    }

    /// The shift operator `T^k`.
    pub fn shift_power(n: usize, k: i64) -> Self {
        Self::monomial(k, PeriodicSequence::ones(n))
    }

    /// An order-zero operator (termwise multiplication by `seq`).
    pub fn order_zero(seq: PeriodicSequence<S>) -> Self {
        Self::monomial(0, seq)
    }

    /// The differential of the coordinate function `a^j_t`, namely the
    /// operator `T^{-j} ∘ δ_t`.
    pub fn coordinate_differential(n: usize, power: i64, t: i64) -> Self {
        Self::monomial(-power, PeriodicSequence::indicator(n, t + power))
    }

    pub fn period(&self) -> usize {
        self.n
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.coeffs.len() as i64 - 1
    }

    /// Truncation floor: `Some(f)` when coefficients below power `f` were
    /// dropped from a semi-infinite tail.
    pub fn tail_floor(&self) -> Option<i64> {
        self.tail_floor
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Coefficient sequence at power `i` (zero outside the window).
    pub fn coeff(&self, i: i64) -> PeriodicSequence<S> {
        if i < self.lo || i > self.hi() {
            PeriodicSequence::zeros(self.n)
        } else {
            self.coeffs[(i - self.lo) as usize].clone()
        }
    }

    fn coeff_ref(&self, i: i64) -> Option<&PeriodicSequence<S>> {
        if i < self.lo || i > self.hi() {
            None
        } else {
            Some(&self.coeffs[(i - self.lo) as usize])
        }
    }

    /// Single coefficient entry `a^i_t` (zero outside the window).
    pub fn entry(&self, power: i64, t: i64) -> S {
        match self.coeff_ref(power) {
            Some(c) => c.get(t).clone(),
            None => S::zero(),
        }
    }

    /// Copy with one coefficient entry replaced, extending the window if
    /// necessary.
    pub fn with_entry(&self, power: i64, t: i64, v: S) -> Self {
        let lo = self.lo.min(power);
        let hi = self.hi().max(power);
        let mut coeffs: Vec<PeriodicSequence<S>> = (lo..=hi).map(|i| self.coeff(i)).collect();
        coeffs[(power - lo) as usize].set(t, v);
        Self::normalized(self.n, lo, coeffs, self.tail_floor)
    }

    /// Finite support both ways and no truncation marker.
    pub fn is_exact(&self) -> bool {
        self.tail_floor.is_none()
    }

    /// Difference operator: no negative shift powers.
    pub fn is_difference(&self) -> bool {
        self.is_exact() && (self.lo >= 0 || self.is_zero())
    }

    /// Entrywise-nonzero lowest and highest coefficients.
    pub fn is_properly_bounded(&self) -> bool {
        self.is_exact()
            && !self.coeffs.first().unwrap().has_zero_entry()
            && !self.coeffs.last().unwrap().has_zero_entry()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_period(other)?;
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let mut coeffs = Vec::with_capacity((hi - lo + 1) as usize);
        for i in lo..=hi {
            let mut c = PeriodicSequence::zeros(self.n);
            if let Some(a) = self.coeff_ref(i) {
                c = c.add(a);
            }
            if let Some(b) = other.coeff_ref(i) {
                c = c.add(b);
            }
            coeffs.push(c);
        }
        let floor = match (self.tail_floor, other.tail_floor) {
            (None, None) => None,
            (Some(f), None) | (None, Some(f)) => Some(f),
            (Some(f), Some(g)) => Some(f.max(g)),
        };
        Ok(Self::normalized(self.n, lo, coeffs, floor))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentOperator {
            n: self.n,
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
            tail_floor: self.tail_floor,
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::normalized(
            self.n,
            self.lo,
            self.coeffs.iter().map(|x| x.scale(c)).collect(),
            self.tail_floor,
        )
    }

    /// Operator product, collected by total power.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_period(other)?;
        let n = self.n;
        let lo = self.lo + other.lo;
        let hi = self.hi() + other.hi();
        let mut coeffs = vec![PeriodicSequence::zeros(n); (hi - lo + 1) as usize];
        for i in self.lo..=self.hi() {
            let a = self.coeff_ref(i).unwrap();
            if a.is_zero() {
                continue;
            }
            for j in other.lo..=other.hi() {
                let b = other.coeff_ref(j).unwrap();
                if b.is_zero() {
                    continue;
                }
                let term = a.mul(&b.shift(i));
                let idx = (i + j - lo) as usize;
                coeffs[idx] = coeffs[idx].add(&term);
            }
        }
        let floor = match (self.tail_floor, other.tail_floor) {
            (None, None) => None,
            (Some(f), None) => Some(f + other.hi()),
            (None, Some(g)) => Some(g + self.hi()),
            (Some(f), Some(g)) => Some((f + other.hi()).max(g + self.hi())),
        };
        Ok(Self::normalized(n, lo, coeffs, floor))
    }

    /// Trace: the sum over one period of the order-zero coefficient.
    pub fn trace(&self) -> S {
        self.coeff(0).sum()
    }

    /// `(D1, D2) = Tr(D1·D2)`, computed without materializing the product.
    pub fn inner_product(&self, other: &Self) -> Result<S> {
        self.check_period(other)?;
        let mut acc = S::zero();
        for i in self.lo..=self.hi() {
            let Some(a) = self.coeff_ref(i) else { continue };
            if a.is_zero() {
                continue;
            }
            let Some(b) = other.coeff_ref(-i) else {
                continue;
            };
            acc = acc + a.mul(&b.shift(i)).sum();
        }
        Ok(acc)
    }

    /// Split into (negative powers, order zero, positive powers).
    pub fn project_parts(&self) -> (Self, Self, Self) {
        let n = self.n;
        let mut minus = Vec::new();
        let mut plus = Vec::new();
        for i in self.lo..=self.hi() {
            let c = self.coeff(i);
            if i < 0 {
                minus.push(c);
            } else if i > 0 {
                plus.push(c);
            }
        }
        let part = |lo: i64, coeffs: Vec<PeriodicSequence<S>>, lowest: i64| {
            if coeffs.is_empty() {
                Self::zero(n)
            } else {
                let floor = self.tail_floor.filter(|&f| f > lowest);
                Self::normalized(n, lo, coeffs, floor)
            }
        };
        let d_minus = part(self.lo.min(-1), minus, i64::MIN + 1);
        let d_zero = Self::normalized(n, 0, vec![self.coeff(0)], None);
        let d_plus = part(1.max(self.lo), plus, 1);
        (d_minus, d_zero, d_plus)
    }

    /// The r-matrix `r = ½(p_+ - p_-)` applied to this operator.
    pub fn r_apply(&self) -> Self {
        let (minus, _zero, plus) = self.project_parts();
        let half = S::from_ratio(1, 2);
        plus.sub(&minus).unwrap().scale(&half)
    }

    /// Truncated inverse to the given depth.
    ///
    /// Factors `D = a^hi T^hi (1 + R)` with `R` of strictly negative degree
    /// and returns `(Σ_{k=0}^{depth} (-R)^k) T^{-hi} (a^hi)^{-1}`. The result
    /// satisfies `D·E = identity` on all powers ≥ `-depth`.
    pub fn invert(&self, depth: i64) -> Result<Self> {
        if depth < 0 {
            return Err(Error::NegativeDepth(depth));
        }
        if !self.is_exact() {
            return Err(Error::InfiniteSupport);
        }
        let hi = self.hi();
        let lead = self.coeff_ref(hi).unwrap();
        if lead.has_zero_entry() {
            return Err(Error::ZeroEntry {
                what: "leading coefficient",
                site: lead
                    .values()
                    .iter()
                    .position(|v| v.is_zero())
                    .unwrap_or(0),
            });
        }
        // (a^hi T^hi)^{-1} = (T^{-hi} (a^hi)^{-1}) ∘ T^{-hi}
        let lead_inv = Self::monomial(-hi, lead.recip("leading coefficient")?.shift(-hi));
        if self.lo == hi {
            // a single term inverts exactly
            return Ok(lead_inv);
        }
        let r = lead_inv.multiply(self)?.sub(&Self::identity(self.n))?;
        debug_assert!(r.hi() <= -1);
        let minus_r = r.neg();
        // Horner: Σ_{k=0}^{depth} (-R)^k
        let mut series = Self::identity(self.n);
        for _ in 0..depth {
            series = Self::identity(self.n).add(&minus_r.multiply(&series)?)?;
        }
        let inv = series.multiply(&lead_inv)?;
        let lo = inv.lo;
        Ok(Self::normalized(self.n, lo, inv.coeffs, Some(lo)))
    }

    /// Compare coefficients with `other` on all powers ≥ `floor`.
    pub fn agrees_on_or_above(&self, other: &Self, floor: i64) -> bool {
        if self.n != other.n {
            return false;
        }
        let lo = floor.max(self.lo.min(other.lo));
        let hi = self.hi().max(other.hi());
        (lo..=hi).all(|i| self.coeff(i) == other.coeff(i))
    }

    /// Maximum magnitude of any coefficient entry, for tolerance checks.
    pub fn max_magnitude(&self) -> f64 {
        self.coeffs
            .iter()
            .flat_map(|c| c.values().iter())
            .map(|v| v.magnitude())
            .fold(0.0, f64::max)
    }

    fn check_period(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::PeriodMismatch(self.n, other.n));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;

    fn seq(values: &[i64]) -> PeriodicSequence<Rat> {
        PeriodicSequence::new(values.iter().map(|&v| Rat::from_i64(v)).collect())
    }

    fn seq_q(values: &[(i64, i64)]) -> PeriodicSequence<Rat> {
        PeriodicSequence::new(values.iter().map(|&(p, q)| Rat::from_ratio(p, q)).collect())
    }

    #[test]
    fn shift_commutation_rule() {
        // T ∘ b = (Tb) ∘ T with b = (2,3), N = 2
        let t = LaurentOperator::shift_power(2, 1);
        let b = LaurentOperator::order_zero(seq(&[2, 3]));
        let prod = t.multiply(&b).unwrap();
        assert_eq!(prod, LaurentOperator::monomial(1, seq(&[3, 2])));
    }

    #[test]
    fn identity_is_unit() {
        let d = LaurentOperator::from_window(3, -1, vec![seq(&[1, 4, 2]), seq(&[0, 5, 1]), seq(&[7, 8, 9])]);
        let id = LaurentOperator::identity(3);
        assert_eq!(id.multiply(&d).unwrap(), d);
        assert_eq!(d.multiply(&id).unwrap(), d);
    }

    #[test]
    fn product_of_first_order_terms() {
        // (1,2,3)T ∘ (4,5,6)T = (1,2,3)⊙(5,6,4) T² = (5,12,12) T²
        let d1 = LaurentOperator::monomial(1, seq(&[1, 2, 3]));
        let d2 = LaurentOperator::monomial(1, seq(&[4, 5, 6]));
        let prod = d1.multiply(&d2).unwrap();
        assert_eq!(prod, LaurentOperator::monomial(2, seq(&[5, 12, 12])));
    }

    #[test]
    fn period_mismatch_rejected() {
        let d1 = LaurentOperator::<Rat>::identity(2);
        let d2 = LaurentOperator::identity(3);
        assert!(matches!(d1.multiply(&d2), Err(Error::PeriodMismatch(2, 3))));
    }

    #[test]
    fn trace_examples() {
        let a = seq(&[1, 2, 3]);
        let d = LaurentOperator::order_zero(a.clone())
            .add(&LaurentOperator::monomial(1, seq(&[4, 5, 6])))
            .unwrap();
        assert_eq!(d.trace(), Rat::from_i64(6));
        let bt = LaurentOperator::monomial(1, seq(&[4, 5, 6]));
        assert_eq!(bt.trace(), Rat::from_i64(0));
        // T ∘ a ∘ T^{-1} has trace Σ a as well (cyclicity)
        let t = LaurentOperator::shift_power(3, 1);
        let tinv = LaurentOperator::shift_power(3, -1);
        let conj = t
            .multiply(&LaurentOperator::order_zero(a))
            .unwrap()
            .multiply(&tinv)
            .unwrap();
        assert_eq!(conj.trace(), Rat::from_i64(6));
    }

    #[test]
    fn inner_product_examples() {
        let t = LaurentOperator::shift_power(3, 1);
        let a_tinv = LaurentOperator::monomial(-1, seq(&[1, 2, 3]));
        assert_eq!(t.inner_product(&a_tinv).unwrap(), Rat::from_i64(6));
        assert_eq!(t.inner_product(&t).unwrap(), Rat::from_i64(0));
        // matches the materialized product's trace
        assert_eq!(
            t.inner_product(&a_tinv).unwrap(),
            t.multiply(&a_tinv).unwrap().trace()
        );
    }

    #[test]
    fn project_parts_and_reassembly() {
        let d = LaurentOperator::from_window(
            3,
            -1,
            vec![seq(&[1, 1, 2]), seq(&[3, 0, 4]), seq(&[5, 6, 7])],
        );
        let (minus, zero, plus) = d.project_parts();
        assert_eq!(minus, LaurentOperator::monomial(-1, seq(&[1, 1, 2])));
        assert_eq!(zero, LaurentOperator::order_zero(seq(&[3, 0, 4])));
        assert_eq!(plus, LaurentOperator::monomial(1, seq(&[5, 6, 7])));
        let back = minus.add(&zero).unwrap().add(&plus).unwrap();
        assert_eq!(back, d);

        let d0 = LaurentOperator::order_zero(seq(&[1, 2, 3]));
        let (m0, z0, p0) = d0.project_parts();
        assert!(m0.is_zero());
        assert_eq!(z0, d0);
        assert!(p0.is_zero());
    }

    #[test]
    fn r_apply_examples() {
        let u = seq(&[1, 2, 3]);
        let v = seq(&[4, 5, 6]);
        let w = seq(&[7, 8, 9]);
        let d = LaurentOperator::monomial(-1, u.clone())
            .add(&LaurentOperator::order_zero(v))
            .unwrap()
            .add(&LaurentOperator::monomial(1, w.clone()))
            .unwrap();
        let r = d.r_apply();
        let half = Rat::from_ratio(1, 2);
        let expected = LaurentOperator::monomial(1, w)
            .sub(&LaurentOperator::monomial(-1, u))
            .unwrap()
            .scale(&half);
        assert_eq!(r, expected);

        let d0 = LaurentOperator::order_zero(seq(&[1, 2, 3]));
        assert!(d0.r_apply().is_zero());

        // r(r(D)) = ¼ (D_+ + D_-)
        let rr = d.r_apply().r_apply();
        let (minus, _z, plus) = d.project_parts();
        let expected = plus.add(&minus).unwrap().scale(&Rat::from_ratio(1, 4));
        assert_eq!(rr, expected);
    }

    #[test]
    fn invert_geometric_series() {
        // D = 1 - a T^{-1}, depth 2 → 1 + a T^{-1} + a (T^{-1}a) T^{-2}
        let a = seq_q(&[(1, 2), (3, 1), (5, 2)]);
        let d = LaurentOperator::identity(3)
            .sub(&LaurentOperator::monomial(-1, a.clone()))
            .unwrap();
        let e = d.invert(2).unwrap();
        let expected = LaurentOperator::identity(3)
            .add(&LaurentOperator::monomial(-1, a.clone()))
            .unwrap()
            .add(&LaurentOperator::monomial(-2, a.mul(&a.shift(-1))))
            .unwrap();
        assert!(e.agrees_on_or_above(&expected, -2));
        assert_eq!(e.tail_floor(), Some(-2));
    }

    #[test]
    fn invert_order_zero_is_exact() {
        let a = seq_q(&[(2, 1), (3, 2), (7, 5)]);
        let d = LaurentOperator::order_zero(a.clone());
        let e = d.invert(0).unwrap();
        assert_eq!(e, LaurentOperator::order_zero(a.recip("a").unwrap()));
        assert!(e.is_exact());
        assert_eq!(d.multiply(&e).unwrap(), LaurentOperator::identity(3));
    }

    #[test]
    fn invert_multiplies_back_to_identity() {
        // random-ish properly bounded operator of support [-1, 2]
        let d = LaurentOperator::from_window(
            3,
            -1,
            vec![
                seq_q(&[(1, 1), (2, 1), (1, 2)]),
                seq_q(&[(0, 1), (3, 1), (1, 1)]),
                seq_q(&[(5, 1), (1, 3), (2, 1)]),
                seq_q(&[(1, 1), (1, 1), (4, 1)]),
            ],
        );
        for depth in 0..4 {
            let e = d.invert(depth).unwrap();
            let prod = d.multiply(&e).unwrap();
            assert!(
                prod.agrees_on_or_above(&LaurentOperator::identity(3), -depth),
                "depth {depth}: got {prod:?}"
            );
        }
    }

    #[test]
    fn invert_rejects_zero_leading_entry() {
        let d = LaurentOperator::monomial(1, seq(&[1, 0, 2]));
        assert!(matches!(d.invert(1), Err(Error::ZeroEntry { .. })));
        assert!(matches!(
            LaurentOperator::<Rat>::identity(2).invert(-1),
            Err(Error::NegativeDepth(-1))
        ));
    }

    #[test]
    fn zero_normalizes() {
        let z = LaurentOperator::<Rat>::from_window(2, 5, vec![PeriodicSequence::zeros(2)]);
        assert_eq!(z, LaurentOperator::zero(2));
        assert!(z.is_zero());
    }
}
