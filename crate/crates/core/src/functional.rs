//! Polynomial functionals of indexed coordinates.
//!
//! A [`CoordPoly`] is a polynomial in coordinates addressed by a
//! `(level, site)` key — operator coefficients `a^j_t`, polygon invariants
//! `a^r_s`, or chart values `x_i` — with rational coefficients kept
//! mode-independent so the same functional evaluates exactly over rationals
//! and approximately over floats. Differentiation is the power rule, so
//! gradients are exact.

use rand::Rng;

use crate::scalar::Scalar;

pub type CoordKey = (usize, usize);

#[derive(Clone, Debug, PartialEq)]
pub struct PolyTerm {
    pub num: i64,
    pub den: i64,
    /// Sorted, key-distinct factors `(key, exponent)` with exponent ≥ 1.
    pub factors: Vec<(CoordKey, u32)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoordPoly {
    terms: Vec<PolyTerm>,
}

impl CoordPoly {
    pub fn zero() -> Self {
        CoordPoly { terms: vec![] }
    }

    pub fn constant(num: i64, den: i64) -> Self {
        assert!(den != 0);
        if num == 0 {
            return Self::zero();
        }
        CoordPoly {
            terms: vec![PolyTerm {
                num,
                den,
                factors: vec![],
            }],
        }
    }

    pub fn coordinate(key: CoordKey) -> Self {
        CoordPoly {
            terms: vec![PolyTerm {
                num: 1,
                den: 1,
                factors: vec![(key, 1)],
            }],
        }
    }

    pub fn term(num: i64, den: i64, mut factors: Vec<(CoordKey, u32)>) -> Self {
        assert!(den != 0);
        if num == 0 {
            return Self::zero();
        }
        factors.sort();
        factors.retain(|&(_, e)| e > 0);
        CoordPoly {
            terms: vec![PolyTerm { num, den, factors }],
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        CoordPoly { terms }
    }

    pub fn is_zero_poly(&self) -> bool {
        self.terms.is_empty()
    }

    /// All coordinate keys appearing in the polynomial.
    pub fn keys(&self) -> Vec<CoordKey> {
        let mut keys: Vec<CoordKey> = self
            .terms
            .iter()
            .flat_map(|t| t.factors.iter().map(|&(k, _)| k))
            .collect();
        keys.sort();
        keys.dedup();
        keys
    }

    pub fn eval<S: Scalar>(&self, read: &mut impl FnMut(usize, usize) -> S) -> S {
        let mut acc = S::zero();
        for t in &self.terms {
            let mut v = S::from_ratio(t.num, t.den);
            for &((level, site), e) in &t.factors {
                let x = read(level, site);
                for _ in 0..e {
                    v = v * x.clone();
                }
            }
            acc = acc + v;
        }
        acc
    }

    /// Partial derivative with respect to one coordinate.
    pub fn derivative(&self, key: CoordKey) -> Self {
        let mut terms = Vec::new();
        for t in &self.terms {
            if let Some(pos) = t.factors.iter().position(|&(k, _)| k == key) {
                let (_, e) = t.factors[pos];
                let mut factors = t.factors.clone();
                if e == 1 {
                    factors.remove(pos);
                } else {
                    factors[pos].1 = e - 1;
                }
                terms.push(PolyTerm {
                    num: t.num * e as i64,
                    den: t.den,
                    factors,
                });
            }
        }
        CoordPoly { terms }
    }

    /// A random polynomial of total degree ≤ 2 in the given coordinates.
    pub fn random_deg2(rng: &mut impl Rng, keys: &[CoordKey]) -> Self {
        assert!(!keys.is_empty());
        let n_terms = rng.gen_range(1..=4);
        let mut poly = Self::zero();
        for _ in 0..n_terms {
            let num = loop {
                let v = rng.gen_range(-5i64..=5);
                if v != 0 {
                    break v;
                }
            };
            let den = rng.gen_range(1i64..=3);
            let degree = rng.gen_range(0..=2u32);
            let mut factors: Vec<(CoordKey, u32)> = Vec::new();
            for _ in 0..degree {
                let k = keys[rng.gen_range(0..keys.len())];
                if let Some(f) = factors.iter_mut().find(|f| f.0 == k) {
                    f.1 += 1;
                } else {
                    factors.push((k, 1));
                }
            }
            poly = poly.add(&Self::term(num, den, factors));
        }
        poly
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;

    #[test]
    fn eval_and_derivative() {
        // f = 3 x_{0,0}^2 x_{1,2} - 1/2 x_{1,2}
        let x = CoordPoly::coordinate((0, 0));
        let y = CoordPoly::coordinate((1, 2));
        let f = CoordPoly::term(3, 1, vec![((0, 0), 2), ((1, 2), 1)])
            .add(&CoordPoly::term(-1, 2, vec![((1, 2), 1)]));
        let _ = (x, y);
        let mut read = |level: usize, site: usize| -> Rat {
            match (level, site) {
                (0, 0) => Rat::from_i64(2),
                (1, 2) => Rat::from_i64(5),
                _ => unreachable!(),
            }
        };
        assert_eq!(f.eval(&mut read), Rat::from_ratio(115, 2)); // 3·4·5 - 5/2
        let df_dx = f.derivative((0, 0));
        assert_eq!(df_dx.eval(&mut read), Rat::from_i64(60)); // 6·2·5
        let df_dy = f.derivative((1, 2));
        assert_eq!(df_dy.eval(&mut read), Rat::from_ratio(23, 2)); // 3·4 - 1/2
        assert!(f.derivative((9, 9)).is_zero_poly());
    }

    #[test]
    fn keys_are_deduped() {
        let f = CoordPoly::term(1, 1, vec![((0, 1), 1), ((2, 0), 1)])
            .add(&CoordPoly::coordinate((0, 1)));
        assert_eq!(f.keys(), vec![(0, 1), (2, 0)]);
    }
}
