//! Scalar field abstraction.
//!
//! Every algebraic operation in this crate is generic over a [`Scalar`]:
//! exact rationals ([`Rat`]) for verification and `f64` for flows and
//! finite-difference work. Identities that hold over the rationals are
//! asserted with zero tolerance in exact mode.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};
use num::BigRational;
use serde_json::Value;

use crate::error::Error;

/// Exact rational scalar, arbitrary precision.
pub type Rat = BigRational;

/// A commutative field the library can compute over.
///
/// `Zero`/`One` bring in `Add`/`Mul`; the rest of the field operations are
/// explicit supertraits. Values are cheap enough to clone at desk scale.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// True when arithmetic is exact and comparisons can demand deviation 0.
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;

    /// The fraction `num/den`; `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Approximate magnitude, used for pivoting and tolerance checks.
    fn magnitude(&self) -> f64;

    /// Exact (or floating) n-th root, when one exists in the field.
    ///
    /// Even roots of negative values return `None`; in exact mode the value
    /// must be a perfect n-th power.
    fn nth_root(&self, n: u32) -> Option<Self>;

    fn mode_name() -> &'static str;

    fn to_json(&self) -> Value;

    fn from_json(v: &Value) -> Result<Self, Error>;
}

impl Scalar for Rat {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        Rat::from_integer(BigInt::from(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rat::new(BigInt::from(num), BigInt::from(den))
    }

    fn magnitude(&self) -> f64 {
        rat_to_f64(&self.abs())
    }

    fn nth_root(&self, n: u32) -> Option<Self> {
        assert!(n >= 1);
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.is_negative() && n % 2 == 0 {
            return None;
        }
        let (num, den) = (self.numer(), self.denom());
        let rn = num.nth_root(n);
        let rd = den.nth_root(n);
        if &rn.pow(n) == num && &rd.pow(n) == den {
            Some(Rat::new(rn, rd))
        } else {
            None
        }
    }

    fn mode_name() -> &'static str {
        "rational"
    }

    fn to_json(&self) -> Value {
        Value::String(format!("{}/{}", self.numer(), self.denom()))
    }

    fn from_json(v: &Value) -> Result<Self, Error> {
        match v {
            Value::String(s) => {
                let (num, den) = match s.split_once('/') {
                    Some((n, d)) => (n, d),
                    None => (s.as_str(), "1"),
                };
                let num: BigInt = num
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
                let den: BigInt = den
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
                if den.is_zero() {
                    return Err(Error::Parse(format!("zero denominator in {s:?}")));
                }
                Ok(Rat::new(num, den))
            }
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Self::from_i64(i))
                } else {
                    Err(Error::Parse(format!(
                        "rational mode expects \"p/q\" strings or integers, got {n}"
                    )))
                }
            }
            other => Err(Error::Parse(format!("expected scalar, got {other}"))),
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        num as f64 / den as f64
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn nth_root(&self, n: u32) -> Option<Self> {
        assert!(n >= 1);
        if *self < 0.0 {
            if n % 2 == 0 {
                return None;
            }
            return Some(-(-self).powf(1.0 / n as f64));
        }
        Some(self.powf(1.0 / n as f64))
    }

    fn mode_name() -> &'static str {
        "f64"
    }

    fn to_json(&self) -> Value {
        serde_json::json!(self)
    }

    fn from_json(v: &Value) -> Result<Self, Error> {
        match v {
            Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| Error::Parse(format!("bad float {n}"))),
            Value::String(s) => {
                // accept "p/q" in float mode too
                if let Some((p, q)) = s.split_once('/') {
                    let p: f64 = p
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad scalar {s:?}")))?;
                    let q: f64 = q
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad scalar {s:?}")))?;
                    Ok(p / q)
                } else {
                    s.trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad scalar {s:?}")))
                }
            }
            other => Err(Error::Parse(format!("expected scalar, got {other}"))),
        }
    }
}

fn rat_to_f64(r: &Rat) -> f64 {
    // good enough for pivot selection and diagnostics
    let num = r.numer();
    let den = r.denom();
    match (num.to_string().parse::<f64>(), den.to_string().parse::<f64>()) {
        (Ok(n), Ok(d)) if d != 0.0 && n.is_finite() && d.is_finite() => n / d,
        _ => {
            if r.is_zero() {
                0.0
            } else {
                f64::INFINITY
            }
        }
    }
}

/// First-order jet `value + derivative·ε` with `ε² = 0`.
///
/// Running any generic computation over `Dual<S>` yields exact directional
/// derivatives in rational mode; division requires the value part of the
/// divisor to be nonzero.
#[derive(Clone, PartialEq)]
pub struct Dual<S: Scalar> {
    pub val: S,
    pub der: S,
}

impl<S: Scalar> Dual<S> {
    pub fn constant(val: S) -> Self {
        Dual {
            val,
            der: S::zero(),
        }
    }

    /// The variable being differentiated: `val + 1·ε`.
    pub fn variable(val: S) -> Self {
        Dual {
            val,
            der: S::one(),
        }
    }
}

impl<S: Scalar> fmt::Debug for Dual<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}+{:?}ε", self.val, self.der)
    }
}

impl<S: Scalar> fmt::Display for Dual<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}ε", self.val, self.der)
    }
}

impl<S: Scalar> Add for Dual<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Dual {
            val: self.val + rhs.val,
            der: self.der + rhs.der,
        }
    }
}

impl<S: Scalar> Sub for Dual<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Dual {
            val: self.val - rhs.val,
            der: self.der - rhs.der,
        }
    }
}

impl<S: Scalar> Mul for Dual<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Dual {
            val: self.val.clone() * rhs.val.clone(),
            der: self.der * rhs.val + self.val * rhs.der,
        }
    }
}

impl<S: Scalar> Div for Dual<S> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.val.is_zero(), "division by pure-ε dual");
        let val = self.val / rhs.val.clone();
        // (a/b)' = (a' - (a/b) b') / b
        let der = (self.der - val.clone() * rhs.der) / rhs.val;
        Dual { val, der }
    }
}

impl<S: Scalar> Neg for Dual<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual {
            val: -self.val,
            der: -self.der,
        }
    }
}

impl<S: Scalar> Zero for Dual<S> {
    fn zero() -> Self {
        Dual::constant(S::zero())
    }
    fn is_zero(&self) -> bool {
        self.val.is_zero() && self.der.is_zero()
    }
}

impl<S: Scalar> One for Dual<S> {
    fn one() -> Self {
        Dual::constant(S::one())
    }
}

impl<S: Scalar> Scalar for Dual<S> {
    const EXACT: bool = S::EXACT;

    fn from_i64(n: i64) -> Self {
        Dual::constant(S::from_i64(n))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Dual::constant(S::from_ratio(num, den))
    }

    fn magnitude(&self) -> f64 {
        self.val.magnitude()
    }

    fn nth_root(&self, n: u32) -> Option<Self> {
        let root = self.val.nth_root(n)?;
        if root.is_zero() {
            return if self.der.is_zero() {
                Some(Dual::constant(root))
            } else {
                None
            };
        }
        // d(a^{1/n}) = a' · a^{1/n} / (n·a)
        let der = self.der.clone() * root.clone() / (S::from_i64(n as i64) * self.val.clone());
        Some(Dual { val: root, der })
    }

    fn mode_name() -> &'static str {
        "dual"
    }

    fn to_json(&self) -> Value {
        serde_json::json!({ "val": self.val.to_json(), "der": self.der.to_json() })
    }

    fn from_json(_v: &Value) -> Result<Self, Error> {
        Err(Error::Parse("dual scalars are not serializable".into()))
    }
}

/// `|a - b|` as an `f64`, for tolerance checks that work in both modes.
pub fn deviation<S: Scalar>(a: &S, b: &S) -> f64 {
    (a.clone() - b.clone()).magnitude()
}
