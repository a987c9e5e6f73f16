//! Coefficient fields for the Fock engine.
//!
//! Operator identities are checked over a [`Field`]. [`ExactField`] works
//! with symbolic [`Scalar`] values and is the arbiter of every check.
//! [`PointField`] substitutes `r = u^4`, `s = v^4` for rational `u, v` and
//! computes with plain rationals, which is much faster and serves as the
//! sampled mode.

use std::fmt;

use super::{Rat, Scalar, ScalarError};

/// Arithmetic needed by the Fock engine, abstracted over the coefficient type.
pub trait Field: Clone + Send + Sync + fmt::Debug + 'static {
    /// Element type.
    type E: Clone + Send + Sync + fmt::Debug + PartialEq;

    /// Additive identity.
    fn zero(&self) -> Self::E;
    /// Multiplicative identity.
    fn one(&self) -> Self::E;
    /// Zero test.
    fn is_zero(&self, a: &Self::E) -> bool;
    /// Sum.
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// Difference.
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// Product.
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// Negation.
    fn neg(&self, a: &Self::E) -> Self::E;
    /// Reciprocal of a nonzero element.
    fn inv(&self, a: &Self::E) -> Result<Self::E, ScalarError>;
    /// Image of a symbolic scalar.
    fn from_scalar(&self, s: &Scalar) -> Result<Self::E, ScalarError>;
    /// `c · r^{a/4} s^{b/4}`.
    fn mono(&self, c: &Rat, a: i32, b: i32) -> Self::E;
    /// Canonical text form of an element.
    fn render(&self, a: &Self::E) -> String;
    /// `"exact"` or `"sampled"`.
    fn mode_name(&self) -> &'static str;

    /// Integer constant.
    fn int(&self, n: i64) -> Self::E {
        self.mono(&Rat::int(n), 0, 0)
    }

    /// In-place accumulation `acc += b`.
    fn add_assign(&self, acc: &mut Self::E, b: &Self::E) {
        *acc = self.add(acc, b);
    }
}

/// Exact symbolic coefficients.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExactField;

impl Field for ExactField {
    type E = Scalar;

    fn zero(&self) -> Scalar {
        Scalar::zero()
    }
    fn one(&self) -> Scalar {
        Scalar::one()
    }
    fn is_zero(&self, a: &Scalar) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a.add(b)
    }
    fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a.sub(b)
    }
    fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a.mul(b)
    }
    fn neg(&self, a: &Scalar) -> Scalar {
        a.neg()
    }
    fn inv(&self, a: &Scalar) -> Result<Scalar, ScalarError> {
        a.inv()
    }
    fn from_scalar(&self, s: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(s.clone())
    }
    fn mono(&self, c: &Rat, a: i32, b: i32) -> Scalar {
        Scalar::mono(c.clone(), a, b)
    }
    fn render(&self, a: &Scalar) -> String {
        a.render()
    }
    fn mode_name(&self) -> &'static str {
        "exact"
    }
}

/// Evaluation at the point `r = u^4`, `s = v^4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointField {
    u: Rat,
    v: Rat,
}

impl PointField {
    /// The point with `r^{1/4} = u` and `s^{1/4} = v`.
    ///
    /// Rejects points where `u` or `v` vanishes, and points with
    /// `r = s` or `r = -s`, where the algebra degenerates.
    pub fn new(u: Rat, v: Rat) -> Result<Self, ScalarError> {
        if u.is_zero() || v.is_zero() {
            return Err(ScalarError::DegenerateParameters);
        }
        let r = u.pow(4);
        let s = v.pow(4);
        if r == s || r == s.neg() {
            return Err(ScalarError::DegenerateParameters);
        }
        Ok(PointField { u, v })
    }

    /// The fourth root of `r`.
    pub fn u(&self) -> &Rat {
        &self.u
    }

    /// The fourth root of `s`.
    pub fn v(&self) -> &Rat {
        &self.v
    }
}

impl Field for PointField {
    type E = Rat;

    fn zero(&self) -> Rat {
        Rat::ZERO
    }
    fn one(&self) -> Rat {
        Rat::ONE
    }
    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a.add(b)
    }
    fn sub(&self, a: &Rat, b: &Rat) -> Rat {
        a.sub(b)
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a.mul(b)
    }
    fn neg(&self, a: &Rat) -> Rat {
        a.neg()
    }
    fn inv(&self, a: &Rat) -> Result<Rat, ScalarError> {
        if a.is_zero() {
            Err(ScalarError::DivisionByZero)
        } else {
            Ok(a.recip())
        }
    }
    fn from_scalar(&self, s: &Scalar) -> Result<Rat, ScalarError> {
        s.eval_quarter(&self.u, &self.v)
    }
    fn mono(&self, c: &Rat, a: i32, b: i32) -> Rat {
        c.mul(&self.u.pow(a)).mul(&self.v.pow(b))
    }
    fn render(&self, a: &Rat) -> String {
        a.to_string()
    }
    fn mode_name(&self) -> &'static str {
        "sampled"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_field_agrees_with_eval() {
        let f = PointField::new(Rat::int(2), Rat::new(1, 3)).unwrap();
        let x: Scalar = "(r + s) * (r*s)^(-1/2)".parse().unwrap();
        let y: Scalar = "r^(1/4) - 2/5".parse().unwrap();
        let fx = f.from_scalar(&x).unwrap();
        let fy = f.from_scalar(&y).unwrap();
        assert_eq!(f.mul(&fx, &fy), f.from_scalar(&x.mul(&y)).unwrap());
        assert_eq!(f.mono(&Rat::int(3), 1, -2), Rat::int(54));
    }

    #[test]
    fn degenerate_points_are_rejected() {
        assert!(PointField::new(Rat::int(2), Rat::int(-2)).is_err());
        assert!(PointField::new(Rat::ZERO, Rat::int(1)).is_err());
    }
}
