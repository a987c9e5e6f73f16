//! Rational numbers with a machine-word fast path.
//!
//! Coefficients in the Fock computations are overwhelmingly small
//! (binomials, `1/n`, `1/k!`), so every value is kept as an `i64`
//! fraction until an operation overflows, at which point it is promoted
//! to an arbitrary-precision [`BigRational`]. Promoted values are demoted
//! again whenever they fit.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact rational number.
///
/// The `Small` variant is always in lowest terms with a positive
/// denominator; `Big` is used only when the value does not fit.
#[derive(Clone)]
pub enum Rat {
    /// Numerator and positive denominator, coprime.
    Small(i64, i64),
    /// Arbitrary-precision fallback.
    Big(Box<BigRational>),
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    if a == 0 {
        return b as i128;
    }
    if b == 0 {
        return a as i128;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            break;
        }
    }
    (a << shift) as i128
}

impl Rat {
    /// Zero.
    pub const ZERO: Rat = Rat::Small(0, 1);
    /// One.
    pub const ONE: Rat = Rat::Small(1, 1);

    /// The integer `n`.
    pub fn int(n: i64) -> Rat {
        Rat::Small(n, 1)
    }

    /// The fraction `n/d`, reduced. Panics if `d == 0`.
    pub fn new(n: i64, d: i64) -> Rat {
        assert!(d != 0, "zero denominator");
        Self::from_i128(n as i128, d as i128)
    }

    fn from_i128(n: i128, d: i128) -> Rat {
        let g = gcd_i128(n, d);
        let (mut n, mut d) = if g > 1 { (n / g, d / g) } else { (n, d) };
        if d < 0 {
            n = -n;
            d = -d;
        }
        if n == 0 {
            return Rat::ZERO;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rat::Small(n, d),
            _ => Rat::Big(Box::new(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))),
        }
    }

    /// Builds from a big rational, demoting when it fits.
    pub fn from_big(b: BigRational) -> Rat {
        if let (Some(n), Some(d)) = (b.numer().to_i64(), b.denom().to_i64()) {
            return Rat::Small(n, d);
        }
        Rat::Big(Box::new(b))
    }

    /// Converts to an arbitrary-precision rational.
    pub fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rat::Big(b) => (**b).clone(),
        }
    }

    /// True for zero.
    pub fn is_zero(&self) -> bool {
        matches!(self, Rat::Small(0, _))
    }

    /// True for one.
    pub fn is_one(&self) -> bool {
        matches!(self, Rat::Small(1, 1))
    }

    /// True for an integer value.
    pub fn is_integer(&self) -> bool {
        match self {
            Rat::Small(_, d) => *d == 1,
            Rat::Big(b) => b.is_integer(),
        }
    }

    /// Sign of the value: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match self {
            Rat::Small(n, _) => n.signum() as i32,
            Rat::Big(b) => {
                if b.is_negative() {
                    -1
                } else if b.is_zero() {
                    0
                } else {
                    1
                }
            }
        }
    }

    /// Numerator and denominator as big integers.
    pub fn parts(&self) -> (BigInt, BigInt) {
        match self {
            Rat::Small(n, d) => (BigInt::from(*n), BigInt::from(*d)),
            Rat::Big(b) => (b.numer().clone(), b.denom().clone()),
        }
    }

    /// Sum.
    pub fn add(&self, o: &Rat) -> Rat {
        if let (Rat::Small(a, b), Rat::Small(c, d)) = (self, o) {
            if *b == 1 && *d == 1 {
                if let Some(s) = a.checked_add(*c) {
                    return Rat::Small(s, 1);
                }
            }
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if b == d {
                return Self::from_i128(a + c, b);
            }
            if let (Some(x), Some(y), Some(z)) = (a.checked_mul(d), c.checked_mul(b), b.checked_mul(d)) {
                if let Some(n) = x.checked_add(y) {
                    return Self::from_i128(n, z);
                }
            }
        }
        Self::from_big(self.to_big() + o.to_big())
    }

    /// Difference.
    pub fn sub(&self, o: &Rat) -> Rat {
        self.add(&o.neg())
    }

    /// Product.
    pub fn mul(&self, o: &Rat) -> Rat {
        if let (Rat::Small(a, b), Rat::Small(c, d)) = (self, o) {
            if *b == 1 && *d == 1 {
                if let Some(p) = a.checked_mul(*c) {
                    return Rat::Small(p, 1);
                }
            }
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            // Cross-cancel first so the products stay small.
            let g1 = gcd_i128(a, d);
            let g2 = gcd_i128(c, b);
            let (a, d) = if g1 > 1 { (a / g1, d / g1) } else { (a, d) };
            let (c, b) = if g2 > 1 { (c / g2, b / g2) } else { (c, b) };
            if let (Some(n), Some(m)) = (a.checked_mul(c), b.checked_mul(d)) {
                if let (Ok(n), Ok(m)) = (i64::try_from(n), i64::try_from(m)) {
                    return if n == 0 { Rat::ZERO } else { Rat::Small(n, m) };
                }
                return Self::from_i128(n, m);
            }
        }
        Self::from_big(self.to_big() * o.to_big())
    }

    /// Quotient. Panics on division by zero.
    pub fn div(&self, o: &Rat) -> Rat {
        self.mul(&o.recip())
    }

    /// Negation.
    pub fn neg(&self) -> Rat {
        match self {
            Rat::Small(n, d) if *n != i64::MIN => Rat::Small(-n, *d),
            _ => Self::from_big(-self.to_big()),
        }
    }

    /// Reciprocal. Panics on zero.
    pub fn recip(&self) -> Rat {
        match self {
            Rat::Small(0, _) => panic!("reciprocal of zero"),
            Rat::Small(n, d) if *n != i64::MIN => {
                if *n < 0 {
                    Rat::Small(-d, -n)
                } else {
                    Rat::Small(*d, *n)
                }
            }
            _ => Self::from_big(self.to_big().recip()),
        }
    }

    /// Integer power (negative exponents allowed for nonzero values).
    pub fn pow(&self, e: i32) -> Rat {
        let mut base = if e < 0 { self.recip() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Rat::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact `k`-th root if it exists in the rationals.
    pub fn exact_root(&self, k: u32) -> Option<Rat> {
        if k == 1 {
            return Some(self.clone());
        }
        let (n, d) = self.parts();
        if n.is_negative() && k % 2 == 0 {
            return None;
        }
        let rn = int_root(&n, k)?;
        let rd = int_root(&d, k)?;
        Some(Self::from_big(BigRational::new(rn, rd)))
    }
}

fn int_root(x: &BigInt, k: u32) -> Option<BigInt> {
    let neg = x.is_negative();
    let r = x.abs().nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == x.abs() {
        Some(if neg { -r } else { r })
    } else {
        None
    }
}

impl PartialEq for Rat {
    fn eq(&self, o: &Rat) -> bool {
        match (self, o) {
            (Rat::Small(a, b), Rat::Small(c, d)) => a == c && b == d,
            _ => self.to_big() == o.to_big(),
        }
    }
}

impl Eq for Rat {}

impl PartialOrd for Rat {
    fn partial_cmp(&self, o: &Rat) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Rat {
    fn cmp(&self, o: &Rat) -> Ordering {
        match (self, o) {
            (Rat::Small(a, b), Rat::Small(c, d)) => ((*a as i128) * (*d as i128)).cmp(&((*c as i128) * (*b as i128))),
            _ => self.to_big().cmp(&o.to_big()),
        }
    }
}

impl std::hash::Hash for Rat {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        let (n, d) = self.parts();
        n.hash(h);
        d.hash(h);
    }
}

impl Default for Rat {
    fn default() -> Self {
        Rat::ZERO
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::int(n)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::Small(n, 1) => write!(f, "{n}"),
            Rat::Small(n, d) => write!(f, "{n}/{d}"),
            Rat::Big(b) => {
                if b.denom().is_one() {
                    write!(f, "{}", b.numer())
                } else {
                    write!(f, "{}/{}", b.numer(), b.denom())
                }
            }
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Failure to parse a rational literal.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{0}`")]
pub struct ParseRatError(pub String);

impl FromStr for Rat {
    type Err = ParseRatError;

    fn from_str(s: &str) -> Result<Rat, ParseRatError> {
        let t = s.trim();
        let err = || ParseRatError(s.to_string());
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| err())?;
        let d: BigInt = d.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(Rat::from_big(BigRational::new(n, d)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reduces_and_normalizes_sign() {
        assert_eq!(Rat::new(6, -4), Rat::Small(-3, 2));
        assert_eq!(Rat::new(0, -7), Rat::ZERO);
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Rat::int(i64::MAX).add(&Rat::int(i64::MAX));
        assert!(matches!(big, Rat::Big(_)));
        let back = big.sub(&Rat::int(i64::MAX));
        assert_eq!(back, Rat::int(i64::MAX));
        assert!(matches!(back, Rat::Small(..)));
    }

    #[test]
    fn exact_roots() {
        assert_eq!(Rat::new(9, 4).exact_root(2), Some(Rat::new(3, 2)));
        assert_eq!(Rat::int(16).exact_root(4), Some(Rat::int(2)));
        assert_eq!(Rat::int(2).exact_root(2), None);
        assert_eq!(Rat::int(-8).exact_root(2), None);
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "-3", "5/7", "-12/5", "123456789012345678901234567891/7"] {
            let r: Rat = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
    }

    fn small() -> impl Strategy<Value = Rat> {
        (-1000i64..1000, 1i64..50).prop_map(|(n, d)| Rat::new(n, d))
    }

    proptest! {
        #[test]
        fn matches_big_rational(a in small(), b in small()) {
            prop_assert_eq!(a.add(&b).to_big(), a.to_big() + b.to_big());
            prop_assert_eq!(a.mul(&b).to_big(), a.to_big() * b.to_big());
            if !b.is_zero() {
                prop_assert_eq!(a.div(&b).to_big(), a.to_big() / b.to_big());
            }
        }

        #[test]
        fn huge_values_stay_exact(a in any::<i64>(), b in any::<i64>(), c in 1i64..i64::MAX) {
            let x = Rat::new(a, c).mul(&Rat::int(b));
            let expect = BigRational::new(BigInt::from(a) * BigInt::from(b), BigInt::from(c));
            prop_assert_eq!(x.to_big(), expect);
        }
    }
}
