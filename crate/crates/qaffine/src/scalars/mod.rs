//! Exact scalars: rational functions in `r^{1/4}` and `s^{1/4}`.
//!
//! A [`Scalar`] is a quotient of two [`LaurentPoly`] values. Equality is
//! decided by cross-multiplication, so normalization only has to be
//! deterministic, not canonical. In practice almost every scalar met by the
//! Fock engine is a Laurent polynomial, and the normalizer finds that form
//! by exact division.

pub mod field;
mod parse;
mod poly;
mod rat;

pub use field::{ExactField, Field, PointField};
pub use parse::ParseScalarError;
pub use poly::{grlex, homogeneous_gcd, Key, LaurentPoly};
pub use rat::{ParseRatError, Rat};

use std::fmt;
use std::str::FromStr;

/// Errors raised by scalar arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    /// Division by the zero scalar.
    #[error("division by zero")]
    DivisionByZero,
    /// A q-number was requested with equal parameters.
    #[error("degenerate parameters: u = v")]
    DegenerateParameters,
    /// Binomial indices outside `0 <= n <= m`.
    #[error("index out of range: [{m} choose {n}]")]
    IndexOutOfRange {
        /// Upper index.
        m: i64,
        /// Lower index.
        n: i64,
    },
    /// The denominator vanishes at the evaluation point.
    #[error("pole at the evaluation point")]
    PoleAtPoint,
    /// A fractional power of the point is irrational.
    #[error("fractional power of {0} is not rational")]
    NonRationalPoint(String),
}

/// An exponent with denominator dividing 4, stored as a count of quarters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Exponent(pub i32);

impl Exponent {
    /// `q/4`.
    pub fn quarters(q: i32) -> Self {
        Exponent(q)
    }
    /// `h/2`.
    pub fn halves(h: i32) -> Self {
        Exponent(2 * h)
    }
    /// An integer exponent.
    pub fn int(n: i32) -> Self {
        Exponent(4 * n)
    }
    /// Numerator and denominator in lowest terms.
    pub fn ratio(self) -> (i32, i32) {
        let g = num_integer::gcd(self.0, 4).max(1);
        (self.0 / g, 4 / g)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ratio() {
            (n, 1) => write!(f, "{n}"),
            (n, d) => write!(f, "{n}/{d}"),
        }
    }
}

/// An exact element of `Q(r^{1/4}, s^{1/4})`.
#[derive(Clone)]
pub struct Scalar {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Scalar {
    /// Zero.
    pub fn zero() -> Self {
        Scalar { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    /// One.
    pub fn one() -> Self {
        Scalar { num: LaurentPoly::one(), den: LaurentPoly::one() }
    }

    /// A rational constant.
    pub fn rat(c: Rat) -> Self {
        Scalar::from_poly(LaurentPoly::constant(c))
    }

    /// An integer constant.
    pub fn int(n: i64) -> Self {
        Self::rat(Rat::int(n))
    }

    /// `c · r^{a/4} s^{b/4}` given quarter exponents.
    pub fn mono(c: Rat, a: i32, b: i32) -> Self {
        Scalar::from_poly(LaurentPoly::monomial(c, a, b))
    }

    /// `r^e s^f`.
    pub fn rs_pow(e: Exponent, f: Exponent) -> Self {
        Self::mono(Rat::ONE, e.0, f.0)
    }

    /// The parameter `r`.
    pub fn r() -> Self {
        Self::mono(Rat::ONE, 4, 0)
    }

    /// The parameter `s`.
    pub fn s() -> Self {
        Self::mono(Rat::ONE, 0, 4)
    }

    /// `r^{h/2}`.
    pub fn r_half(h: i32) -> Self {
        Self::mono(Rat::ONE, 2 * h, 0)
    }

    /// `s^{h/2}`.
    pub fn s_half(h: i32) -> Self {
        Self::mono(Rat::ONE, 0, 2 * h)
    }

    /// `(rs)^{h/2}`.
    pub fn rs_half(h: i32) -> Self {
        Self::mono(Rat::ONE, 2 * h, 2 * h)
    }

    /// A Laurent polynomial viewed as a scalar.
    pub fn from_poly(p: LaurentPoly) -> Self {
        Scalar { num: p, den: LaurentPoly::one() }
    }

    /// Builds `num / den`, normalizing. Fails when `den` is zero.
    pub fn from_parts(num: LaurentPoly, den: LaurentPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(normalize(num, den))
    }

    /// Numerator.
    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    /// Denominator.
    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    /// The polynomial form, if the denominator is one.
    pub fn as_poly(&self) -> Option<&LaurentPoly> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    /// True for zero.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True for one.
    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    /// The monomial `(c, key)` if this scalar is a single term.
    pub fn as_monomial(&self) -> Option<(Rat, Key)> {
        if !self.den.is_one() {
            return None;
        }
        self.num.as_monomial().map(|(c, k)| (c.clone(), k))
    }

    /// Sum.
    pub fn add(&self, o: &Self) -> Self {
        if self.den.is_one() && o.den.is_one() {
            return Scalar::from_poly(self.num.add(&o.num));
        }
        if self.den == o.den {
            return normalize(self.num.add(&o.num), self.den.clone());
        }
        normalize(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    /// Difference.
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }

    /// Product.
    pub fn mul(&self, o: &Self) -> Self {
        if self.den.is_one() && o.den.is_one() {
            return Scalar::from_poly(self.num.mul(&o.num));
        }
        normalize(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    /// Quotient.
    pub fn div(&self, o: &Self) -> Result<Self, ScalarError> {
        if o.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(normalize(self.num.mul(&o.den), self.den.mul(&o.num)))
    }

    /// Reciprocal.
    pub fn inv(&self) -> Result<Self, ScalarError> {
        Scalar::one().div(self)
    }

    /// Integer power; negative powers need a nonzero base.
    pub fn pow(&self, e: i32) -> Result<Self, ScalarError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Scalar::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Multiplies by a rational constant.
    pub fn scale(&self, c: &Rat) -> Self {
        Scalar { num: self.num.scale(c), den: self.den.clone() }
    }

    /// The involution `r <-> s`.
    pub fn tau(&self) -> Self {
        normalize(self.num.tau(), self.den.tau())
    }

    /// Square root of a monomial with positive coefficient square, by halving exponents.
    pub fn monomial_sqrt(&self) -> Option<Self> {
        let (c, (a, b)) = self.as_monomial()?;
        if a % 2 != 0 || b % 2 != 0 {
            return None;
        }
        let root = c.exact_root(2)?;
        Some(Scalar::mono(root, a / 2, b / 2))
    }

    /// True when some exponent is an odd multiple of 1/4.
    pub fn has_quarter_power(&self) -> bool {
        self.num.terms().iter().chain(self.den.terms()).any(|((a, b), _)| a % 2 != 0 || b % 2 != 0)
    }

    /// Evaluates at `r = u^4`, `s = v^4` exactly.
    pub fn eval_quarter(&self, u: &Rat, v: &Rat) -> Result<Rat, ScalarError> {
        let d = self.den.eval_quarter(u, v);
        if d.is_zero() {
            return Err(ScalarError::PoleAtPoint);
        }
        Ok(self.num.eval_quarter(u, v).div(&d))
    }

    /// Evaluates at rational `r0, s0`, taking exact roots where fractional
    /// powers occur.
    pub fn eval_at_point(&self, r0: &Rat, s0: &Rat) -> Result<Rat, ScalarError> {
        let need = |sel: fn(&Key) -> i32| -> u32 {
            let keys = self.num.terms().iter().chain(self.den.terms()).map(|(k, _)| sel(k));
            keys.map(|q| match q.rem_euclid(4) {
                0 => 1,
                2 => 2,
                _ => 4,
            })
            .max()
            .unwrap_or(1)
        };
        let root = |x: &Rat, k: u32, name: &str| -> Result<Rat, ScalarError> {
            if k == 1 {
                return Ok(x.clone());
            }
            x.exact_root(k).ok_or_else(|| ScalarError::NonRationalPoint(name.to_string()))
        };
        let kr = need(|k| k.0);
        let ks = need(|k| k.1);
        let ur = root(r0, kr, "r")?;
        let us = root(s0, ks, "s")?;
        let ev = |p: &LaurentPoly| -> Rat {
            let mut acc = Rat::ZERO;
            for ((a, b), c) in p.terms() {
                let ra = ur.pow(a * kr as i32 / 4);
                let sb = us.pow(b * ks as i32 / 4);
                acc = acc.add(&c.mul(&ra).mul(&sb));
            }
            acc
        };
        let d = ev(&self.den);
        if d.is_zero() {
            return Err(ScalarError::PoleAtPoint);
        }
        Ok(ev(&self.num).div(&d))
    }

    /// Canonical text form, for example `1 * r^(1/2) * s^(-1) + -2`.
    pub fn render(&self) -> String {
        if self.den.is_one() {
            render_poly(&self.num)
        } else {
            format!("({}) / ({})", render_poly(&self.num), render_poly(&self.den))
        }
    }
}

fn normalize(num: LaurentPoly, den: LaurentPoly) -> Scalar {
    if num.is_zero() {
        return Scalar::zero();
    }
    if let Some((c, (a, b))) = den.as_monomial() {
        let inv = c.recip();
        return Scalar::from_poly(num.scale(&inv).shift(-a, -b));
    }
    if let Some(q) = num.div_exact(&den) {
        return Scalar::from_poly(q);
    }
    let (mut num, mut den) = (num, den);
    if let Some(g) = homogeneous_gcd(&num, &den) {
        if !g.is_one() {
            if let (Some(n), Some(d)) = (num.div_exact(&g), den.div_exact(&g)) {
                num = n;
                den = d;
            }
        }
    }
    if let Some((c, (a, b))) = den.as_monomial() {
        let inv = c.recip();
        return Scalar::from_poly(num.scale(&inv).shift(-a, -b));
    }
    let (ma, mb) = den.min_key().expect("nonzero denominator");
    let lc = den.shift(-ma, -mb).lead().expect("nonzero").1.recip();
    Scalar { num: num.shift(-ma, -mb).scale(&lc), den: den.shift(-ma, -mb).scale(&lc) }
}

pub(crate) fn render_poly(p: &LaurentPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::with_capacity(p.len());
    for ((a, b), c) in p.terms() {
        let mut t = c.to_string();
        if *a != 0 {
            t.push_str(&format!(" * r^({})", Exponent(*a)));
        }
        if *b != 0 {
            t.push_str(&format!(" * s^({})", Exponent(*b)));
        }
        parts.push(t);
    }
    parts.join(" + ")
}

impl PartialEq for Scalar {
    fn eq(&self, o: &Self) -> bool {
        if self.den == o.den {
            return self.num == o.num;
        }
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }
}

impl Eq for Scalar {}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl FromStr for Scalar {
    type Err = ParseScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse::parse_scalar(s)
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.render())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The `(u, v)`-integer `[n]_{u,v} = (u^n - v^n)/(u - v)`.
pub fn qnumber(n: i32, u: &Scalar, v: &Scalar) -> Result<Scalar, ScalarError> {
    if u == v {
        return Err(ScalarError::DegenerateParameters);
    }
    u.pow(n)?.sub(&v.pow(n)?).div(&u.sub(v))
}

/// `[n]_{r,s}` for the algebra parameters.
pub fn qnum_rs(n: i32) -> Scalar {
    qnumber(n, &Scalar::r(), &Scalar::s()).expect("r != s")
}

/// Gaussian binomial `[m choose n]_{u,v}` for `0 <= n <= m`.
pub fn qbinomial(m: i64, n: i64, u: &Scalar, v: &Scalar) -> Result<Scalar, ScalarError> {
    if n < 0 || n > m {
        return Err(ScalarError::IndexOutOfRange { m, n });
    }
    let fact = |k: i64| -> Result<Scalar, ScalarError> {
        let mut acc = Scalar::one();
        for j in 1..=k {
            acc = acc.mul(&qnumber(j as i32, u, v)?);
        }
        Ok(acc)
    };
    fact(m)?.div(&fact(n)?.mul(&fact(m - n)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r() -> Scalar {
        Scalar::r()
    }
    fn s() -> Scalar {
        Scalar::s()
    }

    #[test]
    fn additive_inverse() {
        assert!(r().sub(&s()).add(&s().sub(&r())).is_zero());
    }

    #[test]
    fn difference_of_squares_divides() {
        let q = r().mul(&r()).sub(&s().mul(&s())).div(&r().sub(&s())).unwrap();
        assert_eq!(q, r().add(&s()));
        assert!(q.den().is_one());
    }

    #[test]
    fn monomial_inverse() {
        let a = r().mul(&s().inv().unwrap());
        let b = r().inv().unwrap().mul(&s());
        assert!(a.mul(&b).is_one());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(r().div(&Scalar::zero()), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn tau_swaps_parameters() {
        assert_eq!(r().tau(), s());
        let a = r().div(&s()).unwrap();
        assert_eq!(a.tau(), s().div(&r()).unwrap());
        assert_eq!(Scalar::r_half(1).tau(), Scalar::s_half(1));
    }

    #[test]
    fn qnumbers() {
        assert_eq!(qnum_rs(2), r().add(&s()));
        assert_eq!(qnum_rs(1), Scalar::one());
        assert_eq!(qnum_rs(0), Scalar::zero());
        assert_eq!(qnum_rs(3), r().mul(&r()).add(&r().mul(&s())).add(&s().mul(&s())));
        assert_eq!(qnumber(2, &r(), &r()), Err(ScalarError::DegenerateParameters));
    }

    #[test]
    fn qbinomials() {
        assert_eq!(qbinomial(2, 1, &r(), &s()).unwrap(), r().add(&s()));
        assert_eq!(qbinomial(3, 3, &r(), &s()).unwrap(), Scalar::one());
        let f = |k: i32| qnum_rs(k);
        let expect = f(4).mul(&f(3)).div(&f(2)).unwrap();
        let got = qbinomial(4, 2, &r(), &s()).unwrap();
        assert_eq!(got, expect);
        assert!(got.den().is_one());
        assert!(matches!(qbinomial(2, 3, &r(), &s()), Err(ScalarError::IndexOutOfRange { .. })));
    }

    #[test]
    fn evaluation_examples() {
        let a = r().add(&s());
        assert_eq!(a.eval_at_point(&Rat::int(4), &Rat::int(1)).unwrap(), Rat::int(5));
        let h = Scalar::rs_half(1);
        assert_eq!(h.eval_at_point(&Rat::int(4), &Rat::int(9)).unwrap(), Rat::int(6));
        let p = Scalar::one().div(&r().sub(&s())).unwrap();
        assert_eq!(p.eval_at_point(&Rat::int(3), &Rat::int(3)), Err(ScalarError::PoleAtPoint));
        assert!(matches!(h.eval_at_point(&Rat::int(2), &Rat::int(1)), Err(ScalarError::NonRationalPoint(_))));
    }

    #[test]
    fn rendering_is_canonical() {
        let a = Scalar::rs_half(1).sub(&Scalar::int(2));
        assert_eq!(a.render(), "-2 + 1 * r^(1/2) * s^(1/2)");
        assert_eq!(Scalar::zero().render(), "0");
        let f = Scalar::one().div(&r().sub(&s())).unwrap();
        assert_eq!(f.render(), "(1) / (-1 * s^(1) + 1 * r^(1))");
    }

    #[test]
    fn quarter_powers_are_flagged() {
        assert!(Scalar::mono(Rat::ONE, 1, 0).has_quarter_power());
        assert!(!Scalar::rs_half(1).has_quarter_power());
    }

    pub(crate) fn arb_scalar() -> impl Strategy<Value = Scalar> {
        let term = (-3i64..4, -4i32..5, -4i32..5).prop_map(|(c, a, b)| Scalar::mono(Rat::int(c), 2 * a, 2 * b));
        let poly = proptest::collection::vec(term, 1..4)
            .prop_map(|ts| ts.into_iter().fold(Scalar::zero(), |acc, t| acc.add(&t)));
        (poly.clone(), poly).prop_map(|(n, d)| if d.is_zero() { n } else { n.div(&d).unwrap() })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn field_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            if !b.is_zero() {
                prop_assert_eq!(a.div(&b).unwrap().mul(&b), a.clone());
            }
        }

        #[test]
        fn tau_is_field_automorphism(a in arb_scalar(), b in arb_scalar()) {
            prop_assert_eq!(a.mul(&b).tau(), a.tau().mul(&b.tau()));
            prop_assert_eq!(a.add(&b).tau(), a.tau().add(&b.tau()));
            prop_assert_eq!(a.tau().tau(), a);
        }

        #[test]
        fn evaluation_is_ring_map(a in arb_scalar(), b in arb_scalar(), u in 2i64..6, v in 1i64..5) {
            prop_assume!(u != v);
            let (u, v) = (Rat::int(u), Rat::int(v));
            if let (Ok(x), Ok(y)) = (a.eval_quarter(&u, &v), b.eval_quarter(&u, &v)) {
                prop_assert_eq!(a.mul(&b).eval_quarter(&u, &v).unwrap(), x.mul(&y));
                prop_assert_eq!(a.add(&b).eval_quarter(&u, &v).unwrap(), x.add(&y));
            }
        }

        #[test]
        fn qnumber_is_tau_symmetric(n in 0i32..8) {
            prop_assert_eq!(qnum_rs(n).tau(), qnum_rs(n));
            prop_assert_eq!(qnumber(n, &s(), &r()).unwrap(), qnum_rs(n));
        }

        #[test]
        fn render_parse_round_trip(a in arb_scalar()) {
            let back: Scalar = a.render().parse().unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
