//! Laurent polynomials in `r^{1/4}` and `s^{1/4}` with rational coefficients.
//!
//! Exponents are stored in quarter units: the key `(a, b)` stands for the
//! monomial `r^{a/4} s^{b/4}`. Terms are kept sorted by key with no zero
//! coefficients, so structural equality is value equality.

use std::cmp::Ordering;

use super::rat::Rat;

/// Exponent pair in quarter units: `(4·exp_r, 4·exp_s)`.
pub type Key = (i32, i32);

/// A finite sum of `c · r^{a/4} s^{b/4}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: Vec<(Key, Rat)>,
}

/// Graded order used to pick leading terms: total degree first, then the
/// `r` exponent. Every term of `m·p` is below `m·lead(p)` in this order,
/// which makes long division terminate.
pub fn grlex(a: &Key, b: &Key) -> Ordering {
    (a.0 + a.1).cmp(&(b.0 + b.1)).then(a.0.cmp(&b.0))
}

impl LaurentPoly {
    /// The zero polynomial.
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    /// The constant one.
    pub fn one() -> Self {
        Self::constant(Rat::ONE)
    }

    /// A constant.
    pub fn constant(c: Rat) -> Self {
        Self::monomial(c, 0, 0)
    }

    /// `c · r^{a/4} s^{b/4}`.
    pub fn monomial(c: Rat, a: i32, b: i32) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            LaurentPoly { terms: vec![((a, b), c)] }
        }
    }

    /// Builds from arbitrary (possibly repeated, unsorted) terms.
    pub fn from_terms(mut terms: Vec<(Key, Rat)>) -> Self {
        terms.sort_unstable_by(|x, y| x.0.cmp(&y.0));
        let mut out: Vec<(Key, Rat)> = Vec::with_capacity(terms.len());
        for (k, c) in terms {
            match out.last_mut() {
                Some((lk, lc)) if *lk == k => *lc = lc.add(&c),
                _ => out.push((k, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        LaurentPoly { terms: out }
    }

    /// Sorted terms.
    pub fn terms(&self) -> &[(Key, Rat)] {
        &self.terms
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for the constant one.
    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == (0, 0) && self.terms[0].1.is_one()
    }

    /// The single term if this is a monomial.
    pub fn as_monomial(&self) -> Option<(&Rat, Key)> {
        if self.terms.len() == 1 {
            Some((&self.terms[0].1, self.terms[0].0))
        } else {
            None
        }
    }

    /// Sum.
    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.terms, &o.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = a[i].1.add(&b[j].1);
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        LaurentPoly { terms: out }
    }

    /// Negation.
    pub fn neg(&self) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect() }
    }

    /// Difference.
    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// Multiplication by a rational constant.
    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { terms: self.terms.iter().map(|(k, x)| (*k, x.mul(c))).collect() }
    }

    /// Multiplication by `r^{a/4} s^{b/4}`.
    pub fn shift(&self, a: i32, b: i32) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|((x, y), c)| ((x + a, y + b), c.clone())).collect() }
    }

    /// Product.
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if let Some((c, (a, b))) = o.as_monomial() {
            return self.scale(c).shift(a, b);
        }
        if let Some((c, (a, b))) = self.as_monomial() {
            return o.scale(c).shift(a, b);
        }
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for ((a, b), c) in &self.terms {
            for ((x, y), d) in &o.terms {
                terms.push(((a + x, b + y), c.mul(d)));
            }
        }
        Self::from_terms(terms)
    }

    /// Non-negative integer power.
    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Swaps the roles of `r` and `s`.
    pub fn tau(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|((a, b), c)| ((*b, *a), c.clone())).collect())
    }

    /// Leading term under [`grlex`].
    pub fn lead(&self) -> Option<&(Key, Rat)> {
        self.terms.iter().max_by(|x, y| grlex(&x.0, &y.0))
    }

    /// Componentwise minimum exponent (the largest monomial dividing every term).
    pub fn min_key(&self) -> Option<Key> {
        let mut it = self.terms.iter();
        let first = it.next()?.0;
        Some(it.fold(first, |(a, b), ((x, y), _)| (a.min(*x), b.min(*y))))
    }

    /// Total quarter-degree if all terms share it.
    pub fn homogeneous_degree(&self) -> Option<i32> {
        let mut it = self.terms.iter();
        let d = it.next().map(|((a, b), _)| a + b)?;
        if it.all(|((a, b), _)| a + b == d) {
            Some(d)
        } else {
            None
        }
    }

    /// Exact quotient `self / d` when `d` divides `self` in the Laurent ring.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some((c, (a, b))) = d.as_monomial() {
            return Some(self.scale(&c.recip()).shift(-a, -b));
        }
        // Move both into the polynomial ring, divide there, then shift back.
        let (na, nb) = self.min_key().unwrap();
        let (da, db) = d.min_key().unwrap();
        let num = self.shift(-na, -nb);
        let den = d.shift(-da, -db);
        let q = poly_div(&num, &den)?;
        Some(q.shift(na - da, nb - db))
    }

    /// Evaluates with `r^{1/4} = u`, `s^{1/4} = v`.
    pub fn eval_quarter(&self, u: &Rat, v: &Rat) -> Rat {
        let mut acc = Rat::ZERO;
        for ((a, b), c) in &self.terms {
            acc = acc.add(&c.mul(&u.pow(*a)).mul(&v.pow(*b)));
        }
        acc
    }
}

/// Polynomial long division in grlex order; `None` if not exact.
fn poly_div(num: &LaurentPoly, den: &LaurentPoly) -> Option<LaurentPoly> {
    let (lk, lc) = den.lead()?.clone();
    let lc_inv = lc.recip();
    let mut rem = num.clone();
    let mut quot: Vec<(Key, Rat)> = Vec::new();
    while let Some((rk, rc)) = rem.lead().cloned() {
        let qk = (rk.0 - lk.0, rk.1 - lk.1);
        if qk.0 < 0 || qk.1 < 0 {
            return None;
        }
        let qc = rc.mul(&lc_inv);
        rem = rem.sub(&den.scale(&qc).shift(qk.0, qk.1));
        quot.push((qk, qc));
    }
    Some(LaurentPoly::from_terms(quot))
}

/// Greatest common divisor of two homogeneous Laurent polynomials, as a
/// monic homogeneous polynomial, computed by dehomogenizing to one variable
/// and running Euclid's algorithm.
pub fn homogeneous_gcd(p: &LaurentPoly, q: &LaurentPoly) -> Option<LaurentPoly> {
    p.homogeneous_degree()?;
    q.homogeneous_degree()?;
    let to_uni = |x: &LaurentPoly| -> Vec<Rat> {
        let (ma, _) = x.min_key().unwrap();
        let top = x.terms().iter().map(|((a, _), _)| a - ma).max().unwrap() as usize;
        let mut v = vec![Rat::ZERO; top + 1];
        for ((a, _), c) in x.terms() {
            v[(a - ma) as usize] = c.clone();
        }
        v
    };
    let g = uni_gcd(to_uni(p), to_uni(q));
    if g.len() <= 1 {
        return Some(LaurentPoly::one());
    }
    let deg = (g.len() - 1) as i32;
    let terms =
        g.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| ((i as i32, deg - i as i32), c)).collect();
    Some(LaurentPoly::from_terms(terms))
}

fn uni_trim(v: &mut Vec<Rat>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn uni_gcd(mut a: Vec<Rat>, mut b: Vec<Rat>) -> Vec<Rat> {
    uni_trim(&mut a);
    uni_trim(&mut b);
    while !b.is_empty() {
        // a mod b
        let lb = b.last().unwrap().recip();
        while a.len() >= b.len() {
            let f = a.last().unwrap().mul(&lb);
            let off = a.len() - b.len();
            for (i, c) in b.iter().enumerate() {
                a[off + i] = a[off + i].sub(&f.mul(c));
            }
            a.pop();
            uni_trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(l) = a.last().cloned() {
        let li = l.recip();
        for c in a.iter_mut() {
            *c = c.mul(&li);
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r() -> LaurentPoly {
        LaurentPoly::monomial(Rat::ONE, 4, 0)
    }
    fn s() -> LaurentPoly {
        LaurentPoly::monomial(Rat::ONE, 0, 4)
    }

    #[test]
    fn exact_division_of_difference_of_squares() {
        let num = r().mul(&r()).sub(&s().mul(&s()));
        let den = r().sub(&s());
        assert_eq!(num.div_exact(&den), Some(r().add(&s())));
    }

    #[test]
    fn inexact_division_is_rejected() {
        let num = r().add(&LaurentPoly::one());
        assert_eq!(num.div_exact(&r().sub(&s())), None);
    }

    #[test]
    fn laurent_division_shifts_back() {
        let den = r().sub(&s()).shift(-4, -4);
        let num = r().mul(&r()).sub(&s().mul(&s())).shift(2, -8);
        let q = num.div_exact(&den).unwrap();
        assert_eq!(q.mul(&den), num);
    }

    #[test]
    fn gcd_of_homogeneous_polys() {
        let a = r().pow(3).sub(&s().pow(3));
        let b = r().mul(&r()).sub(&s().mul(&s()));
        let g = homogeneous_gcd(&a, &b).unwrap();
        assert_eq!(g, r().sub(&s()));
    }
}
