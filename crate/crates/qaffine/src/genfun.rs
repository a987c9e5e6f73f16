//! The generating functions `g^±_{ij}(z) = G^±_{ij}(z,1) / F^±_{ij}(z,1)`.
//!
//! The Taylor coefficients at `z = 0` have a closed form
//! ([`g_coefficient`]); [`g_series`] obtains them independently by power
//! series division of the two linear polynomials. The inversion and
//! τ-symmetry identities are checked as identities of rational functions
//! in `z` by cross-multiplication ([`tau_invariance_check`]).

use serde::Serialize;

use crate::roots::{RootSystem, Sign};
use crate::scalars::{Rat, Scalar, ScalarError};

/// A truncated power series `Σ_{k ≤ order} c_k z^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<Scalar>,
}

impl PowerSeries {
    /// Series with the given coefficients; order is `len - 1`.
    pub fn new(coeffs: Vec<Scalar>) -> Self {
        assert!(!coeffs.is_empty(), "a power series needs at least one coefficient");
        PowerSeries { coeffs }
    }

    /// Truncation order.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `z^k`.
    pub fn coeff(&self, k: usize) -> &Scalar {
        &self.coeffs[k]
    }

    /// All coefficients.
    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Truncated product; the order is the smaller of the two orders.
    pub fn mul(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        let coeffs = (0..=n)
            .map(|k| (0..=k).fold(Scalar::zero(), |acc, a| acc.add(&self.coeffs[a].mul(&o.coeffs[k - a]))))
            .collect();
        PowerSeries { coeffs }
    }

    /// Truncated quotient; needs a nonzero constant term in the divisor.
    pub fn div(&self, o: &Self) -> Result<Self, ScalarError> {
        let n = self.order().min(o.order());
        let inv0 = o.coeffs[0].inv()?;
        let mut q: Vec<Scalar> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.coeffs[k].clone();
            for a in 0..k {
                acc = acc.sub(&q[a].mul(&o.coeffs[k - a]));
            }
            q.push(acc.mul(&inv0));
        }
        Ok(PowerSeries { coeffs: q })
    }
}

/// The pair of linear forms `F(z,w) = f_z z + f_w w`, `G(z,w) = g_z z + g_w w`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearPolyPair {
    /// `(coefficient of z, coefficient of w)` of `F`.
    pub f: (Scalar, Scalar),
    /// `(coefficient of z, coefficient of w)` of `G`.
    pub g: (Scalar, Scalar),
}

/// `(⟨i,j⟩⟨j,i⟩)^{σ/2}`, the root of `F`.
fn f_root(rs: &RootSystem, i: usize, j: usize, sign: Sign) -> Scalar {
    let (a, b) = rs.pairing_exp(i, j);
    let (c, d) = rs.pairing_exp(j, i);
    let e = sign.as_i32();
    Scalar::mono(Rat::ONE, 2 * e * (a + c), 2 * e * (b + d))
}

/// The linear forms `F^±_{ij}` and `G^±_{ij}`.
pub fn fg_polys(rs: &RootSystem, i: usize, j: usize, sign: Sign) -> LinearPolyPair {
    let e = sign.as_i32();
    let (a, b) = rs.pairing_exp(i, j);
    let (c, d) = rs.pairing_exp(j, i);
    let f = (Scalar::one(), f_root(rs, i, j, sign).neg());
    let g =
        (Scalar::mono(Rat::ONE, 4 * e * c, 4 * e * d), Scalar::mono(Rat::ONE, 2 * e * (c - a), 2 * e * (d - b)).neg());
    LinearPolyPair { f, g }
}

/// Closed form of the Taylor coefficient `^±c^{(k)}_{ij}`.
pub fn g_coefficient(rs: &RootSystem, i: usize, j: usize, k: usize, sign: Sign) -> Scalar {
    let e = sign.as_i32();
    let (a, b) = rs.pairing_exp(i, j);
    let c0 = Scalar::mono(Rat::ONE, -4 * e * a, -4 * e * b);
    if k == 0 {
        return c0;
    }
    let aij = rs.cartan(i, j);
    // ⟨i,i⟩^{x/2} = (r s^{-1})^{x/2} in quarter units.
    let diag_half = |x: i32| Scalar::mono(Rat::ONE, 2 * x, -2 * x);
    let k = k as i32;
    c0.mul(&diag_half(-e * (k - 1) * aij)).mul(&diag_half(-e * aij).sub(&diag_half(e * aij)))
}

/// Taylor expansion of `G(z,1)/F(z,1)` at `z = 0` to the given order, by
/// power series division.
pub fn g_series(rs: &RootSystem, i: usize, j: usize, sign: Sign, order: usize) -> PowerSeries {
    let fg = fg_polys(rs, i, j, sign);
    let pad = |c0: Scalar, c1: Scalar| {
        let mut v = vec![Scalar::zero(); order + 1];
        v[0] = c0;
        if order >= 1 {
            v[1] = c1;
        }
        PowerSeries::new(v)
    };
    let num = pad(fg.g.1.clone(), fg.g.0.clone());
    let den = pad(fg.f.1.clone(), fg.f.0.clone());
    num.div(&den).expect("F(0,1) is a nonzero monomial")
}

/// A rational function `N(z)/D(z)` with polynomial numerator and
/// denominator, coefficients listed from `z^0` upward.
#[derive(Debug, Clone)]
pub struct ZRational {
    num: Vec<Scalar>,
    den: Vec<Scalar>,
}

fn poly_mul(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); a.len() + b.len() - 1];
    for (x, p) in a.iter().enumerate() {
        for (y, q) in b.iter().enumerate() {
            out[x + y] = out[x + y].add(&p.mul(q));
        }
    }
    out
}

fn poly_eq(a: &[Scalar], b: &[Scalar]) -> bool {
    let n = a.len().max(b.len());
    let zero = Scalar::zero();
    (0..n).all(|k| a.get(k).unwrap_or(&zero) == b.get(k).unwrap_or(&zero))
}

impl ZRational {
    /// `g^±_{ij}(z)` as `G(z,1)/F(z,1)`.
    pub fn g(rs: &RootSystem, i: usize, j: usize, sign: Sign) -> Self {
        let fg = fg_polys(rs, i, j, sign);
        ZRational { num: vec![fg.g.1, fg.g.0], den: vec![fg.f.1, fg.f.0] }
    }

    /// Equality by cross-multiplication.
    pub fn same_as(&self, o: &Self) -> bool {
        poly_eq(&poly_mul(&self.num, &o.den), &poly_mul(&o.num, &self.den))
    }

    /// Product.
    pub fn mul(&self, o: &Self) -> Self {
        ZRational { num: poly_mul(&self.num, &o.num), den: poly_mul(&self.den, &o.den) }
    }

    /// Reciprocal.
    pub fn recip(&self) -> Self {
        ZRational { num: self.den.clone(), den: self.num.clone() }
    }

    /// Substitution `z ↦ z^{-1}`, cleared by a common power of `z`.
    pub fn invert_arg(&self) -> Self {
        let n = self.num.len().max(self.den.len());
        let rev = |p: &[Scalar]| {
            let mut v = p.to_vec();
            v.resize(n, Scalar::zero());
            v.reverse();
            v
        };
        ZRational { num: rev(&self.num), den: rev(&self.den) }
    }

    /// τ on coefficients together with `z ↦ z^{-1}`.
    pub fn tau(&self) -> Self {
        let t = ZRational {
            num: self.num.iter().map(Scalar::tau).collect(),
            den: self.den.iter().map(Scalar::tau).collect(),
        };
        t.invert_arg()
    }

    /// The constant function `1`.
    pub fn one() -> Self {
        ZRational { num: vec![Scalar::one()], den: vec![Scalar::one()] }
    }
}

/// Outcome of one rational-function identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    /// Identity label.
    pub name: String,
    /// Whether it holds.
    pub pass: bool,
}

/// Checks τ-invariance, inversion and argument inversion of `g^±_{ij}`.
pub fn tau_invariance_check(rs: &RootSystem, i: usize, j: usize) -> Vec<IdentityCheck> {
    let gp = ZRational::g(rs, i, j, Sign::Plus);
    let gm = ZRational::g(rs, i, j, Sign::Minus);
    let gp_ji = ZRational::g(rs, j, i, Sign::Plus);
    let gm_ji = ZRational::g(rs, j, i, Sign::Minus);
    let check = |name: &str, pass: bool| IdentityCheck { name: format!("{name} (i={i}, j={j})"), pass };
    vec![
        check("tau(g+) = g+", gp.tau().same_as(&gp)),
        check("tau(g-) = g-", gm.tau().same_as(&gm)),
        check("g+ g- = 1", gp.mul(&gm).same_as(&ZRational::one())),
        check("g+_ij(1/z) = g-_ji(z)", gp.invert_arg().same_as(&gm_ji)),
        check("g-_ij(1/z) = g+_ji(z)", gm.invert_arg().same_as(&gp_ji)),
        check("g-_ji(z) = g+_ji(z)^-1", gm_ji.same_as(&gp_ji.recip())),
    ]
}

/// Checks `Σ_{a+b=k} c^{+(a)} c^{−(b)} = δ_{k0}` for `k ≤ order`.
pub fn series_inverse_check(rs: &RootSystem, i: usize, j: usize, order: usize) -> bool {
    (0..=order).all(|k| {
        let sum = (0..=k).fold(Scalar::zero(), |acc, a| {
            acc.add(&g_coefficient(rs, i, j, a, Sign::Plus).mul(&g_coefficient(rs, i, j, k - a, Sign::Minus)))
        });
        if k == 0 {
            sum.is_one()
        } else {
            sum.is_zero()
        }
    })
}

/// JSON table of coefficients emitted by the `genfun` subcommand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct CoefficientTable {
    /// Type name.
    #[serde(rename = "type")]
    pub lie_type: String,
    /// First index.
    pub i: usize,
    /// Second index.
    pub j: usize,
    /// `"+"` or `"-"`.
    pub sign: String,
    /// Rendered coefficients `c^{(0)}, …, c^{(order)}`.
    pub coeffs: Vec<String>,
}

/// Builds the coefficient table for `g^±_{ij}`.
pub fn coefficient_table(rs: &RootSystem, i: usize, j: usize, sign: Sign, order: usize) -> CoefficientTable {
    CoefficientTable {
        lie_type: rs.lie_type().to_string(),
        i,
        j,
        sign: sign.symbol().to_string(),
        coeffs: (0..=order).map(|k| g_coefficient(rs, i, j, k, sign).render()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::minimal_types;
    use crate::scalars::Field;
    use crate::scalars::PointField;

    fn sc(s: &str) -> Scalar {
        s.parse().unwrap()
    }

    /// Independent expansion: `(B - A z)/(P (1 - z/P))` as a geometric series.
    fn geometric_oracle(rs: &RootSystem, i: usize, j: usize, sign: Sign, k: usize) -> Scalar {
        let fg = fg_polys(rs, i, j, sign);
        let p = fg.f.1.neg();
        let a = fg.g.0.clone();
        let b = fg.g.1.neg();
        let pk = |e: i32| p.pow(-e).unwrap();
        if k == 0 {
            b.mul(&pk(1))
        } else {
            b.mul(&pk(k as i32 + 1)).sub(&a.mul(&pk(k as i32)))
        }
    }

    #[test]
    fn closed_form_matches_division_and_geometric_oracles() {
        for t in minimal_types() {
            let rs = RootSystem::build(t).unwrap();
            for i in 1..=rs.rank() {
                for j in 1..=rs.rank() {
                    for sign in Sign::both() {
                        let ser = g_series(&rs, i, j, sign, 12);
                        for k in 0..=12 {
                            let c = g_coefficient(&rs, i, j, k, sign);
                            assert_eq!(&c, ser.coeff(k), "{t} {i} {j} {k}");
                            assert_eq!(c, geometric_oracle(&rs, i, j, sign, k));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn examples() {
        let a = RootSystem::from_name("A2").unwrap();
        assert_eq!(g_coefficient(&a, 1, 2, 0, Sign::Plus), sc("r"));
        assert_eq!(g_coefficient(&a, 1, 1, 0, Sign::Plus), sc("r^-1*s"));
        let d = RootSystem::from_name("D4").unwrap();
        assert!(g_coefficient(&d, 1, 3, 3, Sign::Plus).is_zero());
        // z^1 coefficient of (r s^{-1} z - 1)/(z - r s^{-1}).
        let want = sc("(r*s^-1)^-2 * (1 - (r*s^-1)^2)");
        assert_eq!(g_coefficient(&a, 1, 1, 1, Sign::Plus), want);
        let fg = fg_polys(&a, 1, 1, Sign::Plus);
        assert_eq!(fg.f.1, sc("-r*s^-1"));
        assert_eq!(fg.g.0, a.pairing(1, 1));
        let fm = fg_polys(&a, 1, 1, Sign::Minus);
        assert_eq!(fm.f.1, fg.f.1.inv().unwrap());
        assert_eq!(g_series(&a, 1, 2, Sign::Plus, 0).coeffs().len(), 1);
    }

    #[test]
    fn tau_identities_hold_everywhere() {
        for t in crate::roots::all_supported_types().into_iter().filter(|t| t.rank <= 7) {
            let rs = RootSystem::build(t).unwrap();
            for i in 1..=rs.rank() {
                for j in 1..=rs.rank() {
                    for c in tau_invariance_check(&rs, i, j) {
                        assert!(c.pass, "{t}: {}", c.name);
                    }
                    assert!(series_inverse_check(&rs, i, j, 12));
                }
            }
        }
    }

    #[test]
    fn one_parameter_degeneration() {
        // At s = r^{-1} = q^{-1}, g_ij(z) = (q^{a} z - 1)/(z - q^{a}).
        for t in minimal_types() {
            let rs = RootSystem::build(t).unwrap();
            for (u, v) in [(Rat::int(2), Rat::new(1, 2)), (Rat::new(3, 2), Rat::new(2, 3))] {
                let f = PointField::new(u.clone(), v).unwrap();
                let q = u.pow(4);
                for i in 1..=rs.rank() {
                    for j in 1..=rs.rank() {
                        let qa = q.pow(rs.cartan(i, j));
                        let fg = fg_polys(&rs, i, j, Sign::Plus);
                        for z in [Rat::int(3), Rat::new(-1, 5)] {
                            let g = |p: &(Scalar, Scalar)| {
                                f.from_scalar(&p.0).unwrap().mul(&z).add(&f.from_scalar(&p.1).unwrap())
                            };
                            let lhs = g(&fg.g).div(&g(&fg.f));
                            let rhs = qa.mul(&z).sub(&Rat::ONE).div(&z.sub(&qa));
                            assert_eq!(lhs, rhs, "{t} {i} {j}");
                        }
                    }
                }
            }
        }
    }
}
