//! The Drinfeld relation families `D1` to `D9` at level one (`γ = r`, `γ' = s`).

use std::collections::BTreeMap;

use serde::Serialize;

use super::{Checker, VerificationReport};
use crate::roots::{RootSystem, Sign};
use crate::scalars::{qbinomial, Field, Rat, Scalar};
use crate::vertex::{ModeOperator, Op};

/// Mode and index ranges of the Drinfeld suite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct Ranges {
    /// Bound on `|k|` for `x`-modes.
    pub max_mode: i32,
    /// Bound on `|l|` for Heisenberg modes.
    pub max_heis_mode: i32,
}

impl Default for Ranges {
    fn default() -> Self {
        Ranges { max_mode: 2, max_heis_mode: 2 }
    }
}

/// The Drinfeld relation families.
pub const D_FAMILIES: [&str; 12] = ["D1", "D2", "D3", "D4", "D5", "D6_1", "D6_2", "D7", "D8", "D9_1", "D9_2", "D9_3"];

fn sg(s: Sign) -> String {
    s.symbol().to_string()
}

fn mono(a: i32, b: i32) -> Scalar {
    Scalar::mono(Rat::ONE, a, b)
}

/// `⟨i,i⟩^{x/2} = (r/s)^{x/2}`.
fn diag_half(x: i32) -> Scalar {
    mono(2 * x, -2 * x)
}

fn r_minus_s() -> Scalar {
    Scalar::r().sub(&Scalar::s())
}

/// The scalar in the Heisenberg commutator `[a_i(l), a_j(l')]` at `γ = r`, `γ' = s`.
pub fn d2_scalar(rs: &RootSystem, i: usize, l: i32, j: usize, l2: i32) -> Scalar {
    if l + l2 != 0 {
        return Scalar::zero();
    }
    let a = rs.cartan(i, j);
    let al = l.abs();
    let gg = Scalar::rs_half(al);
    let num = diag_half(l * a).sub(&diag_half(-l * a));
    let first = gg.mul(&num).div(&r_minus_s().scale(&Rat::int(al as i64))).unwrap();
    let second = mono(4 * al, 0).sub(&mono(0, 4 * al)).div(&r_minus_s()).unwrap();
    first.mul(&second)
}

/// The coefficient of `x_j^±(l+k)` in `[a_i(l), x_j^±(k)]`.
pub fn d6_scalar(rs: &RootSystem, i: usize, j: usize, l: i32, sign: Sign) -> Scalar {
    let a = rs.cartan(i, j);
    let e = sign.as_i32();
    let num = diag_half(l * a).sub(&diag_half(-l * a));
    let base = num.div(&r_minus_s().scale(&Rat::int(l as i64))).unwrap().scale(&Rat::int(e as i64));
    if l > 0 {
        // (γγ')^{l/2} γ'^{±l/2}
        base.mul(&Scalar::rs_half(l)).mul(&Scalar::s_half(e * l))
    } else {
        // (γγ')^{-l/2} γ^{±l/2}
        base.mul(&Scalar::rs_half(-l)).mul(&Scalar::r_half(e * l))
    }
}

/// Right side of the `[x_i^+(k), x_j^-(k')]` relation at `γ = r`, `γ' = s`.
pub fn d8_rhs(i: usize, j: usize, k: i32, k2: i32) -> Op {
    if i != j {
        return Op::scalar(Scalar::zero());
    }
    let m = k + k2;
    let inv = r_minus_s().inv().unwrap();
    // γ'^{-k} γ^{-(k+k')/2} ω_i(k+k') − γ^{k'} γ'^{(k+k')/2} ω'_i(k+k')
    let c1 = mono(-2 * m, -4 * k).mul(&inv);
    let c2 = mono(4 * k2, 2 * m).mul(&inv).neg();
    Op::sum(vec![(c1, Op::psi(i, m)), (c2, Op::phi(i, m))])
}

fn omega(rs: &RootSystem, i: usize, p: i32) -> Op {
    let mut w = vec![0; rs.rank()];
    w[i - 1] = p;
    Op::new(ModeOperator::OmegaWeight(w))
}

fn omega_prime(rs: &RootSystem, i: usize, p: i32) -> Op {
    let mut w = vec![0; rs.rank()];
    w[i - 1] = p;
    Op::new(ModeOperator::OmegaPrimeWeight(w))
}

fn conj(a: Op, x: Op, a_inv: Op) -> Op {
    Op::product(vec![a, x, a_inv])
}

fn commutator(a: Op, b: Op) -> Op {
    Op::bracket(a, b, Scalar::one())
}

fn zero_op() -> Op {
    Op::scalar(Scalar::zero())
}

/// Placement of `x_j` in the `k`-th Serre term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SerreOrientation {
    /// `k` copies of `x_i` to the left of `x_j`.
    JFirst,
    /// `k` copies of `x_i` to the right of `x_j`.
    Reversed,
}

/// Symmetrized Serre sum for `a_{ij} = -1`:
/// `Σ_{σ} Σ_k (-1)^k c_k x_i(m_{σ1})…x_j(l)…x_i(m_{σ2})` with the
/// coefficients `(r s)^{e k(k-1)/2} [2 choose k]_{e}` (`e = ±1`).
pub fn serre_sum(i: usize, j: usize, sign: Sign, e: i32, m: (i32, i32), l: i32, orient: SerreOrientation) -> Op {
    let (u, v) = if e > 0 { (Scalar::r(), Scalar::s()) } else { (mono(-4, 0), mono(0, -4)) };
    let mut terms = Vec::new();
    let orders = if m.0 == m.1 { vec![(m.0, m.1)] } else { vec![(m.0, m.1), (m.1, m.0)] };
    let mult = if m.0 == m.1 { 2 } else { 1 };
    for (m1, m2) in orders {
        for k in 0..=2i64 {
            let c = qbinomial(2, k, &u, &v)
                .unwrap()
                .mul(&Scalar::rs_half(e * (k * (k - 1)) as i32))
                .scale(&Rat::int(if k % 2 == 0 { mult } else { -mult }));
            let xi1 = Op::x(i, sign, m1);
            let xi2 = Op::x(i, sign, m2);
            let xj = Op::x(j, sign, l);
            let word = match (orient, k) {
                (SerreOrientation::JFirst, 0) | (SerreOrientation::Reversed, 2) => vec![xj, xi1, xi2],
                (_, 1) => vec![xi1, xj, xi2],
                _ => vec![xi1, xi2, xj],
            };
            terms.push((c, Op::product(word)));
        }
    }
    Op::sum(terms)
}

/// Runs one Drinfeld family over the given ranges.
pub fn check_d<F: Field>(family: &str, ch: &mut Checker<F>, ranges: &Ranges) -> VerificationReport {
    let rs = ch.root_system().clone();
    let n = rs.rank();
    let mut rep = VerificationReport::new(family, BTreeMap::new());
    let km = ranges.max_mode;
    let lm = ranges.max_heis_mode;
    let heis_modes: Vec<i32> = (-lm..=lm).filter(|&l| l != 0).collect();
    match family {
        "D1" => {
            // Diagonal generators and their inverses.
            let mut gens: Vec<(String, Op, Op)> = Vec::new();
            for i in 1..=n {
                for p in [1, -1] {
                    gens.push((format!("ω_{i}^{p}"), omega(&rs, i, p), omega(&rs, i, -p)));
                    gens.push((format!("ω'_{i}^{p}"), omega_prime(&rs, i, p), omega_prime(&rs, i, -p)));
                }
            }
            for p in [1, -1] {
                gens.push((format!("D^{p}"), Op::new(ModeOperator::DegreeR(p)), Op::new(ModeOperator::DegreeR(-p))));
                gens.push((format!("D'^{p}"), Op::new(ModeOperator::DegreeS(p)), Op::new(ModeOperator::DegreeS(-p))));
            }
            for (name, g, ginv) in &gens {
                let r = ch.check(
                    "D1",
                    &[("inverse", name.clone())],
                    &Op::product(vec![g.clone(), ginv.clone()]),
                    &Op::identity(),
                );
                rep.instances.push(r);
            }
            for a in 0..gens.len() {
                for b in (a + 1)..gens.len() {
                    let r = ch.check(
                        "D1",
                        &[("a", gens[a].0.clone()), ("b", gens[b].0.clone())],
                        &commutator(gens[a].1.clone(), gens[b].1.clone()),
                        &zero_op(),
                    );
                    rep.instances.push(r);
                }
            }
            // γ^{±1/2}, γ'^{±1/2} act as scalars with γγ' = (rs)^c.
            let gamma = Op::scalar(Scalar::r_half(1));
            let gamma_p = Op::scalar(Scalar::s_half(1));
            let prod = Op::product(vec![gamma.clone(), gamma.clone(), gamma_p.clone(), gamma_p.clone()]);
            rep.instances.push(ch.check("D1", &[("central", "γγ'".into())], &prod, &Op::scalar(Scalar::rs_half(2))));
            for i in 1..=n {
                for s in Sign::both() {
                    for (gname, g) in [("γ^(1/2)", gamma.clone()), ("γ'^(1/2)", gamma_p.clone())] {
                        let x = Op::x(i, s, 0);
                        rep.instances.push(ch.check(
                            "D1",
                            &[("central", gname.into()), ("x", format!("x_{i}^{}(0)", s.symbol()))],
                            &commutator(g, x),
                            &zero_op(),
                        ));
                    }
                }
            }
        }
        "D2" => {
            for i in 1..=n {
                for j in 1..=n {
                    for &l in &heis_modes {
                        for &l2 in &heis_modes {
                            let lhs = commutator(Op::heis(i, l), Op::heis(j, l2));
                            let rhs = Op::scalar(d2_scalar(&rs, i, l, j, l2));
                            let kv = [
                                ("i", i.to_string()),
                                ("j", j.to_string()),
                                ("l", l.to_string()),
                                ("l'", l2.to_string()),
                            ];
                            rep.instances.push(ch.check("D2", &kv, &lhs, &rhs));
                        }
                    }
                }
            }
        }
        "D3" => {
            for i in 1..=n {
                for j in 1..=n {
                    for &l in &heis_modes {
                        for p in [1, -1] {
                            for (name, w) in [("ω", omega(&rs, j, p)), ("ω'", omega_prime(&rs, j, p))] {
                                let kv = [
                                    ("i", i.to_string()),
                                    ("j", j.to_string()),
                                    ("l", l.to_string()),
                                    ("op", format!("{name}^{p}")),
                                ];
                                rep.instances.push(ch.check("D3", &kv, &commutator(Op::heis(i, l), w), &zero_op()));
                            }
                        }
                    }
                }
            }
        }
        "D4" => {
            let d = |p| Op::new(ModeOperator::DegreeR(p));
            let dp = |p| Op::new(ModeOperator::DegreeS(p));
            for i in 1..=n {
                for s in Sign::both() {
                    for k in -km..=km {
                        let x = Op::x(i, s, k);
                        let kv = [("i", i.to_string()), ("sign", sg(s)), ("k", k.to_string()), ("D", "D".into())];
                        rep.instances.push(ch.check(
                            "D4",
                            &kv,
                            &conj(d(1), x.clone(), d(-1)),
                            &Op::scaled(mono(4 * k, 0), x.clone()),
                        ));
                        let kv = [("i", i.to_string()), ("sign", sg(s)), ("k", k.to_string()), ("D", "D'".into())];
                        rep.instances.push(ch.check(
                            "D4",
                            &kv,
                            &conj(dp(1), x.clone(), dp(-1)),
                            &Op::scaled(mono(0, 4 * k), x),
                        ));
                    }
                }
                for &l in &heis_modes {
                    let a = Op::heis(i, l);
                    let kv = [("i", i.to_string()), ("l", l.to_string()), ("D", "D".into())];
                    rep.instances.push(ch.check(
                        "D4",
                        &kv,
                        &conj(d(1), a.clone(), d(-1)),
                        &Op::scaled(mono(4 * l, 0), a.clone()),
                    ));
                    let kv = [("i", i.to_string()), ("l", l.to_string()), ("D", "D'".into())];
                    rep.instances.push(ch.check(
                        "D4",
                        &kv,
                        &conj(dp(1), a.clone(), dp(-1)),
                        &Op::scaled(mono(0, 4 * l), a),
                    ));
                }
            }
        }
        "D5" => {
            for i in 1..=n {
                for j in 1..=n {
                    for s in Sign::both() {
                        let e = s.as_i32();
                        for k in -km..=km {
                            let x = Op::x(j, s, k);
                            // ω_i x_j^±(k) ω_i^{-1} = ⟨ω'_j, ω_i⟩^{±1} x_j^±(k), with ⟨ω'_j, ω_i⟩ = ⟨j,i⟩.
                            let (a, b) = rs.pairing_exp(j, i);
                            let kv = [
                                ("i", i.to_string()),
                                ("j", j.to_string()),
                                ("sign", sg(s)),
                                ("k", k.to_string()),
                                ("op", "ω".into()),
                            ];
                            rep.instances.push(ch.check(
                                "D5",
                                &kv,
                                &conj(omega(&rs, i, 1), x.clone(), omega(&rs, i, -1)),
                                &Op::scaled(mono(4 * e * a, 4 * e * b), x.clone()),
                            ));
                            // ω'_i x_j^±(k) ω'_i^{-1} = ⟨ω'_i, ω_j⟩^{∓1} x_j^±(k).
                            let (a, b) = rs.pairing_exp(i, j);
                            let kv = [
                                ("i", i.to_string()),
                                ("j", j.to_string()),
                                ("sign", sg(s)),
                                ("k", k.to_string()),
                                ("op", "ω'".into()),
                            ];
                            rep.instances.push(ch.check(
                                "D5",
                                &kv,
                                &conj(omega_prime(&rs, i, 1), x.clone(), omega_prime(&rs, i, -1)),
                                &Op::scaled(mono(-4 * e * a, -4 * e * b), x),
                            ));
                        }
                    }
                }
            }
        }
        "D6_1" | "D6_2" => {
            let positive = family == "D6_1";
            for i in 1..=n {
                for j in 1..=n {
                    for s in Sign::both() {
                        for l in 1..=lm {
                            let l = if positive { l } else { -l };
                            for k in -km..=km {
                                let lhs = commutator(Op::heis(i, l), Op::x(j, s, k));
                                let rhs = Op::scaled(d6_scalar(&rs, i, j, l, s), Op::x(j, s, l + k));
                                let kv = [
                                    ("i", i.to_string()),
                                    ("j", j.to_string()),
                                    ("sign", sg(s)),
                                    ("l", l.to_string()),
                                    ("k", k.to_string()),
                                ];
                                rep.instances.push(ch.check(family, &kv, &lhs, &rhs));
                            }
                        }
                    }
                }
            }
        }
        "D7" => {
            for i in 1..=n {
                for j in 1..=n {
                    for s in Sign::both() {
                        for k in -km..=km {
                            for k2 in -km..=km {
                                let (lhs, rhs) = d7_sides(&rs, i, j, s, k, k2);
                                let kv = [
                                    ("i", i.to_string()),
                                    ("j", j.to_string()),
                                    ("sign", sg(s)),
                                    ("k", k.to_string()),
                                    ("k'", k2.to_string()),
                                ];
                                rep.instances.push(ch.check("D7", &kv, &lhs, &rhs));
                            }
                        }
                    }
                }
            }
        }
        "D8" => {
            for i in 1..=n {
                for j in 1..=n {
                    for k in -km..=km {
                        for k2 in -km..=km {
                            let lhs = commutator(Op::x(i, Sign::Plus, k), Op::x(j, Sign::Minus, k2));
                            let kv = [
                                ("i", i.to_string()),
                                ("j", j.to_string()),
                                ("k", k.to_string()),
                                ("k'", k2.to_string()),
                            ];
                            rep.instances.push(ch.check("D8", &kv, &lhs, &d8_rhs(i, j, k, k2)));
                        }
                    }
                }
            }
        }
        "D9_1" => {
            for i in 1..=n {
                for j in 1..=n {
                    if i == j || rs.cartan(i, j) != 0 {
                        continue;
                    }
                    for s in Sign::both() {
                        let e = s.as_i32();
                        let (a, b) = rs.pairing_exp(j, i);
                        for m in -km..=km {
                            for k in -km..=km {
                                let lhs = Op::product(vec![Op::x(i, s, m), Op::x(j, s, k)]);
                                let rhs = Op::scaled(
                                    mono(4 * e * a, 4 * e * b),
                                    Op::product(vec![Op::x(j, s, k), Op::x(i, s, m)]),
                                );
                                let kv = [
                                    ("i", i.to_string()),
                                    ("j", j.to_string()),
                                    ("sign", sg(s)),
                                    ("m", m.to_string()),
                                    ("k", k.to_string()),
                                ];
                                rep.instances.push(ch.check("D9_1", &kv, &lhs, &rhs));
                            }
                        }
                    }
                }
            }
        }
        "D9_2" | "D9_3" => serre_family(ch, &mut rep, family == "D9_2", SerreOrientation::Reversed, ranges),
        "D9_2_jfirst" | "D9_3_jfirst" => {
            serre_family(ch, &mut rep, family == "D9_2_jfirst", SerreOrientation::JFirst, ranges)
        }
        other => panic!("unknown family {other}"),
    }
    rep
}

/// Serre instances for `a_{ij} = -1` with `i < j` (`upper`) or `j < i`.
///
/// Instances touching node `n` are filed under the family name with a
/// `_jn` suffix, so they can be reported apart from the `< n` range.
fn serre_family<F: Field>(
    ch: &mut Checker<F>,
    rep: &mut VerificationReport,
    upper: bool,
    orient: SerreOrientation,
    ranges: &Ranges,
) {
    let rs = ch.root_system().clone();
    let n = rs.rank();
    let km = ranges.max_mode;
    let base = if upper { "D9_2" } else { "D9_3" };
    let base = match orient {
        SerreOrientation::Reversed => base.to_string(),
        SerreOrientation::JFirst => format!("{base}_jfirst"),
    };
    for i in 1..=n {
        for j in 1..=n {
            if rs.cartan(i, j) != -1 || (upper && i >= j) || (!upper && j >= i) {
                continue;
            }
            let family = if i.max(j) == n { format!("{base}_jn") } else { base.clone() };
            for s in Sign::both() {
                // x^± uses e = ±1 for i < j and e = ∓1 for j < i.
                let e = if upper { s.as_i32() } else { -s.as_i32() };
                for m1 in -km..=km {
                    for m2 in m1..=km {
                        for l in -km..=km {
                            let kv = [
                                ("i", i.to_string()),
                                ("j", j.to_string()),
                                ("sign", sg(s)),
                                ("m1", m1.to_string()),
                                ("m2", m2.to_string()),
                                ("l", l.to_string()),
                            ];
                            let lhs = serre_sum(i, j, s, e, (m1, m2), l, orient);
                            rep.instances.push(ch.check(&family, &kv, &lhs, &zero_op()));
                        }
                    }
                }
            }
        }
    }
}

/// Both sides of the exchange relation between `x_i^±(k+1) x_j^±(k')` and `x_j^±(k'+1) x_i^±(k)`.
pub fn d7_sides(rs: &RootSystem, i: usize, j: usize, s: Sign, k: i32, k2: i32) -> (Op, Op) {
    let e = s.as_i32();
    let (a, b) = rs.pairing_exp(j, i);
    let (c, d) = rs.pairing_exp(i, j);
    let ji = mono(4 * e * a, 4 * e * b);
    let ij = mono(4 * e * c, 4 * e * d);
    let lhs = Op::bracket(Op::x(i, s, k + 1), Op::x(j, s, k2), ji);
    // −(⟨j,i⟩⟨i,j⟩^{-1})^{±1/2}
    let pref = mono(2 * e * (a - c), 2 * e * (b - d)).neg();
    let rhs = Op::scaled(pref, Op::bracket(Op::x(j, s, k2 + 1), Op::x(i, s, k), ij));
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Truncation;
    use crate::relations::Status;
    use crate::scalars::ExactField;
    use crate::vertex::VertexEngine;
    use std::sync::Arc;

    fn checker(name: &str, t: Truncation) -> Checker<ExactField> {
        let rs = Arc::new(RootSystem::from_name(name).unwrap());
        Checker::new(Arc::new(VertexEngine::new(rs, ExactField)), t)
    }

    #[test]
    fn d2_matches_heisenberg_bracket() {
        let rs = RootSystem::from_name("D4").unwrap();
        for i in 1..=4 {
            for j in 1..=4 {
                for l in [-2, -1, 1, 2] {
                    assert_eq!(d2_scalar(&rs, i, l, j, -l), crate::fock::heisenberg_bracket(&rs, i, l, j, -l));
                }
            }
        }
    }

    #[test]
    fn j_first_serre_placement_fails_on_a2() {
        let mut ch = checker("A2", Truncation { max_osc_degree: 2, beta_box: 1 });
        let rep = check_d("D9_2_jfirst", &mut ch, &Ranges { max_mode: 1, max_heis_mode: 1 });
        assert!(rep.failures() > 0);
    }

    #[test]
    fn small_drinfeld_families_pass_on_a2() {
        let mut ch = checker("A2", Truncation { max_osc_degree: 2, beta_box: 1 });
        for fam in D_FAMILIES {
            let rep = check_d(fam, &mut ch, &Ranges { max_mode: 1, max_heis_mode: 1 });
            for i in &rep.instances {
                assert_ne!(i.status, Status::Fail, "{} {:?}", i.id, i.counterexample);
            }
        }
    }
}
