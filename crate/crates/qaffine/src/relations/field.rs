//! Field-level relations: coefficient extraction of the generating-function
//! relations, the Serre field identity, and the operator product expansions
//! of the vertex operators.
//!
//! Generating functions follow `x_i^±(z) = Σ_k x_i^±(k) z^{-k}`,
//! `Ψ_i(z) = Σ_{m≥0} ω_i(m) z^{-m}` and `Φ_i(z) = Σ_{m≥0} ω'_i(-m) z^m`.

use std::collections::{BTreeMap, HashMap};

use super::{Checker, InstanceReport, VerificationReport};
use crate::fock::{FockState, LinComb};
use crate::genfun::{fg_polys, g_series, PowerSeries};
use crate::roots::{RootSystem, Sign};
use crate::scalars::{Field, Rat, Scalar};
use crate::vertex::{contraction_factor, normal_ordered_pair, Op};

/// The field-level relation families.
pub const FIELD_FAMILIES: [&str; 7] = ["3.6", "3.7", "3.8", "3.9", "3.10", "3.11", "5.6"];

fn mono(a: i32, b: i32) -> Scalar {
    Scalar::mono(Rat::ONE, a, b)
}

fn sg(s: Sign) -> String {
    s.symbol().to_string()
}

/// Coefficients of `g(λ x)^e` (`e = ±1`) up to `x^order`, with
/// `g = g^+_{ij}`.
fn scaled_g(rs: &RootSystem, i: usize, j: usize, lambda: &Scalar, e: i32, order: usize) -> Vec<Scalar> {
    let g = g_series(rs, i, j, Sign::Plus, order);
    let g = if e > 0 {
        g
    } else {
        let mut one = vec![Scalar::zero(); order + 1];
        one[0] = Scalar::one();
        PowerSeries::new(one).div(&g).expect("g(0) is a unit")
    };
    (0..=order).map(|t| g.coeff(t).mul(&lambda.pow(t as i32).unwrap())).collect()
}

/// Both sides of the `z^a w^{-b}` coefficient of
/// `g_{ij}(z/w (rs)^{1/2} r) Φ_i(z) Ψ_j(w) = g_{ij}(z/w (rs)^{1/2} s) Ψ_j(w) Φ_i(z)`.
pub fn relation_3_6(rs: &RootSystem, i: usize, j: usize, a: i32, b: i32) -> (Op, Op) {
    let order = a.min(b).max(0) as usize;
    let left = scaled_g(rs, i, j, &Scalar::rs_half(1).mul(&Scalar::r()), 1, order);
    let right = scaled_g(rs, i, j, &Scalar::rs_half(1).mul(&Scalar::s()), 1, order);
    let mut l = Vec::new();
    let mut r = Vec::new();
    for t in 0..=order as i32 {
        let phi = Op::phi(i, -(a - t));
        let psi = Op::psi(j, b - t);
        l.push((left[t as usize].clone(), Op::product(vec![phi.clone(), psi.clone()])));
        r.push((right[t as usize].clone(), Op::product(vec![psi, phi])));
    }
    (Op::sum(l), Op::sum(r))
}

/// Both sides of the `z^a w^{-b}` coefficient of
/// `Φ_i(z) x_j^±(w) = g_{ij}(z/w (rs)^{1/2} r^{∓1/2})^{±1} x_j^±(w) Φ_i(z)`.
pub fn relation_3_7(rs: &RootSystem, i: usize, j: usize, sign: Sign, a: i32, b: i32) -> (Op, Op) {
    let e = sign.as_i32();
    let lambda = Scalar::rs_half(1).mul(&Scalar::r_half(-e));
    let d = scaled_g(rs, i, j, &lambda, e, a as usize);
    let lhs = Op::product(vec![Op::phi(i, -a), Op::x(j, sign, b)]);
    let rhs = Op::sum(
        (0..=a)
            .map(|t| (d[t as usize].clone(), Op::product(vec![Op::x(j, sign, b - t), Op::phi(i, -(a - t))])))
            .collect(),
    );
    (lhs, rhs)
}

/// Both sides of the `z^{-a} w^{-b}` coefficient of
/// `Ψ_i(z) x_j^±(w) = g_{ji}(w/z (rs)^{1/2} s^{±1/2})^{∓1} x_j^±(w) Ψ_i(z)`.
pub fn relation_3_8(rs: &RootSystem, i: usize, j: usize, sign: Sign, a: i32, b: i32) -> (Op, Op) {
    let e = sign.as_i32();
    let lambda = Scalar::rs_half(1).mul(&Scalar::s_half(e));
    let d = scaled_g(rs, j, i, &lambda, -e, a as usize);
    let lhs = Op::product(vec![Op::psi(i, a), Op::x(j, sign, b)]);
    let rhs = Op::sum(
        (0..=a).map(|t| (d[t as usize].clone(), Op::product(vec![Op::x(j, sign, b + t), Op::psi(i, a - t)]))).collect(),
    );
    (lhs, rhs)
}

/// Both sides of the `z^{-k} w^{-k'}` coefficient of
/// `[x_i^+(z), x_j^-(w)] = δ_{ij}/(r−s) (δ(zw^{-1}s) Ψ_i(w r^{1/2}) − δ(zw^{-1}r) Φ_i(z s^{-1/2}))`,
/// with `δ(x) = Σ_{n∈ℤ} x^n`.
pub fn relation_3_9(i: usize, j: usize, k: i32, k2: i32) -> (Op, Op) {
    let lhs = Op::bracket(Op::x(i, Sign::Plus, k), Op::x(j, Sign::Minus, k2), Scalar::one());
    if i != j {
        return (lhs, Op::scalar(Scalar::zero()));
    }
    let inv = Scalar::r().sub(&Scalar::s()).inv().unwrap();
    // δ(zs/w) Ψ_i(w r^{1/2}): the term s^n z^n w^{-n} · ω_i(m) r^{-m/2} w^{-m}
    // contributes to z^{-k} w^{-k'} when n = -k and n + m = k'.
    let n = -k;
    let m = k2 - n;
    let psi_term = (mono(-2 * m, 4 * n).mul(&inv), Op::psi(i, m));
    // δ(zr/w) Φ_i(z s^{-1/2}): the term r^n z^n w^{-n} · ω'_i(-m) s^{-m/2} z^m
    // contributes when n = k' and n + m = -k.
    let n = k2;
    let m = -k - n;
    let phi_term = (mono(4 * n, -2 * m).mul(&inv).neg(), Op::phi(i, -m));
    (lhs, Op::sum(vec![psi_term, phi_term]))
}

/// The `z^{-k} w^{-k'}` coefficient of
/// `F^±_{ij}(z,w) x_i^±(z) x_j^±(w) − G^±_{ij}(z,w) x_j^±(w) x_i^±(z)`.
pub fn relation_3_10_shadow(rs: &RootSystem, i: usize, j: usize, sign: Sign, k: i32, k2: i32) -> Op {
    let fg = fg_polys(rs, i, j, sign);
    let x = |n: usize, m: i32| Op::x(n, sign, m);
    // z · x(z) has x(k+1) at z^{-k}; w · x(w) has x(k'+1) at w^{-k'}.
    Op::sum(vec![
        (fg.f.0.clone(), Op::product(vec![x(i, k + 1), x(j, k2)])),
        (fg.f.1.clone(), Op::product(vec![x(i, k), x(j, k2 + 1)])),
        (fg.g.0.neg(), Op::product(vec![x(j, k2), x(i, k + 1)])),
        (fg.g.1.neg(), Op::product(vec![x(j, k2 + 1), x(i, k)])),
    ])
}

/// The bracket form
/// `[x_i^±(k), x_j^±(k'+1)]_{⟨i,j⟩^{∓1}} + (⟨j,i⟩⟨i,j⟩^{-1})^{±1/2} [x_j^±(k'), x_i^±(k+1)]_{⟨j,i⟩^{∓1}}`.
pub fn relation_3_22(rs: &RootSystem, i: usize, j: usize, sign: Sign, k: i32, k2: i32) -> Op {
    let e = sign.as_i32();
    let (a, b) = rs.pairing_exp(i, j);
    let (c, d) = rs.pairing_exp(j, i);
    let first = Op::bracket(Op::x(i, sign, k), Op::x(j, sign, k2 + 1), mono(-4 * e * a, -4 * e * b));
    let second = Op::bracket(Op::x(j, sign, k2), Op::x(i, sign, k + 1), mono(-4 * e * c, -4 * e * d));
    Op::sum(vec![(Scalar::one(), first), (mono(2 * e * (c - a), 2 * e * (d - b)), second)])
}

/// The `z^{-m} w^{-k}` coefficient of
/// `x_i^±(z) x_j^±(w) − ⟨j,i⟩^{±1} x_j^±(w) x_i^±(z)` for `a_{ij} = 0`.
pub fn relation_3_11(rs: &RootSystem, i: usize, j: usize, sign: Sign, m: i32, k: i32) -> Op {
    let e = sign.as_i32();
    let (a, b) = rs.pairing_exp(j, i);
    Op::bracket(Op::x(i, sign, m), Op::x(j, sign, k), mono(4 * e * a, 4 * e * b))
}

/// The `z_1^{-m_1} z_2^{-m_2} w^{-l}` coefficient of
/// `X_i(z_1)X_i(z_2)X_j(w) − (r+s) X_i(z_1)X_j(w)X_i(z_2) + rs X_j(w)X_i(z_1)X_i(z_2) + {z_1 ↔ z_2}`.
pub fn serre_field_coefficient(i: usize, j: usize, m1: i32, m2: i32, l: i32) -> Op {
    let x = |n: usize, k: i32| Op::x(n, Sign::Plus, k);
    let mut terms = Vec::new();
    for (a, b) in [(m1, m2), (m2, m1)] {
        terms.push((Scalar::one(), Op::product(vec![x(i, a), x(i, b), x(j, l)])));
        terms.push((Scalar::r().add(&Scalar::s()).neg(), Op::product(vec![x(i, a), x(j, l), x(i, b)])));
        terms.push((mono(4, 4), Op::product(vec![x(j, l), x(i, a), x(i, b)])));
    }
    Op::sum(terms)
}

/// Runs one field-level family with coefficient orders up to `order`.
pub fn check_field_relation<F: Field>(family: &str, ch: &mut Checker<F>, order: i32) -> VerificationReport {
    let rs = ch.root_system().clone();
    let n = rs.rank();
    let mut rep = VerificationReport::new(family, BTreeMap::new());
    let zero = Op::scalar(Scalar::zero());
    let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|i| (1..=n).map(move |j| (i, j))).collect();
    match family {
        "3.6" => {
            for &(i, j) in &pairs {
                for a in 0..=order {
                    for b in 0..=order {
                        let (l, r) = relation_3_6(&rs, i, j, a, b);
                        let kv =
                            [("i", i.to_string()), ("j", j.to_string()), ("a", a.to_string()), ("b", b.to_string())];
                        rep.instances.push(ch.check(family, &kv, &l, &r));
                    }
                }
            }
        }
        "3.7" | "3.8" => {
            for &(i, j) in &pairs {
                for s in Sign::both() {
                    for a in 0..=order {
                        for b in -order..=order {
                            let (l, r) = if family == "3.7" {
                                relation_3_7(&rs, i, j, s, a, b)
                            } else {
                                relation_3_8(&rs, i, j, s, a, b)
                            };
                            let kv = [
                                ("i", i.to_string()),
                                ("j", j.to_string()),
                                ("sign", sg(s)),
                                ("a", a.to_string()),
                                ("b", b.to_string()),
                            ];
                            rep.instances.push(ch.check(family, &kv, &l, &r));
                        }
                    }
                }
            }
        }
        "3.9" => {
            for &(i, j) in &pairs {
                for k in -order..=order {
                    for k2 in -order..=order {
                        let (l, r) = relation_3_9(i, j, k, k2);
                        let kv =
                            [("i", i.to_string()), ("j", j.to_string()), ("k", k.to_string()), ("k'", k2.to_string())];
                        rep.instances.push(ch.check(family, &kv, &l, &r));
                    }
                }
            }
        }
        "3.10" => {
            // The shadow vanishes, and the bracket form (3.22) equals
            // −(⟨i,j⟩⟨j,i⟩)^{∓1/2} times the shadow.
            for &(i, j) in &pairs {
                for s in Sign::both() {
                    let e = s.as_i32();
                    let (a, b) = rs.pairing_exp(i, j);
                    let (c, d) = rs.pairing_exp(j, i);
                    let f_inv = mono(-2 * e * (a + c), -2 * e * (b + d)).neg();
                    for k in -order..=order {
                        for k2 in -order..=order {
                            let shadow = relation_3_10_shadow(&rs, i, j, s, k, k2);
                            let kv = [
                                ("i", i.to_string()),
                                ("j", j.to_string()),
                                ("sign", sg(s)),
                                ("k", k.to_string()),
                                ("k'", k2.to_string()),
                            ];
                            rep.instances.push(ch.check("3.10", &kv, &shadow, &zero));
                            let bracket = relation_3_22(&rs, i, j, s, k, k2);
                            rep.instances.push(ch.check("3.22", &kv, &bracket, &Op::scaled(f_inv.clone(), shadow)));
                        }
                    }
                }
            }
        }
        "3.11" => {
            for &(i, j) in &pairs {
                if i == j || rs.cartan(i, j) != 0 {
                    continue;
                }
                for s in Sign::both() {
                    for m in -order..=order {
                        for k in -order..=order {
                            let kv = [
                                ("i", i.to_string()),
                                ("j", j.to_string()),
                                ("sign", sg(s)),
                                ("m", m.to_string()),
                                ("k", k.to_string()),
                            ];
                            rep.instances.push(ch.check(family, &kv, &relation_3_11(&rs, i, j, s, m, k), &zero));
                        }
                    }
                }
            }
        }
        "5.6" => {
            for &(i, j) in &pairs {
                if i >= j || rs.cartan(i, j) != -1 {
                    continue;
                }
                for m1 in -order..=order {
                    for m2 in m1..=order {
                        for l in -order..=order {
                            let kv = [
                                ("i", i.to_string()),
                                ("j", j.to_string()),
                                ("m1", m1.to_string()),
                                ("m2", m2.to_string()),
                                ("l", l.to_string()),
                            ];
                            rep.instances.push(ch.check(family, &kv, &serre_field_coefficient(i, j, m1, m2, l), &zero));
                        }
                    }
                }
            }
        }
        other => panic!("unknown field family {other}"),
    }
    rep
}

type Coefficients<E> = BTreeMap<(i32, i32), LinComb<E>>;

/// Operator product expansion check: the `z^A w^B` coefficient of
/// `X_i^σ(z) X_j^{σ'}(w)` equals that of
/// `:X_i^σ(z) X_j^{σ'}(w): · C(w/z) · (w/z)^{p/2} · ε(α_i,α_j)^{σ'}` with the
/// closed-form contraction factor `C (w/z)^{p/2}` and the vertex cocycle `ε`.
pub fn check_ope<F: Field>(
    ch: &mut Checker<F>,
    i: usize,
    j: usize,
    signs: (Sign, Sign),
    range: (i32, i32),
) -> Vec<InstanceReport> {
    let rs = ch.root_system().clone();
    let contraction = contraction_factor(&rs, i, j, signs);
    let (si, sj) = signs;
    let hh = si.as_i32() * sj.as_i32() * rs.cartan(i, j);
    let p = contraction.x_power_halves;
    assert!((hh - p) % 2 == 0, "integral total z-power");
    let (dz, dw) = ((hh - p) / 2, (hh + p) / 2);
    let eps = rs.vertex_cocycle_simple(i, j).to_scalar().pow(contraction.cocycle_power).unwrap();
    let engine = ch.evaluator().engine().clone();
    let f = engine.field().clone();
    let eps_e = f.from_scalar(&eps).unwrap();
    let series = contraction.series(24);
    let series_e: Vec<F::E> = series.iter().map(|c| f.from_scalar(c).unwrap()).collect();
    let mut cache: HashMap<FockState, Coefficients<F::E>> = HashMap::new();
    let mut out = Vec::new();
    for a_exp in range.0..=range.1 {
        for b_exp in range.0..=range.1 {
            let prod = Op::product(vec![Op::x(i, si, -a_exp), Op::x(j, sj, -b_exp)]);
            let kv = [
                ("i", i.to_string()),
                ("j", j.to_string()),
                ("signs", format!("{}{}", si.symbol(), sj.symbol())),
                ("A", a_exp.to_string()),
                ("B", b_exp.to_string()),
            ];
            let rep = ch.check_with("OPE", &kv, |ev, s| {
                let lhs = (*ev.apply_state(&prod, s)).clone();
                let deg = s.osc_degree() as i32;
                let wj = sj.as_i32() * engine.fock().z_power(j, s) + 1;
                let wmin = wj - deg;
                let n_max = b_exp - dw - wmin;
                if n_max < 0 {
                    return Some((lhs, LinComb::zero()));
                }
                assert!((n_max as usize) < series_e.len(), "contraction order");
                let zmax = a_exp - dz + n_max;
                // Exponent caps covering every (A, B) of the range.
                let zcap = range.1 - dz + (range.1 - dw - wmin).max(0);
                let wcap = range.1 - dw;
                let nop = cache
                    .entry(s.clone())
                    .or_insert_with(|| normal_ordered_pair(&engine, (i, si), (j, sj), s, zcap, wcap));
                debug_assert!(zmax <= zcap);
                let mut rhs = LinComb::zero();
                for nn in 0..=n_max {
                    if let Some(v) = nop.get(&(a_exp - dz + nn, b_exp - dw - nn)) {
                        rhs.add_scaled(&f, v, &f.mul(&series_e[nn as usize], &eps_e));
                    }
                }
                Some((lhs, rhs))
            });
            out.push(rep);
        }
    }
    out
}

/// Which reading of the `Ψ` identity of the normal-ordering lemma to test:
/// `Ψ_i(w r^{e/2})` with `e = ±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsiShift {
    /// `Ψ_i(w r^{1/2})`.
    Plus,
    /// `Ψ_i(w r^{-1/2})`.
    Minus,
}

/// Checks `:X_i^+(z) X_i^-(zr): = Φ_i(z s^{-1/2}) (rs)^{-1/2}` coefficient-wise
/// for `z^M`, `M ∈ [-1, order]`.
pub fn check_normal_ordering_phi<F: Field>(ch: &mut Checker<F>, i: usize, order: i32) -> Vec<InstanceReport> {
    let engine = ch.evaluator().engine().clone();
    let f = engine.field().clone();
    let mut out = Vec::new();
    for m_exp in -1..=order {
        let target = Op::scaled(mono(-2, -2).mul(&Scalar::s_half(-m_exp)), Op::phi(i, -m_exp));
        let kv = [("i", i.to_string()), ("M", m_exp.to_string()), ("field", "Φ".into())];
        out.push(ch.check_with("normal_ordering", &kv, |ev, s| {
            let deg = s.osc_degree() as i32;
            let zi = engine.fock().z_power(i, s) + 1;
            let wj = -engine.fock().z_power(i, s) + 1;
            let total = m_exp + 2;
            let nop = normal_ordered_pair(
                &engine,
                (i, Sign::Plus),
                (i, Sign::Minus),
                s,
                total - wj + deg + 1,
                total - zi + deg + 1,
            );
            let mut lhs = LinComb::zero();
            for ((za, wb), v) in &nop {
                if za + wb == total {
                    // (zw)^{-1} with w = zr gives z^{-2} r^{-1}; w^{wb} gives r^{wb}.
                    lhs.add_scaled(&f, v, &f.mono(&Rat::ONE, 4 * (wb - 1), 0));
                }
            }
            let rhs = (*ev.apply_state(&target, s)).clone();
            Some((lhs, rhs))
        }));
    }
    out
}

/// Checks `:X_i^+(w s^{-1}) X_i^-(w): = Ψ_i(w r^{±1/2}) (rs)^{-1/2}`
/// coefficient-wise for `w^M`, `M ∈ [-order, 1]`.
pub fn check_normal_ordering_psi<F: Field>(
    ch: &mut Checker<F>,
    i: usize,
    order: i32,
    shift: PsiShift,
) -> Vec<InstanceReport> {
    let engine = ch.evaluator().engine().clone();
    let f = engine.field().clone();
    let e = if shift == PsiShift::Plus { 1 } else { -1 };
    let mut out = Vec::new();
    for m_exp in -order..=1 {
        let target = Op::scaled(mono(-2, -2).mul(&Scalar::r_half(e * m_exp)), Op::psi(i, -m_exp));
        let kv = [
            ("i", i.to_string()),
            ("M", m_exp.to_string()),
            ("field", format!("Ψ(w r^({}1/2))", if e > 0 { "" } else { "-" })),
        ];
        out.push(ch.check_with("normal_ordering", &kv, |ev, s| {
            let deg = s.osc_degree() as i32;
            let zi = engine.fock().z_power(i, s) + 1;
            let wj = -engine.fock().z_power(i, s) + 1;
            let total = m_exp + 2;
            let nop = normal_ordered_pair(
                &engine,
                (i, Sign::Plus),
                (i, Sign::Minus),
                s,
                total - wj + deg + 1,
                total - zi + deg + 1,
            );
            let mut lhs = LinComb::zero();
            for ((za, wb), v) in &nop {
                if za + wb == total {
                    // z = w/s: z^{za} gives s^{-za}; (zw)^{-1} gives w^{-2} s.
                    lhs.add_scaled(&f, v, &f.mono(&Rat::ONE, 0, 4 * (1 - za)));
                }
            }
            let rhs = (*ev.apply_state(&target, s)).clone();
            Some((lhs, rhs))
        }));
    }
    out
}
