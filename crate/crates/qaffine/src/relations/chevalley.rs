//! The Chevalley relations (X1)–(X5) checked on the images of `e_i, f_i,
//! ω_i, ω'_i` (`i ∈ I_0`) in the level-one Fock module, the catalog of
//! bracket identities, and the one-parameter degeneration of the
//! `[x^+, x^-]` relation.

use std::collections::BTreeMap;

use super::{Checker, VerificationReport};
use crate::bracket::{check_lemma, lemma_catalog, BracketExpr, Chevalley, ChevalleyImages, OpBuilder};
use crate::relations::Ranges;
use crate::roots::{RootSystem, Sign};
use crate::scalars::{Field, Rat, Scalar};
use crate::vertex::{ModeOperator, Op};

/// The Chevalley relation families and the bracket-identity catalog.
pub const X_FAMILIES: [&str; 6] = ["X1", "X2", "X3", "X4", "X5", "lemmas"];

/// Images of the Chevalley generators (alias of [`ChevalleyImages::new`]).
pub fn psi_images(rs: &RootSystem) -> ChevalleyImages {
    ChevalleyImages::new(rs)
}

fn mono(a: i32, b: i32) -> Scalar {
    Scalar::mono(Rat::ONE, 4 * a, 4 * b)
}

fn conj(g: &BracketExpr, x: &BracketExpr, g_inv: &BracketExpr) -> BracketExpr {
    BracketExpr::product(vec![g.clone(), x.clone(), g_inv.clone()])
}

/// `(ad_l e_i)(b) = E_i b − Ω_i b Ω_i^{-1} E_i`.
pub fn ad_left_e(imgs: &ChevalleyImages, i: usize, b: &BracketExpr) -> BracketExpr {
    let e = imgs.image(Chevalley::E(i));
    BracketExpr::difference(
        BracketExpr::product(vec![e.clone(), b.clone()]),
        BracketExpr::product(vec![imgs.image(Chevalley::K(i)), b.clone(), imgs.image_inverse(Chevalley::K(i)), e]),
    )
}

/// `(ad_r f_i)(b) = b F_i − F_i Ω'^{-1}_i b Ω'_i`.
pub fn ad_right_f(imgs: &ChevalleyImages, i: usize, b: &BracketExpr) -> BracketExpr {
    let f = imgs.image(Chevalley::F(i));
    BracketExpr::difference(
        BracketExpr::product(vec![b.clone(), f.clone()]),
        BracketExpr::product(vec![
            f,
            imgs.image_inverse(Chevalley::KPrime(i)),
            b.clone(),
            imgs.image(Chevalley::KPrime(i)),
        ]),
    )
}

/// Runs one family of [`X_FAMILIES`] over the affine index set `I_0`.
pub fn check_x<F: Field>(family: &str, ch: &mut Checker<F>) -> VerificationReport {
    let rs = ch.root_system().clone();
    let n = rs.rank();
    let imgs = psi_images(&rs);
    let mut b = OpBuilder::new(n);
    let mut rep = VerificationReport::new(family, BTreeMap::new());
    let mut push = |ch: &mut Checker<F>, b: &mut OpBuilder, kv: &[(&str, String)], l: &BracketExpr, r: &BracketExpr| {
        let (lo, ro) = (b.build(l).expect("representable"), b.build(r).expect("representable"));
        rep.instances.push(ch.check(family, kv, &lo, &ro));
    };
    let nodes: Vec<usize> = (0..=n).collect();
    let scalar = |c: Scalar| BracketExpr::scalar(c);
    match family {
        "X1" => {
            let theta = rs.word_root(rs.theta_word());
            push(
                ch,
                &mut b,
                &[("product", "ω_0·ω_θ".into())],
                &BracketExpr::product(vec![imgs.image(Chevalley::K(0)), BracketExpr::omega_weight(&theta)]),
                &scalar(mono(0, -1)),
            );
            push(
                ch,
                &mut b,
                &[("product", "ω'_0·ω'_θ".into())],
                &BracketExpr::product(vec![imgs.image(Chevalley::KPrime(0)), BracketExpr::omega_prime_weight(&theta)]),
                &scalar(mono(-1, 0)),
            );
            for &i in &nodes {
                for &j in &nodes {
                    for (gi, gj) in [
                        (Chevalley::K(i), Chevalley::K(j)),
                        (Chevalley::K(i), Chevalley::KPrime(j)),
                        (Chevalley::KPrime(i), Chevalley::KPrime(j)),
                    ] {
                        push(
                            ch,
                            &mut b,
                            &[("pair", format!("{gi:?},{gj:?}"))],
                            &BracketExpr::product(vec![imgs.image(gi), imgs.image(gj)]),
                            &BracketExpr::product(vec![imgs.image(gj), imgs.image(gi)]),
                        );
                    }
                }
                for g in [Chevalley::K(i), Chevalley::KPrime(i)] {
                    push(
                        ch,
                        &mut b,
                        &[("inverse", format!("{g:?}"))],
                        &BracketExpr::product(vec![imgs.image(g), imgs.image_inverse(g)]),
                        &scalar(Scalar::one()),
                    );
                }
            }
        }
        "X2" | "X3" => {
            for &j in &nodes {
                let (g, g_inv) = if family == "X2" {
                    (imgs.image(Chevalley::K(j)), imgs.image_inverse(Chevalley::K(j)))
                } else {
                    (imgs.image(Chevalley::KPrime(j)), imgs.image_inverse(Chevalley::KPrime(j)))
                };
                for &i in &nodes {
                    let c = if family == "X2" { rs.pairing(i, j) } else { rs.pairing(j, i).inv().expect("monomial") };
                    let (e, f) = (imgs.image(Chevalley::E(i)), imgs.image(Chevalley::F(i)));
                    let kv = |x: &str| [("i", i.to_string()), ("j", j.to_string()), ("gen", x.to_string())];
                    push(ch, &mut b, &kv("e"), &conj(&g, &e, &g_inv), &BracketExpr::scaled(c.clone(), e.clone()));
                    push(
                        ch,
                        &mut b,
                        &kv("f"),
                        &conj(&g, &f, &g_inv),
                        &BracketExpr::scaled(c.inv().expect("monomial"), f),
                    );
                }
            }
            let (d, d_inv, base) = if family == "X2" {
                (ModeOperator::DegreeR(1), ModeOperator::DegreeR(-1), Scalar::r())
            } else {
                (ModeOperator::DegreeS(1), ModeOperator::DegreeS(-1), Scalar::s())
            };
            let (d, d_inv) = (Op::new(d), Op::new(d_inv));
            for &i in &nodes {
                let c = if i == 0 { base.clone() } else { Scalar::one() };
                for (name, x, cx) in [
                    ("e", imgs.image(Chevalley::E(i)), c.clone()),
                    ("f", imgs.image(Chevalley::F(i)), c.inv().expect("monomial")),
                ] {
                    let xo = b.build(&x).expect("representable");
                    let lhs = Op::product(vec![d.clone(), xo.clone(), d_inv.clone()]);
                    let rhs = Op::scaled(cx, xo);
                    let kv = [("i", i.to_string()), ("gen", name.to_string()), ("grading", "degree".to_string())];
                    rep.instances.push(ch.check(family, &kv, &lhs, &rhs));
                }
            }
        }
        "X4" => {
            let inv = Scalar::r().sub(&Scalar::s()).inv().expect("r ≠ s");
            for &i in &nodes {
                for &j in &nodes {
                    let lhs = BracketExpr::commutator(imgs.image(Chevalley::E(i)), imgs.image(Chevalley::F(j)));
                    let rhs = if i == j {
                        BracketExpr::sum(vec![
                            (inv.clone(), imgs.image(Chevalley::K(i))),
                            (inv.neg(), imgs.image(Chevalley::KPrime(i))),
                        ])
                    } else {
                        scalar(Scalar::zero())
                    };
                    push(ch, &mut b, &[("i", i.to_string()), ("j", j.to_string())], &lhs, &rhs);
                }
            }
        }
        "X5" => {
            for &i in &nodes {
                for &j in &nodes {
                    if i == j {
                        continue;
                    }
                    let times = 1 - rs.cartan(i, j);
                    let mut e = imgs.image(Chevalley::E(j));
                    let mut f = imgs.image(Chevalley::F(j));
                    for _ in 0..times {
                        e = ad_left_e(&imgs, i, &e);
                        f = ad_right_f(&imgs, i, &f);
                    }
                    let zero = scalar(Scalar::zero());
                    let kv = |x: &str| [("i", i.to_string()), ("j", j.to_string()), ("gen", x.to_string())];
                    push(ch, &mut b, &kv("e"), &e, &zero);
                    push(ch, &mut b, &kv("f"), &f, &zero);
                }
            }
        }
        "lemmas" => {
            for entry in lemma_catalog(&rs) {
                for e in [entry.tau(), entry] {
                    rep.instances.push(check_lemma(ch, &mut b, family, &e).expect("catalog is representable"));
                }
            }
            rep.instances.sort_by(|a, b| a.id.cmp(&b.id));
        }
        other => panic!("unknown Chevalley family {other}"),
    }
    rep
}

/// The right side of `[x_i^+(k), x_j^-(k')]` in the one-parameter form
/// `δ_{ij}(q^{(k−k')/2} ω_i(k+k') − q^{(k'−k)/2} ω'_i(k+k'))/(q − q^{-1})`
/// with `q = r` (valid on the line `s = r^{-1}`).
pub fn one_parameter_commutator_rhs(i: usize, j: usize, k: i32, k2: i32) -> Op {
    if i != j {
        return Op::scalar(Scalar::zero());
    }
    let q = Scalar::r();
    let den = q.sub(&q.inv().expect("nonzero")).inv().expect("q² ≠ 1");
    let half = |e: i32| Scalar::mono(Rat::ONE, 2 * e, 0);
    Op::sum(vec![(half(k - k2).mul(&den), Op::psi(i, k + k2)), (half(k2 - k).mul(&den).neg(), Op::phi(i, k + k2))])
}

/// Checks `[x_i^+(k), x_j^-(k')]` against [`one_parameter_commutator_rhs`]
/// for all `i, j` and modes within `ranges`. Meaningful in a field where
/// `s = r^{-1}`.
pub fn check_one_parameter_degeneration<F: Field>(ch: &mut Checker<F>, ranges: &Ranges) -> VerificationReport {
    let n = ch.root_system().rank();
    let mut rep = VerificationReport::new("D8_one_parameter", BTreeMap::new());
    let km = ranges.max_mode;
    for i in 1..=n {
        for j in 1..=n {
            for k in -km..=km {
                for k2 in -km..=km {
                    let lhs = Op::bracket(Op::x(i, Sign::Plus, k), Op::x(j, Sign::Minus, k2), Scalar::one());
                    let rhs = one_parameter_commutator_rhs(i, j, k, k2);
                    let kv = [("i", i.to_string()), ("j", j.to_string()), ("k", k.to_string()), ("k'", k2.to_string())];
                    rep.instances.push(ch.check("D8_one_parameter", &kv, &lhs, &rhs));
                }
            }
        }
    }
    rep
}
