//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Every criterion is exact. Wall-time budgets are part of the criterion
//! where the specification states one; they are generous for a single core.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use qaffine::bracket::{
    catalog_from_json, catalog_to_json, identity_suite, lemma_catalog, matrix_entries, BracketExpr, IdentityParams,
};
use qaffine::fock::Truncation;
use qaffine::genfun::{fg_polys, g_coefficient, series_inverse_check, tau_invariance_check};
use qaffine::relations::{
    check_d, check_field_relation, check_normal_ordering_phi, check_normal_ordering_psi,
    check_one_parameter_degeneration, check_ope, check_x, run_suite, status_differences, Checker, InstanceReport, Mode,
    PsiShift, Ranges, Status, SuiteConfig, VerificationReport, D_FAMILIES, FIELD_FAMILIES,
};
use qaffine::roots::{all_supported_types, minimal_types, RootSystem, Sign};
use qaffine::scalars::{ExactField, Field, PointField, Rat, Scalar};
use qaffine::vertex::{contraction_factor, heisenberg_contraction_series, VertexEngine};

type Outcome = Result<String, String>;

fn checker<F: Field>(name: &str, field: F, t: Truncation) -> Checker<F> {
    let rs = Arc::new(RootSystem::from_name(name).unwrap());
    Checker::new(Arc::new(VertexEngine::new(rs, field)), t)
}

fn window(deg: u32, beta_box: u32) -> Truncation {
    Truncation { max_osc_degree: deg, beta_box }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn first_failure(instances: &[InstanceReport]) -> Option<String> {
    instances.iter().find(|i| i.status == Status::Fail).map(|i| format!("{} at {:?}", i.id, i.counterexample))
}

fn no_failures(label: &str, instances: &[InstanceReport]) -> Result<(), String> {
    match first_failure(instances) {
        Some(f) => Err(format!("{label}: {f}")),
        None => Ok(()),
    }
}

fn within(label: &str, start: Instant, budget: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= budget, || format!("{label} took {t:.1?}, budget {budget:?}"))
}

/// Taylor coefficients of `(g_w + g_z z)/(f_w + f_z z)` by long division.
fn division_oracle(rs: &RootSystem, i: usize, j: usize, sign: Sign, order: usize) -> Vec<Scalar> {
    let fg = fg_polys(rs, i, j, sign);
    let (fz, fw) = fg.f;
    let (gz, gw) = fg.g;
    let inv = fw.inv().unwrap();
    let mut c = vec![gw.mul(&inv)];
    for k in 1..=order {
        let top = if k == 1 { gz.clone() } else { Scalar::zero() };
        c.push(top.sub(&fz.mul(&c[k - 1])).mul(&inv));
    }
    c
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for t in minimal_types() {
        let rs = RootSystem::build(t).unwrap();
        let n = rs.rank();
        for i in 1..=n {
            for j in 1..=n {
                for sign in Sign::both() {
                    let oracle = division_oracle(&rs, i, j, sign, 12);
                    for (k, c) in oracle.iter().enumerate() {
                        ensure(g_coefficient(&rs, i, j, k, sign) == *c, || format!("{t} c({i},{j},{k},{sign:?})"))?;
                        count += 1;
                    }
                }
                ensure(series_inverse_check(&rs, i, j, 12), || format!("{t} convolution ({i},{j})"))?;
            }
        }
    }
    within("criterion 1", start, Duration::from_secs(1))?;
    Ok(format!("{count} coefficients equal the long-division oracle; convolution identity to k = 12"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for t in all_supported_types().into_iter().filter(|t| t.rank <= 6) {
        let rs = RootSystem::build(t).unwrap();
        for i in 0..=rs.rank() {
            for j in 0..=rs.rank() {
                for c in tau_invariance_check(&rs, i, j) {
                    ensure(c.pass, || format!("{t}: {}", c.name))?;
                    count += 1;
                }
            }
        }
    }
    within("criterion 2", start, Duration::from_secs(1))?;
    Ok(format!("{count} rational-function identities over A2..A6, D4..D6, E6 including node 0"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    let sets = [
        IdentityParams::default(),
        IdentityParams {
            u: Scalar::rat(Rat::new(3, 2)),
            v: Scalar::rat(Rat::new(-5, 7)),
            q: Scalar::rat(Rat::new(11, 3)),
        },
    ];
    for p in &sets {
        for c in identity_suite(p) {
            ensure(c.pass, || format!("{} with u={}, v={}, q={}", c.name, p.u, p.v, p.q))?;
            count += 1;
        }
    }
    within("criterion 3", start, Duration::from_secs(1))?;
    Ok(format!("{} identities hold with symbolic parameters and at a rational point", count / sets.len()))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let mut detail = Vec::new();
    for name in ["A2", "D4"] {
        let mut ch = checker(name, ExactField, window(4, 2));
        let rep = check_d("D2", &mut ch, &Ranges { max_mode: 2, max_heis_mode: 4 });
        no_failures(name, &rep.instances)?;
        let zero_cases = rep
            .instances
            .iter()
            .filter(|i| i.status == Status::Pass)
            .filter(|i| {
                let l: i32 = i.params["l"].parse().unwrap();
                let l2: i32 = i.params["l'"].parse().unwrap();
                l + l2 != 0
            })
            .count();
        let passes = rep.instances.iter().filter(|i| i.status == Status::Pass).count();
        ensure(zero_cases > 0, || format!("{name}: no m+l ≠ 0 instance tested"))?;
        detail.push(format!("{name} {passes} commutators ({zero_cases} vanishing)"));
    }
    within("criterion 4", start, Duration::from_secs(60))?;
    Ok(format!("{} on degree ≤ 4 windows", detail.join(", ")))
}

fn criterion_5() -> Outcome {
    let mut detail = Vec::new();
    for (name, budget) in [("A2", 60), ("D4", 600), ("E6", 600)] {
        let start = Instant::now();
        let mut ch = checker(name, ExactField, Truncation::default());
        let mut all = VerificationReport::new(name, Default::default());
        for fam in D_FAMILIES {
            all.extend(check_d(fam, &mut ch, &Ranges::default()));
        }
        no_failures(name, &all.instances)?;
        let tally = all.by_family();
        for fam in D_FAMILIES {
            // Families with a separate j = n tally count together with it.
            let passes: usize = tally
                .iter()
                .filter(|(k, _)| *k == fam || k.strip_suffix("_jn") == Some(fam))
                .map(|(_, t)| t.pass)
                .sum();
            if fam == "D9_1" && name == "A2" {
                ensure(passes == 0, || "A2 has no orthogonal pair".into())?;
                continue;
            }
            ensure(passes >= 50, || format!("{name} {fam}: only {passes} tested instances"))?;
        }
        within(name, start, Duration::from_secs(budget))?;
        detail.push(format!(
            "{name} {} passes in {:.0?}",
            all.instances.iter().filter(|i| i.status == Status::Pass).count(),
            start.elapsed()
        ));
    }
    Ok(format!("{}; every family ≥ 50 tested instances (D9_1 is vacuous on A2)", detail.join(", ")))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut ch = checker("A2", ExactField, window(3, 2));
    let mut total = 0;
    for fam in FIELD_FAMILIES {
        let rep = check_field_relation(fam, &mut ch, 2);
        no_failures(fam, &rep.instances)?;
        let passes = rep.instances.iter().filter(|i| i.status == Status::Pass).count();
        if fam == "3.11" {
            ensure(rep.instances.is_empty(), || "A2 has no orthogonal pair".into())?;
            continue;
        }
        ensure(passes > 0, || format!("{fam}: nothing tested"))?;
        total += passes;
    }
    // The orthogonal-pair relation needs a type with a_ij = 0.
    let mut d4 = checker("D4", ExactField, window(3, 2));
    let rep = check_field_relation("3.11", &mut d4, 2);
    no_failures("D4 3.11", &rep.instances)?;
    let orthogonal = rep.instances.iter().filter(|i| i.status == Status::Pass).count();
    ensure(orthogonal > 0, || "D4 3.11: nothing tested".into())?;
    within("criterion 6", start, Duration::from_secs(600))?;
    Ok(format!(
        "{total} coefficient identities for {} at order 2 on A2 (3.11 vacuous there), {orthogonal} for 3.11 on D4",
        FIELD_FAMILIES.join(", ")
    ))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut series = 0;
    for name in ["A2", "D4", "E6"] {
        let rs = RootSystem::from_name(name).unwrap();
        for i in 1..=rs.rank() {
            for j in 1..=rs.rank() {
                for si in Sign::both() {
                    for sj in Sign::both() {
                        let closed = contraction_factor(&rs, i, j, (si, sj)).series(3);
                        let direct = heisenberg_contraction_series(&rs, i, j, (si, sj), 3);
                        ensure(closed == direct, || format!("{name} contraction ({i},{j},{si:?},{sj:?})"))?;
                        series += 1;
                    }
                }
            }
        }
    }
    let mut ch = checker("A2", ExactField, window(2, 2));
    let mut ope = Vec::new();
    for (i, j) in [(1, 1), (1, 2), (2, 1)] {
        for si in Sign::both() {
            for sj in Sign::both() {
                ope.extend(check_ope(&mut ch, i, j, (si, sj), (-1, 3)));
            }
        }
    }
    no_failures("operator product", &ope)?;
    let mut normal = check_normal_ordering_phi(&mut ch, 1, 3);
    normal.extend(check_normal_ordering_psi(&mut ch, 1, 3, PsiShift::Plus));
    no_failures("normal ordering", &normal)?;
    let minus = check_normal_ordering_psi(&mut ch, 1, 3, PsiShift::Minus);
    ensure(first_failure(&minus).is_some(), || "the r^{-1/2} reading unexpectedly holds".into())?;
    within("criterion 7", start, Duration::from_secs(600))?;
    Ok(format!(
        "{series} contraction series to order 3, {} operator-product and {} normal-ordering coefficients; Ψ shift resolved as r^(+1/2)",
        ope.len(),
        normal.len()
    ))
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut detail = Vec::new();
    for (name, t) in [("D4", window(3, 3)), ("E6", window(3, 4))] {
        let mut ch = checker(name, ExactField, t);
        let rep = check_x("lemmas", &mut ch);
        no_failures(name, &rep.instances)?;
        for i in &rep.instances {
            ensure(i.status == Status::Pass && i.tested_states >= 10, || {
                format!("{}: {} states", i.id, i.tested_states)
            })?;
        }
        detail.push(format!("{name} {} entries", rep.instances.len()));
    }
    within("criterion 8", start, Duration::from_secs(900))?;
    Ok(format!("{} (with τ-images), each on ≥ 10 states", detail.join(", ")))
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let mut detail = Vec::new();
    for (name, t) in [("A2", window(3, 2)), ("D4", window(3, 3)), ("E6", window(3, 4))] {
        let mut ch = checker(name, ExactField, t);
        let mut n = 0;
        for fam in ["X1", "X2", "X3", "X4", "X5"] {
            let rep = check_x(fam, &mut ch);
            no_failures(name, &rep.instances)?;
            n += rep.instances.iter().filter(|i| i.status == Status::Pass).count();
            if fam == "X4" {
                let e0f0 = rep.instances.iter().find(|i| i.id == "X4(i=0,j=0)").unwrap();
                ensure(e0f0.status == Status::Pass && e0f0.tested_states >= 10, || format!("{name} [E_0,F_0]"))?;
            }
        }
        detail.push(format!("{name} {n}"));
    }
    let rs = RootSystem::from_name("D4").unwrap();
    let mut ch = checker("D4", ExactField, window(3, 3));
    let mut b = qaffine::bracket::OpBuilder::new(4);
    let mut rungs = 0;
    for e in lemma_catalog(&rs).into_iter().filter(|e| e.name.starts_with("ladder")) {
        let rep = qaffine::bracket::check_lemma(&mut ch, &mut b, "ladder", &e).unwrap();
        ensure(rep.status == Status::Pass, || format!("{}: {:?}", e.name, rep.counterexample))?;
        rungs += 1;
    }
    ensure(rungs == 4, || format!("expected 4 ladder rungs on D4, found {rungs}"))?;
    within("criterion 9", start, Duration::from_secs(900))?;
    Ok(format!("X1-X5 instances passing: {}; [E_0,F_0] and {rungs} D4 ladder rungs hold", detail.join(", ")))
}

fn criterion_10() -> Outcome {
    let mut n = 0;
    for (u, v) in [(Rat::int(2), Rat::new(1, 2)), (Rat::new(3, 2), Rat::new(2, 3))] {
        for name in ["A2", "D4"] {
            let mut ch = checker(name, PointField::new(u.clone(), v.clone()).unwrap(), Truncation::default());
            let rep = check_one_parameter_degeneration(&mut ch, &Ranges::default());
            no_failures(name, &rep.instances)?;
            n += rep.instances.iter().filter(|i| i.status == Status::Pass).count();
        }
    }
    let mut off = checker("A2", PointField::new(Rat::int(2), Rat::new(1, 3)).unwrap(), Truncation::default());
    let control = check_one_parameter_degeneration(&mut off, &Ranges::default());
    ensure(control.failures() > 0, || "one-parameter form also holds off the line s = 1/r".into())?;
    Ok(format!("{n} instances at r = 16, 81/16 with s = 1/r; the control point s ≠ 1/r fails as expected"))
}

fn criterion_11() -> Outcome {
    let cfg = SuiteConfig {
        families: vec!["D5,D8,X4".into()],
        mode: Mode::Sampled,
        points: 2,
        seed: 11,
        ..Default::default()
    };
    let a = run_suite(&cfg).map_err(|e| e.to_string())?.to_json();
    let b = run_suite(&SuiteConfig { jobs: 2, ..cfg.clone() }).map_err(|e| e.to_string())?.to_json();
    ensure(a == b, || "sampled reports differ between runs".into())?;
    let exact = run_suite(&SuiteConfig { mode: Mode::Exact, ..cfg }).map_err(|e| e.to_string())?;
    let sampled: VerificationReport = {
        let cfg = SuiteConfig {
            families: vec!["D5,D8,X4".into()],
            mode: Mode::Sampled,
            points: 2,
            seed: 11,
            ..Default::default()
        };
        run_suite(&cfg).map_err(|e| e.to_string())?
    };
    let diff = status_differences(&exact, &sampled);
    ensure(diff.is_empty(), || format!("sampled and exact disagree on {diff:?}"))?;

    let mut rendered = 0;
    let reparse = |text: &str, expected: &Scalar| -> Result<(), String> {
        let back: Scalar = text.parse().map_err(|e| format!("{text:?}: {e}"))?;
        ensure(back == *expected, || format!("{text:?} re-parses to {back}"))
    };
    for t in minimal_types() {
        let rs = RootSystem::build(t).unwrap();
        for i in 1..=rs.rank() {
            for j in 1..=rs.rank() {
                for k in 0..6 {
                    let c = g_coefficient(&rs, i, j, k, Sign::Minus);
                    reparse(&c.render(), &c)?;
                    rendered += 1;
                }
                let p = rs.pairing(i, j);
                reparse(&p.render(), &p)?;
                rendered += 1;
            }
        }
        let cat = lemma_catalog(&rs);
        let back = catalog_from_json(&catalog_to_json(&rs, &cat)).map_err(|e| e.to_string())?;
        ensure(back.len() == cat.len(), || "catalog length".into())?;
        for (x, y) in back.iter().zip(&cat) {
            ensure(x.expr == y.expr && x.expected == y.expected, || format!("catalog entry {}", x.name))?;
        }
    }
    let mut ch = checker("A2", ExactField, Truncation::default());
    let engine = ch.evaluator().engine().clone();
    let op_expr = BracketExpr::xp(1, -1);
    let op = qaffine::bracket::to_operator(2, &op_expr).unwrap();
    for col in matrix_entries(&mut ch, &op_expr).map_err(|e| e.to_string())? {
        let image = ch.evaluator().apply_state(&op, &col.input);
        for (state, text) in &col.image {
            let exact = engine.fock().a_basis_coeff(state, image.coeff(state).unwrap());
            reparse(text, &exact)?;
            rendered += 1;
        }
    }
    Ok(format!("byte-identical sampled reports across runs and job counts; sampled = exact; {rendered} rendered scalars re-parse equal"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("generating-function closed form", criterion_1),
        ("τ-invariance of g±", criterion_2),
        ("bracket identity suite", criterion_3),
        ("Heisenberg commutators on the Fock window", criterion_4),
        ("Drinfeld relations D1-D9 on A2, D4, E6", criterion_5),
        ("field-level relations", criterion_6),
        ("contractions and normal ordering", criterion_7),
        ("bracket-identity catalog on D4 and E6", criterion_8),
        ("Chevalley relations and [E_0, F_0]", criterion_9),
        ("one-parameter degeneration", criterion_10),
        ("determinism and scalar round trip", criterion_11),
    ];
    let filter: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let id = k + 1;
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS  {name} ({secs:.1} s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name} ({secs:.1} s): {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
