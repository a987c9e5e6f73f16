//! The verifier: relation instances checked as exact operator identities on
//! window states of the level-one Fock module.
//!
//! Every instance builds its two sides as [`Op`] expressions and compares
//! their images on all admissible window states (those whose image stays in
//! the window and is not zero for degree reasons). A failing instance keeps
//! the first counterexample state with both images.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;

use crate::fock::{FockState, LinComb, Truncation};
use crate::roots::RootSystem;
use crate::scalars::Field;
use crate::vertex::{admissible_states, Evaluator, Op, VertexEngine};

/// Outcome of one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// Both sides agree on every tested state.
    Pass,
    /// Some tested state separates the two sides.
    Fail,
    /// No admissible state in the window.
    Skipped,
}

/// A separating state with both images.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    /// Input state.
    pub state: String,
    /// Left image as `(state, coefficient)` pairs in the `a_i(-n)` basis.
    pub lhs: Vec<(String, String)>,
    /// Right image.
    pub rhs: Vec<(String, String)>,
}

/// Report entry for one relation instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceReport {
    /// Relation family and parameters, e.g. `D8(i=1,j=1,k=0,k'=1)`.
    pub id: String,
    /// Family name.
    pub family: String,
    /// Parameters.
    pub params: BTreeMap<String, String>,
    /// Outcome.
    pub status: Status,
    /// Reason for a skip.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// `"exact"` or `"sampled"`.
    pub mode: String,
    /// Number of states the identity was checked on.
    pub tested_states: usize,
    /// Wall time, recorded only when timing is enabled.
    pub millis: u64,
    /// First failing state.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

/// A verification report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    /// Suite name.
    pub suite: String,
    /// Configuration summary.
    pub config: BTreeMap<String, String>,
    /// All instances in a deterministic order.
    pub instances: Vec<InstanceReport>,
}

/// Per-family tally.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FamilySummary {
    /// Passed instances.
    pub pass: usize,
    /// Failed instances.
    pub fail: usize,
    /// Skipped instances.
    pub skipped: usize,
    /// Total tested states over all instances.
    pub tested_states: usize,
}

impl VerificationReport {
    /// An empty report.
    pub fn new(suite: &str, config: BTreeMap<String, String>) -> Self {
        VerificationReport { suite: suite.to_string(), config, instances: Vec::new() }
    }

    /// Number of failed instances.
    pub fn failures(&self) -> usize {
        self.instances.iter().filter(|i| i.status == Status::Fail).count()
    }

    /// Tallies by family, in family-name order.
    pub fn by_family(&self) -> BTreeMap<String, FamilySummary> {
        let mut out: BTreeMap<String, FamilySummary> = BTreeMap::new();
        for i in &self.instances {
            let e = out.entry(i.family.clone()).or_default();
            match i.status {
                Status::Pass => e.pass += 1,
                Status::Fail => e.fail += 1,
                Status::Skipped => e.skipped += 1,
            }
            e.tested_states += i.tested_states;
        }
        out
    }

    /// Appends all instances of another report.
    pub fn extend(&mut self, other: VerificationReport) {
        self.instances.extend(other.instances);
    }

    /// Pretty JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Checks operator identities on the window states of one root system.
#[derive(Debug)]
pub struct Checker<F: Field> {
    ev: Evaluator<F>,
    states: Vec<FockState>,
    trunc: Truncation,
    timing: bool,
}

fn params(kv: &[(&str, String)]) -> BTreeMap<String, String> {
    kv.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn instance_id(family: &str, p: &BTreeMap<String, String>) -> String {
    let inner: Vec<String> = p.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{family}({})", inner.join(","))
}

impl<F: Field> Checker<F> {
    /// A checker over the given engine and window.
    pub fn new(engine: Arc<VertexEngine<F>>, trunc: Truncation) -> Self {
        let states = trunc.enumerate(engine.root_system());
        Checker { ev: Evaluator::new(engine), states, trunc, timing: false }
    }

    /// Records wall time per instance (makes reports non-reproducible).
    pub fn with_timing(mut self, on: bool) -> Self {
        self.timing = on;
        self
    }

    /// The root system.
    pub fn root_system(&self) -> &RootSystem {
        self.ev.engine().root_system()
    }

    /// The window.
    pub fn truncation(&self) -> &Truncation {
        &self.trunc
    }

    /// The evaluator.
    pub fn evaluator(&mut self) -> &mut Evaluator<F> {
        &mut self.ev
    }

    /// Window states in basis order.
    pub fn states(&self) -> &[FockState] {
        &self.states
    }

    /// Checks `lhs = rhs` on the admissible window states.
    pub fn check(&mut self, family: &str, kv: &[(&str, String)], lhs: &Op, rhs: &Op) -> InstanceReport {
        let start = Instant::now();
        let p = params(kv);
        let id = instance_id(family, &p);
        let n = self.root_system().rank();
        let shift = lhs.shift(n).or_else(|| rhs.shift(n));
        let mut report = InstanceReport {
            id,
            family: family.to_string(),
            params: p,
            status: Status::Skipped,
            reason: None,
            mode: self.ev.field().mode_name().to_string(),
            tested_states: 0,
            millis: 0,
            counterexample: None,
        };
        let shift = match shift {
            Some(s) => s,
            None => {
                report.reason = Some("inhomogeneous operator".into());
                return report;
            }
        };
        let rs = self.ev.engine().root_system().clone();
        let tested: Vec<FockState> =
            admissible_states(&rs, &self.states, &shift, &self.trunc).into_iter().cloned().collect();
        if tested.is_empty() {
            report.reason = Some("window".into());
            return report;
        }
        report.status = Status::Pass;
        for s in &tested {
            let l = self.ev.apply_state(lhs, s);
            let r = self.ev.apply_state(rhs, s);
            report.tested_states += 1;
            if l != r {
                let fock = self.ev.engine().fock();
                report.status = Status::Fail;
                report.counterexample =
                    Some(Counterexample { state: s.render(), lhs: fock.render_terms(&l), rhs: fock.render_terms(&r) });
                break;
            }
        }
        if self.timing {
            report.millis = start.elapsed().as_millis() as u64;
        }
        log::debug!("{} {:?} on {} states", report.id, report.status, report.tested_states);
        report
    }

    /// Checks an identity given as a function producing both images of a
    /// window state; states for which it returns `None` are not tested.
    pub fn check_with<G>(&mut self, family: &str, kv: &[(&str, String)], mut sides: G) -> InstanceReport
    where
        G: FnMut(&mut Evaluator<F>, &FockState) -> Option<(LinComb<F::E>, LinComb<F::E>)>,
    {
        let start = Instant::now();
        let p = params(kv);
        let mut report = InstanceReport {
            id: instance_id(family, &p),
            family: family.to_string(),
            params: p,
            status: Status::Pass,
            reason: None,
            mode: self.ev.field().mode_name().to_string(),
            tested_states: 0,
            millis: 0,
            counterexample: None,
        };
        for idx in 0..self.states.len() {
            let s = self.states[idx].clone();
            let Some((l, r)) = sides(&mut self.ev, &s) else { continue };
            report.tested_states += 1;
            if l != r {
                let fock = self.ev.engine().fock();
                report.status = Status::Fail;
                report.counterexample =
                    Some(Counterexample { state: s.render(), lhs: fock.render_terms(&l), rhs: fock.render_terms(&r) });
                break;
            }
        }
        if report.tested_states == 0 {
            report.status = Status::Skipped;
            report.reason = Some("window".into());
        }
        if self.timing {
            report.millis = start.elapsed().as_millis() as u64;
        }
        report
    }
}

mod chevalley;
mod drinfeld;
mod field;
mod suite;

pub use chevalley::*;
pub use drinfeld::*;
pub use field::*;
pub use suite::*;
