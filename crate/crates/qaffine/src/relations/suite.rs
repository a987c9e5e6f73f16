//! Suite configuration and the driver that runs relation families in exact
//! or sampled mode.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    check_d, check_field_relation, check_normal_ordering_phi, check_normal_ordering_psi, check_ope, check_x, Checker,
    InstanceReport, PsiShift, Ranges, Status, VerificationReport, D_FAMILIES, FIELD_FAMILIES, X_FAMILIES,
};
use crate::fock::Truncation;
use crate::roots::{Family, LieType, RootSystem, Sign};
use crate::scalars::{ExactField, Field, PointField, Rat};
use crate::vertex::VertexEngine;

/// Errors in a suite configuration.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    /// The type letter is not `A`, `D` or `E`.
    #[error("unknown type {0:?}, expected A, D or E")]
    UnknownType(String),
    /// A type/rank pair without data.
    #[error("unsupported root system {family}{rank}: {reason}")]
    Unsupported {
        /// Type letter.
        family: String,
        /// Rank.
        rank: usize,
        /// Explanation.
        reason: String,
    },
    /// A family name or range that is not recognized.
    #[error("unknown relation family {0:?}")]
    UnknownFamily(String),
    /// An out-of-range numeric setting.
    #[error("invalid setting {name}: {reason}")]
    Invalid {
        /// Setting.
        name: &'static str,
        /// Explanation.
        reason: String,
    },
    /// A configuration file that does not parse.
    #[error("config file does not parse: {0}")]
    File(String),
}

/// Exact arithmetic or evaluation at rational sample points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Symbolic rational functions in `r^{1/4}, s^{1/4}`.
    Exact,
    /// Rational values of `r, s` drawn from the seed.
    Sampled,
}

impl std::str::FromStr for Mode {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "exact" => Ok(Mode::Exact),
            "sampled" => Ok(Mode::Sampled),
            other => Err(ConfigError::Invalid { name: "mode", reason: format!("{other:?} is not exact or sampled") }),
        }
    }
}

/// A suite run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    /// Type letter `A`, `D` or `E`.
    #[serde(rename = "type")]
    pub family: String,
    /// Finite rank `n` (number of nodes of the finite diagram).
    pub rank: usize,
    /// Window of test states.
    pub truncation: Truncation,
    /// Mode and Heisenberg-mode bounds for the Drinfeld families.
    pub ranges: Ranges,
    /// Coefficient order for the field-level families.
    pub field_order: i32,
    /// Family names, ranges (`D1..D9`) or groups.
    pub families: Vec<String>,
    /// Arithmetic mode.
    pub mode: Mode,
    /// Number of sample points in sampled mode.
    pub points: usize,
    /// Seed of the sample points.
    pub seed: u64,
    /// Worker threads; does not affect the report.
    pub jobs: usize,
}

impl Default for SuiteConfig {
    /// `A_2`, degree ≤ 3, `beta_box` 2, modes `|k| ≤ 2`, Drinfeld families,
    /// exact mode.
    fn default() -> Self {
        SuiteConfig {
            family: "A".into(),
            rank: 2,
            truncation: Truncation::default(),
            ranges: Ranges::default(),
            field_order: 2,
            families: vec!["D1..D9".into()],
            mode: Mode::Exact,
            points: 2,
            seed: 0,
            jobs: 1,
        }
    }
}

impl SuiteConfig {
    /// Parses a JSON configuration; absent fields take their defaults.
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::File(e.to_string()))
    }

    /// JSON form.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// The root system named by the configuration.
    pub fn lie_type(&self) -> Result<LieType, ConfigError> {
        let family = match self.family.to_ascii_uppercase().as_str() {
            "A" => Family::A,
            "D" => Family::D,
            "E" => Family::E,
            _ => return Err(ConfigError::UnknownType(self.family.clone())),
        };
        LieType::new(family, self.rank).map_err(|e| ConfigError::Unsupported {
            family: self.family.to_ascii_uppercase(),
            rank: self.rank,
            reason: e.to_string(),
        })
    }

    /// Validates every setting and expands the family list.
    pub fn validate(&self) -> Result<Vec<String>, ConfigError> {
        self.lie_type()?;
        if self.ranges.max_mode < 0 || self.ranges.max_heis_mode < 0 {
            return Err(ConfigError::Invalid { name: "ranges", reason: "bounds must be non-negative".into() });
        }
        if self.field_order < 0 {
            return Err(ConfigError::Invalid { name: "field_order", reason: "must be non-negative".into() });
        }
        if self.truncation.max_osc_degree > 8 {
            return Err(ConfigError::Invalid { name: "cutoff", reason: "at most 8".into() });
        }
        if self.mode == Mode::Sampled && self.points == 0 {
            return Err(ConfigError::Invalid {
                name: "points",
                reason: "sampled mode needs at least one point".into(),
            });
        }
        if self.jobs == 0 {
            return Err(ConfigError::Invalid { name: "jobs", reason: "at least one worker".into() });
        }
        expand_families(&self.families)
    }

    /// The settings that determine the report, as strings.
    pub fn summary(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("type".into(), format!("{}{}", self.family.to_ascii_uppercase(), self.rank));
        m.insert("cutoff".into(), self.truncation.max_osc_degree.to_string());
        m.insert("beta_box".into(), self.truncation.beta_box.to_string());
        m.insert("max_mode".into(), self.ranges.max_mode.to_string());
        m.insert("max_heis_mode".into(), self.ranges.max_heis_mode.to_string());
        m.insert("field_order".into(), self.field_order.to_string());
        m.insert("families".into(), self.families.join(","));
        m.insert("mode".into(), format!("{:?}", self.mode).to_lowercase());
        if self.mode == Mode::Sampled {
            m.insert("points".into(), self.points.to_string());
            m.insert("seed".into(), self.seed.to_string());
            let pts: Vec<String> = sample_points(self.seed, self.points)
                .iter()
                .map(|(u, v)| format!("r={} s={}", u.pow(4), v.pow(4)))
                .collect();
            m.insert("sample_points".into(), pts.join("; "));
        }
        m
    }
}

/// Families of the vertex-operator identities: operator product
/// contractions and normal-ordered products at coincident points.
pub const VERTEX_FAMILIES: [&str; 2] = ["5.5", "5.7"];

/// Expands names, ranges `D1..D9` and groups (`drinfeld`, `field`,
/// `vertex`, `chevalley`, `lemmas`, `all`) into a sorted, deduplicated list
/// of family names. `D6` and `D9` stand for all their sub-items.
pub fn expand_families(list: &[String]) -> Result<Vec<String>, ConfigError> {
    let all: Vec<&str> = D_FAMILIES
        .iter()
        .chain(FIELD_FAMILIES.iter())
        .chain(VERTEX_FAMILIES.iter())
        .chain(X_FAMILIES.iter())
        .copied()
        .collect();
    let d_index = |name: &str| -> Option<usize> {
        let base = name.split('_').next()?;
        D_FAMILIES.iter().position(|f| f.starts_with(base) && f.split('_').next() == Some(base))
    };
    let mut out: Vec<String> = Vec::new();
    for raw in list.iter().flat_map(|s| s.split(',')) {
        let item = raw.trim();
        if item.is_empty() {
            continue;
        }
        let picked: Vec<&str> = match item {
            "all" => all.clone(),
            "drinfeld" => D_FAMILIES.to_vec(),
            "field" => FIELD_FAMILIES.to_vec(),
            "vertex" => VERTEX_FAMILIES.to_vec(),
            "chevalley" => X_FAMILIES[..5].to_vec(),
            "D6" => vec!["D6_1", "D6_2"],
            "D9" => vec!["D9_1", "D9_2", "D9_3"],
            _ if item.contains("..") => {
                let (a, b) = item.split_once("..").expect("contains ..");
                let (ia, ib) = match (d_index(a), d_index(b)) {
                    (Some(x), Some(y)) if x <= y => (x, y),
                    _ => return Err(ConfigError::UnknownFamily(item.to_string())),
                };
                // The end of a range includes every sub-item of its base name.
                let base_b = b.split('_').next().unwrap_or(b);
                let last = if b.contains('_') {
                    ib
                } else {
                    D_FAMILIES.iter().rposition(|f| f.split('_').next() == Some(base_b)).unwrap_or(ib)
                };
                D_FAMILIES[ia..=last].to_vec()
            }
            _ => match all.iter().find(|f| **f == item) {
                Some(f) => vec![*f],
                None => return Err(ConfigError::UnknownFamily(item.to_string())),
            },
        };
        for p in picked {
            if !out.iter().any(|x| x == p) {
                out.push(p.to_string());
            }
        }
    }
    if out.is_empty() {
        return Err(ConfigError::UnknownFamily(list.join(",")));
    }
    out.sort_by_key(|f| all.iter().position(|g| g == f));
    Ok(out)
}

/// Deterministic sample points `(u, v)` with `r = u^4`, `s = v^4`:
/// positive rationals with small numerators and denominators, `u ≠ v`,
/// neither equal to 1.
pub fn sample_points(seed: u64, count: usize) -> Vec<(Rat, Rat)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let mut draw = || Rat::new(rng.gen_range(1..=7), rng.gen_range(1..=7));
        let (u, v) = (draw(), draw());
        if u == v || u.is_one() || v.is_one() || out.iter().any(|(a, b)| *a == u && *b == v) {
            continue;
        }
        out.push((u, v));
    }
    out
}

/// Runs one family on a checker.
pub fn run_family<F: Field>(family: &str, ch: &mut Checker<F>, cfg: &SuiteConfig) -> VerificationReport {
    if D_FAMILIES.contains(&family) {
        return check_d(family, ch, &cfg.ranges);
    }
    if FIELD_FAMILIES.contains(&family) {
        return check_field_relation(family, ch, cfg.field_order);
    }
    if X_FAMILIES.contains(&family) {
        return check_x(family, ch);
    }
    let n = ch.root_system().rank();
    let mut rep = VerificationReport::new(family, BTreeMap::new());
    match family {
        "5.5" => {
            for i in 1..=n {
                for j in 1..=n {
                    for si in Sign::both() {
                        for sj in Sign::both() {
                            rep.instances.extend(check_ope(ch, i, j, (si, sj), (-1, cfg.field_order)));
                        }
                    }
                }
            }
        }
        "5.7" => {
            for i in 1..=n {
                rep.instances.extend(check_normal_ordering_phi(ch, i, cfg.field_order + 1));
                rep.instances.extend(check_normal_ordering_psi(ch, i, cfg.field_order + 1, PsiShift::Plus));
            }
        }
        other => panic!("unexpanded family {other}"),
    }
    rep
}

fn run_with_field<F: Field + Send + Sync>(
    rs: &Arc<RootSystem>,
    field: F,
    cfg: &SuiteConfig,
    families: &[String],
) -> Vec<VerificationReport>
where
    F::E: Send + Sync,
{
    let engine = Arc::new(VertexEngine::new(rs.clone(), field));
    let job = |fam: &String| {
        let mut ch = Checker::new(engine.clone(), cfg.truncation);
        log::info!("running {fam}");
        run_family(fam, &mut ch, cfg)
    };
    if cfg.jobs <= 1 {
        return families.iter().map(job).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build().expect("thread pool");
    pool.install(|| families.par_iter().map(job).collect())
}

/// Combines the reports of several sample points instance by instance:
/// an instance fails if it fails at any point, passes if it passes at some
/// point and fails at none, and is skipped otherwise.
fn merge_points(per_point: Vec<Vec<VerificationReport>>) -> Vec<InstanceReport> {
    let mut merged: Vec<InstanceReport> = Vec::new();
    for (p, reports) in per_point.into_iter().enumerate() {
        let flat: Vec<InstanceReport> = reports.into_iter().flat_map(|r| r.instances).collect();
        if p == 0 {
            merged = flat;
            continue;
        }
        for (m, x) in merged.iter_mut().zip(flat) {
            debug_assert_eq!(m.id, x.id);
            m.tested_states += x.tested_states;
            match (&m.status, &x.status) {
                (Status::Fail, _) => {}
                (_, Status::Fail) => {
                    m.status = Status::Fail;
                    m.counterexample = x.counterexample;
                    m.reason = Some(format!("fails at sample point {}", p + 1));
                }
                (Status::Skipped, Status::Pass) => {
                    m.status = Status::Pass;
                    m.reason = None;
                }
                _ => {}
            }
        }
    }
    merged
}

/// Runs the configured families and returns a deterministic report.
pub fn run_suite(cfg: &SuiteConfig) -> Result<VerificationReport, ConfigError> {
    let families = cfg.validate()?;
    let rs = Arc::new(RootSystem::build(cfg.lie_type()?).map_err(|e| ConfigError::Unsupported {
        family: cfg.family.clone(),
        rank: cfg.rank,
        reason: e.to_string(),
    })?);
    let mut report = VerificationReport::new("relations", cfg.summary());
    match cfg.mode {
        Mode::Exact => {
            for r in run_with_field(&rs, ExactField, cfg, &families) {
                report.extend(r);
            }
        }
        Mode::Sampled => {
            let mut per_point = Vec::new();
            for (u, v) in sample_points(cfg.seed, cfg.points) {
                let field = PointField::new(u, v)
                    .map_err(|e| ConfigError::Invalid { name: "points", reason: e.to_string() })?;
                per_point.push(run_with_field(&rs, field, cfg, &families));
            }
            report.instances = merge_points(per_point);
        }
    }
    Ok(report)
}

/// Instance ids whose status differs between two reports, or that occur in
/// only one of them.
pub fn status_differences(a: &VerificationReport, b: &VerificationReport) -> Vec<String> {
    let index = |r: &VerificationReport| -> BTreeMap<String, Status> {
        r.instances.iter().map(|i| (i.id.clone(), i.status.clone())).collect()
    };
    let (ia, ib) = (index(a), index(b));
    let mut out = Vec::new();
    for (id, s) in &ia {
        match ib.get(id) {
            Some(t) if t == s => {}
            _ => out.push(id.clone()),
        }
    }
    out.extend(ib.keys().filter(|id| !ia.contains_key(*id)).cloned());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fams(s: &str) -> Vec<String> {
        expand_families(&[s.to_string()]).unwrap()
    }

    #[test]
    fn family_ranges_and_groups_expand() {
        assert_eq!(fams("D1..D9"), D_FAMILIES.to_vec());
        assert_eq!(fams("D6"), vec!["D6_1", "D6_2"]);
        assert_eq!(fams("D8,D2,D2"), vec!["D2", "D8"]);
        assert_eq!(fams("D5..D6"), vec!["D5", "D6_1", "D6_2"]);
        assert_eq!(fams("lemmas"), vec!["lemmas"]);
        assert_eq!(fams("chevalley"), vec!["X1", "X2", "X3", "X4", "X5"]);
        assert!(fams("all").len() > 20);
        assert!(matches!(expand_families(&["D10".into()]), Err(ConfigError::UnknownFamily(_))));
        assert!(matches!(expand_families(&["D9..D1".into()]), Err(ConfigError::UnknownFamily(_))));
    }

    #[test]
    fn e7_is_a_config_error() {
        let cfg = SuiteConfig { family: "E".into(), rank: 7, ..Default::default() };
        assert!(matches!(run_suite(&cfg), Err(ConfigError::Unsupported { .. })));
        let cfg = SuiteConfig { family: "B".into(), ..Default::default() };
        assert!(matches!(run_suite(&cfg), Err(ConfigError::UnknownType(_))));
    }

    #[test]
    fn config_json_round_trip_with_defaults() {
        let cfg = SuiteConfig::from_json(r#"{"type": "D", "rank": 4, "families": ["lemmas"]}"#).unwrap();
        assert_eq!(cfg.rank, 4);
        assert_eq!(cfg.truncation, Truncation::default());
        assert_eq!(SuiteConfig::from_json(&cfg.to_json()).unwrap(), cfg);
        assert!(SuiteConfig::from_json(r#"{"rnak": 4}"#).is_err());
    }

    #[test]
    fn sample_points_are_deterministic_and_distinct() {
        let a = sample_points(7, 5);
        assert_eq!(a, sample_points(7, 5));
        assert_ne!(a, sample_points(8, 5));
        for (u, v) in &a {
            assert_ne!(u, v);
        }
    }

    #[test]
    fn sampled_mode_agrees_with_exact_mode() {
        let base = SuiteConfig { families: vec!["D5,D8".into()], ..Default::default() };
        let exact = run_suite(&base).unwrap();
        let sampled = run_suite(&SuiteConfig { mode: Mode::Sampled, points: 2, seed: 3, ..base }).unwrap();
        assert_eq!(exact.failures(), 0);
        assert!(status_differences(&exact, &sampled).is_empty());
    }

    #[test]
    fn report_does_not_depend_on_jobs() {
        let base = SuiteConfig { families: vec!["D2,D4,D5".into()], ..Default::default() };
        let one = run_suite(&base).unwrap().to_json();
        let two = run_suite(&SuiteConfig { jobs: 2, ..base }).unwrap().to_json();
        assert_eq!(one, two);
    }
}
