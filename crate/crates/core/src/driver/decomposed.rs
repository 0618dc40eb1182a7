use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::Engine;
use crate::encoder::{build_cnf, decompose, RunRule, Subproblem};
use crate::error::{Error, Result};
use crate::satcore::Status;
use crate::spec::ProblemSpec;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SubproblemStatus {
    Pending,
    Sat,
    Unsat,
    ResourceLimit { message: String },
    Failed { message: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubproblemRecord {
    pub subproblem: Subproblem,
    pub label: String,
    #[serde(flatten)]
    pub status: SubproblemStatus,
    pub wall_ms: u64,
    pub conflicts: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Aggregate {
    Sat,
    Unsat,
    /// Some subproblem is pending or hit a limit and none is Sat.
    Incomplete,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    /// Parameters in command-line form.
    pub spec: String,
    pub n: usize,
    pub prefix_len: usize,
    pub rules: Vec<RunRule>,
    pub engine: String,
    pub seed: u64,
    pub tool_version: String,
    pub subproblems: Vec<SubproblemRecord>,
    pub aggregate: Aggregate,
}

impl RunManifest {
    fn aggregate_of(records: &[SubproblemRecord]) -> Aggregate {
        if records.iter().any(|r| r.status == SubproblemStatus::Sat) {
            Aggregate::Sat
        } else if records.iter().all(|r| r.status == SubproblemStatus::Unsat) {
            Aggregate::Unsat
        } else {
            Aggregate::Incomplete
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifests always serialize")
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

fn seed_of(engine: &Engine) -> u64 {
    match engine {
        Engine::Embedded(c) => c.seed,
        Engine::External { .. } => 0,
    }
}

/// Decide every subproblem of the decomposition on `workers` threads.
/// Subproblems already decided in `resume` are kept as they are; with
/// `stop_on_sat` the remaining work is skipped after the first model.
pub fn run_decomposed(
    spec: &ProblemSpec,
    prefix_len: usize,
    rules: &[RunRule],
    workers: usize,
    engine: &Engine,
    resume: Option<&RunManifest>,
    stop_on_sat: bool,
) -> Result<RunManifest> {
    let subs = decompose(spec, prefix_len, rules)?;
    let enc = build_cnf(spec)?;
    let records: Vec<SubproblemRecord> = subs
        .into_iter()
        .map(|s| {
            let prior = resume.and_then(|m| {
                m.subproblems
                    .iter()
                    .find(|r| r.subproblem.prefix == s.prefix)
                    .filter(|r| matches!(r.status, SubproblemStatus::Sat | SubproblemStatus::Unsat))
            });
            match prior {
                Some(r) => SubproblemRecord { subproblem: s, ..r.clone() },
                None => SubproblemRecord {
                    label: s.label(),
                    subproblem: s,
                    status: SubproblemStatus::Pending,
                    wall_ms: 0,
                    conflicts: 0,
                },
            }
        })
        .collect();
    let todo: Vec<usize> = (0..records.len()).filter(|&i| records[i].status == SubproblemStatus::Pending).collect();
    let records = Mutex::new(records);
    let next = AtomicUsize::new(0);
    let found_sat = std::sync::atomic::AtomicBool::new(false);
    std::thread::scope(|scope| {
        for _ in 0..workers.max(1) {
            scope.spawn(|| loop {
                if stop_on_sat && found_sat.load(Ordering::Relaxed) {
                    return;
                }
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&i) = todo.get(k) else { return };
                let sub = records.lock().unwrap()[i].subproblem.clone();
                let start = Instant::now();
                let res = engine.solve(&enc.formula, &sub.assumptions(&enc));
                let (status, conflicts) = match res {
                    Ok(r) if r.status == Status::Sat => {
                        found_sat.store(true, Ordering::Relaxed);
                        (SubproblemStatus::Sat, r.stats.conflicts)
                    }
                    Ok(r) => (SubproblemStatus::Unsat, r.stats.conflicts),
                    Err(Error::ResourceLimit(message)) => (SubproblemStatus::ResourceLimit { message }, 0),
                    Err(e) => (SubproblemStatus::Failed { message: e.to_string() }, 0),
                };
                let mut recs = records.lock().unwrap();
                recs[i].status = status;
                recs[i].wall_ms = start.elapsed().as_millis() as u64;
                recs[i].conflicts = conflicts;
            });
        }
    });
    let subproblems = records.into_inner().unwrap();
    Ok(RunManifest {
        spec: spec_params(spec),
        n: spec.n,
        prefix_len,
        rules: rules.to_vec(),
        engine: engine.name(),
        seed: seed_of(engine),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        aggregate: RunManifest::aggregate_of(&subproblems),
        subproblems,
    })
}

/// Command-line form of a spec's constraints.
pub(crate) fn spec_params(spec: &ProblemSpec) -> String {
    let mut parts = vec![format!("n={}", spec.n)];
    for c in &spec.constraints {
        parts.push(format!("{}@{}", c.kind, c.color + 1));
    }
    if !spec.sb {
        parts.push("sb=off".into());
    }
    parts.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::driver::decide;
    use crate::spec::{Constraint, Kind};

    fn tr0(n: usize) -> ProblemSpec {
        ProblemSpec::points(
            n,
            vec![
                Constraint::new(0, Kind::Triangle { limit: Some(0) }),
                Constraint::new(1, Kind::Triangle { limit: Some(0) }),
            ],
        )
    }

    #[test]
    fn aggregate_matches_undecomposed_verdict() {
        for n in 4..=6 {
            let spec = tr0(n);
            let direct = decide(&spec, &Engine::default()).unwrap().status;
            for len in [1, 3] {
                let m =
                    run_decomposed(&spec, len, &RunRule::defaults(&spec), 2, &Engine::default(), None, false).unwrap();
                let expect = if direct == Status::Sat { Aggregate::Sat } else { Aggregate::Unsat };
                assert_eq!(m.aggregate, expect, "n={n} prefix={len}");
            }
        }
    }

    #[test]
    fn manifest_round_trips_and_resumes() {
        let spec = tr0(6);
        let m = run_decomposed(&spec, 2, &[], 1, &Engine::default(), None, false).unwrap();
        let back = RunManifest::parse(&m.to_json()).unwrap();
        assert_eq!(back, m);
        let again = run_decomposed(&spec, 2, &[], 1, &Engine::default(), Some(&back), false).unwrap();
        assert_eq!(again.subproblems, m.subproblems);
    }
}
