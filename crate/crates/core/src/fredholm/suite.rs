//! Randomized verification suites for the Fredholm-pair statements.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use super::random::{
    instance_rng, random_adjoint_perturbation, random_any_rank, random_complex, random_extension,
    random_free_perturbation, random_invertible, random_pair,
};
use super::{
    check_additivity, euler_via_pair, fredholm_index, fredholm_index_by_ranks, perturbed_index, reduced_pair,
    FredholmPairData, SuperSpace,
};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::linalg::ExactMatrix;

const MAX_DIM: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteKind {
    Definition,
    Euler,
    Reduction,
    Additivity,
    Perturbation,
}

impl SuiteKind {
    pub const ALL: [SuiteKind; 5] =
        [SuiteKind::Definition, SuiteKind::Euler, SuiteKind::Reduction, SuiteKind::Additivity, SuiteKind::Perturbation];

    pub fn name(self) -> &'static str {
        match self {
            SuiteKind::Definition => "definition",
            SuiteKind::Euler => "euler",
            SuiteKind::Reduction => "reduction",
            SuiteKind::Additivity => "additivity",
            SuiteKind::Perturbation => "perturbation",
        }
    }

    pub fn default_instances(self) -> u32 {
        match self {
            SuiteKind::Euler => 200,
            SuiteKind::Perturbation => 50,
            _ => 100,
        }
    }

    fn tag(self) -> u32 {
        self as u32 + 1
    }
}

impl fmt::Display for SuiteKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SuiteKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SuiteKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "detail", rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail(String),
    /// A hypothesis of the statement does not hold for this instance.
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceFailure {
    pub instance: u32,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: SuiteKind,
    pub seed: u64,
    pub instances: u32,
    pub passed: u32,
    pub failed: u32,
    pub skipped: u32,
    pub failures: Vec<InstanceFailure>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

/// An explicit (V, d, ∂) triple added to the perturbation suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PerturbationInstance {
    pub label: String,
    pub space: SuperSpace,
    pub d: ExactMatrix,
    pub del: ExactMatrix,
}

fn expect(ok: bool, detail: impl FnOnce() -> String) -> Outcome {
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail(detail())
    }
}

fn from_result(r: Result<Outcome>) -> Outcome {
    r.unwrap_or_else(|e| Outcome::Fail(e.to_string()))
}

fn definition_instance(seed: u64, i: u32) -> Result<Outcome> {
    let mut rng = instance_rng(seed, SuiteKind::Definition.tag(), i);
    let mut p = random_pair(&mut rng, MAX_DIM);
    if i % 2 == 0 {
        p.t = ExactMatrix::zeros(p.dim_x(), p.dim_y());
    }
    let direct = fredholm_index(&p)?;
    let ranks = fredholm_index_by_ranks(&p)?;
    if direct != ranks {
        return Ok(Outcome::Fail(format!("definition {direct:?} vs rank formula {ranks:?}")));
    }
    if p.t.is_zero() {
        let expected = p.s.nullity() as i64 - (p.dim_y() - p.s.rank()) as i64;
        if direct.index != expected {
            return Ok(Outcome::Fail(format!("T = 0 gives {} but nullity − corank is {expected}", direct.index)));
        }
    }
    let px = random_invertible(&mut rng, p.dim_x());
    let py = random_invertible(&mut rng, p.dim_y());
    let moved = FredholmPairData {
        s: &(&py * &p.s) * &px.inverse().expect("invertible"),
        t: &(&px * &p.t) * &py.inverse().expect("invertible"),
    };
    let moved_index = fredholm_index(&moved)?;
    Ok(expect(moved_index == direct, || format!("basis change moved {direct:?} to {moved_index:?}")))
}

fn euler_instance(seed: u64, i: u32) -> Result<Outcome> {
    let mut rng = instance_rng(seed, SuiteKind::Euler.tag(), i);
    let len = rng.random_range(2..=5);
    let c = random_complex(&mut rng, len, MAX_DIM);
    let r = euler_via_pair(&c)?;
    Ok(expect(r.holds, || format!("{r:?}")))
}

fn reduction_instance(seed: u64, i: u32) -> Result<Outcome> {
    let mut rng = instance_rng(seed, SuiteKind::Reduction.tag(), i);
    let mut p = random_pair(&mut rng, MAX_DIM);
    if i % 3 == 0 {
        // Force Im(ST), Im(TS) to be nonzero more often.
        let k = rng.random_range(1..=MAX_DIM);
        let (x, y) = (p.dim_x(), p.dim_y());
        if x > 0 && y > 0 {
            p.s = random_any_rank(&mut rng, y, x.max(k).min(x));
            p.t = random_any_rank(&mut rng, x, y);
        }
    }
    let r = reduced_pair(&p)?;
    Ok(expect(r.holds, || {
        format!("ind {} reduced {} dims {}", r.index, r.reduced_index, r.quotient_difference)
    }))
}

fn additivity_instance(seed: u64, i: u32) -> Result<Outcome> {
    let mut rng = instance_rng(seed, SuiteKind::Additivity.tag(), i);
    let dg = random_extension(&mut rng, MAX_DIM / 2);
    let r = check_additivity(&dg)?;
    Ok(expect(r.holds, || format!("indices {:?}", r.indices)))
}

fn perturbation_check(v: SuperSpace, d: &ExactMatrix, del: &ExactMatrix, hypothesis_may_fail: bool) -> Outcome {
    match perturbed_index(v, d, del) {
        Ok(r) => expect(r.holds, || format!("ind ℱ = {} but ind d = {}", r.index_perturbed, r.index_unperturbed)),
        Err(Error::SemisimplicityFails) if hypothesis_may_fail => {
            Outcome::Skipped("ker ℱ² ∩ Im ℱ² ≠ 0".into())
        }
        Err(e) => Outcome::Fail(e.to_string()),
    }
}

fn perturbation_instance(seed: u64, i: u32) -> Outcome {
    let mut rng = instance_rng(seed, SuiteKind::Perturbation.tag(), i);
    if i % 5 == 4 {
        let (v, d, del) = random_free_perturbation(&mut rng, MAX_DIM / 2);
        perturbation_check(v, &d, &del, true)
    } else {
        let (v, d, del) = random_adjoint_perturbation(&mut rng, MAX_DIM / 2);
        perturbation_check(v, &d, &del, false)
    }
}

fn summarize(suite: SuiteKind, seed: u64, outcomes: Vec<(String, Outcome)>) -> SuiteReport {
    let mut report = SuiteReport {
        suite,
        seed,
        instances: outcomes.len() as u32,
        passed: 0,
        failed: 0,
        skipped: 0,
        failures: Vec::new(),
    };
    for (i, (label, o)) in outcomes.into_iter().enumerate() {
        match o {
            Outcome::Pass => report.passed += 1,
            Outcome::Skipped(_) => report.skipped += 1,
            Outcome::Fail(detail) => {
                report.failed += 1;
                report.failures.push(InstanceFailure { instance: i as u32, detail: format!("{label}: {detail}") });
            }
        }
    }
    report
}

/// Runs `count` random instances of `suite`; `extra` triples are appended to
/// the perturbation suite and ignored otherwise.
pub fn run_suite(
    suite: SuiteKind,
    seed: u64,
    count: u32,
    extra: &[PerturbationInstance],
    exec: Execution,
) -> SuiteReport {
    let ids: Vec<u32> = (0..count).collect();
    let mut outcomes = exec::map(exec, &ids, |&i| {
        let o = match suite {
            SuiteKind::Definition => from_result(definition_instance(seed, i)),
            SuiteKind::Euler => from_result(euler_instance(seed, i)),
            SuiteKind::Reduction => from_result(reduction_instance(seed, i)),
            SuiteKind::Additivity => from_result(additivity_instance(seed, i)),
            SuiteKind::Perturbation => perturbation_instance(seed, i),
        };
        (format!("random #{i}"), o)
    });
    if suite == SuiteKind::Perturbation {
        outcomes.extend(exec::map(exec, extra, |x| (x.label.clone(), perturbation_check(x.space, &x.d, &x.del, false))));
    }
    summarize(suite, seed, outcomes)
}
