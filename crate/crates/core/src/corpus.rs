//! Rack spec strings, the built-in corpus, and a bounded parallel runner
//! for the theorem checks over it.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::cochain::CoeffModule;
use crate::cohomology::{
    checks, cohomology_integral, cohomology_over_field, h2_via_group, invariant_cohomology, AbelianCoeff, Check,
    DegreeEntry,
};
use crate::error::{input, Error, Result};
use crate::linalg::{parse_rat, DenseMatrix, Ring};
use crate::perm::FiniteGroup;
use crate::rack::{make_semidirect, make_standard, RackFile, RackTable, StandardRack};

fn parse_size(s: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::Input(format!("expected a size, got {s:?}")))
}

/// `dihedral3`, `trivial2`, ... as used inside a semidirect spec.
fn parse_compact(s: &str) -> Result<RackTable> {
    let split = s
        .find(|c: char| c.is_ascii_digit())
        .ok_or_else(|| Error::Input(format!("bad base rack {s:?}")))?;
    parse_rack_spec(&format!("{}:{}", &s[..split], &s[split..]))
}

/// Parses `kind:param[,param]`:
///
/// - `trivial:n`, `dihedral:n`, `cyclic:n`
/// - `conj:G[,a,b,...]` for `G` in `S<n>`, `Z<n>`, `D<n>`, optionally on a
///   conjugation-closed subset of element indices
/// - `semidirect:base,p,t` for `base ⋉ F_p` with every element acting by `t`,
///   e.g. `semidirect:dihedral3,3,-1`
/// - `file:path.json`
pub fn parse_rack_spec(spec: &str) -> Result<RackTable> {
    let (kind, params) = spec
        .split_once(':')
        .ok_or_else(|| Error::Input(format!("rack spec {spec:?} is not of the form kind:param")))?;
    let parts: Vec<&str> = params.split(',').map(str::trim).collect();
    let one = || -> Result<usize> {
        match parts.as_slice() {
            [n] => parse_size(n),
            _ => input(format!("{kind} takes exactly one size parameter")),
        }
    };
    match kind {
        "trivial" => make_standard(&StandardRack::Trivial(one()?)),
        "dihedral" => make_standard(&StandardRack::Dihedral(one()?)),
        "cyclic" => make_standard(&StandardRack::Cyclic(one()?)),
        "conj" => {
            let group = FiniteGroup::by_name(parts[0])?;
            let subset = if parts.len() > 1 {
                Some(parts[1..].iter().map(|p| parse_size(p)).collect::<Result<Vec<_>>>()?)
            } else {
                None
            };
            make_standard(&StandardRack::Conjugation(group, subset))
        }
        "semidirect" => {
            let [base, p, t] = parts.as_slice() else {
                return input("semidirect takes base,p,t");
            };
            let base = parse_compact(base)?;
            let ring = Ring::prime_field(parse_size(p)? as u64)?;
            let t = ring.reduce(&parse_rat(t)?)?;
            let module = CoeffModule::same_operator(&base, DenseMatrix::scalar(ring, 1, &t)?)?;
            make_semidirect(&base, &module)
        }
        "file" => {
            let text = std::fs::read_to_string(params)
                .map_err(|e| Error::Input(format!("cannot read rack file {params:?}: {e}")))?;
            RackFile::parse(&text)?.rack()
        }
        _ => input(format!("unknown rack kind {kind:?}")),
    }
}

/// The table named by a spec, without requiring it to be a rack (files
/// are read as-is so that axiom failures can be reported).
pub fn raw_table(spec: &str) -> Result<Vec<Vec<usize>>> {
    match spec.strip_prefix("file:") {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Input(format!("cannot read rack file {path:?}: {e}")))?;
            Ok(RackFile::parse(&text)?.table)
        }
        None => Ok(parse_rack_spec(spec)?.table().to_vec()),
    }
}

/// The racks the theorem checks are run on.
pub fn builtin_corpus() -> Vec<String> {
    let mut specs: Vec<String> = Vec::new();
    specs.extend((1..=4).map(|n| format!("trivial:{n}")));
    specs.extend((3..=6).map(|n| format!("dihedral:{n}")));
    specs.extend((3..=5).map(|n| format!("cyclic:{n}")));
    specs.push("conj:S3".into());
    specs
}

/// Semidirect racks run alongside the corpus.
pub fn semidirect_examples() -> Vec<String> {
    vec!["semidirect:dihedral3,3,-1".into(), "semidirect:trivial2,2,1".into()]
}

/// Which checks the runner performs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusConfig {
    pub racks: Vec<String>,
    /// Highest degree for rational cohomology and the invariant comparison.
    pub max_degree: usize,
    /// Highest degree for integral cohomology.
    pub integral_degree: usize,
    pub h2_coefficients: Vec<AbelianCoeff>,
    pub workers: usize,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        let mut racks = builtin_corpus();
        racks.extend(semidirect_examples());
        CorpusConfig {
            racks,
            max_degree: 3,
            integral_degree: 2,
            h2_coefficients: vec![AbelianCoeff::Rationals, AbelianCoeff::Mod(2), AbelianCoeff::Mod(3)],
            workers: thread::available_parallelism().map_or(2, |n| n.get()).min(8),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum JobKind {
    Rational,
    Integral,
    Invariant,
    H2(AbelianCoeff),
}

/// What one job found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobResult {
    pub job: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub degrees: Vec<DegreeEntry>,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RackResult {
    pub rack: String,
    pub size: usize,
    pub orbit_count: usize,
    pub inner_group_order: usize,
    pub jobs: Vec<JobResult>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckTally {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub racks: Vec<RackResult>,
    pub summary: Vec<CheckTally>,
    pub failures: Vec<String>,
    pub errors: Vec<String>,
    /// Set when some job ran out of budget.
    pub resource_exhausted: bool,
}

impl CorpusReport {
    pub fn all_pass(&self) -> bool {
        self.failures.is_empty() && self.errors.is_empty()
    }
}

fn run_job(rack: &RackTable, kind: JobKind, config: &CorpusConfig, budget: &Budget) -> Result<JobResult> {
    let n = rack.size();
    Ok(match kind {
        JobKind::Rational => {
            let r = cohomology_over_field(
                rack,
                &CoeffModule::trivial(Ring::Rationals, 1, n)?,
                config.max_degree,
                budget,
            )?;
            JobResult {
                job: "rational".into(),
                degrees: r.degrees,
                checks: r.checks,
                error: None,
            }
        }
        JobKind::Integral => {
            let module = CoeffModule::trivial(Ring::Integers, 1, n)?;
            let r = cohomology_integral(rack, &module, config.integral_degree, budget)?;
            JobResult {
                job: "integral".into(),
                degrees: r.degrees,
                checks: r.checks,
                error: None,
            }
        }
        JobKind::Invariant => {
            let module = CoeffModule::trivial(Ring::Rationals, 1, n)?;
            let r = invariant_cohomology(rack, &module, config.max_degree, budget)?;
            JobResult {
                job: "invariant".into(),
                degrees: r.report.degrees,
                checks: r.report.checks,
                error: None,
            }
        }
        JobKind::H2(coeff) => {
            let c = h2_via_group(rack, coeff, budget)?;
            let detail = format!("direct {:?}, via group {:?}", c.direct, c.via_group);
            JobResult {
                job: format!("h2 {coeff}"),
                degrees: vec![],
                checks: vec![Check::with_detail(checks::H2_GROUP_MATCH, c.matches, detail)],
                error: None,
            }
        }
    })
}

/// Runs every (rack, check) job on at most `config.workers` threads.
/// The report lists racks and jobs in configuration order.
pub fn run_corpus(config: &CorpusConfig, budget: &Budget) -> Result<CorpusReport> {
    let racks: Vec<RackTable> = config.racks.iter().map(|s| parse_rack_spec(s)).collect::<Result<_>>()?;
    let invariants: Vec<_> = racks
        .iter()
        .map(|r| crate::cohomology::rack_invariants(r, budget))
        .collect::<Result<_>>()?;
    let mut kinds = vec![JobKind::Rational, JobKind::Integral, JobKind::Invariant];
    kinds.extend(config.h2_coefficients.iter().map(|&c| JobKind::H2(c)));
    let jobs: Vec<(usize, JobKind)> = (0..racks.len())
        .flat_map(|r| kinds.iter().map(move |&k| (r, k)))
        .collect();

    let results: Vec<Mutex<Option<std::result::Result<JobResult, Error>>>> =
        jobs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    thread::scope(|s| {
        for _ in 0..config.workers.max(1) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(r, kind)) = jobs.get(i) else { break };
                let out = run_job(&racks[r], kind, config, budget);
                *results[i].lock().expect("result slot") = Some(out);
            });
        }
    });

    let mut report = CorpusReport {
        racks: Vec::new(),
        summary: Vec::new(),
        failures: Vec::new(),
        errors: Vec::new(),
        resource_exhausted: false,
    };
    let mut tally: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    let mut slots = results
        .into_iter()
        .map(|m| m.into_inner().expect("result slot").expect("job ran"));
    for (r, spec) in config.racks.iter().enumerate() {
        let mut entry = RackResult {
            rack: spec.clone(),
            size: racks[r].size(),
            orbit_count: invariants[r].orbit_count,
            inner_group_order: invariants[r].inner_order,
            jobs: Vec::new(),
        };
        for kind in &kinds {
            let job = match slots.next().expect("one result per job") {
                Ok(job) => job,
                Err(e) => {
                    report.resource_exhausted |= matches!(e, Error::Resource(_));
                    report.errors.push(format!("{spec} {kind:?}: {e}"));
                    JobResult {
                        job: format!("{kind:?}"),
                        degrees: vec![],
                        checks: vec![],
                        error: Some(e.to_string()),
                    }
                }
            };
            for c in &job.checks {
                let t = tally.entry(c.name.clone()).or_default();
                if c.pass {
                    t.0 += 1;
                } else {
                    t.1 += 1;
                    let detail = c.detail.as_deref().map(|d| format!(" ({d})")).unwrap_or_default();
                    report.failures.push(format!("{spec} {}: {}{detail}", job.job, c.name));
                }
            }
            entry.jobs.push(job);
        }
        report.racks.push(entry);
    }
    report.summary = tally
        .into_iter()
        .map(|(name, (passed, failed))| CheckTally { name, passed, failed })
        .collect();
    Ok(report)
}
