use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bath::{
    coherence_comparison, coupling_sector, evolve_joint_final, magnus_terms, CoherenceRequest, JointModel,
};
use crate::control::{control_unitary_at, trajectory, ControlSchedule, ControlSegment, Trajectory};
use crate::decoupling::{
    build_cayley_graph, check_decoupling, eulerian_cycle, eulerian_schedule, robustness_distance, AverageEntry,
    AverageReport, CheckOptions, DecouplingGroup,
};
use crate::error::{Error, Result};
use crate::error_model::ErrorVector;
use crate::lie_algebra::GeneratorBasis;
use crate::linalg::{matrix_to_json, JsonMatrix};
use crate::scenario::format_value;
use crate::scenario::schema::{BasisSpec, ErrorSpec, ResolvedScenario, Scenario, SegmentSpec, SweepSpec};

/// Environment variable that overrides every other output-directory choice.
pub const OUT_DIR_ENV: &str = "CDD_OUT_DIR";

/// Largest allowed deviation of a watched trajectory from its initial vector.
pub const WATCH_TOL: f64 = 1e-9;

/// Coherence defaults when a scenario has a bath but no coherence block.
const DEFAULT_COHERENCE_CYCLES: usize = 20;
const DEFAULT_STEPS_PER_CYCLE: f64 = 512.0;

const MAGNUS_QUADRATURE_STEPS: usize = 2048;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub steps_per_segment: Option<usize>,
    pub tolerance: Option<f64>,
    pub sweep: Option<SweepSpec>,
    /// Skip the decoupling verdict in the exit status.
    pub no_check: bool,
    /// Takes precedence over the scenario, but not over `CDD_OUT_DIR`.
    pub out_dir: Option<PathBuf>,
}

/// Process exit status contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Decoupled,
    NotDecoupled,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Decoupled => 0,
            Verdict::NotDecoupled => 1,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WatchEntry {
    pub gamma: String,
    pub max_deviation: f64,
    pub invariant: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EntryJson<'a> {
    #[serde(flatten)]
    pub entry: &'a AverageEntry,
    pub tolerance: f64,
    pub cyclic: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportJson<'a> {
    pub name: &'a str,
    pub basis: String,
    pub cycle_time: f64,
    pub cyclic: bool,
    pub cyclicity_deviation: f64,
    pub tolerance: f64,
    pub decoupled: bool,
    pub entries: Vec<EntryJson<'a>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub watch: Vec<WatchEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub out_dir: PathBuf,
    pub report: AverageReport,
    pub watch: Vec<WatchEntry>,
    pub artifacts: Vec<PathBuf>,
    pub verdict: Verdict,
}

impl RunOutcome {
    pub fn decoupled(&self) -> bool {
        self.report.decoupled && self.watch.iter().all(|w| w.invariant)
    }
}

pub fn output_dir(scenario: &Scenario, explicit: Option<&Path>) -> PathBuf {
    if let Some(dir) = std::env::var_os(OUT_DIR_ENV).filter(|d| !d.is_empty()) {
        return PathBuf::from(dir);
    }
    if let Some(dir) = explicit {
        return dir.to_path_buf();
    }
    scenario
        .output_dir
        .clone()
        .unwrap_or_else(|| PathBuf::from("out").join(&scenario.name))
}

fn file_label(gamma: &str) -> String {
    gamma
        .chars()
        .map(|ch| {
            if ch.is_ascii_alphanumeric() || ch == '-' {
                ch
            } else {
                '_'
            }
        })
        .collect()
}

fn write(dir: &Path, name: &str, contents: &str, artifacts: &mut Vec<PathBuf>) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents)?;
    artifacts.push(path);
    Ok(())
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

pub fn trajectory_csv(traj: &Trajectory) -> String {
    let n = traj.initial().len();
    let mut out = String::from("t");
    for i in 1..=n {
        out.push_str(&format!(",s{i}"));
    }
    out.push('\n');
    for (t, v) in traj.times.iter().zip(&traj.vectors) {
        out.push_str(&format_value(*t));
        for x in v.iter() {
            out.push(',');
            out.push_str(&format_value(*x));
        }
        out.push('\n');
    }
    out
}

fn watch_entry(
    v: &ErrorVector,
    schedule: &ControlSchedule,
    basis: &GeneratorBasis,
    steps: usize,
) -> Result<WatchEntry> {
    let traj = trajectory(v, schedule, basis, steps)?;
    let s0 = traj.initial().clone();
    let max_deviation = traj.vectors.iter().map(|s| (s - &s0).norm()).fold(0.0, f64::max);
    Ok(WatchEntry {
        gamma: v.gamma.clone(),
        max_deviation,
        invariant: max_deviation <= WATCH_TOL,
    })
}

/// Distance of every swept report from the unscaled one, one row per point in sweep order.
pub fn sweep_csv(
    r: &ResolvedScenario,
    sweep: &SweepSpec,
    options: &CheckOptions,
    ideal: &AverageReport,
) -> Result<String> {
    let mut out = String::from("epsilon,amplitude_factor");
    for v in &r.vectors {
        out.push_str(&format!(",d_{}", v.gamma));
    }
    out.push('\n');
    for value in sweep.values() {
        let (eps, factor) = sweep.point(value);
        let actual = check_decoupling(&r.vectors, &r.schedule.scaled(factor), &r.basis, options)?;
        let d = robustness_distance(ideal, &actual)?;
        out.push_str(&format!("{},{}", format_value(eps), format_value(factor)));
        for v in &r.vectors {
            out.push(',');
            out.push_str(&format_value(d[&v.gamma]));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Enough steps per cycle for the joint step check on the example models.
fn default_coherence(schedule: &ControlSchedule) -> CoherenceRequest {
    CoherenceRequest {
        n_cycles: DEFAULT_COHERENCE_CYCLES,
        period: None,
        dt: schedule.cycle_time() / DEFAULT_STEPS_PER_CYCLE,
        system_state: None,
        bath_state: None,
    }
}

fn coherence_csv(joint: &JointModel, r: &ResolvedScenario) -> Result<String> {
    let request = r.coherence.clone().unwrap_or_else(|| default_coherence(&r.schedule));
    Ok(coherence_comparison(joint, &r.schedule, &r.basis, &request)?.to_csv())
}

/// Writes trajectories, the average report and optional sweep/coherence artifacts.
pub fn run_scenario(scenario: &Scenario, options: &RunOptions) -> Result<RunOutcome> {
    let r = scenario.resolve()?;
    let check = CheckOptions {
        tolerance: options.tolerance.unwrap_or(r.tolerance),
        steps_per_segment: options.steps_per_segment.unwrap_or(r.steps_per_segment),
        ..CheckOptions::default()
    };
    let sweep = options.sweep.or(r.sweep);
    if let Some(s) = &sweep {
        s.validate()?;
    }
    let report = check_decoupling(&r.vectors, &r.schedule, &r.basis, &check)?;
    let watch = r
        .watch
        .iter()
        .map(|v| watch_entry(v, &r.schedule, &r.basis, check.steps_per_segment))
        .collect::<Result<Vec<_>>>()?;

    let dir = output_dir(scenario, options.out_dir.as_deref());
    fs::create_dir_all(&dir)?;
    let mut artifacts = Vec::new();
    for v in &r.vectors {
        let traj = trajectory(v, &r.schedule, &r.basis, check.steps_per_segment)?;
        write(
            &dir,
            &format!("trajectory_{}.csv", file_label(&v.gamma)),
            &trajectory_csv(&traj),
            &mut artifacts,
        )?;
    }
    let json = ReportJson {
        name: &r.name,
        basis: r.basis.kind().to_string(),
        cycle_time: report.cycle_time,
        cyclic: report.cyclic,
        cyclicity_deviation: report.cyclicity_deviation,
        tolerance: report.tolerance,
        decoupled: report.decoupled && watch.iter().all(|w| w.invariant),
        entries: report
            .entries
            .iter()
            .map(|entry| EntryJson {
                entry,
                tolerance: report.tolerance,
                cyclic: report.cyclic,
            })
            .collect(),
        watch: watch.clone(),
        notes: report.notes.clone(),
    };
    write(&dir, "report.json", &to_json(&json)?, &mut artifacts)?;
    if let Some(s) = &sweep {
        write(&dir, "sweep.csv", &sweep_csv(&r, s, &check, &report)?, &mut artifacts)?;
    }
    if let Some(joint) = &r.joint {
        write(&dir, "coherence.csv", &coherence_csv(joint, &r)?, &mut artifacts)?;
    }

    let outcome_decoupled = json.decoupled;
    Ok(RunOutcome {
        out_dir: dir,
        report,
        watch,
        artifacts,
        verdict: if outcome_decoupled || options.no_check {
            Verdict::Decoupled
        } else {
            Verdict::NotDecoupled
        },
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SectorJson {
    pub system: Vec<f64>,
    pub couplings: BTreeMap<String, Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MagnusJson {
    pub name: String,
    pub cycle_time: f64,
    pub h0_bar: JsonMatrix,
    pub h1_bar: JsonMatrix,
    /// Coupling sector of `H̄⁰` in the generator basis.
    pub h0_sector: SectorJson,
    /// `‖exp(−i(H̄⁰ + H̄¹)T_c) − U_c(T_c)† U(T_c)‖`.
    pub truncation_residual: f64,
}

#[derive(Debug, Clone)]
pub struct SimulateOutcome {
    pub out_dir: PathBuf,
    pub artifacts: Vec<PathBuf>,
}

/// Bath simulation: coherence comparison and the average-Hamiltonian summary.
pub fn simulate_scenario(scenario: &Scenario, out_dir: Option<&Path>) -> Result<SimulateOutcome> {
    let r = scenario.resolve()?;
    let joint = r
        .joint
        .as_ref()
        .ok_or_else(|| Error::InvalidScenario("simulate needs a `bath` block".into()))?;
    let request = r.coherence.clone().unwrap_or_else(|| default_coherence(&r.schedule));
    let comparison = coherence_comparison(joint, &r.schedule, &r.basis, &request)?;

    let terms = magnus_terms(joint, &r.schedule, &r.basis, MAGNUS_QUADRATURE_STEPS)?;
    let t = r.schedule.cycle_time();
    let u = evolve_joint_final(joint, Some(&r.schedule), &r.basis, t, request.dt)?;
    let uc = joint.on_system(&control_unitary_at(&r.schedule, &r.basis, t)?);
    let residual = (terms.propagator() - uc.adjoint() * u).norm();
    let sector = coupling_sector(joint, &r.basis, &terms.h0_bar)?;
    let summary = MagnusJson {
        name: r.name.clone(),
        cycle_time: t,
        h0_bar: matrix_to_json(&terms.h0_bar),
        h1_bar: matrix_to_json(&terms.h1_bar),
        h0_sector: SectorJson {
            system: sector.system,
            couplings: sector.couplings,
        },
        truncation_residual: residual,
    };

    let dir = output_dir(scenario, out_dir);
    fs::create_dir_all(&dir)?;
    let mut artifacts = Vec::new();
    write(&dir, "coherence.csv", &comparison.to_csv(), &mut artifacts)?;
    write(&dir, "magnus.json", &to_json(&summary)?, &mut artifacts)?;
    Ok(SimulateOutcome {
        out_dir: dir,
        artifacts,
    })
}

/// Pulse designs for the `euler` subcommand, one entry per generating-set label.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EulerRequest {
    pub basis: BasisSpec,
    pub generating_set: Vec<String>,
    #[serde(default = "identity_label")]
    pub start: String,
    /// Explicit cycle to validate; built with Hierholzer's algorithm when absent.
    #[serde(default)]
    pub cycle: Option<Vec<String>>,
    pub pulses: BTreeMap<String, Vec<SegmentSpec>>,
    /// Error operators averaged over the resulting schedule.
    #[serde(default)]
    pub errors: Vec<ErrorSpec>,
    #[serde(default)]
    pub steps_per_segment: Option<usize>,
}

fn identity_label() -> String {
    "e".to_string()
}

#[derive(Debug, Clone, Serialize)]
pub struct EulerReport {
    pub cycle: Vec<String>,
    pub length: usize,
    pub group_order: usize,
    pub generating_set_size: usize,
    pub delta_t: f64,
    pub cycle_time: f64,
    pub max_boundary_deviation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub average: Option<ReportSummary>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportSummary {
    pub decoupled: bool,
    pub cyclic: bool,
    pub entries: Vec<AverageEntry>,
}

/// Builds and validates an Eulerian schedule; averages the optional errors over it.
pub fn run_euler(group: &DecouplingGroup, request: &EulerRequest) -> Result<(EulerReport, ControlSchedule)> {
    let basis = GeneratorBasis::new(request.basis.0);
    let graph = build_cayley_graph(group, &request.generating_set)?;
    let cycle = match &request.cycle {
        Some(c) => c.clone(),
        None => eulerian_cycle(&graph, &request.start)?,
    };
    let mut designs = BTreeMap::new();
    for (label, segments) in &request.pulses {
        let segs = segments
            .iter()
            .map(|s| ControlSegment::new(s.direction.resolve(&basis)?, s.envelope.clone()))
            .collect::<Result<Vec<_>>>()?;
        designs.insert(label.clone(), segs);
    }
    let steps = request.steps_per_segment.unwrap_or(crate::control::DEFAULT_STEPS);
    let built = eulerian_schedule(group, &graph, &request.start, &cycle, &designs, &basis, steps)?;

    let average = if request.errors.is_empty() {
        None
    } else {
        let scenario = Scenario {
            name: "euler".into(),
            basis: request.basis,
            system: None,
            errors: request.errors.clone(),
            schedule: crate::scenario::schema::ScheduleSpec {
                segments: request.pulses.values().next().cloned().unwrap_or_default(),
            },
            tolerance: None,
            steps_per_segment: None,
            watch: Vec::new(),
            bath: None,
            coherence: None,
            sweep: None,
            output_dir: None,
        };
        let vectors = scenario.resolve()?.vectors;
        let options = CheckOptions {
            steps_per_segment: steps,
            ..CheckOptions::default()
        };
        let report = check_decoupling(&vectors, &built.schedule, &basis, &options)?;
        Some(ReportSummary {
            decoupled: report.decoupled,
            cyclic: report.cyclic,
            entries: report.entries,
        })
    };
    let report = EulerReport {
        length: built.cycle.len(),
        group_order: group.order(),
        generating_set_size: request.generating_set.len(),
        delta_t: built.delta_t,
        cycle_time: built.schedule.cycle_time(),
        max_boundary_deviation: built.boundary_deviations.iter().copied().fold(0.0, f64::max),
        cycle: built.cycle,
        average,
    };
    Ok((report, built.schedule))
}

pub fn euler_report_json(report: &EulerReport) -> Result<String> {
    to_json(report)
}
