mod common;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};

use cdd_core::bath::{
    assemble_joint, coherence_comparison, coupling_sector, evolve_joint_final, magnus_terms, BathModel, JointModel,
};
use cdd_core::control::{control_unitary_at, trajectory, ControlSchedule, ControlSegment};
use cdd_core::decoupling::{
    average_error_vector, build_cayley_graph, check_decoupling, group_average_vector, robustness_distance, symmetrize,
    validate_eulerian, CheckOptions, DecouplingGroup,
};
use cdd_core::error_model::{
    decompose, from_error_vector, operator_components, to_error_vector, CouplingTerm, ErrorVector,
};
use cdd_core::lie_algebra::{adjoint_rotation, reconcile_appendix, structure_constants, BasisKind, GeneratorBasis};
use cdd_core::linalg::{c, commutator, hermitian_norm, max_abs, pauli_x, pauli_y, pauli_z, trace, trace_product};
use cdd_core::scenario::{preset, run_scenario, RunOptions, WATCH_TOL};
use cdd_core::{CMatrix, RMatrix, RVector};
use common::{random_direction, random_schedule, random_unitary, rng, KINDS};

const BASIS_TOL: f64 = 1e-12;
const HOMOMORPHISM_TOL: f64 = 1e-10;
const ENDPOINT_TOL: f64 = 1e-8;
const DECOUPLED_TOL: f64 = 1e-6;
const ASYMMETRIC_MIN: f64 = 0.1;
const BANG_BANG_TOL: f64 = 1e-10;
const MAGNUS_TRIVIAL_TOL: f64 = 1e-10;
const SECTOR_TOL: f64 = 1e-8;
const MAGNUS_RATIO_MIN: f64 = 8.0;
const ROBUSTNESS_REL_TOL: f64 = 0.05;
const UNITARY_PAIRS: usize = 100;
const RANDOM_SCHEDULES: usize = 20;
const COHERENCE_CYCLES: usize = 20;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn basis_suite() -> Outcome {
    let mut worst = 0.0f64;
    for (kind, m) in KINDS.into_iter().zip([2.0, 2.0, 4.0]) {
        let b = GeneratorBasis::new(kind);
        ensure(b.normalization() == m, || format!("{kind}: M = {}", b.normalization()))?;
        let n = b.adjoint_dim();
        for (i, li) in b.generators().iter().enumerate() {
            worst = worst.max((li - li.adjoint()).norm()).max(trace(li).norm());
            for (j, lj) in b.generators().iter().enumerate() {
                let expected = if i == j { m } else { 0.0 };
                worst = worst.max((trace_product(li, lj) - c(expected, 0.0)).norm());
            }
        }
        let f = structure_constants(&b);
        worst = worst.max(f.antisymmetry_error());
        for i in 0..n {
            for j in 0..n {
                let mut rebuilt = CMatrix::zeros(b.system_dim(), b.system_dim());
                for k in 0..n {
                    rebuilt += b.generator(k) * c(0.0, f.get(i, j, k));
                }
                worst = worst.max(max_abs(&(rebuilt - commutator(b.generator(i), b.generator(j)))));
            }
        }
    }
    ensure(worst <= BASIS_TOL, || format!("worst deviation {worst:.3e}"))?;
    Ok(format!("worst deviation {worst:.2e}"))
}

fn appendix_reconciliation() -> Outcome {
    let mut counts = Vec::new();
    for (tag, expected) in [("su2", 3), ("su3", 8), ("su4", 15)] {
        let kind = BasisKind::from_group_tag(tag).unwrap();
        let entries = reconcile_appendix(&GeneratorBasis::new(kind));
        ensure(entries.len() == expected, || {
            format!("{tag}: {} entries", entries.len())
        })?;
        for e in &entries {
            ensure(e.membership_match, || {
                format!("{tag} λ{}: plane sets differ", e.generator_index)
            })?;
        }
        counts.push(entries.len());
    }
    let su3 = reconcile_appendix(&GeneratorBasis::new(BasisKind::GellMann));
    let l3 = &su3[2];
    let flagged = l3
        .alternate_printings
        .iter()
        .any(|a| a.sign_disagreements.contains(&(6, 7)));
    ensure(flagged && !l3.notes.is_empty(), || {
        "λ3 sign discrepancy not reported".into()
    })?;
    Ok(format!(
        "{counts:?} generators match; λ3 (6,7) sign discrepancy reported"
    ))
}

fn homomorphism_suite() -> Outcome {
    let mut r = rng(2024);
    let mut worst_hom = 0.0f64;
    let mut worst_end = 0.0f64;
    for kind in KINDS {
        let b = GeneratorBasis::new(kind);
        let id = RMatrix::identity(b.adjoint_dim(), b.adjoint_dim());
        for _ in 0..UNITARY_PAIRS {
            let u = random_unitary(&mut r, &b);
            let v = random_unitary(&mut r, &b);
            let ru = adjoint_rotation(&b, &u).map_err(err)?;
            let rv = adjoint_rotation(&b, &v).map_err(err)?;
            let ruv = adjoint_rotation(&b, &(&u * &v)).map_err(err)?;
            worst_hom = worst_hom
                .max((&ruv - &ru * &rv).amax())
                .max((ru.transpose() * &ru - &id).amax());
        }
        for _ in 0..RANDOM_SCHEDULES {
            let s = random_schedule(&mut r, &b);
            let v = ErrorVector::new("v", random_direction(&mut r, b.adjoint_dim()), kind).map_err(err)?;
            let traj = trajectory(&v, &s, &b, 64).map_err(err)?;
            let u = control_unitary_at(&s, &b, s.cycle_time()).map_err(err)?;
            let expected = adjoint_rotation(&b, &u).map_err(err)?.transpose() * v.as_vector();
            worst_end = worst_end.max((traj.endpoint() - expected).amax());
        }
    }
    ensure(worst_hom <= HOMOMORPHISM_TOL, || {
        format!("homomorphism deviation {worst_hom:.3e}")
    })?;
    ensure(worst_end <= ENDPOINT_TOL, || {
        format!("endpoint deviation {worst_end:.3e}")
    })?;
    Ok(format!(
        "{UNITARY_PAIRS} pairs/basis: {worst_hom:.2e}; {RANDOM_SCHEDULES} schedules/basis endpoint: {worst_end:.2e}"
    ))
}

fn relative_residual(name: &str) -> Result<f64, String> {
    let r = preset(name).map_err(err)?.resolve().map_err(err)?;
    let report = check_decoupling(&r.vectors, &r.schedule, &r.basis, &CheckOptions::default()).map_err(err)?;
    Ok(report.worst_relative())
}

fn example_a() -> Outcome {
    let constant = relative_residual("example_a")?;
    let raised = relative_residual("example_a_raised_cosine")?;
    let asym = relative_residual("example_a_asymmetric")?;
    ensure(constant <= DECOUPLED_TOL, || format!("constant |s'| = {constant:.3e}"))?;
    ensure(raised <= DECOUPLED_TOL, || format!("raised cosine |s'| = {raised:.3e}"))?;
    ensure(asym >= ASYMMETRIC_MIN, || format!("asymmetric |s'| = {asym:.3e}"))?;
    Ok(format!(
        "constant {constant:.2e}, raised cosine {raised:.2e}, asymmetric {asym:.3}"
    ))
}

fn example_b() -> Outcome {
    let residual = relative_residual("example_b")?;
    ensure(residual <= DECOUPLED_TOL, || format!("|s'| = {residual:.3e}"))?;
    let s = preset("example_b").map_err(err)?.resolve().map_err(err)?;
    let labels: Vec<String> = s
        .schedule
        .segments()
        .iter()
        .map(|seg| {
            if seg.direction[0] != 0.0 {
                "X".to_string()
            } else {
                "Z".to_string()
            }
        })
        .collect();
    let shared = s.schedule.segments().windows(2).all(|w| w[0].envelope == w[1].envelope);
    ensure(shared, || "segments do not share one envelope".into())?;
    let group = DecouplingGroup::klein_pauli();
    let graph = build_cayley_graph(&group, &["X".to_string(), "Z".to_string()]).map_err(err)?;
    let path = validate_eulerian(&graph, "e", &labels).map_err(err)?;
    let expected_len = group.order() * graph.generating_set().len();
    ensure(labels.len() == expected_len && path.len() == expected_len + 1, || {
        format!("cycle length {} vs |G||F| = {expected_len}", labels.len())
    })?;
    Ok(format!(
        "|s'| ≤ {residual:.2e}; cycle {} is Eulerian, L = {expected_len}",
        labels.join("")
    ))
}

fn example_c() -> Outcome {
    let tmp = tempfile::tempdir().map_err(err)?;
    let mut lines = Vec::new();
    let mut failures = Vec::new();
    for name in ["example_c", "example_c_e11", "example_c_e15"] {
        let options = RunOptions {
            out_dir: Some(tmp.path().join(name)),
            ..RunOptions::default()
        };
        let out = run_scenario(&preset(name).map_err(err)?, &options).map_err(err)?;
        let residual = out.report.worst_relative();
        let drift = out.watch.iter().map(|w| w.max_deviation).fold(0.0, f64::max);
        let control = match name {
            "example_c" => "e7",
            "example_c_e11" => "e11",
            _ => "e15",
        };
        lines.push(format!("{control}: |s'| {residual:.2e}, watch drift {drift:.1e}"));
        if residual > DECOUPLED_TOL || drift > WATCH_TOL || out.watch.len() != 3 {
            failures.push(control);
        }
    }
    let detail = lines.join("; ");
    if failures.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail} (not met for {})", failures.join(", ")))
    }
}

fn example_d() -> Outcome {
    let residual = relative_residual("example_d")?;
    ensure(residual <= DECOUPLED_TOL, || format!("|s'| = {residual:.3e}"))?;
    Ok(format!("e3, e4, e6 |s'| ≤ {residual:.2e}"))
}

fn bang_bang_equivalence() -> Outcome {
    let b = GeneratorBasis::new(BasisKind::Pauli);
    let z = pauli_z();
    let s = RVector::from_vec(operator_components(&z, &b).map_err(err)?);
    let mut worst = 0.0f64;
    for group in [DecouplingGroup::z2(), DecouplingGroup::c4()] {
        let sym = symmetrize(&group, &z).map_err(err)?;
        let lhs = to_error_vector(&CouplingTerm::new("z", sym, "b").map_err(err)?, &b).map_err(err)?;
        let rhs = group_average_vector(&group, &b, &s).map_err(err)?;
        worst = worst.max((lhs.as_vector() - rhs).amax());
    }
    let z2 = symmetrize(&DecouplingGroup::z2(), &z).map_err(err)?;
    ensure(worst <= BANG_BANG_TOL, || format!("deviation {worst:.3e}"))?;
    ensure(z2 == CMatrix::zeros(2, 2), || format!("Z2 leaves {z2}"))?;
    Ok(format!(
        "Z2, C4 deviation {worst:.2e}; Z2 symmetrization of σz is exactly 0"
    ))
}

fn magnus_model() -> Result<JointModel, String> {
    let bath = BathModel::new(
        pauli_z() * c(0.3, 0.0),
        BTreeMap::from([("bx".to_string(), pauli_x()), ("by".to_string(), pauli_y())]),
    )
    .map_err(err)?;
    let terms = [
        CouplingTerm::new("z", pauli_z(), "bx").map_err(err)?,
        CouplingTerm::new("x", pauli_x() * c(0.4, 0.0), "by").map_err(err)?,
    ];
    assemble_joint(&decompose(&(pauli_z() * c(0.2, 0.0)), &terms).map_err(err)?, &bath).map_err(err)
}

fn compressed(s: &ControlSchedule, scale: f64) -> Result<ControlSchedule, String> {
    let segments = s
        .segments()
        .iter()
        .map(|seg| {
            let env = seg.envelope.with_duration(seg.duration() * scale)?.scaled(1.0 / scale);
            ControlSegment::new(seg.direction.clone(), env)
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    ControlSchedule::new(segments).map_err(err)
}

fn magnus_suite() -> Outcome {
    let joint = magnus_model()?;
    let b = GeneratorBasis::new(BasisKind::Pauli);

    let idle = ControlSchedule::new(vec![ControlSegment::idle(3, 1.0).map_err(err)?]).map_err(err)?;
    let trivial = magnus_terms(&joint, &idle, &b, 64).map_err(err)?;
    let h0_dev = max_abs(&(&trivial.h0_bar - &joint.h0));
    let h1_dev = max_abs(&trivial.h1_bar);
    ensure(h0_dev <= MAGNUS_TRIVIAL_TOL && h1_dev <= MAGNUS_TRIVIAL_TOL, || {
        format!("H_c = 0: H̄⁰ off by {h0_dev:.3e}, H̄¹ = {h1_dev:.3e}")
    })?;

    let schedule = preset("example_a").map_err(err)?.resolve().map_err(err)?.schedule;
    let terms = magnus_terms(&joint, &schedule, &b, 1024).map_err(err)?;
    let sector = coupling_sector(&joint, &b, &terms.h0_bar).map_err(err)?;
    let mut sector_dev = 0.0f64;
    let mut compare = |got: &[f64], vec: &ErrorVector| -> Result<(), String> {
        let traj = trajectory(vec, &schedule, &b, 1024).map_err(err)?;
        let avg = ErrorVector::new(
            "avg",
            average_error_vector(&traj).map_err(err)?.iter().copied().collect(),
            b.kind(),
        )
        .map_err(err)?;
        let expected = from_error_vector(&avg, &b).map_err(err)?;
        sector_dev = sector_dev.max(max_abs(&(b.combination(got).map_err(err)? - expected)));
        Ok(())
    };
    for term in &joint.decomposed.couplings {
        compare(
            &sector.couplings[&term.bath_label],
            &to_error_vector(term, &b).map_err(err)?,
        )?;
    }
    let hs = operator_components(&joint.decomposed.system, &b).map_err(err)?;
    compare(&sector.system, &ErrorVector::new("hs", hs, b.kind()).map_err(err)?)?;
    ensure(sector_dev <= SECTOR_TOL, || {
        format!("coupling sector off by {sector_dev:.3e}")
    })?;

    let residual = |scale: f64| -> Result<f64, String> {
        let s = compressed(&schedule, scale)?;
        let m = magnus_terms(&joint, &s, &b, 4096).map_err(err)?;
        let t = s.cycle_time();
        let u = evolve_joint_final(&joint, Some(&s), &b, t, t / 8192.0).map_err(err)?;
        let uc = joint.on_system(&control_unitary_at(&s, &b, t).map_err(err)?);
        Ok((m.propagator() - uc.adjoint() * u).norm())
    };
    let (coarse, fine) = (residual(0.2)?, residual(0.1)?);
    let ratio = coarse / fine;
    ensure(ratio >= MAGNUS_RATIO_MIN, || format!("truncation ratio {ratio:.2}"))?;
    Ok(format!(
        "trivial {:.1e}; sector {sector_dev:.1e}; residual {coarse:.2e} -> {fine:.2e} (×{ratio:.2})",
        h0_dev.max(h1_dev)
    ))
}

fn efficacy_ordering() -> Outcome {
    let scenario = preset("example_a_bath").map_err(err)?;
    let r = scenario.resolve().map_err(err)?;
    let joint = r.joint.as_ref().ok_or("preset has no bath")?;
    let h0 = hermitian_norm(&joint.h0);
    let tc = r.schedule.cycle_time();
    ensure(tc <= 0.1 / h0, || format!("T_c = {tc} exceeds 0.1/‖H0‖ = {}", 0.1 / h0))?;
    let request = r.coherence.clone().ok_or("preset has no coherence block")?;
    ensure(request.n_cycles >= COHERENCE_CYCLES, || {
        format!("{} cycles", request.n_cycles)
    })?;
    let cmp = coherence_comparison(joint, &r.schedule, &r.basis, &request).map_err(err)?;
    for k in 1..cmp.times.len() {
        ensure(cmp.control[k] >= cmp.free[k], || {
            format!("cycle {k}: controlled {:.6} < free {:.6}", cmp.control[k], cmp.free[k])
        })?;
    }
    let last = cmp.times.len() - 1;
    Ok(format!(
        "{} cycles at T_c = {tc}; final coherence {:.6} (controlled) vs {:.6} (free)",
        last, cmp.control[last], cmp.free[last]
    ))
}

fn robustness() -> Outcome {
    let r = preset("example_a").map_err(err)?.resolve().map_err(err)?;
    let options = CheckOptions::default();
    let ideal = check_decoupling(&r.vectors, &r.schedule, &r.basis, &options).map_err(err)?;
    let d = |eps: f64| -> Result<f64, String> {
        let actual = check_decoupling(&r.vectors, &r.schedule.scaled(1.0 + eps), &r.basis, &options).map_err(err)?;
        Ok(robustness_distance(&ideal, &actual).map_err(err)?["z"])
    };
    let (d2, d1) = (d(0.02)?, d(0.01)?);
    let ratio = d2 / d1;
    ensure((ratio / 2.0 - 1.0).abs() <= ROBUSTNESS_REL_TOL, || {
        format!("d ratio {ratio:.4}")
    })?;
    Ok(format!("d(0.02) = {d2:.4e}, d(0.01) = {d1:.4e}, ratio {ratio:.4}"))
}

fn cdd(out: &Path, args: &[&str]) -> Result<i32, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_cdd"))
        .args(args)
        .env("CDD_OUT_DIR", out)
        .output()
        .map_err(err)?
        .status;
    status.code().ok_or_else(|| "terminated by signal".to_string())
}

fn snapshot(dir: &Path) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let mut out = BTreeMap::new();
    for entry in fs::read_dir(dir).map_err(err)? {
        let entry = entry.map_err(err)?;
        out.insert(
            entry.file_name().to_string_lossy().into_owned(),
            fs::read(entry.path()).map_err(err)?,
        );
    }
    Ok(out)
}

fn cli_determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(err)?;
    let root = tmp.path();
    let mut files = 0;
    for name in ["example_a", "example_a_bath", "example_b"] {
        let scenario = root.join(format!("{name}.json"));
        fs::write(
            &scenario,
            serde_json::to_string_pretty(&preset(name).map_err(err)?).map_err(err)?,
        )
        .map_err(err)?;
        let path = scenario.to_string_lossy().into_owned();
        let mut snapshots = Vec::new();
        for run in 0..2 {
            let dir = root.join(format!("{name}_{run}"));
            let code = cdd(&dir, &["run", "--sweep", "amplitude", "0.98:1.02:5", &path])?;
            ensure(code == 0, || format!("{name}: exit {code}"))?;
            snapshots.push(snapshot(&dir)?);
        }
        ensure(snapshots[0] == snapshots[1], || {
            format!("{name}: artifacts differ between runs")
        })?;
        files += snapshots[0].len();
    }
    let asym = root.join("asym.json");
    fs::write(
        &asym,
        serde_json::to_string(&preset("example_a_asymmetric").map_err(err)?).map_err(err)?,
    )
    .map_err(err)?;
    let bad = root.join("bad.json");
    fs::write(&bad, "{\"name\": ").map_err(err)?;
    let scratch = root.join("scratch");
    let codes = [
        cdd(&scratch, &["run", &asym.to_string_lossy()])?,
        cdd(&scratch, &["run", &bad.to_string_lossy()])?,
        cdd(&scratch, &["tables", "su9"])?,
    ];
    ensure(codes == [1, 2, 2], || {
        format!("exit codes {codes:?}, expected [1, 2, 2]")
    })?;
    Ok(format!(
        "{files} artifacts byte-identical across runs; exit codes 0/1/2 honored"
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("basis suite", basis_suite),
        ("appendix reconciliation", appendix_reconciliation),
        ("homomorphism suite", homomorphism_suite),
        ("example A", example_a),
        ("example B", example_b),
        ("example C", example_c),
        ("example D", example_d),
        ("bang-bang equivalence", bang_bang_equivalence),
        ("Magnus suite", magnus_suite),
        ("efficacy ordering", efficacy_ordering),
        ("robustness", robustness),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
