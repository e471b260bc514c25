use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::PathBuf;

use crate::bath::{BathModel, CoherenceRequest};
use crate::control::{design_half_cycle_profile, plane_rate, Envelope, EnvelopeKind};
use crate::error::{Error, Result};
use crate::error_model::ErrorVector;
use crate::lie_algebra::{BasisKind, GeneratorBasis};
use crate::linalg::{pauli_x, CMatrix};
use crate::scenario::schema::{BasisSpec, DirectionSpec, ErrorSpec, Scenario, ScheduleSpec, SegmentSpec};

pub const PRESETS: &[&str] = &[
    "example_a",
    "example_a_raised_cosine",
    "example_a_asymmetric",
    "example_a_bath",
    "example_b",
    "example_c",
    "example_c_e11",
    "example_c_e15",
    "example_d",
];

pub fn preset(name: &str) -> Result<Scenario> {
    match name {
        "example_a" => Ok(example_a(EnvelopeKind::Constant)),
        "example_a_raised_cosine" => Ok(example_a(EnvelopeKind::RaisedCosine)),
        "example_a_asymmetric" => Ok(example_a_asymmetric()),
        "example_a_bath" => Ok(example_a_bath()),
        "example_b" => Ok(example_b()),
        "example_c" => Ok(example_c(7, 1.0, 1.0)),
        "example_c_e11" => Ok(example_c(11, 1.0, 1.0)),
        "example_c_e15" => Ok(example_c(15, 1.0, 1.0)),
        "example_d" => Ok(example_d()),
        other => Err(Error::UnknownPreset {
            name: other.to_string(),
            available: PRESETS.join(", "),
        }),
    }
}

fn scenario(name: &str, basis: BasisKind, errors: Vec<ErrorSpec>, segments: Vec<SegmentSpec>) -> Scenario {
    Scenario {
        name: name.to_string(),
        basis: BasisSpec(basis),
        system: None,
        errors,
        schedule: ScheduleSpec { segments },
        tolerance: None,
        steps_per_segment: None,
        watch: Vec::new(),
        bath: None,
        coherence: None,
        sweep: None,
        output_dir: Some(PathBuf::from("out").join(name)),
    }
}

fn segment(label: usize, envelope: Envelope) -> SegmentSpec {
    SegmentSpec {
        direction: DirectionSpec::Label(format!("e{label}")),
        envelope,
    }
}

/// Rotation rate of generator `moved` under control `control`, from the structure constants.
fn rate(kind: BasisKind, control: usize, moved: usize) -> f64 {
    let basis = GeneratorBasis::new(kind);
    let dir = basis.unit_direction(control).expect("preset labels are valid");
    let v = ErrorVector::unit("probe", kind, moved, 1.0).expect("preset labels are valid");
    plane_rate(&basis, &dir, &v).expect("preset directions are non-zero")
}

/// Two matching halves turning the vector by `angle` each.
fn halves(
    control: usize,
    angle: f64,
    rate: f64,
    kind: EnvelopeKind,
    bound: f64,
    half: Option<f64>,
) -> Vec<SegmentSpec> {
    let (a, b) = design_half_cycle_profile(angle, bound, kind, rate, half).expect("preset design is reachable");
    vec![segment(control, a), segment(control, b)]
}

/// Spin flip: `σz` error, `e2` control, each half turns the vector by π.
pub fn example_a(kind: EnvelopeKind) -> Scenario {
    let name = match kind {
        EnvelopeKind::Constant => "example_a".to_string(),
        other => format!("example_a_{}", serde_json::to_value(other).unwrap().as_str().unwrap()),
    };
    let segments = halves(2, PI, rate(BasisKind::Pauli, 2, 3), kind, 1.0, None);
    scenario(
        &name,
        BasisKind::Pauli,
        vec![ErrorSpec::operator("z", "sigma_z")],
        segments,
    )
}

/// Example A with the second half twice as fast: same total angle, broken matching condition.
pub fn example_a_asymmetric() -> Scenario {
    let mut s = example_a(EnvelopeKind::Constant);
    s.name = "example_a_asymmetric".into();
    s.output_dir = Some(PathBuf::from("out").join(&s.name));
    let second = &mut s.schedule.segments[1];
    let env = second.envelope.clone();
    second.envelope = env
        .with_duration(env.duration() / 2.0)
        .unwrap()
        .scaled(2.0)
        .with_bound(2.0)
        .unwrap();
    s
}

/// Example A compressed to `T_c = 0.025` with a `σz ⊗ σx` coupling to a two-level bath.
pub fn example_a_bath() -> Scenario {
    let cycle = 0.025;
    let segments = halves(
        2,
        PI,
        rate(BasisKind::Pauli, 2, 3),
        EnvelopeKind::Constant,
        200.0,
        Some(cycle / 2.0),
    );
    let mut s = scenario(
        "example_a_bath",
        BasisKind::Pauli,
        vec![ErrorSpec::operator("z", "sigma_z")],
        segments,
    );
    s.bath = Some(
        BathModel::new(CMatrix::zeros(2, 2), BTreeMap::from([("b".to_string(), pauli_x())]))
            .expect("preset bath is valid"),
    );
    s.coherence = Some(CoherenceRequest {
        n_cycles: 20,
        period: None,
        dt: 5e-4,
        system_state: None,
        bath_state: None,
    });
    s
}

/// Full decoherence: `σx, σy, σz` errors under eight π turns about `e1, e3` in Eulerian order.
pub fn example_b() -> Scenario {
    let order = [1, 3, 1, 3, 3, 1, 3, 1];
    let (pulse, _) = design_half_cycle_profile(PI, 1.0, EnvelopeKind::RaisedCosine, rate(BasisKind::Pauli, 1, 3), None)
        .expect("preset design is reachable");
    let segments = order.iter().map(|&l| segment(l, pulse.clone())).collect();
    let errors = vec![
        ErrorSpec::operator("x", "sigma_x"),
        ErrorSpec::operator("y", "sigma_y"),
        ErrorSpec::operator("z", "sigma_z"),
    ];
    scenario("example_b", BasisKind::Pauli, errors, segments)
}

/// Two qubits with independent dephasing `g1 e3`, `g2 e6`; the control is one of the
/// Heisenberg generators `e7, e11, e15`, which all stay fixed.
///
/// The envelope is designed for the `e7` rate and reused for the others. `e15` commutes
/// with both dephasing operators, so its preset does not decouple.
pub fn example_c(control: usize, g1: f64, g2: f64) -> Scenario {
    let name = if control == 7 {
        "example_c".to_string()
    } else {
        format!("example_c_e{control}")
    };
    let segments = halves(
        control,
        PI,
        rate(BasisKind::PauliProduct, 7, 3),
        EnvelopeKind::Constant,
        1.0,
        None,
    );
    let errors = vec![ErrorSpec::generator("s1", 3, g1), ErrorSpec::generator("s2", 6, g2)];
    let mut s = scenario(&name, BasisKind::PauliProduct, errors, segments);
    s.watch = [7, 11, 15]
        .iter()
        .map(|&l| ErrorSpec::generator(format!("heisenberg_e{l}"), l, 1.0))
        .collect();
    s
}

/// Qubit plus ancilla level: errors `e3, e4, e6` under `e2`; the slow planes turn by 2π.
pub fn example_d() -> Scenario {
    let slow = rate(BasisKind::GellMann, 2, 4);
    let segments = halves(2, PI, slow, EnvelopeKind::Constant, 1.0, None);
    let errors = vec![
        ErrorSpec::operator("s1", "ket12_diff"),
        ErrorSpec::operator("s2", "ket13_sym"),
        ErrorSpec::operator("s3", "ket23_sym"),
    ];
    scenario("example_d", BasisKind::GellMann, errors, segments)
}
