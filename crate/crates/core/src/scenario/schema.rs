use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::bath::{assemble_joint, BathModel, CoherenceRequest, JointModel};
use crate::control::{ControlSchedule, ControlSegment, Envelope, DEFAULT_STEPS};
use crate::decoupling::DEFAULT_TOLERANCE;
use crate::error::{Error, Result};
use crate::error_model::{
    decompose, operator_preset, to_error_vector, CouplingTerm, DecomposedHamiltonian, ErrorVector,
};
use crate::lie_algebra::{BasisKind, GeneratorBasis};
use crate::linalg::{c, matrix_from_json, CMatrix, JsonMatrix};

/// Bath label used by error entries that do not name one.
pub const DEFAULT_BATH_LABEL: &str = "b";

/// Basis given by kind (`pauli`, ...) or group tag (`su2`, ...).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisSpec(pub BasisKind);

impl Serialize for BasisSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BasisSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        if let Some(kind) = BasisKind::from_group_tag(&text) {
            return Ok(BasisSpec(kind));
        }
        BasisKind::ALL
            .into_iter()
            .find(|k| k.to_string() == text)
            .map(BasisSpec)
            .ok_or_else(|| {
                serde::de::Error::custom(format!(
                    "unknown basis `{text}`; expected pauli, gell_mann, pauli_product, su2, su3 or su4"
                ))
            })
    }
}

/// Where an operator comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OperatorSource {
    /// Named preset, e.g. `sigma_z`.
    Operator {
        operator: String,
    },
    Matrix {
        matrix: JsonMatrix,
    },
    /// Error-vector components in the scenario basis.
    Vector {
        vector: Vec<f64>,
    },
    /// One-based generator label.
    Generator {
        generator: usize,
    },
}

impl OperatorSource {
    fn resolve(&self, basis: &GeneratorBasis) -> Result<CMatrix> {
        match self {
            OperatorSource::Operator { operator } => operator_preset(operator),
            OperatorSource::Matrix { matrix } => matrix_from_json(matrix),
            OperatorSource::Vector { vector } => basis.combination(vector),
            OperatorSource::Generator { generator } => basis.combination(&basis.unit_direction(*generator)?),
        }
    }
}

fn one() -> f64 {
    1.0
}

fn is_one(x: &f64) -> bool {
    *x == 1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorSpec {
    pub gamma: String,
    #[serde(flatten)]
    pub source: OperatorSource,
    #[serde(default = "one", skip_serializing_if = "is_one")]
    pub scale: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bath: Option<String>,
}

impl ErrorSpec {
    pub fn generator(gamma: impl Into<String>, label: usize, scale: f64) -> Self {
        Self {
            gamma: gamma.into(),
            source: OperatorSource::Generator { generator: label },
            scale,
            bath: None,
        }
    }

    pub fn operator(gamma: impl Into<String>, name: &str) -> Self {
        Self {
            gamma: gamma.into(),
            source: OperatorSource::Operator {
                operator: name.to_string(),
            },
            scale: 1.0,
            bath: None,
        }
    }
}

/// Control direction: `"e7"` or explicit components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DirectionSpec {
    Label(String),
    Components(Vec<f64>),
}

impl DirectionSpec {
    pub fn resolve(&self, basis: &GeneratorBasis) -> Result<Vec<f64>> {
        match self {
            DirectionSpec::Components(v) => Ok(v.clone()),
            DirectionSpec::Label(l) => {
                let index = l
                    .strip_prefix('e')
                    .and_then(|k| k.parse::<usize>().ok())
                    .ok_or_else(|| Error::InvalidScenario(format!("direction `{l}` is not of the form eK")))?;
                basis.unit_direction(index)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentSpec {
    pub direction: DirectionSpec,
    pub envelope: Envelope,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleSpec {
    pub segments: Vec<SegmentSpec>,
}

impl ScheduleSpec {
    pub fn resolve(&self, basis: &GeneratorBasis) -> Result<ControlSchedule> {
        let segments = self
            .segments
            .iter()
            .map(|s| ControlSegment::new(s.direction.resolve(basis)?, s.envelope.clone()))
            .collect::<Result<Vec<_>>>()?;
        let schedule = ControlSchedule::new(segments)?;
        schedule.check_basis(basis)?;
        Ok(schedule)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    /// Multiplies every amplitude by the swept value; `ε = value − 1`.
    Amplitude,
    /// Multiplies every amplitude by `1 + value`; `ε = value`.
    Epsilon,
}

impl std::str::FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "amplitude" => Ok(SweepParameter::Amplitude),
            "epsilon" => Ok(SweepParameter::Epsilon),
            other => Err(Error::InvalidInput(format!(
                "unknown sweep parameter `{other}`; expected amplitude or epsilon"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl SweepSpec {
    /// Parses `start:stop:count` (inclusive).
    pub fn parse(parameter: SweepParameter, range: &str) -> Result<Self> {
        let parts: Vec<&str> = range.split(':').collect();
        let bad = || Error::InvalidInput(format!("sweep range `{range}` must be start:stop:count"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
        let spec = Self {
            parameter,
            start,
            stop,
            count,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 || !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::InvalidInput(
                "sweep needs finite bounds and at least one point".into(),
            ));
        }
        if self.count == 1 && self.start != self.stop {
            return Err(Error::InvalidInput("a one-point sweep needs start == stop".into()));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| self.start + (self.stop - self.start) * i as f64 / last)
            .collect()
    }

    /// `(ε, amplitude factor)` for a swept value.
    pub fn point(&self, value: f64) -> (f64, f64) {
        match self.parameter {
            SweepParameter::Amplitude => (value - 1.0, value),
            SweepParameter::Epsilon => (value, 1.0 + value),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub basis: BasisSpec,
    /// System Hamiltonian; zero when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<OperatorSource>,
    pub errors: Vec<ErrorSpec>,
    pub schedule: ScheduleSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps_per_segment: Option<usize>,
    /// Vectors whose trajectories must stay constant.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub watch: Vec<ErrorSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bath: Option<BathModel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coherence: Option<CoherenceRequest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

/// Scenario with every reference resolved.
#[derive(Debug, Clone)]
pub struct ResolvedScenario {
    pub name: String,
    pub basis: GeneratorBasis,
    pub decomposed: DecomposedHamiltonian,
    pub vectors: Vec<ErrorVector>,
    pub watch: Vec<ErrorVector>,
    pub schedule: ControlSchedule,
    pub tolerance: f64,
    pub steps_per_segment: usize,
    pub joint: Option<JointModel>,
    pub coherence: Option<CoherenceRequest>,
    pub sweep: Option<SweepSpec>,
}

fn check_unique(labels: impl Iterator<Item = String>) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for l in labels {
        if !seen.insert(l.clone()) {
            return Err(Error::InvalidScenario(format!("label `{l}` appears twice")));
        }
    }
    Ok(())
}

fn coupling(spec: &ErrorSpec, basis: &GeneratorBasis) -> Result<CouplingTerm> {
    let op = spec.source.resolve(basis)? * c(spec.scale, 0.0);
    if op.nrows() != basis.system_dim() {
        return Err(Error::InvalidScenario(format!(
            "error `{}` is {}×{} but the {} basis acts on dimension {}",
            spec.gamma,
            op.nrows(),
            op.ncols(),
            basis.kind(),
            basis.system_dim()
        )));
    }
    CouplingTerm::new(
        spec.gamma.clone(),
        op,
        spec.bath.clone().unwrap_or_else(|| DEFAULT_BATH_LABEL.to_string()),
    )
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn resolve(&self) -> Result<ResolvedScenario> {
        let basis = GeneratorBasis::new(self.basis.0);
        let n = basis.system_dim();
        if self.errors.is_empty() {
            return Err(Error::InvalidScenario("scenario lists no error operators".into()));
        }
        check_unique(self.errors.iter().chain(&self.watch).map(|e| e.gamma.clone()))?;
        let h_s = match &self.system {
            Some(src) => src.resolve(&basis)?,
            None => CMatrix::zeros(n, n),
        };
        let terms = self
            .errors
            .iter()
            .map(|e| coupling(e, &basis))
            .collect::<Result<Vec<_>>>()?;
        let decomposed = decompose(&h_s, &terms)?;
        let vectors = decomposed
            .couplings
            .iter()
            .map(|t| to_error_vector(t, &basis))
            .collect::<Result<Vec<_>>>()?;
        let watch = self
            .watch
            .iter()
            .map(|w| {
                let term = coupling(w, &basis)?;
                let (traceless, _) = crate::error_model::traceless_part(&term.operator);
                to_error_vector(
                    &CouplingTerm {
                        operator: traceless,
                        ..term
                    },
                    &basis,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let schedule = self.schedule.resolve(&basis)?;
        let tolerance = self.tolerance.unwrap_or(DEFAULT_TOLERANCE);
        if !(tolerance.is_finite() && tolerance >= 0.0) {
            return Err(Error::InvalidScenario(format!(
                "tolerance must be non-negative, got {tolerance}"
            )));
        }
        let joint = match &self.bath {
            Some(bath) => Some(assemble_joint(&decomposed, bath)?),
            None => None,
        };
        if let Some(sweep) = &self.sweep {
            sweep.validate()?;
        }
        Ok(ResolvedScenario {
            name: self.name.clone(),
            basis,
            decomposed,
            vectors,
            watch,
            schedule,
            tolerance,
            steps_per_segment: self.steps_per_segment.unwrap_or(DEFAULT_STEPS),
            joint,
            coherence: self.coherence.clone(),
            sweep: self.sweep,
        })
    }
}
