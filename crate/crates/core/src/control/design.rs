use std::f64::consts::PI;

use crate::control::{Envelope, EnvelopeKind};
use crate::error::{Error, Result};
use crate::error_model::ErrorVector;
use crate::lie_algebra::{adjoint_generator, GeneratorBasis};

/// Samples used for the sampled raised-cosine design.
const DESIGN_SAMPLES: usize = 65;

/// Fraction of `peak · duration` that a design of this kind accumulates as angle.
fn fill_factor(kind: EnvelopeKind) -> f64 {
    match kind {
        EnvelopeKind::Constant => 1.0,
        EnvelopeKind::PiecewiseConstant => 2.0 / 3.0,
        EnvelopeKind::RaisedCosine | EnvelopeKind::Sampled => 0.5,
    }
}

fn shaped(kind: EnvelopeKind, peak: f64, duration: f64) -> Result<Envelope> {
    match kind {
        EnvelopeKind::Constant => Envelope::constant(peak, duration),
        EnvelopeKind::PiecewiseConstant => Envelope::piecewise(vec![0.5 * peak, peak, 0.5 * peak], duration),
        EnvelopeKind::RaisedCosine => Envelope::raised_cosine(peak, duration),
        EnvelopeKind::Sampled => {
            let last = (DESIGN_SAMPLES - 1) as f64;
            let samples = (0..DESIGN_SAMPLES)
                .map(|i| peak * 0.5 * (1.0 - (2.0 * PI * i as f64 / last).cos()))
                .collect();
            Envelope::sampled(samples, duration)
        }
    }
}

/// Angular speed of `vec` per unit amplitude under control `direction`, `|F s| / |s|`.
pub fn plane_rate(basis: &GeneratorBasis, direction: &[f64], vec: &ErrorVector) -> Result<f64> {
    let gen = adjoint_generator(basis, direction)?;
    Ok(gen.angular_speed(&vec.as_vector()))
}

/// Two identical envelopes, one per half cycle, each rotating the vector by
/// `target_angle` at `plane_rate` radians per unit of `A`.
///
/// With `duration = None` the shape runs at the bound for the shortest time.
/// The second half repeats the first, so `A(T_c/2 + t) = A(T_c/2) + A(t)`.
pub fn design_half_cycle_profile(
    target_angle: f64,
    bound: f64,
    kind: EnvelopeKind,
    plane_rate: f64,
    duration: Option<f64>,
) -> Result<(Envelope, Envelope)> {
    if !(bound.is_finite() && bound > 0.0) {
        return Err(Error::InvalidEnvelope(format!("bound must be positive, got {bound}")));
    }
    if !(target_angle.is_finite() && target_angle > 0.0) {
        return Err(Error::InvalidEnvelope(format!(
            "target angle must be positive, got {target_angle}"
        )));
    }
    if !(plane_rate.is_finite() && plane_rate > 0.0) {
        return Err(Error::InvalidEnvelope(format!(
            "plane rate must be positive, got {plane_rate}; the control does not move this vector"
        )));
    }
    let angle = target_angle / plane_rate;
    let fill = fill_factor(kind);
    let min_duration = angle / (bound * fill);
    let (peak, d) = match duration {
        None => (bound, min_duration),
        Some(d) => {
            if !(d.is_finite() && d > 0.0) {
                return Err(Error::InvalidEnvelope(format!("duration must be positive, got {d}")));
            }
            if d < min_duration * (1.0 - 1e-12) {
                return Err(Error::Unreachable {
                    bound,
                    requested: d,
                    min_duration,
                });
            }
            ((angle / (fill * d)).min(bound), d)
        }
    };
    let env = shaped(kind, peak, d)?.with_bound(bound)?;
    Ok((env.clone(), env))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie_algebra::BasisKind;

    const KINDS: [EnvelopeKind; 4] = [
        EnvelopeKind::Constant,
        EnvelopeKind::PiecewiseConstant,
        EnvelopeKind::RaisedCosine,
        EnvelopeKind::Sampled,
    ];

    #[test]
    fn constant_pauli_half_is_quarter_period() {
        let (a, b) = design_half_cycle_profile(PI, 1.0, EnvelopeKind::Constant, 2.0, None).unwrap();
        assert!((a.duration() - PI / 2.0).abs() < 1e-15);
        assert!((a.total_angle() - PI / 2.0).abs() < 1e-15);
        assert_eq!(a, b);
    }

    #[test]
    fn every_kind_meets_the_angle_condition() {
        for kind in KINDS {
            for duration in [None, Some(5.0)] {
                let (a, b) = design_half_cycle_profile(PI, 1.0, kind, 2.0, duration).unwrap();
                assert!((a.total_angle() - PI / 2.0).abs() < 1e-10, "{kind:?}");
                assert!(a.max_amplitude() <= 1.0 + 1e-15);
                for t in [0.1, 0.37, 0.8] {
                    let t = t * a.duration();
                    assert!((b.cumulative_angle(t).unwrap() - a.cumulative_angle(t).unwrap()).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn unreachable_target_reports_minimum_duration() {
        let err = design_half_cycle_profile(PI, 1.0, EnvelopeKind::RaisedCosine, 2.0, Some(1.0)).unwrap_err();
        match err {
            Error::Unreachable { min_duration, .. } => assert!((min_duration - PI).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_bound_is_rejected() {
        assert!(design_half_cycle_profile(PI, 0.0, EnvelopeKind::Constant, 2.0, None).is_err());
    }

    #[test]
    fn pauli_rate_is_two() {
        let basis = GeneratorBasis::new(BasisKind::Pauli);
        let v = ErrorVector::unit("z", BasisKind::Pauli, 3, 1.0).unwrap();
        assert!((plane_rate(&basis, &[0.0, 1.0, 0.0], &v).unwrap() - 2.0).abs() < 1e-14);
    }
}
