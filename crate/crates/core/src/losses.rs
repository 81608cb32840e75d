//! Detectors of efficiency `η < 1`, modelled as a beam splitter of
//! transmission `√η` in front of an ideal detector.
//!
//! A photocount variance becomes `η²Δ²n + η(1−η)⟨n⟩`; rescaled by `1/η` so
//! that the mean is unchanged, each scheme picks up extra noise under the
//! square root: `(1−η)/η·⟨n₄⟩` (single mode), `(1−η)/η·(⟨n₄⟩+⟨n₅⟩)`
//! (difference) or `¼(1−η)/η` (homodyne quadrature).

use crate::detection::{detected_optimum, detected_sensitivity, DetectionScheme, SensitivityPoint};
use crate::error::{Error, Result};
use crate::interferometer::MziScenario;

fn efficiency(s: &MziScenario) -> Result<f64> {
    let eta = s.efficiency;
    if eta > 0.0 && eta <= 1.0 {
        Ok(eta)
    } else {
        Err(Error::InvalidEfficiency(eta))
    }
}

/// Sensitivity at `scenario.phase` with detector efficiency
/// `scenario.efficiency`.
pub fn lossy_sensitivity(scheme: DetectionScheme, scenario: &MziScenario) -> Result<SensitivityPoint> {
    detected_sensitivity(scheme, scenario, efficiency(scenario)?)
}

/// Best working point with detector efficiency `scenario.efficiency`.
pub fn lossy_optimal_working_point(scheme: DetectionScheme, scenario: &MziScenario) -> Result<SensitivityPoint> {
    detected_optimum(scheme, scenario, efficiency(scenario)?)
}

/// `(Var n′, ⟨n′⟩)` of a photocount after the loss beam splitter, from the
/// lossless values. Used to check the model against the oracle.
pub fn attenuated_count(var_n: f64, mean_n: f64, eta: f64) -> (f64, f64) {
    (eta * eta * var_n + eta * (1.0 - eta) * mean_n, eta * mean_n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::sensitivity;
    use crate::states::{Coherent, GaussianPort, Squeeze};

    fn schemes() -> [DetectionScheme; 3] {
        [DetectionScheme::DifferenceIntensity, DetectionScheme::SingleModeIntensity, DetectionScheme::homodyne()]
    }

    #[test]
    fn rejects_bad_efficiency() {
        let s = MziScenario::new(GaussianPort::coherent(Coherent::new(1.0, 0.0)), GaussianPort::vacuum());
        for eta in [0.0, -0.1, 1.5, f64::NAN] {
            let r = lossy_sensitivity(DetectionScheme::DifferenceIntensity, &s.with_efficiency(eta));
            assert!(matches!(r, Err(Error::InvalidEfficiency(_))));
        }
    }

    #[test]
    fn unit_efficiency_is_lossless() {
        let s = MziScenario::new(
            GaussianPort::new(Coherent::new(1.2, 0.3), Squeeze::new(0.4, 1.0)),
            GaussianPort::new(Coherent::new(0.5, 1.0), Squeeze::new(0.3, 2.0)),
        )
        .with_phase(1.1);
        for d in schemes() {
            assert_eq!(lossy_sensitivity(d, &s).unwrap(), sensitivity(d, &s).unwrap());
        }
    }

    #[test]
    fn shot_noise_single_mode_scales_with_root_eta() {
        let s = MziScenario::new(GaussianPort::coherent(Coherent::new(2.0, 0.0)), GaussianPort::vacuum()).with_phase(1.3);
        let d = DetectionScheme::SingleModeIntensity;
        let clean = sensitivity(d, &s).unwrap().delta_phi;
        for eta in [0.9, 0.5, 0.1] {
            let lossy = lossy_sensitivity(d, &s.with_efficiency(eta)).unwrap().delta_phi;
            assert!((lossy - clean / eta.sqrt()).abs() < 1e-12 * lossy);
        }
    }
}
