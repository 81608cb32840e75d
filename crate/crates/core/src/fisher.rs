//! Two-parameter Fisher matrix, quantum Fisher information and the quantum
//! Cramér-Rao bound.

use crate::error::{Error, Result};
use crate::interferometer::{BsConvention, MziScenario};
use crate::pmc::PmcSet;
use crate::states::{port_moments, Coherent, GaussianPort, Squeeze};
use crate::upsilon::{upsilon_minus, upsilon_plus};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

/// Fisher matrix over the sum and difference phases.
///
/// `f_dd` is normalized so that it is the Fisher information of the total
/// internal phase difference `φ` (shot noise gives `f_dd = ⟨n⟩`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherMatrix {
    pub f_ss: f64,
    pub f_dd: f64,
    pub f_sd: f64,
}

/// Below this `f_ss` the sum-phase information is treated as absent.
pub const F_SS_FLOOR: f64 = 1e-12;

/// Fisher matrix from the port moments (input separability assumed).
/// Neither `φ` nor `η` enters.
pub fn fisher_matrix(scenario: &MziScenario) -> FisherMatrix {
    let p0 = port_moments(&scenario.port0);
    let p1 = port_moments(&scenario.port1);
    let (a0, a1) = (p0.mean_a, p1.mean_a);
    let f_ss = p0.var_n + p1.var_n;
    let coherent = p0.mean_n + p1.mean_n + 2.0 * (p0.mean_n * p1.mean_n - a0.norm_sqr() * a1.norm_sqr());
    let pair = (p0.mean_a2 * p1.mean_a2.conj() - a0 * a0 * (a1 * a1).conj()).re;
    let cross: Complex64 = a0 * a1.conj() + p0.corr_na * a1.conj() + a0 * p1.corr_na.conj();
    match scenario.convention {
        BsConvention::Symmetric => FisherMatrix {
            f_ss,
            f_dd: coherent - 2.0 * pair,
            f_sd: 2.0 * cross.im,
        },
        BsConvention::Cube => FisherMatrix {
            f_ss,
            f_dd: coherent + 2.0 * pair,
            f_sd: 2.0 * cross.re,
        },
    }
}

/// `F = f_dd − f_sd²/f_ss`.
pub fn qfi(fm: &FisherMatrix) -> Result<f64> {
    if fm.f_ss < F_SS_FLOOR {
        if fm.f_sd.abs() < 1e-9 {
            return Ok(fm.f_dd.max(0.0));
        }
        return Err(Error::DegenerateMatrix { f_ss: fm.f_ss, f_sd: fm.f_sd });
    }
    Ok((fm.f_dd - fm.f_sd * fm.f_sd / fm.f_ss).max(0.0))
}

/// `1/√(shots·F)`.
pub fn qcrb(f: f64, shots: u64) -> Result<f64> {
    if !(f > 0.0) {
        return Err(Error::NonPositiveInformation(f));
    }
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    Ok(1.0 / (shots as f64 * f).sqrt())
}

/// Coherent amplitudes and squeezing factors, without phases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Magnitudes {
    pub alpha: f64,
    pub beta: f64,
    pub r: f64,
    pub z: f64,
}

impl Magnitudes {
    pub fn new(alpha: f64, beta: f64, r: f64, z: f64) -> Self {
        Magnitudes { alpha, beta, r, z }
    }

    /// Total mean photon number `|α|² + |β|² + sinh²r + sinh²z`.
    pub fn mean_photons(&self) -> f64 {
        self.alpha.powi(2) + self.beta.powi(2) + self.r.sinh().powi(2) + self.z.sinh().powi(2)
    }

    pub fn scenario(&self, phases: &Phases, convention: BsConvention) -> MziScenario {
        let port1 = GaussianPort::new(
            Coherent::new(self.alpha, phases.theta_alpha),
            Squeeze::new(self.z, phases.phi_zeta),
        );
        let port0 = GaussianPort::new(
            Coherent::new(self.beta, phases.theta_beta),
            Squeeze::new(self.r, phases.theta),
        );
        MziScenario::new(port1, port0).with_convention(convention)
    }
}

/// Input phases: `θ_α`, `θ_β`, the port-0 squeeze phase `θ` and the port-1
/// squeeze phase `φ_ζ`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Phases {
    pub theta_alpha: f64,
    pub theta_beta: f64,
    pub theta: f64,
    pub phi_zeta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseSpec {
    Pmc(PmcSet),
    Explicit(Phases),
}

/// Closed-form Fisher matrix for explicit phases.
///
/// For the cube convention the port-0 field is equivalent to a symmetric
/// setup with `β → −iβ` and `ξ → −ξ`.
pub fn fisher_closed_form(m: &Magnitudes, p: &Phases, convention: BsConvention) -> FisherMatrix {
    let p = match convention {
        BsConvention::Symmetric => *p,
        BsConvention::Cube => Phases {
            theta_beta: p.theta_beta - FRAC_PI_2,
            theta: p.theta + PI,
            ..*p
        },
    };
    let (r2, z2) = (2.0 * m.r, 2.0 * m.z);
    let alpha = Coherent::new(m.alpha, p.theta_alpha);
    let beta = Coherent::new(m.beta, p.theta_beta);
    let xi = Squeeze::new(m.r, p.theta);
    let zeta = Squeeze::new(m.z, p.phi_zeta);
    let f_ss = 0.5 * r2.sinh().powi(2)
        + upsilon_minus(&beta, &xi)
        + 0.5 * z2.sinh().powi(2)
        + upsilon_minus(&alpha, &zeta);
    let f_dd = upsilon_plus(&beta, &zeta)
        + upsilon_plus(&alpha, &xi)
        + 0.5 * (r2.cosh() * z2.cosh() - r2.sinh() * z2.sinh() * (p.theta - p.phi_zeta).cos() - 1.0);
    let sum = p.theta_alpha + p.theta_beta;
    let f_sd = m.alpha
        * m.beta
        * (r2.sinh() * (sum - p.theta).sin()
            - z2.sinh() * (sum - p.phi_zeta).sin()
            - 2.0 * (1.0 + m.r.sinh().powi(2) + m.z.sinh().powi(2)) * (p.theta_alpha - p.theta_beta).sin());
    FisherMatrix { f_ss, f_dd, f_sd }
}

/// Closed-form QFI. Under a phase-matching set the value does not depend on
/// the convention (the set is remapped by [`crate::pmc::apply_pmc`]).
pub fn qfi_closed_form(m: &Magnitudes, phases: PhaseSpec, convention: BsConvention) -> f64 {
    let (a2, b2) = (m.alpha * m.alpha, m.beta * m.beta);
    let (e2r, e2z) = ((2.0 * m.r).exp(), (2.0 * m.z).exp());
    match phases {
        PhaseSpec::Pmc(PmcSet::Pmc1) | PhaseSpec::Pmc(PmcSet::SqzVacOptimal) => {
            a2 * e2r + b2 / e2z + (m.r + m.z).sinh().powi(2)
        }
        PhaseSpec::Pmc(PmcSet::Pmc2) | PhaseSpec::Pmc(PmcSet::SqzVacWideband) => {
            a2 * e2r + b2 * e2z + (m.r - m.z).sinh().powi(2)
        }
        PhaseSpec::Pmc(PmcSet::Pmc3) => {
            let f_ss = 0.5 * (2.0 * m.r).sinh().powi(2) + b2 * e2r + 0.5 * (2.0 * m.z).sinh().powi(2) + a2 * e2z;
            let base = a2 * e2r + b2 * e2z + (m.r + m.z).sinh().powi(2);
            if f_ss < F_SS_FLOOR {
                base
            } else {
                base - a2 * b2 * (e2r + e2z).powi(2) / f_ss
            }
        }
        PhaseSpec::Explicit(p) => {
            let fm = fisher_closed_form(m, &p, convention);
            qfi(&fm).unwrap_or(fm.f_dd)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_is_zero() {
        let s = MziScenario::new(GaussianPort::vacuum(), GaussianPort::vacuum());
        let fm = fisher_matrix(&s);
        assert_eq!((fm.f_ss, fm.f_dd, fm.f_sd), (0.0, 0.0, 0.0));
        assert_eq!(qfi(&fm).unwrap(), 0.0);
        assert!(qcrb(0.0, 1).is_err());
    }

    #[test]
    fn coherent_shot_noise() {
        let s = MziScenario::new(GaussianPort::coherent(Coherent::new(2.0, 0.3)), GaussianPort::vacuum());
        let fm = fisher_matrix(&s);
        assert!((fm.f_dd - 4.0).abs() < 1e-12);
        assert!((fm.f_ss - 4.0).abs() < 1e-12);
        assert!(fm.f_sd.abs() < 1e-12);
        assert_eq!(qcrb(4.0, 1).unwrap(), 0.5);
        assert!((qcrb(4.0, 100).unwrap() - 0.05).abs() < 1e-15);
    }

    #[test]
    fn degenerate_matrix_detected() {
        let fm = FisherMatrix { f_ss: 0.0, f_dd: 1.0, f_sd: 0.1 };
        assert!(matches!(qfi(&fm), Err(Error::DegenerateMatrix { .. })));
        let fm = FisherMatrix { f_ss: 4.0, f_dd: 4.0, f_sd: 0.0 };
        assert_eq!(qfi(&fm).unwrap(), 4.0);
    }

    #[test]
    fn squeezed_coherent_plus_squeezed_vacuum_optimum() {
        let m = Magnitudes::new(1.0, 0.0, 0.5, 0.4);
        let p = Phases { phi_zeta: PI, ..Default::default() };
        let fm = fisher_matrix(&m.scenario(&p, BsConvention::Symmetric));
        assert!(fm.f_sd.abs() < 1e-14);
        let expected = 1f64.exp() + 0.9f64.sinh().powi(2);
        assert!((fm.f_dd - expected).abs() < 1e-12);
        assert!((qcrb(qfi(&fm).unwrap(), 1).unwrap() - 1.0 / expected.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn closed_form_matches_generic_for_explicit_phases() {
        let m = Magnitudes::new(1.3, 0.7, 0.45, 0.3);
        for conv in [BsConvention::Symmetric, BsConvention::Cube] {
            for k in 0..20 {
                let x = k as f64;
                let p = Phases {
                    theta_alpha: 0.3 * x,
                    theta_beta: 1.1 - 0.7 * x,
                    theta: 0.2 + 1.3 * x,
                    phi_zeta: 2.9 * x,
                };
                let g = fisher_matrix(&m.scenario(&p, conv));
                let c = fisher_closed_form(&m, &p, conv);
                assert!((g.f_ss - c.f_ss).abs() < 1e-11, "{conv:?} f_ss");
                assert!((g.f_dd - c.f_dd).abs() < 1e-11, "{conv:?} f_dd");
                assert!((g.f_sd.abs() - c.f_sd.abs()).abs() < 1e-11, "{conv:?} f_sd");
            }
        }
    }

    #[test]
    fn doubled_fisher_for_balanced_pmc2() {
        let m = Magnitudes::new(1.0, 1.0, 0.5, 0.5);
        let f = qfi_closed_form(&m, PhaseSpec::Pmc(PmcSet::Pmc2), BsConvention::Symmetric);
        assert!((f - 2.0 * 1f64.exp()).abs() < 1e-12);
    }
}
