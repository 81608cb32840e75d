//! Interferometer scenario and the input-output mode transforms of the two
//! beam-splitter conventions.

use crate::states::GaussianPort;
use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BsConvention {
    /// Symmetric splitter: reflection picks up a factor `i`.
    Symmetric,
    /// Cube splitter: real coefficients, one reflection carries a sign.
    Cube,
}

/// Two Gaussian input ports, the splitter convention, the total internal
/// phase `φ` and the (shared) detector efficiency `η`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MziScenario {
    /// Mode 1, carrying `α` and `ζ`.
    pub port1: GaussianPort,
    /// Mode 0, carrying `β` and `ξ`.
    pub port0: GaussianPort,
    pub convention: BsConvention,
    pub phase: f64,
    pub efficiency: f64,
}

impl MziScenario {
    /// Symmetric splitters, `φ = 0`, ideal detectors.
    pub fn new(port1: GaussianPort, port0: GaussianPort) -> Self {
        MziScenario {
            port1,
            port0,
            convention: BsConvention::Symmetric,
            phase: 0.0,
            efficiency: 1.0,
        }
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self
    }

    pub fn with_convention(mut self, convention: BsConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn with_efficiency(mut self, efficiency: f64) -> Self {
        self.efficiency = efficiency;
        self
    }

    /// Total mean photon number entering the interferometer.
    pub fn mean_photons(&self) -> f64 {
        let m0 = crate::states::port_moments(&self.port0);
        let m1 = crate::states::port_moments(&self.port1);
        m0.mean_n + m1.mean_n
    }
}

/// Annihilation-operator table `a_out[k] = Σ_j m[k][j] a_in[j]`, with rows
/// `k ∈ {4, 5}` and columns `j ∈ {0, 1}`.
///
/// The same matrix maps input creation operators into output ones in the
/// Schrödinger picture: `U a_j† U† = Σ_k m[k][j] a_k†`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeMap {
    pub m: [[Complex64; 2]; 2],
}

impl ModeMap {
    pub fn row(&self, k: usize) -> [Complex64; 2] {
        self.m[k]
    }

    /// Largest entry of `M M† − 1`.
    pub fn unitarity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..2 {
                    s += self.m[i][k] * self.m[j][k].conj();
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((s - target).norm());
            }
        }
        worst
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Whole-interferometer transform at total phase `φ`.
///
/// Symmetric: `a₄ = −sin(φ/2) a₀ + cos(φ/2) a₁`, `a₅ = cos(φ/2) a₀ + sin(φ/2) a₁`
/// (a global phase dropped). Cube: `a₄ = i sin(φ/2) a₀ + cos(φ/2) a₁`,
/// `a₅ = −cos(φ/2) a₀ − i sin(φ/2) a₁`.
pub fn mode_map(convention: BsConvention, phi: f64) -> ModeMap {
    let (s, co) = (0.5 * phi).sin_cos();
    let m = match convention {
        BsConvention::Symmetric => [[c(-s, 0.0), c(co, 0.0)], [c(co, 0.0), c(s, 0.0)]],
        BsConvention::Cube => [[c(0.0, s), c(co, 0.0)], [c(-co, 0.0), c(0.0, -s)]],
    };
    ModeMap { m }
}

/// Entry-wise `d/dφ` of [`mode_map`].
pub fn mode_map_derivative(convention: BsConvention, phi: f64) -> ModeMap {
    let (s, co) = (0.5 * phi).sin_cos();
    let (s, co) = (0.5 * s, 0.5 * co);
    let m = match convention {
        BsConvention::Symmetric => [[c(-co, 0.0), c(-s, 0.0)], [c(-s, 0.0), c(co, 0.0)]],
        BsConvention::Cube => [[c(0.0, co), c(-s, 0.0)], [c(s, 0.0), c(0.0, -co)]],
    };
    ModeMap { m }
}

/// First beam splitter alone, mapping inputs `(0, 1)` to the internal arms
/// `(2, 3)`.
pub fn first_splitter(convention: BsConvention) -> ModeMap {
    let h = FRAC_1_SQRT_2;
    let m = match convention {
        BsConvention::Symmetric => [[c(h, 0.0), c(0.0, h)], [c(0.0, h), c(h, 0.0)]],
        BsConvention::Cube => [[c(h, 0.0), c(h, 0.0)], [c(-h, 0.0), c(h, 0.0)]],
    };
    ModeMap { m }
}

/// Arm phase factors `(e^{iφ₂}, e^{iφ₃})` such that
/// `first_splitter · diag(arm) · first_splitter = global · mode_map(φ)`.
///
/// Returns the arm phases and the global factor.
pub fn arm_phases(convention: BsConvention, phi: f64) -> ([f64; 2], Complex64) {
    match convention {
        BsConvention::Symmetric => ([-0.5 * phi, 0.5 * phi], c(0.0, 1.0)),
        BsConvention::Cube => ([0.5 * phi, -0.5 * phi], c(1.0, 0.0)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn mul(a: &ModeMap, b: &ModeMap) -> ModeMap {
        let mut m = [[c(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    m[i][j] += a.m[i][k] * b.m[k][j];
                }
            }
        }
        ModeMap { m }
    }

    #[test]
    fn identity_routing_at_zero() {
        let m = mode_map(BsConvention::Symmetric, 0.0);
        assert_eq!(m.m[0], [c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(m.m[1], [c(1.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn swap_at_pi() {
        let m = mode_map(BsConvention::Symmetric, PI);
        assert!((m.m[0][0] - c(-1.0, 0.0)).norm() < 1e-15);
        assert!(m.m[0][1].norm() < 1e-15);
        assert!((m.m[1][1] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn cube_half_transmission_at_quarter_turn() {
        let m = mode_map(BsConvention::Cube, PI / 2.0);
        assert!((m.m[0][1].norm_sqr() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn unitary_for_all_phases() {
        for conv in [BsConvention::Symmetric, BsConvention::Cube] {
            for k in 0..50 {
                let phi = -7.0 + 0.31 * k as f64;
                assert!(mode_map(conv, phi).unitarity_defect() < 1e-12);
            }
            assert!(first_splitter(conv).unitarity_defect() < 1e-15);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let h = 1e-6;
        for conv in [BsConvention::Symmetric, BsConvention::Cube] {
            let phi = 0.77;
            let d = mode_map_derivative(conv, phi);
            let p = mode_map(conv, phi + h);
            let q = mode_map(conv, phi - h);
            for i in 0..2 {
                for j in 0..2 {
                    let fd = (p.m[i][j] - q.m[i][j]) / (2.0 * h);
                    assert!((fd - d.m[i][j]).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn composition_of_splitters_and_arms() {
        for conv in [BsConvention::Symmetric, BsConvention::Cube] {
            let phi = 1.234;
            let b = first_splitter(conv);
            let ([p2, p3], g) = arm_phases(conv, phi);
            let arms = ModeMap {
                m: [
                    [Complex64::from_polar(1.0, p2), c(0.0, 0.0)],
                    [c(0.0, 0.0), Complex64::from_polar(1.0, p3)],
                ],
            };
            let total = mul(&b, &mul(&arms, &b));
            let target = mode_map(conv, phi);
            for i in 0..2 {
                for j in 0..2 {
                    assert!((total.m[i][j] - g * target.m[i][j]).norm() < 1e-14);
                }
            }
        }
    }
}
