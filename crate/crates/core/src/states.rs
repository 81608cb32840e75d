//! Gaussian input preparations and their single-mode moments.

use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

/// Map an angle to `[0, 2π)`.
pub fn canonical_angle(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y >= TAU {
        0.0
    } else {
        y
    }
}

/// Coherent amplitude `γ = |γ| e^{iθ_γ}`.
///
/// A negative magnitude is folded into the phase, and a zero magnitude
/// forces the phase to 0 so that equal states compare equal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coherent {
    magnitude: f64,
    phase: f64,
}

impl Coherent {
    pub fn new(magnitude: f64, phase: f64) -> Self {
        let (m, p) = fold_sign(magnitude, phase);
        Coherent { magnitude: m, phase: p }
    }

    pub fn vacuum() -> Self {
        Coherent { magnitude: 0.0, phase: 0.0 }
    }

    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(self.magnitude, self.phase)
    }
}

/// Squeezing parameter `χ = s e^{iϑ}`, with the same canonicalization rules as
/// [`Coherent`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Squeeze {
    factor: f64,
    phase: f64,
}

impl Squeeze {
    pub fn new(factor: f64, phase: f64) -> Self {
        let (f, p) = fold_sign(factor, phase);
        Squeeze { factor: f, phase: p }
    }

    pub fn none() -> Self {
        Squeeze { factor: 0.0, phase: 0.0 }
    }

    pub fn factor(&self) -> f64 {
        self.factor
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn value(&self) -> Complex64 {
        Complex64::from_polar(self.factor, self.phase)
    }
}

fn fold_sign(m: f64, p: f64) -> (f64, f64) {
    debug_assert!(m.is_finite() && p.is_finite());
    if m == 0.0 {
        (0.0, 0.0)
    } else if m < 0.0 {
        (-m, canonical_angle(p + PI))
    } else {
        (m, canonical_angle(p))
    }
}

/// One input mode prepared as `D(α) S(χ)|0⟩`: squeezed first, then displaced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPort {
    pub displacement: Coherent,
    pub squeeze: Squeeze,
}

impl GaussianPort {
    pub fn new(displacement: Coherent, squeeze: Squeeze) -> Self {
        GaussianPort { displacement, squeeze }
    }

    pub fn vacuum() -> Self {
        Self::new(Coherent::vacuum(), Squeeze::none())
    }

    pub fn coherent(displacement: Coherent) -> Self {
        Self::new(displacement, Squeeze::none())
    }

    pub fn squeezed_vacuum(squeeze: Squeeze) -> Self {
        Self::new(Coherent::vacuum(), squeeze)
    }
}

/// The five single-mode moments every closed-form result is built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PortMoments {
    /// `⟨a⟩`
    pub mean_a: Complex64,
    /// `⟨a²⟩`
    pub mean_a2: Complex64,
    /// `⟨n⟩`
    pub mean_n: f64,
    /// `⟨n²⟩ − ⟨n⟩²`
    pub var_n: f64,
    /// `⟨n a⟩ − ⟨n⟩⟨a⟩`
    pub corr_na: Complex64,
}

pub fn port_moments(port: &GaussianPort) -> PortMoments {
    let alpha = port.displacement.value();
    let s = port.squeeze.factor();
    let e = Complex64::from_polar(1.0, port.squeeze.phase());
    let sh2 = (2.0 * s).sinh();
    let shs = s.sinh().powi(2);
    PortMoments {
        mean_a: alpha,
        mean_a2: alpha * alpha - e * (0.5 * sh2),
        mean_n: alpha.norm_sqr() + shs,
        var_n: 0.5 * sh2 * sh2 + crate::upsilon::upsilon_minus(&port.displacement, &port.squeeze),
        corr_na: alpha * shs - alpha.conj() * e * (0.5 * sh2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_moments_vanish() {
        let m = port_moments(&GaussianPort::vacuum());
        assert_eq!(m.mean_a, Complex64::new(0.0, 0.0));
        assert_eq!(m.mean_a2, Complex64::new(0.0, 0.0));
        assert_eq!(m.mean_n, 0.0);
        assert_eq!(m.var_n, 0.0);
        assert_eq!(m.corr_na, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn coherent_is_poissonian() {
        let m = port_moments(&GaussianPort::coherent(Coherent::new(2.0, 0.0)));
        assert_eq!(m.mean_a, Complex64::new(2.0, 0.0));
        assert_eq!(m.mean_a2, Complex64::new(4.0, 0.0));
        assert_eq!(m.mean_n, 4.0);
        assert!((m.var_n - 4.0).abs() < 1e-15);
        assert_eq!(m.corr_na, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn canonicalization() {
        let c = Coherent::new(0.0, 1.3);
        assert_eq!(c.phase(), 0.0);
        let c = Coherent::new(-1.0, 0.0);
        assert_eq!(c.magnitude(), 1.0);
        assert!((c.phase() - PI).abs() < 1e-15);
        assert!((canonical_angle(-PI / 2.0) - 1.5 * PI).abs() < 1e-15);
        assert!(canonical_angle(-1e-300) < TAU);
    }
}
