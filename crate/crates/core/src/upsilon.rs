//! The `Υ±` functions: coherent fluctuations enhanced or reduced by squeezing.

use crate::states::{Coherent, Squeeze};

/// `Υ⁺(γ,χ) = |γ|²(cosh 2s + sinh 2s cos(2θ_γ − ϑ))`
pub fn upsilon_plus(gamma: &Coherent, chi: &Squeeze) -> f64 {
    upsilon(gamma, chi, 1.0)
}

/// `Υ⁻(γ,χ) = |γ|²(cosh 2s − sinh 2s cos(2θ_γ − ϑ))`
pub fn upsilon_minus(gamma: &Coherent, chi: &Squeeze) -> f64 {
    upsilon(gamma, chi, -1.0)
}

fn upsilon(gamma: &Coherent, chi: &Squeeze, sign: f64) -> f64 {
    let s2 = 2.0 * chi.factor();
    let angle = 2.0 * gamma.phase() - chi.phase();
    gamma.magnitude().powi(2) * (s2.cosh() + sign * s2.sinh() * angle.cos())
}
