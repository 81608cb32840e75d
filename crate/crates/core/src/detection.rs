//! Means, variances and phase sensitivities of the three detection schemes,
//! and their optimal working points.
//!
//! Everything is evaluated from the port moments through the mode map, so a
//! single code path serves both input families and both splitter
//! conventions. Variances are computed on the displacement-centred
//! fluctuation operators, which keeps them accurate when `|α|⁴` dwarfs the
//! variance itself.

use crate::algebra::{fluctuation_moments, Poly};
use crate::error::{Error, Result};
use crate::interferometer::{mode_map, mode_map_derivative, MziScenario};
use crate::states::{canonical_angle, port_moments, PortMoments};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DetectionScheme {
    /// `N_d = n₄ − n₅`
    DifferenceIntensity,
    /// `n₄` alone
    SingleModeIntensity,
    /// Quadrature `X_{φ_L}` of mode 4. `None` locks the local oscillator to
    /// `θ_α`.
    Homodyne { local_phase: Option<f64> },
}

impl DetectionScheme {
    pub fn homodyne() -> Self {
        DetectionScheme::Homodyne { local_phase: None }
    }
}

/// A working point and its sensitivity. `delta_phi` is `+∞` where the mean
/// of the observable is locally flat.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensitivityPoint {
    pub phase: f64,
    pub delta_phi: f64,
    pub diagnostic: Option<&'static str>,
}

impl SensitivityPoint {
    pub fn is_finite(&self) -> bool {
        self.delta_phi.is_finite()
    }
}

const VANISHING_SLOPE: &str = "mean is flat at this phase";


fn moments(s: &MziScenario) -> [PortMoments; 2] {
    [port_moments(&s.port0), port_moments(&s.port1)]
}

fn local_phase(scheme: DetectionScheme, s: &MziScenario) -> f64 {
    match scheme {
        DetectionScheme::Homodyne { local_phase: Some(p) } => p,
        _ => s.port1.displacement.phase(),
    }
}

/// Observable and its `φ`-derivative as ladder polynomials in the input modes.
fn observable(scheme: DetectionScheme, s: &MziScenario) -> (Poly, Poly) {
    let m = mode_map(s.convention, s.phase);
    let dm = mode_map_derivative(s.convention, s.phase);
    let a = |k: usize| Poly::lowering(m.row(k));
    let da = |k: usize| Poly::lowering(dm.row(k));
    let number = |k: usize| {
        let (a, da) = (a(k), da(k));
        (a.adjoint().mul(&a), da.adjoint().mul(&a).add(&a.adjoint().mul(&da)))
    };
    match scheme {
        DetectionScheme::DifferenceIntensity => {
            let (n4, dn4) = number(0);
            let (n5, dn5) = number(1);
            (n4.sub(&n5), dn4.sub(&dn5))
        }
        DetectionScheme::SingleModeIntensity => number(0),
        DetectionScheme::Homodyne { .. } => {
            let lo = Complex64::from_polar(0.5, -local_phase(scheme, s));
            let quad = |p: Poly| {
                let half = p.scale(lo);
                half.add(&half.adjoint())
            };
            (quad(a(0)), quad(da(0)))
        }
    }
}

/// Natural size of the observable, used to decide when a slope is zero.
fn scale(scheme: DetectionScheme, s: &MziScenario) -> f64 {
    let n = s.mean_photons().max(1.0);
    match scheme {
        DetectionScheme::Homodyne { .. } => n.sqrt(),
        _ => n,
    }
}

/// Mean of the scheme's observable at `scenario.phase`.
pub fn observable_mean(scheme: DetectionScheme, scenario: &MziScenario) -> f64 {
    observable(scheme, scenario).0.expect(&moments(scenario)).re
}

/// `∂⟨O⟩/∂φ` at `scenario.phase`.
pub fn observable_slope(scheme: DetectionScheme, scenario: &MziScenario) -> f64 {
    observable(scheme, scenario).1.expect(&moments(scenario)).re
}

/// Variance of the scheme's observable for ideal detectors.
pub fn observable_variance(scheme: DetectionScheme, scenario: &MziScenario) -> Result<f64> {
    detected_variance(scheme, scenario, 1.0)
}

/// Variance after detectors of efficiency `eta`, with the efficiency
/// folded back into the observable (so the mean is unchanged).
pub(crate) fn detected_variance(scheme: DetectionScheme, s: &MziScenario, eta: f64) -> Result<f64> {
    let ports = moments(s);
    let centred = [fluctuation_moments(&ports[0]), fluctuation_moments(&ports[1])];
    let (op, _) = observable(scheme, s);
    let fluct = op.displace([ports[0].mean_a, ports[1].mean_a]).without_constant();
    let mut var = fluct.mul(&fluct).expect(&centred).re - fluct.expect(&centred).re.powi(2);
    if eta < 1.0 {
        let k = (1.0 - eta) / eta;
        var += match scheme {
            DetectionScheme::DifferenceIntensity => k * s.mean_photons(),
            DetectionScheme::SingleModeIntensity => k * observable_mean(scheme, s),
            DetectionScheme::Homodyne { .. } => 0.25 * k,
        };
    }
    let floor = 1e-12 * scale(scheme, s).powi(2);
    if var < -floor {
        return Err(Error::NegativeVariance(var));
    }
    Ok(var.max(0.0))
}

pub(crate) fn detected_sensitivity(scheme: DetectionScheme, s: &MziScenario, eta: f64) -> Result<SensitivityPoint> {
    let var = detected_variance(scheme, s, eta)?;
    let slope = observable_slope(scheme, s);
    let phase = s.phase;
    if slope.abs() <= 1e-13 * scale(scheme, s) {
        return Ok(SensitivityPoint { phase, delta_phi: f64::INFINITY, diagnostic: Some(VANISHING_SLOPE) });
    }
    Ok(SensitivityPoint { phase, delta_phi: var.sqrt() / slope.abs(), diagnostic: None })
}

/// `Δφ = √Var / |∂⟨O⟩/∂φ|` at `scenario.phase` for ideal detectors.
pub fn sensitivity(scheme: DetectionScheme, scenario: &MziScenario) -> Result<SensitivityPoint> {
    detected_sensitivity(scheme, scenario, 1.0)
}

/// Best working point over `φ` for ideal detectors; the scenario phase is
/// ignored.
pub fn optimal_working_point(scheme: DetectionScheme, scenario: &MziScenario) -> Result<SensitivityPoint> {
    detected_optimum(scheme, scenario, 1.0)
}

pub(crate) fn detected_optimum(scheme: DetectionScheme, s: &MziScenario, eta: f64) -> Result<SensitivityPoint> {
    let at = |phi: f64| s.with_phase(phi);
    let var = |phi: f64| detected_variance(scheme, &at(phi), eta);
    let slope = |phi: f64| observable_slope(scheme, &at(phi));
    let tiny = 1e-13 * scale(scheme, s);
    match scheme {
        DetectionScheme::DifferenceIntensity => {
            let a = var(0.0)?;
            let b = var(FRAC_PI_2)?;
            let c = var(FRAC_PI_4)? - 0.5 * (a + b);
            let d = slope(FRAC_PI_2);
            let f = slope(0.0);
            if d.abs() <= tiny && f.abs() <= tiny {
                return Err(Error::FlatObjective);
            }
            let (phase, dphi2) = harmonic_optimum(a, b, c, d, f);
            Ok(SensitivityPoint { phase, delta_phi: dphi2.sqrt(), diagnostic: None })
        }
        DetectionScheme::Homodyne { .. } => {
            // X = sin(φ/2)·X₀ + cos(φ/2)·X₁ with independent X₀, X₁, so the
            // mean is s·p + c·q and the slope ½(c·p − s·q).
            let (v0, v1) = (var(PI)?, var(0.0)?);
            let p = observable_mean(scheme, &at(PI));
            let q = observable_mean(scheme, &at(0.0));
            if p.abs() <= tiny && q.abs() <= tiny {
                return Err(Error::FlatObjective);
            }
            let t = (-q / v0.max(f64::MIN_POSITIVE)).atan2(p / v1.max(f64::MIN_POSITIVE));
            let info = p * p / v1 + q * q / v0;
            let phase = canonical_angle(2.0 * t);
            Ok(SensitivityPoint { phase, delta_phi: 2.0 / info.sqrt(), diagnostic: None })
        }
        DetectionScheme::SingleModeIntensity => {
            let ports = moments(s);
            let dark = ports[0].mean_a.norm() == 0.0 || ports[1].mean_a.norm() == 0.0;
            if dark {
                single_mode_optimum(scheme, s, eta)
            } else {
                numeric_optimum(|phi| detected_sensitivity(scheme, &at(phi), eta).map(|p| p.delta_phi))
            }
        }
    }
}

/// Minimize `(a c² + b s² + 2c·s·c) / (d s + f c)²` over `φ`.
///
/// The stationarity condition is linear in `tan φ`, so there is a single
/// finite candidate plus `φ = π/2`; the smaller of the two is the optimum.
pub fn harmonic_optimum(a: f64, b: f64, c: f64, d: f64, f: f64) -> (f64, f64) {
    let value = |phi: f64| {
        let (sn, cs) = phi.sin_cos();
        let den = (d * sn + f * cs).powi(2);
        let num = a * cs * cs + b * sn * sn + 2.0 * c * sn * cs;
        if den == 0.0 {
            f64::INFINITY
        } else {
            num / den
        }
    };
    let num = a * d - c * f;
    let den = b * f - c * d;
    let stationary = if den == 0.0 { FRAC_PI_2 } else { (num / den).atan() };
    let candidates = [canonical_angle(stationary), FRAC_PI_2];
    candidates
        .into_iter()
        .map(|phi| (phi, value(phi)))
        .fold((FRAC_PI_2, f64::INFINITY), |best, x| if x.1 < best.1 { x } else { best })
}

/// Single-mode optimum when one port has zero displacement, where
/// `Var n₄ = s⁴V₀ + c⁴V₁ + s²c²W` and `∂⟨n₄⟩ = s c D` (`s, c` of `φ/2`).
fn single_mode_optimum(scheme: DetectionScheme, s: &MziScenario, eta: f64) -> Result<SensitivityPoint> {
    let at = |phi: f64| s.with_phase(phi);
    let v0 = detected_variance(scheme, &at(PI), eta)?;
    let v1 = detected_variance(scheme, &at(0.0), eta)?;
    let w = 4.0 * detected_variance(scheme, &at(FRAC_PI_2), eta)? - v0 - v1;
    let d = observable_mean(scheme, &at(PI)) - observable_mean(scheme, &at(0.0));
    if d.abs() <= 1e-13 * scale(scheme, s) {
        return Err(Error::FlatObjective);
    }
    // cos(π/2) is not exactly zero in floating point, so a dark fringe
    // leaves a rounding-level residue rather than an exact zero.
    let tiny = 1e-20 * (v0 + v1 + w.abs());
    if v0 <= tiny || v1 <= tiny {
        let phase = if v0 <= tiny { PI } else { 0.0 };
        return Ok(SensitivityPoint {
            phase,
            delta_phi: w.max(0.0).sqrt() / d.abs(),
            diagnostic: Some("infimum approached as the working point nears a dark fringe"),
        });
    }
    let t = (v1 / v0).sqrt().sqrt().atan();
    Ok(SensitivityPoint {
        phase: 2.0 * t,
        delta_phi: (2.0 * (v0 * v1).sqrt() + w).max(0.0).sqrt() / d.abs(),
        diagnostic: None,
    })
}

fn numeric_optimum(f: impl Fn(f64) -> Result<f64>) -> Result<SensitivityPoint> {
    let mut err = None;
    let g = |x: f64| match f(x) {
        Ok(v) => v,
        Err(e) => {
            err.get_or_insert(e);
            f64::INFINITY
        }
    };
    let (phase, delta_phi) = minimize_periodic(g, 720, 1e-9);
    if let Some(e) = err {
        return Err(e);
    }
    if !delta_phi.is_finite() {
        return Err(Error::FlatObjective);
    }
    Ok(SensitivityPoint { phase, delta_phi, diagnostic: None })
}

/// Minimize a `2π`-periodic function: uniform scan of `points` samples,
/// then golden-section refinement of the best bracket down to `tol`.
pub fn minimize_periodic(mut f: impl FnMut(f64) -> f64, points: usize, tol: f64) -> (f64, f64) {
    let step = TAU / points as f64;
    let (mut best_i, mut best) = (0, f64::INFINITY);
    for i in 0..points {
        let v = f(i as f64 * step);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    if !best.is_finite() {
        return (0.0, f64::INFINITY);
    }
    let centre = best_i as f64 * step;
    let (x, v) = golden_section(&mut f, centre - step, centre + step, tol);
    if v < best {
        (canonical_angle(x), v)
    } else {
        (centre, best)
    }
}

/// Golden-section search for a minimum in `[lo, hi]`.
pub fn golden_section(f: &mut impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Closed forms for the two input families, used to cross-check the
/// generic path.
pub mod closed_form {
    use crate::fisher::Magnitudes;
    use crate::fisher::Phases;
    use crate::states::{Coherent, Squeeze};
    use crate::upsilon::upsilon_minus;

    struct Parts {
        a2: f64,
        b2: f64,
        ab: f64,
        shr2: f64,
        shz2: f64,
        um_a_zeta: f64,
        um_a_xi: f64,
        um_b_xi: f64,
        um_b_zeta: f64,
        cross: f64,
    }

    fn parts(m: &Magnitudes, p: &Phases) -> Parts {
        let alpha = Coherent::new(m.alpha, p.theta_alpha);
        let beta = Coherent::new(m.beta, p.theta_beta);
        let xi = Squeeze::new(m.r, p.theta);
        let zeta = Squeeze::new(m.z, p.phi_zeta);
        let (r2, z2) = (2.0 * m.r, 2.0 * m.z);
        Parts {
            a2: m.alpha * m.alpha,
            b2: m.beta * m.beta,
            ab: m.alpha * m.beta,
            shr2: m.r.sinh().powi(2),
            shz2: m.z.sinh().powi(2),
            um_a_zeta: upsilon_minus(&alpha, &zeta),
            um_a_xi: upsilon_minus(&alpha, &xi),
            um_b_xi: upsilon_minus(&beta, &xi),
            um_b_zeta: upsilon_minus(&beta, &zeta),
            cross: 0.5 * (r2.cosh() * z2.cosh() + r2.sinh() * z2.sinh() * (p.theta - p.phi_zeta).cos() - 1.0),
        }
    }

    /// The `A, B, C, D, F` coefficients of the difference-intensity
    /// variance `A cos²φ + B sin²φ + C sin 2φ` and slope `D sin φ + F cos φ`
    /// (symmetric splitters).
    pub fn difference_coefficients(m: &Magnitudes, p: &Phases) -> [f64; 5] {
        let q = parts(m, p);
        let (r2, z2) = (2.0 * m.r, 2.0 * m.z);
        let dth = p.theta_alpha - p.theta_beta;
        let sum = p.theta_alpha + p.theta_beta;
        let a = 0.5 * r2.sinh().powi(2) + q.um_b_xi + 0.5 * z2.sinh().powi(2) + q.um_a_zeta;
        let b = q.um_b_zeta + q.um_a_xi + q.cross;
        let c = q.ab
            * (2.0 * (q.shr2 - q.shz2) * dth.cos() - r2.sinh() * (sum - p.theta).cos()
                + z2.sinh() * (sum - p.phi_zeta).cos());
        let d = q.a2 - q.b2 + q.shz2 - q.shr2;
        let f = 2.0 * q.ab * dth.cos();
        [a, b, c, d, f]
    }

    /// `⟨N_d⟩ = cos φ (|α|² + sinh²z − sinh²r)` for `β = 0`.
    pub fn difference_mean_sqz_vac(m: &Magnitudes, phi: f64) -> f64 {
        phi.cos() * (m.alpha * m.alpha + m.z.sinh().powi(2) - m.r.sinh().powi(2))
    }

    /// `Δ²N_d` for `β = 0`.
    pub fn difference_variance_sqz_vac(m: &Magnitudes, p: &Phases, phi: f64) -> f64 {
        let q = parts(m, p);
        let (r2, z2) = (2.0 * m.r, 2.0 * m.z);
        phi.cos().powi(2) * (0.5 * r2.sinh().powi(2) + 0.5 * z2.sinh().powi(2) + q.um_a_zeta)
            + phi.sin().powi(2) * (q.um_a_xi + q.cross)
    }

    /// Best difference-intensity sensitivity for `β = 0` (at `φ = π/2`).
    pub fn difference_best_sqz_vac(m: &Magnitudes, p: &Phases) -> f64 {
        let q = parts(m, p);
        (q.um_a_xi + q.cross).sqrt() / (q.a2 + q.shz2 - q.shr2).abs()
    }

    /// `⟨n₄⟩` for `β = 0`.
    pub fn single_mean_sqz_vac(m: &Magnitudes, phi: f64) -> f64 {
        let (s, c) = (0.5 * phi).sin_cos();
        s * s * m.r.sinh().powi(2) + c * c * (m.alpha * m.alpha + m.z.sinh().powi(2))
    }

    /// `Δ²n₄` for `β = 0`.
    pub fn single_variance_sqz_vac(m: &Magnitudes, p: &Phases, phi: f64) -> f64 {
        let q = parts(m, p);
        let (s, c) = (0.5 * phi).sin_cos();
        let (r2, z2) = (2.0 * m.r, 2.0 * m.z);
        c.powi(4) * (0.5 * z2.sinh().powi(2) + q.um_a_zeta)
            + s.powi(4) * 0.5 * r2.sinh().powi(2)
            + 0.25 * phi.sin().powi(2) * (q.um_a_xi + q.cross)
    }

    /// Optimal single-mode working point for `β = 0` (positive branch).
    pub fn single_phase_opt_sqz_vac(m: &Magnitudes, p: &Phases) -> f64 {
        let q = parts(m, p);
        let z2 = (2.0 * m.z).sinh().powi(2);
        let r2 = (2.0 * m.r).sinh().powi(2);
        2.0 * ((z2 + 2.0 * q.um_a_zeta) / r2).sqrt().sqrt().atan()
    }

    /// Best single-mode sensitivity for `β = 0`.
    pub fn single_best_sqz_vac(m: &Magnitudes, p: &Phases) -> f64 {
        let q = parts(m, p);
        let z2 = (2.0 * m.z).sinh().powi(2);
        let num = (2.0 * m.r).sinh() * (z2 + 2.0 * q.um_a_zeta).sqrt() + q.um_a_xi + q.cross;
        num.sqrt() / (q.a2 + q.shz2 - q.shr2).abs()
    }

    /// Homodyne `Δφ(φ)` for `β = 0` with `φ_L = θ_α`.
    pub fn homodyne_sqz_vac(m: &Magnitudes, p: &Phases, phi: f64) -> f64 {
        let q = parts(m, p);
        let cot = 1.0 / (0.5 * phi).tan();
        (q.um_a_xi + cot * cot * q.um_a_zeta).sqrt() / q.a2
    }

    /// Best homodyne sensitivity for the general state with `φ_L = θ_α`.
    pub fn homodyne_best(m: &Magnitudes, p: &Phases) -> f64 {
        let q = parts(m, p);
        let cos = (p.theta_alpha - p.theta_beta).cos();
        (q.um_a_xi * q.um_a_zeta).sqrt() / (m.alpha * (q.b2 * cos * cos * q.um_a_xi + q.a2 * q.um_a_zeta).sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fisher::{Magnitudes, Phases};
    use crate::interferometer::BsConvention;
    use crate::states::{Coherent, GaussianPort};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    fn pmc_phases() -> Phases {
        Phases { phi_zeta: PI, ..Default::default() }
    }

    #[test]
    fn coherent_shot_noise() {
        let s = MziScenario::new(GaussianPort::coherent(Coherent::new(3.0, 0.2)), GaussianPort::vacuum())
            .with_phase(FRAC_PI_2);
        let d = DetectionScheme::DifferenceIntensity;
        for phi in [0.3, 1.0, 2.5] {
            assert!(rel(observable_variance(d, &s.with_phase(phi)).unwrap(), 9.0) < 1e-12);
        }
        assert!(rel(sensitivity(d, &s).unwrap().delta_phi, 1.0 / 3.0) < 1e-12);
    }

    #[test]
    fn vacuum_means_vanish_and_slope_is_flagged() {
        let s = MziScenario::new(GaussianPort::vacuum(), GaussianPort::vacuum()).with_phase(0.4);
        for d in [DetectionScheme::DifferenceIntensity, DetectionScheme::SingleModeIntensity, DetectionScheme::homodyne()] {
            assert_eq!(observable_mean(d, &s), 0.0);
            assert!(sensitivity(d, &s).unwrap().delta_phi.is_infinite());
            assert_eq!(optimal_working_point(d, &s), Err(Error::FlatObjective));
        }
    }

    #[test]
    fn sqz_vac_family_matches_closed_forms() {
        let m = Magnitudes::new(1.0, 0.0, 0.5, 0.4);
        for p in [pmc_phases(), Phases { theta_alpha: 0.3, theta: 1.2, phi_zeta: 2.0, theta_beta: 0.0 }] {
            let s = m.scenario(&p, BsConvention::Symmetric);
            for phi in [0.2, PI / 3.0, 1.9, 4.0] {
                let at = s.with_phase(phi);
                let d = DetectionScheme::DifferenceIntensity;
                assert!(rel(observable_mean(d, &at), closed_form::difference_mean_sqz_vac(&m, phi)) < 1e-12);
                assert!(rel(observable_variance(d, &at).unwrap(), closed_form::difference_variance_sqz_vac(&m, &p, phi)) < 1e-12);
                let sg = DetectionScheme::SingleModeIntensity;
                assert!(rel(observable_mean(sg, &at), closed_form::single_mean_sqz_vac(&m, phi)) < 1e-12);
                assert!(rel(observable_variance(sg, &at).unwrap(), closed_form::single_variance_sqz_vac(&m, &p, phi)) < 1e-12);
            }
            let sg = optimal_working_point(DetectionScheme::SingleModeIntensity, &s).unwrap();
            assert!(rel(sg.delta_phi, closed_form::single_best_sqz_vac(&m, &p)) < 1e-12);
            assert!((sg.phase - closed_form::single_phase_opt_sqz_vac(&m, &p)).abs() < 1e-12);
            let df = optimal_working_point(DetectionScheme::DifferenceIntensity, &s).unwrap();
            assert!(rel(df.delta_phi, closed_form::difference_best_sqz_vac(&m, &p)) < 1e-12);
        }
    }

    #[test]
    fn homodyne_pmc_reaches_squeezed_shot_noise() {
        let m = Magnitudes::new(2.0, 0.0, 0.7, 0.4);
        let s = m.scenario(&pmc_phases(), BsConvention::Symmetric).with_phase(PI);
        let h = sensitivity(DetectionScheme::homodyne(), &s).unwrap();
        assert!(rel(h.delta_phi, (-0.7f64).exp() / 2.0) < 1e-12);
        let best = optimal_working_point(DetectionScheme::homodyne(), &s).unwrap();
        assert!(rel(best.delta_phi, (-0.7f64).exp() / 2.0) < 1e-12);
        assert!((best.phase - PI).abs() < 1e-9);
        for phi in [0.5, 2.0, 3.0] {
            let v = sensitivity(DetectionScheme::homodyne(), &s.with_phase(phi)).unwrap().delta_phi;
            assert!(rel(v, closed_form::homodyne_sqz_vac(&m, &pmc_phases(), phi)) < 1e-12);
        }
    }

    #[test]
    fn difference_coefficients_match_generic() {
        let m = Magnitudes::new(1.1, 0.6, 0.4, 0.3);
        let p = Phases { theta_alpha: 0.4, theta_beta: 1.3, theta: 2.2, phi_zeta: 0.9 };
        let s = m.scenario(&p, BsConvention::Symmetric);
        let [a, b, c, d, f] = closed_form::difference_coefficients(&m, &p);
        let dd = DetectionScheme::DifferenceIntensity;
        for phi in [0.0, 0.7, 2.1, 5.0] {
            let at = s.with_phase(phi);
            let var = a * phi.cos().powi(2) + b * phi.sin().powi(2) + c * (2.0 * phi).sin();
            assert!(rel(observable_variance(dd, &at).unwrap(), var) < 1e-11);
            let slope = d * phi.sin() + f * phi.cos();
            assert!((observable_slope(dd, &at).abs() - slope.abs()).abs() < 1e-11);
        }
        let (phase, best) = harmonic_optimum(a, b, c, d, f);
        let opt = optimal_working_point(dd, &s).unwrap();
        assert!(rel(opt.delta_phi, best.sqrt()) < 1e-10);
        let scanned = (0..10_000)
            .map(|i| sensitivity(dd, &s.with_phase(i as f64 * TAU / 1e4)).unwrap().delta_phi)
            .fold(f64::INFINITY, f64::min);
        assert!(opt.delta_phi <= scanned * (1.0 + 1e-12));
        assert!(phase.is_finite());
    }

    #[test]
    fn general_homodyne_matches_closed_form() {
        let m = Magnitudes::new(1.4, 0.8, 0.5, 0.3);
        let p = Phases { theta_alpha: 0.2, theta_beta: 0.9, theta: 0.4, phi_zeta: 1.7 };
        let s = m.scenario(&p, BsConvention::Symmetric);
        let best = optimal_working_point(DetectionScheme::homodyne(), &s).unwrap();
        assert!(rel(best.delta_phi, closed_form::homodyne_best(&m, &p)) < 1e-12);
        let at = sensitivity(DetectionScheme::homodyne(), &s.with_phase(best.phase)).unwrap();
        assert!(rel(at.delta_phi, best.delta_phi) < 1e-10);
    }

    #[test]
    fn numeric_single_mode_matches_scan() {
        let m = Magnitudes::new(1.4, 0.8, 0.5, 0.3);
        let p = Phases { theta_alpha: 0.2, theta_beta: 0.9, theta: 0.4, phi_zeta: 1.7 };
        for conv in [BsConvention::Symmetric, BsConvention::Cube] {
            let s = m.scenario(&p, conv);
            let opt = optimal_working_point(DetectionScheme::SingleModeIntensity, &s).unwrap();
            let at = sensitivity(DetectionScheme::SingleModeIntensity, &s.with_phase(opt.phase)).unwrap();
            assert!(rel(at.delta_phi, opt.delta_phi) < 1e-12);
            let scanned = (0..4000)
                .map(|i| sensitivity(DetectionScheme::SingleModeIntensity, &s.with_phase(i as f64 * TAU / 4e3)).unwrap().delta_phi)
                .fold(f64::INFINITY, f64::min);
            assert!(opt.delta_phi <= scanned * (1.0 + 1e-12));
        }
    }

    #[test]
    fn dark_port_single_mode_limit() {
        let s = MziScenario::new(GaussianPort::coherent(Coherent::new(2.0, 0.0)), GaussianPort::vacuum());
        let opt = optimal_working_point(DetectionScheme::SingleModeIntensity, &s).unwrap();
        assert_eq!(opt.phase, PI);
        assert!(rel(opt.delta_phi, 0.5) < 1e-12);
        assert!(opt.diagnostic.is_some());
        let near = sensitivity(DetectionScheme::SingleModeIntensity, &s.with_phase(PI - 1e-4)).unwrap();
        assert!(rel(near.delta_phi, 0.5) < 1e-6);
    }

    #[test]
    fn single_mode_optimum_branches_agree() {
        let m = Magnitudes::new(3.0, 0.0, 0.8, 0.6);
        let p = pmc_phases();
        let s = m.scenario(&p, BsConvention::Symmetric);
        let phi = closed_form::single_phase_opt_sqz_vac(&m, &p);
        let at = |x: f64| sensitivity(DetectionScheme::SingleModeIntensity, &s.with_phase(x)).unwrap().delta_phi;
        assert!(rel(at(-phi), at(phi)) < 1e-12);
    }

    #[test]
    fn golden_section_finds_cosine_minimum() {
        let (x, v) = minimize_periodic(|x| (x - 1.234).cos() * -1.0, 720, 1e-9);
        assert!((x - 1.234).abs() < 1e-6);
        assert!((v + 1.0).abs() < 1e-12);
    }
}
