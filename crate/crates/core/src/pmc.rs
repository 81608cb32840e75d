//! Phase-matching conditions, the limit amplitudes separating the regimes in
//! which each one maximizes the QFI, the regime classifier and a brute-force
//! phase search that checks them.

use crate::error::{Error, Result};
use crate::fisher::{fisher_matrix, qfi, qfi_closed_form, Magnitudes, PhaseSpec, Phases};
use crate::interferometer::{BsConvention, MziScenario};
use crate::states::canonical_angle;
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PmcSet {
    /// `2θ_α − θ = 0`, `φ_ζ − θ = π`, `θ_α − θ_β = 0`
    Pmc1,
    /// `2θ_α − θ = 0`, `φ_ζ − θ = 0`, `θ_α − θ_β = 0`
    Pmc2,
    /// `2θ_α − θ = 0`, `2θ_β − φ_ζ = 0`, `θ_α − θ_β = π/2`
    Pmc3,
    /// Squeezed-coherent plus squeezed-vacuum optimum: `2θ_α − θ = 0`,
    /// `θ − φ_ζ = π`.
    SqzVacOptimal,
    /// The flatter `θ − φ_ζ = 0` variant of [`PmcSet::SqzVacOptimal`].
    SqzVacWideband,
}

impl PmcSet {
    pub const GENERAL: [PmcSet; 3] = [PmcSet::Pmc1, PmcSet::Pmc2, PmcSet::Pmc3];

    pub fn name(&self) -> &'static str {
        match self {
            PmcSet::Pmc1 => "PMC1",
            PmcSet::Pmc2 => "PMC2",
            PmcSet::Pmc3 => "PMC3",
            PmcSet::SqzVacOptimal => "sqzvac-optimal",
            PmcSet::SqzVacWideband => "sqzvac-wideband",
        }
    }

    pub fn parse(s: &str) -> Option<PmcSet> {
        match s.to_ascii_lowercase().as_str() {
            "pmc1" | "1" => Some(PmcSet::Pmc1),
            "pmc2" | "2" => Some(PmcSet::Pmc2),
            "pmc3" | "3" => Some(PmcSet::Pmc3),
            "sqzvac-optimal" => Some(PmcSet::SqzVacOptimal),
            "sqzvac-wideband" => Some(PmcSet::SqzVacWideband),
            _ => None,
        }
    }

    /// `(θ_β − θ_α, θ − 2θ_α, φ_ζ − 2θ_α)` in units of `π/2` for the
    /// symmetric convention.
    fn offsets(&self) -> [i32; 3] {
        match self {
            PmcSet::Pmc1 | PmcSet::SqzVacOptimal => [0, 0, 2],
            PmcSet::Pmc2 | PmcSet::SqzVacWideband => [0, 0, 0],
            PmcSet::Pmc3 => [-1, 0, -2],
        }
    }
}

impl std::fmt::Display for PmcSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Concrete phases realizing `set` with reference `θ_α`.
///
/// The cube convention is the symmetric one with `β → iβ`, `ξ → −ξ`, so its
/// sets shift `θ_β` by `+π/2` and `θ` by `−π`.
pub fn pmc_phases(set: PmcSet, theta_alpha: f64, convention: BsConvention) -> Phases {
    let [b, t, z] = set.offsets();
    let (b, t) = match convention {
        BsConvention::Symmetric => (b, t),
        BsConvention::Cube => (b + 1, t - 2),
    };
    let q = |k: i32| k as f64 * FRAC_PI_2;
    Phases {
        theta_alpha: canonical_angle(theta_alpha),
        theta_beta: canonical_angle(theta_alpha + q(b)),
        theta: canonical_angle(2.0 * theta_alpha + q(t)),
        phi_zeta: canonical_angle(2.0 * theta_alpha + q(z)),
    }
}

/// Fully phased scenario for `set`.
pub fn apply_pmc(set: PmcSet, theta_alpha: f64, magnitudes: &Magnitudes, convention: BsConvention) -> MziScenario {
    magnitudes.scenario(&pmc_phases(set, theta_alpha, convention), convention)
}

/// Which of the three general sets `phases` realizes, if any. `θ_β` is
/// compared modulo `π` since shifting it by `π` only flips the sign of
/// `F_sd`.
pub fn identify_pmc(phases: &Phases, convention: BsConvention, tol: f64) -> Option<PmcSet> {
    let near = |x: f64, period: f64| {
        let y = x.rem_euclid(period);
        y.min(period - y) < tol
    };
    let p = match convention {
        BsConvention::Symmetric => *phases,
        BsConvention::Cube => Phases {
            theta_beta: phases.theta_beta - FRAC_PI_2,
            theta: phases.theta + PI,
            ..*phases
        },
    };
    if !near(p.theta - 2.0 * p.theta_alpha, TAU) {
        return None;
    }
    let db = p.theta_beta - p.theta_alpha;
    let dz = p.phi_zeta - p.theta;
    let squeezers_opposed = near(dz - PI, TAU);
    let squeezers_aligned = near(dz, TAU);
    if near(db, PI) && squeezers_opposed {
        Some(PmcSet::Pmc1)
    } else if near(db, PI) && squeezers_aligned {
        Some(PmcSet::Pmc2)
    } else if near(db - FRAC_PI_2, PI) && squeezers_opposed {
        Some(PmcSet::Pmc3)
    } else {
        None
    }
}

/// `S = (sinh²2r + sinh²2z)/2`
fn s_term(r: f64, z: f64) -> f64 {
    0.5 * ((2.0 * r).sinh().powi(2) + (2.0 * z).sinh().powi(2))
}

/// Limit amplitudes at fixed squeezing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeBoundaries {
    pub r: f64,
    pub z: f64,
    /// PMC1/PMC3 crossing at `|β| → 0`.
    pub alpha_13: f64,
    /// Lower end of the `α`-range where PMC3 hands over to PMC2.
    pub alpha_23: f64,
    /// Triple point where the three `β`-curves meet.
    pub alpha_circ: f64,
    /// PMC1/PMC2 crossing, independent of `|α|`.
    pub beta_12: f64,
}

impl RegimeBoundaries {
    /// `(sinh²2r + sinh²2z)/2`
    pub fn s(&self) -> f64 {
        s_term(self.r, self.z)
    }

    /// `|β|` at which PMC2 and PMC3 give equal QFI, for the given `|α|`.
    pub fn beta_23(&self, alpha: f64) -> Result<f64> {
        let (r, z) = (self.r, self.z);
        let p = (2.0 * r).sinh() * (2.0 * z).sinh();
        let a2e = alpha * alpha * (2.0 * z).exp();
        let den = (2.0 * r).exp() * (4.0 * a2e * (r - z).cosh().powi(2) - p);
        if !(den > 0.0) {
            return Err(Error::UndefinedBoundary {
                name: "beta_23",
                reason: format!("denominator {den:e} is not positive at |alpha| = {alpha}"),
            });
        }
        Ok((p * (self.s() + a2e) / den).sqrt())
    }

    /// `|β|` at which PMC1 and PMC3 give equal QFI, for the given `|α|`.
    pub fn beta_13(&self, alpha: f64) -> Result<f64> {
        let (r, z) = (self.r, self.z);
        let sz = (2.0 * z).sinh();
        if sz <= 0.0 {
            return Err(Error::UndefinedBoundary { name: "beta_13", reason: "requires z > 0".into() });
        }
        let rad = alpha * alpha * (2.0 * (2.0 * r).exp() * (r - z).cosh().powi(2) / sz - 1.0)
            - self.s() * (-2.0 * z).exp();
        if rad < 0.0 {
            return Err(Error::UndefinedBoundary {
                name: "beta_13",
                reason: format!("radicand {rad:e} is negative at |alpha| = {alpha}"),
            });
        }
        Ok((z - r).exp() * rad.sqrt())
    }
}

/// The limit amplitudes for squeezing factors `r` (port 0) and `z` (port 1).
pub fn boundaries(r: f64, z: f64) -> RegimeBoundaries {
    let s = s_term(r, z);
    let (e2r, e2z) = ((2.0 * r).exp(), (2.0 * z).exp());
    let (sr, sz) = ((2.0 * r).sinh(), (2.0 * z).sinh());
    let den = e2r * (e2r + 2.0 * e2z) + 1.0;
    RegimeBoundaries {
        r,
        z,
        alpha_13: (2.0 * s * sz / den).sqrt(),
        alpha_23: (-z).exp() * (sr * sz).sqrt() / (2.0 * (r - z).cosh()),
        alpha_circ: ((e2r * sr * sz + 2.0 * s * sz) / den).sqrt(),
        beta_12: (0.5 * sr).sqrt(),
    }
}

/// Above this `|α|` the `θ − φ_ζ = 0` variant gives the better single-mode
/// intensity sensitivity for the squeezed-coherent plus squeezed-vacuum
/// input.
pub fn single_mode_alpha_lim(z: f64) -> f64 {
    let c = (2.0 * z).cosh();
    (c + (4.0 * c * c - 3.0).sqrt()).sqrt() / 2.0
}

/// The general set with the largest closed-form QFI. Exact ties go to the
/// lower-numbered set.
pub fn classify(alpha: f64, beta: f64, r: f64, z: f64) -> PmcSet {
    let m = Magnitudes::new(alpha, beta, r, z);
    let mut best = (PmcSet::Pmc1, f64::NEG_INFINITY);
    for set in PmcSet::GENERAL {
        let f = qfi_closed_form(&m, PhaseSpec::Pmc(set), BsConvention::Symmetric);
        if f > best.1 {
            best = (set, f);
        }
    }
    best.0
}

/// Which phases the grid search varies (`θ_α = 0` throughout).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchSpace {
    /// `θ_β`, `θ` and `φ_ζ` all free.
    Full,
    /// Port 1 is the reference: `θ = 2θ_α` is fixed and only `θ_β`, `φ_ζ`
    /// vary.
    AlphaPrimary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptimum {
    /// Best lattice point.
    pub lattice: Phases,
    pub lattice_qfi: f64,
    /// After coordinate-wise refinement from the lattice point.
    pub refined: Phases,
    pub qfi: f64,
}

impl GridOptimum {
    /// Largest distance of a refined phase from the `π/2` lattice.
    pub fn lattice_distance(&self) -> f64 {
        let d = |x: f64| {
            let y = x.rem_euclid(FRAC_PI_2);
            y.min(FRAC_PI_2 - y)
        };
        d(self.refined.theta_beta).max(d(self.refined.theta)).max(d(self.refined.phi_zeta))
    }
}

fn qfi_at(m: &Magnitudes, p: &Phases, convention: BsConvention) -> f64 {
    let fm = fisher_matrix(&m.scenario(p, convention));
    qfi(&fm).unwrap_or(0.0)
}

/// Exhaustive maximization of the QFI over the phase differences on a
/// `resolution`-point grid per axis, then golden-section refinement along
/// each axis. A refinement step is kept only if it improves the QFI by more
/// than `1e-12` relative.
pub fn grid_search_qfi(
    alpha: f64,
    beta: f64,
    r: f64,
    z: f64,
    resolution: usize,
    space: SearchSpace,
    convention: BsConvention,
) -> Result<GridOptimum> {
    if resolution < 8 {
        return Err(Error::InvalidArgument(format!("resolution {resolution} is below 8")));
    }
    let m = Magnitudes::new(alpha, beta, r, z);
    let step = TAU / resolution as f64;
    let n_theta = match space {
        SearchSpace::Full => resolution,
        SearchSpace::AlphaPrimary => 1,
    };
    let point = |idx: usize| {
        let ib = idx % resolution;
        let iz = (idx / resolution) % resolution;
        let it = idx / (resolution * resolution);
        Phases { theta_alpha: 0.0, theta_beta: ib as f64 * step, theta: it as f64 * step, phi_zeta: iz as f64 * step }
    };
    let total = resolution * resolution * n_theta;
    let (best_idx, best) = (0..total)
        .into_par_iter()
        .map(|i| (i, qfi_at(&m, &point(i), convention)))
        .reduce(
            || (usize::MAX, f64::NEG_INFINITY),
            |a, b| {
                if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
                    b
                } else {
                    a
                }
            },
        );
    let lattice = point(best_idx);
    let mut refined = lattice;
    let mut value = best;
    let axes: &[usize] = match space {
        SearchSpace::Full => &[0, 1, 2],
        SearchSpace::AlphaPrimary => &[0, 2],
    };
    for _ in 0..3 {
        for &axis in axes {
            let set = |p: &mut Phases, x: f64| match axis {
                0 => p.theta_beta = x,
                1 => p.theta = x,
                _ => p.phi_zeta = x,
            };
            let start = match axis {
                0 => refined.theta_beta,
                1 => refined.theta,
                _ => refined.phi_zeta,
            };
            let mut f = |x: f64| {
                let mut p = refined;
                set(&mut p, x);
                -qfi_at(&m, &p, convention)
            };
            let (x, v) = crate::detection::golden_section(&mut f, start - step, start + step, 1e-10);
            if -v > value * (1.0 + 1e-12) {
                set(&mut refined, canonical_angle(x));
                value = -v;
            }
        }
    }
    Ok(GridOptimum { lattice, lattice_qfi: best, refined, qfi: value })
}
