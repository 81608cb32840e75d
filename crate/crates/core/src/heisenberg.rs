//! Heisenberg-scaling analysis: the QFI of each phase-matching family in
//! terms of the fractions of the total mean photon number carried by each
//! resource, in the limit where every resource is large.

use crate::error::{Error, Result};
use crate::fisher::Magnitudes;
use crate::pmc::PmcSet;

/// `f_α = |α|²/N`, `f_β = |β|²/N`, `f_r = sinh²r/N`, `f_z = sinh²z/N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerFractions {
    pub f_alpha: f64,
    pub f_beta: f64,
    pub f_r: f64,
    pub f_z: f64,
    pub n_tot: f64,
}

impl PowerFractions {
    pub fn new(f_alpha: f64, f_beta: f64, f_r: f64, f_z: f64, n_tot: f64) -> Result<Self> {
        let f = [f_alpha, f_beta, f_r, f_z];
        if f.iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(Error::InvalidArgument(format!("fractions {f:?} must lie in [0, 1]")));
        }
        let sum: f64 = f.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("fractions sum to {sum}, not 1")));
        }
        if !(n_tot > 0.0) {
            return Err(Error::InvalidArgument(format!("total photon number {n_tot} must be positive")));
        }
        Ok(PowerFractions { f_alpha, f_beta, f_r, f_z, n_tot })
    }

    pub fn from_magnitudes(m: &Magnitudes) -> Result<Self> {
        let n = m.mean_photons();
        if !(n > 0.0) {
            return Err(Error::InvalidArgument("all resources are zero".into()));
        }
        Ok(PowerFractions {
            f_alpha: m.alpha * m.alpha / n,
            f_beta: m.beta * m.beta / n,
            f_r: m.r.sinh().powi(2) / n,
            f_z: m.z.sinh().powi(2) / n,
            n_tot: n,
        })
    }

    /// Inverts `sinh²s = f·N` exactly.
    pub fn magnitudes(&self) -> Magnitudes {
        let n = self.n_tot;
        Magnitudes::new(
            (self.f_alpha * n).sqrt(),
            (self.f_beta * n).sqrt(),
            (self.f_r * n).sqrt().asinh(),
            (self.f_z * n).sqrt().asinh(),
        )
    }
}

/// Leading-order QFI for large resources.
pub fn asymptotic_qfi(pmc: PmcSet, f: &PowerFractions) -> f64 {
    let (fa, fb, fr, fz) = (f.f_alpha, f.f_beta, f.f_r, f.f_z);
    let shape = match pmc {
        PmcSet::Pmc1 | PmcSet::SqzVacOptimal => fr * (fa + fz),
        PmcSet::Pmc2 | PmcSet::SqzVacWideband => fa * fr + fb * fz,
        PmcSet::Pmc3 => {
            let den = 0.5 * fr * fr + 0.5 * fz * fz + fa * fz + fb * fr;
            let corr = if den > 0.0 { fa * fb * (fr + fz).powi(2) / den } else { 0.0 };
            fa * fr + fb * fz + fr * fz - corr
        }
    };
    4.0 * f.n_tot * f.n_tot * shape
}

/// One branch of an optimizing manifold: the listed fractions are pinned,
/// the rest are free (subject to summing to one).
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub f_alpha: Option<f64>,
    pub f_beta: Option<f64>,
    pub f_r: Option<f64>,
    pub f_z: Option<f64>,
}

impl Branch {
    fn contains(&self, f: &PowerFractions, tol: f64) -> bool {
        [(self.f_alpha, f.f_alpha), (self.f_beta, f.f_beta), (self.f_r, f.f_r), (self.f_z, f.f_z)]
            .iter()
            .all(|(pin, v)| pin.is_none_or(|p| (p - v).abs() <= tol))
    }

    /// A representative point with the free fractions sharing the rest
    /// equally.
    pub fn representative(&self, n_tot: f64) -> PowerFractions {
        let pins = [self.f_alpha, self.f_beta, self.f_r, self.f_z];
        let used: f64 = pins.iter().flatten().sum();
        let free = pins.iter().filter(|p| p.is_none()).count();
        let share = if free > 0 { (1.0 - used) / free as f64 } else { 0.0 };
        let v: Vec<f64> = pins.iter().map(|p| p.unwrap_or(share)).collect();
        PowerFractions { f_alpha: v[0], f_beta: v[1], f_r: v[2], f_z: v[3], n_tot }
    }
}

/// Fraction sets on which `F/N²` reaches its maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct HeisenbergOptima {
    pub branches: Vec<Branch>,
    /// Maximum of `F/N²`.
    pub attained: f64,
}

impl HeisenbergOptima {
    pub fn contains(&self, f: &PowerFractions, tol: f64) -> bool {
        self.branches.iter().any(|b| b.contains(f, tol))
    }
}

fn branch(f_alpha: Option<f64>, f_beta: Option<f64>, f_r: Option<f64>, f_z: Option<f64>) -> Branch {
    Branch { f_alpha, f_beta, f_r, f_z }
}

/// The optimizing manifold for each family.
///
/// For PMC3 the maximum is reached on two branches, `f_β = 0, f_r = ½` and
/// `f_α = 0, f_z = ½`; their intersection is the two-squeezed-vacuum point
/// `f_r = f_z = ½`.
pub fn heisenberg_optima(pmc: PmcSet) -> HeisenbergOptima {
    let h = Some(0.5);
    let zero = Some(0.0);
    let branches = match pmc {
        PmcSet::Pmc1 | PmcSet::SqzVacOptimal => vec![branch(None, zero, h, None)],
        PmcSet::Pmc2 => vec![branch(h, zero, h, zero), branch(zero, h, zero, h)],
        PmcSet::SqzVacWideband => vec![branch(h, zero, h, zero)],
        PmcSet::Pmc3 => vec![branch(None, zero, h, None), branch(zero, None, None, h)],
    };
    HeisenbergOptima { branches, attained: 1.0 }
}
