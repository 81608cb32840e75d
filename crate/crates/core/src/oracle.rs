//! Brute-force two-mode simulator in a truncated Fock basis.
//!
//! States are built by exponentiating the squeeze and displacement
//! generators on a padded single-mode space, multiplied into a two-mode
//! amplitude table truncated to `n₀ + n₁ ≤ n_max`, and propagated with the
//! beam splitters realized as exponentials of their quadratic generators on
//! each photon-number shell. Nothing here reuses the moment formulas, which
//! is what makes it useful as a cross-check.

use crate::error::{Error, Result};
use crate::fisher::FisherMatrix;
use crate::interferometer::{arm_phases, BsConvention, MziScenario};
use crate::states::GaussianPort;
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_4;

/// Largest tail mass accepted after preparation.
pub const TAIL_TOL: f64 = 1e-10;

/// Extra single-mode levels used while exponentiating, before truncation.
const PAD: usize = 30;

type C = Complex64;

fn zero() -> C {
    C::new(0.0, 0.0)
}

/// Two-mode amplitudes `ψ(n₀, n₁)` with `n₀ + n₁ ≤ n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    n_max: usize,
    amps: Vec<C>,
}

impl FockVector {
    pub fn zeros(n_max: usize) -> Self {
        FockVector { n_max, amps: vec![zero(); (n_max + 1) * (n_max + 1)] }
    }

    /// `|n₀, n₁⟩`
    pub fn basis(n_max: usize, n0: usize, n1: usize) -> Self {
        assert!(n0 + n1 <= n_max, "basis state outside the truncation");
        let mut v = Self::zeros(n_max);
        *v.at_mut(n0, n1) = C::new(1.0, 0.0);
        v
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    fn idx(&self, n0: usize, n1: usize) -> usize {
        n0 * (self.n_max + 1) + n1
    }

    pub fn at(&self, n0: usize, n1: usize) -> C {
        self.amps[self.idx(n0, n1)]
    }

    fn at_mut(&mut self, n0: usize, n1: usize) -> &mut C {
        let i = self.idx(n0, n1);
        &mut self.amps[i]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &FockVector) -> C {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn fidelity(&self, other: &FockVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Mass in the two highest occupied shells.
    pub fn top_shell_mass(&self) -> f64 {
        let mut m = 0.0;
        for (n0, n1, c) in self.iter() {
            if n0 + n1 + 1 >= self.n_max {
                m += c.norm_sqr();
            }
        }
        m
    }

    fn iter(&self) -> impl Iterator<Item = (usize, usize, C)> + '_ {
        let n = self.n_max;
        (0..=n).flat_map(move |n0| (0..=n - n0).map(move |n1| (n0, n1, self.at(n0, n1))))
    }

    fn shell(&self, total: usize) -> Vec<C> {
        (0..=total).map(|n0| self.at(n0, total - n0)).collect()
    }

    fn set_shell(&mut self, total: usize, v: &[C]) {
        for (n0, c) in v.iter().enumerate() {
            *self.at_mut(n0, total - n0) = *c;
        }
    }

    /// Multiply `|n₀, n₁⟩` by `e^{i(p₀n₀ + p₁n₁)}`.
    pub fn phase_shift(&self, p: [f64; 2]) -> FockVector {
        let mut out = self.clone();
        for (n0, n1, c) in self.iter() {
            *out.at_mut(n0, n1) = c * C::from_polar(1.0, p[0] * n0 as f64 + p[1] * n1 as f64);
        }
        out
    }

    fn scale_shells(&self, g: C) -> FockVector {
        let mut out = self.clone();
        for (n0, n1, c) in self.iter() {
            *out.at_mut(n0, n1) = c * g.powu((n0 + n1) as u32);
        }
        out
    }

    fn axpy(&self, a: f64, other: &FockVector) -> FockVector {
        let amps = self.amps.iter().zip(&other.amps).map(|(x, y)| x + y * a).collect();
        FockVector { n_max: self.n_max, amps }
    }
}

/// Apply `exp(G)` to `v` for a linear map `g` with `‖G‖ ≤ bound`, in
/// sub-steps of norm at most two, each summed as a Taylor series.
fn expm_apply(v: &[C], bound: f64, g: impl Fn(&[C]) -> Vec<C>) -> Vec<C> {
    let steps = (0.5 * bound).ceil().max(1.0) as usize;
    let inv = 1.0 / steps as f64;
    let mut out = v.to_vec();
    for _ in 0..steps {
        let mut term = out.clone();
        let mut acc = out.clone();
        for k in 1..60 {
            term = g(&term).into_iter().map(|x| x * (inv / k as f64)).collect();
            let size = term.iter().map(|x| x.norm()).fold(0.0, f64::max);
            for (a, t) in acc.iter_mut().zip(&term) {
                *a += t;
            }
            if size < 1e-18 {
                break;
            }
        }
        out = acc;
    }
    out
}

/// `D(α) S(χ)|0⟩` in a `dim`-level space.
fn single_mode(port: &GaussianPort, dim: usize) -> Vec<C> {
    let mut v = vec![zero(); dim];
    v[0] = C::new(1.0, 0.0);
    let sq = port.squeeze.value();
    if sq.norm() > 0.0 {
        // (χ* a² − χ a†²)/2
        let g = |x: &[C]| {
            let mut y = vec![zero(); dim];
            for n in 0..dim {
                if n + 2 < dim {
                    y[n] += sq.conj() * 0.5 * (((n + 1) * (n + 2)) as f64).sqrt() * x[n + 2];
                }
                if n >= 2 {
                    y[n] -= sq * 0.5 * ((n * (n - 1)) as f64).sqrt() * x[n - 2];
                }
            }
            y
        };
        v = expm_apply(&v, sq.norm() * dim as f64, g);
    }
    let al = port.displacement.value();
    if al.norm() > 0.0 {
        // α a† − α* a
        let g = |x: &[C]| {
            let mut y = vec![zero(); dim];
            for n in 0..dim {
                if n >= 1 {
                    y[n] += al * (n as f64).sqrt() * x[n - 1];
                }
                if n + 1 < dim {
                    y[n] -= al.conj() * ((n + 1) as f64).sqrt() * x[n + 1];
                }
            }
            y
        };
        v = expm_apply(&v, 2.0 * al.norm() * (dim as f64).sqrt(), g);
    }
    v
}

/// The product state `D₁S₁D₀S₀|0⟩` truncated at `n_max`.
pub fn prepare(scenario: &MziScenario, n_max: usize) -> Result<FockVector> {
    prepare_ports(&scenario.port0, &scenario.port1, n_max)
}

pub fn prepare_ports(port0: &GaussianPort, port1: &GaussianPort, n_max: usize) -> Result<FockVector> {
    let dim = n_max + PAD;
    let a = single_mode(port0, dim);
    let b = single_mode(port1, dim);
    let full: f64 = a.iter().map(|c| c.norm_sqr()).sum::<f64>() * b.iter().map(|c| c.norm_sqr()).sum::<f64>();
    let mut v = FockVector::zeros(n_max);
    for n0 in 0..=n_max {
        for n1 in 0..=n_max - n0 {
            *v.at_mut(n0, n1) = a[n0] * b[n1];
        }
    }
    let tail = (full - v.norm_sqr()).max(0.0) + v.top_shell_mass();
    if tail >= TAIL_TOL {
        return Err(Error::Truncation { tail, n_max });
    }
    Ok(v)
}

/// Apply the passive unitary `U = exp(i Σ H_kj a_k† a_j)`, which maps
/// `a_j† → Σ_k (e^{iH})_kj a_k†`.
pub fn apply_passive(state: &FockVector, h: [[C; 2]; 2]) -> FockVector {
    let diag = h[0][0].norm() + h[1][1].norm();
    let off = h[0][1].norm() + h[1][0].norm();
    let i = C::new(0.0, 1.0);
    let mut out = state.clone();
    for total in 1..=state.n_max {
        let v = state.shell(total);
        let g = |x: &[C]| {
            let mut y = vec![zero(); x.len()];
            for n0 in 0..=total {
                let n1 = total - n0;
                let mut acc = (h[0][0] * n0 as f64 + h[1][1] * n1 as f64) * x[n0];
                if n0 >= 1 {
                    acc += h[0][1] * ((n0 * (n1 + 1)) as f64).sqrt() * x[n0 - 1];
                }
                if n0 < total {
                    acc += h[1][0] * (((n0 + 1) * n1) as f64).sqrt() * x[n0 + 1];
                }
                y[n0] = i * acc;
            }
            y
        };
        // Off-diagonal ladder factors are at most (N + 1)/2.
        let bound = diag * total as f64 + off * 0.5 * (total + 1) as f64;
        out.set_shell(total, &expm_apply(&v, bound, g));
    }
    out
}

fn splitter_generator(convention: BsConvention) -> [[C; 2]; 2] {
    let q = FRAC_PI_4;
    match convention {
        // e^{i(π/4)σx}
        BsConvention::Symmetric => [[zero(), C::new(q, 0.0)], [C::new(q, 0.0), zero()]],
        // e^{i(π/4)σy}
        BsConvention::Cube => [[zero(), C::new(0.0, -q)], [C::new(0.0, q), zero()]],
    }
}

/// First beam splitter only: input modes `(0, 1)` to arms `(2, 3)`.
pub fn first_splitter(state: &FockVector, convention: BsConvention) -> FockVector {
    apply_passive(state, splitter_generator(convention))
}

/// Full interferometer at total phase `φ`: output mode 4 is index 0 of the
/// returned state and mode 5 is index 1.
pub fn evolve(state: &FockVector, phi: f64, convention: BsConvention) -> FockVector {
    evolve_from_arms(&first_splitter(state, convention), phi, convention)
}

/// Second half of [`evolve`], starting from the state in the arms.
pub fn evolve_from_arms(arms_state: &FockVector, phi: f64, convention: BsConvention) -> FockVector {
    let (arms, global) = arm_phases(convention, phi);
    first_splitter(&arms_state.phase_shift(arms), convention).scale_shells(global.conj())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Observable {
    N4,
    N5,
    Nd,
    N4Squared,
    NdSquared,
    /// `X_{φ_L}` of mode 4.
    Quadrature(f64),
    QuadratureSquared(f64),
}

/// `⟨ψ|O|ψ⟩` on an output state from [`evolve`].
pub fn measure_stats(state: &FockVector, obs: Observable) -> f64 {
    let count = |f: &dyn Fn(f64, f64) -> f64| state.iter().map(|(a, b, c)| c.norm_sqr() * f(a as f64, b as f64)).sum::<f64>();
    let lower = |power: usize| {
        let mut s = zero();
        for (n0, n1, c) in state.iter() {
            if n0 >= power {
                let fac: f64 = (0..power).map(|k| (n0 - k) as f64).product();
                s += state.at(n0 - power, n1).conj() * c * fac.sqrt();
            }
        }
        s
    };
    match obs {
        Observable::N4 => count(&|a, _| a),
        Observable::N5 => count(&|_, b| b),
        Observable::Nd => count(&|a, b| a - b),
        Observable::N4Squared => count(&|a, _| a * a),
        Observable::NdSquared => count(&|a, b| (a - b) * (a - b)),
        Observable::Quadrature(p) => (C::from_polar(1.0, -p) * lower(1)).re,
        Observable::QuadratureSquared(p) => {
            let a2 = (C::from_polar(1.0, -2.0 * p) * lower(2)).re;
            (2.0 * a2 + 2.0 * count(&|a, _| a) + 1.0) / 4.0
        }
    }
}

/// Fisher matrix by central differences of the state after the first
/// splitter, with arm phases `φ₂ = (φ_s + φ_d)/2`, `φ₃ = (φ_s − φ_d)/2`.
/// The step is halved once and the two results must agree to `1e-5`
/// relative.
pub fn numerical_fisher(scenario: &MziScenario, n_max: usize, h: f64) -> Result<FisherMatrix> {
    if !(1e-5..=1e-3).contains(&h) {
        return Err(Error::InvalidArgument(format!("finite-difference step {h} outside [1e-5, 1e-3]")));
    }
    let psi = first_splitter(&prepare(scenario, n_max)?, scenario.convention);
    let coarse = fd_fisher(&psi, h);
    let fine = fd_fisher(&psi, 0.5 * h);
    let scale = fine.f_ss.abs().max(fine.f_dd.abs()).max(1.0);
    let change = [
        coarse.f_ss - fine.f_ss,
        coarse.f_dd - fine.f_dd,
        coarse.f_sd - fine.f_sd,
    ]
    .iter()
    .map(|d| d.abs() / scale)
    .fold(0.0, f64::max);
    if change >= 1e-5 {
        return Err(Error::StepTooCoarse { h, change });
    }
    Ok(fine)
}

fn fd_fisher(psi: &FockVector, h: f64) -> FisherMatrix {
    let shifted = |s: f64, d: f64| psi.phase_shift([0.5 * (s + d), 0.5 * (s - d)]);
    let deriv = |ds: f64, dd: f64| shifted(ds * h, dd * h).axpy(-1.0, &shifted(-ds * h, -dd * h));
    let scale = |v: FockVector| FockVector { n_max: v.n_max, amps: v.amps.iter().map(|x| x / (2.0 * h)).collect() };
    let ds = scale(deriv(1.0, 0.0));
    let dd = scale(deriv(0.0, 1.0));
    let elem = |a: &FockVector, b: &FockVector| 4.0 * (a.inner(b) - a.inner(psi) * psi.inner(b)).re;
    FisherMatrix { f_ss: elem(&ds, &ds), f_dd: elem(&dd, &dd), f_sd: elem(&ds, &dd) }
}

/// `k`-photon transmission probabilities `P(k | n)` of a beam splitter with
/// amplitude transmission `√η` whose second input is vacuum, computed by
/// propagating `|n, 0⟩` through the splitter.
pub fn loss_kernel(n_max: usize, eta: f64) -> Vec<Vec<f64>> {
    let theta = eta.sqrt().acos();
    // e^{−iθσy} = [[√η, −√(1−η)], [√(1−η), √η]]
    let h = [[zero(), C::new(0.0, theta)], [C::new(0.0, -theta), zero()]];
    (0..=n_max)
        .map(|n| {
            let out = apply_passive(&FockVector::basis(n_max, n, 0), h);
            (0..=n).map(|k| out.at(k, n - k).norm_sqr()).collect()
        })
        .collect()
}

/// `(⟨n₄′⟩, Var n₄′, ⟨N_d′⟩, Var N_d′)` of the raw counts after lossy
/// detectors of efficiency `η`, from an output state.
pub fn lossy_counts(state: &FockVector, eta: f64) -> (f64, f64, f64, f64) {
    let n = state.n_max;
    let kernel = loss_kernel(n, eta);
    let mut joint = vec![vec![0.0; n + 1]; n + 1];
    for (a, b, c) in state.iter() {
        let p = c.norm_sqr();
        for (k4, pa) in kernel[a].iter().enumerate() {
            for (k5, pb) in kernel[b].iter().enumerate() {
                joint[k4][k5] += p * pa * pb;
            }
        }
    }
    let (mut m4, mut s4, mut md, mut sd) = (0.0, 0.0, 0.0, 0.0);
    for (k4, row) in joint.iter().enumerate() {
        for (k5, p) in row.iter().enumerate() {
            let (x, d) = (k4 as f64, k4 as f64 - k5 as f64);
            m4 += p * x;
            s4 += p * x * x;
            md += p * d;
            sd += p * d * d;
        }
    }
    (m4, s4 - m4 * m4, md, sd - md * md)
}

pub mod suite;
