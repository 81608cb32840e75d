//! Phase estimation with a Mach-Zehnder interferometer fed by two Gaussian
//! (squeezed-coherent) input ports.
//!
//! The crate computes the two-parameter Fisher matrix and the quantum
//! Cramér-Rao bound, exact sensitivities for difference-intensity,
//! single-mode intensity and balanced homodyne detection (optionally with
//! lossy detectors), the phase-matching conditions that maximize the Fisher
//! information and the regime atlas over the coherent amplitudes, and the
//! Heisenberg-scaling analysis in terms of power fractions.
//!
//! Every closed form is cross-checked against [`oracle`], a brute-force
//! simulator working in a truncated two-mode Fock basis.
//!
//! ```
//! use mzi_gauss::prelude::*;
//!
//! let port1 = GaussianPort::new(Coherent::new(1.0, 0.0), Squeeze::new(0.4, std::f64::consts::PI));
//! let port0 = GaussianPort::squeezed_vacuum(Squeeze::new(0.5, 0.0));
//! let scenario = MziScenario::new(port1, port0);
//! let f = qfi(&fisher_matrix(&scenario)).unwrap();
//! let expected = 1f64.exp() + 0.9f64.sinh().powi(2);
//! assert!((f - expected).abs() < 1e-12);
//! ```

mod algebra;
pub mod cli;
pub mod detection;
pub mod error;
pub mod fisher;
pub mod heisenberg;
pub mod interferometer;
pub mod losses;
pub mod oracle;
pub mod pmc;
pub mod states;
pub mod upsilon;

pub use error::{Error, Result};

/// Everything needed for typical use.
pub mod prelude {
    pub use crate::detection::{
        observable_mean, observable_slope, observable_variance, optimal_working_point,
        sensitivity, DetectionScheme, SensitivityPoint,
    };
    pub use crate::error::{Error, Result};
    pub use crate::fisher::{
        fisher_matrix, qcrb, qfi, qfi_closed_form, FisherMatrix, Magnitudes, PhaseSpec, Phases,
    };
    pub use crate::heisenberg::{asymptotic_qfi, heisenberg_optima, PowerFractions};
    pub use crate::interferometer::{mode_map, BsConvention, ModeMap, MziScenario};
    pub use crate::losses::lossy_sensitivity;
    pub use crate::pmc::{apply_pmc, boundaries, classify, grid_search_qfi, PmcSet};
    pub use crate::states::{port_moments, Coherent, GaussianPort, PortMoments, Squeeze};
    pub use crate::upsilon::{upsilon_minus, upsilon_plus};
}
