//! The symmetric and cube beam-splitter conventions reach the same maximal
//! QFI, at remapped phase-matching conditions.

use mzi_gauss::pmc::pmc_phases;
use mzi_gauss::prelude::*;

fn main() -> Result<()> {
    let m = Magnitudes::new(1.5, 0.8, 0.6, 0.4);
    for set in PmcSet::GENERAL {
        for conv in [BsConvention::Symmetric, BsConvention::Cube] {
            let p = pmc_phases(set, 0.0, conv);
            let f = qfi(&fisher_matrix(&m.scenario(&p, conv)))?;
            println!(
                "{set} {conv:?}: theta_beta = {:.4}, theta = {:.4}, phi_zeta = {:.4}  F = {f:.10}",
                p.theta_beta, p.theta, p.phi_zeta
            );
        }
    }
    Ok(())
}
