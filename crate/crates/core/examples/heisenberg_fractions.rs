//! How the QFI scales with the total photon number, for each way of
//! splitting it between coherent light and squeezing.

use mzi_gauss::heisenberg::heisenberg_optima;
use mzi_gauss::prelude::*;

fn main() -> Result<()> {
    for set in PmcSet::GENERAL {
        let optima = heisenberg_optima(set);
        println!("{set}: max F/N^2 = {}", optima.attained);
        for b in &optima.branches {
            let f = b.representative(1e4);
            let exact = qfi_closed_form(&f.magnitudes(), PhaseSpec::Pmc(set), BsConvention::Symmetric);
            println!(
                "  at (f_alpha, f_beta, f_r, f_z) = ({:.3}, {:.3}, {:.3}, {:.3}): asymptotic {:.4}, exact {:.4}",
                f.f_alpha,
                f.f_beta,
                f.f_r,
                f.f_z,
                asymptotic_qfi(set, &f) / 1e8,
                exact / 1e8
            );
        }
    }

    println!("\nexact F/N^2 along N for the PMC1 optimum (f_alpha = f_r = 1/2):");
    for n in [1.0, 10.0, 100.0, 1e3, 1e4, 1e5] {
        let f = PowerFractions::new(0.5, 0.0, 0.5, 0.0, n)?;
        let exact = qfi_closed_form(&f.magnitudes(), PhaseSpec::Pmc(PmcSet::Pmc1), BsConvention::Symmetric);
        println!("  N = {n:8.0e}: {:.6}", exact / (n * n));
    }
    Ok(())
}
