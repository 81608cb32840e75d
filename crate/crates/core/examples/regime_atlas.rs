//! Which phase-matching condition maximizes the QFI, with the limit
//! amplitudes separating the regimes, checked against a brute-force phase
//! search.

use mzi_gauss::pmc::{grid_search_qfi, identify_pmc, single_mode_alpha_lim, SearchSpace};
use mzi_gauss::prelude::*;

fn main() -> Result<()> {
    let (r, z) = (2.3, 2.2);
    let b = boundaries(r, z);
    println!("r = {r}, z = {z}");
    println!("  alpha_13   = {:.4}", b.alpha_13);
    println!("  alpha_23   = {:.4}", b.alpha_23);
    println!("  alpha_circ = {:.4}", b.alpha_circ);
    println!("  beta_12    = {:.4}", b.beta_12);
    println!("  single-mode |alpha|_lim = {:.4}", single_mode_alpha_lim(z));

    println!("\nregime map (rows |beta| from 8 down to 0, columns |alpha| 0..8):");
    for j in (0..=8).rev() {
        let beta = j as f64;
        let row: String = (0..=8)
            .map(|i| match classify(i as f64, beta, r, z) {
                PmcSet::Pmc1 => '1',
                PmcSet::Pmc2 => '2',
                _ => '3',
            })
            .collect();
        println!("  {beta:4.1} | {row}");
    }

    let (r, z) = (0.5, 0.4);
    println!("\nbrute-force check at r = {r}, z = {z}:");
    for (alpha, beta) in [(0.1, 0.05), (0.5, 0.25), (2.0, 0.2), (0.3, 2.0)] {
        let g = grid_search_qfi(alpha, beta, r, z, 32, SearchSpace::AlphaPrimary, BsConvention::Symmetric)?;
        let found = identify_pmc(&g.refined, BsConvention::Symmetric, 1e-4);
        println!(
            "  |alpha| = {alpha:4.2}, |beta| = {beta:4.2}: classify {}, search {} (F = {:.6})",
            classify(alpha, beta, r, z),
            found.map_or("off-lattice".to_string(), |s| s.to_string()),
            g.qfi
        );
    }
    Ok(())
}
