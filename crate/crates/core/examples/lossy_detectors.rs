//! Sensitivity degradation with detector efficiency.

use mzi_gauss::losses::lossy_optimal_working_point;
use mzi_gauss::pmc::pmc_phases;
use mzi_gauss::prelude::*;

fn main() -> Result<()> {
    let m = Magnitudes::new(30.0, 0.0, 1.2, 0.0);
    let s = m.scenario(&pmc_phases(PmcSet::SqzVacOptimal, 0.0, BsConvention::Symmetric), BsConvention::Symmetric);
    println!("{:>6} {:>13} {:>13} {:>13}", "eta", "difference", "single-mode", "homodyne");
    for eta in [1.0, 0.99, 0.95, 0.9, 0.8, 0.6, 0.4] {
        let at = s.with_efficiency(eta);
        let mut row = Vec::new();
        for d in [DetectionScheme::DifferenceIntensity, DetectionScheme::SingleModeIntensity, DetectionScheme::homodyne()] {
            row.push(lossy_optimal_working_point(d, &at)?.delta_phi);
        }
        println!("{eta:6.2} {:13.6e} {:13.6e} {:13.6e}", row[0], row[1], row[2]);
    }

    // Shot-noise limited input: the penalty is exactly 1/sqrt(eta).
    let coh = MziScenario::new(GaussianPort::coherent(Coherent::new(5.0, 0.0)), GaussianPort::vacuum()).with_phase(1.0);
    let ideal = lossy_sensitivity(DetectionScheme::DifferenceIntensity, &coh)?.delta_phi;
    let lossy = lossy_sensitivity(DetectionScheme::DifferenceIntensity, &coh.with_efficiency(0.5))?.delta_phi;
    println!("\ncoherent input: ratio at eta = 0.5 is {:.12} (1/sqrt(0.5) = {:.12})", lossy / ideal, 0.5f64.sqrt().recip());
    Ok(())
}
