//! Compare the three detection schemes with the QCRB as the internal phase
//! is scanned, and locate each scheme's best working point.

use mzi_gauss::detection::optimal_working_point;
use mzi_gauss::pmc::pmc_phases;
use mzi_gauss::prelude::*;
use std::f64::consts::PI;

fn main() -> Result<()> {
    let m = Magnitudes::new(10.0, 0.0, 1.0, 0.0);
    let phases = pmc_phases(PmcSet::SqzVacOptimal, 0.0, BsConvention::Symmetric);
    let s = m.scenario(&phases, BsConvention::Symmetric);
    let bound = qcrb(qfi(&fisher_matrix(&s))?, 1)?;
    let schemes = [
        ("difference", DetectionScheme::DifferenceIntensity),
        ("single-mode", DetectionScheme::SingleModeIntensity),
        ("homodyne", DetectionScheme::homodyne()),
    ];

    println!("{:>8} {:>13} {:>13} {:>13}", "phi/pi", "difference", "single-mode", "homodyne");
    for k in 1..=8 {
        let phi = k as f64 * PI / 8.0;
        let at = s.with_phase(phi);
        let v: Vec<f64> = schemes.iter().map(|(_, d)| sensitivity(*d, &at).map_or(f64::NAN, |p| p.delta_phi)).collect();
        println!("{:8.3} {:13.6e} {:13.6e} {:13.6e}", phi / PI, v[0], v[1], v[2]);
    }

    println!("\nQCRB = {bound:.6e}");
    for (name, d) in schemes {
        let p = optimal_working_point(d, &s)?;
        let note = p.diagnostic.map(|d| format!(" ({d})")).unwrap_or_default();
        println!("{name:12} best at phi = {:.6} rad: {:.6e}{note}", p.phase, p.delta_phi);
    }
    Ok(())
}
