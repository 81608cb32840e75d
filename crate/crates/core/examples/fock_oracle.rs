//! Brute-force check of the closed forms in a truncated two-mode Fock basis.

use mzi_gauss::oracle::suite::{run_suite, VerifyBox};
use mzi_gauss::oracle::{evolve, measure_stats, numerical_fisher, prepare, Observable};
use mzi_gauss::prelude::*;

fn main() -> Result<()> {
    let s = MziScenario::new(
        GaussianPort::new(Coherent::new(1.0, 0.4), Squeeze::new(0.3, 1.0)),
        GaussianPort::new(Coherent::new(0.6, -0.7), Squeeze::new(0.4, 2.5)),
    )
    .with_phase(1.3);

    let psi = prepare(&s, 60)?;
    let out = evolve(&psi, s.phase, s.convention);
    let oracle_mean = measure_stats(&out, Observable::Nd);
    let closed_mean = observable_mean(DetectionScheme::DifferenceIntensity, &s);
    println!("<N_d>: closed form {closed_mean:.12}, oracle {oracle_mean:.12}");

    let fm = fisher_matrix(&s);
    let num = numerical_fisher(&s, 60, 2e-4)?;
    println!("F_dd:  closed form {:.10}, finite differences {:.10}", fm.f_dd, num.f_dd);
    println!("F_ss:  closed form {:.10}, finite differences {:.10}", fm.f_ss, num.f_ss);

    let b = VerifyBox { cases: 10, phases: 3, ..VerifyBox::default() };
    let report = run_suite(&b)?;
    println!(
        "\n{} random checks, all passed: {} (worst Fisher error {:.2e}, worst mean error {:.2e})",
        report.checks.len(),
        report.all_passed(),
        report.worst("fisher"),
        report.worst("difference.mean")
    );
    Ok(())
}
