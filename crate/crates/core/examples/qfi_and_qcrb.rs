//! Fisher matrix, QFI and the Cramér-Rao bound for a few input states.

use mzi_gauss::prelude::*;
use std::f64::consts::PI;

fn main() -> Result<()> {
    let coherent = MziScenario::new(GaussianPort::coherent(Coherent::new(3.0, 0.0)), GaussianPort::vacuum());
    let sqz_vac = MziScenario::new(
        GaussianPort::coherent(Coherent::new(3.0, 0.0)),
        GaussianPort::squeezed_vacuum(Squeeze::new(1.0, 0.0)),
    );
    let general = MziScenario::new(
        GaussianPort::new(Coherent::new(2.0, 0.3), Squeeze::new(0.5, 1.1)),
        GaussianPort::new(Coherent::new(1.0, 2.0), Squeeze::new(0.7, 0.2)),
    );

    for (name, s) in [("coherent + vacuum", coherent), ("coherent + squeezed vacuum", sqz_vac), ("general", general)] {
        let fm = fisher_matrix(&s);
        let f = qfi(&fm)?;
        println!(
            "{name:28} N = {:8.4}  F_ss = {:9.4}  F_dd = {:9.4}  F_sd = {:8.4}  F = {:9.4}  QCRB = {:.6}",
            s.mean_photons(),
            fm.f_ss,
            fm.f_dd,
            fm.f_sd,
            f,
            qcrb(f, 1)?
        );
    }

    // The same numbers straight from the closed forms.
    let m = Magnitudes::new(2.0, 1.0, 0.8, 0.6);
    for set in PmcSet::GENERAL {
        let closed = qfi_closed_form(&m, PhaseSpec::Pmc(set), BsConvention::Symmetric);
        let generic = qfi(&fisher_matrix(&apply_pmc(set, 0.25 * PI, &m, BsConvention::Symmetric)))?;
        println!("{set}: closed form {closed:.10}, from moments {generic:.10}");
    }
    Ok(())
}
