//! Pure dephasing of a two-qubit superposition and its effect on the fSim channel.

use dqdgate::algebra::{outer, Mat4, C64};
use dqdgate::device_model::DeviceParams;
use dqdgate::dynamics::{propagate_lindblad, Dephasing, DephasingForm, FnHamiltonian};

fn main() -> dqdgate::Result<()> {
    let params = DeviceParams::default();
    let psi = [C64::new(0.5, 0.0); 4];
    for form in [DephasingForm::AsWritten, DephasingForm::HalfRate] {
        let deph = Dephasing::from_t2(params.t2, form);
        println!("{form:?}");
        for t in [10e-6, 50e-6, 100e-6] {
            let idle = FnHamiltonian { f: |_| Mat4::zeros(), duration: t, max_frequency: 0.0, breakpoints: vec![] };
            let r = propagate_lindblad(&idle, &outer(&psi, &psi), &deph, 2000)?;
            println!(
                "  t = {:>5.0} us  |rho_00,10| = {:.4}  |rho_00,01| = {:.4}  |rho_00,11| = {:.4}  trace defect {:.1e}",
                t * 1e6,
                r.rho[(0, 2)].norm(),
                r.rho[(0, 1)].norm(),
                r.rho[(0, 3)].norm(),
                r.trace_defect
            );
        }
    }
    Ok(())
}
