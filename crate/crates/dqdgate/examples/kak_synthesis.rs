//! Two-B-gate circuits for canonical gates, exported as JSON.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use dqdgate::kak::{local_invariants, synthesize_via_b, CanonicalParams, SynthesisOptions};

fn main() -> dqdgate::Result<()> {
    for c in [
        CanonicalParams::new(FRAC_PI_2, FRAC_PI_4, 0.0),
        CanonicalParams::new(FRAC_PI_2, 0.0, 0.0),
        CanonicalParams::new(1.1, 0.6, 0.25),
    ] {
        let r = synthesize_via_b(&c, &SynthesisOptions::default())?;
        let inv = local_invariants(&r.circuit.matrix())?;
        println!(
            "c = ({:.3}, {:.3}, {:.3}): residual {:.2e} after {} restarts, beta = {:?}, invariants ({:.4}, {:.4}, {:.4})",
            c.c1, c.c2, c.c3, r.residual, r.restarts_used, r.beta, inv.g1, inv.g2, inv.g3
        );
    }
    let r = synthesize_via_b(&CanonicalParams::new(1.1, 0.6, 0.25), &SynthesisOptions::default())?;
    println!("{}", serde_json::to_string_pretty(&r.circuit)?);
    Ok(())
}
