//! Bell-state preparation robust to the DM-induced detuning shift
//! δ = 2D²/J: α = −0.206 nullifies q_Δ for the sine θ profile.
//!
//! ```bash
//! cargo run --example ising_bell_dm
//! ```

use spinsta::scenarios::{self, perturbed_fidelity, SweepParam};
use spinsta::spinmodel::level_crossing_times;

fn main() {
    let scenario = scenarios::find("ising-bell-dm").unwrap();
    let design = scenarios::resolve_design(&scenario).unwrap();
    println!("solved α = {:.7}", design.alpha.unwrap());

    // the DM term moves the first level crossing of the rotating-frame triplet
    let (t12, t13, t23) = level_crossing_times(&scenario.model).unwrap();
    println!(
        "level crossings with D = {}: t₁₂ = {t12}, t₁₃ = {t13}, t₂₃ = {t23} (shift δ = {})",
        scenario.model.d,
        scenario.model.dm_shift()
    );

    println!("\n  shift δ   Bell fidelity");
    for k in 0..=10 {
        let d = -0.5 + 0.1 * k as f64;
        let f = perturbed_fidelity(&scenario, &design.pulse, SweepParam::DetuningShift, d, 4000)
            .unwrap();
        println!(" {d:+.2}      {f:.10}");
    }
    println!("\nAt J = 10, D = 1 the physical shift is δ = 0.2; the design holds F > 0.9999.");
}
