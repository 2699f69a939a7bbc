//! Heisenberg spin flip |ψ₁,₁⟩ → |ψ₁,₋₁⟩ with the systematic-error-optimal
//! shortcut: solve for α, build the pulse, verify by direct Schrödinger
//! integration, and compare robustness against the flat π pulse.
//!
//! ```bash
//! cargo run --example heis_flip_optimal
//! ```

use spinsta::pulse::{find_alpha, AnsatzSpec, ControlPulse, Kappa, MFamily, ThetaFamily};
use spinsta::scenarios::{self, perturbed_fidelity, SweepParam};
use spinsta::sensitivity::q_systematic;

fn main() {
    // Nullify the systematic-error sensitivity q_S for the cubic θ profile.
    let sol = find_alpha(
        ThetaFamily::Cubic,
        1.0,
        Kappa::One,
        spinsta::sensitivity::SensitivityKind::QS,
        0.0,
    )
    .expect("α search");
    println!(
        "solved α = {:.7}  (q_S at the root: {:.3e})",
        sol.alpha, sol.q_value
    );

    let spec = AnsatzSpec {
        theta_family: ThetaFamily::Cubic,
        m_family: MFamily::AlphaForm { alpha: sol.alpha },
        duration: 1.0,
        kappa: Kappa::One,
    };
    let angles = spec.angles();
    let m = |t: f64| spec.m_at(t);
    let q = q_systematic(&angles, &m).unwrap();
    println!("q_S by quadrature: {:.3e} ± {:.1e}", q.value, q.quad_error);

    // Simulate the design and the flat-π baseline across amplitude errors.
    let scenario = scenarios::find("heis-flip-optimal").unwrap();
    let design = scenarios::resolve_design(&scenario).unwrap();
    let flat = ControlPulse::flat_pi(1.0, 1.0);
    println!(
        "\npeak Ω of the designed pulse: {:.3} B₀",
        design.pulse.peak_omega()
    );
    println!("\n  δ       optimal          flat π");
    for k in 0..=10 {
        let d = -0.5 + 0.1 * k as f64;
        let fo =
            perturbed_fidelity(&scenario, &design.pulse, SweepParam::Systematic, d, 4000).unwrap();
        let ff = perturbed_fidelity(&scenario, &flat, SweepParam::Systematic, d, 4000).unwrap();
        println!("{d:+.2}   {fo:.10}   {ff:.10}");
    }
    println!("\nThe designed pulse stays at F ≈ 1 over the whole ±50% error band.");
}
