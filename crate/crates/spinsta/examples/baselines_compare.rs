//! Robustness of the optimized shortcuts against the flat π pulse and the
//! π/2(x) π(y) π/2(x) composite, in both the spin-1 (Heisenberg flip) and
//! two-level (Ising Bell) representations.
//!
//! ```bash
//! cargo run --example baselines_compare
//! ```

use spinsta::scenarios::{self, RunOptions, SweepParam, SweepPlan};

fn main() {
    let scenario = scenarios::find("baselines-compare").unwrap();
    let opts = RunOptions {
        steps_per_unit: 4000,
        with_sim_fit: false,
        sweep_override: Some(SweepPlan {
            param: SweepParam::Systematic,
            lo: -0.5,
            hi: 0.5,
            step: 0.1,
        }),
        ..Default::default()
    };
    let out = scenarios::run(&scenario, &opts).unwrap();
    for sweep in &out.sweeps {
        println!("\n=== {} ===", sweep.name);
        print!("  {:>6}", sweep.param);
        for c in &sweep.columns {
            print!("  {c:>18}");
        }
        println!();
        for row in &sweep.rows {
            print!("  {:+.3}", row[0]);
            for v in &row[1..] {
                print!("  {v:>18.12}");
            }
            println!();
        }
    }
    println!(
        "\nThe single-shot shortcut matches the composite's quartic flatness near δ = 0 \
         while beating it pointwise at large errors — without tripling the duration."
    );
}
