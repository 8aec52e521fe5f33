//! Electric field switched on with probability r: the averaged walk still
//! oscillates, with a longer period.
//!
//! `cargo run --release --example stochastic_bloch -- [realizations] [r]`

use qwalk::analysis::{effective_field_factor, estimate_period, moment_series, predicted_period};
use qwalk::{run_deterministic, run_ensemble, FieldKind, InitialState, WalkConfig};

fn main() -> qwalk::Result<()> {
    let mut args = std::env::args().skip(1);
    let realizations = args
        .next()
        .map_or(Ok(200), |s| s.parse())
        .expect("realizations");
    let r: f64 = args.next().map_or(Ok(0.9), |s| s.parse()).expect("r");

    let config = WalkConfig {
        field: FieldKind::Electric,
        r,
        steps: 1200,
        realizations,
        master_seed: 1,
        ..WalkConfig::default()
    };
    let init = InitialState::Single;
    let x0 = init.origin(config.d);
    let psi0 = init.build(config.d)?;

    let avg = run_ensemble(&config, &psi0)?;
    let measured = estimate_period(&moment_series(&avg.pbar, x0))?;

    let alpha = effective_field_factor(r);
    let effective = run_deterministic(&config, &psi0, alpha)?;
    let eff = estimate_period(&moment_series(&effective.distributions, x0))?;

    println!("r = {r}, {realizations} realizations");
    println!("ensemble period          {:.2}", measured.period);
    println!("field φ·{alpha:.4} every step {:.2}", eff.period);
    println!(
        "field φ·r every step      {:.2}",
        std::f64::consts::TAU / (config.phi() * r)
    );
    println!(
        "2π/(φ(r + 2(1-r)²))       {:.2}",
        predicted_period(config.phi(), r)?
    );
    println!("max norm error {:.1e}", avg.max_norm_error);
    Ok(())
}
