//! Electric walk with the field on at every step oscillates with period 2π/φ.

use qwalk::analysis::{estimate_period, moment_series, predicted_period};
use qwalk::{run_realization, FieldKind, InitialState, WalkConfig};

fn main() -> qwalk::Result<()> {
    let config = WalkConfig {
        field: FieldKind::Electric,
        r: 1.0,
        steps: 1200,
        realizations: 1,
        ..WalkConfig::default()
    };
    let init = InitialState::Single;
    let run = run_realization(&config, &init.build(config.d)?, 0)?;
    let moments = moment_series(&run.distributions, init.origin(config.d));
    for t in (0..=1200).step_by(100) {
        println!(
            "t={t:>4}  mean displacement={:>8.3}  variance={:>9.2}",
            moments.mean_displacement[t], moments.variance[t]
        );
    }
    let est = estimate_period(&moments)?;
    println!(
        "measured period {:.2}, 2π/φ = {:.2}",
        est.period,
        predicted_period(config.phi(), 1.0)?
    );
    Ok(())
}
