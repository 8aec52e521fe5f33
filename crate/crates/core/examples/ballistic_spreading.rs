//! Free walk from the two-site state: the variance grows as t².

use qwalk::analysis::{fit_scaling_exponent, moment_series};
use qwalk::{run_realization, FieldKind, InitialState, WalkConfig};

fn main() -> qwalk::Result<()> {
    let config = WalkConfig {
        field: FieldKind::None,
        steps: 100,
        realizations: 1,
        ..WalkConfig::default()
    };
    let init = InitialState::TwoSite;
    let run = run_realization(&config, &init.build(config.d)?, 0)?;
    let moments = moment_series(&run.distributions, init.origin(config.d));
    for t in [10, 20, 50, 100] {
        println!("t={t:>3}  variance={:.2}", moments.variance[t]);
    }
    let fit = fit_scaling_exponent(&moments, 20, 100)?;
    println!(
        "exponent over [20, 100]: {:.4} ({:?})",
        fit.exponent,
        fit.regime()
    );
    Ok(())
}
