//! Weak spin-position field applied with probability 0.9: the averaged
//! distribution becomes Gaussian and spreads more slowly than the free walk.
//!
//! `cargo run --release --example spin_field_diffusion -- [realizations]`

use qwalk::analysis::{
    fit_gaussian_logparabola, fit_gaussian_logparabola_with, fit_scaling_exponent, moment_series,
};
use qwalk::{run_ensemble, FieldKind, InitialState, WalkConfig};

fn main() -> qwalk::Result<()> {
    let realizations = std::env::args()
        .nth(1)
        .map_or(Ok(200), |s| s.parse())
        .expect("realizations");
    let config = WalkConfig {
        field: FieldKind::SpinPosition,
        r: 0.9,
        steps: 400,
        realizations,
        master_seed: 1,
        ..WalkConfig::default()
    };
    let init = InitialState::TwoSite;
    let x0 = init.origin(config.d);
    let avg = run_ensemble(&config, &init.build(config.d)?)?;

    let moments = moment_series(&avg.pbar, x0);
    for t in [50, 100, 200, 300, 400] {
        println!("t={t:>3}  variance={:.1}", moments.variance[t]);
    }
    let last = avg.pbar.distribution(400, x0)?;
    let fit = fit_gaussian_logparabola(&last)?;
    println!(
        "gaussian fit at t=400: σ²={:.1} r²={:.4} on {} sites",
        fit.sigma2, fit.r2, fit.n_points
    );
    if let Ok(wide) = fit_gaussian_logparabola_with(&last, 1e-3) {
        println!(
            "  with the 1e-3 support cut: r²={:.4} on {} sites",
            wide.r2, wide.n_points
        );
    }
    let scaling = fit_scaling_exponent(&moments, 100, 400)?;
    println!(
        "variance exponent over [100, 400]: {:.3} ({:?})",
        scaling.exponent,
        scaling.regime()
    );
    Ok(())
}
