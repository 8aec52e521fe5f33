//! Strong field (q = 200) switched on with probability 0.9, for both field
//! models. Prints the Gaussian fit quality of the averaged distribution.
//!
//! `cargo run --release --example strong_field -- [realizations]`

use qwalk::analysis::fit_gaussian_logparabola;
use qwalk::{run_ensemble, FieldKind, InitialState, WalkConfig};

fn main() -> qwalk::Result<()> {
    let realizations = std::env::args()
        .nth(1)
        .map_or(Ok(200), |s| s.parse())
        .expect("realizations");
    let init = InitialState::TwoSite;
    for field in [FieldKind::SpinPosition, FieldKind::Electric] {
        let config = WalkConfig {
            field,
            q: 200,
            r: 0.9,
            steps: 400,
            realizations,
            master_seed: 1,
            ..WalkConfig::default()
        };
        let x0 = init.origin(config.d);
        let avg = run_ensemble(&config, &init.build(config.d)?)?;
        let fit = fit_gaussian_logparabola(&avg.pbar.distribution(400, x0)?)?;
        println!(
            "field {field}: σ²={:.2} r²={:.4} center={:.2}",
            fit.sigma2, fit.r2, fit.center
        );
    }
    Ok(())
}
