//! Writes an ensemble to disk in the command-line formats, then reads it back
//! and analyzes it, as `qwalk ensemble` followed by `qwalk analyze` would.

use std::path::PathBuf;

use qwalk::cli::CsvFormat;
use qwalk::cli::{cmd_analyze, cmd_ensemble, AnalyzeArgs, Outcome, RunArgs};
use qwalk::{FieldKind, InitialState};

fn main() -> qwalk::Result<()> {
    let out: PathBuf = std::env::args()
        .nth(1)
        .map_or_else(|| std::env::temp_dir().join("qwalk-example"), PathBuf::from);
    let run = RunArgs {
        d: 201,
        q: 1,
        theta: std::f64::consts::FRAC_PI_4,
        field: FieldKind::SpinPosition,
        r: Some(0.9),
        steps: 150,
        realizations: 100,
        init: InitialState::TwoSite,
        seed: 3,
        out: out.clone(),
        format: CsvFormat::Long,
        threads: None,
    };
    let manifest = cmd_ensemble(&run)?;
    println!("wrote {:?} to {}", manifest.outputs, out.display());

    let report = cmd_analyze(&AnalyzeArgs {
        input: out,
        t: None,
        t_min: Some(50),
        t_max: Some(150),
        support_threshold: 1e-2,
        gaussian: true,
        scaling: true,
        period: false,
        out: None,
    })?;
    if let Some(g) = &report.gaussian_fit {
        match &g.fit {
            Outcome::Ok(fit) => println!("t={} gaussian r²={:.4}", g.t, fit.r2),
            Outcome::Failed { error } => println!("t={} no gaussian fit: {error}", g.t),
        }
    }
    if let Some(Outcome::Ok(s)) = &report.scaling_fit {
        println!("exponent {:.3}", s.exponent);
    }
    Ok(())
}
