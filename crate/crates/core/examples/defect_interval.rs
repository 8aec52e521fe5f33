//! One interval of l = 6 steps with the field missing at one step, rewritten
//! as six equal steps carrying spin rotations, then averaged over where the
//! missing step falls.

use std::f64::consts::FRAC_PI_4;

use qwalk::oracle::{
    averaged_phase_coefficient, defect_phase_coefficient, exact_interval_operator,
    gauge_equivalence_check, oracle_config, rewritten_interval_operator, DefectConvention,
    IntervalSpec,
};

fn main() -> qwalk::Result<()> {
    let l = 6;
    for conv in [DefectConvention::Nominal, DefectConvention::Exact] {
        println!("{conv:?} n_(t,j), rows j, columns t:");
        for j in 0..l {
            let row: Vec<String> = (0..l)
                .map(|t| format!("{:>5}", defect_phase_coefficient(t, j, l, conv).to_string()))
                .collect();
            println!("  j={j} {}", row.join(" "));
        }
    }
    let avg: Vec<String> = (0..l as i64)
        .map(|t| averaged_phase_coefficient(t, l).to_string())
        .collect();
    println!("averaged n_t: {}", avg.join(" "));

    let cfg = oracle_config(32, 1, FRAC_PI_4, 1.0);
    for j in 0..l {
        let spec = IntervalSpec::new(l, j)?;
        let exact = exact_interval_operator(spec, &cfg)?;
        let res = |c| -> qwalk::Result<f64> {
            Ok((&exact - &rewritten_interval_operator(spec, &cfg, c)?)
                .max_abs_seam_free(l)
                .unwrap_or(f64::NAN))
        };
        println!(
            "d=32 j={j}: rewrite residual nominal {:.3e}, exact {:.3e}",
            res(DefectConvention::Nominal)?,
            res(DefectConvention::Exact)?
        );
    }

    let r = 5.0 / 6.0;
    let cfg = oracle_config(8, 1, FRAC_PI_4, r);
    for t in 0..4 {
        let g = gauge_equivalence_check(t, r, &cfg)?;
        println!(
            "gauge t={t}: residual {:.1e}, χ = {:.12} (φr(1-r) = {:.12})",
            g.residual,
            g.chi,
            cfg.phi() * r * (1.0 - r)
        );
    }
    Ok(())
}
