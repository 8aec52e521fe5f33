//! Bloch period of the averaged electric walk as a function of r.

use qwalk::analysis::{effective_field_factor, predicted_period};

fn main() -> qwalk::Result<()> {
    let d = 501.0;
    let phi = std::f64::consts::TAU / d;
    println!("{:>5} {:>8} {:>9}", "r", "factor", "period");
    for r in [1.0, 0.95, 0.9, 0.8, 0.75, 0.6, 0.5] {
        println!(
            "{r:>5} {:>8.4} {:>9.2}",
            effective_field_factor(r),
            predicted_period(phi, r)?
        );
    }
    Ok(())
}
