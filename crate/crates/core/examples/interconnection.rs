// Positive-feedback interconnection of an NI and an SNI system: the DC and
// high-frequency gain conditions against the loop poles.

use ni_synth::ni::{check_internal_stability, interconnection_poles};
use ni_synth::statespace::RationalFunction;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let m = RationalFunction::from_coeffs(&[1.0], &[1.0, 0.2, 1.0])?;
    for k in [0.5, 0.9, 1.5] {
        let n = RationalFunction::from_coeffs(&[k], &[1.0, 1.0])?;
        let r = check_internal_stability(&m, &n, 1e-8)?;
        let worst = interconnection_poles(&m, &n)?
            .iter()
            .map(|p| p.re)
            .fold(f64::NEG_INFINITY, f64::max);
        println!(
            "N = {k}/(s+1): condition 2 {:+.4}, condition 3 {:+.4}, stable {}, max Re loop pole {:+.4}",
            r.cond2, r.cond3, r.internally_stable, worst
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("interconnection example");
}
