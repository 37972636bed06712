// Classify a few transfer functions as NI, SNI or LNI on a frequency grid.

use ni_synth::ni::{classify, Property};
use ni_synth::statespace::{FrequencyGrid, RationalFunction};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        ("lightly damped mode", RationalFunction::from_coeffs(&[64.06], &[1.0, 2.089, 8.096e4])?),
        ("undamped mode", RationalFunction::from_coeffs(&[64.06], &[1.0, 0.0, 8.096e4])?),
        ("first-order lag", RationalFunction::from_coeffs(&[12.812], &[1.0, 9.5])?),
        ("double integrator", RationalFunction::from_coeffs(&[1.0], &[1.0, 0.0, 0.0])?),
        ("negated lag", RationalFunction::from_coeffs(&[-1.0], &[1.0, 1.0])?),
    ];
    for (name, g) in &cases {
        let grid = FrequencyGrid::default_for(g)?;
        let v = classify(g, &grid, 1e-8)?;
        println!(
            "{name:20} NI {:5} SNI {:5} LNI {:5}",
            v.holds(Property::Ni),
            v.holds(Property::Sni),
            v.holds(Property::Lni)
        );
        for x in v.violations_of(Property::Ni).iter().take(2) {
            println!("    {} ({:.3e})", x.condition.label(), x.value);
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("ni_classification example");
}
