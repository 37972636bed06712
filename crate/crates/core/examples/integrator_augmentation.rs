// Integrator augmentation of a damped mode and SNI synthesis inside the
// admissible range.

use ni_synth::augmentation::{augment_integrator, integrator_margin};
use ni_synth::cli::format::{list, row};
use ni_synth::modal::Mode;
use ni_synth::synthesis::{admissible_epsilon_range, synthesize};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mode = Mode::new(64.06, 2.089, 8.096e4)?;
    let aug = augment_integrator(&mode, -1.0)?;
    let range = admissible_epsilon_range(&aug.sys)?;
    println!("zeta omega = {}, gamma = {}", integrator_margin(&mode), range.gamma);
    let eps = 0.5 * range.gamma.min(integrator_margin(&mode));
    let res = synthesize(&aug.sys, eps)?;
    println!("epsilon {eps}: K = {}", row(res.k.iter().copied()));
    println!("closed-loop poles {}", list(&res.certificate.poles));
    println!("achieved margin {}", -res.certificate.max_pole_re);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("integrator_augmentation example");
}
