// Check the proof obligations for the synthesized gain and for a perturbed
// one.

use nalgebra::RowDVector;
use ni_synth::augmentation::{augment_pid, PidGains};
use ni_synth::modal::Mode;
use ni_synth::synthesis::certify;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mode = Mode::new(64.06, 0.0, 8.096e4)?;
    let aug = augment_pid(&mode, &PidGains::new(-7.0, -50.0, -0.2))?;
    for k in [[-5578.0, 79929.08, -57.312], [-5578.0, 79929.08, -50.0]] {
        let c = certify(&aug.sys, &RowDVector::from_row_slice(&k), 9.5)?;
        println!("K = {k:?}: all obligations {}", c.all_pass);
        for o in &c.obligations {
            println!("    {:20} {}", o.name, if o.pass { "pass" } else { "fail" });
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("certify_gain example");
}
