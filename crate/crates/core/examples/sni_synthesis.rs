// Full synthesis on the PID-augmented first mode: projection, gain, closed
// loop and the structural check on the loop zeros.

use ni_synth::augmentation::{augment_pid, PidGains};
use ni_synth::cli::format::{list, rational, row};
use ni_synth::modal::Mode;
use ni_synth::ni::classify_default;
use ni_synth::synthesis::{admissible_epsilon_range, synthesize, verify_remark1};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mode = Mode::new(64.06, 0.0, 8.096e4)?;
    let aug = augment_pid(&mode, &PidGains::new(-7.0, -50.0, -0.2))?;
    let range = admissible_epsilon_range(&aug.sys)?;
    println!("sigma(A_q) = {}, gamma = {}", list(&range.spectrum), range.gamma);
    let r1 = verify_remark1(&aug.sys)?;
    println!("loop zeros match sigma(A_q): {} (deviation {:.2e})", r1.pass, r1.deviation);

    let res = synthesize(&aug.sys, 9.5)?;
    println!("K = {}", row(res.k.iter().copied()));
    println!("poles {}", list(&res.certificate.poles));
    let g = res.g_cl_reduced()?;
    println!("G_cl = {}", rational(&g));
    println!("G_cl SNI: {}", classify_default(&res.g_cl)?.is_sni);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("sni_synthesis example");
}
