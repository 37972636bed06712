// Augment one undamped mode with a PID loop and report the degree of
// stability the loop zeros allow.

use ni_synth::augmentation::{achievable_epsilon, augment_pid, pid_open_loop, PidGains};
use ni_synth::cli::format::{list, row};
use ni_synth::modal::Mode;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mode = Mode::new(64.06, 0.0, 8.096e4)?;
    let gains = PidGains::new(-7.0, -50.0, -0.2);
    let aug = augment_pid(&mode, &gains)?;
    for i in 0..3 {
        println!("A row {}: {}", i + 1, row(aug.sys.a.row(i).iter().copied()));
    }
    println!("C1 = {}", row(aug.sys.c1.iter().copied()));
    let l = pid_open_loop(&mode, &gains)?;
    println!("open loop zeros: {}", list(&l.zeros()?));
    let e = achievable_epsilon(&gains, mode.gain)?;
    println!("epsilon must stay below {}", e.margin);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("pid_augmentation example");
}
