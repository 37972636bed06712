// Realize a two-input plant, read off both channel transfer functions and
// cross-check one frequency point against a direct linear solve.

use nalgebra::RowDVector;
use ni_synth::cli::format::rational;
use ni_synth::statespace::{eval_by_solve, tf_from_ss, Channel, StateSpaceModel};
use num_complex::Complex64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let sys = StateSpaceModel::siso(
        &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 3203.0, -80511.58, 12.812],
        &[0.0, 0.0, -1.0],
        &[0.0, 0.0, 1.0],
        &[-3203.0, -448.42, -12.812],
    )?;
    let w = tf_from_ss(&sys, Channel::W)?;
    let u = tf_from_ss(&sys, Channel::U)?;
    println!("w -> z: {}", rational(&w));
    println!("u -> z: {}", rational(&u));

    let s = Complex64::new(0.0, 50.0);
    let direct = eval_by_solve(&sys, Channel::U, s).ok_or("singular at s")?;
    println!("u -> z at 50j: {} (rational) vs {} (solve)", u.eval(s), direct);

    let k = RowDVector::from_row_slice(&[-5578.0, 79929.08, -57.312]);
    let closed = sys.with_state_feedback(&k)?;
    let g = closed.transfer_function(Channel::W)?.reduce()?;
    println!("closed loop w -> z reduced: {}", rational(&g));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("transfer_function example");
}
