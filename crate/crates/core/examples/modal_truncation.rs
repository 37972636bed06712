// Load the five-mode beam model, truncate to the first mode and form the
// additive and multiplicative uncertainty.

use std::path::Path;

use ni_synth::modal::{load_modal, modal_tf, multiplicative_delta, split_additive};
use ni_synth::ni::classify_default;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/table1.modal");
    let model = load_modal(&path)?;
    for (i, m) in model.modes().iter().enumerate() {
        println!("mode {}: omega {:.2} rad/s, zeta {:.4}", i + 1, m.omega(), m.zeta());
    }
    let (nominal, tail) = split_additive(&model, 1)?;
    let g_n = modal_tf(&nominal)?;
    let delta = modal_tf(&tail)?;
    println!("nominal DC {:.6e}, additive uncertainty DC {:.6e}", g_n.dc_gain()?, delta.dc_gain()?);
    println!("additive uncertainty NI: {}", classify_default(&delta)?.is_ni);

    let undamped = model.undamp();
    let mult = multiplicative_delta(&undamped, 1)?;
    let v = classify_default(&mult)?;
    println!("multiplicative uncertainty (undamped) NI {} LNI {}", v.is_ni, v.is_lni);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("modal_truncation example");
}
