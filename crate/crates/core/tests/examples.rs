#[allow(dead_code)]
mod transfer_function {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/transfer_function.rs"));
}

#[test]
fn transfer_function_runs() {
    transfer_function::run_example().expect("transfer_function example should run");
}

#[allow(dead_code)]
mod ni_classification {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/ni_classification.rs"));
}

#[test]
fn ni_classification_runs() {
    ni_classification::run_example().expect("ni_classification example should run");
}

#[allow(dead_code)]
mod interconnection {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/interconnection.rs"));
}

#[test]
fn interconnection_runs() {
    interconnection::run_example().expect("interconnection example should run");
}

#[allow(dead_code)]
mod modal_truncation {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/modal_truncation.rs"));
}

#[test]
fn modal_truncation_runs() {
    modal_truncation::run_example().expect("modal_truncation example should run");
}

#[allow(dead_code)]
mod pid_augmentation {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/pid_augmentation.rs"));
}

#[test]
fn pid_augmentation_runs() {
    pid_augmentation::run_example().expect("pid_augmentation example should run");
}

#[allow(dead_code)]
mod integrator_augmentation {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/integrator_augmentation.rs"));
}

#[test]
fn integrator_augmentation_runs() {
    integrator_augmentation::run_example().expect("integrator_augmentation example should run");
}

#[allow(dead_code)]
mod sni_synthesis {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/sni_synthesis.rs"));
}

#[test]
fn sni_synthesis_runs() {
    sni_synthesis::run_example().expect("sni_synthesis example should run");
}

#[allow(dead_code)]
mod certify_gain {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/certify_gain.rs"));
}

#[test]
fn certify_gain_runs() {
    certify_gain::run_example().expect("certify_gain example should run");
}

#[allow(dead_code)]
mod command_line {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/command_line.rs"));
}

#[test]
fn command_line_runs() {
    command_line::run_example().expect("command_line example should run");
}
