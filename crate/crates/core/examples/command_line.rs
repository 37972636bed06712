// Drive the command layer the binary uses, writing into a temporary
// directory.

use std::path::Path;

use ni_synth::cli::{cmd_freqresp, cmd_synth, RunConfig};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/paper_example.cfg");
    let mut cfg = RunConfig::load(&cfg_path)?;
    let out = tempfile::tempdir()?;
    cfg.output_dir = out.path().to_path_buf();

    let synth = cmd_synth(&cfg)?;
    println!("{}", synth.render());
    let fr = cmd_freqresp(&cfg)?;
    println!("freqresp wrote {:?}, exit code {}", fr.manifest, fr.exit_code());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("command_line example");
}
