//! Running a command through the report layer, as the command-line tool
//! does, and listing the files it writes.

use metric_spectra::report::{run, Command, ExperimentConfig};

fn main() {
    let graph = concat!(env!("CARGO_MANIFEST_DIR"), "/data/star3.json");
    let out = std::env::temp_dir().join("metric-spectra-example");
    for command in [Command::Validate, Command::Bounds, Command::Partition] {
        let mut cfg = ExperimentConfig::new(command, &out);
        cfg.graph = Some(graph.into());
        cfg.n = Some(3);
        let o = run(&cfg);
        println!("{:<10} exit {}  {}", command.name(), o.status.code(), o.message);
        for f in o.files {
            println!("    {}", f.display());
        }
    }
}
