//! Prints the default config of every experiment, or validates and runs a
//! config file given as the first argument.

use qvqt::experiments::{run_experiment, ExperimentConfig, ExperimentId};

fn main() -> qvqt::Result<()> {
    let Some(path) = std::env::args().nth(1) else {
        for id in [
            ExperimentId::E1DepthSweep,
            ExperimentId::E2BetaSweep,
            ExperimentId::E3IterationScaling,
            ExperimentId::E4AlphaSweep,
            ExperimentId::E5PhaseDiagram,
            ExperimentId::E6ChainScaling,
        ] {
            println!("{}", ExperimentConfig::default_for(id).to_json());
        }
        return Ok(());
    };
    let cfg = ExperimentConfig::load(path.as_ref())?;
    cfg.validate()?;
    println!("running {} (config sha256 {})", cfg.id(), qvqt::experiments::config_hash(&cfg));
    let out = run_experiment(&cfg)?;
    for table in &out.tables {
        println!("== {}", table.name);
        print!("{}", table.data_csv());
    }
    Ok(())
}
