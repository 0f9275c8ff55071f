// How well each measure alone matches a target, and passive cross-validation.

use ahprank::bench::{run_measure_audit, run_passive_cv, DataSource, ExperimentConfig, Mode, Workload};
use ahprank::synthetic::DbConfig;
use ahprank::EmulatorSpec;

fn main() -> ahprank::Result<()> {
    let db = DbConfig {
        transactions: 600,
        items: 12,
        ..DbConfig::default()
    };
    let mut config = ExperimentConfig::new(DataSource::SyntheticDb(db), EmulatorSpec::Chi, 5);
    config.minsup = 0.05;
    config.max_itemset = Some(3);
    config.mode = Mode::Passive;
    let workload = Workload::load(&config)?;

    let audit = run_measure_audit(&config, &workload)?;
    for (name, rho) in audit.measures.iter().zip(&audit.rho) {
        println!("{name:>16} {rho:+.4}");
    }
    println!("{:>16} {:+.4}", "VBM", audit.vbm);

    let cv = run_passive_cv(&config, &workload)?;
    for (fold, run) in cv.runs.iter().enumerate() {
        println!("fold {fold}: rho {:.4} R@10% {:.3} R@1% {:.3}", run.rho, run.recall_10, run.recall_1);
    }
    println!("{}", serde_json::to_string_pretty(&cv.mean)?);
    Ok(())
}
