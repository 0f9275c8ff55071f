// Noisy answers and a mid-run change of target, through the experiment harness.

use ahprank::bench::{run_active_experiment, DataSource, ExperimentConfig, Workload};
use ahprank::synthetic::DbConfig;
use ahprank::EmulatorSpec;

fn main() -> ahprank::Result<()> {
    let db = DbConfig {
        transactions: 800,
        items: 15,
        ..DbConfig::default()
    };
    let mut config = ExperimentConfig::new(DataSource::SyntheticDb(db), EmulatorSpec::Chi, 42);
    config.minsup = 0.04;
    config.max_itemset = Some(3);
    config.theta = 300;
    config.max_queries = 20;
    config.repeats = 3;
    let workload = Workload::load(&config)?;
    println!("{} rules", workload.collection.len());

    for err in [0.0, 0.2, 0.4] {
        let report = run_active_experiment(&ExperimentConfig { err, ..config.clone() }, &workload)?;
        println!("err {err:.1}: mean rho {:.4}", report.summary.mean.rho);
    }

    // answer like a lexicographic user for ten queries, then like a linear one
    let swap = ExperimentConfig {
        emulator: EmulatorSpec::Lex { seed: 1, order: None },
        swap_after: Some(10),
        swap_to: Some(EmulatorSpec::Rand { seed: 2, weights: None }),
        ..config
    };
    let report = run_active_experiment(&swap, &workload)?;
    for t in [0, 5, 10, 15, 20] {
        println!("t={t:>2} rho against the second target {:.4}", report.mean_rho_at(t).unwrap_or(f64::NAN));
    }
    Ok(())
}
