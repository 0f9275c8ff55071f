// FIMI parsing, Eclat mining, rule generation and the measure table.

use std::io::stdout;

use ahprank::mining::{mine_frequent_bounded, write_rules_csv};
use ahprank::{generate_rules, MeasureId, PatternCollection, RuleConfig, ScalingMode, TransactionDb};

const BASKETS: &str = "\
1 2 5
2 4
2 3
1 2 4
1 3
2 3
1 3
1 2 3 5
1 2 3
";

fn main() -> ahprank::Result<()> {
    let db = TransactionDb::parse_fimi(BASKETS)?;
    println!("{} transactions over items {:?}", db.len(), db.items());

    let frequent = mine_frequent_bounded(&db, 2, Some(3))?;
    for f in &frequent {
        println!("{} x{}", f.items, f.freq);
    }

    let rules = generate_rules(&frequent, &db, &RuleConfig { minconf: 0.5, ..RuleConfig::default() })?;
    write_rules_csv(&rules, stdout())?;

    let collection = PatternCollection::from_rules(&db, &rules, &MeasureId::ALL, ScalingMode::Minmax)?;
    collection.write_measures_csv(stdout(), false)?;
    Ok(())
}
