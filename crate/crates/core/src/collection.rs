//! Pattern collections: the records being ranked, with raw and scaled
//! measure values.

use std::collections::HashMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::dataset::TransactionDb;
use crate::error::{Error, Result};
use crate::measures::{measure_vector, minmax_scale, MeasureId};
use crate::mining::{contingency, AssociationRule, MinedRule};
use crate::ranking::PatternId;

/// How raw measure values are brought to a common scale before aggregation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalingMode {
    /// Min-max over the whole collection, computed once at load.
    #[default]
    Minmax,
    /// Values are used as given (they are assumed to already lie in `[0, 1]`).
    Identity,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternRecord {
    pub id: PatternId,
    pub rule: Option<AssociationRule>,
    pub measures: Vec<f64>,
    pub scaled: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct PatternCollection {
    measure_names: Vec<String>,
    records: Vec<PatternRecord>,
    index: HashMap<PatternId, usize>,
    scaling: ScalingMode,
}

impl PatternCollection {
    /// Builds records from raw rows `(id, values)`, scaling column-wise.
    pub fn from_rows(
        measure_names: Vec<String>,
        rows: Vec<(PatternId, Option<AssociationRule>, Vec<f64>)>,
        scaling: ScalingMode,
    ) -> Result<Self> {
        let m = measure_names.len();
        if m < 2 {
            return Err(Error::arg("at least two measures are required"));
        }
        if rows.is_empty() {
            return Err(Error::arg("pattern collection is empty"));
        }
        for (id, _, values) in &rows {
            if values.len() != m {
                return Err(Error::arg(format!("pattern {id} has {} values, want {m}", values.len())));
            }
            if values.iter().any(|v| !v.is_finite()) {
                return Err(Error::arg(format!("pattern {id} has non-finite measure values")));
            }
        }
        let scaled_columns: Vec<Vec<f64>> = match scaling {
            ScalingMode::Minmax => (0..m)
                .map(|j| {
                    let column: Vec<f64> = rows.iter().map(|(_, _, v)| v[j]).collect();
                    minmax_scale(&column)
                })
                .collect::<Result<_>>()?,
            ScalingMode::Identity => (0..m)
                .map(|j| rows.iter().map(|(_, _, v)| v[j]).collect())
                .collect(),
        };
        let mut records = Vec::with_capacity(rows.len());
        let mut index = HashMap::with_capacity(rows.len());
        for (k, (id, rule, measures)) in rows.into_iter().enumerate() {
            if index.insert(id, k).is_some() {
                return Err(Error::arg(format!("duplicate pattern id {id}")));
            }
            let scaled = scaled_columns.iter().map(|c| c[k]).collect();
            records.push(PatternRecord { id, rule, measures, scaled });
        }
        Ok(PatternCollection {
            measure_names,
            records,
            index,
            scaling,
        })
    }

    /// One record per mined rule, ids assigned in rule order.
    pub fn from_rules(
        db: &TransactionDb,
        rules: &[MinedRule],
        measures: &[MeasureId],
        scaling: ScalingMode,
    ) -> Result<Self> {
        let names = measures.iter().map(|m| m.name().to_string()).collect();
        let rows = rules
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let table = contingency(db, &r.rule);
                Ok((i as PatternId, Some(r.rule.clone()), measure_vector(measures, &table)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(names, rows, scaling)
    }

    /// Copies the given records, keeping ids and already-scaled values.
    pub fn subset(&self, ids: &[PatternId]) -> Result<Self> {
        let mut records = Vec::with_capacity(ids.len());
        let mut index = HashMap::with_capacity(ids.len());
        for id in ids {
            let rec = self.require(*id)?;
            if index.insert(*id, records.len()).is_some() {
                return Err(Error::arg(format!("duplicate pattern id {id}")));
            }
            records.push(rec.clone());
        }
        if records.is_empty() {
            return Err(Error::arg("subset is empty"));
        }
        Ok(PatternCollection {
            measure_names: self.measure_names.clone(),
            records,
            index,
            scaling: self.scaling,
        })
    }

    pub fn measure_names(&self) -> &[String] {
        &self.measure_names
    }

    pub fn measure_count(&self) -> usize {
        self.measure_names.len()
    }

    pub fn scaling(&self) -> ScalingMode {
        self.scaling
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[PatternRecord] {
        &self.records
    }

    pub fn ids(&self) -> Vec<PatternId> {
        self.records.iter().map(|r| r.id).collect()
    }

    pub fn get(&self, id: PatternId) -> Option<&PatternRecord> {
        self.index.get(&id).map(|&k| &self.records[k])
    }

    pub fn require(&self, id: PatternId) -> Result<&PatternRecord> {
        self.get(id)
            .ok_or_else(|| Error::arg(format!("pattern {id} is not in the collection")))
    }

    /// One row per pattern, one column per measure.
    pub fn write_measures_csv<W: Write>(&self, out: W, scaled: bool) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["id".to_string()];
        header.extend(self.measure_names.iter().cloned());
        w.write_record(&header)?;
        for r in &self.records {
            let values = if scaled { &r.scaled } else { &r.measures };
            let mut row = vec![r.id.to_string()];
            row.extend(values.iter().map(|v| v.to_string()));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}
