//! Objective interestingness measures over a rule's contingency table.
//!
//! One representative per group of mutually consistent measures (Tan, Kumar
//! & Srivastava). Degenerate denominators map to a finite value so that
//! aggregation and scaling never see NaN or infinity.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mining::ContingencyTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MeasureId {
    YulesY,
    Cosine,
    Laplace,
    Leverage,
    GoodmanKruskalLambda,
    InterestFactor,
    CertaintyFactor,
}

impl MeasureId {
    pub const ALL: [MeasureId; 7] = [
        MeasureId::YulesY,
        MeasureId::Cosine,
        MeasureId::Laplace,
        MeasureId::Leverage,
        MeasureId::GoodmanKruskalLambda,
        MeasureId::InterestFactor,
        MeasureId::CertaintyFactor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeasureId::YulesY => "YulesY",
            MeasureId::Cosine => "Cosine",
            MeasureId::Laplace => "Laplace",
            MeasureId::Leverage => "Leverage",
            MeasureId::GoodmanKruskalLambda => "Lambda",
            MeasureId::InterestFactor => "InterestFactor",
            MeasureId::CertaintyFactor => "CertaintyFactor",
        }
    }

    /// Closed interval every value of this measure lies in.
    pub fn range(self) -> (f64, f64) {
        match self {
            MeasureId::YulesY | MeasureId::CertaintyFactor => (-1.0, 1.0),
            MeasureId::Cosine | MeasureId::Laplace | MeasureId::GoodmanKruskalLambda => (0.0, 1.0),
            MeasureId::Leverage => (-0.25, 0.25),
            MeasureId::InterestFactor => (0.0, f64::INFINITY),
        }
    }
}

impl fmt::Display for MeasureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeasureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        MeasureId::ALL
            .into_iter()
            .find(|m| m.name().to_ascii_lowercase() == lower || format!("{m:?}").to_ascii_lowercase() == lower)
            .ok_or_else(|| Error::arg(format!("unknown measure {s:?}")))
    }
}

pub fn measure_value(id: MeasureId, t: &ContingencyTable) -> Result<f64> {
    t.validate()?;
    if t.n == 0 {
        return Err(Error::arg("contingency table over zero transactions"));
    }
    let f11 = t.f11 as f64;
    let f10 = t.f10 as f64;
    let f01 = t.f01 as f64;
    let f00 = t.f00 as f64;
    let n = t.n as f64;
    let fx = t.freq_body();
    let fy = t.freq_head();

    let v = match id {
        MeasureId::YulesY => {
            let a = (f11 * f00).sqrt();
            let b = (f10 * f01).sqrt();
            if a + b == 0.0 {
                0.0
            } else {
                (a - b) / (a + b)
            }
        }
        MeasureId::Cosine => {
            if fx == 0 || fy == 0 {
                0.0
            } else {
                f11 / ((fx as f64) * (fy as f64)).sqrt()
            }
        }
        MeasureId::Laplace => (f11 + 1.0) / (fx as f64 + 2.0),
        MeasureId::Leverage => {
            // integer numerator keeps the independence case exactly zero
            let num = t.f11 as i128 * t.n as i128 - fx as i128 * fy as i128;
            num as f64 / (n * n)
        }
        MeasureId::GoodmanKruskalLambda => {
            let cells = [[t.f11, t.f10], [t.f01, t.f00]];
            let rows = [t.f11 + t.f10, t.f01 + t.f00];
            let cols = [t.f11 + t.f01, t.f10 + t.f00];
            let row_max: u64 = cells.iter().map(|r| r[0].max(r[1])).sum();
            let col_max: u64 = (0..2).map(|j| cells[0][j].max(cells[1][j])).sum();
            let max_row = rows[0].max(rows[1]);
            let max_col = cols[0].max(cols[1]);
            let den = 2 * t.n - max_row - max_col;
            if den == 0 {
                0.0
            } else {
                (row_max + col_max - max_row - max_col) as f64 / den as f64
            }
        }
        MeasureId::InterestFactor => {
            if fx == 0 || fy == 0 {
                0.0
            } else {
                (t.n as f64 * f11) / (fx as f64 * fy as f64)
            }
        }
        MeasureId::CertaintyFactor => {
            if fx == 0 || fy == 0 || fy == t.n {
                0.0
            } else {
                let p_y = fy as f64 / n;
                let conf = f11 / fx as f64;
                if conf >= p_y {
                    (conf - p_y) / (1.0 - p_y)
                } else {
                    (conf - p_y) / p_y
                }
            }
        }
    };
    Ok(v)
}

/// Values of `ids` in order.
pub fn measure_vector(ids: &[MeasureId], t: &ContingencyTable) -> Result<Vec<f64>> {
    ids.iter().map(|id| measure_value(*id, t)).collect()
}

/// Min-max scaling to `[0, 1]`; a constant input maps to 0.5 everywhere.
pub fn minmax_scale(values: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::arg("cannot scale an empty slice"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::arg("cannot scale non-finite values"));
    }
    let (lo, hi) = values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if hi == lo {
        return Ok(vec![0.5; values.len()]);
    }
    let span = hi - lo;
    Ok(values.iter().map(|v| ((v - lo) / span).clamp(0.0, 1.0)).collect())
}
