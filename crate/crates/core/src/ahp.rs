//! Pairwise comparison matrices and principal-eigenvector weights.
//!
//! Averaged concordance gaps between measures are mapped onto Saaty's 1–9
//! scale, assembled into a reciprocal matrix, and the normalized Perron
//! vector of that matrix becomes the measure weights.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Running average of concordance gaps `Δ[i][j] = K_i − K_j` over the
/// rankings absorbed so far. Only the upper triangle is stored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaState {
    m: usize,
    deltas: Vec<f64>,
    observations: u64,
}

impl DeltaState {
    pub fn new(m: usize) -> Self {
        DeltaState {
            m,
            deltas: vec![0.0; m * m],
            observations: 0,
        }
    }

    /// Builds a state from the strict upper triangle, row by row
    /// (`upper[i]` holds `Δ[i][i+1..m]`).
    pub fn from_upper(upper: &[Vec<f64>], observations: u64) -> Result<Self> {
        let m = upper.len() + 1;
        let mut state = DeltaState::new(m);
        for (i, row) in upper.iter().enumerate() {
            if row.len() != m - i - 1 {
                return Err(Error::arg(format!("row {i} has {} entries, want {}", row.len(), m - i - 1)));
            }
            for (k, d) in row.iter().enumerate() {
                if !(-1.0..=1.0).contains(d) {
                    return Err(Error::arg(format!("gap {d} outside [-1,1]")));
                }
                state.deltas[i * m + i + 1 + k] = *d;
            }
        }
        state.observations = observations;
        Ok(state)
    }

    pub fn criteria(&self) -> usize {
        self.m
    }

    /// Number of rankings absorbed (`l`).
    pub fn observations(&self) -> u64 {
        self.observations
    }

    /// Antisymmetric read: `get(j, i) == -get(i, j)`, zero on the diagonal.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.deltas[i * self.m + j],
            std::cmp::Ordering::Greater => -self.deltas[j * self.m + i],
            std::cmp::Ordering::Equal => 0.0,
        }
    }

    /// Folds one ranking's per-measure concordances into the running mean:
    /// `Δ ← l/(l+1)·Δ + 1/(l+1)·(K_i − K_j)`.
    pub fn absorb(&mut self, concordance: &[f64]) -> Result<()> {
        if concordance.len() != self.m {
            return Err(Error::arg(format!(
                "expected {} concordance values, got {}",
                self.m,
                concordance.len()
            )));
        }
        let l = self.observations as f64;
        let keep = l / (l + 1.0);
        let add = 1.0 / (l + 1.0);
        for i in 0..self.m {
            for j in i + 1..self.m {
                let cell = &mut self.deltas[i * self.m + j];
                *cell = keep * *cell + add * (concordance[i] - concordance[j]);
            }
        }
        self.observations += 1;
        Ok(())
    }
}

/// Maps a gap in `[-1, 1]` to a signed judgement with magnitude in `1..=9`:
/// `sign(d)·clamp(round_half_up(10·|d|), 1, 9)`. Magnitude 1 is indifference
/// and carries no direction, so it is always reported as `+1`.
pub fn scale_delta(d: f64) -> Result<i32> {
    if !(-1.0..=1.0).contains(&d) {
        return Err(Error::arg(format!("gap {d} outside [-1,1]")));
    }
    // the epsilon absorbs representation error so that 0.25 → 3 and 0.55 → 6
    let magnitude = ((10.0 * d.abs() + 0.5 + 1e-9).floor() as i32).clamp(1, 9);
    Ok(if d < 0.0 && magnitude > 1 { -magnitude } else { magnitude })
}

/// Reciprocal positive matrix. Only judgements above the diagonal are
/// stored; `a[j][i]` is always derived as `1 / a[i][j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonMatrix {
    m: usize,
    upper: Vec<f64>,
}

impl ComparisonMatrix {
    pub fn ones(m: usize) -> Self {
        ComparisonMatrix {
            m,
            upper: vec![1.0; m * m],
        }
    }

    /// Accepts a full matrix and checks reciprocity and the `[1/9, 9]` range.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        if m < 2 {
            return Err(Error::arg("comparison matrix needs at least two criteria"));
        }
        let mut out = ComparisonMatrix::ones(m);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(Error::arg("comparison matrix must be square"));
            }
            if (row[i] - 1.0).abs() > 1e-12 {
                return Err(Error::arg(format!("a[{i}][{i}] = {} is not 1", row[i])));
            }
            for j in i + 1..m {
                let a = row[j];
                if !(1.0 / 9.0 - 1e-12..=9.0 + 1e-12).contains(&a) {
                    return Err(Error::arg(format!("a[{i}][{j}] = {a} outside [1/9, 9]")));
                }
                if (a * rows[j][i] - 1.0).abs() > 1e-9 {
                    return Err(Error::arg(format!("a[{i}][{j}] and a[{j}][{i}] are not reciprocal")));
                }
                out.upper[i * m + j] = a;
            }
        }
        Ok(out)
    }

    pub fn criteria(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.upper[i * self.m + j],
            std::cmp::Ordering::Greater => 1.0 / self.upper[j * self.m + i],
            std::cmp::Ordering::Equal => 1.0,
        }
    }

    fn set_judgement(&mut self, i: usize, j: usize, value: f64) {
        if i < j {
            self.upper[i * self.m + j] = value;
        } else {
            self.upper[j * self.m + i] = 1.0 / value;
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.m)
            .map(|i| (0..self.m).map(|j| self.get(i, j)).collect())
            .collect()
    }

    fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.m)
            .map(|i| (0..self.m).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Saaty's consistency ratio `CI / RI` with `CI = (λ_max − m)/(m − 1)`.
    /// Reported as a diagnostic; `None` for `m ≤ 2` or beyond the RI table.
    pub fn consistency_ratio(&self, lambda_max: f64) -> Option<f64> {
        const RANDOM_INDEX: [f64; 11] = [0.0, 0.0, 0.0, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45, 1.49];
        let ri = *RANDOM_INDEX.get(self.m)?;
        if ri == 0.0 {
            return None;
        }
        let ci = (lambda_max - self.m as f64) / (self.m as f64 - 1.0);
        Some(ci / ri)
    }
}

impl Serialize for ComparisonMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComparisonMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        ComparisonMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// Builds the comparison matrix from the scaled gaps. A positive judgement
/// `s` sets `a[i][j] = s`; a negative one sets `a[j][i] = |s|`.
pub fn build_matrix(state: &DeltaState) -> ComparisonMatrix {
    let m = state.criteria();
    let mut a = ComparisonMatrix::ones(m);
    for i in 0..m {
        for j in i + 1..m {
            let s = scale_delta(state.get(i, j).clamp(-1.0, 1.0)).expect("clamped gap is in range");
            if s > 0 {
                a.set_judgement(i, j, s as f64);
            } else {
                a.set_judgement(j, i, (-s) as f64);
            }
        }
    }
    a
}

/// Strictly positive weights summing to one.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn uniform(m: usize) -> Self {
        WeightVector(vec![1.0 / m as f64; m])
    }

    /// Normalizes positive values to sum to one.
    pub fn normalized(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::arg("weight vector must not be empty"));
        }
        if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::arg("weights must be finite and positive"));
        }
        let total: f64 = values.iter().sum();
        Ok(WeightVector(values.into_iter().map(|v| v / total).collect()))
    }

    /// Accepts already-normalized weights as-is (sum within 1e-6 of one).
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::arg("weights must be finite and positive"));
        }
        let total: f64 = values.iter().sum();
        if (total - 1.0).abs() > 1e-6 {
            return Err(Error::arg(format!("weights sum to {total}, not 1")));
        }
        Ok(WeightVector(values))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl<'de> Deserialize<'de> for WeightVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let values = Vec::<f64>::deserialize(d)?;
        WeightVector::new(values).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvmSolution {
    pub weights: WeightVector,
    pub lambda_max: f64,
    pub iterations: usize,
}

pub const EVM_TOLERANCE: f64 = 1e-12;
pub const EVM_MAX_ITERATIONS: usize = 10_000;

/// Principal eigenvector by power iteration with L1 renormalization.
pub fn evm_weights(a: &ComparisonMatrix) -> Result<EvmSolution> {
    let m = a.criteria();
    let mut w = vec![1.0 / m as f64; m];
    for iteration in 1..=EVM_MAX_ITERATIONS {
        let mut next = a.mul_vec(&w);
        let total: f64 = next.iter().sum();
        next.iter_mut().for_each(|v| *v /= total);
        let change = next
            .iter()
            .zip(&w)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        w = next;
        if change < EVM_TOLERANCE {
            let aw = a.mul_vec(&w);
            let lambda_max = aw.iter().zip(&w).map(|(x, y)| x * y).sum::<f64>()
                / w.iter().map(|y| y * y).sum::<f64>();
            return Ok(EvmSolution {
                weights: WeightVector::normalized(w)?,
                lambda_max,
                iterations: iteration,
            });
        }
    }
    Err(Error::Numerical(format!(
        "power iteration did not converge in {EVM_MAX_ITERATIONS} steps"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn example_one() -> ComparisonMatrix {
        ComparisonMatrix::from_rows(&[
            vec![1.0, 0.5, 0.25],
            vec![2.0, 1.0, 0.5],
            vec![4.0, 2.0, 1.0],
        ])
        .unwrap()
    }

    #[test]
    fn scale_examples() {
        let cases = [
            (0.42, 4),
            (0.28, 3),
            (-0.60, -6),
            (-0.08, 1),
            (-0.149, 1),
            (-0.15, -2),
            (0.0, 1),
            (0.25, 3),
            (1.0, 9),
            (-0.43, -4),
            (0.20, 2),
            (-0.25, -3),
            (-0.55, -6),
        ];
        for (d, want) in cases {
            assert_eq!(scale_delta(d).unwrap(), want, "scale({d})");
        }
        assert!(scale_delta(1.01).is_err());
        assert!(scale_delta(f64::NAN).is_err());
    }

    #[test]
    fn five_measure_example_eigenvector() {
        let upper = vec![
            vec![0.0, 0.42, 0.42, -0.43],
            vec![0.20, 0.28, -0.25],
            vec![-0.08, -0.55],
            vec![-0.60],
        ];
        let a = build_matrix(&DeltaState::from_upper(&upper, 1).unwrap());
        let evm = evm_weights(&a).unwrap();
        // reference values from numpy.linalg.eig
        let want = [0.19794253, 0.16740013, 0.06792679, 0.06247513, 0.50425542];
        for (g, w) in evm.weights.as_slice().iter().zip(want) {
            assert!((g - w).abs() < 1e-7, "{g} vs {w}");
        }
        assert!((evm.lambda_max - 5.117718756116652).abs() < 1e-9);
        let (oracle, lambda) = nalgebra_principal(&a);
        assert!((lambda - evm.lambda_max).abs() < 1e-9);
        for (g, w) in evm.weights.as_slice().iter().zip(oracle) {
            assert!((g - w).abs() < 1e-9);
        }
    }

    #[test]
    fn indifference_gives_ones() {
        let a = build_matrix(&DeltaState::new(4));
        assert_eq!(a, ComparisonMatrix::ones(4));
    }

    #[test]
    fn two_criteria_matrix() {
        let state = DeltaState::from_upper(&[vec![0.3]], 1).unwrap();
        let a = build_matrix(&state);
        assert_eq!(a.to_rows(), vec![vec![1.0, 3.0], vec![1.0 / 3.0, 1.0]]);
        let neg = DeltaState::from_upper(&[vec![-0.3]], 1).unwrap();
        assert_eq!(build_matrix(&neg).to_rows(), vec![vec![1.0, 1.0 / 3.0], vec![3.0, 1.0]]);
    }

    #[test]
    fn example_one_weights() {
        let sol = evm_weights(&example_one()).unwrap();
        let w = sol.weights.as_slice();
        for (got, want) in w.iter().zip([1.0 / 7.0, 2.0 / 7.0, 4.0 / 7.0]) {
            assert!((got - want).abs() < 1e-9);
        }
        assert!((sol.lambda_max - 3.0).abs() < 1e-9);
    }

    #[test]
    fn two_by_two_consistent() {
        let a = ComparisonMatrix::from_rows(&[vec![1.0, 2.0], vec![0.5, 1.0]]).unwrap();
        let w = evm_weights(&a).unwrap().weights;
        assert!((w.as_slice()[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((w.as_slice()[1] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn from_rows_validation() {
        assert!(ComparisonMatrix::from_rows(&[vec![1.0]]).is_err());
        assert!(ComparisonMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).is_err());
        assert!(ComparisonMatrix::from_rows(&[vec![1.0, 10.0], vec![0.1, 1.0]]).is_err());
        assert!(ComparisonMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 1.0]]).is_err());
    }

    #[test]
    fn json_roundtrip_matrix() {
        let a = example_one();
        let text = serde_json::to_string(&a).unwrap();
        assert_eq!(text, "[[1.0,0.5,0.25],[2.0,1.0,0.5],[4.0,2.0,1.0]]");
        let back: ComparisonMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn weight_vector_validation() {
        assert!(WeightVector::new(vec![0.5, 0.5]).is_ok());
        assert!(WeightVector::new(vec![0.5, 0.6]).is_err());
        assert!(WeightVector::new(vec![1.0, 0.0]).is_err());
        assert!(serde_json::from_str::<WeightVector>("[0.2, 0.2]").is_err());
        let w = WeightVector::normalized(vec![1.0, 3.0]).unwrap();
        assert_eq!(w.as_slice(), &[0.25, 0.75]);
    }

    #[test]
    fn running_average() {
        let mut s = DeltaState::new(3);
        s.absorb(&[1.0, 0.0, 0.5]).unwrap();
        assert_eq!(s.get(0, 1), 1.0);
        assert_eq!(s.get(1, 0), -1.0);
        assert_eq!(s.get(0, 2), 0.5);
        s.absorb(&[0.0, 1.0, 0.5]).unwrap();
        assert_eq!(s.get(0, 1), 0.0);
        assert_eq!(s.get(0, 2), 0.0);
        assert_eq!(s.get(1, 2), 0.0);
        assert_eq!(s.observations(), 2);
        assert!(s.absorb(&[1.0]).is_err());
    }

    #[test]
    fn consistency_ratio_diagnostic() {
        let a = example_one();
        let sol = evm_weights(&a).unwrap();
        assert!(a.consistency_ratio(sol.lambda_max).unwrap().abs() < 1e-9);
        assert!(ComparisonMatrix::ones(2).consistency_ratio(2.0).is_none());
    }

    // Independent route: the eigenvalue of largest real part from a Schur
    // decomposition, and the null vector of (A − λI) from an SVD.
    fn nalgebra_principal(a: &ComparisonMatrix) -> (Vec<f64>, f64) {
        let m = a.criteria();
        let mat = nalgebra::DMatrix::from_fn(m, m, |i, j| a.get(i, j));
        let lambda = mat
            .complex_eigenvalues()
            .iter()
            .map(|c| c.re)
            .fold(f64::NEG_INFINITY, f64::max);
        let shifted = &mat - nalgebra::DMatrix::identity(m, m) * lambda;
        let svd = shifted.svd(false, true);
        let v_t = svd.v_t.unwrap();
        let (idx, _) = svd
            .singular_values
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, s)| if *s < acc.1 { (i, *s) } else { acc });
        let v: Vec<f64> = v_t.row(idx).iter().copied().collect();
        let total: f64 = v.iter().sum();
        (v.iter().map(|x| x / total).collect(), lambda)
    }

    fn judgement() -> impl Strategy<Value = f64> {
        (1i32..=9, any::<bool>()).prop_map(|(s, inv)| if inv { 1.0 / s as f64 } else { s as f64 })
    }

    fn random_matrix() -> impl Strategy<Value = ComparisonMatrix> {
        (2usize..=8).prop_flat_map(|m| {
            prop::collection::vec(judgement(), m * (m - 1) / 2).prop_map(move |vals| {
                let mut a = ComparisonMatrix::ones(m);
                let mut k = 0;
                for i in 0..m {
                    for j in i + 1..m {
                        a.set_judgement(i, j, vals[k]);
                        k += 1;
                    }
                }
                a
            })
        })
    }

    proptest! {
        #[test]
        fn evm_agrees_with_independent_solver(a in random_matrix()) {
            let sol = evm_weights(&a).unwrap();
            let (oracle, lambda) = nalgebra_principal(&a);
            let m = a.criteria();
            prop_assert!(sol.lambda_max >= m as f64 - 1e-9);
            prop_assert!((sol.lambda_max - lambda).abs() < 1e-8);
            for (x, y) in sol.weights.as_slice().iter().zip(&oracle) {
                prop_assert!((x - y).abs() < 1e-8);
            }
            // residual
            let w = sol.weights.as_slice();
            let aw = a.mul_vec(w);
            for i in 0..m {
                prop_assert!((aw[i] - sol.lambda_max * w[i]).abs() < 1e-9);
            }
            let total: f64 = w.iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
            prop_assert!(w.iter().all(|x| *x > 0.0));
        }

        #[test]
        fn build_matrix_is_reciprocal(upper in (2usize..8).prop_flat_map(|m| {
            (0..m - 1).map(|i| prop::collection::vec(-1.0f64..=1.0, m - 1 - i)).collect::<Vec<_>>()
        })) {
            let state = DeltaState::from_upper(&upper, 1).unwrap();
            let a = build_matrix(&state);
            for i in 0..a.criteria() {
                prop_assert_eq!(a.get(i, i), 1.0);
                for j in 0..a.criteria() {
                    let p = a.get(i, j) * a.get(j, i);
                    prop_assert!((p - 1.0).abs() < 1e-15);
                    prop_assert!(a.get(i, j) >= 1.0 / 9.0 && a.get(i, j) <= 9.0);
                }
            }
        }

        #[test]
        fn consistent_matrix_recovers_generator(v in prop::collection::vec(0.2f64..1.8, 2..8)) {
            let m = v.len();
            let rows: Vec<Vec<f64>> = (0..m).map(|i| (0..m).map(|j| v[i] / v[j]).collect()).collect();
            let a = ComparisonMatrix::from_rows(&rows).unwrap();
            let sol = evm_weights(&a).unwrap();
            let total: f64 = v.iter().sum();
            for (x, y) in sol.weights.as_slice().iter().zip(&v) {
                prop_assert!((x - y / total).abs() < 1e-9);
            }
            prop_assert!((sol.lambda_max - m as f64).abs() < 1e-9);
        }

        #[test]
        fn permutation_equivariant(a in random_matrix(), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let m = a.criteria();
            let mut perm: Vec<usize> = (0..m).collect();
            perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let rows: Vec<Vec<f64>> = (0..m).map(|i| (0..m).map(|j| a.get(perm[i], perm[j])).collect()).collect();
            let b = ComparisonMatrix::from_rows(&rows).unwrap();
            let wa = evm_weights(&a).unwrap().weights;
            let wb = evm_weights(&b).unwrap().weights;
            for (i, &p) in perm.iter().enumerate() {
                prop_assert!((wb.as_slice()[i] - wa.as_slice()[p]).abs() < 1e-9);
            }
        }
    }
}
