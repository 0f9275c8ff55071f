// Comparison matrices, gap scaling and eigenvector weights.

use ahprank::{build_matrix, evm_weights, scale_delta, ComparisonMatrix, DeltaState};

fn main() -> ahprank::Result<()> {
    // a consistent matrix: criterion 3 is twice as important as 2, four times 1
    let a = ComparisonMatrix::from_rows(&[
        vec![1.0, 0.5, 0.25],
        vec![2.0, 1.0, 0.5],
        vec![4.0, 2.0, 1.0],
    ])?;
    let evm = evm_weights(&a)?;
    println!("weights {:?}", evm.weights.as_slice());
    println!("lambda_max {:.6} after {} iterations", evm.lambda_max, evm.iterations);
    println!("consistency ratio {:?}", a.consistency_ratio(evm.lambda_max));

    for d in [0.0, -0.08, 0.25, 0.42, -0.60, 1.0] {
        println!("scale({d:+.2}) = {:+}", scale_delta(d)?);
    }

    // two observations of three criteria, folded into running-average gaps
    let mut state = DeltaState::new(3);
    state.absorb(&[0.9, 0.4, 0.1])?;
    state.absorb(&[0.7, 0.6, 0.3])?;
    let a = build_matrix(&state);
    for row in a.to_rows() {
        println!("{}", row.iter().map(|v| format!("{v:6.3}")).collect::<Vec<_>>().join(" "));
    }
    println!("learned {:?}", evm_weights(&a)?.weights.as_slice());
    Ok(())
}
