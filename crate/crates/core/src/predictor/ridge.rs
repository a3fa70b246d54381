use nalgebra::{DMatrix, DVector};

use super::PredictorError;

/// Gram system `(ZᵀZ + λI)` and right-hand side `Zᵀy` for standardized
/// (column-centred) features `Z`.
pub(crate) fn normal_system(z: &[Vec<f64>], y: &[f64], lambda: f64) -> (DMatrix<f64>, DVector<f64>) {
    let d = z.first().map_or(0, Vec::len);
    let mut a = DMatrix::<f64>::zeros(d, d);
    let mut rhs = DVector::<f64>::zeros(d);
    for (row, &t) in z.iter().zip(y) {
        for i in 0..d {
            let zi = row[i];
            if zi == 0.0 {
                continue;
            }
            rhs[i] += zi * t;
            for j in i..d {
                a[(i, j)] += zi * row[j];
            }
        }
    }
    for i in 0..d {
        for j in 0..i {
            a[(i, j)] = a[(j, i)];
        }
        a[(i, i)] += lambda;
    }
    (a, rhs)
}

/// Solves the ridge normal equations on standardized features. The bias is
/// the target mean and is not penalized.
pub(crate) fn solve(z: &[Vec<f64>], y: &[f64], lambda: f64) -> Result<(Vec<f64>, f64), PredictorError> {
    let n = y.len() as f64;
    let bias = y.iter().sum::<f64>() / n;
    let centred: Vec<f64> = y.iter().map(|t| t - bias).collect();
    let (a, rhs) = normal_system(z, &centred, lambda);
    let d = rhs.len();
    if d == 0 {
        return Ok((Vec::new(), bias));
    }
    let singular = || PredictorError::Singular {
        message: "normal equations are singular; use a positive ridge penalty (lambda > 0)".into(),
    };
    let chol = a.clone().cholesky().ok_or_else(singular)?;
    let diag = chol.l_dirty().diagonal();
    let (lo, hi) = diag
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    if lambda == 0.0 && (lo / hi).powi(2) < 1e-12 {
        return Err(singular());
    }
    let mut w = chol.solve(&rhs);
    for _ in 0..2 {
        let r = &rhs - &a * &w;
        w += chol.solve(&r);
    }
    Ok((w.iter().copied().collect(), bias))
}
