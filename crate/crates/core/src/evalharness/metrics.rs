//! RMSE, Pearson's r and Kendall's tau-b.

use super::EvalError;

fn check_lengths(a: &[f64], b: &[f64], min: usize) -> Result<(), EvalError> {
    if a.len() != b.len() {
        return Err(EvalError::LengthMismatch(a.len(), b.len()));
    }
    if a.len() < min {
        return Err(EvalError::TooFewPoints {
            found: a.len(),
            required: min,
        });
    }
    Ok(())
}

pub fn rmse(pred: &[f64], actual: &[f64]) -> Result<f64, EvalError> {
    check_lengths(pred, actual, 1)?;
    let sum: f64 = pred.iter().zip(actual).map(|(p, a)| (p - a).powi(2)).sum();
    Ok((sum / pred.len() as f64).sqrt())
}

pub fn pearson_r(x: &[f64], y: &[f64]) -> Result<f64, EvalError> {
    check_lengths(x, y, 2)?;
    let constant = |v: &[f64]| v.iter().all(|&a| a == v[0]);
    if constant(x) || constant(y) {
        return Err(EvalError::Undefined("pearson r of a constant input".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(EvalError::Undefined("pearson r of a constant input".into()));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Number of tied pairs within runs of equal values of a sorted slice.
fn tied_pairs<T: PartialEq>(sorted: &[T]) -> u64 {
    let mut total = 0;
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    total + run * (run - 1) / 2
}

/// Sorts `v` and returns the number of inversions.
fn merge_count(v: &mut [f64], buf: &mut Vec<f64>) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = merge_count(&mut v[..mid], buf) + merge_count(&mut v[mid..], buf);
    buf.clear();
    let (mut i, mut j) = (0, mid);
    while i < mid && j < n {
        if v[j] < v[i] {
            buf.push(v[j]);
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            buf.push(v[i]);
            i += 1;
        }
    }
    buf.extend_from_slice(&v[i..mid]);
    buf.extend_from_slice(&v[j..n]);
    v.copy_from_slice(buf);
    swaps
}

/// Tau-b in O(n log n) (Knight's algorithm).
pub fn kendall_tau(x: &[f64], y: &[f64]) -> Result<f64, EvalError> {
    check_lengths(x, y, 2)?;
    if x.iter().chain(y).any(|v| v.is_nan()) {
        return Err(EvalError::Undefined("kendall tau with NaN input".into()));
    }
    let n = x.len() as u64;
    let mut pairs: Vec<(f64, f64)> = x.iter().copied().zip(y.iter().copied()).collect();
    pairs.sort_by(|a, b| a.partial_cmp(b).expect("no NaN"));
    let n0 = n * (n - 1) / 2;
    let n1 = tied_pairs(&pairs.iter().map(|p| p.0).collect::<Vec<_>>());
    let n3 = tied_pairs(&pairs);
    let mut ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let mut buf = Vec::with_capacity(ys.len());
    let swaps = merge_count(&mut ys, &mut buf);
    let n2 = tied_pairs(&ys);
    if n1 == n0 || n2 == n0 {
        return Err(EvalError::Undefined("kendall tau with an all-tied input".into()));
    }
    let numerator = n0 as f64 - n1 as f64 - n2 as f64 + n3 as f64 - 2.0 * swaps as f64;
    let denominator = ((n0 - n1) as f64).sqrt() * ((n0 - n2) as f64).sqrt();
    Ok((numerator / denominator).clamp(-1.0, 1.0))
}
