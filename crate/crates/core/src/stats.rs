//! Small summary statistics shared by the experiment runners.

/// Mean and sample standard deviation (zero for fewer than two samples).
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, 0.0);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Standard error of the mean.
pub fn std_error(xs: &[f64]) -> f64 {
    let (_, sd) = mean_std(xs);
    sd / (xs.len() as f64).sqrt()
}

/// Standard error of a Bernoulli frequency estimate.
pub fn binomial_std_error(p_hat: f64, trials: usize) -> f64 {
    (p_hat * (1.0 - p_hat) / trials as f64).sqrt()
}

/// Least-squares slope of `ln y` against `ln x`. `None` for fewer than two
/// distinct abscissae or non-positive values.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if logs.len() < 2 || sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// `n` log-spaced values from `from` to `to` inclusive.
pub fn log_space(from: f64, to: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![from],
        _ => {
            let (a, b) = (from.ln(), to.ln());
            (0..n)
                .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
                .collect()
        }
    }
}
