//! Least-squares power-law fits used by the convergence studies.

/// Slope and intercept of `log(y) = slope * log(x) + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PowerLawFit {
    pub slope: f64,
    pub intercept: f64,
}

/// Fits a power law through `(x, y)` pairs; both coordinates must be positive.
pub fn loglog_fit(points: &[(f64, f64)]) -> Option<PowerLawFit> {
    if points.len() < 2 || points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return None;
    }
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Some(PowerLawFit { slope, intercept: my - slope * mx })
}
