//! Error norms and convergence-order fits.

use crate::error::{Error, Result};

/// One row of a convergence study.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRecord {
    pub experiment: String,
    pub n_points: usize,
    /// Mean average spacing of the cloud.
    pub h: f64,
    pub order_r: u32,
    pub rc_factor: f64,
    pub dn: f64,
    pub n_n: usize,
    pub eps_factor: f64,
    pub l2: f64,
    pub linf: f64,
    pub wall_time_s: f64,
}

/// `(L2, L∞)` of `numeric - analytic`, with `L2` the root mean square.
pub fn error_norms(numeric: &[f64], analytic: &[f64]) -> Result<(f64, f64)> {
    if numeric.is_empty() || numeric.len() != analytic.len() {
        return Err(Error::InvalidInput(format!(
            "error norms need equal non-empty inputs, got {} and {}",
            numeric.len(),
            analytic.len()
        )));
    }
    let (sum_sq, max) = numeric
        .iter()
        .zip(analytic)
        .map(|(a, b)| (a - b).abs())
        .fold((0.0, 0.0f64), |(s, m), e| (s + e * e, m.max(e)));
    Ok(((sum_sq / numeric.len() as f64).sqrt(), max))
}

/// Least-squares slope of `log10(err)` against `log10(h)`.
pub fn fit_slope(h: &[f64], err: &[f64]) -> Result<f64> {
    if h.len() != err.len() || h.len() < 2 {
        return Err(Error::InvalidInput(
            "need at least two (h, error) pairs".into(),
        ));
    }
    if h.iter().chain(err).any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidInput(
            "spacings and errors must be positive".into(),
        ));
    }
    let xs: Vec<f64> = h.iter().map(|v| v.log10()).collect();
    let ys: Vec<f64> = err.iter().map(|v| v.log10()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidInput("spacings must be distinct".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

/// Observed convergence orders of a study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceOrder {
    pub l2: f64,
    pub linf: f64,
}

/// Fits orders to records at three or more distinct spacings.
pub fn fit_convergence_order(records: &[ConvergenceRecord]) -> Result<ConvergenceOrder> {
    if records.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "an order fit needs at least 3 records, got {}",
            records.len()
        )));
    }
    let h: Vec<f64> = records.iter().map(|r| r.h).collect();
    let l2: Vec<f64> = records.iter().map(|r| r.l2).collect();
    let linf: Vec<f64> = records.iter().map(|r| r.linf).collect();
    Ok(ConvergenceOrder {
        l2: fit_slope(&h, &l2)?,
        linf: fit_slope(&h, &linf)?,
    })
}
