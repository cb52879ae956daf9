use crate::error::{Error, Result};

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Least-squares slopes of `values` over [ratios[i], ratios[i] + window] for
/// every start index whose window fits inside the series. Ratios must be
/// increasing.
pub fn window_slopes(ratios: &[f64], values: &[f64], window: f64) -> Result<Vec<(f64, f64)>> {
    if ratios.len() != values.len() || ratios.len() < 2 {
        return Err(Error::DimensionMismatch(format!("{} ratios, {} values", ratios.len(), values.len())));
    }
    if ratios.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter("ratios must increase".into()));
    }
    let first = ratios[0];
    let last = ratios[ratios.len() - 1];
    let slack = 1e-9 * (last - first);
    if !(window > 0.0) || window > last - first + slack {
        return Err(Error::InvalidParameter(format!(
            "window {window} exceeds trajectory span [{first}, {last}]"
        )));
    }
    let mut out = Vec::new();
    for i in 0..ratios.len() {
        let end = ratios[i] + window;
        if end > last + slack {
            break;
        }
        let j = ratios.partition_point(|&r| r <= end + slack);
        out.push((ratios[i], slope(&ratios[i..j], &values[i..j])));
    }
    Ok(out)
}

/// Onset of the quasi-steady regime: the earliest sampled ratio r* such that
/// every window of width `window` starting at or after r* has a fitted slope
/// below `slope_tol` in magnitude. `None` if even the last window is steep.
pub fn quasi_steady_onset_series(ratios: &[f64], values: &[f64], window: f64, slope_tol: f64) -> Result<Option<f64>> {
    let slopes = window_slopes(ratios, values, window)?;
    let mut onset = None;
    for &(r, s) in slopes.iter().rev() {
        if s.abs() < slope_tol {
            onset = Some(r);
        } else {
            break;
        }
    }
    Ok(onset)
}
