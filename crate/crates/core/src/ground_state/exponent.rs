use super::scan::ScanPoint;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Observable {
    /// |⟨Jx⟩|/(N/2).
    Jx,
    /// 1 + ⟨Jz⟩/(N/2).
    Jz,
    /// ⟨a†a⟩/N.
    Photons,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Above,
    Below,
}

/// Upper edge of the fit window in |ratio − 1|.
pub const FIT_WINDOW: f64 = 0.05;
pub const MIN_FIT_POINTS: usize = 8;

/// `n` ratios log-spaced in |ratio − 1| ∈ [`lo`, FIT_WINDOW] on the given side.
pub fn log_spaced_window(n: usize, lo: f64, side: Side) -> Vec<f64> {
    let (a, b) = (lo.ln(), FIT_WINDOW.ln());
    (0..n)
        .map(|i| {
            let t = if n == 1 { 1.0 } else { i as f64 / (n - 1) as f64 };
            let eps = (a + t * (b - a)).exp();
            match side {
                Side::Above => 1.0 + eps,
                Side::Below => 1.0 - eps,
            }
        })
        .collect()
}

fn value(p: &ScanPoint, obs: Observable) -> f64 {
    match obs {
        Observable::Jx => p.jx_scaled.abs(),
        Observable::Jz => 1.0 + p.jz_scaled,
        Observable::Photons => p.photons_scaled,
    }
}

/// Least-squares slope of log(observable) against log|ratio − 1| over the
/// points with 0 < |ratio − 1| ≤ [`FIT_WINDOW`] on `side`.
pub fn fit_critical_exponent(scan: &[ScanPoint], observable: Observable, side: Side) -> Result<f64> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for p in scan {
        let eps = match side {
            Side::Above => p.ratio - 1.0,
            Side::Below => 1.0 - p.ratio,
        };
        if !(eps > 0.0 && eps <= FIT_WINDOW * (1.0 + 1e-12)) {
            continue;
        }
        let v = value(p, observable);
        if !(v > 0.0) {
            return Err(Error::Fit(format!("{observable:?} is {v:e} at ratio {}; log fit needs positive values", p.ratio)));
        }
        xs.push(eps.ln());
        ys.push(v.ln());
    }
    if xs.len() < MIN_FIT_POINTS {
        return Err(Error::Fit(format!(
            "{} points in the fit window, need at least {MIN_FIT_POINTS}",
            xs.len()
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("fit window has no spread in ratio".into()));
    }
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground_state::mean_field_scan;
    use crate::model::SystemParams;

    fn point(ratio: f64, jz: f64, jx: f64, ph: f64) -> ScanPoint {
        ScanPoint { ratio, jz_scaled: jz, jx_scaled: jx, photons_scaled: ph, ground_energy: 0.0, fock_cutoff: 0, degenerate: false }
    }

    #[test]
    fn exact_power_law() {
        let scan: Vec<_> = log_spaced_window(10, 1e-3, Side::Above)
            .into_iter()
            .map(|r| point(r, -1.0 + 3.0 * (r - 1.0).powf(1.7), 0.0, 0.0))
            .collect();
        assert!((fit_critical_exponent(&scan, Observable::Jz, Side::Above).unwrap() - 1.7).abs() < 1e-10);
    }

    #[test]
    fn errors() {
        let few: Vec<_> = log_spaced_window(5, 1e-3, Side::Above).into_iter().map(|r| point(r, -0.5, 0.1, 0.1)).collect();
        assert!(fit_critical_exponent(&few, Observable::Jz, Side::Above).is_err());
        let zero: Vec<_> = log_spaced_window(9, 1e-3, Side::Above).into_iter().map(|r| point(r, -1.0, 0.0, 0.0)).collect();
        assert!(fit_critical_exponent(&zero, Observable::Photons, Side::Above).is_err());
    }

    #[test]
    fn mean_field_exponents() {
        let params = SystemParams { delta_r: 30.0, omega_drive: 0.0, ..Default::default() };
        let scan = mean_field_scan(&log_spaced_window(12, 1e-3, Side::Above), 0.0, &params).unwrap();
        let gz = fit_critical_exponent(&scan, Observable::Jz, Side::Above).unwrap();
        let gx = fit_critical_exponent(&scan, Observable::Jx, Side::Above).unwrap();
        let ga = fit_critical_exponent(&scan, Observable::Photons, Side::Above).unwrap();
        assert!((gz - 1.0).abs() < 0.05, "{gz}");
        assert!((gx - 0.5).abs() < 0.05, "{gx}");
        assert!((ga - 1.0).abs() < 0.05, "{ga}");
    }
}
