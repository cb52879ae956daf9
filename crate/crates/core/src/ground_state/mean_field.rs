//! Thermodynamic limit by minimizing ⟨H⟩/N over product states: a spin
//! coherent state at polar angle θ (θ = 0 all down) and azimuth φ, times a
//! field coherent state whose amplitude is eliminated analytically.

use std::f64::consts::PI;

use super::scan::ScanPoint;
use crate::dynamics::ratio_to_detuning;
use crate::error::{Error, Result};
use crate::model::{angular, SystemParams};

/// Per-qubit variational energy (MHz) in the orientation of
/// [`SystemParams::orientation`].
#[derive(Clone, Copy, Debug)]
struct Energy {
    delta_q: f64,
    delta_r: f64,
    lambda: f64,
    field_drive: f64,
    qubit_drive: f64,
}

impl Energy {
    fn field(&self, theta: f64, phi: f64) -> (f64, f64) {
        let s = theta.sin();
        (self.lambda * s * phi.cos() + 2.0 * self.field_drive, -self.lambda * s * phi.sin())
    }

    fn eval(&self, theta: f64, phi: f64) -> f64 {
        let (zr, zi) = self.field(theta, phi);
        -0.5 * self.delta_q * theta.cos() + self.qubit_drive * theta.sin() * phi.cos()
            - (zr * zr + zi * zi) / (4.0 * self.delta_r)
    }

    /// (∂E/∂θ, ∂E/∂φ).
    fn gradient(&self, theta: f64, phi: f64) -> (f64, f64) {
        let (s, c) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        let (l, f) = (self.lambda, self.field_drive);
        let d_theta = 0.5 * self.delta_q * s + self.qubit_drive * c * cp
            - (2.0 * l * l * s * c + 4.0 * l * c * f * cp) / (4.0 * self.delta_r);
        let d_phi = -self.qubit_drive * s * sp + l * s * f * sp / self.delta_r;
        (d_theta, d_phi)
    }
}

/// Root of an increasing `g` in [a, b] by bisection, if `g` changes sign.
fn bisect_increasing<G: Fn(f64) -> f64>(g: G, mut a: f64, mut b: f64) -> Option<f64> {
    if !(g(a) < 0.0 && g(b) > 0.0) {
        return None;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if g(m) < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

/// Golden-section minimum of `f` on [a, b].
fn golden<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Nelder-Mead on two variables. Returns the best vertex and whether the
/// simplex collapsed below `tol` within `max_iter` iterations.
fn nelder_mead<F: Fn([f64; 2]) -> f64>(f: F, start: [f64; 2], step: f64, tol: f64, max_iter: usize) -> ([f64; 2], bool) {
    let mut pts = [start, [start[0] + step, start[1]], [start[0], start[1] + step]];
    let mut vals = pts.map(&f);
    for _ in 0..max_iter {
        let mut order = [0, 1, 2];
        order.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
        pts = order.map(|i| pts[i]);
        vals = order.map(|i| vals[i]);
        let size = (1..3)
            .map(|k| (pts[k][0] - pts[0][0]).abs().max((pts[k][1] - pts[0][1]).abs()))
            .fold(0.0, f64::max);
        if size < tol {
            return (pts[0], true);
        }
        let centroid = [(pts[0][0] + pts[1][0]) / 2.0, (pts[0][1] + pts[1][1]) / 2.0];
        let along = |t: f64| [centroid[0] + t * (pts[2][0] - centroid[0]), centroid[1] + t * (pts[2][1] - centroid[1])];
        let refl = along(-1.0);
        let fr = f(refl);
        if fr < vals[0] {
            let exp = along(-2.0);
            let fe = f(exp);
            (pts[2], vals[2]) = if fe < fr { (exp, fe) } else { (refl, fr) };
        } else if fr < vals[1] {
            (pts[2], vals[2]) = (refl, fr);
        } else {
            let con = if fr < vals[2] { along(-0.5) } else { along(0.5) };
            let fcon = f(con);
            if fcon < vals[2].min(fr) {
                (pts[2], vals[2]) = (con, fcon);
            } else {
                for k in 1..3 {
                    pts[k] = [(pts[k][0] + pts[0][0]) / 2.0, (pts[k][1] + pts[0][1]) / 2.0];
                    vals[k] = f(pts[k]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&i, &j| vals[i].total_cmp(&vals[j])).unwrap();
    (pts[best], false)
}

/// Minimizing angles (θ, φ). With no drives the energy is independent of φ
/// and the minimum is taken at φ = 0.
fn minimize(e: &Energy) -> Result<(f64, f64, bool)> {
    const GRID: usize = 120;
    let symmetric = e.field_drive == 0.0 && e.qubit_drive == 0.0;
    if symmetric {
        let (mut best, mut best_val) = (0.0, e.eval(0.0, 0.0));
        for i in 1..=GRID {
            let th = PI * i as f64 / GRID as f64;
            let v = e.eval(th, 0.0);
            if v < best_val {
                (best, best_val) = (th, v);
            }
        }
        let h = PI / GRID as f64;
        let (lo, hi) = ((best - h).max(1e-12), (best + h).min(PI));
        // Stationary point of the smooth energy, else the bracketed minimum.
        let mut theta = bisect_increasing(|t| e.gradient(t, 0.0).0, lo, hi)
            .unwrap_or_else(|| golden(|t| e.eval(t, 0.0), lo, hi, 1e-13));
        if e.eval(0.0, 0.0) <= e.eval(theta, 0.0) {
            theta = 0.0;
        }
        return Ok((theta, 0.0, theta > 0.0));
    }

    let mut best = ([0.0, 0.0], f64::INFINITY);
    for i in 0..=GRID {
        for j in 0..GRID {
            let x = [PI * i as f64 / GRID as f64, -PI + 2.0 * PI * j as f64 / GRID as f64];
            let v = e.eval(x[0], x[1]);
            if v < best.1 {
                best = (x, v);
            }
        }
    }
    // Unconstrained parametrization: θ outside [0, π] maps back by symmetry.
    let (mut x, converged) = nelder_mead(|x| e.eval(x[0], x[1]), best.0, PI / GRID as f64, 1e-11, 5000);
    if !converged {
        return Err(Error::Minimizer(format!(
            "Nelder-Mead did not converge from grid point θ={:.4}, φ={:.4} (energy {:.6e} MHz)",
            best.0[0], best.0[1], best.1
        )));
    }
    let h = 1e-3;
    for _ in 0..4 {
        let phi = x[1];
        if let Some(t) = bisect_increasing(|t| e.gradient(t, phi).0, x[0] - h, x[0] + h) {
            x[0] = t;
        }
        let theta = x[0];
        if let Some(p) = bisect_increasing(|p| e.gradient(theta, p).1, x[1] - h, x[1] + h) {
            x[1] = p;
        }
    }
    if x[0] < 0.0 {
        x = [-x[0], x[1] + PI];
    }
    let phi = (x[1] + PI).rem_euclid(2.0 * PI) - PI;
    Ok((x[0], phi, false))
}

/// Mean-field ground state at `ratio`, with resonator drive `omega_drive`
/// (MHz) overriding `params.omega_drive`. The drive enters per qubit as
/// Ω/√N with N = `params.n_qubits`. `ground_energy` is per qubit (rad/ns),
/// `fock_cutoff` is 0 and `degenerate` marks a free azimuth.
pub fn mean_field_ground_state(ratio: f64, omega_drive: f64, params: &SystemParams) -> Result<ScanPoint> {
    params.validate()?;
    if !omega_drive.is_finite() {
        return Err(Error::InvalidParameter("omega_drive must be finite".into()));
    }
    let first = params.qubit_drive(0);
    if (0..params.n_qubits).any(|k| params.qubit_drive(k) != first) {
        return Err(Error::InvalidParameter("mean field needs identical qubit drives".into()));
    }
    let s = params.orientation();
    let delta_r = params.effective_delta_r();
    let delta_q = ratio_to_detuning(ratio, params.lambda, delta_r)?;
    let sqrt_n = (params.n_qubits as f64).sqrt();
    // Mirror H → −UHU† with U = (−1)^{a†a} for negative detuning: the field
    // drive and coupling keep their sign, the qubit drive flips.
    let e = Energy {
        delta_q: delta_q.abs(),
        delta_r: delta_r.abs(),
        lambda: params.lambda,
        field_drive: omega_drive / sqrt_n,
        qubit_drive: s * first / sqrt_n,
    };
    let (theta, phi, degenerate) = minimize(&e)?;
    let (zr, zi) = e.field(theta, phi);
    Ok(ScanPoint {
        ratio,
        jz_scaled: -theta.cos(),
        jx_scaled: theta.sin() * phi.cos(),
        photons_scaled: (zr * zr + zi * zi) / (4.0 * e.delta_r * e.delta_r),
        ground_energy: s * angular(e.eval(theta, phi)),
        fock_cutoff: 0,
        degenerate,
    })
}

/// Mean-field points for each ratio, in order.
pub fn mean_field_scan(ratios: &[f64], omega_drive: f64, params: &SystemParams) -> Result<Vec<ScanPoint>> {
    ratios.iter().map(|&r| mean_field_ground_state(r, omega_drive, params)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> SystemParams {
        SystemParams { delta_r: 30.0, omega_drive: 0.0, ..Default::default() }
    }

    #[test]
    fn undriven_normal_phase() {
        for r in [0.5, 0.9, 1.0] {
            let pt = mean_field_ground_state(r, 0.0, &p()).unwrap();
            assert!((pt.jz_scaled + 1.0).abs() < 1e-9, "r={r}: {}", pt.jz_scaled);
            assert!(pt.jx_scaled.abs() < 1e-4);
            assert!(pt.photons_scaled < 1e-8);
        }
    }

    #[test]
    fn undriven_superradiant_branch() {
        let pt = mean_field_ground_state(2.0, 0.0, &p()).unwrap();
        assert!((pt.jz_scaled + 0.25).abs() < 1e-9);
        assert!((pt.jx_scaled - (1.0f64 - 0.0625).sqrt()).abs() < 1e-9);
        // Cross-check by a dense grid.
        let e = Energy { delta_q: 30.0 * 30.0 / (4.0 * 30.0), delta_r: 30.0, lambda: 30.0, field_drive: 0.0, qubit_drive: 0.0 };
        let grid_min = (0..=20000).map(|i| e.eval(PI * i as f64 / 20000.0, 0.0)).fold(f64::INFINITY, f64::min);
        assert!(angular(grid_min) >= pt.ground_energy - 1e-12);
    }

    #[test]
    fn drive_selects_positive_jx_and_matches_quantum_sign() {
        let params = SystemParams { n_qubits: 8, delta_r: 30.0, omega_drive: 4.0, ..Default::default() };
        let mf = mean_field_ground_state(2.0, 4.0, &params).unwrap();
        let q = super::super::converged_ground_state(&params, 2.0).unwrap();
        assert!(mf.jx_scaled > 0.0);
        assert_eq!(mf.jx_scaled.signum(), q.jx_scaled.signum());
        let neg = mean_field_ground_state(2.0, 4.0, &SystemParams { delta_r: -30.0, ..params }).unwrap();
        assert!((neg.jz_scaled - mf.jz_scaled).abs() < 1e-9);
        assert!((neg.ground_energy + mf.ground_energy).abs() < 1e-9);
    }

    #[test]
    fn driven_normal_phase_is_lifted() {
        let params = SystemParams { n_qubits: 4, delta_r: 30.0, ..Default::default() };
        let pt = mean_field_ground_state(0.8, 4.0, &params).unwrap();
        assert!(pt.jz_scaled > -1.0 && pt.jz_scaled < -0.95);
        assert!(!pt.degenerate);
    }

    #[test]
    fn continuous_at_critical_point() {
        let below = mean_field_ground_state(1.0 - 1e-6, 0.0, &p()).unwrap();
        let above = mean_field_ground_state(1.0 + 1e-6, 0.0, &p()).unwrap();
        assert!((above.jz_scaled - below.jz_scaled).abs() < 1e-5);
        // Right derivative of jz is 2, left derivative 0.
        let h = 1e-4;
        let r = mean_field_ground_state(1.0 + h, 0.0, &p()).unwrap().jz_scaled;
        let l = mean_field_ground_state(1.0 - h, 0.0, &p()).unwrap().jz_scaled;
        assert!(((r + 1.0) / h - 2.0).abs() < 1e-3);
        assert!(((l + 1.0) / h).abs() < 1e-6);
    }

    #[test]
    fn gradient_matches_finite_difference() {
        let e = Energy { delta_q: 7.0, delta_r: 25.0, lambda: 30.0, field_drive: 2.0, qubit_drive: 0.3 };
        let (t, p, h) = (0.7, -0.4, 1e-6);
        let (gt, gp) = e.gradient(t, p);
        assert!((gt - (e.eval(t + h, p) - e.eval(t - h, p)) / (2.0 * h)).abs() < 1e-7);
        assert!((gp - (e.eval(t, p + h) - e.eval(t, p - h)) / (2.0 * h)).abs() < 1e-7);
    }

    #[test]
    fn nelder_mead_finds_quadratic_minimum() {
        let (x, ok) = nelder_mead(|x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 0.5).powi(2), [0.0, 0.0], 0.1, 1e-10, 2000);
        assert!(ok);
        assert!((x[0] - 1.0).abs() < 1e-8 && (x[1] + 0.5).abs() < 1e-8);
    }
}
