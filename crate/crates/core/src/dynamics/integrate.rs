use super::lindblad::LindbladGenerator;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

/// Largest |tr ρ − 1| tolerated at a sample.
pub const TRACE_DRIFT_LIMIT: f64 = 1e-6;

/// Fixed-step RK4 for dρ/dt = L_{Δq(t)}(ρ). ρ is re-symmetrized after every
/// step; the trace is checked at every observation but never renormalized.
///
/// `observe(step, t, ρ)` runs at step 0, every `stride` steps and at the
/// final step. Times are `step·dt`.
pub fn evolve<D, O>(
    gen: &LindbladGenerator,
    rho0: &ComplexMatrix,
    dt: f64,
    steps: usize,
    stride: usize,
    delta_q: D,
    mut observe: O,
) -> Result<ComplexMatrix>
where
    D: Fn(f64) -> f64,
    O: FnMut(usize, f64, &ComplexMatrix) -> Result<()>,
{
    let n = gen.dim();
    if rho0.rows() != n || !rho0.is_square() {
        return Err(Error::DimensionMismatch(format!("initial state {}x{}, generator {n}", rho0.rows(), rho0.cols())));
    }
    if !(dt > 0.0 && dt.is_finite()) || stride == 0 {
        return Err(Error::InvalidParameter(format!("need dt > 0 and stride ≥ 1, got {dt} and {stride}")));
    }
    let mut rho = rho0.clone();
    rho.symmetrize();
    let len = n * n;
    let mut acc = vec![C64::default(); len];
    let mut stage = vec![C64::default(); len];
    let mut k = vec![C64::default(); len];
    let mut scratch = vec![C64::default(); len];

    let check = |step: usize, rho: &ComplexMatrix| -> Result<()> {
        let drift = rho.trace().re - 1.0;
        if !(drift.abs() <= TRACE_DRIFT_LIMIT) {
            return Err(Error::TraceDrift { drift, time_ns: step as f64 * dt, limit: TRACE_DRIFT_LIMIT });
        }
        Ok(())
    };
    check(0, &rho)?;
    observe(0, 0.0, &rho)?;

    for step in 0..steps {
        let t = step as f64 * dt;
        let (dq0, dq_half, dq1) = (delta_q(t), delta_q(t + 0.5 * dt), delta_q(t + dt));
        let r = rho.as_slice();
        acc.copy_from_slice(r);

        gen.apply(r, dq0, &mut k, &mut scratch);
        for i in 0..len {
            acc[i] += k[i] * (dt / 6.0);
            stage[i] = r[i] + k[i] * (0.5 * dt);
        }
        gen.apply(&stage, dq_half, &mut k, &mut scratch);
        for i in 0..len {
            acc[i] += k[i] * (dt / 3.0);
            stage[i] = r[i] + k[i] * (0.5 * dt);
        }
        gen.apply(&stage, dq_half, &mut k, &mut scratch);
        for i in 0..len {
            acc[i] += k[i] * (dt / 3.0);
            stage[i] = r[i] + k[i] * dt;
        }
        gen.apply(&stage, dq1, &mut k, &mut scratch);
        for i in 0..len {
            acc[i] += k[i] * (dt / 6.0);
        }
        rho.as_mut_slice().copy_from_slice(&acc);
        rho.symmetrize();

        let done = step + 1;
        if done % stride == 0 || done == steps {
            if !rho.is_finite() {
                return Err(Error::NoConvergence { routine: "RK4 (non-finite state; reduce dt)", iterations: done });
            }
            check(done, &rho)?;
            observe(done, done as f64 * dt, &rho)?;
        }
    }
    Ok(rho)
}
