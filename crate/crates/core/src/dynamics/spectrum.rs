use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, ComplexMatrix, C64};

/// Overlaps closer than this make a level assignment ambiguous.
pub const MATCH_AMBIGUITY: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct Spectrum {
    /// Eigenvalues of H (rad/ns), ordered from the bottom of `orientation·H`.
    pub energies: Vec<f64>,
    /// ⟨ψn|ρ|ψn⟩.
    pub populations: Vec<f64>,
    pub vectors: Vec<Vec<C64>>,
}

/// Lowest `k` eigenpairs of `orientation·H` and their populations in ρ.
pub fn instantaneous_spectrum(rho: &ComplexMatrix, h: &ComplexMatrix, k: usize, orientation: f64) -> Result<Spectrum> {
    let dim = h.rows();
    if k == 0 || k > dim {
        return Err(Error::InvalidParameter(format!("k = {k} must lie in 1..={dim}")));
    }
    if rho.rows() != dim || !rho.is_square() {
        return Err(Error::DimensionMismatch(format!("ρ {}x{} vs H {dim}", rho.rows(), rho.cols())));
    }
    let eig = hermitian_eig(&h.scaled_real(orientation))?;
    let mut spec = Spectrum { energies: Vec::with_capacity(k), populations: Vec::with_capacity(k), vectors: Vec::with_capacity(k) };
    for n in 0..k {
        let v = eig.vector(n);
        spec.populations.push(rho.expectation(&v)?);
        spec.energies.push(orientation * eig.eigenvalues[n]);
        spec.vectors.push(v);
    }
    Ok(spec)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrackedLevels {
    pub energies: Vec<f64>,
    pub populations: Vec<f64>,
    /// Some assignment fell back to index order.
    pub ambiguous: bool,
}

/// Follows the lowest `k` levels through a sequence of Hamiltonians by
/// maximal overlap with the previous eigenvectors, so levels keep their
/// identity through avoided crossings.
#[derive(Clone, Debug)]
pub struct SpectrumTracker {
    k: usize,
    previous: Option<Vec<Vec<C64>>>,
}

fn overlap(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<C64>().norm_sqr()
}

impl SpectrumTracker {
    pub fn new(k: usize) -> Self {
        Self { k, previous: None }
    }

    pub fn update(&mut self, rho: &ComplexMatrix, h: &ComplexMatrix, orientation: f64) -> Result<TrackedLevels> {
        let window = (self.k + 2).min(h.rows());
        let spec = instantaneous_spectrum(rho, h, window.max(self.k), orientation)?;
        let mut ambiguous = false;
        let chosen: Vec<usize> = match &self.previous {
            None => (0..self.k).collect(),
            Some(prev) => {
                let mut used = vec![false; window];
                let mut chosen = Vec::with_capacity(self.k);
                for p in prev {
                    let mut scores: Vec<(usize, f64)> =
                        (0..window).filter(|&c| !used[c]).map(|c| (c, overlap(p, &spec.vectors[c]))).collect();
                    // Highest overlap first, lower index on ties.
                    scores.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
                    let mut pick = scores[0].0;
                    if scores.len() > 1 && scores[0].1 - scores[1].1 < MATCH_AMBIGUITY {
                        ambiguous = true;
                        pick = scores[0].0.min(scores[1].0);
                    }
                    used[pick] = true;
                    chosen.push(pick);
                }
                chosen
            }
        };
        self.previous = Some(chosen.iter().map(|&c| spec.vectors[c].clone()).collect());
        Ok(TrackedLevels {
            energies: chosen.iter().map(|&c| spec.energies[c]).collect(),
            populations: chosen.iter().map(|&c| spec.populations[c]).collect(),
            ambiguous,
        })
    }
}
