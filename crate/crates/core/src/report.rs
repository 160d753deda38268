//! Serializable summary of an E2 page.

use serde::{Deserialize, Serialize};

use crate::diagrams::Parity;
use crate::spectral::{Engine, SpectralError};
use crate::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellEntry {
    pub p: u32,
    pub k: u32,
    pub q: u32,
    pub total_degree: i64,
    pub dim: usize,
    /// Whether the Betti number in this total degree is fully determined
    /// by the cells in the report.
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiEntry {
    pub degree: i64,
    pub dim: usize,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageReport {
    pub engine_version: String,
    pub n: u32,
    pub parity: Parity,
    pub cells: Vec<CellEntry>,
    pub betti: Vec<BettiEntry>,
}

/// A total degree is exact for a page truncated at `k_max` chords when no
/// cell with more chords can reach it.
pub fn degree_is_exact(n: u32, k_max: u32, degree: i64) -> bool {
    degree >= 0 && degree <= i64::from(k_max) * i64::from(n - 3)
}

/// Lists the cells `(p, k)` with `1 <= k <= k_max`, `1 <= p <= 2k`, in
/// order of increasing `k` then `p`.
pub fn page_cells(k_max: u32) -> Vec<(u32, u32)> {
    (1..=k_max).flat_map(|k| (1..=2 * k).map(move |p| (p, k))).collect()
}

impl PageReport {
    /// Assembles a report from cell dimensions `(p, k, dim)`.
    ///
    /// The Betti table covers every degree up to the exact range and every
    /// degree beyond it that has a nonzero partial sum.
    pub fn from_cells(n: u32, k_max: u32, dims: &[(u32, u32, usize)]) -> PageReport {
        assert!(n >= 4, "pages are reported for n >= 4");
        let cells: Vec<CellEntry> = dims
            .iter()
            .map(|&(p, k, dim)| {
                let q = k * (n - 1);
                let total_degree = i64::from(q) - i64::from(p);
                CellEntry { p, k, q, total_degree, dim, exact: degree_is_exact(n, k_max, total_degree) }
            })
            .collect();

        let exact_top = i64::from(k_max) * i64::from(n - 3);
        let top = cells.iter().filter(|c| c.dim > 0).map(|c| c.total_degree).max().unwrap_or(0).max(exact_top);
        let mut betti = Vec::new();
        for degree in 0..=top {
            let mut dim: usize = cells.iter().filter(|c| c.total_degree == degree).map(|c| c.dim).sum();
            if degree == 0 {
                dim += 1;
            }
            let exact = degree_is_exact(n, k_max, degree);
            if exact || dim > 0 {
                betti.push(BettiEntry { degree, dim, exact });
            }
        }
        PageReport {
            engine_version: crate::ENGINE_VERSION.to_string(),
            n,
            parity: Parity::of(n).expect("n >= 4"),
            cells,
            betti,
        }
    }
}

/// Computes the page for `K^n` up to `k_max` chords.
pub fn e2_page<T: Scalar>(engine: &Engine<T>, n: u32, k_max: u32) -> Result<PageReport, SpectralError> {
    if n <= 3 {
        return Err(SpectralError::Unsupported(n));
    }
    let parity = Parity::of(n).expect("n >= 4");
    if parity != engine.parity() {
        return Err(SpectralError::ParityMismatch { engine: engine.parity(), requested: parity, n });
    }
    let dims: Vec<(u32, u32, usize)> =
        page_cells(k_max).into_iter().map(|(p, k)| (p, k, engine.e2(p, k as usize).dim)).collect();
    Ok(PageReport::from_cells(n, k_max, &dims))
}
