//! Diagonal cells `(p, k) = (2m, m)`: the honest chord diagrams with `m`
//! chords, one per pair of vertices. At `n = 3` these are the diagrams
//! behind finite-type invariants of order `m`, and `d1` on them encodes the
//! four-term relation.
//!
//! Nothing flows into a diagonal cell (`m` chords cannot cover `2m + 1`
//! vertices), so its E2 dimension is the kernel dimension of `d1`. The
//! dimensions reported here are raw kernel dimensions; no framing (one-term)
//! relation is imposed.

use std::sync::Arc;

use crate::diagrams::{Monomial, Parity};
use crate::exactla::{kernel, Subspace};
use crate::spectral::{E1Cell, Engine};
use crate::Scalar;

#[derive(Debug, Clone)]
pub struct DiagonalCell<T> {
    pub order: usize,
    pub parity: Parity,
    pub dim: usize,
    /// E1 basis of the `(2m, m)` cell: perfect matchings.
    pub diagrams: Vec<Monomial>,
    /// `ker d1` in E1 coordinates.
    pub kernel: Subspace<T>,
    e1: Arc<E1Cell<T>>,
}

impl<T: Scalar> DiagonalCell<T> {
    pub fn e1(&self) -> &E1Cell<T> {
        &self.e1
    }
}

/// True iff every vertex is an endpoint of exactly one chord.
pub fn is_perfect_matching(m: &Monomial) -> bool {
    let mut hits = vec![0u8; m.points() as usize];
    for c in m.chords() {
        hits[c.a() as usize - 1] += 1;
        hits[c.b() as usize - 1] += 1;
    }
    hits.into_iter().all(|h| h == 1)
}

pub fn diagonal_cell_with<T: Scalar>(engine: &Engine<T>, order: usize) -> DiagonalCell<T> {
    assert!(order >= 1, "diagonal cells start at order 1");
    let p = 2 * order as u32;
    let e1 = engine.e1(p, order);
    let kernel = kernel(engine.d1(p, order).matrix());
    let diagrams: Vec<Monomial> = e1.basis_monomials().cloned().collect();
    debug_assert!(diagrams.iter().all(is_perfect_matching));
    DiagonalCell { order, parity: engine.parity(), dim: kernel.dim(), diagrams, kernel, e1 }
}

pub fn diagonal_cell<T: Scalar>(order: usize, parity: Parity) -> DiagonalCell<T> {
    diagonal_cell_with(&Engine::new(parity), order)
}

/// `(m, dim)` for `m = 1..=max_order`.
pub fn diagonal_table<T: Scalar>(max_order: usize, parity: Parity) -> Vec<(usize, usize)> {
    let engine = Engine::<T>::new(parity);
    (1..=max_order).map(|m| (m, diagonal_cell_with(&engine, m).dim)).collect()
}
