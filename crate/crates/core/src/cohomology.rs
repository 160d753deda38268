//! Cohomology of the configuration space on `p` points in degree `k(n−1)`,
//! presented as square-free chord monomials modulo the three-term relation
//!
//! ```text
//! α_ab α_bc + α_bc α_ca + α_ca α_ab = 0
//! ```
//!
//! multiplied by every `(k−2)`-chord cofactor. The quotient is computed by
//! plain linear algebra over the full monomial span; the basis is the set
//! of non-pivot monomials of the relation matrix in lex order.

use std::collections::HashMap;

use thiserror::Error;

use crate::diagrams::{normalize, Chord, LinearCombo, Monomial, Parity};
use crate::exactla::{quotient_basis, rref, sparse_from_entries, SparseMatrix, SparseVec, Subspace};
use crate::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("class lives in (p={got_points}, k={got_chords}), space is (p={points}, k={chords})")]
pub struct GradingMismatch {
    pub points: u32,
    pub chords: usize,
    pub got_points: u32,
    pub got_chords: usize,
}

/// All `C(p, 2)` chords in lex order.
pub fn all_chords(points: u32) -> Vec<Chord> {
    (1..=points).flat_map(|a| (a + 1..=points).map(move |b| Chord::new(a, b))).collect()
}

/// Every canonical monomial with exactly `chords` distinct chords on
/// `points` points, in lex order. There are `C(C(p,2), k)` of them.
pub fn enumerate_monomials(points: u32, chords: usize) -> Vec<Monomial> {
    let pool = all_chords(points);
    let mut out = Vec::new();
    if chords > pool.len() {
        return out;
    }
    let n = pool.len();
    let mut idx: Vec<usize> = (0..chords).collect();
    loop {
        out.push(Monomial::from_canonical(points, idx.iter().map(|&i| pool[i])).expect("lex combination"));
        let Some(i) = (0..chords).rev().find(|&i| idx[i] < n - chords + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..chords {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Three-term relations in degree `k`, one per triple `a < b < c` and
/// `(k−2)`-chord cofactor, in that nesting order. Combos that normalize to
/// zero are dropped.
pub fn three_term_relations<T: Scalar>(points: u32, chords: usize, parity: Parity) -> Vec<LinearCombo<T>> {
    let mut out = Vec::new();
    if chords < 2 {
        return out;
    }
    let cofactors = enumerate_monomials(points, chords - 2);
    for a in 1..=points {
        for b in a + 1..=points {
            for c in b + 1..=points {
                let heads = [[(a, b), (b, c)], [(b, c), (c, a)], [(c, a), (a, b)]];
                for cofactor in &cofactors {
                    let mut combo = LinearCombo::zero(points, chords);
                    for head in &heads {
                        let raw: Vec<(u32, u32)> = head.iter().copied().chain(cofactor.pairs()).collect();
                        let term = normalize(points, &raw, parity).expect("indices in range");
                        combo.add_signed(term, T::one());
                    }
                    if !combo.is_zero() {
                        out.push(combo);
                    }
                }
            }
        }
    }
    out
}

/// `H^{k(n−1)}` of the configuration space of `p` points.
#[derive(Debug, Clone)]
pub struct CohomologySpace<T> {
    points: u32,
    chords: usize,
    parity: Parity,
    monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    relations: Subspace<T>,
    basis: Vec<usize>,
    basis_position: HashMap<usize, usize>,
}

impl<T: Scalar> CohomologySpace<T> {
    pub fn new(points: u32, chords: usize, parity: Parity) -> Self {
        let monomials = enumerate_monomials(points, chords);
        let index: HashMap<Monomial, usize> = monomials.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let rows: Vec<SparseVec<T>> = three_term_relations::<T>(points, chords, parity)
            .into_iter()
            .map(|combo| sparse_from_entries(combo.terms().map(|(m, c)| (index[m], c.clone()))))
            .collect();
        let (relations, _) = rref(&SparseMatrix::from_sparse_rows(monomials.len(), rows));
        let basis = quotient_basis(monomials.len(), &relations);
        let basis_position = basis.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        CohomologySpace { points, chords, parity, monomials, index, relations, basis, basis_position }
    }

    pub fn points(&self) -> u32 {
        self.points
    }

    pub fn chords(&self) -> usize {
        self.chords
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Every square-free monomial in lex order (the coordinate system).
    pub fn all_monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn relation_subspace(&self) -> &Subspace<T> {
        &self.relations
    }

    pub fn basis_monomials(&self) -> impl ExactSizeIterator<Item = &Monomial> + '_ {
        self.basis.iter().map(|&i| &self.monomials[i])
    }

    pub fn basis_monomial(&self, i: usize) -> &Monomial {
        &self.monomials[self.basis[i]]
    }

    /// Position of `m` in the basis, if it is a basis monomial.
    pub fn basis_index(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).and_then(|c| self.basis_position.get(c).copied())
    }

    fn check_grading(&self, points: u32, chords: usize) -> Result<(), GradingMismatch> {
        if points != self.points || chords != self.chords {
            return Err(GradingMismatch {
                points: self.points,
                chords: self.chords,
                got_points: points,
                got_chords: chords,
            });
        }
        Ok(())
    }

    /// Sparse basis coordinates of a single monomial.
    pub fn reduce_monomial(&self, m: &Monomial) -> Result<SparseVec<T>, GradingMismatch> {
        self.check_grading(m.points(), m.degree())?;
        let col = self.index[m];
        if let Some(&i) = self.basis_position.get(&col) {
            return Ok(vec![(i, T::one())]);
        }
        let row = self.relations.pivot_vector(col).expect("non-basis monomials are pivots");
        Ok(row[1..].iter().map(|(c, x)| (self.basis_position[c], -x.clone())).collect())
    }

    /// Sparse basis coordinates of a combination modulo the relations.
    pub fn reduce_sparse(&self, v: &LinearCombo<T>) -> Result<SparseVec<T>, GradingMismatch> {
        self.check_grading(v.points(), v.chords())?;
        let raw = sparse_from_entries(v.terms().map(|(m, c)| (self.index[m], c.clone())));
        let residual = self.relations.reduce(&raw);
        Ok(residual.into_iter().map(|(c, x)| (self.basis_position[&c], x)).collect())
    }

    /// Dense coordinate vector over the basis.
    pub fn reduce_class(&self, v: &LinearCombo<T>) -> Result<Vec<T>, GradingMismatch> {
        let sparse = self.reduce_sparse(v)?;
        let mut dense = vec![T::zero(); self.dim()];
        for (i, x) in sparse {
            dense[i] = x;
        }
        Ok(dense)
    }
}
