//! The normalized E1 page, the differential d1, and the E2 page.
//!
//! `E1(p, k)` is the cokernel of the codegeneracy maps into
//! `H^{k(n−1)}(conf(p))`: classes with an isolated vertex are killed, so a
//! basis consists of classes whose diagrams touch every vertex. `d1` is the
//! alternating sum of the coface pullbacks. The interior cofaces identify
//! the consecutive vertices `i` and `i + 1`; the outer cofaces vanish on any
//! diagram touching the first (resp. last) vertex and delete that vertex
//! otherwise. On E1 representatives only the interior terms survive.
//!
//! Cells are indexed by `(p, k)`: `p` points, `k` chords, cohomological
//! degree `q = k(n−1)` and total degree `q − p`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::cohomology::CohomologySpace;
use crate::diagrams::{
    contraction_map, covers, insertion_map, relabel, LinearCombo, Monomial, Parity, Sign, SignedMonomial,
};
use crate::exactla::{kernel, quotient_basis, rref, SparseMatrix, SparseVec, Subspace};
use crate::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("n = {0} is outside the convergence range; Betti numbers need n >= 4")]
    Unsupported(u32),
    #[error("engine computes {engine} parity but n = {n} has {requested} parity")]
    ParityMismatch { engine: Parity, requested: Parity, n: u32 },
    #[error(transparent)]
    Grading(#[from] crate::cohomology::GradingMismatch),
}

/// Contraction of vertices `i` and `i + 1` (`1 <= i < p`); for `k = 0`
/// the result is the empty monomial on `p − 1` points.
fn contract(m: &Monomial, i: u32, parity: Parity) -> SignedMonomial {
    if m.degree() == 0 {
        return SignedMonomial::plus(Monomial::empty(m.points() - 1));
    }
    let p = m.points();
    relabel(m, &contraction_map(p, i), p - 1, parity).expect("contraction stays in range")
}

/// Full coface sum `Σ_{i=0}^{p} (−1)^i (d^i)^*` applied to a monomial on
/// `p >= 1` points, landing on `p − 1` points.
pub fn coface_sum<T: Scalar>(m: &Monomial, parity: Parity) -> LinearCombo<T> {
    let p = m.points();
    assert!(p >= 1, "no cofaces into zero points");
    let mut out = LinearCombo::zero(p - 1, m.degree());
    // outer cofaces pull back α_{*j} through a constant direction
    if !m.touches(1) {
        let term = if p >= 2 { contract(m, 1, parity) } else { SignedMonomial::plus(Monomial::empty(0)) };
        out.add_signed(term, T::one());
    }
    for i in 1..p {
        out.add_signed(contract(m, i, parity), Sign::alternating(i).to_scalar());
    }
    if !m.touches(p) {
        let term = if p >= 2 { contract(m, p - 1, parity) } else { SignedMonomial::plus(Monomial::empty(0)) };
        out.add_signed(term, Sign::alternating(p).to_scalar());
    }
    out
}

/// Images of the basis of `H(conf(p−1))` under every order-preserving
/// insertion of an isolated vertex, as monomials on `p` points.
pub fn degeneracy_generators<T: Scalar>(lower: &CohomologySpace<T>) -> Vec<Monomial> {
    let p = lower.points() + 1;
    let mut out = Vec::new();
    for skip in 1..=p {
        let map = insertion_map(p - 1, skip);
        for m in lower.basis_monomials() {
            match relabel(m, &map, p, lower.parity()).expect("insertion stays in range") {
                SignedMonomial::Term { sign: Sign::Plus, monomial } => out.push(monomial),
                other => unreachable!("order-preserving insertion produced {other}"),
            }
        }
    }
    out
}

/// A cell of the normalized E1 page.
#[derive(Debug, Clone)]
pub struct E1Cell<T> {
    points: u32,
    chords: usize,
    parity: Parity,
    ambient: Arc<CohomologySpace<T>>,
    // frame position -> ambient basis index; non-covering monomials first
    frame: Vec<usize>,
    frame_of: Vec<usize>,
    degeneracy: Subspace<T>,
    basis: Vec<usize>,
    basis_position: HashMap<usize, usize>,
}

impl<T: Scalar> E1Cell<T> {
    /// `lower` is the cohomology on `p − 1` points (ignored when `p = 0`).
    pub fn new(ambient: Arc<CohomologySpace<T>>, lower: Option<&CohomologySpace<T>>) -> Self {
        let (points, chords, parity) = (ambient.points(), ambient.chords(), ambient.parity());
        let mut frame: Vec<usize> = (0..ambient.dim()).collect();
        frame.sort_by_key(|&i| covers(ambient.basis_monomial(i)));
        let mut frame_of = vec![0; frame.len()];
        for (pos, &i) in frame.iter().enumerate() {
            frame_of[i] = pos;
        }

        let degeneracy = match lower {
            Some(lower) if points >= 1 => {
                assert_eq!(lower.points() + 1, points);
                let rows: Vec<SparseVec<T>> = degeneracy_generators(lower)
                    .iter()
                    .map(|m| {
                        let v = ambient.reduce_monomial(m).expect("same grading");
                        to_frame(&v, &frame_of)
                    })
                    .collect();
                rref(&SparseMatrix::from_sparse_rows(frame.len(), rows)).0
            }
            _ => Subspace::zero(frame.len()),
        };
        let free = quotient_basis(frame.len(), &degeneracy);
        let basis: Vec<usize> = free.iter().map(|&pos| frame[pos]).collect();
        let basis_position = free.iter().enumerate().map(|(i, &pos)| (pos, i)).collect();
        let cell = E1Cell { points, chords, parity, ambient, frame, frame_of, degeneracy, basis, basis_position };
        assert!(
            cell.points as usize <= 2 * cell.chords || cell.dim() == 0,
            "vanishing line violated at (p={}, k={})",
            cell.points,
            cell.chords
        );
        cell
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

    pub fn ambient(&self) -> &CohomologySpace<T> {
        &self.ambient
    }

    /// Image of the codegeneracies, in the ambient basis coordinates
    /// reordered so that non-covering basis monomials come first (see
    /// [`E1Cell::frame`]).
    pub fn degeneracy_subspace(&self) -> &Subspace<T> {
        &self.degeneracy
    }

    /// Ambient basis index at each coordinate of the degeneracy subspace.
    pub fn frame(&self) -> &[usize] {
        &self.frame
    }

    pub fn basis_monomial(&self, i: usize) -> &Monomial {
        self.ambient.basis_monomial(self.basis[i])
    }

    pub fn basis_monomials(&self) -> impl Iterator<Item = &Monomial> + '_ {
        self.basis.iter().map(|&i| self.ambient.basis_monomial(i))
    }

    /// E1 coordinates of a vector given in ambient basis coordinates.
    pub fn reduce_ambient(&self, v: &[(usize, T)]) -> SparseVec<T> {
        let residual = self.degeneracy.reduce(&to_frame(v, &self.frame_of));
        let mut out: SparseVec<T> = residual.into_iter().map(|(pos, x)| (self.basis_position[&pos], x)).collect();
        out.sort_by_key(|e| e.0);
        out
    }

    /// E1 coordinates of the class of a combination of monomials.
    pub fn reduce(&self, v: &LinearCombo<T>) -> Result<SparseVec<T>, SpectralError> {
        Ok(self.reduce_ambient(&self.ambient.reduce_sparse(v)?))
    }

    /// Expands E1 coordinates back into a combination of basis monomials.
    pub fn combo(&self, coords: &[(usize, T)]) -> LinearCombo<T> {
        let mut out = LinearCombo::zero(self.points, self.chords);
        for (i, x) in coords {
            out.add_term(self.basis_monomial(*i).clone(), x.clone());
        }
        out
    }
}

fn to_frame<T: Scalar>(v: &[(usize, T)], frame_of: &[usize]) -> SparseVec<T> {
    let mut out: SparseVec<T> = v.iter().map(|(i, x)| (frame_of[*i], x.clone())).collect();
    out.sort_by_key(|e| e.0);
    out
}

/// Matrix of `d1: E1(p, k) -> E1(p − 1, k)`; column `j` is the image of
/// the `j`-th source basis class.
#[derive(Debug, Clone)]
pub struct D1Matrix<T> {
    source: (u32, usize),
    target: (u32, usize),
    matrix: SparseMatrix<T>,
    rank: usize,
}

impl<T: Scalar> D1Matrix<T> {
    pub fn new(source: &E1Cell<T>, target: &E1Cell<T>) -> Self {
        assert_eq!(source.points, target.points + 1);
        assert_eq!(source.chords, target.chords);
        let mut entries = Vec::new();
        for (j, m) in source.basis_monomials().enumerate() {
            let image = coface_sum::<T>(m, source.parity);
            let coords = target.reduce(&image).expect("same grading");
            entries.extend(coords.into_iter().map(|(i, x)| (i, j, x)));
        }
        let matrix = SparseMatrix::from_triplets(target.dim(), source.dim(), entries);
        let rank = rref(&matrix.transpose()).1;
        D1Matrix { source: (source.points, source.chords), target: (target.points, target.chords), matrix, rank }
    }

    pub fn source(&self) -> (u32, usize) {
        self.source
    }

    pub fn target(&self) -> (u32, usize) {
        self.target
    }

    pub fn matrix(&self) -> &SparseMatrix<T> {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn kernel_dim(&self) -> usize {
        self.matrix.cols() - self.rank
    }
}

/// A cell of the E2 page.
#[derive(Debug, Clone, PartialEq)]
pub struct E2Cell<T> {
    pub points: u32,
    pub chords: usize,
    pub parity: Parity,
    pub dim: usize,
    pub kernel_dim: usize,
    pub incoming_rank: usize,
    /// Cycles spanning a complement of the boundaries, when requested.
    pub representatives: Option<Vec<LinearCombo<T>>>,
}

/// A Betti number of `K^n` with the cells that contribute to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiNumber {
    pub n: u32,
    pub degree: u32,
    pub dim: usize,
    /// `(p, k, dim)` for every nonzero contributing E2 cell.
    pub cells: Vec<(u32, usize, usize)>,
}

/// Largest chord count that can contribute to total degree `degree`.
pub fn max_chords_for_degree(n: u32, degree: u32) -> usize {
    assert!(n >= 4);
    (degree / (n - 3)) as usize
}

/// The cells `(p, k)` with `k >= 1` and `p <= 2k` in total degree `degree`
/// of the page for `K^n`, `n >= 4`.
pub fn betti_cells(n: u32, degree: u32) -> Vec<(u32, usize)> {
    (1..=max_chords_for_degree(n, degree))
        .filter_map(|k| {
            let p = (k as u32 * (n - 1)).checked_sub(degree)?;
            (p as usize <= 2 * k).then_some((p, k))
        })
        .collect()
}

type Memo<V> = Mutex<HashMap<(u32, usize), Arc<V>>>;

/// Memoizing engine for a fixed parity. Cells are computed on demand and
/// shared; the engine is `Sync` and may be used from several threads.
pub struct Engine<T> {
    parity: Parity,
    cohomology: Memo<CohomologySpace<T>>,
    e1: Memo<E1Cell<T>>,
    d1: Memo<D1Matrix<T>>,
}

impl<T: Scalar> Engine<T> {
    pub fn new(parity: Parity) -> Self {
        Engine { parity, cohomology: Mutex::default(), e1: Mutex::default(), d1: Mutex::default() }
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn cohomology(&self, points: u32, chords: usize) -> Arc<CohomologySpace<T>> {
        if let Some(h) = self.cohomology.lock().unwrap().get(&(points, chords)) {
            return h.clone();
        }
        let h = Arc::new(CohomologySpace::new(points, chords, self.parity));
        self.cohomology.lock().unwrap().entry((points, chords)).or_insert(h).clone()
    }

    pub fn e1(&self, points: u32, chords: usize) -> Arc<E1Cell<T>> {
        if let Some(c) = self.e1.lock().unwrap().get(&(points, chords)) {
            return c.clone();
        }
        let ambient = self.cohomology(points, chords);
        let lower = (points >= 1).then(|| self.cohomology(points - 1, chords));
        let cell = Arc::new(E1Cell::new(ambient, lower.as_deref()));
        self.e1.lock().unwrap().entry((points, chords)).or_insert(cell).clone()
    }

    /// `d1` out of `E1(p, k)`; requires `p >= 1`.
    pub fn d1(&self, points: u32, chords: usize) -> Arc<D1Matrix<T>> {
        assert!(points >= 1, "d1 needs a source with at least one point");
        if let Some(d) = self.d1.lock().unwrap().get(&(points, chords)) {
            return d.clone();
        }
        let d = Arc::new(D1Matrix::new(&self.e1(points, chords), &self.e1(points - 1, chords)));
        self.d1.lock().unwrap().entry((points, chords)).or_insert(d).clone()
    }

    pub fn e2(&self, points: u32, chords: usize) -> E2Cell<T> {
        let kernel_dim = if points == 0 { self.e1(0, chords).dim() } else { self.d1(points, chords).kernel_dim() };
        // E1(p + 1, k) = 0 past the vanishing line
        let incoming_rank = if (points + 1) as usize > 2 * chords { 0 } else { self.d1(points + 1, chords).rank() };
        E2Cell {
            points,
            chords,
            parity: self.parity,
            dim: kernel_dim - incoming_rank,
            kernel_dim,
            incoming_rank,
            representatives: None,
        }
    }

    /// Like [`Engine::e2`], with cycle representatives not in the image.
    pub fn e2_with_representatives(&self, points: u32, chords: usize) -> E2Cell<T> {
        let mut cell = self.e2(points, chords);
        let e1 = self.e1(points, chords);
        let cycles = if points == 0 {
            SparseMatrix::<T>::identity(e1.dim()).row_vecs().to_vec()
        } else {
            kernel(self.d1(points, chords).matrix()).basis_rows().to_vec()
        };
        let mut span = if (points + 1) as usize > 2 * chords {
            Subspace::zero(e1.dim())
        } else {
            rref(&self.d1(points + 1, chords).matrix().transpose()).0
        };
        let mut reps = Vec::new();
        for z in cycles {
            if !span.contains(&z) {
                span = span.extend([z.clone()]);
                reps.push(e1.combo(&z));
            }
        }
        assert_eq!(reps.len(), cell.dim);
        cell.representatives = Some(reps);
        cell
    }

    /// True iff `d1` sends every codegeneracy image in `H(conf(p))` into
    /// the codegeneracy image in `H(conf(p−1))`, i.e. descends to E1.
    pub fn d1_descends(&self, points: u32, chords: usize) -> bool {
        if points < 2 {
            return true;
        }
        let lower = self.cohomology(points - 1, chords);
        let target = self.e1(points - 1, chords);
        degeneracy_generators(&lower).iter().all(|g| {
            let image = coface_sum::<T>(g, self.parity);
            target.reduce(&image).expect("same grading").is_empty()
        })
    }

    fn check_n(&self, n: u32) -> Result<(), SpectralError> {
        if n <= 3 {
            return Err(SpectralError::Unsupported(n));
        }
        let requested = Parity::of(n).expect("n >= 4");
        if requested != self.parity {
            return Err(SpectralError::ParityMismatch { engine: self.parity, requested, n });
        }
        Ok(())
    }

    /// Rational Betti number of `K^n` in degree `degree`, read off the
    /// E2 page. The sum is finite: a cell `(p, k)` with `p <= 2k` has total
    /// degree at least `k(n−3)`.
    pub fn betti(&self, n: u32, degree: u32) -> Result<BettiNumber, SpectralError> {
        self.check_n(n)?;
        if degree == 0 {
            return Ok(BettiNumber { n, degree, dim: 1, cells: Vec::new() });
        }
        let cells: Vec<(u32, usize, usize)> =
            betti_cells(n, degree).into_iter().map(|(p, k)| (p, k, self.e2(p, k).dim)).filter(|c| c.2 > 0).collect();
        let dim = cells.iter().map(|c| c.2).sum();
        Ok(BettiNumber { n, degree, dim, cells })
    }
}

/// One-shot helpers that build a throwaway engine.
pub fn e1_cell<T: Scalar>(points: u32, chords: usize, parity: Parity) -> Arc<E1Cell<T>> {
    Engine::new(parity).e1(points, chords)
}

pub fn d1_matrix<T: Scalar>(points: u32, chords: usize, parity: Parity) -> Arc<D1Matrix<T>> {
    Engine::new(parity).d1(points, chords)
}

pub fn e2_cell<T: Scalar>(points: u32, chords: usize, parity: Parity) -> E2Cell<T> {
    Engine::new(parity).e2(points, chords)
}

pub fn betti<T: Scalar>(n: u32, degree: u32) -> Result<BettiNumber, SpectralError> {
    if n <= 3 {
        return Err(SpectralError::Unsupported(n));
    }
    Engine::<T>::new(Parity::of(n).expect("n >= 4")).betti(n, degree)
}
