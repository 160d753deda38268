use knotcalc_core::cohomology::enumerate_monomials;
use knotcalc_core::diagrams::{covers, normalize, product, relabel, Monomial, Parity, Sign, SignedMonomial};
use knotcalc_core::exactla::{kernel, rank, rref, SparseMatrix};
use knotcalc_core::Rational;
use num_rational::Ratio;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn parity() -> impl Strategy<Value = Parity> {
    prop_oneof![Just(Parity::Even), Just(Parity::Odd)]
}

/// A canonical monomial on `p` points with up to 4 chords.
fn monomial_on(p: u32) -> impl Strategy<Value = Monomial> {
    let pairs: Vec<(u32, u32)> = (1..=p).flat_map(|a| (a + 1..=p).map(move |b| (a, b))).collect();
    proptest::sample::subsequence(pairs.clone(), 0..=pairs.len().min(4))
        .prop_map(move |chosen| normalize(p, &chosen, Parity::Odd).unwrap().monomial().unwrap().clone())
}

fn monomial() -> impl Strategy<Value = Monomial> {
    (2u32..=6).prop_flat_map(monomial_on)
}

fn map_into(p: u32, target: u32) -> impl Strategy<Value = Vec<u32>> {
    proptest::collection::vec(1..=target, p as usize)
}

fn compose(f: &[u32], g: &[u32]) -> Vec<u32> {
    f.iter().map(|&x| g[x as usize - 1]).collect()
}

proptest! {
    #[test]
    fn normalize_is_idempotent(m in monomial(), parity in parity()) {
        let raw: Vec<_> = m.pairs().collect();
        prop_assert_eq!(normalize(m.points(), &raw, parity).unwrap(), SignedMonomial::plus(m));
    }

    #[test]
    fn swapping_two_chords(m in monomial(), parity in parity()) {
        prop_assume!(m.degree() >= 2);
        let mut raw: Vec<_> = m.pairs().collect();
        raw.swap(0, 1);
        let expected = match parity {
            Parity::Odd => Sign::Plus,
            Parity::Even => Sign::Minus,
        };
        prop_assert_eq!(normalize(m.points(), &raw, parity).unwrap().sign(), Some(expected));
    }

    #[test]
    fn odd_products_commute((a, b) in (2u32..=6).prop_flat_map(|p| (monomial_on(p), monomial_on(p)))) {
        let (x, y) = (SignedMonomial::plus(a), SignedMonomial::plus(b));
        prop_assert_eq!(product(&x, &y, Parity::Odd).unwrap(), product(&y, &x, Parity::Odd).unwrap());
    }

    #[test]
    fn relabel_by_identity(m in monomial(), parity in parity()) {
        let id: Vec<u32> = (1..=m.points()).collect();
        prop_assert_eq!(relabel(&m, &id, m.points(), parity).unwrap(), SignedMonomial::plus(m));
    }

    #[test]
    fn relabel_composes(
        (m, f, g) in monomial().prop_flat_map(|m| {
            let p = m.points();
            (Just(m), map_into(p, p), map_into(p, p + 1))
        }),
        parity in parity(),
    ) {
        let p = m.points();
        let once = relabel(&m, &f, p, parity).unwrap();
        let twice = match &once {
            SignedMonomial::Zero => SignedMonomial::Zero,
            SignedMonomial::Term { sign, monomial } => {
                let r = relabel(monomial, &g, p + 1, parity).unwrap();
                if *sign == Sign::Minus { r.negate() } else { r }
            }
        };
        let direct = relabel(&m, &compose(&f, &g), p + 1, parity).unwrap();
        prop_assert_eq!(twice, direct);
    }

    #[test]
    fn covering_survives_bijections(
        (m, perm) in monomial().prop_flat_map(|m| {
            let ids: Vec<u32> = (1..=m.points()).collect();
            (Just(m), Just(ids).prop_shuffle())
        }),
        parity in parity(),
    ) {
        let image = relabel(&m, &perm, m.points(), parity).unwrap();
        let image = image.monomial().expect("bijections never collapse chords");
        prop_assert_eq!(covers(&m), covers(image));
    }
}

// Dense Gaussian elimination over Ratio<i128>, independent of exactla.
fn naive_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<Ratio<i128>>> =
        rows.iter().map(|r| r.iter().map(|&x| Ratio::from_integer(i128::from(x))).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, pivot);
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c] / m[rank][c];
                let pivot_row = m[rank].clone();
                for (x, v) in m[r].iter_mut().zip(pivot_row) {
                    *x -= f * v;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn to_matrix(rows: &[Vec<i64>]) -> SparseMatrix<Rational> {
    SparseMatrix::from_dense(
        &rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect::<Vec<_>>(),
    )
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(prop_oneof![3 => Just(0i64), 2 => -3i64..=3], c), r)
    })
}

proptest! {
    #[test]
    fn rank_matches_naive_fractions(rows in small_matrix()) {
        prop_assert_eq!(rank(&to_matrix(&rows)), naive_rank(&rows));
    }

    #[test]
    fn rank_nullity(rows in small_matrix()) {
        let m = to_matrix(&rows);
        prop_assert_eq!(rank(&m) + kernel(&m).dim(), m.cols());
    }

    #[test]
    fn kernel_vectors_are_annihilated(rows in small_matrix()) {
        let m = to_matrix(&rows);
        let k = kernel(&m);
        prop_assert!(m.mul(&k.basis_matrix().transpose()).is_zero());
    }

    #[test]
    fn rref_shape_and_determinism(rows in small_matrix()) {
        let m = to_matrix(&rows);
        let (s, r) = rref(&m);
        prop_assert_eq!(rref(&m).0, s.clone());
        prop_assert!(s.pivots().windows(2).all(|w| w[0] < w[1]));
        for (i, row) in s.basis_rows().iter().enumerate() {
            prop_assert!(row[0].1.is_one());
            for (j, other) in s.basis_rows().iter().enumerate() {
                if i != j {
                    prop_assert!(other.iter().all(|(c, _)| *c != row[0].0));
                }
            }
        }
        // every input row lies in the reduced span
        for row in m.row_vecs() {
            prop_assert!(s.contains(row));
        }
        prop_assert_eq!(r, s.dim());
    }
}

#[test]
fn enumerated_monomials_are_canonical() {
    for p in 0..=5 {
        for k in 0..=4 {
            for m in enumerate_monomials(p, k) {
                let raw: Vec<_> = m.pairs().collect();
                assert_eq!(normalize(p, &raw, Parity::Even).unwrap(), SignedMonomial::plus(m));
            }
        }
    }
}
