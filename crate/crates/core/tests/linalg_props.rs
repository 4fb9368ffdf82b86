use ncdiff::linalg::{vector, Matrix, Subspace};
use ncdiff::{Field, Scalar};
use proptest::prelude::*;

fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-3i64..=3, rows * cols).prop_map(move |xs| {
        let data = xs.into_iter().map(|x| Field::Rational.from_i64(x)).collect();
        Matrix::from_flat(Field::Rational, rows, cols, data).unwrap()
    })
}

fn subspace6() -> impl Strategy<Value = Subspace> {
    (0usize..=5).prop_flat_map(|k| small_matrix(k, 6)).prop_map(|m| m.row_space())
}

// Rank by plain fraction-free elimination, independent of the echelon builder.
fn oracle_rank(rows: &[Vec<Scalar>]) -> usize {
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c].div(&m[rank][c]).unwrap();
                let pivot_row = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        rank += 1;
    }
    rank
}

proptest! {
    #[test]
    fn rref_is_idempotent(m in small_matrix(4, 5)) {
        let r = m.rref();
        prop_assert_eq!(r.rref(), r);
    }

    #[test]
    fn rank_nullity(m in small_matrix(4, 6)) {
        prop_assert_eq!(m.kernel().dim() + m.rank(), 6);
        for v in m.kernel().basis() {
            prop_assert!(vector::is_zero(&m.mul_vec(v)));
        }
    }

    #[test]
    fn grassmann_identity(a in subspace6(), b in subspace6()) {
        let s = a.sum(&b).unwrap();
        let i = a.intersect(&b).unwrap();
        prop_assert_eq!(a.dim() + b.dim(), s.dim() + i.dim());
        let union: Vec<_> = a.basis().iter().chain(b.basis()).cloned().collect();
        prop_assert_eq!(s.dim(), oracle_rank(&union));
        prop_assert!(i.is_subset(&a).unwrap() && i.is_subset(&b).unwrap());
    }

    #[test]
    fn canonical_form_ignores_generators(m in small_matrix(3, 5), t in small_matrix(3, 3)) {
        // Rows of t·m span a subspace of row(m); equality exactly when t is invertible.
        let tm = &t * &m;
        let same = tm.rank() == m.rank();
        prop_assert_eq!(tm.row_space() == m.row_space(), same);
    }

    #[test]
    fn quotient_basis_counts(a in subspace6(), b in subspace6()) {
        let s = a.sum(&b).unwrap();
        let reps = s.quotient_basis(&a).unwrap();
        prop_assert_eq!(reps.len(), s.dim() - a.dim());
        prop_assert_eq!(a.extend(reps), s);
    }
}
