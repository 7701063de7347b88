use metatrust_core::linalg::{Matrix, Svd};
use proptest::prelude::*;

fn matrix() -> impl Strategy<Value = (usize, usize, Vec<f64>)> {
    (1..12usize, 1..12usize).prop_flat_map(|(m, n)| (Just(m), Just(n), prop::collection::vec(-3.0..3.0f64, m * n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn singular_values_match_nalgebra((m, n, data) in matrix()) {
        let ours = Svd::compute(&Matrix::from_vec(m, n, data.clone()).unwrap());
        let mut theirs: Vec<f64> = nalgebra::DMatrix::from_row_slice(m, n, &data).singular_values().iter().copied().collect();
        theirs.sort_by(|a, b| b.total_cmp(a));
        prop_assert_eq!(ours.s.len(), theirs.len());
        for (a, b) in ours.s.iter().zip(&theirs) {
            prop_assert!((a - b).abs() <= 1e-9 * theirs[0].max(1.0), "{} vs {}", a, b);
        }
        prop_assert!(ours.s.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn full_rank_reconstructs((m, n, data) in matrix()) {
        let a = Matrix::from_vec(m, n, data).unwrap();
        let svd = Svd::compute(&a);
        prop_assert!(a.sub(&svd.reconstruct(m.min(n))).frobenius() <= 1e-9 * a.frobenius().max(1.0));
    }
}

#[test]
fn rank_deficient_matrix_has_trailing_zeros() {
    // second row is twice the first
    let a = Matrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0], vec![0.0, 1.0, 0.0]]);
    let svd = Svd::compute(&a);
    assert!(svd.s[2].abs() < 1e-12);
    assert!(a.sub(&svd.reconstruct(2)).frobenius() < 1e-12);
}
