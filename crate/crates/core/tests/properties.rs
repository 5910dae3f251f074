//! Randomized structural invariants, shrunk automatically on failure.

use embedlab::building::{canonicalize_matrix, neighbors, tree2_distance, projection_pi};
use embedlab::exact::{q, QMat, Q};
use embedlab::trees::{tree_distance, TreeVertex};
use num_traits::Zero;
use proptest::prelude::*;

/// A valid T_3 word: letters in {0,1,2}, no consecutive repeats.
fn tree_word() -> impl Strategy<Value = Vec<u8>> {
    proptest::collection::vec(0u8..3, 0..10).prop_map(|raw| {
        let mut w = Vec::new();
        for c in raw {
            if w.last() != Some(&c) {
                w.push(c);
            }
        }
        w
    })
}

fn int_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    proptest::collection::vec(proptest::collection::vec(-6i64..=6, 3), 3)
}

fn to_qmat(rows: &[Vec<i64>]) -> QMat {
    let mut m = QMat::zeros(3, 3);
    for i in 0..3 {
        for j in 0..3 {
            m[(i, j)] = Q::from_integer(rows[i][j]);
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tree_metric_is_a_metric(a in tree_word(), b in tree_word(), c in tree_word()) {
        let (x, y, z) = (
            TreeVertex::new(a, 3).unwrap(),
            TreeVertex::new(b, 3).unwrap(),
            TreeVertex::new(c, 3).unwrap(),
        );
        prop_assert_eq!(tree_distance(&x, &y), tree_distance(&y, &x));
        prop_assert_eq!(tree_distance(&x, &x), 0);
        prop_assert!((tree_distance(&x, &y) == 0) == (x == y));
        prop_assert!(tree_distance(&x, &z) <= tree_distance(&x, &y) + tree_distance(&y, &z));
    }

    #[test]
    fn lattice_class_invariant_under_homothety_and_shears(
        rows in int_matrix(),
        shear in -5i64..=5,
        scale_exp in -2i64..=2,
    ) {
        let m = to_qmat(&rows);
        prop_assume!(!m.det().is_zero());
        let l = canonicalize_matrix(&m, 2).unwrap();
        // Idempotent.
        prop_assert_eq!(canonicalize_matrix(&l.to_qmat(), 2).unwrap(), l.clone());
        // Invariant under a column shear and a power-of-2 homothety.
        let mut u = QMat::identity(3);
        u[(0, 2)] = Q::from_integer(shear);
        let mut changed = m.mul(&u);
        let s = if scale_exp >= 0 {
            Q::from_integer(1 << scale_exp as u32)
        } else {
            q(1, 1 << (-scale_exp) as u32)
        };
        for i in 0..3 {
            for j in 0..3 {
                changed[(i, j)] *= s;
            }
        }
        prop_assert_eq!(canonicalize_matrix(&changed, 2).unwrap(), l);
    }

    #[test]
    fn building_adjacency_is_symmetric_and_projections_lipschitz(rows in int_matrix()) {
        let m = to_qmat(&rows);
        prop_assume!(!m.det().is_zero());
        let l = canonicalize_matrix(&m, 2).unwrap();
        for nb in neighbors(&l) {
            prop_assert!(neighbors(&nb).contains(&l));
            // Vertex types differ along an edge.
            prop_assert_ne!(l.vertex_type(), nb.vertex_type());
            for i in [1, 2] {
                let d = tree2_distance(&projection_pi(i, &l), &projection_pi(i, &nb));
                prop_assert!(d <= 1);
            }
        }
    }
}
