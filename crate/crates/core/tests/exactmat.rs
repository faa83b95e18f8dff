mod common;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use common::cofactor_det;
use toric_wci_core::exactmat::{
    cokernel_invariants, hermite_normal_form, is_primitive, kernel_basis, smith_normal_form, IntMatrix,
};

fn matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        prop::collection::vec(-bound..=bound, r * c).prop_map(move |v| {
            IntMatrix::new(r, c, v.into_iter().map(BigInt::from).collect()).unwrap()
        })
    })
}

fn square(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim).prop_flat_map(move |n| {
        prop::collection::vec(-bound..=bound, n * n).prop_map(move |v| {
            IntMatrix::new(n, n, v.into_iter().map(BigInt::from).collect()).unwrap()
        })
    })
}

/// A unimodular matrix as a product of random elementary operations.
fn unimodular(n: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec((0..n, 0..n, -3i64..=3, any::<bool>()), 0..12).prop_map(move |ops| {
        let mut u = IntMatrix::identity(n);
        for (i, j, k, flip) in ops {
            if i != j {
                u.add_row_multiple(i, j, &BigInt::from(k));
                if flip {
                    u.swap_rows(i, j);
                }
            } else if flip {
                u.negate_row(i);
            }
        }
        u
    })
}

fn rows(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    m.row_vecs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn smith_witnesses_reconstruct_the_diagonal(a in matrix(6, 20)) {
        let s = smith_normal_form(&a);
        let lar = &(&s.left_transform * &a) * &s.right_transform;
        prop_assert_eq!(&lar, &s.diagonal());
        prop_assert!(s.left_transform.determinant().abs().is_one());
        prop_assert!(s.right_transform.determinant().abs().is_one());
        let d = &s.invariant_factors;
        prop_assert!(d.iter().all(|x| !x.is_negative()));
        let r = s.rank();
        prop_assert!(d[r..].iter().all(Zero::is_zero));
        for i in 1..r {
            prop_assert!((&d[i] % &d[i - 1]).is_zero(), "{:?}", d);
        }
    }

    #[test]
    fn invariant_factors_multiply_to_the_determinant(a in square(6, 20)) {
        let det = cofactor_det(&rows(&a)).abs();
        let product: BigInt = smith_normal_form(&a).invariant_factors.iter().product();
        prop_assert_eq!(product, det);
    }

    #[test]
    fn cokernel_ignores_unimodular_changes(
        (a, u, v) in (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| (
            prop::collection::vec(-9i64..=9, r * c)
                .prop_map(move |x| IntMatrix::new(r, c, x.into_iter().map(BigInt::from).collect()).unwrap()),
            unimodular(r),
            unimodular(c),
        ))
    ) {
        let moved = &(&u * &a) * &v;
        prop_assert_eq!(cokernel_invariants(&a), cokernel_invariants(&moved));
    }

    #[test]
    fn left_kernel_is_annihilating_and_primitive(a in matrix(6, 5)) {
        let basis = kernel_basis(&a);
        prop_assert_eq!(basis.len(), a.rows() - a.rank());
        for x in &basis {
            prop_assert!(a.left_apply(x).iter().all(Zero::is_zero));
            prop_assert!(is_primitive(x));
        }
        if !basis.is_empty() {
            let k = IntMatrix::from_rows(&basis, a.rows()).unwrap();
            prop_assert_eq!(k.rank(), basis.len());
            // The basis spans the whole saturated kernel lattice.
            prop_assert!(cokernel_invariants(&k.transpose()).1.is_empty());
        }
    }

    #[test]
    fn hermite_form_is_canonical_for_the_row_lattice(
        (a, u) in (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| (
            prop::collection::vec(-9i64..=9, r * c)
                .prop_map(move |x| IntMatrix::new(r, c, x.into_iter().map(BigInt::from).collect()).unwrap()),
            unimodular(r),
        ))
    ) {
        let h = hermite_normal_form(&a);
        prop_assert_eq!(&(&h.transform * &a), &h.hnf);
        prop_assert!(h.transform.determinant().abs().is_one());
        for (i, &p) in h.pivots.iter().enumerate() {
            prop_assert!(h.hnf[(i, p)].is_positive());
            for j in 0..p {
                prop_assert!(h.hnf[(i, j)].is_zero());
            }
            for above in 0..i {
                let x = &h.hnf[(above, p)];
                prop_assert!(!x.is_negative() && x < &h.hnf[(i, p)]);
            }
        }
        for i in h.rank..a.rows() {
            prop_assert!(h.hnf.row(i).iter().all(Zero::is_zero));
        }
        prop_assert_eq!(hermite_normal_form(&(&u * &a)).hnf, h.hnf);
    }
}

/// Every integer row combination with small coefficients lies in the lattice
/// spanned by the Hermite rows, and the index matches the determinant.
#[test]
fn hermite_rows_span_the_same_lattice_on_small_cases() {
    let cases = [
        IntMatrix::from_i64(&[[2, 4], [1, 1]]),
        IntMatrix::from_i64(&[[6, 10], [15, 4]]),
        IntMatrix::from_i64(&[[3, 0], [0, 5]]),
    ];
    for a in cases {
        let h = hermite_normal_form(&a);
        let det = a.determinant().abs();
        assert_eq!(&h.hnf[(0, 0)] * &h.hnf[(1, 1)], det);
        for x in -3i64..=3 {
            for y in -3i64..=3 {
                let v = a.left_apply(&[BigInt::from(x), BigInt::from(y)]);
                // Solve c * H = v by back substitution over the echelon rows.
                let c0 = &v[0] / &h.hnf[(0, 0)];
                assert!((&v[0] % &h.hnf[(0, 0)]).is_zero());
                let rest = &v[1] - &c0 * &h.hnf[(0, 1)];
                assert!((&rest % &h.hnf[(1, 1)]).is_zero(), "{a} {x} {y}");
            }
        }
    }
}

#[test]
fn zero_and_empty_shapes() {
    let z = IntMatrix::zeros(3, 2);
    let s = smith_normal_form(&z);
    assert_eq!(s.rank(), 0);
    assert_eq!(cokernel_invariants(&z), (3, vec![]));
    assert_eq!(kernel_basis(&z).len(), 3);
    let diag = IntMatrix::diagonal(2, 2, &[BigInt::from(4), BigInt::from(6)]);
    assert_eq!(cokernel_invariants(&diag), (0, vec![BigInt::from(2), BigInt::from(12)]));
}
