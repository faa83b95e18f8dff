use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{hermite_normal_form, smith_normal_form, IntMatrix};
use crate::error::{Error, Result};

/// Basis of the integer left kernel `{x : xᵀA = 0}`.
///
/// The basis is returned in Hermite normal form, so it is canonical for the
/// kernel lattice and every vector is primitive.
pub fn kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let h = hermite_normal_form(a);
    let kernel_rows: Vec<usize> = (h.rank..a.rows()).collect();
    if kernel_rows.is_empty() {
        return Vec::new();
    }
    let raw = h.transform.select_rows(&kernel_rows);
    let canon = hermite_normal_form(&raw);
    (0..canon.rank).map(|i| canon.hnf.row(i).to_vec()).collect()
}

/// Free rank and torsion of `Z^b / A·Z^N` for a `b × N` matrix `A`.
///
/// Torsion factors are the invariant factors greater than one, in increasing
/// (divisibility) order.
pub fn cokernel_invariants(a: &IntMatrix) -> (usize, Vec<BigInt>) {
    let s = smith_normal_form(a);
    let torsion = s.invariant_factors.iter().filter(|d| **d > BigInt::one()).cloned().collect();
    (a.rows() - s.rank(), torsion)
}

/// Divides a nonzero vector by the gcd of its entries.
pub fn primitive(v: &[BigInt]) -> Result<Vec<BigInt>> {
    let g = gcd_all(v);
    if g.is_zero() {
        return Err(Error::ZeroRay);
    }
    Ok(v.iter().map(|x| x / &g).collect())
}

pub fn is_primitive(v: &[BigInt]) -> bool {
    gcd_all(v).is_one()
}

/// Nonnegative gcd of all entries; zero for the zero vector.
pub fn gcd_all(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x)).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn kernel_of_projective_plane_rays() {
        let a = IntMatrix::from_i64(&[[1, 0], [0, 1], [-1, -1]]);
        assert_eq!(kernel_basis(&a), vec![ints(&[1, 1, 1])]);
    }

    #[test]
    fn kernel_of_five_rays_in_rank_four() {
        let a = IntMatrix::from_i64(&[
            [1, 0, 0, 0],
            [0, 1, 0, -1],
            [0, 0, -1, 0],
            [0, 0, 2, -1],
            [-1, -1, -1, 2],
        ]);
        assert_eq!(kernel_basis(&a), vec![ints(&[1, 1, 1, 1, 1])]);
    }

    #[test]
    fn kernel_of_full_rank_square_is_empty() {
        let a = IntMatrix::from_i64(&[[2, 1], [1, 3]]);
        assert!(kernel_basis(&a).is_empty());
    }

    #[test]
    fn kernel_vectors_are_primitive_and_annihilate() {
        let a = IntMatrix::from_i64(&[[2, 4], [1, 2], [3, 6], [0, 0]]);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 3);
        for v in &k {
            assert!(is_primitive(v));
            assert!(a.left_apply(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn cokernels_of_small_ray_matrices() {
        let p2 = IntMatrix::from_i64(&[[1, 0], [0, 1], [-1, -1]]);
        assert_eq!(cokernel_invariants(&p2), (1, vec![]));
        let ex2 = IntMatrix::from_i64(&[[1, 0, 0], [0, 1, 0], [1, -3, 5], [-2, 2, -5]]);
        assert_eq!(cokernel_invariants(&ex2), (1, ints(&[5])));
        let ex3 = IntMatrix::from_i64(&[
            [1, 0, 0, 0],
            [0, 1, 0, -1],
            [0, 0, -1, 0],
            [0, 0, 2, -1],
            [-1, -1, -1, 2],
        ]);
        // Printed five-vector configuration: it spans Z^4.
        assert_eq!(cokernel_invariants(&ex3), (1, vec![]));
    }

    #[test]
    fn primitive_vectors() {
        assert_eq!(primitive(&ints(&[2, 4, 6])).unwrap(), ints(&[1, 2, 3]));
        assert_eq!(primitive(&ints(&[1, -3, 5])).unwrap(), ints(&[1, -3, 5]));
        assert_eq!(primitive(&ints(&[-4, 6])).unwrap(), ints(&[-2, 3]));
        assert!(matches!(primitive(&ints(&[0, 0])), Err(Error::ZeroRay)));
    }
}
