//! Hermite and Smith normal forms over the integers.
//!
//! Both reductions pivot on the entry of smallest absolute value, which keeps
//! the output deterministic and slows down coefficient growth.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Smith normal form `left * A * right = diag(invariant_factors)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// Diagonal entries `d_1 | d_2 | ...`, one per position of the shorter
    /// side of the matrix. Trailing zeros mark the rank deficiency.
    pub invariant_factors: Vec<BigInt>,
    pub left_transform: IntMatrix,
    pub right_transform: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.iter().filter(|d| !d.is_zero()).count()
    }

    /// The diagonal matrix with the shape of the input.
    pub fn diagonal(&self) -> IntMatrix {
        IntMatrix::diagonal(
            self.left_transform.rows(),
            self.right_transform.cols(),
            &self.invariant_factors,
        )
    }
}

/// Row-style Hermite normal form `transform * A = hnf`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteForm {
    pub hnf: IntMatrix,
    pub transform: IntMatrix,
    /// Column index of the pivot in each nonzero row.
    pub pivots: Vec<usize>,
    pub rank: usize,
}

fn smallest_nonzero<I>(candidates: I) -> Option<(usize, usize)>
where
    I: IntoIterator<Item = ((usize, usize), BigInt)>,
{
    candidates
        .into_iter()
        .filter(|(_, v)| !v.is_zero())
        .min_by(|(_, a), (_, b)| a.cmp(b))
        .map(|(pos, _)| pos)
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut left = IntMatrix::identity(m);
    let mut right = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        let pivot = smallest_nonzero(
            (t..m).flat_map(|i| (t..n).map(move |j| (i, j))).map(|(i, j)| ((i, j), d[(i, j)].abs())),
        );
        let Some((pi, pj)) = pivot else { break };
        d.swap_rows(t, pi);
        left.swap_rows(t, pi);
        d.swap_cols(t, pj);
        right.swap_cols(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                left.add_row_multiple(i, t, &q);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&d[(t, t)]);
                d.add_col_multiple(j, t, &q);
                right.add_col_multiple(j, t, &q);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                // A remainder smaller than the pivot survived; move it into place.
                let col = (t + 1..m).map(|i| ((i, t), d[(i, t)].abs()));
                let row = (t + 1..n).map(|j| ((t, j), d[(t, j)].abs()));
                if let Some((i, j)) = smallest_nonzero(col.chain(row)) {
                    if j == t {
                        d.swap_rows(t, i);
                        left.swap_rows(t, i);
                    } else {
                        d.swap_cols(t, j);
                        right.swap_cols(t, j);
                    }
                }
                continue;
            }
            let offender = (t + 1..m).find(|&i| {
                (t + 1..n).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)]))
            });
            match offender {
                Some(i) => {
                    let one = BigInt::from(1);
                    d.add_row_multiple(t, i, &one);
                    left.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            left.negate_row(t);
        }
    }

    let invariant_factors = (0..m.min(n)).map(|i| d[(i, i)].clone()).collect();
    SmithForm { invariant_factors, left_transform: left, right_transform: right }
}

pub fn hermite_normal_form(a: &IntMatrix) -> HermiteForm {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut pivots = Vec::new();
    let mut r = 0;

    for c in 0..n {
        if r == m {
            break;
        }
        while let Some((p, _)) = smallest_nonzero((r..m).map(|i| ((i, c), h[(i, c)].abs()))) {
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..m {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = -h[(i, c)].div_floor(&h[(r, c)]);
                h.add_row_multiple(i, r, &q);
                u.add_row_multiple(i, r, &q);
                done &= h[(i, c)].is_zero();
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = -h[(i, c)].div_floor(&h[(r, c)]);
            h.add_row_multiple(i, r, &q);
            u.add_row_multiple(i, r, &q);
        }
        pivots.push(c);
        r += 1;
    }

    HermiteForm { hnf: h, transform: u, rank: r, pivots }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_smith(a: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(a);
        assert_eq!(&(&s.left_transform * a) * &s.right_transform, s.diagonal());
        assert!(s.left_transform.determinant().abs().is_one());
        assert!(s.right_transform.determinant().abs().is_one());
        for w in s.invariant_factors.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]), "{:?}", s.invariant_factors);
        }
        s
    }

    #[test]
    fn smith_of_diag_2_3() {
        let s = check_smith(&IntMatrix::from_i64(&[[2, 0], [0, 3]]));
        assert_eq!(s.invariant_factors, ints(&[1, 6]));
    }

    #[test]
    fn smith_of_identity_has_identity_witnesses() {
        let id = IntMatrix::identity(3);
        let s = check_smith(&id);
        assert_eq!(s.invariant_factors, ints(&[1, 1, 1]));
        assert_eq!(s.left_transform, id);
        assert_eq!(s.right_transform, id);
    }

    #[test]
    fn smith_of_kasprzyk_rays() {
        let a = IntMatrix::from_i64(&[[1, 0, 0], [0, 1, 0], [1, -3, 5], [-2, 2, -5]]);
        let s = check_smith(&a);
        assert_eq!(s.invariant_factors, ints(&[1, 1, 5]));
    }

    #[test]
    fn smith_of_zero_and_wide_matrices() {
        let s = check_smith(&IntMatrix::zeros(2, 3));
        assert_eq!(s.invariant_factors, ints(&[0, 0]));
        let s = check_smith(&IntMatrix::from_i64(&[[4, 6, 10]]));
        assert_eq!(s.invariant_factors, ints(&[2]));
    }

    #[test]
    fn hermite_examples() {
        let a = IntMatrix::from_i64(&[[2, 4], [1, 1]]);
        let h = hermite_normal_form(&a);
        assert_eq!(h.hnf, IntMatrix::from_i64(&[[1, 1], [0, 2]]));
        assert_eq!(&h.transform * &a, h.hnf);

        let id = IntMatrix::identity(3);
        assert_eq!(hermite_normal_form(&id).hnf, id);

        let z = IntMatrix::zeros(2, 3);
        let h = hermite_normal_form(&z);
        assert_eq!(h.hnf, z);
        assert_eq!(h.rank, 0);
    }

    #[test]
    fn hermite_reduces_above_pivots() {
        let a = IntMatrix::from_i64(&[[3, 5, 7], [0, 4, 9], [1, 1, 1]]);
        let h = hermite_normal_form(&a);
        assert_eq!(&h.transform * &a, h.hnf);
        assert!(h.transform.determinant().abs().is_one());
        for (r, &c) in h.pivots.iter().enumerate() {
            let p = &h.hnf[(r, c)];
            assert!(p.is_positive());
            for i in 0..r {
                let x = &h.hnf[(i, c)];
                assert!(!x.is_negative() && x < p);
            }
        }
    }
}
