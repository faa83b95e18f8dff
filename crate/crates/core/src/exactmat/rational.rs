//! Exact rational linear algebra: square solves, scaled inverses and a small
//! feasibility simplex.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::IntMatrix;

pub fn to_rational(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

/// Solves `A x = rhs` for square nonsingular `A`; `None` if `A` is singular.
pub fn solve(a: &IntMatrix, rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    assert!(a.is_square());
    assert_eq!(rhs.len(), a.rows());
    let n = a.rows();
    let mut m: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row = to_rational(a.row(i));
            row.push(rhs[i].clone());
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let pivot = m[c][c].clone();
        for x in m[c].iter_mut().skip(c) {
            *x /= &pivot;
        }
        for i in 0..n {
            if i == c || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..=n {
                let s = &f * &m[c][j];
                m[i][j] -= s;
            }
        }
    }
    Some(m.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

/// Returns `(adj, det)` with `A · adj = det · I` and `det ≠ 0`, or `None` if
/// `A` is singular.
pub fn scaled_inverse(a: &IntMatrix) -> Option<(IntMatrix, BigInt)> {
    let n = a.rows();
    let det = a.determinant();
    if det.is_zero() {
        return None;
    }
    let mut adj = IntMatrix::zeros(n, n);
    let d = BigRational::from_integer(det.clone());
    for j in 0..n {
        let mut e = vec![BigRational::zero(); n];
        e[j] = d.clone();
        let col = solve(a, &e)?;
        for (i, x) in col.into_iter().enumerate() {
            debug_assert!(x.is_integer());
            adj[(i, j)] = x.to_integer();
        }
    }
    Some((adj, det))
}

/// Decides whether `{x ≥ 0 : A x = b}` is nonempty.
///
/// Phase one of the simplex method with Bland's rule, in exact arithmetic,
/// so the answer is never wrong and the method always terminates.
pub fn feasible(a: &[Vec<BigRational>], b: &[BigRational]) -> bool {
    let m = a.len();
    if m == 0 {
        return true;
    }
    let n = a[0].len();
    let width = n + m + 1;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m + 1);
    for (i, row) in a.iter().enumerate() {
        assert_eq!(row.len(), n);
        let flip = b[i].is_negative();
        let mut r = Vec::with_capacity(width);
        for x in row {
            r.push(if flip { -x.clone() } else { x.clone() });
        }
        for k in 0..m {
            r.push(if k == i { BigRational::from_integer(1.into()) } else { BigRational::zero() });
        }
        r.push(b[i].abs());
        t.push(r);
    }
    // Reduced costs for minimizing the sum of artificial variables.
    let mut obj = vec![BigRational::zero(); width];
    for r in &t {
        for j in 0..n {
            obj[j] -= &r[j];
        }
        obj[width - 1] -= &r[width - 1];
    }
    t.push(obj);
    let mut basis: Vec<usize> = (n..n + m).collect();

    while let Some(enter) = (0..n + m).find(|&j| t[m][j].is_negative()) {
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &t[i][width - 1] / &t[i][enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // Phase one is bounded below by zero, so some row always qualifies.
        let (row, _) = leave.expect("unbounded phase-one simplex");
        let pivot = t[row][enter].clone();
        for x in t[row].iter_mut() {
            *x /= &pivot;
        }
        for i in 0..=m {
            if i == row || t[i][enter].is_zero() {
                continue;
            }
            let f = t[i][enter].clone();
            for j in 0..width {
                let s = &f * &t[row][j];
                t[i][j] -= s;
            }
        }
        basis[row] = enter;
    }
    t[m][width - 1].is_zero()
}
