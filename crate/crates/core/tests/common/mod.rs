#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use toric_wci_core::exactmat::IntMatrix;
use toric_wci_core::fan::Fan;
use toric_wci_core::gwps::{self, WeightSystem};

pub const BUDGET: u64 = 1_000_000;

pub fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn projective(n: usize) -> Fan {
    gwps::fan_from_weights(&WeightSystem::new(vec![1; n + 1]).unwrap()).unwrap()
}

pub fn p1xp1() -> Fan {
    Fan::from_i64(
        &[[1, 0], [-1, 0], [0, 1], [0, -1]],
        vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]],
    )
    .unwrap()
}

pub fn kasprzyk() -> Fan {
    Fan::with_all_facets(IntMatrix::from_i64(&[[1, 0, 0], [0, 1, 0], [1, -3, 5], [-2, 2, -5]])).unwrap()
}

pub fn five_vectors() -> Fan {
    Fan::with_all_facets(IntMatrix::from_i64(&[
        [1, 0, 0, 0],
        [0, 1, 0, -1],
        [0, 0, -1, 0],
        [0, 0, 2, -1],
        [-1, -1, -1, 2],
    ]))
    .unwrap()
}

/// `P^{p-1}` divided by `Z/p` acting with weights `0, 1, …, p-1`.
pub fn cyclic_quotient(p: usize) -> Fan {
    let n = p - 1;
    let mut rays = vec![vec![-1i64; n]];
    rays.extend((0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect::<Vec<_>>()));
    let base = Fan::with_all_facets(IntMatrix::from_i64(&rays)).unwrap();
    let g: Vec<BigRational> = (1..p).map(|i| BigRational::new(i.into(), p.into())).collect();
    gwps::refine_lattice(&base, &[g]).unwrap()
}

pub fn weighted(w: &[u64]) -> Fan {
    gwps::fan_from_weights(&WeightSystem::new(w.to_vec()).unwrap()).unwrap()
}

/// Fans every corpus-level property is checked on.
pub fn corpus() -> Vec<(&'static str, Fan)> {
    vec![
        ("p2", projective(2)),
        ("p3", projective(3)),
        ("p4", projective(4)),
        ("p1xp1", p1xp1()),
        ("kasprzyk", kasprzyk()),
        ("five_vectors", five_vectors()),
        ("p(1,1,2,3)", weighted(&[1, 1, 2, 3])),
        ("p(1,2,3)", weighted(&[1, 2, 3])),
        ("quotient_p3", cyclic_quotient(3)),
        ("quotient_p5", cyclic_quotient(5)),
    ]
}

/// Non-decreasing weight tuples of length `2..=max_len` with entries in
/// `1..=max_weight` and gcd 1.
pub fn weight_systems(max_len: usize, max_weight: u64) -> Vec<Vec<u64>> {
    fn extend(prefix: &mut Vec<u64>, max_len: usize, max_weight: u64, out: &mut Vec<Vec<u64>>) {
        if prefix.len() >= 2 && prefix.iter().fold(0, |g, a| g.gcd(a)) == 1 {
            out.push(prefix.clone());
        }
        if prefix.len() == max_len {
            return;
        }
        let start = prefix.last().copied().unwrap_or(1);
        for a in start..=max_weight {
            prefix.push(a);
            extend(prefix, max_len, max_weight, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), max_len, max_weight, &mut out);
    out
}

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut acc = BigInt::from(0);
    for j in 0..n {
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][j] * cofactor_det(&minor);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}
