//! Generalized weighted projective spaces: `N`-dimensional toric varieties
//! whose fans have `N + 1` rays.
//!
//! Such a fan satisfies a single relation `a_0 v_0 + … + a_N v_N = 0` with
//! positive coprime weights. The variety is the weighted projective space
//! `P(a_0, …, a_N)` when the rays span the lattice, and a quotient of it by
//! the finite group `Z^N / ⟨v_i⟩` (the torsion of `Cl`) otherwise.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::coxcl;
use crate::error::{Error, Result};
use crate::exactmat::{self, rational, IntMatrix};
use crate::fan::Fan;

/// Positive weights with gcd one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightSystem {
    weights: Vec<u64>,
}

impl WeightSystem {
    pub fn new(weights: Vec<u64>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::InvalidWeights("need at least two weights".into()));
        }
        if weights.contains(&0) {
            return Err(Error::InvalidWeights(format!("{weights:?} contains a zero weight")));
        }
        if weights.iter().fold(0, |g, &a| g.gcd(&a)) != 1 {
            return Err(Error::InvalidWeights(format!("{weights:?} have a common factor")));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// Dimension `N` of `P(a_0, …, a_N)`.
    pub fn dim(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn sum(&self) -> u64 {
        self.weights.iter().sum()
    }
}

impl fmt::Display for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.weights.iter().all(|&a| a == 1) {
            return write!(f, "P^{}", self.dim());
        }
        let w: Vec<String> = self.weights.iter().map(u64::to_string).collect();
        write!(f, "P({})", w.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GwpsKind {
    WeightedProjectiveSpace,
    QuotientOfWps,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GwpsClassification {
    pub kind: GwpsKind,
    pub weights: WeightSystem,
    /// Cyclic orders of the finite group; empty for a weighted projective space.
    pub quotient_group: Vec<BigInt>,
}

impl fmt::Display for GwpsClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GwpsKind::WeightedProjectiveSpace => {
                write!(f, "weighted projective space {}", self.weights)
            }
            GwpsKind::QuotientOfWps => {
                let g: Vec<String> = self.quotient_group.iter().map(|d| format!("Z/{d}")).collect();
                write!(f, "quotient of {} by {}", self.weights, g.join(" × "))
            }
        }
    }
}

pub fn is_gwps(fan: &Fan) -> bool {
    fan.num_rays() == fan.lattice_rank() + 1
}

/// The positive primitive relation among the rays of a gwps fan.
pub fn weights_of(fan: &Fan) -> Result<WeightSystem> {
    if !is_gwps(fan) {
        return Err(Error::NotGwps { rays: fan.num_rays(), rank: fan.lattice_rank() });
    }
    let kernel = exactmat::kernel_basis(fan.rays());
    let [relation] = kernel.as_slice() else {
        return Err(Error::NotGwps { rays: fan.num_rays(), rank: fan.lattice_rank() });
    };
    let relation: Vec<BigInt> = if relation.iter().all(|x| !x.is_positive()) {
        relation.iter().map(|x| -x).collect()
    } else {
        relation.clone()
    };
    if !relation.iter().all(Signed::is_positive) {
        return Err(Error::MixedSignRelation(relation.iter().map(|x| x.to_string()).collect()));
    }
    let weights = relation
        .iter()
        .map(|x| x.to_u64().ok_or_else(|| Error::InvalidWeights(format!("weight {x} too large"))))
        .collect::<Result<Vec<u64>>>()?;
    WeightSystem::new(weights)
}

pub fn classify(fan: &Fan) -> Result<GwpsClassification> {
    let weights = weights_of(fan)?;
    let cl = coxcl::class_group(fan);
    let kind = if cl.torsion.is_empty() {
        GwpsKind::WeightedProjectiveSpace
    } else {
        GwpsKind::QuotientOfWps
    };
    Ok(GwpsClassification { kind, weights, quotient_group: cl.torsion })
}

/// Every `N` of the `N + 1` weights are coprime.
pub fn weights_well_formed(w: &WeightSystem) -> bool {
    let a = w.weights();
    (0..a.len()).all(|skip| {
        a.iter().enumerate().filter(|&(i, _)| i != skip).fold(0u64, |g, (_, x)| g.gcd(x)) == 1
    })
}

/// Images of the standard basis vectors under `Z^{N+1} → Z^{N+1} / Z·(a_0, …, a_N) ≅ Z^N`,
/// one per row, before any primitivization.
///
/// The quotient map is read off the Smith form of the weight column: its
/// left transform sends the weight vector to `±e_0`, so the remaining rows
/// project onto the quotient.
pub fn weight_lattice_images(w: &WeightSystem) -> IntMatrix {
    let n1 = w.weights().len();
    let column: Vec<Vec<BigInt>> = w.weights().iter().map(|&a| vec![BigInt::from(a)]).collect();
    let column = IntMatrix::from_rows(&column, 1).expect("single column");
    let snf = exactmat::smith_normal_form(&column);
    let projection = snf.left_transform.select_rows(&(1..n1).collect::<Vec<_>>());
    projection.transpose()
}

/// Fan of `P(a_0, …, a_N)` in `Z^N`.
pub fn fan_from_weights(w: &WeightSystem) -> Result<Fan> {
    if !weights_well_formed(w) {
        return Err(Error::NotWellFormed(w.weights().to_vec()));
    }
    Fan::with_all_facets(weight_lattice_images(w))
}

/// Basis of the lattice `Z^N + Σ Z·g_k`, returned as `(B, D)` where the rows
/// of `B / D` form the basis.
pub fn superlattice_basis(rank: usize, generators: &[Vec<BigRational>]) -> Result<(IntMatrix, BigInt)> {
    let mut denom = BigInt::one();
    for g in generators {
        if g.len() != rank {
            return Err(Error::InvalidLattice(format!(
                "generator has {} coordinates, lattice rank is {rank}",
                g.len()
            )));
        }
        for x in g {
            denom = denom.lcm(x.denom());
        }
    }
    let mut rows: Vec<Vec<BigInt>> = (0..rank)
        .map(|i| (0..rank).map(|j| if i == j { denom.clone() } else { BigInt::zero() }).collect())
        .collect();
    for g in generators {
        rows.push(g.iter().map(|x| (x * BigRational::from_integer(denom.clone())).to_integer()).collect());
    }
    let h = exactmat::hermite_normal_form(&IntMatrix::from_rows(&rows, rank)?);
    if h.rank != rank {
        return Err(Error::InvalidLattice("generators do not span a full-rank lattice".into()));
    }
    Ok((h.hnf.select_rows(&(0..rank).collect::<Vec<_>>()), denom))
}

/// Index of `Z^N` in `Z^N + Σ Z·g_k`.
pub fn superlattice_index(rank: usize, generators: &[Vec<BigRational>]) -> Result<BigInt> {
    let (basis, denom) = superlattice_basis(rank, generators)?;
    Ok(num_traits::pow(denom, rank) / basis.determinant().abs())
}

/// The same rays and cones read in the finer lattice `Z^N + Σ Z·g_k`,
/// rewritten in a basis of it and made primitive again.
pub fn refine_lattice(fan: &Fan, generators: &[Vec<BigRational>]) -> Result<Fan> {
    let n = fan.lattice_rank();
    let (basis, denom) = superlattice_basis(n, generators)?;
    let basis_t = basis.transpose();
    let mut rows = Vec::with_capacity(fan.num_rays());
    for i in 0..fan.num_rays() {
        let target: Vec<BigRational> =
            fan.ray(i).iter().map(|x| BigRational::from_integer(x * &denom)).collect();
        let coords = rational::solve(&basis_t, &target)
            .ok_or_else(|| Error::InvalidLattice("singular superlattice basis".into()))?;
        if let Some(bad) = coords.iter().find(|c| !c.is_integer()) {
            return Err(Error::InvalidLattice(format!("ray {i} has coordinate {bad}")));
        }
        let coords: Vec<BigInt> = coords.into_iter().map(|c| c.to_integer()).collect();
        rows.push(exactmat::primitive(&coords)?);
    }
    Fan::new(n, IntMatrix::from_rows(&rows, n)?, fan.max_cones().to_vec())
}

/// A ray permutation `p` such that ray `i` of `a` corresponds to ray `p[i]`
/// of `b` under some change of lattice basis, if one exists.
pub fn lattice_isomorphism(a: &Fan, b: &Fan) -> Option<Vec<usize>> {
    if a.lattice_rank() != b.lattice_rank() || a.num_rays() != b.num_rays() {
        return None;
    }
    let target_cones: BTreeSet<Vec<usize>> = b.max_cones().iter().cloned().collect();
    if target_cones.len() != a.max_cones().len() {
        return None;
    }
    let target_hnf = exactmat::hermite_normal_form(&b.rays().transpose()).hnf;
    let n = a.num_rays();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut found = None;
    permute(&mut perm, 0, &mut |p| {
        let cones: BTreeSet<Vec<usize>> = a
            .max_cones()
            .iter()
            .map(|c| {
                let mut m: Vec<usize> = c.iter().map(|&i| p[i]).collect();
                m.sort_unstable();
                m
            })
            .collect();
        if cones != target_cones {
            return false;
        }
        let mut inverse = vec![0; n];
        for (i, &j) in p.iter().enumerate() {
            inverse[j] = i;
        }
        let permuted = a.rays().select_rows(&inverse);
        if exactmat::hermite_normal_form(&permuted.transpose()).hnf == target_hnf {
            found = Some(p.to_vec());
            true
        } else {
            false
        }
    });
    found
}

fn permute(p: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize]) -> bool) -> bool {
    if k == p.len() {
        return visit(p);
    }
    for i in k..p.len() {
        p.swap(k, i);
        if permute(p, k + 1, visit) {
            return true;
        }
        p.swap(k, i);
    }
    false
}
