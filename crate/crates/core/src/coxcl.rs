//! Quotient presentation of a simplicial toric variety.
//!
//! For a fan with `b` rays the coordinate ring `C[x_0, …, x_{b-1}]` is graded
//! by the class group `Cl(Y) = Z^b / (ray matrix)·Z^N`, the variable `x_i`
//! having the class of the boundary divisor `D_i`. The variety is the
//! quotient of `A^b` minus the irrelevant locus by `Hom(Cl(Y), C^*)`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmat::{self, rational, IntMatrix};
use crate::fan::Fan;

/// An element of `Z^free_rank ⊕ Z/d_1 ⊕ … ⊕ Z/d_t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    pub free: Vec<BigInt>,
    /// Residues in `[0, d_i)`.
    pub torsion: Vec<BigInt>,
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        if self.torsion.is_empty() && self.free.len() == 1 {
            return write!(f, "{}", self.free[0]);
        }
        write!(f, "({}", join(&self.free))?;
        if !self.torsion.is_empty() {
            write!(f, "; {}", join(&self.torsion))?;
        }
        write!(f, ")")
    }
}

/// Class group of a fan together with the class of every boundary divisor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassGroupData {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
    pub degree_map: Vec<DivisorClass>,
    free_rows: IntMatrix,
    torsion_rows: IntMatrix,
}

impl ClassGroupData {
    pub fn num_variables(&self) -> usize {
        self.free_rows.cols()
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    pub fn zero(&self) -> DivisorClass {
        DivisorClass {
            free: vec![BigInt::zero(); self.free_rank],
            torsion: vec![BigInt::zero(); self.torsion.len()],
        }
    }

    fn reduce(&self, mut c: DivisorClass) -> DivisorClass {
        for (t, d) in c.torsion.iter_mut().zip(&self.torsion) {
            *t = t.mod_floor(d);
        }
        c
    }

    pub fn add(&self, a: &DivisorClass, b: &DivisorClass) -> DivisorClass {
        self.reduce(DivisorClass {
            free: a.free.iter().zip(&b.free).map(|(x, y)| x + y).collect(),
            torsion: a.torsion.iter().zip(&b.torsion).map(|(x, y)| x + y).collect(),
        })
    }

    pub fn sub(&self, a: &DivisorClass, b: &DivisorClass) -> DivisorClass {
        self.reduce(DivisorClass {
            free: a.free.iter().zip(&b.free).map(|(x, y)| x - y).collect(),
            torsion: a.torsion.iter().zip(&b.torsion).map(|(x, y)| x - y).collect(),
        })
    }

    /// Builds a class from raw coordinates, reducing the torsion part.
    pub fn class(&self, free: Vec<BigInt>, torsion: Vec<BigInt>) -> Result<DivisorClass> {
        if free.len() != self.free_rank {
            return Err(Error::DimensionMismatch { expected: self.free_rank, got: free.len() });
        }
        if torsion.len() != self.torsion.len() {
            return Err(Error::DimensionMismatch { expected: self.torsion.len(), got: torsion.len() });
        }
        Ok(self.reduce(DivisorClass { free, torsion }))
    }

    /// Class of the torus-invariant divisor `Σ c_i D_i`.
    pub fn class_of_divisor(&self, coeffs: &[BigInt]) -> Result<DivisorClass> {
        if coeffs.len() != self.num_variables() {
            return Err(Error::DimensionMismatch { expected: self.num_variables(), got: coeffs.len() });
        }
        Ok(self.reduce(DivisorClass {
            free: self.free_rows.apply(coeffs),
            torsion: self.torsion_rows.apply(coeffs),
        }))
    }

    /// Class of the anticanonical divisor `Σ D_i`.
    pub fn anticanonical(&self) -> DivisorClass {
        let ones = vec![BigInt::one(); self.num_variables()];
        self.class_of_divisor(&ones).expect("length matches")
    }

    /// `Z ⊕ Z/5`-style description of the group.
    pub fn group_string(&self) -> String {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" ⊕ ")
        }
    }

    /// A torus-invariant divisor in `class`. Only implemented for `Cl = Z`.
    pub fn lift(&self, class: &DivisorClass) -> Result<Vec<BigInt>> {
        if self.free_rank != 1 || !self.torsion.is_empty() {
            return Err(Error::Unsupported(format!(
                "lifting classes of {} to divisors",
                self.group_string()
            )));
        }
        let target = &class.free[0];
        let degrees: Vec<&BigInt> = self.degree_map.iter().map(|c| &c.free[0]).collect();
        let mut coeffs = vec![BigInt::zero(); degrees.len()];
        if let Some(i) = degrees.iter().position(|a| !a.is_zero() && target.is_multiple_of(a)) {
            coeffs[i] = target / degrees[i];
            return Ok(coeffs);
        }
        // Running extended gcd: g = Σ coeffs_i a_i.
        let mut g = BigInt::zero();
        for (i, a) in degrees.iter().enumerate() {
            let e = g.extended_gcd(a);
            for c in coeffs.iter_mut().take(i) {
                *c *= &e.x;
            }
            coeffs[i] = e.y;
            g = e.gcd;
        }
        debug_assert!(g.is_one());
        let scale = target / &g;
        Ok(coeffs.into_iter().map(|c| c * &scale).collect())
    }
}

/// Computes `Cl(Y)` as the cokernel of the ray matrix.
///
/// Coordinates come from the Smith form of the ray matrix; the free part is
/// then replaced by the Hermite-canonical basis of the ray relations so the
/// grading does not depend on incidental choices in the reduction.
pub fn class_group(fan: &Fan) -> ClassGroupData {
    let rays = fan.rays();
    let b = rays.rows();
    let snf = exactmat::smith_normal_form(rays);
    let left = &snf.left_transform;

    let torsion_idx: Vec<usize> = (0..snf.invariant_factors.len())
        .filter(|&i| snf.invariant_factors[i] > BigInt::one())
        .collect();
    let torsion: Vec<BigInt> =
        torsion_idx.iter().map(|&i| snf.invariant_factors[i].clone()).collect();
    let torsion_rows = left.select_rows(&torsion_idx);

    let relations = exactmat::kernel_basis(rays);
    let free_rows = IntMatrix::from_rows(&relations, b).expect("kernel rows have length b");
    let free_rank = free_rows.rows();

    let mut data = ClassGroupData { free_rank, torsion, degree_map: Vec::new(), free_rows, torsion_rows };
    data.degree_map = (0..b)
        .map(|i| {
            let mut e = vec![BigInt::zero(); b];
            e[i] = BigInt::one();
            data.class_of_divisor(&e).expect("unit vector")
        })
        .collect();
    data
}

/// `Hom(Cl(Y), C^*)`: a torus times a finite abelian group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupD {
    pub torus_rank: usize,
    pub finite_part: Vec<BigInt>,
}

impl GroupD {
    pub fn is_connected(&self) -> bool {
        self.finite_part.is_empty()
    }
}

impl fmt::Display for GroupD {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.torus_rank {
            0 => {}
            1 => parts.push("C*".to_string()),
            r => parts.push(format!("(C*)^{r}")),
        }
        parts.extend(self.finite_part.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" × "))
        }
    }
}

pub fn group_d(cl: &ClassGroupData) -> GroupD {
    GroupD { torus_rank: cl.free_rank, finite_part: cl.torsion.clone() }
}

/// The irrelevant locus `Z ⊂ A^b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrrelevantLocus {
    /// Minimal monomial generators `∏_{i ∈ I} x_i` of the irrelevant ideal.
    pub generators: Vec<Vec<usize>>,
    /// Irreducible components: `{x_i = 0 for all i ∈ I}` for each listed `I`.
    pub components: Vec<Vec<usize>>,
}

impl IrrelevantLocus {
    pub fn is_origin(&self, num_variables: usize) -> bool {
        self.components.len() == 1 && self.components[0].len() == num_variables
    }
}

fn minimalize(sets: impl IntoIterator<Item = BTreeSet<usize>>) -> Vec<BTreeSet<usize>> {
    let mut sets: Vec<BTreeSet<usize>> = sets.into_iter().collect();
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    sets.dedup();
    let mut out: Vec<BTreeSet<usize>> = Vec::new();
    for s in sets {
        if !out.iter().any(|m| m.is_subset(&s)) {
            out.push(s);
        }
    }
    out
}

fn sorted(sets: Vec<BTreeSet<usize>>) -> Vec<Vec<usize>> {
    let mut v: Vec<Vec<usize>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
    v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    v
}

pub fn irrelevant_locus(fan: &Fan) -> IrrelevantLocus {
    let b = fan.num_rays();
    let generators = minimalize(
        fan.max_cones().iter().map(|cone| (0..b).filter(|i| !cone.contains(i)).collect()),
    );
    // Components are the minimal sets meeting every generator.
    let mut transversals: Vec<BTreeSet<usize>> = vec![BTreeSet::new()];
    for g in &generators {
        let mut next = Vec::new();
        for t in &transversals {
            if t.intersection(g).next().is_some() {
                next.push(t.clone());
            } else {
                for &i in g {
                    let mut u = t.clone();
                    u.insert(i);
                    next.push(u);
                }
            }
        }
        transversals = minimalize(next);
    }
    IrrelevantLocus { generators: sorted(generators), components: sorted(transversals) }
}

/// Degree of `∏ x_i^{r_i}`.
pub fn degree_of_monomial(cl: &ClassGroupData, exponents: &[BigInt]) -> Result<DivisorClass> {
    if exponents.len() != cl.num_variables() {
        return Err(Error::InvalidExponents(format!(
            "expected {} exponents, got {}",
            cl.num_variables(),
            exponents.len()
        )));
    }
    if let Some(e) = exponents.iter().find(|e| e.is_negative()) {
        return Err(Error::InvalidExponents(format!("negative exponent {e}")));
    }
    cl.class_of_divisor(exponents)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Homogeneity {
    Homogeneous(DivisorClass),
    Mismatch { first: usize, offending: usize, first_degree: DivisorClass, offending_degree: DivisorClass },
}

/// Whether all monomials share a degree.
pub fn is_homogeneous(cl: &ClassGroupData, monomials: &[Vec<BigInt>]) -> Result<Homogeneity> {
    let Some((head, rest)) = monomials.split_first() else {
        return Err(Error::InvalidExponents("empty polynomial".into()));
    };
    let d0 = degree_of_monomial(cl, head)?;
    for (k, m) in rest.iter().enumerate() {
        let d = degree_of_monomial(cl, m)?;
        if d != d0 {
            return Ok(Homogeneity::Mismatch {
                first: 0,
                offending: k + 1,
                first_degree: d0,
                offending_degree: d,
            });
        }
    }
    Ok(Homogeneity::Homogeneous(d0))
}

/// Ampleness of `class`, decided on the caller's witness `Σ c_i D_i`.
pub fn is_ample(
    fan: &Fan,
    cl: &ClassGroupData,
    class: &DivisorClass,
    witness: &[BigInt],
) -> Result<bool> {
    let actual = cl.class_of_divisor(witness)?;
    if &actual != class {
        return Err(Error::WitnessMismatch { expected: class.to_string(), actual: actual.to_string() });
    }
    Ok(divisor_is_ample(fan, witness))
}

/// Strict convexity of the support function of `Σ c_i D_i`.
///
/// On each maximal cone `σ` the linear form `m_σ` with `⟨m_σ, v_i⟩ = -c_i`
/// (`i ∈ σ`) must satisfy `⟨m_σ, v_j⟩ > -c_j` for every ray outside `σ`.
pub fn divisor_is_ample(fan: &Fan, coeffs: &[BigInt]) -> bool {
    assert_eq!(coeffs.len(), fan.num_rays());
    for cone in fan.max_cones() {
        let basis = fan.cone_matrix(cone);
        let rhs: Vec<BigRational> =
            cone.iter().map(|&i| BigRational::from_integer(-coeffs[i].clone())).collect();
        let Some(m) = rational::solve(&basis, &rhs) else { return false };
        for j in (0..fan.num_rays()).filter(|j| !cone.contains(j)) {
            let value: BigRational = fan
                .ray(j)
                .iter()
                .zip(&m)
                .map(|(v, x)| x * BigRational::from_integer(v.clone()))
                .sum();
            if value <= BigRational::from_integer(-coeffs[j].clone()) {
                return false;
            }
        }
    }
    true
}

/// Whether `Σ c_i D_i` is linearly equivalent to an effective divisor, i.e.
/// whether some monomial has its class.
///
/// Monomials in the class correspond to lattice points `m` with
/// `⟨m, v_i⟩ ≥ -c_i`. On a complete fan each `±e_k` is a nonnegative
/// combination of rays, which bounds every coordinate of `m`; the box is then
/// enumerated, visiting at most `budget` points.
pub fn divisor_has_section(fan: &Fan, coeffs: &[BigInt], budget: u64) -> Result<bool> {
    let n = fan.lattice_rank();
    if coeffs.len() != fan.num_rays() {
        return Err(Error::DimensionMismatch { expected: fan.num_rays(), got: coeffs.len() });
    }
    let bound_along = |direction: &[BigRational]| -> Result<BigRational> {
        for cone in fan.max_cones() {
            let basis_t = fan.cone_matrix(cone).transpose();
            let Some(lambda) = rational::solve(&basis_t, direction) else { continue };
            if lambda.iter().all(|x| !x.is_negative()) {
                // ⟨m, direction⟩ = Σ λ_i ⟨m, v_i⟩ ≥ -Σ λ_i c_i
                return Ok(cone
                    .iter()
                    .zip(&lambda)
                    .map(|(&i, l)| -l * BigRational::from_integer(coeffs[i].clone()))
                    .sum());
            }
        }
        Err(Error::Unsupported("divisor polytope of an incomplete fan".into()))
    };
    let mut lo = Vec::with_capacity(n);
    let mut hi = Vec::with_capacity(n);
    let mut volume = BigInt::one();
    for k in 0..n {
        let mut e = vec![BigRational::zero(); n];
        e[k] = BigRational::one();
        let lower = bound_along(&e)?.ceil().to_integer();
        e[k] = -BigRational::one();
        let upper = -bound_along(&e)?.ceil().to_integer();
        if upper < lower {
            return Ok(false);
        }
        volume *= &upper - &lower + 1;
        lo.push(lower);
        hi.push(upper);
    }
    if volume > BigInt::from(budget) {
        return Err(Error::BudgetExceeded { needed: volume.to_string(), budget });
    }
    let mut m = lo.clone();
    loop {
        let inside = (0..fan.num_rays()).all(|i| exactmat::dot(fan.ray(i), &m) >= -coeffs[i].clone());
        if inside {
            return Ok(true);
        }
        let mut k = 0;
        loop {
            if k == n {
                return Ok(false);
            }
            m[k] += 1;
            if m[k] <= hi[k] {
                break;
            }
            m[k] = lo[k].clone();
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn p2() -> Fan {
        Fan::from_i64(&[[1, 0], [0, 1], [-1, -1]], vec![vec![0, 1], vec![1, 2], vec![0, 2]])
            .unwrap()
    }

    fn p1xp1() -> Fan {
        Fan::from_i64(
            &[[1, 0], [-1, 0], [0, 1], [0, -1]],
            vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]],
        )
        .unwrap()
    }

    fn kasprzyk() -> Fan {
        Fan::with_all_facets(IntMatrix::from_i64(&[[1, 0, 0], [0, 1, 0], [1, -3, 5], [-2, 2, -5]]))
            .unwrap()
    }

    #[test]
    fn projective_plane_grading() {
        let cl = class_group(&p2());
        assert_eq!(cl.free_rank, 1);
        assert!(cl.torsion.is_empty());
        for d in &cl.degree_map {
            assert_eq!(d.free, ints(&[1]));
        }
        assert_eq!(cl.group_string(), "Z");
        let d = degree_of_monomial(&cl, &ints(&[1, 1, 1])).unwrap();
        assert_eq!(d.to_string(), "3");
    }

    #[test]
    fn kasprzyk_class_group() {
        let cl = class_group(&kasprzyk());
        assert_eq!(cl.free_rank, 1);
        assert_eq!(cl.torsion, ints(&[5]));
        assert_eq!(cl.group_string(), "Z ⊕ Z/5");
        let d = group_d(&cl);
        assert_eq!(d.to_string(), "C* × Z/5");
        assert!(!d.is_connected());
        let all = degree_of_monomial(&cl, &ints(&[1, 1, 1, 1])).unwrap();
        assert_eq!(all.free, ints(&[4]));
        let summed = cl.degree_map.iter().fold(cl.zero(), |acc, d| cl.add(&acc, d));
        assert_eq!(all, summed);
    }

    #[test]
    fn trivial_group() {
        let fan = Fan::from_i64(&[[1], [-1]], vec![vec![0], vec![1]]).unwrap();
        let cl = class_group(&fan);
        assert_eq!(group_d(&cl).torus_rank, 1);
        let cl0 = ClassGroupData {
            free_rank: 0,
            torsion: vec![],
            degree_map: vec![],
            free_rows: IntMatrix::zeros(0, 0),
            torsion_rows: IntMatrix::zeros(0, 0),
        };
        assert_eq!(group_d(&cl0).torus_rank, 0);
        assert_eq!(group_d(&cl0).to_string(), "1");
    }

    #[test]
    fn irrelevant_loci() {
        let z = irrelevant_locus(&p2());
        assert_eq!(z.generators, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(z.components, vec![vec![0, 1, 2]]);
        assert!(z.is_origin(3));

        let z = irrelevant_locus(&p1xp1());
        assert_eq!(z.generators, vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]]);
        assert_eq!(z.components, vec![vec![0, 1], vec![2, 3]]);

        assert!(irrelevant_locus(&kasprzyk()).is_origin(4));
    }

    #[test]
    fn monomial_degree_errors() {
        let cl = class_group(&p2());
        assert!(degree_of_monomial(&cl, &ints(&[1, 1])).is_err());
        assert!(degree_of_monomial(&cl, &ints(&[1, -1, 0])).is_err());
    }

    #[test]
    fn homogeneity() {
        let p1 = Fan::from_i64(&[[1], [-1]], vec![vec![0], vec![1]]).unwrap();
        let cl = class_group(&p1);
        match is_homogeneous(&cl, &[ints(&[1, 0]), ints(&[2, 0])]).unwrap() {
            Homogeneity::Mismatch { first, offending, .. } => assert_eq!((first, offending), (0, 1)),
            h => panic!("expected mismatch, got {h:?}"),
        }
        assert_eq!(
            is_homogeneous(&cl, &[ints(&[1, 2]), ints(&[3, 0])]).unwrap(),
            Homogeneity::Homogeneous(cl.class(ints(&[3]), vec![]).unwrap())
        );
        assert!(is_homogeneous(&cl, &[]).is_err());
    }

    #[test]
    fn ampleness() {
        let fan = p2();
        let cl = class_group(&fan);
        let h = cl.degree_map[0].clone();
        assert!(is_ample(&fan, &cl, &h, &ints(&[1, 0, 0])).unwrap());
        assert!(!divisor_is_ample(&fan, &ints(&[0, 0, 0])));
        assert!(matches!(
            is_ample(&fan, &cl, &h, &ints(&[1, 1, 0])),
            Err(Error::WitnessMismatch { .. })
        ));

        let fan = p1xp1();
        let cl = class_group(&fan);
        let fiber = cl.class_of_divisor(&ints(&[1, 0, 0, 0])).unwrap();
        assert!(!is_ample(&fan, &cl, &fiber, &ints(&[1, 0, 0, 0])).unwrap());
        let diag = cl.class_of_divisor(&ints(&[1, 0, 1, 0])).unwrap();
        assert!(is_ample(&fan, &cl, &diag, &ints(&[1, 0, 1, 0])).unwrap());
    }

    #[test]
    fn lifting_rank_one_classes() {
        let fan = Fan::with_all_facets(IntMatrix::from_i64(&[[1, 0], [0, 1], [-2, -3]])).unwrap();
        let cl = class_group(&fan);
        let degs: Vec<BigInt> = cl.degree_map.iter().map(|d| d.free[0].clone()).collect();
        assert_eq!(degs, ints(&[2, 3, 1]));
        for c in -7..=7 {
            let class = cl.class(ints(&[c]), vec![]).unwrap();
            let w = cl.lift(&class).unwrap();
            assert_eq!(cl.class_of_divisor(&w).unwrap(), class);
        }
        assert!(cl_of_kasprzyk_lift_is_unsupported());
    }

    #[test]
    fn sections() {
        let fan = p1xp1();
        assert!(divisor_has_section(&fan, &ints(&[1, 0, 0, 0]), 1000).unwrap());
        assert!(divisor_has_section(&fan, &ints(&[1, -1, 1, 0]), 1000).unwrap());
        assert!(!divisor_has_section(&fan, &ints(&[-1, 0, 1, 0]), 1000).unwrap());
        let ex2 = kasprzyk();
        // degree-one classes: only those of the four variables are effective
        let cl = class_group(&ex2);
        for i in 0..4 {
            let mut c = ints(&[0, 0, 0, 0]);
            c[i] = BigInt::one();
            assert!(divisor_has_section(&ex2, &c, 10_000).unwrap());
        }
        // Each class of free degree one: effective exactly when some variable has it.
        let mut seen = BTreeSet::new();
        for code in 0..5i64.pow(4) {
            let c: Vec<BigInt> = (0..4).map(|k| BigInt::from(code / 5i64.pow(k) % 5 - 2)).collect();
            let class = cl.class_of_divisor(&c).unwrap();
            if class.free != ints(&[1]) || !seen.insert(class.clone()) {
                continue;
            }
            let effective = divisor_has_section(&ex2, &c, 10_000).unwrap();
            assert_eq!(effective, cl.degree_map.contains(&class), "class {class}");
        }
        assert_eq!(seen.len(), 5);
    }

    fn cl_of_kasprzyk_lift_is_unsupported() -> bool {
        let cl = class_group(&kasprzyk());
        matches!(cl.lift(&cl.zero()), Err(Error::Unsupported(_)))
    }
}
