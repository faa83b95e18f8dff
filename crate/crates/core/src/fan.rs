//! Complete simplicial fans and their local invariants.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactmat::{self, rational, IntMatrix};

/// Number of random points used by the membership sampler in [`is_complete`].
pub const DEFAULT_SAMPLES: usize = 10_000;
const SAMPLE_SEED: u64 = 0x7041_6e63;
const SAMPLE_RANGE: i64 = 1000;

/// A fan in `Z^N` given by its primitive rays and maximal cones.
///
/// Maximal cones are stored as sorted index lists into the ray list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    lattice_rank: usize,
    rays: IntMatrix,
    max_cones: Vec<Vec<usize>>,
}

impl Fan {
    /// Builds a fan and rejects it unless [`validate`] finds no violations.
    pub fn new(lattice_rank: usize, rays: IntMatrix, max_cones: Vec<Vec<usize>>) -> Result<Self> {
        let fan = Self::new_unchecked(lattice_rank, rays, max_cones)?;
        let report = validate(&fan);
        if report.is_valid() {
            Ok(fan)
        } else {
            Err(Error::InvalidFan(report))
        }
    }

    /// Builds a fan checking only the matrix shape.
    pub fn new_unchecked(
        lattice_rank: usize,
        rays: IntMatrix,
        max_cones: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if rays.cols() != lattice_rank {
            return Err(Error::DimensionMismatch { expected: lattice_rank, got: rays.cols() });
        }
        let max_cones = max_cones
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        Ok(Self { lattice_rank, rays, max_cones })
    }

    pub fn from_i64<R: AsRef<[i64]>>(rays: &[R], max_cones: Vec<Vec<usize>>) -> Result<Self> {
        let m = IntMatrix::from_i64(rays);
        Self::new(m.cols(), m, max_cones)
    }

    /// Complete fan whose maximal cones are all `N`-subsets of `N + 1` rays.
    pub fn with_all_facets(rays: IntMatrix) -> Result<Self> {
        let n = rays.cols();
        let b = rays.rows();
        let cones = (0..b)
            .rev()
            .map(|skip| (0..b).filter(|&i| i != skip).collect())
            .collect();
        Self::new(n, rays, cones)
    }

    pub fn lattice_rank(&self) -> usize {
        self.lattice_rank
    }

    pub fn num_rays(&self) -> usize {
        self.rays.rows()
    }

    pub fn rays(&self) -> &IntMatrix {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[BigInt] {
        self.rays.row(i)
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn cone_matrix(&self, cone: &[usize]) -> IntMatrix {
        self.rays.select_rows(cone)
    }

    /// All nonempty cones of the fan, ordered by dimension and then
    /// lexicographically.
    pub fn cones(&self) -> Vec<Vec<usize>> {
        let mut all = BTreeSet::new();
        for cone in &self.max_cones {
            let k = cone.len();
            for mask in 1u64..(1u64 << k) {
                let face: Vec<usize> =
                    (0..k).filter(|&i| mask >> i & 1 == 1).map(|i| cone[i]).collect();
                all.insert((face.len(), face));
            }
        }
        all.into_iter().map(|(_, f)| f).collect()
    }

    /// Number of cones of each dimension `0..=N`, counting the zero cone.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.lattice_rank + 1];
        f[0] = 1;
        for c in self.cones() {
            f[c.len()] += 1;
        }
        f
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoCones,
    ZeroRay(usize),
    NonPrimitiveRay(usize),
    DuplicateRay(usize, usize),
    UnusedRay(usize),
    IndexOutOfRange { cone: usize, index: usize },
    RepeatedIndex { cone: usize, index: usize },
    DuplicateCone(usize, usize),
    WrongConeDimension { cone: usize, rays: usize },
    NotSimplicial { cone: usize },
    BadIntersection(usize, usize),
    RidgeCount { ridge: Vec<usize>, cones: Vec<usize> },
    DisconnectedDualGraph { components: usize },
    UncoveredPoint(Vec<i64>),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoCones => write!(f, "fan has no maximal cones"),
            Violation::ZeroRay(i) => write!(f, "ray {i} is zero"),
            Violation::NonPrimitiveRay(i) => write!(f, "ray {i} is not primitive"),
            Violation::DuplicateRay(i, j) => write!(f, "rays {i} and {j} coincide"),
            Violation::UnusedRay(i) => write!(f, "ray {i} lies in no maximal cone"),
            Violation::IndexOutOfRange { cone, index } => {
                write!(f, "cone {cone} refers to missing ray {index}")
            }
            Violation::RepeatedIndex { cone, index } => {
                write!(f, "cone {cone} lists ray {index} twice")
            }
            Violation::DuplicateCone(i, j) => write!(f, "cones {i} and {j} coincide"),
            Violation::WrongConeDimension { cone, rays } => {
                write!(f, "cone {cone} has {rays} rays, not full-dimensional simplicial")
            }
            Violation::NotSimplicial { cone } => {
                write!(f, "rays of cone {cone} are linearly dependent")
            }
            Violation::BadIntersection(i, j) => {
                write!(f, "cones {i} and {j} do not meet in a common face")
            }
            Violation::RidgeCount { ridge, cones } => write!(
                f,
                "not complete: ridge {ridge:?} lies in {} maximal cone(s) {cones:?}",
                cones.len()
            ),
            Violation::DisconnectedDualGraph { components } => {
                write!(f, "not complete: dual graph has {components} components")
            }
            Violation::UncoveredPoint(p) => {
                write!(f, "not complete: sample point {p:?} lies in no cone")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn is_complete_violation(&self) -> bool {
        self.violations.iter().any(|v| {
            matches!(
                v,
                Violation::RidgeCount { .. }
                    | Violation::DisconnectedDualGraph { .. }
                    | Violation::UncoveredPoint(_)
            )
        })
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks every structural requirement on a complete simplicial fan and
/// collects all violations found.
pub fn validate(fan: &Fan) -> ValidationReport {
    let mut violations = Vec::new();
    let n = fan.lattice_rank;
    let b = fan.num_rays();

    for i in 0..b {
        let g = exactmat::gcd_all(fan.ray(i));
        if g.is_zero() {
            violations.push(Violation::ZeroRay(i));
        } else if !g.is_one() {
            violations.push(Violation::NonPrimitiveRay(i));
        }
        for j in 0..i {
            if fan.ray(i) == fan.ray(j) {
                violations.push(Violation::DuplicateRay(j, i));
            }
        }
    }

    if fan.max_cones.is_empty() {
        violations.push(Violation::NoCones);
        return ValidationReport { violations };
    }

    let mut structural = true;
    let mut used = vec![false; b];
    for (c, cone) in fan.max_cones.iter().enumerate() {
        for w in cone.windows(2) {
            if w[0] == w[1] {
                violations.push(Violation::RepeatedIndex { cone: c, index: w[0] });
                structural = false;
            }
        }
        for &i in cone {
            if i >= b {
                violations.push(Violation::IndexOutOfRange { cone: c, index: i });
                structural = false;
            } else {
                used[i] = true;
            }
        }
        for (d, other) in fan.max_cones.iter().enumerate().take(c) {
            if other == cone {
                violations.push(Violation::DuplicateCone(d, c));
                structural = false;
            }
        }
    }
    if !structural {
        return ValidationReport { violations };
    }
    for (i, u) in used.iter().enumerate() {
        if !u {
            violations.push(Violation::UnusedRay(i));
        }
    }

    for (c, cone) in fan.max_cones.iter().enumerate() {
        if cone.len() != n {
            violations.push(Violation::WrongConeDimension { cone: c, rays: cone.len() });
            structural = false;
        } else if fan.cone_matrix(cone).rank() != n {
            violations.push(Violation::NotSimplicial { cone: c });
            structural = false;
        }
    }
    if !structural {
        return ValidationReport { violations };
    }

    for c in 0..fan.max_cones.len() {
        for d in 0..c {
            if !meet_in_common_face(fan, &fan.max_cones[d], &fan.max_cones[c]) {
                violations.push(Violation::BadIntersection(d, c));
            }
        }
    }

    violations.extend(completeness_violations(fan, DEFAULT_SAMPLES));
    ValidationReport { violations }
}

/// Tests whether two simplicial cones intersect exactly in the cone spanned
/// by their shared rays.
///
/// Looks for `Σ λ_i v_i = Σ μ_j v_j` with `λ, μ ≥ 0` and `λ` carrying unit
/// mass on the rays of `first` not shared with `second`; such a point lies in
/// both cones but outside the common face. Infeasibility is exactly the
/// existence of a separating hyperplane.
pub fn meet_in_common_face(fan: &Fan, first: &[usize], second: &[usize]) -> bool {
    let own: Vec<usize> = first.iter().copied().filter(|i| !second.contains(i)).collect();
    if own.is_empty() {
        return true;
    }
    let n = fan.lattice_rank;
    let vars = first.len() + second.len();
    let zero = BigRational::zero();
    let mut a = vec![vec![zero.clone(); vars]; n + 1];
    for (k, row) in a.iter_mut().enumerate().take(n) {
        for (p, &i) in first.iter().enumerate() {
            row[p] = BigRational::from_integer(fan.ray(i)[k].clone());
        }
        for (p, &j) in second.iter().enumerate() {
            row[first.len() + p] = BigRational::from_integer(-fan.ray(j)[k].clone());
        }
    }
    for (p, i) in first.iter().enumerate() {
        if own.contains(i) {
            a[n][p] = BigRational::one();
        }
    }
    let mut rhs = vec![zero; n + 1];
    rhs[n] = BigRational::one();
    !rational::feasible(&a, &rhs)
}

/// Outcome of the three completeness tests.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletenessReport {
    pub bad_ridges: Vec<(Vec<usize>, Vec<usize>)>,
    pub dual_components: usize,
    pub samples: usize,
    pub uncovered: Vec<Vec<i64>>,
    /// Samples lying in the interior of more than one maximal cone.
    pub overlapping: usize,
}

impl CompletenessReport {
    pub fn is_complete(&self) -> bool {
        self.bad_ridges.is_empty() && self.dual_components == 1 && self.uncovered.is_empty()
    }
}

/// Whether the cones of a simplicial fan cover `R^N`.
///
/// Every ridge must lie in exactly two maximal cones, the dual graph must be
/// connected, and [`DEFAULT_SAMPLES`] random points must each lie in some
/// maximal cone.
pub fn is_complete(fan: &Fan) -> bool {
    let well_shaped = !fan.max_cones.is_empty()
        && fan.max_cones.iter().all(|c| {
            c.len() == fan.lattice_rank && c.iter().all(|&i| i < fan.num_rays())
        });
    well_shaped && completeness_report(fan, DEFAULT_SAMPLES).is_complete()
}

fn completeness_violations(fan: &Fan, samples: usize) -> Vec<Violation> {
    let report = completeness_report(fan, samples);
    let mut out: Vec<Violation> = report
        .bad_ridges
        .into_iter()
        .map(|(ridge, cones)| Violation::RidgeCount { ridge, cones })
        .collect();
    if report.dual_components != 1 {
        out.push(Violation::DisconnectedDualGraph { components: report.dual_components });
    }
    out.extend(report.uncovered.into_iter().take(3).map(Violation::UncoveredPoint));
    out
}

/// Runs the ridge, dual-graph and sampling tests. Assumes every maximal cone
/// is simplicial of full dimension.
pub fn completeness_report(fan: &Fan, samples: usize) -> CompletenessReport {
    let cones = &fan.max_cones;
    let mut ridges: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (c, cone) in cones.iter().enumerate() {
        for skip in 0..cone.len() {
            let ridge: Vec<usize> =
                cone.iter().enumerate().filter(|(p, _)| *p != skip).map(|(_, &i)| i).collect();
            ridges.entry(ridge).or_default().push(c);
        }
    }

    let mut parent: Vec<usize> = (0..cones.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut bad_ridges = Vec::new();
    for (ridge, owners) in ridges {
        if owners.len() != 2 {
            bad_ridges.push((ridge, owners.clone()));
        }
        for w in owners.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let dual_components =
        (0..cones.len()).filter(|&c| find(&mut parent, c) == c).count();

    let (uncovered, overlapping) = sample_membership(fan, samples);
    CompletenessReport { bad_ridges, dual_components, samples, uncovered, overlapping }
}

/// Barycentric sign test for points against one simplicial cone.
struct ConeLocator {
    adj: IntMatrix,
    det_negative: bool,
    small: Option<Vec<i64>>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Location {
    Outside,
    Boundary,
    Interior,
}

impl ConeLocator {
    fn new(fan: &Fan, cone: &[usize]) -> Option<Self> {
        let basis_t = fan.cone_matrix(cone).transpose();
        let (adj, det) = rational::scaled_inverse(&basis_t)?;
        let small = adj
            .entries()
            .iter()
            .map(|x| x.to_i64().filter(|v| v.unsigned_abs() < 1 << 62))
            .collect();
        Some(Self { det_negative: det.is_negative(), adj, small })
    }

    fn locate(&self, point: &[i64]) -> Location {
        let n = point.len();
        let mut on_boundary = false;
        for i in 0..n {
            let sign = self
                .small_row_dot(i, point)
                .map(|v| v.signum() as i8)
                .unwrap_or_else(|| {
                    let row = self.adj.row(i);
                    let v: BigInt = row.iter().zip(point).map(|(a, &x)| a * x).sum();
                    if v.is_zero() { 0 } else if v.is_positive() { 1 } else { -1 }
                });
            let sign = if self.det_negative { -sign } else { sign };
            match sign {
                -1 => return Location::Outside,
                0 => on_boundary = true,
                _ => {}
            }
        }
        if on_boundary {
            Location::Boundary
        } else {
            Location::Interior
        }
    }

    fn small_row_dot(&self, i: usize, point: &[i64]) -> Option<i128> {
        let n = point.len();
        let row = self.small.as_ref()?.get(i * n..(i + 1) * n)?;
        let mut acc: i128 = 0;
        for (a, &x) in row.iter().zip(point) {
            acc = acc.checked_add(*a as i128 * x as i128)?;
        }
        Some(acc)
    }
}

fn sample_membership(fan: &Fan, samples: usize) -> (Vec<Vec<i64>>, usize) {
    let locators: Vec<ConeLocator> =
        fan.max_cones.iter().filter_map(|c| ConeLocator::new(fan, c)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let mut uncovered = Vec::new();
    let mut overlapping = 0;
    for _ in 0..samples {
        let p: Vec<i64> =
            (0..fan.lattice_rank).map(|_| rng.gen_range(-SAMPLE_RANGE..=SAMPLE_RANGE)).collect();
        let mut interior = 0;
        let mut covered = false;
        for loc in &locators {
            match loc.locate(&p) {
                Location::Outside => {}
                Location::Boundary => covered = true,
                Location::Interior => {
                    covered = true;
                    interior += 1;
                }
            }
        }
        if !covered {
            uncovered.push(p);
        } else if interior > 1 {
            overlapping += 1;
        }
    }
    (uncovered, overlapping)
}

/// Whether the rays of `cone` extend to a basis of the lattice.
pub fn cone_is_smooth(fan: &Fan, cone: &[usize]) -> bool {
    cone_multiplicity(fan, cone).is_one()
}

/// Index of the sublattice spanned by the rays of `cone` inside the lattice
/// points of their linear span (product of the nonzero invariant factors).
pub fn cone_multiplicity(fan: &Fan, cone: &[usize]) -> BigInt {
    exactmat::smith_normal_form(&fan.cone_matrix(cone))
        .invariant_factors
        .iter()
        .filter(|d| !d.is_zero())
        .product()
}

/// Whether the simplex `conv(0, v_i : i ∈ cone)` contains no lattice points
/// besides its vertices.
///
/// Enumerates the fundamental parallelepiped of the cone through the Smith
/// form of its ray matrix; `budget` caps the number of box points visited.
pub fn cone_is_terminal(fan: &Fan, cone: &[usize], budget: u64) -> Result<bool> {
    let v = fan.cone_matrix(cone);
    let snf = exactmat::smith_normal_form(&v);
    let d = &snf.invariant_factors;
    if d.iter().any(Zero::is_zero) {
        return Err(Error::Unsupported(format!("cone {cone:?} is not simplicial")));
    }
    let volume: BigInt = d.iter().product();
    if volume > BigInt::from(budget) {
        return Err(Error::BudgetExceeded { needed: volume.to_string(), budget });
    }
    let k = cone.len();
    let moduli: Vec<u64> = d.iter().map(|x| x.to_u64().expect("bounded by budget")).collect();
    let left = &snf.left_transform;
    let mut digits = vec![0u64; k];
    loop {
        if digits.iter().any(|&c| c != 0) {
            // λ = frac(Σ_i (c_i / d_i) · L_i)
            let mut total = BigRational::zero();
            for j in 0..k {
                let mut coord = BigRational::zero();
                for i in 0..k {
                    if digits[i] != 0 {
                        coord += BigRational::new(
                            BigInt::from(digits[i]) * &left[(i, j)],
                            d[i].clone(),
                        );
                    }
                }
                total += &coord - coord.floor();
            }
            if total <= BigRational::one() {
                return Ok(false);
            }
        }
        let mut pos = 0;
        loop {
            if pos == k {
                return Ok(true);
            }
            digits[pos] += 1;
            if digits[pos] < moduli[pos] {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeFlags {
    pub cone: Vec<usize>,
    pub smooth: bool,
    pub multiplicity: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityReport {
    /// Every nonempty cone with its smoothness.
    pub cones: Vec<ConeFlags>,
    /// Codimension of the singular locus; `None` for a smooth variety.
    pub singular_codim: Option<usize>,
    /// Every singular cone is maximal, i.e. the singular points are isolated.
    pub isolated: bool,
    /// Terminality of all cones, when requested.
    pub terminal: Option<bool>,
}

impl SingularityReport {
    pub fn is_smooth(&self) -> bool {
        self.singular_codim.is_none()
    }

    pub fn singular_cones(&self) -> impl Iterator<Item = &ConeFlags> {
        self.cones.iter().filter(|c| !c.smooth)
    }
}

pub fn singularity_report(fan: &Fan) -> SingularityReport {
    let cones: Vec<ConeFlags> = fan
        .cones()
        .into_iter()
        .map(|cone| {
            let multiplicity = cone_multiplicity(fan, &cone);
            ConeFlags { smooth: multiplicity.is_one(), multiplicity, cone }
        })
        .collect();
    let singular_codim = cones.iter().filter(|c| !c.smooth).map(|c| c.cone.len()).min();
    let isolated = singular_codim.is_none_or(|c| c == fan.lattice_rank);
    SingularityReport { cones, singular_codim, isolated, terminal: None }
}

/// [`singularity_report`] plus a terminality check of every maximal cone.
pub fn singularity_report_with_terminal(fan: &Fan, budget: u64) -> Result<SingularityReport> {
    let mut report = singularity_report(fan);
    let mut terminal = true;
    for cone in &fan.max_cones {
        if !cone_is_terminal(fan, cone, budget)? {
            terminal = false;
            break;
        }
    }
    report.terminal = Some(terminal);
    Ok(report)
}
