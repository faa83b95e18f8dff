//! Complete intersections in simplicial toric varieties.
//!
//! Everything here is decided from degree data alone and describes a general
//! complete intersection of the given degrees; no specific equations are
//! examined.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::coxcl::{self, ClassGroupData, DivisorClass};
use crate::error::{Error, Result};
use crate::fan::{self, Fan};
use crate::gwps::{self, GwpsClassification, GwpsKind, WeightSystem};

/// Degree of one hypersurface in a toric ambient, with a torus-invariant
/// divisor representing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToricDegree {
    pub class: DivisorClass,
    pub witness: Vec<BigInt>,
}

/// A complete intersection of `k` general hypersurfaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CiSpec {
    Weighted { weights: WeightSystem, degrees: Vec<u64> },
    Toric { fan: Fan, degrees: Vec<ToricDegree> },
}

impl CiSpec {
    pub fn weighted(weights: WeightSystem, degrees: Vec<u64>, budget: u64) -> Result<Self> {
        check_codimension(weights.dim(), degrees.len())?;
        for &d in &degrees {
            if d == 0 {
                return Err(Error::InvalidSpec("degrees must be positive".into()));
            }
            if !monomial_exists(weights.weights(), d, budget)? {
                return Err(Error::InvalidSpec(format!("no monomial of degree {d} in {weights}")));
            }
        }
        Ok(CiSpec::Weighted { weights, degrees })
    }

    /// Checks that each witness represents its class and that the class
    /// contains a monomial.
    pub fn toric(fan: Fan, degrees: Vec<ToricDegree>, budget: u64) -> Result<Self> {
        check_codimension(fan.lattice_rank(), degrees.len())?;
        let cl = coxcl::class_group(&fan);
        for d in &degrees {
            let actual = cl.class_of_divisor(&d.witness)?;
            if actual != d.class {
                return Err(Error::WitnessMismatch {
                    expected: d.class.to_string(),
                    actual: actual.to_string(),
                });
            }
            let effective = d.witness.iter().all(|c| !c.is_negative())
                || coxcl::divisor_has_section(&fan, &d.witness, budget)?;
            if !effective {
                return Err(Error::InvalidSpec(format!("no monomial has degree {}", d.class)));
            }
        }
        Ok(CiSpec::Toric { fan, degrees })
    }

    /// Toric spec whose degrees are given only by witnesses.
    pub fn toric_from_witnesses(fan: Fan, witnesses: Vec<Vec<BigInt>>, budget: u64) -> Result<Self> {
        let cl = coxcl::class_group(&fan);
        let degrees = witnesses
            .into_iter()
            .map(|w| Ok(ToricDegree { class: cl.class_of_divisor(&w)?, witness: w }))
            .collect::<Result<Vec<_>>>()?;
        Self::toric(fan, degrees, budget)
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            CiSpec::Weighted { weights, .. } => weights.dim(),
            CiSpec::Toric { fan, .. } => fan.lattice_rank(),
        }
    }

    pub fn codim(&self) -> usize {
        match self {
            CiSpec::Weighted { degrees, .. } => degrees.len(),
            CiSpec::Toric { degrees, .. } => degrees.len(),
        }
    }

    pub fn dim_x(&self) -> usize {
        self.ambient_dim() - self.codim()
    }

    /// Toric form of the spec: the ambient fan with a witness for every
    /// degree. `None` for weights that are not well formed.
    fn toric_view(&self) -> Result<Option<ToricView>> {
        match self {
            CiSpec::Toric { fan, degrees } => Ok(Some(ToricView {
                cl: coxcl::class_group(fan),
                fan: fan.clone(),
                witnesses: degrees.iter().map(|d| d.witness.clone()).collect(),
            })),
            CiSpec::Weighted { weights, degrees } => {
                if !gwps::weights_well_formed(weights) {
                    return Ok(None);
                }
                let fan = gwps::fan_from_weights(weights)?;
                let cl = coxcl::class_group(&fan);
                let witnesses = degrees
                    .iter()
                    .map(|&d| cl.lift(&cl.class(vec![BigInt::from(d)], vec![])?))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Some(ToricView { fan, cl, witnesses }))
            }
        }
    }
}

fn check_codimension(n: usize, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidSpec("at least one hypersurface is required".into()));
    }
    if k >= n {
        return Err(Error::InvalidSpec(format!(
            "{k} hypersurfaces in dimension {n} do not cut out a positive-dimensional variety"
        )));
    }
    Ok(())
}

struct ToricView {
    fan: Fan,
    cl: ClassGroupData,
    witnesses: Vec<Vec<BigInt>>,
}

impl ToricView {
    fn ample_flags(&self) -> Vec<bool> {
        self.witnesses.iter().map(|w| coxcl::divisor_is_ample(&self.fan, w)).collect()
    }

    /// `-K_Y - Σ deg f_j` as the divisor `Σ D_i - Σ witness_j`.
    fn fano_witness(&self) -> Vec<BigInt> {
        let mut c = vec![BigInt::one(); self.fan.num_rays()];
        for w in &self.witnesses {
            for (x, y) in c.iter_mut().zip(w) {
                *x -= y;
            }
        }
        c
    }
}

/// Ranks of `H^i(Y, Q)` for `i = 0..=2N` of a complete simplicial fan.
///
/// Odd ranks vanish and `b_{2k}` is the `k`-th entry of the h-vector,
/// `h_k = Σ_{i ≥ k} (-1)^{i-k} C(i, k) f_{N-i}` with `f_j` the number of
/// `j`-dimensional cones.
pub fn ambient_betti(fan: &Fan) -> Vec<u64> {
    let n = fan.lattice_rank();
    let f = fan.f_vector();
    let mut betti = vec![0u64; 2 * n + 1];
    for k in 0..=n {
        let mut h = BigInt::zero();
        for i in k..=n {
            let term = binomial(i, k) * BigInt::from(f[n - i]);
            if (i - k) % 2 == 0 {
                h += term;
            } else {
                h -= term;
            }
        }
        betti[2 * k] = h.to_u64().expect("h-vector of a complete simplicial fan is nonnegative");
    }
    betti
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Rational Betti numbers of a complete intersection of ample hypersurfaces
/// forced by the Lefschetz hyperplane theorem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiPrediction {
    pub ambient: Vec<u64>,
    pub dim_x: usize,
    /// `b_i(X) = b_i(Y)` for `i < dim X`.
    pub below_middle: Vec<u64>,
    /// `b_{dim X}(X) ≥ b_{dim X}(Y)`.
    pub middle_lower_bound: u64,
}

impl BettiPrediction {
    pub const NOTE: &'static str =
        "ranks of rational cohomology; integral torsion is not compared";
}

pub fn lefschetz_predict(spec: &CiSpec) -> Result<BettiPrediction> {
    let ambient = match spec.toric_view()? {
        Some(view) => {
            if let Some(index) = view.ample_flags().iter().position(|a| !a) {
                return Err(Error::NotAmple {
                    index,
                    class: view.cl.class_of_divisor(&view.witnesses[index])?.to_string(),
                });
            }
            ambient_betti(&view.fan)
        }
        // Every positive degree is ample on a weighted projective space,
        // whose rational cohomology is that of projective space.
        None => projective_betti(spec.ambient_dim()),
    };
    let dim_x = spec.dim_x();
    Ok(BettiPrediction {
        below_middle: ambient[..dim_x].to_vec(),
        middle_lower_bound: ambient[dim_x],
        ambient,
        dim_x,
    })
}

fn projective_betti(n: usize) -> Vec<u64> {
    (0..=2 * n).map(|i| u64::from(i % 2 == 0)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PicardTransfer {
    /// `rk Pic(X) = rk Cl(Y)`.
    Equal(usize),
    /// `rk Pic(X) ≥ rk Cl(Y)`, and `rk Cl(X) ≥ rk Cl(Y)` when `X` is
    /// Q-factorial.
    AtLeast(usize),
}

impl fmt::Display for PicardTransfer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PicardTransfer::Equal(r) => write!(f, "rk Pic(X) = {r}"),
            PicardTransfer::AtLeast(r) => write!(f, "rk Pic(X) >= {r}"),
        }
    }
}

pub fn pic_rank_transfer(spec: &CiSpec) -> Result<PicardTransfer> {
    let dim_x = spec.dim_x();
    if dim_x <= 1 {
        return Err(Error::Unsupported(format!("Picard rank of a {dim_x}-dimensional intersection")));
    }
    lefschetz_predict(spec)?;
    let rank = match spec {
        CiSpec::Weighted { .. } => 1,
        CiSpec::Toric { fan, .. } => coxcl::class_group(fan).free_rank,
    };
    Ok(if dim_x >= 3 { PicardTransfer::Equal(rank) } else { PicardTransfer::AtLeast(rank) })
}

/// Whether some monomial in variables of the given weights has degree `d`.
pub fn monomial_exists(weights: &[u64], degree: u64, budget: u64) -> Result<bool> {
    if degree > budget {
        return Err(Error::BudgetExceeded { needed: degree.to_string(), budget });
    }
    let d = degree as usize;
    let mut reachable = vec![false; d + 1];
    reachable[0] = true;
    for t in 1..=d {
        reachable[t] = weights.iter().any(|&a| (a as usize) <= t && reachable[t - a as usize]);
    }
    Ok(reachable[d])
}

/// How a general complete intersection meets the locus where all
/// coordinates with weight prime to `modulus` vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumEvidence {
    pub modulus: u64,
    /// Coordinates whose weight is divisible by `modulus`.
    pub indices: Vec<usize>,
    pub stratum_dim: usize,
    /// Equations whose restriction to the stratum is not identically zero.
    pub cutting_equations: usize,
    /// `None` when the general intersection misses the stratum.
    pub intersection_dim: Option<usize>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WellFormedness {
    pub weights_well_formed: bool,
    pub dim_x: usize,
    pub strata: Vec<StratumEvidence>,
    pub well_formed: bool,
    pub caveats: Vec<String>,
}

/// Well-formedness of a general weighted complete intersection: the weights
/// are well formed and `X` meets every singular stratum in codimension ≥ 2.
pub fn wci_well_formed(weights: &WeightSystem, degrees: &[u64], budget: u64) -> Result<WellFormedness> {
    let a = weights.weights();
    let n = weights.dim();
    let dim_x = n.checked_sub(degrees.len()).filter(|&d| d > 0).ok_or_else(|| {
        Error::InvalidSpec(format!("{} equations in dimension {n}", degrees.len()))
    })?;
    let mut moduli: Vec<u64> = a
        .iter()
        .flat_map(|&w| (2..=w).filter(move |m| w % m == 0))
        .collect();
    moduli.sort_unstable();
    moduli.dedup();

    let mut strata = Vec::with_capacity(moduli.len());
    for m in moduli {
        let indices: Vec<usize> = (0..a.len()).filter(|&i| a[i].is_multiple_of(m)).collect();
        let sub: Vec<u64> = indices.iter().map(|&i| a[i]).collect();
        let stratum_dim = indices.len() - 1;
        let mut cutting = 0;
        for &d in degrees {
            if monomial_exists(&sub, d, budget)? {
                cutting += 1;
            }
        }
        let intersection_dim = stratum_dim.checked_sub(cutting);
        let ok = intersection_dim.is_none_or(|d| d + 2 <= dim_x);
        strata.push(StratumEvidence {
            modulus: m,
            indices,
            stratum_dim,
            cutting_equations: cutting,
            intersection_dim,
            ok,
        });
    }

    let weights_well_formed = gwps::weights_well_formed(weights);
    let mut caveats = Vec::new();
    if dim_x == 1 {
        caveats.push("X is a curve: well formed only if it misses the singular locus".to_string());
    }
    let well_formed = weights_well_formed && strata.iter().all(|s| s.ok);
    Ok(WellFormedness { weights_well_formed, dim_x, strata, well_formed, caveats })
}

/// `Σ a_i - Σ d_j`; positive exactly when a general quasi-smooth well formed
/// intersection is Fano.
pub fn fano_index(weights: &WeightSystem, degrees: &[u64]) -> i128 {
    weights.weights().iter().map(|&a| a as i128).sum::<i128>()
        - degrees.iter().map(|&d| d as i128).sum::<i128>()
}

/// Fano index on an ambient with `rk Cl(Y) = 1`, measured in the positive
/// generator of the free part.
fn rank_one_index(v: &ToricView) -> Option<i128> {
    if v.cl.free_rank != 1 {
        return None;
    }
    let class = v.cl.class_of_divisor(&v.fano_witness()).ok()?;
    let index = class.free[0].to_i128()?;
    Some(if v.cl.degree_map[0].free[0].is_negative() { -index } else { index })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Check {
    Pass,
    Fail,
    Unknown,
}

impl Check {
    fn from_bool(b: bool) -> Self {
        if b { Check::Pass } else { Check::Fail }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Check::Pass => "pass",
            Check::Fail => "fail",
            Check::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Hypothesis {
    QFactorial,
    Complete,
    Projective,
    AmpleAll,
    Fano,
    DimGe2,
    WellFormed,
    PicRankOnePredicted,
}

impl Hypothesis {
    pub const ALL: [Hypothesis; 8] = [
        Hypothesis::QFactorial,
        Hypothesis::Complete,
        Hypothesis::Projective,
        Hypothesis::AmpleAll,
        Hypothesis::Fano,
        Hypothesis::DimGe2,
        Hypothesis::WellFormed,
        Hypothesis::PicRankOnePredicted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Hypothesis::QFactorial => "q_factorial",
            Hypothesis::Complete => "complete",
            Hypothesis::Projective => "projective",
            Hypothesis::AmpleAll => "ample_all",
            Hypothesis::Fano => "fano",
            Hypothesis::DimGe2 => "dim_ge_2",
            Hypothesis::WellFormed => "well_formed",
            Hypothesis::PicRankOnePredicted => "pic_rank_one_predicted",
        }
    }
}

/// Hypotheses that degree data can never decide.
pub const UNVERIFIABLE: [&str; 2] = [
    "smoothness of X",
    "the equations form a regular sequence away from the irrelevant locus",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Conclusion {
    /// All checkable hypotheses hold and the ambient space is a weighted
    /// projective space, as the theorem requires of a smooth `X`.
    YMustBeWps,
    /// The ambient space is a nontrivial quotient of a weighted projective
    /// space and `X` is Fano and well formed: every such `X` is singular.
    NoSmoothWellFormedFanoCi,
    HypothesesNotMet(Vec<Hypothesis>),
    Inconclusive(Vec<Hypothesis>),
}

impl Conclusion {
    /// Short machine-readable form.
    pub fn tag(&self) -> String {
        let names = |hs: &[Hypothesis]| hs.iter().map(|h| h.name()).collect::<Vec<_>>().join(", ");
        match self {
            Conclusion::YMustBeWps => "Y-must-be-WPS".into(),
            Conclusion::NoSmoothWellFormedFanoCi => "no-smooth-well-formed-fano-ci".into(),
            Conclusion::HypothesesNotMet(hs) => format!("hypotheses-not-met: {}", names(hs)),
            Conclusion::Inconclusive(hs) => format!("inconclusive: {}", names(hs)),
        }
    }
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |hs: &[Hypothesis]| hs.iter().map(|h| h.name()).collect::<Vec<_>>().join(", ");
        match self {
            Conclusion::YMustBeWps => write!(
                f,
                "Y-must-be-WPS: hypotheses hold and Y is a weighted projective space (consistent)"
            ),
            Conclusion::NoSmoothWellFormedFanoCi => write!(
                f,
                "no smooth well formed Fano complete intersection exists here: Y is a nontrivial \
                 quotient of a weighted projective space, so any such X is singular"
            ),
            Conclusion::HypothesesNotMet(hs) => write!(f, "hypotheses-not-met: {}", names(hs)),
            Conclusion::Inconclusive(hs) => write!(f, "inconclusive: {}", names(hs)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremVerdict {
    pub flags: Vec<(Hypothesis, Check)>,
    pub conclusion: Conclusion,
    /// Hypotheses assumed rather than checked.
    pub assumptions: Vec<String>,
    pub dim_x: usize,
    pub class_group: Option<String>,
    pub classification: Option<GwpsClassification>,
    pub fano_index: Option<i128>,
    pub well_formedness: Option<WellFormedness>,
    pub betti: Option<BettiPrediction>,
    pub picard: Option<PicardTransfer>,
    pub notes: Vec<String>,
}

impl TheoremVerdict {
    pub fn check(&self, h: Hypothesis) -> Check {
        self.flags.iter().find(|(x, _)| *x == h).map_or(Check::Unknown, |(_, c)| *c)
    }
}

/// Evaluates every hypothesis of the theorem that degree data can decide and
/// draws the strongest conclusion they allow.
pub fn theorem_verdict(spec: &CiSpec, budget: u64) -> Result<TheoremVerdict> {
    let dim_x = spec.dim_x();
    let k = spec.codim();
    let view = spec.toric_view()?;
    let mut notes = Vec::new();
    let mut flags = Vec::new();

    let classification = match &view {
        Some(v) if gwps::is_gwps(&v.fan) => Some(gwps::classify(&v.fan)?),
        _ => None,
    };
    let is_quotient = classification.as_ref().is_some_and(|c| c.kind == GwpsKind::QuotientOfWps);

    let (complete, ample, fano, mut fano_index_value) = match &view {
        Some(v) => {
            let complete = fan::is_complete(&v.fan);
            let ample = v.ample_flags().iter().all(|&a| a);
            let fano = coxcl::divisor_is_ample(&v.fan, &v.fano_witness());
            (complete, ample, fano, None)
        }
        None => {
            let CiSpec::Weighted { weights, degrees } = spec else { unreachable!() };
            notes.push(format!("weights {:?} are not well formed", weights.weights()));
            let index = fano_index(weights, degrees);
            (true, true, index > 0, Some(index))
        }
    };
    if let CiSpec::Weighted { weights, degrees } = spec {
        let index = fano_index(weights, degrees);
        if view.is_some() && (index > 0) != fano {
            notes.push(format!("Fano index {index} disagrees with the ampleness test"));
        }
        fano_index_value = Some(index);
    }
    if fano_index_value.is_none() {
        fano_index_value = view.as_ref().and_then(rank_one_index);
    }

    flags.push((Hypothesis::QFactorial, Check::Pass));
    flags.push((Hypothesis::Complete, Check::from_bool(complete)));
    flags.push((Hypothesis::Projective, if ample || fano { Check::Pass } else { Check::Unknown }));
    flags.push((Hypothesis::AmpleAll, Check::from_bool(ample)));
    flags.push((Hypothesis::Fano, Check::from_bool(fano)));
    flags.push((Hypothesis::DimGe2, Check::from_bool(dim_x >= 2)));

    // Well-formedness: exact strata analysis on weighted projective spaces,
    // a dimension bound elsewhere.
    let weighted_data: Option<(WeightSystem, Vec<u64>)> = match spec {
        CiSpec::Weighted { weights, degrees } => Some((weights.clone(), degrees.clone())),
        CiSpec::Toric { degrees, .. } => match (&classification, &view) {
            (Some(c), Some(_)) if c.kind == GwpsKind::WeightedProjectiveSpace => {
                let ds: Option<Vec<u64>> = degrees.iter().map(|d| d.class.free[0].to_u64()).collect();
                ds.map(|ds| (c.weights.clone(), ds))
            }
            _ => None,
        },
    };
    let well_formedness = match &weighted_data {
        Some((w, ds)) => Some(wci_well_formed(w, ds, budget)?),
        None => None,
    };
    let well_formed = match (&well_formedness, &view) {
        (Some(wf), _) => Check::from_bool(wf.well_formed),
        (None, Some(v)) => {
            let sing = fan::singularity_report(&v.fan);
            match sing.singular_codim {
                None => Check::Pass,
                Some(c) if c > k + 1 => Check::Pass,
                Some(c) => {
                    notes.push(format!(
                        "singular locus has codimension {c}; well-formedness depends on the equations"
                    ));
                    Check::Unknown
                }
            }
        }
        (None, None) => Check::Unknown,
    };
    flags.push((Hypothesis::WellFormed, well_formed));

    let picard = if dim_x >= 2 && ample { Some(pic_rank_transfer(spec)?) } else { None };
    let pic_flag = match picard {
        Some(PicardTransfer::Equal(r)) => Check::from_bool(r == 1),
        Some(PicardTransfer::AtLeast(r)) if r >= 2 => Check::Fail,
        _ => Check::Unknown,
    };
    flags.push((Hypothesis::PicRankOnePredicted, pic_flag));

    let betti = if ample { Some(lefschetz_predict(spec)?) } else { None };

    let failed: Vec<Hypothesis> =
        flags.iter().filter(|(_, c)| *c == Check::Fail).map(|(h, _)| *h).collect();
    let unknown: Vec<Hypothesis> =
        flags.iter().filter(|(_, c)| *c == Check::Unknown).map(|(h, _)| *h).collect();
    let get = |h: Hypothesis| flags.iter().find(|(x, _)| *x == h).map(|(_, c)| *c);
    let proposition_applies = is_quotient
        && dim_x >= 1
        && get(Hypothesis::Complete) == Some(Check::Pass)
        && get(Hypothesis::AmpleAll) == Some(Check::Pass)
        && get(Hypothesis::Fano) == Some(Check::Pass)
        && get(Hypothesis::WellFormed) != Some(Check::Fail);

    let conclusion = if proposition_applies {
        if get(Hypothesis::WellFormed) == Some(Check::Unknown) {
            notes.push("the conclusion holds for those X that are well formed".into());
        }
        Conclusion::NoSmoothWellFormedFanoCi
    } else if !failed.is_empty() {
        Conclusion::HypothesesNotMet(failed)
    } else if !unknown.is_empty() {
        Conclusion::Inconclusive(unknown)
    } else {
        Conclusion::YMustBeWps
    };

    Ok(TheoremVerdict {
        flags,
        conclusion,
        assumptions: UNVERIFIABLE.iter().map(|s| s.to_string()).collect(),
        dim_x,
        class_group: view.as_ref().map(|v| v.cl.group_string()),
        classification,
        fano_index: fano_index_value,
        well_formedness,
        betti,
        picard,
        notes,
    })
}
