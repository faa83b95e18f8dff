//! Bundled example fans and specs.

use num_bigint::BigInt;
use num_rational::BigRational;

use toric_wci_core::fan::Fan;

use crate::format::{self, FanDocument, SpecDocument};
use crate::CliError;

pub const FAN_FILES: &[(&str, &str)] = &[
    ("p2", include_str!("../corpus/p2.fan")),
    ("p3", include_str!("../corpus/p3.fan")),
    ("p4", include_str!("../corpus/p4.fan")),
    ("p1xp1", include_str!("../corpus/p1xp1.fan")),
    ("example2", include_str!("../corpus/example2.fan")),
    ("example3", include_str!("../corpus/example3.fan")),
];

pub const EXAMPLE4_PRIMES: [usize; 3] = [3, 5, 7];

pub const SPEC_FILES: &[(&str, &str)] = &[
    ("curve_p1xp1", include_str!("../corpus/curve_p1xp1.spec")),
    ("not_fano_example4", include_str!("../corpus/not_fano_example4.spec")),
    ("hyperplane_example4", include_str!("../corpus/hyperplane_example4.spec")),
    ("x6", include_str!("../corpus/x6.spec")),
    ("quintic", include_str!("../corpus/quintic.spec")),
];

pub const GOLDEN: &str = include_str!("../corpus/golden.json");

/// Names of every corpus fan, including the generated `example4_p*`.
pub fn fan_names() -> Vec<String> {
    FAN_FILES
        .iter()
        .map(|(n, _)| n.to_string())
        .chain(EXAMPLE4_PRIMES.iter().map(|p| format!("example4_p{p}")))
        .collect()
}

pub fn fan_document(name: &str) -> Option<FanDocument> {
    if let Some((_, text)) = FAN_FILES.iter().find(|(n, _)| *n == name) {
        return Some(format::parse_fan(text, name).expect("bundled fan parses"));
    }
    let p: usize = name.strip_prefix("example4_p")?.parse().ok()?;
    Some(example4_document(p))
}

pub fn fan(name: &str) -> Result<Fan, CliError> {
    fan_document(name)
        .ok_or_else(|| CliError::Input(format!("no corpus fan named {name:?}")))?
        .to_fan()
}

pub fn spec(name: &str) -> Option<SpecDocument> {
    let (_, text) = SPEC_FILES.iter().find(|(n, _)| *n == name)?;
    Some(format::parse_spec(text, name).expect("bundled spec parses"))
}

/// `P^{p-1}/(Z/p)` with `x_i ↦ ε^i x_i`: the fan of `P^{p-1}` with rays
/// `v_0 = -(e_1 + … + e_{p-1})`, `v_i = e_i`, on the lattice generated by
/// `Z^{p-1}` and `(1/p)(1, 2, …, p-1)`.
pub fn example4_document(p: usize) -> FanDocument {
    assert!(p >= 2);
    let n = p - 1;
    let mut rays = vec![vec![-1i64; n]];
    rays.extend((0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()));
    let cones = (0..p).map(|skip| (0..p).filter(|&i| i != skip).collect()).collect();
    let int = |x: usize| format::Int(BigInt::from(x));
    FanDocument {
        lattice_rank: n,
        rays: rays.iter().map(|r| r.iter().map(|&x| format::Int(x.into())).collect()).collect(),
        max_cones: cones,
        superlattice: Some(vec![(1..p).map(|i| [int(i), int(p)]).collect()]),
    }
}

pub fn example4(p: usize) -> Result<Fan, CliError> {
    example4_document(p).to_fan()
}

/// The superlattice generator of [`example4_document`].
pub fn example4_generator(p: usize) -> Vec<BigRational> {
    (1..p).map(|i| BigRational::new(BigInt::from(i), BigInt::from(p))).collect()
}
