//! Golden-value scorecard over the bundled corpus.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use toric_wci_core::coxcl;
use toric_wci_core::fan::{self, Fan};
use toric_wci_core::gwps::{self, WeightSystem};
use toric_wci_core::wci::{self, CiSpec};

use crate::format::{DegreeDocument, FanRef, Int, SpecDocument, ToricDegreeDocument};
use crate::{corpus, CliError, Options, Output, EXIT_OK, EXIT_VERIFY};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Anchor {
    pub id: String,
    /// The numbered statement the value comes from.
    pub source: String,
    pub expected: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenFile {
    pub anchors: Vec<Anchor>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnchorResult {
    pub anchor: Anchor,
    pub actual: Result<Value, String>,
}

impl AnchorResult {
    pub fn passed(&self) -> bool {
        self.actual.as_ref().is_ok_and(|a| *a == self.anchor.expected)
    }
}

pub fn parse_golden(text: &str, origin: &str) -> Result<GoldenFile, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::parse(origin, &e))
}

/// Corpus fans are validated once per process; anchors share them.
fn cached_fan(name: &str) -> Result<Fan, CliError> {
    static CACHE: OnceLock<Mutex<HashMap<String, Fan>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(f) = cache.lock().unwrap().get(name) {
        return Ok(f.clone());
    }
    let fan = corpus::fan(name)?;
    cache.lock().unwrap().insert(name.to_string(), fan.clone());
    Ok(fan)
}

fn spec_of(name: &str, budget: u64) -> Result<CiSpec, CliError> {
    let doc = corpus::spec(name).ok_or_else(|| CliError::Input(format!("no corpus spec {name:?}")))?;
    doc.to_spec(None, budget)
}

fn weights_json(fan: &Fan) -> Result<Value, CliError> {
    Ok(json!(gwps::weights_of(fan)?.weights()))
}

/// `Σ a_i v_i = 0` for the weights of the fan.
fn relation_holds(fan: &Fan) -> Result<bool, CliError> {
    let w = gwps::weights_of(fan)?;
    Ok((0..fan.lattice_rank()).all(|j| {
        let s: BigInt = (0..fan.num_rays()).map(|i| BigInt::from(w.weights()[i]) * &fan.ray(i)[j]).sum();
        s.is_zero()
    }))
}

fn every_subset_smooth(fan: &Fan, size: usize) -> bool {
    let b = fan.num_rays();
    (0u32..1 << b)
        .filter(|m| m.count_ones() as usize == size)
        .all(|m| fan::cone_is_smooth(fan, &(0..b).filter(|i| m >> i & 1 == 1).collect::<Vec<_>>()))
}

/// A Fano hypersurface in `P^3/(Z/5)`: the divisor `x_0 = 0`.
fn example2_spec() -> SpecDocument {
    SpecDocument {
        weights: None,
        fan: Some(FanRef::Path("corpus:example2".into())),
        degrees: vec![DegreeDocument::Toric(ToricDegreeDocument {
            witness: [1, 0, 0, 0].map(|x| Int(BigInt::from(x))).to_vec(),
            class: None,
        })],
    }
}

/// Computes the value an anchor checks.
pub fn evaluate(id: &str, budget: u64) -> Result<Value, CliError> {
    let parts: Vec<&str> = id.split('.').collect();
    let value = match parts.as_slice() {
        ["example1", "relation"] => {
            let mut ok = true;
            for name in ["p2", "p3", "p4"] {
                ok &= relation_holds(&cached_fan(name)?)?;
            }
            for w in [vec![1, 1, 2, 3], vec![1, 2, 3], vec![2, 3, 5, 7]] {
                let fan = gwps::fan_from_weights(&WeightSystem::new(w.clone())?)?;
                ok &= gwps::weights_of(&fan)?.weights() == w && relation_holds(&fan)?;
            }
            json!(ok)
        }
        ["example1", name, check] => fan_check(&cached_fan(name)?, check, budget)?,
        ["example2" | "example3", check] => fan_check(&cached_fan(parts[0])?, check, budget)?,
        ["example4", p, check] => {
            let p: usize = p
                .strip_prefix('p')
                .and_then(|p| p.parse().ok())
                .ok_or_else(|| CliError::Input(format!("unknown anchor {id}")))?;
            fan_check(&cached_fan(&format!("example4_p{p}"))?, check, budget)?
        }
        ["lemma", name, "gwps"] => json!(gwps::is_gwps(&cached_fan(name)?)),
        ["proposition", "example2", check] => {
            let spec = example2_spec().to_spec(None, budget)?;
            verdict_check(&spec, check, budget)?
        }
        ["closing", name, check] => verdict_check(&spec_of(name, budget)?, check, budget)?,
        _ => return Err(CliError::Input(format!("unknown anchor {id}"))),
    };
    Ok(value)
}

fn fan_check(fan: &Fan, check: &str, budget: u64) -> Result<Value, CliError> {
    let cl = || coxcl::class_group(fan);
    Ok(match check {
        "weights" => weights_json(fan)?,
        "class_group" => json!(cl().group_string()),
        "torsion" => json!(cl().torsion.iter().map(|d| d.to_i64()).collect::<Vec<_>>()),
        "group_d" => json!(coxcl::group_d(&cl()).to_string()),
        "d_connected" => json!(coxcl::group_d(&cl()).is_connected()),
        "classification" => json!(gwps::classify(fan)?.to_string()),
        "irrelevant_origin" => json!(coxcl::irrelevant_locus(fan).is_origin(fan.num_rays())),
        "terminal" => json!(fan::singularity_report_with_terminal(fan, budget)?.terminal),
        "isolated" => json!(fan::singularity_report(fan).isolated),
        "sum_zero" => json!((0..fan.lattice_rank())
            .all(|j| (0..fan.num_rays()).map(|i| fan.ray(i)[j].clone()).sum::<BigInt>().is_zero())),
        "smooth_3_subsets" => json!(every_subset_smooth(fan, 3)),
        "picard_rank" => json!(cl().free_rank),
        _ => return Err(CliError::Input(format!("unknown fan check {check}"))),
    })
}

fn verdict_check(spec: &CiSpec, check: &str, budget: u64) -> Result<Value, CliError> {
    let v = wci::theorem_verdict(spec, budget)?;
    Ok(match check {
        "conclusion" => json!(v.conclusion.tag()),
        "fano_index" => json!(v.fano_index.map(|i| i as i64)),
        "picard" => json!(v.picard.map(|p| p.to_string())),
        "dim_x" => json!(v.dim_x),
        flag => {
            let h = wci::Hypothesis::ALL
                .into_iter()
                .find(|h| h.name() == flag)
                .ok_or_else(|| CliError::Input(format!("unknown verdict check {check}")))?;
            json!(v.check(h).as_str())
        }
    })
}

/// Evaluates the selected anchors concurrently; results keep golden order.
pub fn run(golden: &GoldenFile, filter: Option<&str>, budget: u64) -> Vec<AnchorResult> {
    golden
        .anchors
        .par_iter()
        .filter(|a| filter.is_none_or(|f| a.id.contains(f)))
        .map(|a| AnchorResult {
            anchor: a.clone(),
            actual: evaluate(&a.id, budget).map_err(|e| e.to_string()),
        })
        .collect()
}

fn compact(v: &Value) -> String {
    serde_json::to_string(v).unwrap()
}

pub fn cmd_verify_paper(golden_override: Option<&str>, opts: &Options) -> Result<Output, CliError> {
    let golden = match golden_override {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
            parse_golden(&text, path)?
        }
        None => parse_golden(corpus::GOLDEN, "golden.json")?,
    };
    let results = run(&golden, opts.filter.as_deref(), opts.budget);
    let passed = results.iter().filter(|r| r.passed()).count();
    let failed = results.len() - passed;
    let code = if failed == 0 { EXIT_OK } else { EXIT_VERIFY };

    if opts.json {
        let anchors: Vec<Value> = results
            .iter()
            .map(|r| {
                json!({
                    "id": r.anchor.id,
                    "source": r.anchor.source,
                    "expected": r.anchor.expected,
                    "actual": r.actual.as_ref().ok(),
                    "error": r.actual.as_ref().err(),
                    "pass": r.passed(),
                })
            })
            .collect();
        let doc = json!({ "anchors": anchors, "passed": passed, "failed": failed });
        return Ok(Output { text: serde_json::to_string_pretty(&doc).unwrap() + "\n", code });
    }

    let width = results.iter().map(|r| r.anchor.id.len()).max().unwrap_or(0);
    let mut s = String::new();
    for r in &results {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        write!(s, "{status}  {:<width$}  {:<10}", r.anchor.id, r.anchor.source).unwrap();
        match (&r.actual, r.passed()) {
            (Ok(a), true) => writeln!(s, "  {}", compact(a)),
            (Ok(a), false) => {
                writeln!(s, "  expected {}, got {}", compact(&r.anchor.expected), compact(a))
            }
            (Err(e), _) => writeln!(s, "  expected {}, error: {e}", compact(&r.anchor.expected)),
        }
        .unwrap();
    }
    writeln!(s, "{passed}/{} anchors pass", results.len()).unwrap();
    Ok(Output { text: s, code })
}
