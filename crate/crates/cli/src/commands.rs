use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use toric_wci_core::coxcl::{self, ClassGroupData, DivisorClass, IrrelevantLocus};
use toric_wci_core::fan::{self, Fan, SingularityReport};
use toric_wci_core::gwps::{self, GwpsClassification, GwpsKind};
use toric_wci_core::wci::{self, BettiPrediction, CiSpec, TheoremVerdict, WellFormedness};

use crate::format::{self, FanDocument, Int, SpecDocument};
use crate::{corpus, CliError, Options, Output};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

struct Input {
    text: String,
    origin: String,
    base: Option<PathBuf>,
}

fn read_input(file: &str) -> Result<Input, CliError> {
    if let Some(name) = file.strip_prefix("corpus:") {
        let text = if let Some((_, t)) = corpus::SPEC_FILES.iter().find(|(n, _)| *n == name) {
            t.to_string()
        } else {
            let doc = corpus::fan_document(name)
                .ok_or_else(|| CliError::Input(format!("no corpus entry named {name:?}")))?;
            serde_json::to_string_pretty(&doc).expect("serializable")
        };
        return Ok(Input { text, origin: file.to_string(), base: None });
    }
    let path = Path::new(file);
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{file}: {e}")))?;
    Ok(Input { text, origin: file.to_string(), base: path.parent().map(Path::to_path_buf) })
}

pub fn load_fan(file: &str) -> Result<Fan, CliError> {
    let input = read_input(file)?;
    format::parse_fan(&input.text, &input.origin)?.to_fan()
}

/// The spec with its fan reference inlined, and the parsed ambient.
pub fn load_spec(file: &str, budget: u64) -> Result<(SpecDocument, CiSpec), CliError> {
    let input = read_input(file)?;
    let doc = format::parse_spec(&input.text, &input.origin)?.resolved(input.base.as_deref())?;
    let spec = doc.to_spec(None, budget)?;
    Ok((doc, spec))
}

fn big(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(|x| serde_json::to_value(Int(x.clone())).unwrap()).collect())
}

fn class_json(c: &DivisorClass) -> Value {
    json!({ "free": big(&c.free), "torsion": big(&c.torsion) })
}

fn render(opts: &Options, value: &Value, human: String) -> Output {
    if opts.json {
        Output::ok(serde_json::to_string_pretty(value).unwrap() + "\n")
    } else {
        Output::ok(human)
    }
}

fn variable_set(idx: &[usize]) -> String {
    idx.iter().map(|i| format!("x{i}")).collect::<Vec<_>>().join(", ")
}

fn locus_string(z: &IrrelevantLocus, b: usize) -> String {
    if z.is_origin(b) {
        return "{0}".into();
    }
    z.components.iter().map(|c| format!("V({})", variable_set(c))).collect::<Vec<_>>().join(" ∪ ")
}

fn cl_json(cl: &ClassGroupData, z: &IrrelevantLocus) -> Value {
    let d = coxcl::group_d(cl);
    json!({
        "class_group": {
            "free_rank": cl.free_rank,
            "torsion": big(&cl.torsion),
            "text": cl.group_string(),
        },
        "group_d": {
            "torus_rank": d.torus_rank,
            "finite_part": big(&d.finite_part),
            "connected": d.is_connected(),
            "text": d.to_string(),
        },
        "grading": cl.degree_map.iter().map(class_json).collect::<Vec<_>>(),
        "irrelevant_locus": {
            "generators": z.generators,
            "components": z.components,
            "is_origin": z.is_origin(cl.num_variables()),
        },
    })
}

pub fn cmd_cl(file: &str, opts: &Options) -> Result<Output, CliError> {
    let fan = load_fan(file)?;
    let cl = coxcl::class_group(&fan);
    let z = coxcl::irrelevant_locus(&fan);
    let d = coxcl::group_d(&cl);
    let mut s = String::new();
    let weights: Option<Vec<String>> = (cl.free_rank == 1 && cl.torsion.is_empty())
        .then(|| cl.degree_map.iter().map(|c| c.free[0].to_string()).collect());
    match weights {
        Some(w) => {
            writeln!(s, "Cl = {}; weights grading ({})", cl.group_string(), w.join(",")).unwrap();
            writeln!(s, "D = {d}").unwrap();
        }
        None => writeln!(s, "Cl = {}; D = {d}", cl.group_string()).unwrap(),
    }
    writeln!(s, "grading:").unwrap();
    for (i, c) in cl.degree_map.iter().enumerate() {
        writeln!(s, "  deg x{i} = {c}").unwrap();
    }
    writeln!(s, "irrelevant locus Z = {}", locus_string(&z, fan.num_rays())).unwrap();
    Ok(render(opts, &cl_json(&cl, &z), s))
}

fn singularity_json(r: &SingularityReport) -> Value {
    json!({
        "smooth": r.is_smooth(),
        "singular_codim": r.singular_codim,
        "isolated": r.isolated,
        "terminal": r.terminal,
        "singular_cones": r.singular_cones().map(|c| json!({
            "cone": c.cone,
            "multiplicity": serde_json::to_value(Int(c.multiplicity.clone())).unwrap(),
        })).collect::<Vec<_>>(),
    })
}

fn classification_json(c: &GwpsClassification) -> Value {
    json!({
        "kind": match c.kind {
            GwpsKind::WeightedProjectiveSpace => "weighted-projective-space",
            GwpsKind::QuotientOfWps => "quotient-of-wps",
        },
        "weights": c.weights.weights(),
        "quotient_group": big(&c.quotient_group),
        "text": c.to_string(),
    })
}

pub const NOT_GWPS: &str = "not a generalized weighted projective space (b ≠ N+1)";

pub fn cmd_classify(file: &str, opts: &Options) -> Result<Output, CliError> {
    let fan = load_fan(file)?;
    if !gwps::is_gwps(&fan) {
        let value = json!({ "gwps": false, "rays": fan.num_rays(), "lattice_rank": fan.lattice_rank() });
        let human = format!("{NOT_GWPS}: b = {}, N = {}\n", fan.num_rays(), fan.lattice_rank());
        return Ok(render(opts, &value, human));
    }
    let c = gwps::classify(&fan)?;
    let sing = fan::singularity_report_with_terminal(&fan, opts.budget)?;
    let mut value = classification_json(&c);
    value["gwps"] = json!(true);
    value["singularities"] = singularity_json(&sing);
    let mut s = format!("{c}\n");
    if sing.is_smooth() {
        writeln!(s, "smooth").unwrap();
    } else {
        writeln!(
            s,
            "singular locus: codimension {}, isolated: {}, terminal: {}",
            sing.singular_codim.unwrap(),
            yes_no(sing.isolated),
            sing.terminal.map_or("not checked", yes_no)
        )
        .unwrap();
        for cone in sing.singular_cones() {
            writeln!(s, "  cone {:?} multiplicity {}", cone.cone, cone.multiplicity).unwrap();
        }
    }
    Ok(render(opts, &value, s))
}

fn yes_no(b: bool) -> &'static str {
    if b { "yes" } else { "no" }
}

fn wf_json(wf: &WellFormedness) -> Value {
    json!({
        "weights_well_formed": wf.weights_well_formed,
        "dim_x": wf.dim_x,
        "well_formed": wf.well_formed,
        "caveats": wf.caveats,
        "strata": wf.strata.iter().map(|s| json!({
            "modulus": s.modulus,
            "indices": s.indices,
            "stratum_dim": s.stratum_dim,
            "cutting_equations": s.cutting_equations,
            "intersection_dim": s.intersection_dim,
            "ok": s.ok,
        })).collect::<Vec<_>>(),
    })
}

fn wf_text(wf: &WellFormedness, s: &mut String) {
    if !wf.weights_well_formed {
        writeln!(s, "weights not well formed").unwrap();
    }
    for st in &wf.strata {
        let meet = match st.intersection_dim {
            None => "missed".to_string(),
            Some(d) => format!("meets X in dimension {d}"),
        };
        writeln!(
            s,
            "  m = {}: {{{}}}, stratum dim {}, {} equation(s) cut it, {meet}  [{}]",
            st.modulus,
            variable_set(&st.indices),
            st.stratum_dim,
            st.cutting_equations,
            if st.ok { "ok" } else { "too large" }
        )
        .unwrap();
    }
    for c in &wf.caveats {
        writeln!(s, "caveat: {c}").unwrap();
    }
}

pub fn cmd_wf(file: &str, opts: &Options) -> Result<Output, CliError> {
    let (_, spec) = load_spec(file, opts.budget)?;
    let mut s = String::new();
    let value = match &spec {
        CiSpec::Weighted { weights, degrees } => {
            let wf = wci::wci_well_formed(weights, degrees, opts.budget)?;
            let index = wci::fano_index(weights, degrees);
            let ds: Vec<String> = degrees.iter().map(u64::to_string).collect();
            writeln!(s, "X_{{{}}} in {weights}, dim X = {}", ds.join(","), wf.dim_x).unwrap();
            wf_text(&wf, &mut s);
            writeln!(s, "well formed: {}", yes_no(wf.well_formed)).unwrap();
            writeln!(s, "Fano index: {index} ({})", if index > 0 { "Fano" } else { "not Fano" }).unwrap();
            json!({ "well_formedness": wf_json(&wf), "fano_index": index, "fano": index > 0 })
        }
        CiSpec::Toric { .. } => {
            let v = wci::theorem_verdict(&spec, opts.budget)?;
            let wf = v.check(wci::Hypothesis::WellFormed);
            let fano = v.check(wci::Hypothesis::Fano);
            writeln!(s, "dim X = {}", v.dim_x).unwrap();
            if let Some(w) = &v.well_formedness {
                wf_text(w, &mut s);
            }
            writeln!(s, "well formed: {}", wf.as_str()).unwrap();
            writeln!(s, "Fano: {}", fano.as_str()).unwrap();
            if let Some(i) = v.fano_index {
                writeln!(s, "Fano index: {i}").unwrap();
            }
            for n in &v.notes {
                writeln!(s, "note: {n}").unwrap();
            }
            json!({
                "well_formed": wf.as_str(),
                "well_formedness": v.well_formedness.as_ref().map(wf_json),
                "fano": fano.as_str(),
                "fano_index": v.fano_index,
            })
        }
    };
    Ok(render(opts, &value, s))
}

fn betti_json(b: &BettiPrediction) -> Value {
    json!({
        "ambient_betti": b.ambient,
        "dim_x": b.dim_x,
        "ci_betti_low": b.below_middle,
        "middle_lower_bound": b.middle_lower_bound,
        "note": BettiPrediction::NOTE,
    })
}

fn betti_text(b: &BettiPrediction, s: &mut String) {
    let amb: Vec<String> = b.ambient.iter().map(u64::to_string).collect();
    writeln!(s, "ambient b_0..b_{}: {}", b.ambient.len() - 1, amb.join(" ")).unwrap();
    let mut parts: Vec<String> =
        b.below_middle.iter().enumerate().map(|(i, x)| format!("b_{i} = {x}")).collect();
    parts.push(format!("b_{} >= {}", b.dim_x, b.middle_lower_bound));
    writeln!(s, "X (dim {}): {}", b.dim_x, parts.join(", ")).unwrap();
    writeln!(s, "note: {}", BettiPrediction::NOTE).unwrap();
}

pub fn cmd_betti(file: &str, opts: &Options) -> Result<Output, CliError> {
    let input = read_input(file)?;
    let raw: Value =
        serde_json::from_str(&input.text).map_err(|e| CliError::parse(&input.origin, &e))?;
    let mut s = String::new();
    if raw.get("rays").is_some() {
        let fan = format::parse_fan(&input.text, &input.origin)?.to_fan()?;
        let b = wci::ambient_betti(&fan);
        let amb: Vec<String> = b.iter().map(u64::to_string).collect();
        writeln!(s, "b_0..b_{}: {}", b.len() - 1, amb.join(" ")).unwrap();
        return Ok(render(opts, &json!({ "ambient_betti": b }), s));
    }
    let (_, spec) = load_spec(file, opts.budget)?;
    let b = wci::lefschetz_predict(&spec)?;
    betti_text(&b, &mut s);
    let mut value = betti_json(&b);
    if b.dim_x >= 2 {
        let p = wci::pic_rank_transfer(&spec)?;
        writeln!(s, "{p}").unwrap();
        value["picard"] = json!(p.to_string());
    } else {
        writeln!(s, "no Picard prediction for dim X = {}", b.dim_x).unwrap();
    }
    Ok(render(opts, &value, s))
}

pub fn digest(doc: &SpecDocument) -> String {
    let canonical = serde_json::to_string(doc).expect("serializable");
    format!("sha256:{}", hex::encode(Sha256::digest(canonical.as_bytes())))
}

pub fn verdict_json(doc: &SpecDocument, v: &TheoremVerdict) -> Value {
    let flags: serde_json::Map<String, Value> =
        v.flags.iter().map(|(h, c)| (h.name().to_string(), json!(c.as_str()))).collect();
    let (tag_hyps, kind) = match &v.conclusion {
        wci::Conclusion::HypothesesNotMet(hs) => (hs.clone(), "hypotheses-not-met"),
        wci::Conclusion::Inconclusive(hs) => (hs.clone(), "inconclusive"),
        wci::Conclusion::YMustBeWps => (vec![], "Y-must-be-WPS"),
        wci::Conclusion::NoSmoothWellFormedFanoCi => (vec![], "no-smooth-well-formed-fano-ci"),
    };
    json!({
        "tool_version": TOOL_VERSION,
        "input_digest": digest(doc),
        "dim_x": v.dim_x,
        "flags": flags,
        "assumptions": v.assumptions,
        "class_group": v.class_group,
        "classification": v.classification.as_ref().map(classification_json),
        "fano_index": v.fano_index,
        "well_formedness": v.well_formedness.as_ref().map(wf_json),
        "betti": v.betti.as_ref().map(betti_json),
        "picard": v.picard.map(|p| p.to_string()),
        "conclusion": {
            "kind": kind,
            "hypotheses": tag_hyps.iter().map(|h| h.name()).collect::<Vec<_>>(),
            "tag": v.conclusion.tag(),
            "text": v.conclusion.to_string(),
        },
        "notes": v.notes,
    })
}

pub fn cmd_verdict(file: &str, opts: &Options) -> Result<Output, CliError> {
    let (doc, spec) = load_spec(file, opts.budget)?;
    let v = wci::theorem_verdict(&spec, opts.budget)?;
    let mut s = String::new();
    writeln!(s, "dim X = {}", v.dim_x).unwrap();
    if let Some(cg) = &v.class_group {
        writeln!(s, "Cl(Y) = {cg}").unwrap();
    }
    if let Some(c) = &v.classification {
        writeln!(s, "Y: {c}").unwrap();
    }
    if let Some(i) = v.fano_index {
        writeln!(s, "Fano index: {i}").unwrap();
    }
    writeln!(s, "hypotheses:").unwrap();
    for (h, c) in &v.flags {
        writeln!(s, "  {:<24} {}", h.name(), c.as_str()).unwrap();
    }
    for a in &v.assumptions {
        writeln!(s, "  assumed, not checked: {a}").unwrap();
    }
    if let Some(b) = &v.betti {
        betti_text(b, &mut s);
    }
    if let Some(p) = v.picard {
        writeln!(s, "{p}").unwrap();
    }
    for n in &v.notes {
        writeln!(s, "note: {n}").unwrap();
    }
    writeln!(s, "conclusion: {}", v.conclusion).unwrap();
    Ok(render(opts, &verdict_json(&doc, &v), s))
}

/// Serializes a fan for re-parsing.
pub fn fan_to_json(fan: &Fan) -> String {
    serde_json::to_string_pretty(&FanDocument::from_fan(fan)).expect("serializable")
}
