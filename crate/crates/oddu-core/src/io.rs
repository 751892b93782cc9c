//! JSON schemas for rings, V₀ spaces, elements and form ideals.

use crate::error::{OdduError, Result};
use crate::group::UElem;
use crate::heisenberg::{close_form_parameter, lmax, lmin, AHSpace, HElem};
use crate::ideals::{close_relative, mmax, mmin, OddFormIdeal};
use crate::matrix::Mat;
use crate::quadratic::OddQuadSpace;
use crate::ring::{Ideal, PseudoRing};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum RingSpec {
    Zmod { modulus: u64, lambda: u64 },
}

impl RingSpec {
    pub fn build(&self) -> Result<PseudoRing> {
        match *self {
            RingSpec::Zmod { modulus, lambda } => PseudoRing::new(modulus, lambda),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamMode {
    Min,
    Max,
    Generated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub v: Vec<i64>,
    pub x: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamSpec {
    pub mode: ParamMode,
    #[serde(default)]
    pub generators: Vec<GeneratorSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct V0Spec {
    pub rank: usize,
    pub gram: Vec<Vec<i64>>,
    pub form_param: ParamSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementSpec {
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormIdealSpec {
    pub ideal: u64,
    pub m0: ParamSpec,
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| OdduError::Config(format!("{}: {e}", path.display())))
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| OdduError::Config(format!("{what}: {e}")))
}

/// `zmod:m:λ`, inline JSON, or a path to a JSON file.
pub fn parse_ring_arg(arg: &str) -> Result<PseudoRing> {
    if let Some(rest) = arg.strip_prefix("zmod:") {
        let parts: Vec<&str> = rest.split(':').collect();
        let num = |s: &str| s.trim().parse::<u64>().map_err(|_| OdduError::Config(format!("bad ring shorthand {arg:?}")));
        if parts.len() != 2 {
            return Err(OdduError::Config(format!("ring shorthand must be zmod:m:lambda, got {arg:?}")));
        }
        return PseudoRing::new(num(parts[0])?, num(parts[1])?);
    }
    let text = if arg.trim_start().starts_with('{') { arg.to_string() } else { read_file(Path::new(arg))? };
    parse_json::<RingSpec>(&text, "ring")?.build()
}

fn helem(ring: &PseudoRing, g: &GeneratorSpec) -> HElem {
    HElem::new(g.v.iter().map(|&c| ring.reduce(c)).collect(), ring.reduce(g.x))
}

/// The space H³ ⊥ V₀; `None` gives V₀ = 0 with 𝔏₀ = L_max.
pub fn build_space(ring: PseudoRing, n: usize, v0: Option<&V0Spec>) -> Result<OddQuadSpace> {
    let Some(spec) = v0 else {
        return OddQuadSpace::with_lmax(n, AHSpace::zero_rank(ring));
    };
    if spec.gram.len() != spec.rank {
        return Err(OdduError::DimensionMismatch { expected: spec.rank, got: spec.gram.len() });
    }
    let ah = AHSpace::new(ring, spec.gram.clone())?;
    let l0 = match spec.form_param.mode {
        ParamMode::Min => lmin(&ah),
        ParamMode::Max => lmax(&ah),
        ParamMode::Generated => {
            let gens: Vec<HElem> = spec.form_param.generators.iter().map(|g| helem(&ring, g)).collect();
            close_form_parameter(&ah, &gens)?
        }
    };
    OddQuadSpace::new(n, ah, l0)
}

pub fn parse_element(s: &OddQuadSpace, text: &str) -> Result<UElem> {
    let spec: ElementSpec = parse_json(text, "element")?;
    let m = Mat::from_rows(s.ring(), &spec.matrix)?;
    if m.dim() != s.dim() {
        return Err(OdduError::DimensionMismatch { expected: s.dim(), got: m.dim() });
    }
    UElem::new(s, m)
}

pub fn element_to_json(sigma: &UElem) -> Value {
    json!({ "matrix": sigma.mat().rows() })
}

pub fn parse_form_ideal(s: &OddQuadSpace, text: &str) -> Result<OddFormIdeal> {
    let spec: FormIdealSpec = parse_json(text, "form ideal")?;
    let ideal = Ideal::principal(s.ring(), spec.ideal);
    match spec.m0.mode {
        ParamMode::Min => Ok(OddFormIdeal::min(s, ideal)),
        ParamMode::Max => Ok(OddFormIdeal::max(s, ideal)),
        ParamMode::Generated => {
            let gens: Vec<HElem> = spec.m0.generators.iter().map(|g| helem(s.ring(), g)).collect();
            if let Some(g) = gens.iter().find(|g| g.v.len() != s.rank()) {
                return Err(OdduError::DimensionMismatch { expected: s.rank(), got: g.v.len() });
            }
            close_relative(s, ideal, &gens)
        }
    }
}

/// Greedy generating list of 𝔐₀ over 𝔐_min.
fn m0_generators(s: &OddQuadSpace, j0: &OddFormIdeal) -> Vec<HElem> {
    let mut gens: Vec<HElem> = Vec::new();
    let mut span: BTreeSet<HElem> = mmin(s, j0.ideal);
    for a in &j0.m0 {
        if !span.contains(a) {
            gens.push(a.clone());
            span = s.v0().close_subgroup(span.into_iter().chain(std::iter::once(a.clone())));
        }
    }
    gens
}

/// {"ideal":d,"m0":"min"|"max"|{"mode":"generated","generators":[…]}}, with d = 0 for the
/// zero ideal.
pub fn form_ideal_to_json(s: &OddQuadSpace, j0: &OddFormIdeal) -> Value {
    let d = j0.ideal.generator() % s.ring().modulus();
    let m0 = if j0.m0 == mmin(s, j0.ideal) {
        json!("min")
    } else if j0.m0 == mmax(s, j0.ideal) {
        json!("max")
    } else {
        let gens: Vec<Value> = m0_generators(s, j0).iter().map(|g| json!({"v": g.v, "x": g.x})).collect();
        json!({"mode": "generated", "generators": gens})
    };
    json!({ "ideal": d, "m0": m0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transvections::{gen_mat, ElemGen};

    #[test]
    fn ring_arguments() {
        let r = parse_ring_arg("zmod:8:3").unwrap();
        assert_eq!((r.modulus(), r.lambda()), (8, 3));
        let r = parse_ring_arg(r#"{"type":"zmod","modulus":8,"lambda":3}"#).unwrap();
        assert_eq!((r.modulus(), r.lambda()), (8, 3));
        assert!(matches!(parse_ring_arg("zmod:8"), Err(OdduError::Config(_))));
        assert!(matches!(parse_ring_arg("zmod:8:2"), Err(OdduError::NotPseudoinvolution { .. })));
        assert!(matches!(parse_ring_arg("/nonexistent/ring.json"), Err(OdduError::Config(_))));
    }

    #[test]
    fn v0_and_ideal_schemas() {
        let ring = PseudoRing::new(5, 1).unwrap();
        let spec: V0Spec =
            parse_json(r#"{"rank":2,"gram":[[0,1],[4,0]],"form_param":{"mode":"max"}}"#, "v0").unwrap();
        let s = build_space(ring, 3, Some(&spec)).unwrap();
        assert_eq!(s.dim(), 8);
        let j0 = parse_form_ideal(&s, r#"{"ideal":0,"m0":{"mode":"min"}}"#).unwrap();
        assert_eq!(form_ideal_to_json(&s, &j0), json!({"ideal":0,"m0":"min"}));
        let gen = parse_json::<V0Spec>(
            r#"{"rank":1,"gram":[[0]],"form_param":{"mode":"generated","generators":[{"v":[1],"x":3}]}}"#,
            "v0",
        );
        assert!(gen.is_ok());
    }

    #[test]
    fn element_roundtrip_and_level_label() {
        let ring = PseudoRing::new(4, 1).unwrap();
        let s = build_space(ring, 3, None).unwrap();
        let t = UElem::from_mat_unchecked(gen_mat(&s, &ElemGen::short(1, 2, 2)));
        let text = element_to_json(&t).to_string();
        assert_eq!(parse_element(&s, &text).unwrap(), t);
        assert!(matches!(parse_element(&s, r#"{"matrix":[[1]]}"#), Err(OdduError::DimensionMismatch { .. })));
        let j0 = crate::extraction::level_of(&s, &t).unwrap();
        assert_eq!(form_ideal_to_json(&s, &j0), json!({"ideal":2,"m0":"min"}));
    }
}
