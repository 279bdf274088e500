//! The spec file format: one JSON document describing an algebra by
//! structure constants, plus named modules, complexes and torsion theories.
//! Everything is validated on load; diagnostics carry the offending field.

use anyhow::{anyhow, bail, Context};
use relhom_core::algmod::{Algebra, Module, Morphism};
use relhom_core::chx::Complex;
use relhom_core::fp::FpMatrix;
use relhom_core::torsion::{cogenerated_by, TorsionTheory};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SpecDocument {
    pub format_version: u32,
    pub prime: u64,
    pub algebra: AlgebraSpec,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub modules: BTreeMap<String, ModuleSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub complexes: BTreeMap<String, ComplexSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub torsion_theories: BTreeMap<String, TorsionTheorySpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AlgebraSpec {
    pub dim: usize,
    pub unit: Vec<u64>,
    /// Sparse structure constants: entries (i, j, k, value) meaning the
    /// coefficient of e_k in e_i * e_j.
    pub constants: Vec<(usize, usize, usize, u64)>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ModuleSpec {
    pub dim: usize,
    /// One dim x dim matrix per algebra basis element, row-major rows.
    pub action: Vec<Vec<Vec<u64>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ComplexSpec {
    pub lo: i64,
    /// Names of the entry modules from lowest degree up.
    pub modules: Vec<String>,
    /// Differential matrices (target rows x source columns), one per
    /// consecutive pair.
    pub differentials: Vec<Vec<Vec<u64>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum TorsionTheorySpec {
    Explicit { simples: Vec<usize> },
    Cogenerated { cogenerated_by: String },
}

/// Everything in the document, resolved and validated.
pub struct Resolved {
    pub algebra: Algebra,
    pub modules: BTreeMap<String, Module>,
    pub complexes: BTreeMap<String, Complex>,
    pub theories: BTreeMap<String, TorsionTheory>,
}

pub fn parse_spec(text: &str) -> anyhow::Result<SpecDocument> {
    let doc: SpecDocument = serde_json::from_str(text).context("PARSE_ERROR")?;
    if doc.format_version != FORMAT_VERSION {
        bail!("PARSE_ERROR: unsupported format version {}", doc.format_version);
    }
    Ok(doc)
}

pub fn resolve(doc: &SpecDocument) -> anyhow::Result<Resolved> {
    let d = doc.algebra.dim;
    let mut constants = vec![0u64; d * d * d];
    for &(i, j, k, v) in &doc.algebra.constants {
        if i >= d || j >= d || k >= d {
            bail!("VALIDATION_ERROR: structure constant ({i},{j},{k}) out of range");
        }
        constants[(i * d + j) * d + k] = v;
    }
    let algebra = Algebra::new(doc.prime, d, constants, doc.algebra.unit.clone())
        .map_err(|e| anyhow!("VALIDATION_ERROR: {e}"))?;
    let violations = algebra.validate();
    if let Some(v) = violations.first() {
        bail!("VALIDATION_ERROR: algebra invariant violated at {v:?}");
    }

    let mut modules = BTreeMap::new();
    for (name, spec) in &doc.modules {
        let mut action = Vec::with_capacity(spec.action.len());
        for (i, rows) in spec.action.iter().enumerate() {
            let m = FpMatrix::from_rows(doc.prime, rows)
                .map_err(|e| anyhow!("VALIDATION_ERROR: module {name}, action {i}: {e}"))?;
            action.push(m);
        }
        let module = Module::new(algebra.clone(), spec.dim, action)
            .map_err(|e| anyhow!("VALIDATION_ERROR: module {name}: {e}"))?;
        modules.insert(name.clone(), module);
    }

    let mut complexes = BTreeMap::new();
    for (name, spec) in &doc.complexes {
        let mut entries = Vec::with_capacity(spec.modules.len());
        for mname in &spec.modules {
            let m = modules
                .get(mname)
                .ok_or_else(|| anyhow!("VALIDATION_ERROR: complex {name} references unknown module {mname}"))?;
            entries.push(m.clone());
        }
        if spec.differentials.len() + 1 != spec.modules.len() && !spec.modules.is_empty() {
            bail!("VALIDATION_ERROR: complex {name} needs one differential per consecutive pair");
        }
        let mut diffs = Vec::with_capacity(spec.differentials.len());
        for (i, rows) in spec.differentials.iter().enumerate() {
            let m = FpMatrix::from_rows(doc.prime, rows)
                .map_err(|e| anyhow!("VALIDATION_ERROR: complex {name}, differential {i}: {e}"))?;
            let d = Morphism::new(entries[i].clone(), entries[i + 1].clone(), m)
                .map_err(|e| anyhow!("VALIDATION_ERROR: complex {name}, differential {i}: {e}"))?;
            diffs.push(d);
        }
        let complex = Complex::from_parts(algebra.clone(), spec.lo, entries, diffs)
            .map_err(|e| anyhow!("VALIDATION_ERROR: complex {name}: {e}"))?;
        complexes.insert(name.clone(), complex);
    }

    let mut theories = BTreeMap::new();
    for (name, spec) in &doc.torsion_theories {
        let tau = match spec {
            TorsionTheorySpec::Explicit { simples } => {
                TorsionTheory::new(algebra.clone(), simples.iter().copied().collect())
                    .map_err(|e| anyhow!("VALIDATION_ERROR: torsion theory {name}: {e}"))?
            }
            TorsionTheorySpec::Cogenerated { cogenerated_by: mname } => {
                let m = modules.get(mname).ok_or_else(|| {
                    anyhow!("VALIDATION_ERROR: torsion theory {name} references unknown module {mname}")
                })?;
                cogenerated_by(m)
                    .map_err(|e| anyhow!("VALIDATION_ERROR: torsion theory {name}: {e}"))?
            }
        };
        theories.insert(name.clone(), tau);
    }

    Ok(Resolved { algebra, modules, complexes, theories })
}

#[cfg_attr(not(test), allow(dead_code))] // round-trip contract, exercised by the tests
pub fn emit_spec(doc: &SpecDocument) -> String {
    serde_json::to_string_pretty(doc).expect("spec document serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_input_is_a_parse_error() {
        let err = parse_spec("").unwrap_err();
        assert!(err.to_string().contains("PARSE_ERROR"));
    }

    #[test]
    fn round_trip_is_stable() {
        let text = r#"{
            "format_version": 1,
            "prime": 2,
            "algebra": { "dim": 1, "unit": [1], "constants": [[0,0,0,1]] },
            "modules": { "k": { "dim": 1, "action": [[[1]]] } },
            "torsion_theories": { "tau0": { "simples": [] } }
        }"#;
        let doc = parse_spec(text).unwrap();
        let emitted = emit_spec(&doc);
        let doc2 = parse_spec(&emitted).unwrap();
        assert_eq!(doc, doc2);
        assert_eq!(emit_spec(&doc2), emitted);
    }

    #[test]
    fn broken_associativity_names_the_triple() {
        // the quiver algebra with the extra relation a*a = e1: then
        // (e2 a) a = e1 but e2 (a a) = 0
        let text = r#"{
            "format_version": 1,
            "prime": 2,
            "algebra": { "dim": 3, "unit": [1, 1, 0],
              "constants": [[0,0,0,1],[1,1,1,1],[1,2,2,1],[2,0,2,1],[2,2,0,1]] }
        }"#;
        let doc = parse_spec(text).unwrap();
        let msg = match resolve(&doc) {
            Err(e) => e.to_string(),
            Ok(_) => panic!("expected a validation error"),
        };
        assert!(msg.contains("VALIDATION_ERROR"), "{msg}");
        assert!(msg.contains("Associativity"), "{msg}");
    }
}
