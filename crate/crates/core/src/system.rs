//! The JSON system file: universes, fuzzy sets, one rule, and the inputs.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{Implication, Negation, ResiduatedTNorm, TNorm};
use crate::equivalence::RefSpec;
use crate::error::{Error, Result};
use crate::fuzzyset::{FuzzySet, Universe};
use crate::render::parse_value;
use crate::sbar::{RuleBase, RuleForm};
use crate::unit::{grid, CHECK_TOL};

/// A membership degree written as a number or as a fraction string `"p/q"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Degree {
    Number(f64),
    Text(String),
}

impl Degree {
    pub fn value(&self) -> Option<f64> {
        match self {
            Degree::Number(v) => Some(*v),
            Degree::Text(s) => parse_value(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniverseDecl {
    pub id: String,
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetDecl {
    pub id: String,
    pub universe: String,
    pub memberships: Vec<Degree>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleDecl {
    pub antecedents: Vec<String>,
    pub consequent: String,
    pub tnorm: String,
    /// Must be the residuum of `tnorm`; defaults to it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub implication: Option<String>,
    pub form: RuleForm,
}

/// Values a system is expected to reproduce, compared by
/// [`crate::reproduce`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Reference {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub antecedent_similarities: Option<Vec<Degree>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub similarity: Option<Degree>,
    /// `sup A` over the product universe.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sup_antecedent: Option<Degree>,
    /// Output per method name (`flat`, `hier1`, `hier2`).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub outputs: BTreeMap<String, Vec<Degree>>,
    /// Intermediate sets by label.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub intermediates: BTreeMap<String, Vec<Degree>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flat_counts: Option<CountsDecl>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hier_counts: Option<CountsDecl>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountsDecl {
    pub rows: Vec<u64>,
    pub total: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub universes: Vec<UniverseDecl>,
    pub sets: Vec<SetDecl>,
    pub rule: RuleDecl,
    pub inputs: Vec<String>,
    /// Similarity REF; defaults to `T(I_T, I_T)`.
    #[serde(rename = "ref", default, skip_serializing_if = "Option::is_none")]
    pub ref_spec: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub negation: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<Reference>,
}

/// A validated system.
#[derive(Debug, Clone)]
pub struct System {
    pub file: SystemFile,
    pub rule: RuleBase,
    pub inputs: Vec<FuzzySet>,
    pub universes: Vec<Arc<Universe>>,
}

fn field<T: std::str::FromStr<Err = Error>>(what: &str, s: &str) -> Result<T> {
    s.parse().map_err(|e: Error| match e {
        Error::Parse(m) => Error::Parse(format!("{what}: {m}")),
        other => other,
    })
}

fn same_function(a: &Implication, b: &Implication) -> bool {
    let g = grid(0.02).expect("fixed step");
    g.iter().all(|&x| g.iter().all(|&y| (a.eval(x, y) - b.eval(x, y)).abs() <= CHECK_TOL))
}

impl SystemFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("system file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn validate(&self) -> Result<System> {
        let mut universes: HashMap<&str, Arc<Universe>> = HashMap::new();
        let mut ordered = Vec::new();
        for (i, u) in self.universes.iter().enumerate() {
            if universes.contains_key(u.id.as_str()) {
                return Err(Error::Validation(format!("universes[{i}]: duplicate id '{}'", u.id)));
            }
            let un = Universe::new(u.id.clone(), u.labels.clone())
                .map_err(|e| match e {
                    Error::Validation(m) => Error::Validation(format!("universes[{i}] '{}': {m}", u.id)),
                    other => Error::Validation(format!("universes[{i}] '{}': {other}", u.id)),
                })?;
            universes.insert(&u.id, un.clone());
            ordered.push(un);
        }
        let mut sets: HashMap<&str, FuzzySet> = HashMap::new();
        for (i, s) in self.sets.iter().enumerate() {
            let at = format!("sets[{i}] '{}'", s.id);
            if sets.contains_key(s.id.as_str()) {
                return Err(Error::Validation(format!("{at}: duplicate id")));
            }
            let un = universes
                .get(s.universe.as_str())
                .ok_or_else(|| Error::Validation(format!("{at}: unknown universe '{}'", s.universe)))?;
            let values = s
                .memberships
                .iter()
                .enumerate()
                .map(|(j, d)| d.value().ok_or_else(|| Error::Parse(format!("{at}: memberships[{j}] is not a number"))))
                .collect::<Result<Vec<f64>>>()?;
            let set = FuzzySet::new(un.clone(), values).map_err(|e| match e {
                Error::OutOfRange(v) => Error::OutOfRange(v),
                Error::Validation(m) => Error::Validation(format!("{at}: {m}")),
                other => Error::Validation(format!("{at}: {other}")),
            })?;
            sets.insert(&s.id, set);
        }
        let lookup = |what: &str, id: &str| -> Result<FuzzySet> {
            sets.get(id)
                .cloned()
                .ok_or_else(|| Error::Validation(format!("{what}: unknown set '{id}'")))
        };
        let antecedents = self
            .rule
            .antecedents
            .iter()
            .map(|id| lookup("rule.antecedents", id))
            .collect::<Result<Vec<_>>>()?;
        let consequent = lookup("rule.consequent", &self.rule.consequent)?;
        let inputs = self.inputs.iter().map(|id| lookup("inputs", id)).collect::<Result<Vec<_>>>()?;
        let t: TNorm = field("rule.tnorm", &self.rule.tnorm)?;
        let r = ResiduatedTNorm::new(t)?;
        if let Some(i) = &self.rule.implication {
            let i: Implication = field("rule.implication", i)?;
            if !same_function(&i, &Implication::Residuum(r)) {
                return Err(Error::UnsupportedConnective(format!(
                    "rule.implication {i} is not the residuum of {t}"
                )));
            }
        }
        let mut rule = RuleBase::new(antecedents, consequent, t, self.rule.form)?;
        let negation: Negation = match &self.negation {
            Some(n) => field("negation", n)?,
            None => Negation::Standard,
        };
        if let Some(f) = &self.ref_spec {
            let mut f: RefSpec = field("ref", f)?;
            f.negation = negation;
            rule = rule.with_ref(f);
        }
        rule.check_inputs(&inputs)?;
        Ok(System {
            file: self.clone(),
            rule,
            inputs,
            universes: ordered,
        })
    }

    /// Canonical connective spellings; memberships and everything else
    /// unchanged.
    pub fn normalized(&self) -> Result<Self> {
        let mut out = self.clone();
        out.rule.tnorm = field::<TNorm>("rule.tnorm", &self.rule.tnorm)?.to_string();
        if let Some(i) = &self.rule.implication {
            out.rule.implication = Some(field::<Implication>("rule.implication", i)?.to_string());
        }
        if let Some(f) = &self.ref_spec {
            out.ref_spec = Some(field::<RefSpec>("ref", f)?.to_string());
        }
        if let Some(n) = &self.negation {
            out.negation = Some(field::<Negation>("negation", n)?.to_string());
        }
        Ok(out)
    }
}

pub fn load_system(text: &str) -> Result<System> {
    SystemFile::from_json(text)?.validate()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = r#"{
        "universes": [
            {"id": "U", "labels": ["a", "b"]},
            {"id": "V", "labels": ["p", "q", "r"]}
        ],
        "sets": [
            {"id": "A", "universe": "U", "memberships": [1, "1/2"]},
            {"id": "B", "universe": "V", "memberships": [0.3, 0.4, 0.2]},
            {"id": "X", "universe": "U", "memberships": [0.8, 0.5]}
        ],
        "rule": {"antecedents": ["A"], "consequent": "B", "tnorm": "prod", "implication": "goguen", "form": "eq2-implication"},
        "inputs": ["X"]
    }"#;

    #[test]
    fn loads_and_normalizes() {
        let f = SystemFile::from_json(SMALL).unwrap();
        let sys = f.validate().unwrap();
        assert_eq!(sys.rule.antecedents()[0].memberships(), &[1.0, 0.5]);
        let n = f.normalized().unwrap();
        assert_eq!(n.rule.tnorm, "product");
        let again = SystemFile::from_json(&n.to_json()).unwrap();
        assert_eq!(again, n);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let bad = SMALL.replace("[0.8, 0.5]", "[0.8, 0.5, 0.1]");
        let e = load_system(&bad).unwrap_err();
        assert!(matches!(&e, Error::Validation(m) if m.contains("'X'")), "{e}");
        let bad = SMALL.replace("\"goguen\"", "\"lukasiewicz\"");
        assert!(matches!(load_system(&bad), Err(Error::UnsupportedConnective(_))));
        let bad = SMALL.replace("\"inputs\": [\"X\"]", "\"inputs\": [\"B\"]");
        assert!(matches!(load_system(&bad), Err(Error::UniverseMismatch(_))));
        let bad = SMALL.replace("[1, \"1/2\"]", "[1, 1.5]");
        assert!(matches!(load_system(&bad), Err(Error::OutOfRange(_))));
        let e = load_system("{\"universes\": [}").unwrap_err();
        assert!(matches!(&e, Error::Parse(m) if m.contains("line 1")), "{e}");
    }
}
