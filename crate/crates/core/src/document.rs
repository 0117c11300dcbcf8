//! JSON documents describing ideals and substitution instances.
//!
//! An instance document looks like
//!
//! ```json
//! {
//!   "blocks": [{"name": "x", "size": 2}, {"name": "y", "size": 2}],
//!   "inducing_ideal": [[2, 1], [1, 2]],
//!   "substitutions": {
//!     "x:1": [[1, 0], [0, 1]],
//!     "x:2": {"family": "power-of-maximal"},
//!     "y:1": {"family": "squarefree-veronese"},
//!     "y:2": {"family": "lex-segment", "count": 2}
//!   },
//!   "options": {"max_taylor": 14}
//! }
//! ```
//!
//! Substitution keys are `block:degree`, the block given by name or by its
//! zero-based index. Serializing always writes names.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complex::DEFAULT_TAYLOR_CAP;
use crate::error::{Error, Result};
use crate::families::{lex_segment_stable, SubstitutionKind};
use crate::gmpi::{GmpiInstance, SubstitutionFamily};
use crate::monomial::{Block, ExponentVector, MonomialIdeal, VariableContext};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FamilyShorthand {
    SquarefreeVeronese,
    PowerOfMaximal,
    LexInitial,
    /// The first `count` monomials of the degree in lex order.
    LexSegment {
        count: usize,
    },
}

impl FamilyShorthand {
    pub fn ideal(&self, m: usize, d: u32) -> Result<MonomialIdeal> {
        match self {
            FamilyShorthand::SquarefreeVeronese => SubstitutionKind::SquarefreeVeronese.ideal(m, d),
            FamilyShorthand::PowerOfMaximal => SubstitutionKind::PowerOfMaximal.ideal(m, d),
            FamilyShorthand::LexInitial => SubstitutionKind::LexInitial.ideal(m, d),
            FamilyShorthand::LexSegment { count } => lex_segment_stable(m, d, *count),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SubstitutionSpec {
    Explicit(Vec<Vec<u32>>),
    Family(FamilyShorthand),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DocumentOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_taylor: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl DocumentOptions {
    fn is_empty(&self) -> bool {
        self == &DocumentOptions::default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub blocks: Vec<Block>,
    pub inducing_ideal: Vec<Vec<u32>>,
    pub substitutions: BTreeMap<String, SubstitutionSpec>,
    #[serde(default, skip_serializing_if = "DocumentOptions::is_empty")]
    pub options: DocumentOptions,
}

fn parse_key(ctx: &VariableContext, key: &str) -> Result<(usize, u32)> {
    let bad = |why: &str| Error::Document(format!("substitution key {key:?}: {why}"));
    let (block, degree) = key.rsplit_once(':').ok_or_else(|| bad("expected block:degree"))?;
    let block = match ctx.block_index(block) {
        Some(b) => b,
        None => block
            .parse::<usize>()
            .ok()
            .filter(|&b| b < ctx.num_blocks())
            .ok_or_else(|| bad("unknown block"))?,
    };
    let degree = degree.parse::<u32>().map_err(|_| bad("degree is not a number"))?;
    if degree == 0 {
        return Err(bad("degree must be positive"));
    }
    Ok((block, degree))
}

impl InstanceDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn context(&self) -> Result<VariableContext> {
        let ctx = VariableContext::new(self.blocks.clone())?;
        for (i, b) in self.blocks.iter().enumerate() {
            if self.blocks[..i].iter().any(|o| o.name == b.name) {
                return Err(Error::Document(format!("block name {:?} is repeated", b.name)));
            }
            if b.name.contains(':') {
                return Err(Error::Document(format!("block name {:?} contains ':'", b.name)));
            }
        }
        Ok(ctx)
    }

    pub fn max_taylor(&self) -> usize {
        self.options.max_taylor.unwrap_or(DEFAULT_TAYLOR_CAP)
    }

    /// The inducing ideal in one variable per block.
    pub fn inducing(&self) -> Result<MonomialIdeal> {
        let n = self.blocks.len();
        if let Some(row) = self.inducing_ideal.iter().find(|r| r.len() != n) {
            return Err(Error::Document(format!(
                "inducing generator {row:?} has length {}, expected {n}",
                row.len()
            )));
        }
        if self.inducing_ideal.is_empty() {
            return Err(Error::Document("the inducing ideal has no generators".into()));
        }
        MonomialIdeal::new(
            &VariableContext::flat(n)?,
            self.inducing_ideal.iter().cloned().map(ExponentVector::new),
        )
    }

    pub fn family(&self) -> Result<SubstitutionFamily> {
        let ctx = self.context()?;
        let mut family = SubstitutionFamily::new(&ctx);
        for (key, spec) in &self.substitutions {
            let (block, degree) = parse_key(&ctx, key)?;
            if family.get(block, degree).is_some() {
                return Err(Error::Document(format!("substitution {key:?} is given twice")));
            }
            let m = ctx.block_size(block);
            let ideal = match spec {
                SubstitutionSpec::Explicit(rows) => {
                    if let Some(row) = rows.iter().find(|r| r.len() != m) {
                        return Err(Error::Document(format!(
                            "{key}: exponent vector {row:?} has length {}, block {} has {m} variables",
                            row.len(),
                            ctx.block_name(block)
                        )));
                    }
                    MonomialIdeal::new(&ctx.block_context(block), rows.iter().cloned().map(ExponentVector::new))?
                }
                SubstitutionSpec::Family(f) => f.ideal(m, degree)?,
            };
            family.insert(block, degree, ideal)?;
        }
        Ok(family)
    }

    /// Validates the document and builds the instance.
    pub fn to_instance(&self) -> Result<GmpiInstance> {
        GmpiInstance::with_cap(&self.inducing()?, self.family()?, self.max_taylor())
    }

    /// A document listing every substitution ideal explicitly.
    pub fn from_instance(inst: &GmpiInstance) -> Self {
        let ctx = inst.context();
        let mut substitutions = BTreeMap::new();
        for l in 0..ctx.num_blocks() {
            for d in inst.family().degrees(l) {
                if let Some(ideal) = inst.family().get(l, d) {
                    substitutions.insert(
                        format!("{}:{d}", ctx.block_name(l)),
                        SubstitutionSpec::Explicit(ideal.gens().iter().map(|g| g.as_slice().to_vec()).collect()),
                    );
                }
            }
        }
        let options = if inst.taylor_cap() == DEFAULT_TAYLOR_CAP {
            DocumentOptions::default()
        } else {
            DocumentOptions {
                max_taylor: Some(inst.taylor_cap()),
                seed: None,
            }
        };
        Self {
            blocks: ctx.blocks().to_vec(),
            inducing_ideal: inst.inducing().gens().iter().map(|g| g.as_slice().to_vec()).collect(),
            substitutions,
            options,
        }
    }

    /// The same document with keys written by block name.
    pub fn canonical(&self) -> Result<Self> {
        let ctx = self.context()?;
        let mut substitutions = BTreeMap::new();
        for (key, spec) in &self.substitutions {
            let (block, degree) = parse_key(&ctx, key)?;
            substitutions.insert(format!("{}:{degree}", ctx.block_name(block)), spec.clone());
        }
        Ok(Self {
            substitutions,
            ..self.clone()
        })
    }
}

/// A standalone monomial ideal: one exponent vector per generator, with
/// optional variable names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variables: Option<Vec<String>>,
    pub generators: Vec<Vec<u32>>,
}

impl IdealDocument {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_ideal(ideal: &MonomialIdeal) -> Self {
        let ctx = ideal.context();
        Self {
            variables: Some((0..ctx.num_vars()).map(|v| ctx.var_name(v)).collect()),
            generators: ideal.gens().iter().map(|g| g.as_slice().to_vec()).collect(),
        }
    }

    pub fn to_ideal(&self) -> Result<MonomialIdeal> {
        let n = match (&self.variables, self.generators.first()) {
            (Some(vars), _) => vars.len(),
            (None, Some(g)) => g.len(),
            (None, None) => return Err(Error::Document("no generators and no variables".into())),
        };
        if let Some(row) = self.generators.iter().find(|r| r.len() != n) {
            return Err(Error::Document(format!(
                "generator {row:?} has length {}, expected {n}",
                row.len()
            )));
        }
        let ctx = match &self.variables {
            Some(vars) => VariableContext::new(
                vars.iter()
                    .map(|name| Block {
                        name: name.clone(),
                        size: 1,
                    })
                    .collect(),
            )?,
            None => VariableContext::flat(n)?,
        };
        MonomialIdeal::new(&ctx, self.generators.iter().cloned().map(ExponentVector::new))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXPANSION: &str = r#"{
        "blocks": [{"name": "x", "size": 2}, {"name": "y", "size": 2}],
        "inducing_ideal": [[2, 1], [1, 2]],
        "substitutions": {
            "x:1": [[1, 0], [0, 1]],
            "x:2": {"family": "power-of-maximal"},
            "1:1": {"family": "power-of-maximal"},
            "y:2": {"family": "lex-segment", "count": 3}
        }
    }"#;

    #[test]
    fn parses_mixed_substitutions() {
        let doc = InstanceDocument::from_json(EXPANSION).unwrap();
        let inst = doc.to_instance().unwrap();
        assert_eq!(inst.ideal().len(), 12);
        assert_eq!(inst.family().get(1, 1).unwrap().format(), "(y_1, y_2)");
        let canon = doc.canonical().unwrap();
        assert!(canon.substitutions.contains_key("y:1"));
        assert_eq!(canon.to_instance().unwrap().ideal(), inst.ideal());
    }

    #[test]
    fn round_trips() {
        let doc = InstanceDocument::from_json(EXPANSION).unwrap().canonical().unwrap();
        let again = InstanceDocument::from_json(&doc.to_json().unwrap()).unwrap();
        assert_eq!(again, doc);
        let explicit = InstanceDocument::from_instance(&doc.to_instance().unwrap());
        let back = InstanceDocument::from_json(&explicit.to_json().unwrap()).unwrap();
        assert_eq!(back, explicit);
        assert_eq!(back.to_instance().unwrap().ideal(), doc.to_instance().unwrap().ideal());
    }

    #[test]
    fn rejects_bad_documents() {
        let bad_key = EXPANSION.replace("\"1:1\"", "\"z:1\"");
        assert!(matches!(
            InstanceDocument::from_json(&bad_key).unwrap().to_instance(),
            Err(Error::Document(_))
        ));
        let short = EXPANSION.replace("[[1, 0], [0, 1]]", "[[1], [0, 1]]");
        assert!(InstanceDocument::from_json(&short).unwrap().to_instance().is_err());
        let missing = EXPANSION.replace("\"y:2\"", "\"y:3\"");
        assert!(matches!(
            InstanceDocument::from_json(&missing).unwrap().to_instance(),
            Err(Error::MissingSubstitution { .. })
        ));
        assert!(InstanceDocument::from_json(&EXPANSION.replace("\"blocks\"", "\"blox\"")).is_err());
        assert!(InstanceDocument::from_json(r#"{"blocks": []}"#).is_err());
    }

    #[test]
    fn ideal_documents() {
        let doc = IdealDocument::from_json(r#"{"generators": [[1,0,0],[0,1,0],[0,0,1]]}"#).unwrap();
        let i = doc.to_ideal().unwrap();
        assert_eq!(i.format(), "(x, y, z)");
        let back = IdealDocument::from_ideal(&i);
        assert_eq!(IdealDocument::from_json(&back.to_json().unwrap()).unwrap(), back);
        let named = IdealDocument::from_json(r#"{"variables": ["a", "b"], "generators": [[2, 1]]}"#).unwrap();
        assert_eq!(named.to_ideal().unwrap().format(), "(a^2*b)");
        assert!(IdealDocument::from_json(r#"{"generators": [[1, 0], [1]]}"#).unwrap().to_ideal().is_err());
    }
}
