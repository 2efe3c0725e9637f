//! Job configuration: a single JSON document defining labeled fields and
//! characters plus optional named tasks and defaults. Fixtures double as
//! test vectors, so parsing is strict: unknown labels, duplicate labels,
//! and bounds below 2 are configuration errors.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;

use lsiso::characters::{CharacterRep, DirichletCharQ};
use lsiso::number_field::NumberField;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub fields: Vec<RawField>,
    #[serde(default)]
    pub characters: Vec<RawCharacter>,
    #[serde(default)]
    pub tasks: Vec<RawTask>,
    #[serde(default)]
    pub bound: Option<u64>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub format: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawField {
    pub label: String,
    /// Coefficients of the monic defining polynomial, constant term first.
    pub coeffs: Vec<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum RawCharacterKind {
    #[serde(rename = "trivial")]
    Trivial { field: String, l: u64 },
    #[serde(rename = "dirichlet_q")]
    DirichletQ { l: u64, modulus: u64, exponents: Vec<u64> },
    #[serde(rename = "quad")]
    Quad { field: String, d: Vec<serde_json::Value> },
}

#[derive(Debug, Deserialize)]
pub struct RawCharacter {
    pub label: String,
    #[serde(flatten)]
    pub kind: RawCharacterKind,
}

/// A named task descriptor; `run` executes every task in order.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "task", deny_unknown_fields)]
pub enum RawTask {
    #[serde(rename = "split")]
    Split { name: String, field: String, bound: Option<u64> },
    #[serde(rename = "zeta")]
    Zeta { name: String, field: String, bound: Option<u64> },
    #[serde(rename = "lfactor")]
    LFactor { name: String, character: String, bound: Option<u64> },
    #[serde(rename = "compare")]
    Compare { name: String, first: String, second: String, bound: Option<u64> },
    #[serde(rename = "reconstruct")]
    Reconstruct {
        name: String,
        source: String,
        target: String,
        rule: String,
        bound: Option<u64>,
    },
    #[serde(rename = "gassmann")]
    Gassmann { name: String, first: String, second: String, bound: Option<u64> },
    #[serde(rename = "remark")]
    Remark { name: String, p: u64, dmax: u64, bound: Option<u64> },
}

impl RawTask {
    pub fn name(&self) -> &str {
        match self {
            RawTask::Split { name, .. }
            | RawTask::Zeta { name, .. }
            | RawTask::LFactor { name, .. }
            | RawTask::Compare { name, .. }
            | RawTask::Reconstruct { name, .. }
            | RawTask::Gassmann { name, .. }
            | RawTask::Remark { name, .. } => name,
        }
    }
}

/// Parsed and resolved configuration.
pub struct Config {
    pub fields: BTreeMap<String, NumberField>,
    pub characters: BTreeMap<String, CharacterRep>,
    pub tasks: Vec<RawTask>,
    pub bound: u64,
    pub seed: u64,
    pub format: String,
}

fn parse_rational(v: &serde_json::Value) -> Result<BigRational, String> {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigRational::from_integer(BigInt::from(i)))
            } else {
                Err(format!("coefficient {} is not an integer", n))
            }
        }
        serde_json::Value::String(s) => {
            let s = s.trim();
            if let Some((num, den)) = s.split_once('/') {
                let num: BigInt = num.trim().parse().map_err(|e| format!("bad numerator: {e}"))?;
                let den: BigInt = den.trim().parse().map_err(|e| format!("bad denominator: {e}"))?;
                if den == BigInt::from(0) {
                    return Err("zero denominator".into());
                }
                Ok(BigRational::new(num, den))
            } else {
                let num: BigInt = s.parse().map_err(|e| format!("bad rational: {e}"))?;
                Ok(BigRational::from_integer(num))
            }
        }
        other => Err(format!("cannot parse {} as a rational", other)),
    }
}

pub fn load(path: &str, bound_flag: Option<u64>, seed_flag: Option<u64>, format_flag: Option<String>) -> Result<Config, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {}", path, e))?;
    let raw: RawConfig = serde_json::from_str(&text)
        .map_err(|e| format!("{}:{}:{}: {}", path, e.line(), e.column(), e))?;
    resolve(raw, bound_flag, seed_flag, format_flag)
}

pub fn resolve(
    raw: RawConfig,
    bound_flag: Option<u64>,
    seed_flag: Option<u64>,
    format_flag: Option<String>,
) -> Result<Config, String> {
    let mut fields = BTreeMap::new();
    for f in &raw.fields {
        if fields.contains_key(&f.label) {
            return Err(format!("duplicate field label {}", f.label));
        }
        let nf = NumberField::from_i64(&f.label, &f.coeffs)
            .map_err(|e| format!("field {}: {}", f.label, e))?;
        fields.insert(f.label.clone(), nf);
    }
    let mut characters = BTreeMap::new();
    for c in &raw.characters {
        if characters.contains_key(&c.label) {
            return Err(format!("duplicate character label {}", c.label));
        }
        let rep = match &c.kind {
            RawCharacterKind::Trivial { field, l } => {
                let nf = fields
                    .get(field)
                    .ok_or_else(|| format!("character {}: unknown field {}", c.label, field))?;
                CharacterRep::trivial(nf.clone(), *l)
            }
            RawCharacterKind::DirichletQ { l, modulus, exponents } => {
                let chi = DirichletCharQ::new(*l, *modulus, exponents.clone())
                    .map_err(|e| format!("character {}: {}", c.label, e))?;
                CharacterRep::dirichlet(chi)
            }
            RawCharacterKind::Quad { field, d } => {
                let nf = fields
                    .get(field)
                    .ok_or_else(|| format!("character {}: unknown field {}", c.label, field))?;
                let coeffs: Result<Vec<BigRational>, String> =
                    d.iter().map(parse_rational).collect();
                let elem = nf.element_from_rationals(coeffs.map_err(|e| format!("character {}: {}", c.label, e))?);
                CharacterRep::quad(nf.clone(), elem)
                    .map_err(|e| format!("character {}: {}", c.label, e))?
            }
        };
        characters.insert(c.label.clone(), rep);
    }
    // validate task references
    let mut names = std::collections::BTreeSet::new();
    for t in &raw.tasks {
        if !names.insert(t.name().to_string()) {
            return Err(format!("duplicate task name {}", t.name()));
        }
        let check_field = |label: &String| {
            fields
                .get(label)
                .map(|_| ())
                .ok_or_else(|| format!("task {}: unknown field {}", t.name(), label))
        };
        match t {
            RawTask::Split { field, .. } | RawTask::Zeta { field, .. } => check_field(field)?,
            RawTask::LFactor { character, .. } => {
                characters
                    .get(character)
                    .map(|_| ())
                    .ok_or_else(|| format!("task {}: unknown character {}", t.name(), character))?;
            }
            RawTask::Compare { first, second, .. } => {
                for label in [first, second] {
                    characters
                        .get(label)
                        .map(|_| ())
                        .ok_or_else(|| format!("task {}: unknown character {}", t.name(), label))?;
                }
            }
            RawTask::Reconstruct { source, target, .. } => {
                check_field(source)?;
                check_field(target)?;
            }
            RawTask::Gassmann { first, second, .. } => {
                check_field(first)?;
                check_field(second)?;
            }
            RawTask::Remark { .. } => {}
        }
    }
    let bound = bound_flag.or(raw.bound).unwrap_or(100);
    if bound < 2 {
        return Err(format!("bound {} is below 2", bound));
    }
    let format = format_flag.or(raw.format).unwrap_or_else(|| "json".into());
    if format != "json" && format != "tsv" {
        return Err(format!("unknown format {}", format));
    }
    Ok(Config {
        fields,
        characters,
        tasks: raw.tasks,
        bound,
        seed: seed_flag.or(raw.seed).unwrap_or(lsiso::DEFAULT_SEED),
        format,
    })
}

impl Config {
    pub fn field(&self, label: &str) -> Result<&NumberField, String> {
        self.fields.get(label).ok_or_else(|| format!("unknown field label {}", label))
    }

    pub fn character(&self, label: &str) -> Result<&CharacterRep, String> {
        self.characters
            .get(label)
            .ok_or_else(|| format!("unknown character label {}", label))
    }
}
