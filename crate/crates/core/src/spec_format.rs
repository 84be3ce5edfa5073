//! JSON sequence documents and named presets.
//!
//! ```json
//! {"prefix": ["2"], "tail": {"kind": "geometric", "a": "1/2", "rho": "1/2"}, "negated": false}
//! {"merge": [{"tail": {"kind": "harmonic"}}, {"tail": {"kind": "harmonic"}, "negated": true}]}
//! "kenyon"
//! ```
//!
//! Rationals are `"p/q"` strings or JSON integers.

use std::path::Path;

use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, parse_rational, rat, Rational};
use crate::sequence::{GeometricStrand, MergedSpec, SequenceSpec, TailKind};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalText {
    Int(i64),
    Text(String),
}

impl RationalText {
    fn value(&self) -> Result<Rational> {
        match self {
            RationalText::Int(n) => Ok(int(*n)),
            RationalText::Text(s) => parse_rational(s),
        }
    }

    fn of(r: &Rational) -> Self {
        RationalText::Text(format_rational(r))
    }
}

fn values(v: &[RationalText]) -> Result<Vec<Rational>> {
    v.iter().map(RationalText::value).collect()
}

fn texts(v: &[Rational]) -> Vec<RationalText> {
    v.iter().map(RationalText::of).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrandDoc {
    pub first: RationalText,
    pub ratio: RationalText,
}

fn default_start() -> u64 {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TailDoc {
    #[default]
    None,
    Geometric {
        a: RationalText,
        rho: RationalText,
    },
    Pseries {
        p: u32,
        #[serde(default = "default_start")]
        start: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        coef: Option<RationalText>,
    },
    Harmonic,
    Multigeometric {
        ratios: Vec<RationalText>,
        total: RationalText,
    },
    Bigeometric {
        alpha: RationalText,
        beta: RationalText,
        total: RationalText,
    },
    Interleave {
        parts: Vec<SpecDoc>,
    },
    SortedMerge {
        finite: Vec<RationalText>,
        strands: Vec<StrandDoc>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDoc {
    #[serde(default)]
    pub prefix: Vec<RationalText>,
    #[serde(default)]
    pub tail: TailDoc,
    #[serde(default)]
    pub negated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MergeDoc {
    pub merge: Vec<SpecDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Document {
    Preset(String),
    Merge(MergeDoc),
    Single(SpecDoc),
}

impl SpecDoc {
    pub fn to_spec(&self) -> Result<SequenceSpec> {
        let tail = match &self.tail {
            TailDoc::None => TailKind::None,
            TailDoc::Geometric { a, rho } => TailKind::Geometric { a: a.value()?, rho: rho.value()? },
            TailDoc::Pseries { p, start, coef } => TailKind::PSeries {
                p: *p,
                start: *start,
                coef: coef.as_ref().map(RationalText::value).transpose()?.unwrap_or_else(Rational::one),
            },
            TailDoc::Harmonic => TailKind::PSeries { p: 1, start: 1, coef: Rational::one() },
            TailDoc::Multigeometric { ratios, total } => {
                TailKind::Multigeometric { ratios: values(ratios)?, total: total.value()? }
            }
            TailDoc::Bigeometric { alpha, beta, total } => {
                TailKind::Multigeometric { ratios: vec![alpha.value()?, beta.value()?], total: total.value()? }
            }
            TailDoc::Interleave { parts } => {
                TailKind::Interleave(parts.iter().map(SpecDoc::to_spec).collect::<Result<_>>()?)
            }
            TailDoc::SortedMerge { finite, strands } => TailKind::SortedMerge {
                finite: values(finite)?,
                strands: strands
                    .iter()
                    .map(|s| GeometricStrand::new(s.first.value()?, s.ratio.value()?))
                    .collect::<Result<_>>()?,
            },
        };
        SequenceSpec::new(values(&self.prefix)?, tail, self.negated)
    }

    pub fn from_spec(spec: &SequenceSpec) -> Self {
        let tail = match spec.tail_kind() {
            TailKind::None => TailDoc::None,
            TailKind::Geometric { a, rho } => TailDoc::Geometric { a: RationalText::of(a), rho: RationalText::of(rho) },
            TailKind::PSeries { p: 1, start: 1, coef } if coef.is_one() => TailDoc::Harmonic,
            TailKind::PSeries { p, start, coef } => TailDoc::Pseries {
                p: *p,
                start: *start,
                coef: (!coef.is_one()).then(|| RationalText::of(coef)),
            },
            TailKind::Multigeometric { ratios, total } => {
                TailDoc::Multigeometric { ratios: texts(ratios), total: RationalText::of(total) }
            }
            TailKind::Interleave(parts) => TailDoc::Interleave { parts: parts.iter().map(SpecDoc::from_spec).collect() },
            TailKind::SortedMerge { finite, strands } => TailDoc::SortedMerge {
                finite: texts(finite),
                strands: strands
                    .iter()
                    .map(|s| StrandDoc { first: RationalText::of(&s.first), ratio: RationalText::of(&s.ratio) })
                    .collect(),
            },
        };
        SpecDoc { prefix: texts(spec.prefix()), tail, negated: spec.is_negated() }
    }
}

impl Document {
    pub fn to_spec(&self) -> Result<MergedSpec> {
        match self {
            Document::Preset(name) => preset(name),
            Document::Merge(m) => MergedSpec::new(m.merge.iter().map(SpecDoc::to_spec).collect::<Result<_>>()?),
            Document::Single(s) => Ok(MergedSpec::from(s.to_spec()?)),
        }
    }

    pub fn from_spec(spec: &MergedSpec) -> Self {
        match spec.as_single() {
            Some(s) => Document::Single(SpecDoc::from_spec(s)),
            None => Document::Merge(MergeDoc { merge: spec.parts().iter().map(SpecDoc::from_spec).collect() }),
        }
    }
}

pub fn parse_spec_json(text: &str) -> Result<MergedSpec> {
    let doc: Document = serde_json::from_str(text).map_err(|e| Error::Parse(format!("sequence spec: {e}")))?;
    doc.to_spec()
}

pub fn spec_to_json(spec: &MergedSpec) -> serde_json::Value {
    serde_json::to_value(Document::from_spec(spec)).expect("spec documents serialize")
}

/// A preset name, or a path to a JSON document.
pub fn load_spec(arg: &str) -> Result<MergedSpec> {
    if PRESETS.iter().any(|(name, _)| *name == arg) {
        return preset(arg);
    }
    let path = Path::new(arg);
    if !path.exists() {
        return Err(Error::InvalidSpec(format!("{arg:?} is neither a preset nor a readable file")));
    }
    parse_spec_json(&std::fs::read_to_string(path)?)
}

/// Preset names with one-line descriptions.
pub const PRESETS: [(&str, &str); 9] = [
    ("harmonic", "1/k, k >= 1 (divergent)"),
    ("gn", "3/4, 2/4, 3/16, 2/16, ... (ratios 9/20, 6/11 from total 5/3)"),
    ("kenyon", "6/4, 1/4, 6/16, 1/16, ... (ratios 9/14, 3/10 from total 7/3)"),
    ("thirds", "1/3^k, k >= 1"),
    ("halves", "1/2^k, k >= 1"),
    ("ratios-2-5-3-5", "ratios 2/5, 3/5 from total 1"),
    ("basel", "1/k^2, k >= 1"),
    ("two-then-halves", "2, then 1/2^k"),
    ("alternating-halves", "(-1)^k/2^k, k >= 1"),
];

pub fn preset(name: &str) -> Result<MergedSpec> {
    let spec = match name {
        "harmonic" => SequenceSpec::harmonic(),
        "gn" => SequenceSpec::bigeometric(rat(9, 20), rat(6, 11), rat(5, 3))?,
        "kenyon" => SequenceSpec::bigeometric(rat(9, 14), rat(3, 10), rat(7, 3))?,
        "thirds" => SequenceSpec::geometric(rat(1, 3), rat(1, 3))?,
        "halves" => SequenceSpec::geometric(rat(1, 2), rat(1, 2))?,
        "ratios-2-5-3-5" => SequenceSpec::bigeometric(rat(2, 5), rat(3, 5), int(1))?,
        "basel" => SequenceSpec::pseries(2)?,
        "two-then-halves" => SequenceSpec::geometric(rat(1, 2), rat(1, 2))?.with_prefix(vec![int(2)])?,
        "alternating-halves" => {
            return MergedSpec::new(vec![
                SequenceSpec::geometric(rat(1, 2), rat(1, 4))?.negated(),
                SequenceSpec::geometric(rat(1, 4), rat(1, 4))?,
            ])
        }
        other => return Err(Error::InvalidSpec(format!("unknown preset {other:?}"))),
    };
    Ok(MergedSpec::from(spec))
}

/// A single positive spec, as required by the positive-only operations.
pub fn single_positive(spec: &MergedSpec) -> Result<SequenceSpec> {
    match spec.as_single() {
        Some(s) if s.is_positive() => Ok(s.clone()),
        _ => Err(Error::NotPositive),
    }
}

/// Integer value of a small rational, for flags such as depths.
pub fn small_integer(r: &Rational) -> Option<u64> {
    r.is_integer().then(|| r.to_integer().to_u64()).flatten()
}
