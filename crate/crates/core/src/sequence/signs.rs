//! Mixed-sign sequences and the summability trichotomy.

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{RoundRobin, SequenceSpec, TailEnclosure, TailKind};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// A sequence built from single-signed parts, read round-robin with positive
/// parts first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergedSpec {
    parts: Vec<SequenceSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SummabilityClass {
    /// Both sign sums finite.
    Absolutely,
    /// Exactly one sign sum infinite.
    Unconditionally,
    /// Both sign sums infinite.
    Conditionally,
}

/// Positive and negative parts with their total magnitudes. `x_minus` is the
/// enclosure of `Σ x_n⁻` as a non-positive number (`Divergent` meaning `-∞`).
#[derive(Clone, Debug)]
pub struct SignSplit {
    pub pos: Vec<SequenceSpec>,
    pub neg: Vec<SequenceSpec>,
    pub x_plus: TailEnclosure,
    pub x_minus: TailEnclosure,
}

/// Breaks one spec into parts whose every term has the same sign.
fn single_signed(spec: SequenceSpec) -> Vec<SequenceSpec> {
    let tail_negative = spec.negated;
    let (same, other): (Vec<Rational>, Vec<Rational>) =
        spec.prefix.iter().cloned().partition(|t| t.is_positive());
    if other.is_empty() {
        return vec![spec];
    }
    let mut out = vec![SequenceSpec { prefix: same, tail: spec.tail, negated: tail_negative }];
    out.push(SequenceSpec {
        prefix: other.iter().map(Signed::abs).collect(),
        tail: TailKind::None,
        negated: !tail_negative,
    });
    out.retain(|p| !p.is_empty());
    out
}

impl MergedSpec {
    pub fn new(parts: Vec<SequenceSpec>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidSpec("merge needs at least one part".into()));
        }
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for part in parts.into_iter().flat_map(single_signed) {
            if part.negated {
                neg.push(part);
            } else {
                pos.push(part);
            }
        }
        pos.extend(neg);
        if pos.is_empty() {
            pos.push(SequenceSpec::empty());
        }
        Ok(Self { parts: pos })
    }

    /// The parts, each single-signed, positive ones first.
    pub fn parts(&self) -> &[SequenceSpec] {
        &self.parts
    }

    /// Some(spec) when the merge is a single part.
    pub fn as_single(&self) -> Option<&SequenceSpec> {
        match self.parts.as_slice() {
            [one] => Some(one),
            _ => None,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.parts.iter().all(SequenceSpec::is_positive)
    }

    pub fn len(&self) -> Option<usize> {
        self.parts.iter().map(SequenceSpec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    pub fn terms(&self) -> Box<dyn Iterator<Item = Rational> + Send> {
        if let Some(one) = self.as_single() {
            return one.terms();
        }
        Box::new(RoundRobin { children: self.parts.iter().map(|p| p.terms()).collect(), next: 0 })
    }

    pub fn first_terms(&self, n: usize) -> Vec<Rational> {
        self.terms().take(n).collect()
    }

    /// The positive sequence `|x_n|`, in the same order.
    pub fn abs_spec(&self) -> SequenceSpec {
        match self.as_single() {
            Some(one) => one.abs(),
            None => SequenceSpec {
                prefix: Vec::new(),
                tail: TailKind::Interleave(self.parts.iter().map(SequenceSpec::abs).collect()),
                negated: false,
            },
        }
    }

    pub fn sign_split(&self) -> SignSplit {
        let (neg, pos): (Vec<_>, Vec<_>) = self.parts.iter().cloned().partition(|p| p.negated);
        let sum = |parts: &[SequenceSpec]| {
            parts.iter().fold(TailEnclosure::exact(Rational::zero()), |acc, p| acc.plus(&p.total()))
        };
        let x_plus = sum(&pos);
        let x_minus = sum(&neg).negate();
        SignSplit { pos, neg, x_plus, x_minus }
    }

    pub fn summability_class(&self) -> SummabilityClass {
        let split = self.sign_split();
        match (split.x_plus.is_divergent(), split.x_minus.is_divergent()) {
            (false, false) => SummabilityClass::Absolutely,
            (true, true) => SummabilityClass::Conditionally,
            _ => SummabilityClass::Unconditionally,
        }
    }
}

impl From<SequenceSpec> for MergedSpec {
    fn from(spec: SequenceSpec) -> Self {
        MergedSpec::new(vec![spec]).expect("one part is always a valid merge")
    }
}

impl SequenceSpec {
    pub fn sign_split(&self) -> SignSplit {
        MergedSpec::from(self.clone()).sign_split()
    }

    pub fn summability_class(&self) -> SummabilityClass {
        MergedSpec::from(self.clone()).summability_class()
    }
}
