//! Finite unions of closed rational intervals.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClosedInterval {
    left: Rational,
    right: Rational,
}

impl ClosedInterval {
    pub fn new(left: Rational, right: Rational) -> Result<Self> {
        if left > right {
            return Err(Error::InvalidSpec(format!("interval [{left}, {right}] has left > right")));
        }
        Ok(Self { left, right })
    }

    pub fn point(x: Rational) -> Self {
        Self { left: x.clone(), right: x }
    }

    pub fn left(&self) -> &Rational {
        &self.left
    }

    pub fn right(&self) -> &Rational {
        &self.right
    }

    pub fn length(&self) -> Rational {
        &self.right - &self.left
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.left <= x && x <= &self.right
    }

    pub fn translate(&self, t: &Rational) -> Self {
        Self { left: &self.left + t, right: &self.right + t }
    }
}

impl fmt::Display for ClosedInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.left, self.right)
    }
}

/// Sorted, pairwise disjoint closed intervals separated by positive gaps.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntervalUnion {
    intervals: Vec<ClosedInterval>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn single(interval: ClosedInterval) -> Self {
        Self { intervals: vec![interval] }
    }

    /// Minimal sorted representation of the union of `raw`. Overlapping and
    /// abutting intervals merge.
    pub fn normalize(raw: Vec<ClosedInterval>) -> Self {
        Self::normalize_capped(raw, None).expect("no cap, no failure")
    }

    /// As [`normalize`](Self::normalize), failing once more than `cap`
    /// components would be produced.
    pub fn normalize_capped(mut raw: Vec<ClosedInterval>, cap: Option<usize>) -> Result<Self> {
        raw.sort_by(|a, b| a.left.cmp(&b.left).then_with(|| a.right.cmp(&b.right)));
        Self::merge_sorted(raw.into_iter(), cap)
    }

    /// Merges intervals already sorted by left endpoint.
    pub(crate) fn merge_sorted(sorted: impl Iterator<Item = ClosedInterval>, cap: Option<usize>) -> Result<Self> {
        let mut out: Vec<ClosedInterval> = Vec::new();
        for iv in sorted {
            match out.last_mut() {
                Some(last) if iv.left <= last.right => {
                    if iv.right > last.right {
                        last.right = iv.right;
                    }
                }
                _ => {
                    if let Some(cap) = cap {
                        if out.len() >= cap {
                            return Err(Error::CapExceeded { cap });
                        }
                    }
                    out.push(iv);
                }
            }
        }
        Ok(Self { intervals: out })
    }

    pub fn intervals(&self) -> &[ClosedInterval] {
        &self.intervals
    }

    pub fn components(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn total_length(&self) -> Rational {
        self.intervals.iter().map(ClosedInterval::length).sum()
    }

    pub fn hull(&self) -> Result<ClosedInterval> {
        match (self.intervals.first(), self.intervals.last()) {
            (Some(first), Some(last)) => Ok(ClosedInterval { left: first.left.clone(), right: last.right.clone() }),
            _ => Err(Error::EmptyUnion),
        }
    }

    pub fn translate(&self, t: &Rational) -> Self {
        Self { intervals: self.intervals.iter().map(|iv| iv.translate(t)).collect() }
    }

    /// Image under `x ↦ x0 - x`.
    pub fn reflect(&self, x0: &Rational) -> Self {
        Self {
            intervals: self
                .intervals
                .iter()
                .rev()
                .map(|iv| ClosedInterval { left: x0 - &iv.right, right: x0 - &iv.left })
                .collect(),
        }
    }

    pub fn union(&self, other: &IntervalUnion) -> Self {
        let mut merged = Vec::with_capacity(self.intervals.len() + other.intervals.len());
        let (mut i, mut j) = (0, 0);
        while i < self.intervals.len() || j < other.intervals.len() {
            let take_left = match (self.intervals.get(i), other.intervals.get(j)) {
                (Some(a), Some(b)) => a.left <= b.left,
                (Some(_), None) => true,
                _ => false,
            };
            if take_left {
                merged.push(self.intervals[i].clone());
                i += 1;
            } else {
                merged.push(other.intervals[j].clone());
                j += 1;
            }
        }
        Self::merge_sorted(merged.into_iter(), None).expect("no cap")
    }

    /// Index of the component containing `x`, if any.
    pub fn component_of(&self, x: &Rational) -> Option<usize> {
        let idx = self.intervals.partition_point(|iv| &iv.right < x);
        self.intervals.get(idx).filter(|iv| iv.contains(x)).map(|_| idx)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.component_of(x).is_some()
    }

    /// True when every point of `self` lies in `other`.
    pub fn is_subset(&self, other: &IntervalUnion) -> bool {
        self.intervals.iter().all(|iv| match other.component_of(&iv.left) {
            Some(k) => iv.right <= other.intervals[k].right,
            None => false,
        })
    }

    /// Canonical text form: one `left right` line per component.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for iv in &self.intervals {
            s.push_str(&format_rational(&iv.left));
            s.push(' ');
            s.push_str(&format_rational(&iv.right));
            s.push('\n');
        }
        s
    }

    /// Parses [`to_text`](Self::to_text) output; blank lines and `#` comments are skipped.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut raw = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            match (fields.next(), fields.next(), fields.next()) {
                (Some(l), Some(r), None) => {
                    raw.push(ClosedInterval::new(parse_rational(l)?, parse_rational(r)?)?);
                }
                _ => return Err(Error::Parse(format!("line {}: expected `left right`", lineno + 1))),
            }
        }
        Ok(Self::normalize(raw))
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "{{}}");
        }
        let parts: Vec<String> = self.intervals.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" ∪ "))
    }
}

impl Serialize for ClosedInterval {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        [format_rational(&self.left), format_rational(&self.right)].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ClosedInterval {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let [l, r] = <[String; 2]>::deserialize(deserializer)?;
        let l = parse_rational(&l).map_err(serde::de::Error::custom)?;
        let r = parse_rational(&r).map_err(serde::de::Error::custom)?;
        ClosedInterval::new(l, r).map_err(serde::de::Error::custom)
    }
}

impl Serialize for IntervalUnion {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.intervals.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntervalUnion {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Ok(Self::normalize(Vec::<ClosedInterval>::deserialize(deserializer)?))
    }
}
