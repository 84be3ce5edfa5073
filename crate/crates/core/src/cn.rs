//! The nested approximations `C_n` of a subsum set.
//!
//! `C_n` is the union over all 0/1 words `ξ` of length `n` of the intervals
//! `J_ξ = [x_ξ, x_ξ + X_n]`, where `x_ξ` is the sum of the chosen terms. The
//! recursion carries only the left endpoints `x_ξ`; intervals are formed once,
//! at the requested depth.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::interval::{ClosedInterval, IntervalUnion};
use crate::rational::Rational;
use crate::sequence::{MergedSpec, SequenceSpec, TailEnclosure, TailKind};

/// Default cap on the number of distinct left endpoints.
pub const DEFAULT_CAP: usize = 1 << 22;

#[derive(Clone, Debug)]
pub struct CnResult {
    pub n: usize,
    /// Distinct subsums of the first `n` terms, ascending.
    pub left_endpoints: Vec<Rational>,
    /// Union of `[s, s + X_n.hi]`: always contains the true `C_n`.
    pub fattened: IntervalUnion,
    /// Union of `[s, s + X_n.lo]` when the tail is not known exactly.
    pub inner: Option<IntervalUnion>,
    pub tail_used: TailEnclosure,
}

impl CnResult {
    /// Smallest and largest component count consistent with the enclosure.
    pub fn component_range(&self) -> (usize, usize) {
        let outer = self.fattened.components();
        match &self.inner {
            Some(inner) => {
                let c = inner.components();
                (c.min(outer), c.max(outer))
            }
            None => (outer, outer),
        }
    }

    pub fn tail_exact(&self) -> bool {
        self.inner.is_none()
    }
}

/// Sorted, deduplicated `L ∪ (L + x)` for sorted, deduplicated `L`.
fn merge_shifted(current: &[Rational], x: &Rational, cap: usize) -> Result<Vec<Rational>> {
    let shifted: Vec<Rational> = current.iter().map(|s| s + x).collect();
    let mut out = Vec::with_capacity(current.len() * 2);
    let (mut i, mut j) = (0, 0);
    while i < current.len() || j < shifted.len() {
        let next = match (current.get(i), shifted.get(j)) {
            (Some(a), Some(b)) => match a.cmp(b) {
                Ordering::Less => {
                    i += 1;
                    a
                }
                Ordering::Greater => {
                    j += 1;
                    b
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                    a
                }
            },
            (Some(a), None) => {
                i += 1;
                a
            }
            (None, Some(b)) => {
                j += 1;
                b
            }
            (None, None) => unreachable!(),
        };
        if out.len() >= cap {
            return Err(Error::CapExceeded { cap });
        }
        out.push(next.clone());
    }
    Ok(out)
}

/// Distinct subsums of the first `n` terms of a positive spec.
pub fn left_endpoints(spec: &SequenceSpec, n: usize, cap: usize) -> Result<Vec<Rational>> {
    let mut sums = vec![Rational::zero()];
    for x in spec.terms().take(n) {
        sums = merge_shifted(&sums, &x, cap)?;
    }
    Ok(sums)
}

pub(crate) fn fatten(endpoints: &[Rational], width: &Rational, cap: usize) -> Result<IntervalUnion> {
    let intervals = endpoints.iter().map(|s| ClosedInterval::new(s.clone(), s + width).expect("width >= 0"));
    IntervalUnion::merge_sorted(intervals, Some(cap))
}

fn require_positive_summable(spec: &SequenceSpec) -> Result<()> {
    if !spec.is_positive() {
        return Err(Error::NotPositive);
    }
    if !spec.is_summable() {
        return Err(Error::DivergentTail);
    }
    Ok(())
}

pub fn build_cn(spec: &SequenceSpec, n: usize, cap: usize) -> Result<CnResult> {
    build_cn_refined(spec, n, cap, 0)
}

/// As [`build_cn`], with the tail enclosure refined by `extra` explicit terms.
pub fn build_cn_refined(spec: &SequenceSpec, n: usize, cap: usize, extra: usize) -> Result<CnResult> {
    require_positive_summable(spec)?;
    let tail = spec.tail_refined(n, extra);
    let (lo, hi) = match &tail {
        TailEnclosure::Bounded { lo, hi } => (lo.clone(), hi.clone()),
        TailEnclosure::Divergent => return Err(Error::DivergentTail),
    };
    let endpoints = left_endpoints(spec, n, cap)?;
    let fattened = fatten(&endpoints, &hi, cap)?;
    let inner = if lo == hi { None } else { Some(fatten(&endpoints, &lo, cap)?) };
    Ok(CnResult { n, left_endpoints: endpoints, fattened, inner, tail_used: tail })
}

/// `C_n` of an absolutely summable signed sequence: the positive
/// construction on `|x_n|`, translated by the sum of the negative terms.
pub fn build_cn_signed(spec: &MergedSpec, n: usize, cap: usize) -> Result<CnResult> {
    let split = spec.sign_split();
    let shift = match (&split.x_plus, &split.x_minus) {
        (TailEnclosure::Bounded { .. }, TailEnclosure::Bounded { lo, hi }) if lo == hi => lo.clone(),
        (TailEnclosure::Bounded { .. }, TailEnclosure::Bounded { .. }) => {
            return Err(Error::UnsupportedKind("negative part with an inexact sum".into()))
        }
        _ => return Err(Error::DivergentTail),
    };
    let mut result = build_cn(&spec.abs_spec(), n, cap)?;
    if !shift.is_zero() {
        result.left_endpoints.iter_mut().for_each(|s| *s += &shift);
        result.fattened = result.fattened.translate(&shift);
        result.inner = result.inner.map(|u| u.translate(&shift));
    }
    Ok(result)
}

/// An inclusion word `ξ_1 … ξ_n`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct WordPath(pub Vec<bool>);

impl WordPath {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromStr for WordPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse(format!("word {s:?} must be over {{0, 1}}"))),
            })
            .collect::<Result<Vec<bool>>>()
            .map(WordPath)
    }
}

impl fmt::Display for WordPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// `J_ξ = [x_ξ, x_ξ + X_n.hi]` with `n = |ξ|`.
pub fn word_interval(spec: &SequenceSpec, xi: &WordPath) -> Result<ClosedInterval> {
    require_positive_summable(spec)?;
    let mut left = Rational::zero();
    for (x, &bit) in spec.terms().zip(&xi.0) {
        if bit {
            left += x;
        }
    }
    let width = spec.tail(xi.len()).hi().cloned().ok_or(Error::DivergentTail)?;
    let right = &left + width;
    ClosedInterval::new(left, right)
}

/// `x ↦ scale·x + offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub scale: Rational,
    pub offset: Rational,
}

impl AffineMap {
    pub fn apply(&self, x: &Rational) -> Rational {
        &self.scale * x + &self.offset
    }

    pub fn apply_union(&self, u: &IntervalUnion) -> IntervalUnion {
        let raw = u
            .intervals()
            .iter()
            .map(|iv| ClosedInterval::new(self.apply(iv.left()), self.apply(iv.right())).expect("scale > 0"))
            .collect();
        IntervalUnion::normalize(raw)
    }
}

/// The four similarities `φ_00, φ_01, φ_10, φ_11` of a bi-geometric sequence,
/// all with scale `λ = (1-α)(1-β)`.
pub fn ifs_maps(spec: &SequenceSpec) -> Result<[AffineMap; 4]> {
    let (alpha, beta, total) = match spec.tail_kind() {
        TailKind::Multigeometric { ratios, total }
            if ratios.len() == 2 && spec.prefix().is_empty() && !spec.is_negated() =>
        {
            (&ratios[0], &ratios[1], total)
        }
        _ => return Err(Error::WrongKind("IFS maps need a period-2 multigeometric sequence".into())),
    };
    let one = Rational::one();
    let lambda = (&one - alpha) * (&one - beta);
    let x1 = alpha * total;
    let x2 = beta * (&one - alpha) * total;
    let offsets = [Rational::zero(), x2.clone(), x1.clone(), x1 + x2];
    Ok(offsets.map(|offset| AffineMap { scale: lambda.clone(), offset }))
}

/// Checks the gap lemma at stage `n` for a positive non-increasing summable
/// sequence. Returns whether `x_n > X_n`; when it does, also verifies that every
/// component `[a, b]` of `C_{n-1}` leaves `[a, a+X_n]` and `[b-X_n, b]` as
/// components of `C_n`.
pub fn leftmost_gap_check(spec: &SequenceSpec, n: usize, cap: usize) -> Result<bool> {
    require_positive_summable(spec)?;
    if n == 0 {
        return Err(Error::InvalidSpec("stage n must be at least 1".into()));
    }
    let head = spec.first_terms(n + 1);
    if let Some(k) = head.windows(2).position(|w| w[0] < w[1]) {
        return Err(Error::NotNonIncreasing { index: k + 2 });
    }
    if !spec.term_exceeds_tail(n)? {
        return Ok(false);
    }
    let x_n = spec.term(n)?;
    let width = spec.tail(n).hi().cloned().ok_or(Error::DivergentTail)?;
    let before = left_endpoints(spec, n - 1, cap)?;
    let after = merge_shifted(&before, &x_n, cap)?;
    let parent = fatten(&before, &(&x_n + &width), cap)?;
    let child = fatten(&after, &width, cap)?;
    let is_component = |left: &Rational| {
        let expected = ClosedInterval::new(left.clone(), left + &width).expect("width >= 0");
        child.component_of(left).map(|k| &child.intervals()[k]) == Some(&expected)
    };
    for comp in parent.intervals() {
        let b_minus = comp.right() - &width;
        if !is_component(comp.left()) || !is_component(&b_minus) {
            return Err(Error::GapCheckFailed { index: n, detail: format!("component {comp} of C_{}", n - 1) });
        }
    }
    Ok(true)
}
