//! Rigorous rational enclosures of tail sums `X_n = Σ_{k>n} |x_k|`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{multigeometric_rest, SequenceSpec, SortedMergeTerms, TailKind};
use crate::error::{Error, Result};
use crate::rational::{pow, Rational};

/// A closed rational interval known to contain a tail sum, or the marker for a
/// divergent tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TailEnclosure {
    Bounded { lo: Rational, hi: Rational },
    Divergent,
}

impl TailEnclosure {
    pub fn exact(value: Rational) -> Self {
        TailEnclosure::Bounded { lo: value.clone(), hi: value }
    }

    pub fn lo(&self) -> Option<&Rational> {
        match self {
            TailEnclosure::Bounded { lo, .. } => Some(lo),
            TailEnclosure::Divergent => None,
        }
    }

    pub fn hi(&self) -> Option<&Rational> {
        match self {
            TailEnclosure::Bounded { hi, .. } => Some(hi),
            TailEnclosure::Divergent => None,
        }
    }

    /// The value itself when the enclosure is a single point.
    pub fn value(&self) -> Option<&Rational> {
        match self {
            TailEnclosure::Bounded { lo, hi } if lo == hi => Some(lo),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.value().is_some()
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self, TailEnclosure::Divergent)
    }

    pub fn width(&self) -> Option<Rational> {
        match self {
            TailEnclosure::Bounded { lo, hi } => Some(hi - lo),
            TailEnclosure::Divergent => None,
        }
    }

    pub fn shift(&self, by: &Rational) -> Self {
        match self {
            TailEnclosure::Bounded { lo, hi } => TailEnclosure::Bounded { lo: lo + by, hi: hi + by },
            TailEnclosure::Divergent => TailEnclosure::Divergent,
        }
    }

    pub fn plus(&self, other: &TailEnclosure) -> Self {
        match (self, other) {
            (TailEnclosure::Bounded { lo: a, hi: b }, TailEnclosure::Bounded { lo: c, hi: d }) => {
                TailEnclosure::Bounded { lo: a + c, hi: b + d }
            }
            _ => TailEnclosure::Divergent,
        }
    }

    /// Reflection `x ↦ -x`; a divergent marker stays divergent (read as `-∞`).
    pub fn negate(&self) -> Self {
        match self {
            TailEnclosure::Bounded { lo, hi } => TailEnclosure::Bounded { lo: -hi, hi: -lo },
            TailEnclosure::Divergent => TailEnclosure::Divergent,
        }
    }

    /// True when `other` lies inside `self`.
    pub fn contains_enclosure(&self, other: &TailEnclosure) -> bool {
        match (self, other) {
            (TailEnclosure::Bounded { lo: a, hi: b }, TailEnclosure::Bounded { lo: c, hi: d }) => {
                a <= c && d <= b
            }
            (TailEnclosure::Divergent, TailEnclosure::Divergent) => true,
            _ => false,
        }
    }
}

impl fmt::Display for TailEnclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TailEnclosure::Bounded { lo, hi } if lo == hi => write!(f, "{lo}"),
            TailEnclosure::Bounded { lo, hi } => write!(f, "[{lo}, {hi}]"),
            TailEnclosure::Divergent => write!(f, "inf"),
        }
    }
}

/// Integral-test enclosure of `Σ_{k ≥ first} coef/k^p` after summing `extra`
/// explicit terms: `Σ_{k>K} 1/k^p ∈ [(K+1)^{1-p}/(p-1), K^{1-p}/(p-1)]`.
fn pseries_tail(p: u32, first: u64, coef: &Rational, extra: usize) -> TailEnclosure {
    if p < 2 {
        return TailEnclosure::Divergent;
    }
    // The upper integral bound needs K >= 1, so a tail from k = 1 always sums
    // at least one explicit term.
    let extra = if first == 1 { extra.max(1) } else { extra } as u64;
    let mut explicit = Rational::zero();
    for k in first..first + extra {
        explicit += Rational::new(BigInt::one(), BigInt::from(k).pow(p));
    }
    let last = first + extra - 1;
    let pm1 = Rational::from_integer(BigInt::from(p - 1));
    let lo_rest = Rational::new(BigInt::one(), BigInt::from(last + 1).pow(p - 1)) / &pm1;
    let hi_rest = Rational::new(BigInt::one(), BigInt::from(last).pow(p - 1)) / &pm1;
    TailEnclosure::Bounded { lo: coef * (&explicit + lo_rest), hi: coef * (explicit + hi_rest) }
}

/// Terms consumed from each interleaved part among the first `n` stream terms.
pub(crate) fn interleave_counts(lens: &[Option<usize>], n: usize) -> Vec<usize> {
    let mut counts = vec![0usize; lens.len()];
    let mut remaining = n;
    let mut round = 0usize;
    while remaining > 0 {
        let active: Vec<usize> = (0..lens.len()).filter(|&j| lens[j].is_none_or(|l| l > round)).collect();
        if active.is_empty() {
            break;
        }
        if lens.iter().enumerate().all(|(j, l)| l.is_none() || !active.contains(&j)) {
            // Only infinite parts remain; skip whole rounds at once.
            let full = remaining / active.len();
            for &j in &active {
                counts[j] += full;
            }
            remaining -= full * active.len();
            for &j in active.iter().take(remaining) {
                counts[j] += 1;
            }
            break;
        }
        if active.len() <= remaining {
            for &j in &active {
                counts[j] += 1;
            }
            remaining -= active.len();
            round += 1;
        } else {
            for &j in active.iter().take(remaining) {
                counts[j] += 1;
            }
            break;
        }
    }
    counts
}

impl TailKind {
    /// Enclosure of the tail-kind's own remainder after its first `consumed` terms.
    fn tail_after(&self, consumed: usize, extra: usize) -> TailEnclosure {
        match self {
            TailKind::None => TailEnclosure::exact(Rational::zero()),
            TailKind::Geometric { a, rho } => {
                TailEnclosure::exact(a * pow(rho, consumed as u64) / (Rational::one() - rho))
            }
            TailKind::PSeries { p, start, coef } => pseries_tail(*p, start + consumed as u64, coef, extra),
            TailKind::Multigeometric { ratios, total } => {
                TailEnclosure::exact(multigeometric_rest(ratios, total, consumed as u64))
            }
            TailKind::Interleave(parts) => {
                let lens: Vec<Option<usize>> = parts.iter().map(SequenceSpec::len).collect();
                let counts = interleave_counts(&lens, consumed);
                parts
                    .iter()
                    .zip(counts)
                    .fold(TailEnclosure::exact(Rational::zero()), |acc, (part, c)| {
                        acc.plus(&part.tail_refined(c, extra))
                    })
            }
            TailKind::SortedMerge { finite, strands } => {
                let mut merge = SortedMergeTerms::new(finite, strands);
                for _ in 0..consumed {
                    if merge.next().is_none() {
                        break;
                    }
                }
                TailEnclosure::exact(merge.remaining_sum())
            }
        }
    }
}

impl SequenceSpec {
    /// Enclosure of `X_n`, the sum of the absolute values of all terms after
    /// the first `n`.
    pub fn tail(&self, n: usize) -> TailEnclosure {
        self.tail_refined(n, 0)
    }

    /// As [`tail`](Self::tail), but inexact (p-series) remainders are bounded
    /// only after summing `extra` further terms exactly, which narrows the
    /// enclosure.
    pub fn tail_refined(&self, n: usize, extra: usize) -> TailEnclosure {
        let plen = self.prefix.len();
        if n <= plen {
            let explicit: Rational = self.prefix[n..].iter().map(Signed::abs).sum();
            self.tail.tail_after(0, extra).shift(&explicit)
        } else {
            self.tail.tail_after(n - plen, extra)
        }
    }

    /// Sum of absolute values of all terms: `X_0`.
    pub fn total(&self) -> TailEnclosure {
        self.tail(0)
    }

    pub fn is_summable(&self) -> bool {
        !self.total().is_divergent()
    }

    /// Decides `|x_n| > X_n`, refining inexact tails up to [`REFINE_LIMIT`]
    /// explicit terms.
    pub fn term_exceeds_tail(&self, n: usize) -> Result<bool> {
        let x = self.term(n)?.abs();
        let mut extra = 0;
        loop {
            match self.tail_refined(n, extra) {
                TailEnclosure::Divergent => return Ok(false),
                TailEnclosure::Bounded { lo, hi } => {
                    if x > hi {
                        return Ok(true);
                    }
                    if x <= lo {
                        return Ok(false);
                    }
                }
            }
            if extra >= REFINE_LIMIT {
                return Err(Error::IndeterminateComparison { index: n });
            }
            extra = (extra * 2).max(8);
        }
    }
}

/// Largest number of explicit terms summed when refining a tail enclosure.
pub const REFINE_LIMIT: usize = 512;
