//! Symbolic null sequences with exact terms.
//!
//! A [`SequenceSpec`] is an explicit prefix of leading terms followed by a
//! structured tail ([`TailKind`]), optionally with every sign flipped. All
//! tail-generated terms are strictly positive before negation, so a single
//! spec has at most one sign in its tail; mixed-sign sequences are expressed as
//! a [`MergedSpec`] of single-signed parts.

mod reorder;
mod signs;
mod tail;

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{pow, Rational};

pub use reorder::{nonincreasing_reorder, strand_decomposition, StrandDecomposition};
pub use signs::{MergedSpec, SignSplit, SummabilityClass};
pub use tail::{TailEnclosure, REFINE_LIMIT};

/// One geometric strand `first, first·ratio, first·ratio², …` of a merged sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricStrand {
    pub first: Rational,
    pub ratio: Rational,
}

impl GeometricStrand {
    pub fn new(first: Rational, ratio: Rational) -> Result<Self> {
        if !first.is_positive() {
            return Err(Error::InvalidSpec(format!("strand start {first} is not positive")));
        }
        check_unit_ratio(&ratio, "strand ratio")?;
        Ok(Self { first, ratio })
    }

    /// Sum of the strand after its first `consumed` terms.
    pub fn tail_after(&self, consumed: u64) -> Rational {
        &self.first * pow(&self.ratio, consumed) / (Rational::one() - &self.ratio)
    }
}

/// Structured tail following the explicit prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TailKind {
    /// No further terms: the sequence is finite.
    None,
    /// `a·rho^(i-1)` for `i = 1, 2, …`.
    Geometric { a: Rational, rho: Rational },
    /// `coef / k^p` for `k = start, start+1, …`. `p = 1` is the (divergent)
    /// harmonic family; `p >= 2` is summable.
    PSeries { p: u32, start: u64, coef: Rational },
    /// Periodic ratio sequence: `x_{i+1} = rho_{i mod m}·X_i`,
    /// `X_{i+1} = (1 - rho_{i mod m})·X_i`, starting from `X_0 = total`.
    Multigeometric { ratios: Vec<Rational>, total: Rational },
    /// Round-robin interleaving of positive sequences.
    Interleave(Vec<SequenceSpec>),
    /// Non-increasing merge of finitely many explicit terms and geometric
    /// strands. Produced by [`nonincreasing_reorder`].
    SortedMerge { finite: Vec<Rational>, strands: Vec<GeometricStrand> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceSpec {
    prefix: Vec<Rational>,
    tail: TailKind,
    negated: bool,
}

fn check_unit_ratio(r: &Rational, what: &str) -> Result<()> {
    if r.is_positive() && r < &Rational::one() {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!("{what} {r} must lie in (0, 1)")))
    }
}

fn check_positive(r: &Rational, what: &str) -> Result<()> {
    if r.is_positive() {
        Ok(())
    } else {
        Err(Error::InvalidSpec(format!("{what} {r} must be positive")))
    }
}

impl TailKind {
    fn validate(&self) -> Result<()> {
        match self {
            TailKind::None => Ok(()),
            TailKind::Geometric { a, rho } => {
                check_positive(a, "geometric first term")?;
                check_unit_ratio(rho, "geometric ratio")
            }
            TailKind::PSeries { p, start, coef } => {
                if *p == 0 {
                    return Err(Error::UnsupportedExponent("0".into()));
                }
                if *start == 0 {
                    return Err(Error::InvalidSpec("p-series must start at k >= 1".into()));
                }
                check_positive(coef, "p-series coefficient")
            }
            TailKind::Multigeometric { ratios, total } => {
                if ratios.is_empty() {
                    return Err(Error::InvalidSpec("multigeometric needs at least one ratio".into()));
                }
                for r in ratios {
                    check_unit_ratio(r, "multigeometric ratio")?;
                }
                check_positive(total, "multigeometric total")
            }
            TailKind::Interleave(parts) => {
                for part in parts {
                    if !part.is_positive() {
                        return Err(Error::InvalidSpec("interleaved parts must be positive".into()));
                    }
                }
                Ok(())
            }
            TailKind::SortedMerge { finite, strands } => {
                for t in finite {
                    check_positive(t, "merged term")?;
                }
                for s in strands {
                    check_positive(&s.first, "strand start")?;
                    check_unit_ratio(&s.ratio, "strand ratio")?;
                }
                Ok(())
            }
        }
    }

    fn scaled(&self, c: &Rational) -> TailKind {
        match self {
            TailKind::None => TailKind::None,
            TailKind::Geometric { a, rho } => TailKind::Geometric { a: a * c, rho: rho.clone() },
            TailKind::PSeries { p, start, coef } => TailKind::PSeries { p: *p, start: *start, coef: coef * c },
            TailKind::Multigeometric { ratios, total } => {
                TailKind::Multigeometric { ratios: ratios.clone(), total: total * c }
            }
            TailKind::Interleave(parts) => {
                TailKind::Interleave(parts.iter().map(|p| p.scaled_unchecked(c)).collect())
            }
            TailKind::SortedMerge { finite, strands } => TailKind::SortedMerge {
                finite: finite.iter().map(|t| t * c).collect(),
                strands: strands
                    .iter()
                    .map(|s| GeometricStrand { first: &s.first * c, ratio: s.ratio.clone() })
                    .collect(),
            },
        }
    }

    /// Number of terms, or `None` for an infinite tail.
    fn len(&self) -> Option<usize> {
        match self {
            TailKind::None => Some(0),
            TailKind::Interleave(parts) => parts.iter().map(|p| p.len()).sum(),
            TailKind::SortedMerge { finite, strands } if strands.is_empty() => Some(finite.len()),
            _ => None,
        }
    }

    fn contains_pseries(&self) -> bool {
        match self {
            TailKind::PSeries { .. } => true,
            TailKind::Interleave(parts) => parts.iter().any(|p| p.tail.contains_pseries()),
            _ => false,
        }
    }

    fn terms(&self) -> Box<dyn Iterator<Item = Rational> + Send> {
        match self {
            TailKind::None => Box::new(std::iter::empty()),
            TailKind::Geometric { a, rho } => {
                let rho = rho.clone();
                Box::new(std::iter::successors(Some(a.clone()), move |x| Some(x * &rho)))
            }
            TailKind::PSeries { p, start, coef } => {
                let (p, coef) = (*p, coef.clone());
                Box::new((*start..).map(move |k| &coef / pow(&Rational::from_integer(k.into()), p as u64)))
            }
            TailKind::Multigeometric { ratios, total } => Box::new(MultigeometricTerms {
                ratios: ratios.clone(),
                rest: total.clone(),
                index: 0,
            }),
            TailKind::Interleave(parts) => Box::new(RoundRobin {
                children: parts.iter().map(|p| p.terms()).collect(),
                next: 0,
            }),
            TailKind::SortedMerge { finite, strands } => Box::new(SortedMergeTerms::new(finite, strands)),
        }
    }
}

struct MultigeometricTerms {
    ratios: Vec<Rational>,
    rest: Rational,
    index: usize,
}

impl Iterator for MultigeometricTerms {
    type Item = Rational;

    fn next(&mut self) -> Option<Rational> {
        let rho = &self.ratios[self.index % self.ratios.len()];
        let x = rho * &self.rest;
        self.rest -= &x;
        self.index += 1;
        Some(x)
    }
}

struct RoundRobin {
    children: Vec<Box<dyn Iterator<Item = Rational> + Send>>,
    next: usize,
}

impl Iterator for RoundRobin {
    type Item = Rational;

    fn next(&mut self) -> Option<Rational> {
        while !self.children.is_empty() {
            if self.next >= self.children.len() {
                self.next = 0;
            }
            match self.children[self.next].next() {
                Some(x) => {
                    self.next += 1;
                    return Some(x);
                }
                None => {
                    drop(self.children.remove(self.next));
                }
            }
        }
        None
    }
}

/// Lazy k-way merge: each source is non-increasing, so a max-heap keyed on
/// the current head of every source yields the global non-increasing order.
/// Ties go to the lower source index (finite terms first).
pub(crate) struct SortedMergeTerms {
    finite: Vec<Rational>,
    strands: Vec<GeometricStrand>,
    heap: BinaryHeap<(Rational, Reverse<usize>)>,
    finite_pos: usize,
    /// Terms taken from each strand so far.
    pub(crate) consumed: Vec<u64>,
    /// Current head of each strand.
    heads: Vec<Rational>,
}

impl SortedMergeTerms {
    pub(crate) fn new(finite: &[Rational], strands: &[GeometricStrand]) -> Self {
        let mut finite = finite.to_vec();
        finite.sort_by(|a, b| b.cmp(a));
        let mut heap = BinaryHeap::new();
        if let Some(f) = finite.first() {
            heap.push((f.clone(), Reverse(0)));
        }
        for (j, s) in strands.iter().enumerate() {
            heap.push((s.first.clone(), Reverse(j + 1)));
        }
        Self {
            finite,
            strands: strands.to_vec(),
            heap,
            finite_pos: 0,
            consumed: vec![0; strands.len()],
            heads: strands.iter().map(|s| s.first.clone()).collect(),
        }
    }

    /// Exact sum of all terms not yet produced.
    pub(crate) fn remaining_sum(&self) -> Rational {
        let mut total: Rational = self.finite[self.finite_pos..].iter().sum();
        for (s, &c) in self.strands.iter().zip(&self.consumed) {
            total += s.tail_after(c);
        }
        total
    }
}

impl Iterator for SortedMergeTerms {
    type Item = Rational;

    fn next(&mut self) -> Option<Rational> {
        let (value, Reverse(src)) = self.heap.pop()?;
        if src == 0 {
            self.finite_pos += 1;
            if let Some(f) = self.finite.get(self.finite_pos) {
                self.heap.push((f.clone(), Reverse(0)));
            }
        } else {
            let j = src - 1;
            self.consumed[j] += 1;
            let next = &self.heads[j] * &self.strands[j].ratio;
            self.heads[j] = next.clone();
            self.heap.push((next, Reverse(src)));
        }
        Some(value)
    }
}

impl SequenceSpec {
    pub fn new(prefix: Vec<Rational>, tail: TailKind, negated: bool) -> Result<Self> {
        if let Some(z) = prefix.iter().position(Zero::is_zero) {
            return Err(Error::InvalidSpec(format!("prefix term {} is zero", z + 1)));
        }
        tail.validate()?;
        Ok(Self { prefix, tail, negated })
    }

    pub fn finite(terms: Vec<Rational>) -> Result<Self> {
        Self::new(terms, TailKind::None, false)
    }

    pub fn empty() -> Self {
        Self { prefix: Vec::new(), tail: TailKind::None, negated: false }
    }

    pub fn geometric(a: Rational, rho: Rational) -> Result<Self> {
        Self::new(Vec::new(), TailKind::Geometric { a, rho }, false)
    }

    pub fn pseries(p: u32) -> Result<Self> {
        Self::new(Vec::new(), TailKind::PSeries { p, start: 1, coef: Rational::one() }, false)
    }

    pub fn harmonic() -> Self {
        Self::pseries(1).expect("harmonic is valid")
    }

    pub fn multigeometric(ratios: Vec<Rational>, total: Rational) -> Result<Self> {
        Self::new(Vec::new(), TailKind::Multigeometric { ratios, total }, false)
    }

    /// Bi-geometric sequence: ratios alternate `alpha` (even index) and `beta`.
    pub fn bigeometric(alpha: Rational, beta: Rational, total: Rational) -> Result<Self> {
        Self::multigeometric(vec![alpha, beta], total)
    }

    pub fn interleave(parts: Vec<SequenceSpec>) -> Result<Self> {
        Self::new(Vec::new(), TailKind::Interleave(parts), false)
    }

    pub fn with_prefix(mut self, prefix: Vec<Rational>) -> Result<Self> {
        self.prefix = prefix;
        Self::new(self.prefix, self.tail, self.negated)
    }

    /// Flips the sign of every term.
    pub fn negated(mut self) -> Self {
        self.negated = !self.negated;
        self
    }

    /// Multiplies every term by `c > 0`.
    pub fn scaled(&self, c: &Rational) -> Result<Self> {
        check_positive(c, "scale factor")?;
        Ok(self.scaled_unchecked(c))
    }

    fn scaled_unchecked(&self, c: &Rational) -> Self {
        Self {
            prefix: self.prefix.iter().map(|t| t * c).collect(),
            tail: self.tail.scaled(c),
            negated: self.negated,
        }
    }

    pub fn prefix(&self) -> &[Rational] {
        &self.prefix
    }

    pub fn tail_kind(&self) -> &TailKind {
        &self.tail
    }

    pub fn is_negated(&self) -> bool {
        self.negated
    }

    /// True when every term is strictly positive.
    pub fn is_positive(&self) -> bool {
        !self.negated && self.prefix.iter().all(Signed::is_positive)
    }

    /// Number of terms, or `None` for an infinite sequence.
    pub fn len(&self) -> Option<usize> {
        self.tail.len().map(|t| t + self.prefix.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    pub(crate) fn contains_pseries(&self) -> bool {
        self.tail.contains_pseries()
    }

    /// Every term in order, signs included.
    pub fn terms(&self) -> Box<dyn Iterator<Item = Rational> + Send> {
        let prefix = self.prefix.clone().into_iter();
        let all = prefix.chain(self.tail.terms());
        if self.negated {
            Box::new(all.map(|x| -x))
        } else {
            Box::new(all)
        }
    }

    /// The first `n` terms (fewer if the sequence is shorter).
    pub fn first_terms(&self, n: usize) -> Vec<Rational> {
        self.terms().take(n).collect()
    }

    /// The exact `i`-th term (1-based), sign included.
    pub fn term(&self, i: usize) -> Result<Rational> {
        if i == 0 {
            return Err(Error::InvalidSpec("terms are indexed from 1".into()));
        }
        let magnitude = if i <= self.prefix.len() {
            self.prefix[i - 1].clone()
        } else {
            let j = (i - self.prefix.len()) as u64;
            match &self.tail {
                TailKind::Geometric { a, rho } => a * pow(rho, j - 1),
                TailKind::PSeries { p, start, coef } => {
                    coef / pow(&Rational::from_integer((start + j - 1).into()), *p as u64)
                }
                TailKind::Multigeometric { ratios, total } => {
                    let m = ratios.len() as u64;
                    let idx = j - 1;
                    let rest = multigeometric_rest(ratios, total, idx);
                    &ratios[(idx % m) as usize] * rest
                }
                _ => {
                    let len = self.len();
                    let x = self.tail.terms().nth((j - 1) as usize);
                    match (x, len) {
                        (Some(x), _) => x,
                        (None, Some(len)) => return Err(Error::IndexBeyondFinite { index: i, len }),
                        (None, None) => unreachable!("infinite tail ended"),
                    }
                }
            }
        };
        Ok(if self.negated { -magnitude } else { magnitude })
    }

    /// The same sequence with every term replaced by its absolute value.
    pub fn abs(&self) -> Self {
        Self {
            prefix: self.prefix.iter().map(Signed::abs).collect(),
            tail: self.tail.clone(),
            negated: false,
        }
    }
}

/// `X_i` for a multigeometric tail: `total·∏_{j<i}(1 - rho_{j mod m})`.
pub(crate) fn multigeometric_rest(ratios: &[Rational], total: &Rational, i: u64) -> Rational {
    let m = ratios.len() as u64;
    let period: Rational = ratios.iter().map(|r| Rational::one() - r).product();
    let mut rest = total * pow(&period, i / m);
    for r in &ratios[..(i % m) as usize] {
        rest *= Rational::one() - r;
    }
    rest
}
