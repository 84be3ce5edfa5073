//! Term-versus-tail profiles with analytic eventual verdicts.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{pow, Rational};
use crate::sequence::{
    nonincreasing_reorder, strand_decomposition, GeometricStrand, SequenceSpec, SortedMergeTerms, TailKind,
};

/// Longest transient examined before giving up on a periodic proof.
pub const MAX_TRANSIENT: usize = 100_000;
const MAX_RATIO_EXPONENT: u32 = 8;
const MAX_STRANDS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// `x_n > X_n`
    TermExceedsTail,
    /// `x_n <= X_n`
    TailBoundsTerm,
    Indeterminate,
}

impl Comparison {
    pub fn symbol(self) -> char {
        match self {
            Comparison::TermExceedsTail => 'E',
            Comparison::TailBoundsTerm => 'B',
            Comparison::Indeterminate => '?',
        }
    }

    fn from_exceeds(exceeds: bool) -> Self {
        if exceeds {
            Comparison::TermExceedsTail
        } else {
            Comparison::TailBoundsTerm
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "pattern", rename_all = "snake_case")]
pub enum EventualVerdict {
    AllExceed,
    AllBound,
    /// `x_n <= X_n` for every `n > after`, and `x_after > X_after`.
    EventuallyBound { after: usize },
    /// Exceeds from some point on, but not from the start.
    ExceedsInfinitelyOften,
    /// Exceeds and bounds both occur infinitely often.
    BoundsInfinitelyOften,
}

impl EventualVerdict {
    pub fn exceeds_infinitely_often(&self) -> bool {
        matches!(
            self,
            EventualVerdict::AllExceed | EventualVerdict::ExceedsInfinitelyOften | EventualVerdict::BoundsInfinitelyOften
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum ProofTag {
    GeometricRatio,
    /// Comparisons repeat with `period` after the first `transient` positions.
    MultigeometricPeriod { period: usize, transient: usize },
    /// Exceeds for `k <= k_exceed`, bounds for `k >= n_bound`.
    PseriesMonotone { k_exceed: u64, n_bound: u64 },
    FiniteSequence,
    DivergentTail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Eventual {
    pub verdict: EventualVerdict,
    pub proof: ProofTag,
}

/// Sorted sequence data for a sum of explicit terms and geometric strands
/// sharing one ratio `P`: for `n > transient`, `y_{n+period} = P·y_n`.
#[derive(Clone, Debug)]
pub struct PeriodicData {
    pub finite: Vec<Rational>,
    pub strands: Vec<GeometricStrand>,
    pub ratio: Rational,
    pub transient: usize,
    pub period: usize,
    /// `y_1 … y_{transient+period}`.
    pub terms: Vec<Rational>,
    /// `Y_1 … Y_{transient+period}`.
    pub tails: Vec<Rational>,
}

impl PeriodicData {
    fn horizon(&self) -> usize {
        self.transient + self.period
    }

    fn comparison(&self, n: usize) -> Comparison {
        let len = self.horizon();
        let idx = if n <= len {
            n
        } else if self.period == 0 {
            // Beyond a finite sequence both term and tail are zero.
            return Comparison::TailBoundsTerm;
        } else {
            self.transient + (n - self.transient - 1) % self.period + 1
        };
        Comparison::from_exceeds(self.terms[idx - 1] > self.tails[idx - 1])
    }
}

#[derive(Clone, Debug)]
pub struct PseriesData {
    pub p: u32,
    pub start: u64,
    pub prefix: Vec<Comparison>,
    /// `K`: largest `k` with `p - 1 >= k`.
    pub k_exceed: u64,
    /// `N`: least `k` with `p - 1 <= f_p(k)`.
    pub n_bound: u64,
    /// Decided comparisons for `K < k < N`.
    pub middle: Vec<Comparison>,
}

impl PseriesData {
    fn comparison(&self, n: usize) -> Comparison {
        if n <= self.prefix.len() {
            return self.prefix[n - 1];
        }
        let k = self.start + (n - self.prefix.len()) as u64 - 1;
        if k <= self.k_exceed {
            Comparison::TermExceedsTail
        } else if k >= self.n_bound {
            Comparison::TailBoundsTerm
        } else {
            self.middle[(k - self.k_exceed - 1) as usize]
        }
    }

    /// True for `1/k^p`, `k = 1, 2, …` up to a constant factor.
    pub fn is_pure(&self) -> bool {
        self.prefix.is_empty() && self.start == 1
    }
}

#[derive(Clone, Debug)]
pub enum Analytic {
    Periodic(PeriodicData),
    Pseries(PseriesData),
    Divergent,
}

#[derive(Clone, Debug)]
pub struct TermTailProfile {
    pub horizon: usize,
    /// Comparisons for `n = 1..=horizon` on the non-increasing rearrangement.
    pub comparisons: Vec<Comparison>,
    pub eventual: Option<Eventual>,
    pub reordered: SequenceSpec,
    pub analytic: Option<Analytic>,
}

impl TermTailProfile {
    /// The comparison at any `n >= 1`, from analytic data when available.
    pub fn comparison_at(&self, n: usize) -> Option<Comparison> {
        match &self.analytic {
            Some(Analytic::Periodic(data)) => Some(data.comparison(n)),
            Some(Analytic::Pseries(data)) => Some(data.comparison(n)),
            Some(Analytic::Divergent) => Some(Comparison::TailBoundsTerm),
            None => self.comparisons.get(n.checked_sub(1)?).copied(),
        }
    }

    /// Number of `n <= upto` at which the term exceeds the tail.
    pub fn exceed_count(&self, upto: usize) -> Option<usize> {
        let mut count = 0;
        for n in 1..=upto {
            if self.comparison_at(n)? == Comparison::TermExceedsTail {
                count += 1;
            }
        }
        Some(count)
    }

    pub fn symbols(&self) -> String {
        self.comparisons.iter().map(|c| c.symbol()).collect()
    }

    pub fn pseries(&self) -> Option<&PseriesData> {
        match &self.analytic {
            Some(Analytic::Pseries(data)) => Some(data),
            _ => None,
        }
    }

    pub fn periodic(&self) -> Option<&PeriodicData> {
        match &self.analytic {
            Some(Analytic::Periodic(data)) => Some(data),
            _ => None,
        }
    }
}

fn exact_root(value: &BigInt, k: u32) -> Option<BigInt> {
    let root = value.nth_root(k);
    (root.pow(k) == *value).then_some(root)
}

fn rational_root(r: &Rational, k: u32) -> Option<Rational> {
    Some(Rational::new(exact_root(r.numer(), k)?, exact_root(r.denom(), k)?))
}

/// Rewrites strands so they all share one ratio `P`, splitting a strand with
/// ratio `Q^k` into `L/k` strands of ratio `Q^L`.
pub(crate) fn common_ratio(strands: &[GeometricStrand]) -> Option<(Vec<GeometricStrand>, Rational)> {
    let first = strands.first()?;
    let r1 = &first.ratio;
    // r_j = r1^(a_j / b_j)
    let mut exps = Vec::with_capacity(strands.len());
    for s in strands {
        let found = (1..=MAX_RATIO_EXPONENT)
            .flat_map(|a| (1..=MAX_RATIO_EXPONENT).map(move |b| (a, b)))
            .find(|&(a, b)| pow(r1, a as u64) == pow(&s.ratio, b as u64))?;
        exps.push(found);
    }
    let d = exps.iter().fold(1u32, |acc, &(_, b)| acc.lcm(&b));
    let q = rational_root(r1, d)?;
    let ks: Vec<u32> = exps.iter().map(|&(a, b)| a * d / b).collect();
    let l = ks.iter().fold(1u32, |acc, k| acc.lcm(k));
    let ratio = pow(&q, l as u64);
    let mut out = Vec::new();
    for (s, &k) in strands.iter().zip(&ks) {
        let mut first = s.first.clone();
        for _ in 0..l / k {
            out.push(GeometricStrand { first: first.clone(), ratio: ratio.clone() });
            first *= &s.ratio;
        }
        if out.len() > MAX_STRANDS {
            return None;
        }
    }
    Some((out, ratio))
}

/// Exact sorted terms and tails of a positive sequence given as explicit terms
/// plus commensurable geometric strands.
pub(crate) fn periodic_data(spec: &SequenceSpec) -> Option<PeriodicData> {
    let decomposition = strand_decomposition(spec).ok()?;
    let finite = decomposition.finite;
    let (strands, ratio) = if decomposition.strands.is_empty() {
        (Vec::new(), Rational::zero())
    } else {
        common_ratio(&decomposition.strands)?
    };
    // Every value >= v is produced before the strands settle into lockstep.
    let Some(v) = finite.iter().chain(strands.iter().map(|s| &s.first)).min().cloned() else {
        let empty = Vec::new();
        return Some(PeriodicData { finite, strands, ratio, transient: 0, period: 0, terms: empty.clone(), tails: empty });
    };
    let mut transient = finite.len();
    for s in &strands {
        let mut x = s.first.clone();
        while x >= v {
            transient += 1;
            if transient > MAX_TRANSIENT {
                return None;
            }
            x *= &ratio;
        }
    }
    let period = strands.len();
    let total: Rational =
        finite.iter().sum::<Rational>() + strands.iter().map(|s| s.tail_after(0)).sum::<Rational>();
    let terms: Vec<Rational> = SortedMergeTerms::new(&finite, &strands).take(transient + period).collect();
    let mut rest = total;
    let tails = terms
        .iter()
        .map(|x| {
            rest -= x;
            rest.clone()
        })
        .collect();
    Some(PeriodicData { finite, strands, ratio, transient, period, terms, tails })
}

fn periodic_eventual(data: &PeriodicData, spec: &SequenceSpec) -> Eventual {
    let cmp: Vec<Comparison> = (1..=data.horizon()).map(|n| data.comparison(n)).collect();
    let (transient, pattern) = cmp.split_at(data.transient);
    let exceeds = |c: &&Comparison| **c == Comparison::TermExceedsTail;
    let verdict = if data.period == 0 {
        match cmp.iter().rposition(|c| *c == Comparison::TermExceedsTail) {
            Some(last) => EventualVerdict::EventuallyBound { after: last + 1 },
            None => EventualVerdict::AllBound,
        }
    } else if pattern.iter().all(|c| exceeds(&c)) {
        if transient.iter().all(|c| exceeds(&c)) {
            EventualVerdict::AllExceed
        } else {
            EventualVerdict::ExceedsInfinitelyOften
        }
    } else if pattern.iter().any(|c| exceeds(&c)) {
        EventualVerdict::BoundsInfinitelyOften
    } else {
        match transient.iter().rposition(|c| exceeds(&c)) {
            Some(last) => EventualVerdict::EventuallyBound { after: last + 1 },
            None => EventualVerdict::AllBound,
        }
    };
    let proof = if data.period == 0 {
        ProofTag::FiniteSequence
    } else if data.finite.is_empty() && matches!(spec.tail_kind(), TailKind::Geometric { .. }) && spec.prefix().is_empty() {
        ProofTag::GeometricRatio
    } else {
        ProofTag::MultigeometricPeriod { period: data.period, transient: data.transient }
    };
    Eventual { verdict, proof }
}

/// `(p-1)·(k+1)^{p-1} <= k^p`, i.e. `p - 1 <= f_p(k)` with
/// `f_p(x) = (x+1)(x/(x+1))^p`.
pub fn pseries_bound_holds(p: u32, k: u64) -> bool {
    let lhs = BigInt::from(p - 1) * BigInt::from(k + 1).pow(p - 1);
    lhs <= BigInt::from(k).pow(p)
}

/// `f_p(k)` as an exact rational.
pub fn f_p(p: u32, k: u64) -> Rational {
    Rational::new(BigInt::from(k).pow(p), BigInt::from(k + 1).pow(p - 1))
}

/// `(K, N)` for the p-series: `K = p - 1`, `N` the least integer with
/// `p - 1 <= f_p(N)`. Monotonicity of `f_p` makes a doubling search valid.
pub fn pseries_thresholds(p: u32) -> (u64, u64) {
    let k_exceed = (p - 1) as u64;
    let mut hi = 1u64;
    while !pseries_bound_holds(p, hi) {
        hi *= 2;
    }
    let mut lo = hi / 2;
    // Invariant: bound fails at lo (or lo = 0), holds at hi.
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pseries_bound_holds(p, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (k_exceed, hi)
}

fn pseries_data(spec: &SequenceSpec) -> Result<PseriesData> {
    let (p, start) = match spec.tail_kind() {
        TailKind::PSeries { p, start, .. } => (*p, *start),
        _ => unreachable!("caller checked the tail kind"),
    };
    let mut prefix = Vec::new();
    for n in 1..=spec.prefix().len() {
        prefix.push(Comparison::from_exceeds(spec.term_exceeds_tail(n)?));
    }
    let (k_exceed, n_bound) = pseries_thresholds(p);
    let mut middle = Vec::new();
    for k in k_exceed + 1..n_bound {
        if k < start {
            middle.push(Comparison::Indeterminate);
            continue;
        }
        let n = spec.prefix().len() + (k - start) as usize + 1;
        middle.push(Comparison::from_exceeds(spec.term_exceeds_tail(n)?));
    }
    Ok(PseriesData { p, start, prefix, k_exceed, n_bound, middle })
}

fn pseries_eventual(data: &PseriesData) -> Eventual {
    let last_k = data.start.max(data.n_bound) + 1;
    let upto = data.prefix.len() + (last_k - data.start) as usize;
    let last = (1..=upto).rev().find(|&n| data.comparison(n) == Comparison::TermExceedsTail);
    let verdict = match last {
        Some(after) => EventualVerdict::EventuallyBound { after },
        None => EventualVerdict::AllBound,
    };
    Eventual { verdict, proof: ProofTag::PseriesMonotone { k_exceed: data.k_exceed, n_bound: data.n_bound } }
}

/// Term/tail comparisons for a positive sequence, taken on its non-increasing
/// rearrangement.
pub fn term_tail_profile(spec: &SequenceSpec, horizon: usize) -> Result<TermTailProfile> {
    if !spec.is_positive() {
        return Err(Error::NotPositive);
    }
    let reordered = nonincreasing_reorder(spec)?;
    let (analytic, eventual) = if !reordered.is_summable() {
        let ev = Eventual { verdict: EventualVerdict::AllBound, proof: ProofTag::DivergentTail };
        (Some(Analytic::Divergent), Some(ev))
    } else if let TailKind::PSeries { .. } = reordered.tail_kind() {
        let data = pseries_data(&reordered)?;
        let ev = pseries_eventual(&data);
        (Some(Analytic::Pseries(data)), Some(ev))
    } else {
        match periodic_data(&reordered) {
            Some(data) => {
                let ev = periodic_eventual(&data, &reordered);
                (Some(Analytic::Periodic(data)), Some(ev))
            }
            None => (None, None),
        }
    };
    let mut profile = TermTailProfile { horizon, comparisons: Vec::new(), eventual, reordered, analytic };
    profile.comparisons = (1..=horizon)
        .map(|n| match profile.comparison_at(n) {
            Some(c) => c,
            None => match profile.reordered.term_exceeds_tail(n) {
                Ok(b) => Comparison::from_exceeds(b),
                Err(Error::IndexBeyondFinite { .. }) => Comparison::TailBoundsTerm,
                Err(_) => Comparison::Indeterminate,
            },
        })
        .collect();
    Ok(profile)
}

/// Smallest `t <= max_t` with `P^t = 1/n` for an integer `2 <= n <= max_base`.
pub(crate) fn reciprocal_power(ratio: &Rational, max_t: u32, max_base: u64) -> Option<(u32, u64)> {
    (1..=max_t).find_map(|t| {
        let pt = pow(ratio, t as u64);
        (pt.numer().is_one() && pt.denom() >= &BigInt::from(2) && pt.denom() <= &BigInt::from(max_base))
            .then(|| (t, crate::rational::as_u64(&pt.recip()).expect("integer")))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn thirds_all_exceed() {
        let s = SequenceSpec::geometric(rat(1, 3), rat(1, 3)).unwrap();
        let p = term_tail_profile(&s, 10).unwrap();
        assert_eq!(p.symbols(), "EEEEEEEEEE");
        assert_eq!(
            p.eventual.unwrap(),
            Eventual { verdict: EventualVerdict::AllExceed, proof: ProofTag::GeometricRatio }
        );
    }

    #[test]
    fn basel_thresholds() {
        assert_eq!(pseries_thresholds(2), (1, 2));
        assert!(f_p(2, 1) < int(1));
        assert!(f_p(2, 2) >= int(1));
        let p = term_tail_profile(&SequenceSpec::pseries(2).unwrap(), 6).unwrap();
        assert_eq!(p.symbols(), "EBBBBB");
        assert_eq!(p.eventual.unwrap().verdict, EventualVerdict::EventuallyBound { after: 1 });
    }

    #[test]
    fn thresholds_bracket_for_many_p() {
        for p in 2..30u32 {
            let (k, n) = pseries_thresholds(p);
            assert_eq!(k, (p - 1) as u64);
            assert!(pseries_bound_holds(p, n));
            assert!(!pseries_bound_holds(p, n - 1));
            assert!(n > k);
        }
    }

    #[test]
    fn guthrie_nymann_even_positions() {
        let gn = SequenceSpec::bigeometric(rat(9, 20), rat(6, 11), rat(5, 3)).unwrap();
        let p = term_tail_profile(&gn, 12).unwrap();
        assert_eq!(p.symbols(), "BEBEBEBEBEBE");
        assert_eq!(p.eventual.unwrap().verdict, EventualVerdict::BoundsInfinitelyOften);
    }

    #[test]
    fn prefix_two_then_halves() {
        let s = SequenceSpec::geometric(rat(1, 2), rat(1, 2)).unwrap().with_prefix(vec![int(2)]).unwrap();
        let p = term_tail_profile(&s, 5).unwrap();
        assert_eq!(p.symbols(), "EBBBB");
        assert_eq!(p.eventual.unwrap().verdict, EventualVerdict::EventuallyBound { after: 1 });
    }

    #[test]
    fn incommensurable_strands_have_no_proof() {
        let s = SequenceSpec::interleave(vec![
            SequenceSpec::geometric(int(1), rat(1, 2)).unwrap(),
            SequenceSpec::geometric(int(1), rat(1, 3)).unwrap(),
        ])
        .unwrap();
        let p = term_tail_profile(&s, 6).unwrap();
        assert!(p.eventual.is_none());
        assert_eq!(p.comparisons.len(), 6);
    }

    #[test]
    fn common_ratio_splits_strands() {
        let strands = [
            GeometricStrand::new(int(1), rat(1, 4)).unwrap(),
            GeometricStrand::new(int(1), rat(1, 8)).unwrap(),
        ];
        let (out, ratio) = common_ratio(&strands).unwrap();
        assert_eq!(ratio, rat(1, 64));
        assert_eq!(out.len(), 3 + 2);
    }

    #[test]
    fn finite_sequence() {
        let s = SequenceSpec::finite(vec![int(1), int(1)]).unwrap();
        let p = term_tail_profile(&s, 4).unwrap();
        assert_eq!(p.symbols(), "BEBB");
        assert_eq!(p.eventual.unwrap().verdict, EventualVerdict::EventuallyBound { after: 2 });
    }
}
