//! Greedy subsequence filling for divergent positive sequences.
//!
//! Each round packs a run of consecutive unused terms into the current gap
//! `g`. The run starts at the first unused term `<= g`; if that leaves more
//! than `g/2` unfilled, it is discarded and the round restarts from the first
//! term `<= g/2`, which guarantees the new gap is below the term that did not
//! fit and hence at most `g/2`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};
use crate::sequence::{SequenceSpec, TailKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FillStatus {
    /// The target was hit exactly.
    Exact,
    /// The gap dropped below `eps`.
    Converged,
    /// `max_rounds` was reached first.
    RoundLimit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FillResult {
    /// Inclusive 1-based index runs of consecutive included terms.
    pub runs: Vec<(usize, usize)>,
    /// Exact residual after each round.
    pub gaps: Vec<Rational>,
    pub achieved: Rational,
    pub target: Rational,
    pub status: FillStatus,
}

impl FillResult {
    pub fn final_gap(&self) -> Rational {
        self.gaps.last().cloned().unwrap_or_else(|| self.target.clone())
    }

    pub fn included(&self) -> impl Iterator<Item = usize> + '_ {
        self.runs.iter().flat_map(|&(s, e)| s..=e)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "runs": self.runs.iter().map(|(s, e)| [s, e]).collect::<Vec<_>>(),
            "gaps": self.gaps.iter().map(format_rational).collect::<Vec<_>>(),
            "achieved": format_rational(&self.achieved),
            "target": format_rational(&self.target),
            "status": self.status,
        })
    }
}

/// Random access to terms, with a closed-form jump for p-series tails.
struct Terms<'a> {
    spec: &'a SequenceSpec,
    direct: bool,
    cache: Vec<Rational>,
    iter: Box<dyn Iterator<Item = Rational> + Send>,
}

impl<'a> Terms<'a> {
    fn new(spec: &'a SequenceSpec) -> Self {
        let direct = matches!(spec.tail_kind(), TailKind::Geometric { .. } | TailKind::PSeries { .. } | TailKind::None);
        Self { spec, direct, cache: Vec::new(), iter: spec.terms() }
    }

    fn get(&mut self, i: usize) -> Option<Rational> {
        if self.direct {
            return self.spec.term(i).ok();
        }
        while self.cache.len() < i {
            self.cache.push(self.iter.next()?);
        }
        Some(self.cache[i - 1].clone())
    }

    /// Smallest index `>= from` whose term is at most `t`.
    fn first_at_most(&mut self, from: usize, t: &Rational) -> Result<usize> {
        let mut i = from;
        if let TailKind::PSeries { p, start, coef } = self.spec.tail_kind() {
            let plen = self.spec.prefix().len();
            // The prefix is non-increasing, so it lies above `t` iff its last term does.
            if i > plen || self.spec.prefix().last().map_or(true, |x| x > t) {
                // coef / k^p <= t  <=>  k^p >= ceil(coef / t)
                let c: BigInt = (coef / t).ceil().to_integer();
                let mut k = c.nth_root(*p);
                if k.pow(*p) < c {
                    k += 1;
                }
                let k = k.max(BigInt::from(*start));
                let offset: usize = (k - BigInt::from(*start))
                    .try_into()
                    .map_err(|_| Error::InvalidSpec(format!("term index beyond range for {t}")))?;
                i = i.max(plen + offset + 1);
            }
        }
        let mut prev: Option<Rational> = None;
        loop {
            let x = self.get(i).ok_or(Error::NotDivergent)?;
            if let Some(p) = &prev {
                if &x > p {
                    return Err(Error::NotNonIncreasing { index: i });
                }
            }
            if &x <= t {
                return Ok(i);
            }
            prev = Some(x);
            i += 1;
        }
    }

    /// Consecutive terms from `start` while they fit in `gap`.
    fn run(&mut self, start: usize, gap: &Rational) -> Result<(usize, Rational)> {
        let mut sum = Rational::zero();
        let mut end = start - 1;
        let mut prev: Option<Rational> = None;
        loop {
            let x = self.get(end + 1).ok_or(Error::NotDivergent)?;
            if let Some(p) = &prev {
                if &x > p {
                    return Err(Error::NotNonIncreasing { index: end + 1 });
                }
            }
            if &sum + &x > *gap {
                return Ok((end, sum));
            }
            sum += &x;
            end += 1;
            if &sum == gap {
                return Ok((end, sum));
            }
            prev = Some(x);
        }
    }
}

fn check_leading_order(spec: &SequenceSpec) -> Result<()> {
    let head = spec.first_terms(spec.prefix().len() + 2);
    for (i, w) in head.windows(2).enumerate() {
        if w[1] > w[0] {
            return Err(Error::NotNonIncreasing { index: i + 2 });
        }
    }
    Ok(())
}

/// Chooses a subsequence summing towards `r`, halving the gap every round.
pub fn fill(spec: &SequenceSpec, r: &Rational, eps: &Rational, max_rounds: usize) -> Result<FillResult> {
    if !spec.is_positive() {
        return Err(Error::NotPositive);
    }
    if !r.is_positive() || !eps.is_positive() {
        return Err(Error::InvalidSpec("target and eps must be positive".into()));
    }
    if spec.is_summable() {
        return Err(Error::NotDivergent);
    }
    check_leading_order(spec)?;
    let mut terms = Terms::new(spec);
    let mut runs = Vec::new();
    let mut gaps = Vec::new();
    let mut achieved = Rational::zero();
    let mut gap = r.clone();
    let mut next = 1;
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let status = loop {
        if gap.is_zero() {
            break FillStatus::Exact;
        }
        if &gap < eps {
            break FillStatus::Converged;
        }
        if runs.len() >= max_rounds {
            break FillStatus::RoundLimit;
        }
        let limit = &gap * &half;
        let start = terms.first_at_most(next, &gap)?;
        let (mut start, (mut end, mut sum)) = (start, terms.run(start, &gap)?);
        if &gap - &sum > limit {
            start = terms.first_at_most(start, &limit)?;
            (end, sum) = terms.run(start, &gap)?;
        }
        achieved += &sum;
        gap -= &sum;
        runs.push((start, end));
        gaps.push(gap.clone());
        next = end + 1;
    };
    Ok(FillResult { runs, gaps, achieved, target: r.clone(), status })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn five_sixths_is_one_run() {
        let f = fill(&SequenceSpec::harmonic(), &rat(5, 6), &rat(1, 1000), 50).unwrap();
        assert_eq!(f.runs, vec![(2, 3)]);
        assert_eq!(f.status, FillStatus::Exact);
        assert_eq!(f.achieved, rat(5, 6));
    }

    #[test]
    fn one_half_is_one_term() {
        let f = fill(&SequenceSpec::harmonic(), &rat(1, 2), &rat(1, 1000), 50).unwrap();
        assert_eq!(f.runs, vec![(2, 2)]);
    }

    #[test]
    fn target_one_halves_gaps() {
        let r = int(1);
        let f = fill(&SequenceSpec::harmonic(), &r, &rat(1, 1_000_000), 200).unwrap();
        assert_ne!(f.status, FillStatus::RoundLimit);
        assert_eq!(&f.achieved + f.final_gap(), r);
        let mut prev = r.clone();
        for g in &f.gaps {
            assert!(g * int(2) <= prev);
            prev = g.clone();
        }
        for w in f.runs.windows(2) {
            assert!(w[1].0 > w[0].1);
        }
    }

    #[test]
    fn several_rounds() {
        let r = rat(7, 5);
        let f = fill(&SequenceSpec::harmonic(), &r, &rat(1, 1_000_000_000), 200).unwrap();
        assert_ne!(f.status, FillStatus::RoundLimit);
        assert!(f.gaps.len() >= 2);
        assert_eq!(&f.achieved + f.final_gap(), r);
    }

    #[test]
    fn rejects_summable_and_unsorted() {
        let halves = SequenceSpec::geometric(rat(1, 2), rat(1, 2)).unwrap();
        assert!(matches!(fill(&halves, &int(1), &rat(1, 10), 10), Err(Error::NotDivergent)));
        let bumpy = SequenceSpec::harmonic().with_prefix(vec![rat(1, 10)]).unwrap();
        assert!(matches!(fill(&bumpy, &int(1), &rat(1, 10), 10), Err(Error::NotNonIncreasing { .. })));
    }
}
