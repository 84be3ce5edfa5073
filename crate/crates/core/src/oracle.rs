//! Brute-force subset-sum enumeration, used as ground truth for `C_n`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::{ClosedInterval, IntervalUnion};
use crate::rational::{format_rational, Rational};
use crate::sequence::{MergedSpec, SequenceSpec, TailEnclosure};

/// Largest truncation depth the oracle enumerates (2^20 subsets).
pub const ORACLE_DEPTH_LIMIT: usize = 20;

/// Anything that can list its leading terms.
pub trait TermSource {
    fn leading_terms(&self, n: usize) -> Vec<Rational>;
}

impl TermSource for SequenceSpec {
    fn leading_terms(&self, n: usize) -> Vec<Rational> {
        self.first_terms(n)
    }
}

impl TermSource for MergedSpec {
    fn leading_terms(&self, n: usize) -> Vec<Rational> {
        self.first_terms(n)
    }
}

impl TermSource for [Rational] {
    fn leading_terms(&self, n: usize) -> Vec<Rational> {
        self.iter().take(n).cloned().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetSumTable {
    pub n: usize,
    /// Every subset sum of the first `n` terms, ascending, without repeats.
    pub sums: Vec<Rational>,
}

fn check_depth(n: usize) -> Result<()> {
    if n > ORACLE_DEPTH_LIMIT {
        return Err(Error::DepthLimit { depth: n, limit: ORACLE_DEPTH_LIMIT });
    }
    Ok(())
}

/// Sums over all subsets of `values` added to `base`, in Gray-code order.
fn gray_sums(values: &[BigInt], base: BigInt) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(1 << values.len());
    let mut sum = base;
    out.push(sum.clone());
    let mut included = vec![false; values.len()];
    for step in 1u64..(1u64 << values.len()) {
        let bit = step.trailing_zeros() as usize;
        if included[bit] {
            sum -= &values[bit];
        } else {
            sum += &values[bit];
        }
        included[bit] = !included[bit];
        out.push(sum.clone());
    }
    out
}

pub fn subset_sums<S: TermSource + ?Sized>(spec: &S, n: usize) -> Result<SubsetSumTable> {
    check_depth(n)?;
    let terms = spec.leading_terms(n);
    let denom = terms.iter().fold(BigInt::one(), |acc, t| acc.lcm(t.denom()));
    let scaled: Vec<BigInt> = terms.iter().map(|t| t.numer() * (&denom / t.denom())).collect();

    let split = scaled.len().min(6);
    let (high, low) = scaled.split_at(split);
    let mut all: Vec<BigInt> = (0u64..(1u64 << high.len()))
        .into_par_iter()
        .flat_map_iter(|mask| {
            let base: BigInt = high
                .iter()
                .enumerate()
                .filter(|(j, _)| mask >> j & 1 == 1)
                .map(|(_, v)| v)
                .sum();
            gray_sums(low, base)
        })
        .collect();
    all.par_sort_unstable();
    all.dedup();
    let sums = all.into_iter().map(|s| Rational::new(s, denom.clone())).collect();
    Ok(SubsetSumTable { n: terms.len(), sums })
}

/// `C_n` from brute force: every subset sum fattened by `X_n.hi`.
pub fn oracle_cn(spec: &SequenceSpec, n: usize) -> Result<IntervalUnion> {
    check_depth(n)?;
    if !spec.is_positive() {
        return Err(Error::NotPositive);
    }
    let width = spec.tail(n).hi().cloned().ok_or(Error::DivergentTail)?;
    let table = subset_sums(spec, n)?;
    let raw = table
        .sums
        .into_iter()
        .map(|s| {
            let right = &s + &width;
            ClosedInterval::new(s, right).expect("width >= 0")
        })
        .collect();
    Ok(IntervalUnion::normalize(raw))
}

/// Signed `C_n` from brute force: `[s - X⁻_{>n}, s + X⁺_{>n}]` over the signed
/// subset sums `s`, with remaining positive and negative mass counted
/// separately.
pub fn oracle_cn_signed(spec: &MergedSpec, n: usize) -> Result<IntervalUnion> {
    check_depth(n)?;
    let split = spec.sign_split();
    let exact = |e: &TailEnclosure| e.value().cloned().ok_or(Error::DivergentTail);
    let (total_pos, total_neg) = (exact(&split.x_plus)?, -exact(&split.x_minus)?);
    let head = spec.first_terms(n);
    let used_pos: Rational = head.iter().filter(|t| t.is_positive()).sum();
    let used_neg: Rational = head.iter().filter(|t| t.is_negative()).map(Signed::abs).sum();
    let up = total_pos - used_pos;
    let down = total_neg - used_neg;
    let table = subset_sums(spec, n)?;
    let raw = table
        .sums
        .iter()
        .map(|s| ClosedInterval::new(s - &down, s + &up).expect("up, down >= 0"))
        .collect();
    Ok(IntervalUnion::normalize(raw))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Membership {
    /// Evidence only: `x` survived every tested depth.
    InAllTestedCn { depth: usize },
    /// Proof that `x` is not a subsum.
    ExcludedAtDepth { depth: usize },
}

pub fn membership_probe(spec: &SequenceSpec, x: &Rational, depth: usize) -> Result<Membership> {
    check_depth(depth)?;
    for d in 0..=depth {
        if !oracle_cn(spec, d)?.contains(x) {
            return Ok(Membership::ExcludedAtDepth { depth: d });
        }
    }
    Ok(Membership::InAllTestedCn { depth })
}

/// Components present in one union but not the other, as `-`/`+` lines.
pub fn union_diff(expected: &IntervalUnion, actual: &IntervalUnion) -> Vec<String> {
    let line = |sign: char, iv: &ClosedInterval| {
        format!("{sign} {} {}", format_rational(iv.left()), format_rational(iv.right()))
    };
    let key = |iv: &ClosedInterval| (iv.left().clone(), iv.right().clone());
    let (a, b) = (expected.intervals(), actual.intervals());
    let (mut i, mut j) = (0, 0);
    let (mut minus, mut plus) = (Vec::new(), Vec::new());
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) if x == y => {
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if key(x) < key(y) => {
                minus.push(line('-', x));
                i += 1;
            }
            (Some(x), None) => {
                minus.push(line('-', x));
                i += 1;
            }
            (_, Some(y)) => {
                plus.push(line('+', y));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    minus.extend(plus);
    minus
}

/// Sum of the first `n` terms.
pub fn partial_sum<S: TermSource + ?Sized>(spec: &S, n: usize) -> Rational {
    spec.leading_terms(n).iter().fold(Rational::zero(), |acc, t| acc + t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn strs(t: &SubsetSumTable) -> Vec<String> {
        t.sums.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn small_tables() {
        let thirds = SequenceSpec::geometric(rat(1, 3), rat(1, 3)).unwrap();
        assert_eq!(strs(&subset_sums(&thirds, 2).unwrap()), ["0", "1/9", "1/3", "4/9"]);
        let gn = SequenceSpec::bigeometric(rat(9, 20), rat(6, 11), rat(5, 3)).unwrap();
        assert_eq!(strs(&subset_sums(&gn, 2).unwrap()), ["0", "1/2", "3/4", "5/4"]);
        let halves = SequenceSpec::geometric(rat(1, 2), rat(1, 2)).unwrap();
        assert_eq!(oracle_cn(&halves, 8).unwrap().to_text(), "0 1\n");
    }

    #[test]
    fn depth_limit() {
        let thirds = SequenceSpec::geometric(rat(1, 3), rat(1, 3)).unwrap();
        assert!(matches!(subset_sums(&thirds, 21), Err(Error::DepthLimit { depth: 21, limit: 20 })));
    }

    #[test]
    fn probes() {
        let thirds = SequenceSpec::geometric(rat(1, 3), rat(1, 3)).unwrap();
        assert_eq!(membership_probe(&thirds, &rat(1, 4), 8).unwrap(), Membership::ExcludedAtDepth { depth: 1 });
        assert_eq!(membership_probe(&thirds, &rat(1, 3), 8).unwrap(), Membership::InAllTestedCn { depth: 8 });
    }

    #[test]
    fn diff_lines() {
        let a = IntervalUnion::from_text("0 1\n2 3\n").unwrap();
        let b = IntervalUnion::from_text("0 1\n2 4\n5 6\n").unwrap();
        assert_eq!(union_diff(&a, &b), ["- 2 3", "+ 2 4", "+ 5 6"]);
        assert!(union_diff(&a, &a).is_empty());
    }

    #[test]
    fn duplicate_terms_collapse() {
        let s = SequenceSpec::finite(vec![int(1), int(1), int(1)]).unwrap();
        assert_eq!(strs(&subset_sums(&s, 3).unwrap()), ["0", "1", "2", "3"]);
    }
}
