//! Non-increasing rearrangement of positive sequences.

use num_traits::One;

use super::{GeometricStrand, SequenceSpec, TailKind};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// A positive sequence written as finitely many explicit terms plus geometric
/// strands. As a multiset of terms this is the original sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrandDecomposition {
    pub finite: Vec<Rational>,
    pub strands: Vec<GeometricStrand>,
}

impl StrandDecomposition {
    fn absorb(&mut self, other: StrandDecomposition) {
        self.finite.extend(other.finite);
        self.strands.extend(other.strands);
    }

    pub fn into_spec(self) -> SequenceSpec {
        SequenceSpec {
            prefix: Vec::new(),
            tail: TailKind::SortedMerge { finite: self.finite, strands: self.strands },
            negated: false,
        }
    }
}

/// Splits a positive, p-series-free sequence into explicit terms and strands.
pub fn strand_decomposition(spec: &SequenceSpec) -> Result<StrandDecomposition> {
    if !spec.is_positive() {
        return Err(Error::NotPositive);
    }
    let mut out = StrandDecomposition { finite: spec.prefix.clone(), strands: Vec::new() };
    match &spec.tail {
        TailKind::None => {}
        TailKind::Geometric { a, rho } => {
            out.strands.push(GeometricStrand { first: a.clone(), ratio: rho.clone() });
        }
        TailKind::PSeries { .. } => {
            return Err(Error::UnsupportedKind("p-series has no geometric strand form".into()));
        }
        TailKind::Multigeometric { ratios, total } => {
            let period: Rational = ratios.iter().map(|r| Rational::one() - r).product();
            let mut rest = total.clone();
            for r in ratios {
                out.strands.push(GeometricStrand { first: r * &rest, ratio: period.clone() });
                rest *= Rational::one() - r;
            }
        }
        TailKind::Interleave(parts) => {
            for part in parts {
                out.absorb(strand_decomposition(part)?);
            }
        }
        TailKind::SortedMerge { finite, strands } => {
            out.finite.extend(finite.iter().cloned());
            out.strands.extend(strands.iter().cloned());
        }
    }
    Ok(out)
}

fn tail_nonincreasing(tail: &TailKind) -> bool {
    match tail {
        TailKind::None | TailKind::Geometric { .. } | TailKind::PSeries { .. } | TailKind::SortedMerge { .. } => true,
        TailKind::Multigeometric { ratios, .. } => {
            // x_{i+m} = P·x_i, so the first m+1 terms decide monotonicity.
            let xs: Vec<Rational> = tail.terms().take(ratios.len() + 1).collect();
            xs.windows(2).all(|w| w[0] >= w[1])
        }
        TailKind::Interleave(_) => false,
    }
}

fn is_structurally_nonincreasing(spec: &SequenceSpec) -> bool {
    if !spec.prefix.windows(2).all(|w| w[0] >= w[1]) || !tail_nonincreasing(&spec.tail) {
        return false;
    }
    match (spec.prefix.last(), spec.tail.terms().next()) {
        (Some(last), Some(first)) => *last >= first,
        _ => true,
    }
}

/// The non-increasing rearrangement of a positive sequence.
///
/// Sequences that are already non-increasing come back unchanged; otherwise
/// the result is a sorted merge of the strand decomposition.
pub fn nonincreasing_reorder(spec: &SequenceSpec) -> Result<SequenceSpec> {
    if !spec.is_positive() {
        return Err(Error::NotPositive);
    }
    if is_structurally_nonincreasing(spec) {
        return Ok(spec.clone());
    }
    if spec.contains_pseries() {
        if let TailKind::PSeries { .. } = &spec.tail {
            let mut prefix = spec.prefix.clone();
            prefix.sort_by(|a, b| b.cmp(a));
            let sorted = SequenceSpec { prefix, tail: spec.tail.clone(), negated: false };
            if is_structurally_nonincreasing(&sorted) {
                return Ok(sorted);
            }
        }
        return Err(Error::UnsupportedKind(
            "cannot rearrange a p-series mixed with larger-than-head terms".into(),
        ));
    }
    Ok(strand_decomposition(spec)?.into_spec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    #[test]
    fn kenyon_reorders_by_merge() {
        let k = SequenceSpec::bigeometric(rat(9, 14), rat(3, 10), rat(7, 3)).unwrap();
        let r = nonincreasing_reorder(&k).unwrap();
        assert_eq!(
            r.first_terms(7),
            vec![rat(6, 4), rat(6, 16), rat(1, 4), rat(6, 64), rat(1, 16), rat(6, 256), rat(1, 64)]
        );
        assert_eq!(r.tail(0), k.tail(0));
    }

    #[test]
    fn already_monotone_is_untouched() {
        let gn = SequenceSpec::bigeometric(rat(9, 20), rat(6, 11), rat(5, 3)).unwrap();
        assert_eq!(nonincreasing_reorder(&gn).unwrap(), gn);
        let p = SequenceSpec::pseries(2).unwrap();
        assert_eq!(nonincreasing_reorder(&p).unwrap(), p);
    }

    #[test]
    fn sorts_finite_and_rejects_signed() {
        let f = SequenceSpec::finite(vec![int(1), int(3), int(2)]).unwrap();
        assert_eq!(nonincreasing_reorder(&f).unwrap().first_terms(5), vec![int(3), int(2), int(1)]);
        let neg = SequenceSpec::finite(vec![int(1), int(-1)]).unwrap();
        assert!(matches!(nonincreasing_reorder(&neg), Err(Error::NotPositive)));
    }

    #[test]
    fn pseries_with_small_prefix_is_unsupported() {
        let s = SequenceSpec::pseries(2).unwrap().with_prefix(vec![rat(1, 100)]).unwrap();
        assert!(matches!(nonincreasing_reorder(&s), Err(Error::UnsupportedKind(_))));
        let ok = SequenceSpec::pseries(2).unwrap().with_prefix(vec![int(1), int(3)]).unwrap();
        assert_eq!(nonincreasing_reorder(&ok).unwrap().first_terms(3), vec![int(3), int(1), int(1)]);
    }
}
