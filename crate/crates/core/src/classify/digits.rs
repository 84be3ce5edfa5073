//! Residue coverage of integer digit sets.
//!
//! A positive sequence whose terms are `g·p_j·n^{-k}` (`k >= 0`, integer
//! numerators `p_j`) has subsum set `g·n·{Σ_{k>=1} d_k n^{-k} : d_k ∈ D}` with
//! `D` the subset sums of the `p_j`. When `D` meets every residue class mod
//! `n`, the set has nonempty interior.

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::profile::{common_ratio, reciprocal_power};
use crate::error::{Error, Result};
use crate::rational::{rational_gcd, Rational};
use crate::sequence::{nonincreasing_reorder, strand_decomposition, GeometricStrand};
use crate::SequenceSpec;

/// Largest base tried when searching for a digit form.
pub const MAX_DIGIT_BASE: u64 = 12;
const MAX_DIGIT_STRANDS: usize = 16;
const INJECTIVITY_DEPTH: u32 = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DigitRepresentative {
    pub residue: u64,
    pub digit: i64,
    /// Indices into the numerator list whose sum is `digit`.
    pub subset: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverageCertificate {
    pub base: u64,
    pub numerators: Vec<i64>,
    /// All distinct subset sums of the numerators.
    pub digit_set: Vec<i64>,
    /// One digit per residue class.
    pub representatives: Vec<DigitRepresentative>,
    /// Expansions of length `1..=injective_to` over the representatives were
    /// checked to have pairwise distinct fractional parts.
    pub injective_to: u32,
}

/// The sequence in digit form: terms `scale·p_j·base^{-k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitForm {
    pub base: u64,
    pub scale: Rational,
    pub numerators: Vec<i64>,
}

/// Checks that subset sums of `numerators` cover every residue mod `base`.
pub fn digit_coverage_test(base: u64, numerators: &[i64]) -> Result<Option<CoverageCertificate>> {
    if base < 2 {
        return Err(Error::NotDigitForm(format!("base {base} is below 2")));
    }
    if numerators.len() > MAX_DIGIT_STRANDS {
        return Err(Error::NotDigitForm(format!("{} numerators exceed the limit", numerators.len())));
    }
    let b = base as i64;
    let mut best: Vec<Option<DigitRepresentative>> = vec![None; base as usize];
    let mut digit_set = Vec::with_capacity(1 << numerators.len());
    for mask in 0u32..(1u32 << numerators.len()) {
        let subset: Vec<usize> = (0..numerators.len()).filter(|j| mask >> j & 1 == 1).collect();
        let digit: i64 = subset.iter().map(|&j| numerators[j]).sum();
        digit_set.push(digit);
        let residue = digit.rem_euclid(b) as u64;
        let slot = &mut best[residue as usize];
        if slot.is_none() {
            *slot = Some(DigitRepresentative { residue, digit, subset });
        }
    }
    digit_set.sort_unstable();
    digit_set.dedup();
    let Some(representatives) = best.into_iter().collect::<Option<Vec<_>>>() else {
        return Ok(None);
    };
    let digits: Vec<i64> = representatives.iter().map(|r| r.digit).collect();
    let injective_to = (1..=INJECTIVITY_DEPTH).take_while(|&k| fractional_parts_distinct(base, &digits, k)).count() as u32;
    if injective_to < INJECTIVITY_DEPTH.min(max_depth_for(base)) {
        return Ok(None);
    }
    Ok(Some(CoverageCertificate {
        base,
        numerators: numerators.to_vec(),
        digit_set,
        representatives,
        injective_to,
    }))
}

fn max_depth_for(base: u64) -> u32 {
    (1..=INJECTIVITY_DEPTH).take_while(|&k| base.pow(k) <= 1 << 16).count() as u32
}

/// Whether `Σ_{i=1..k} a_i n^{-i}` over digits `a_i` hit every class of
/// `ℤ/n^k` exactly once (in the scaled form `Σ a_i n^{k-i} mod n^k`).
fn fractional_parts_distinct(base: u64, digits: &[i64], k: u32) -> bool {
    let modulus = match base.checked_pow(k) {
        Some(m) if m <= 1 << 16 => m as i64,
        _ => return true,
    };
    let mut seen = vec![false; modulus as usize];
    let mut stack = vec![(0u32, 0i64)];
    while let Some((depth, acc)) = stack.pop() {
        if depth == k {
            let r = acc.rem_euclid(modulus) as usize;
            if seen[r] {
                return false;
            }
            seen[r] = true;
            continue;
        }
        let weight = (base as i64).pow(k - depth - 1);
        for &d in digits {
            stack.push((depth + 1, (acc + d.rem_euclid(modulus) * weight) % modulus));
        }
    }
    seen.iter().all(|&s| s)
}

/// Rewrites a positive sequence as `scale·p_j·n^{-k}` over its strands.
/// Explicit (finite) terms are ignored: they only translate copies of the
/// strand subsum set.
pub fn digit_form(spec: &SequenceSpec) -> Result<DigitForm> {
    digit_form_bounded(spec, MAX_DIGIT_BASE)
}

/// As [`digit_form`], trying bases up to `max_base`.
pub fn digit_form_bounded(spec: &SequenceSpec, max_base: u64) -> Result<DigitForm> {
    let reordered = nonincreasing_reorder(spec).map_err(|e| Error::NotDigitForm(e.to_string()))?;
    let decomposition = strand_decomposition(&reordered).map_err(|e| Error::NotDigitForm(e.to_string()))?;
    if decomposition.strands.is_empty() {
        return Err(Error::NotDigitForm("no geometric strands".into()));
    }
    let (strands, ratio) = common_ratio(&decomposition.strands)
        .ok_or_else(|| Error::NotDigitForm("strand ratios are not commensurable".into()))?;
    let (t, base) = reciprocal_power(&ratio, 8, max_base)
        .ok_or_else(|| Error::NotDigitForm(format!("no power of {ratio} is 1/n with n <= {max_base}")))?;
    let mut firsts: Vec<Rational> = Vec::new();
    for GeometricStrand { first, .. } in &strands {
        let mut x = first.clone();
        for _ in 0..t {
            firsts.push(x.clone());
            x *= &ratio;
        }
    }
    if firsts.len() > MAX_DIGIT_STRANDS {
        return Err(Error::NotDigitForm(format!("{} strands exceed the limit", firsts.len())));
    }
    let scale = rational_gcd(&firsts);
    if scale.is_zero() {
        return Err(Error::NotDigitForm("zero strand".into()));
    }
    let numerators = firsts
        .iter()
        .map(|x| {
            let q = x / &scale;
            q.to_integer().to_i64().filter(|_| q.is_integer()).ok_or_else(|| Error::NotDigitForm(format!("{q}")))
        })
        .collect::<Result<Vec<i64>>>()?;
    Ok(DigitForm { base, scale, numerators })
}
