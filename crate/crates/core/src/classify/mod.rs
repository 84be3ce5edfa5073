//! Topological classification of subsum sets.

pub mod digits;
pub mod profile;

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use crate::cn::{build_cn, build_cn_refined, DEFAULT_CAP};
use crate::error::{Error, Result};
use crate::rational::{format_rational, pow, Rational};
use crate::sequence::{MergedSpec, SequenceSpec, SummabilityClass, TailEnclosure, REFINE_LIMIT};

pub use digits::{digit_coverage_test, digit_form, digit_form_bounded, MAX_DIGIT_BASE, CoverageCertificate, DigitForm, DigitRepresentative};
pub use profile::{
    f_p, pseries_thresholds, term_tail_profile, Comparison, Eventual, EventualVerdict, ProofTag, TermTailProfile,
};

pub const DEFAULT_HORIZON: usize = 24;

/// One end of a convex hull.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    Exact(Rational),
    /// Known only to lie in `[lo, hi]`.
    Between { lo: Rational, hi: Rational },
    NegInf,
    PosInf,
}

impl Bound {
    fn from_enclosure(e: &TailEnclosure, infinite: Bound) -> Bound {
        match e {
            TailEnclosure::Bounded { lo, hi } if lo == hi => Bound::Exact(lo.clone()),
            TailEnclosure::Bounded { lo, hi } => Bound::Between { lo: lo.clone(), hi: hi.clone() },
            TailEnclosure::Divergent => infinite,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Bound::Exact(r) => Some(r),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Bound::Exact(r) => json!(format_rational(r)),
            Bound::Between { lo, hi } => json!({"lo": format_rational(lo), "hi": format_rational(hi)}),
            Bound::NegInf => json!("-inf"),
            Bound::PosInf => json!("inf"),
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Exact(r) => write!(f, "{r}"),
            Bound::Between { lo, hi } => write!(f, "[{lo}, {hi}]"),
            Bound::NegInf => write!(f, "-inf"),
            Bound::PosInf => write!(f, "inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CantorCertificate {
    AllExceed,
    /// `2^strands · lambda < 1`: the `C_n` lengths shrink to zero along the
    /// period. For bi-geometric sequences this is `λ < 1/4`.
    LambdaBelowQuarter { lambda: Rational, strands: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strength {
    /// Infinitely many exceed events follow from an analytic proof.
    Proven,
    /// Exceed events observed only up to the profile horizon.
    PaperPresumed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Known {
    InfinitelyManyComponents,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerdictKind {
    FiniteUnion { component_lower: BigUint, component_upper: BigUint, exact_count: Option<usize> },
    CantorSet { certificate: CantorCertificate },
    SymmetricCantorval { coverage: CoverageCertificate, strength: Strength },
    UnboundedInterval,
    WholeLine,
    Undetermined { known: Option<Known> },
}

impl VerdictKind {
    pub fn name(&self) -> &'static str {
        match self {
            VerdictKind::FiniteUnion { .. } => "FiniteUnion",
            VerdictKind::CantorSet { .. } => "CantorSet",
            VerdictKind::SymmetricCantorval { .. } => "SymmetricCantorval",
            VerdictKind::UnboundedInterval => "UnboundedInterval",
            VerdictKind::WholeLine => "WholeLine",
            VerdictKind::Undetermined { .. } => "Undetermined",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub summability: SummabilityClass,
    /// Convex hull `[X⁻, X⁺]`.
    pub hull: [Bound; 2],
    /// `X⁻`, the shift from the subsum set of `|x_n|` (absolutely summable only).
    pub translation: Option<Bound>,
    pub profile: Option<TermTailProfile>,
}

fn big_to_json(n: &BigUint) -> Value {
    match n.to_u64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

impl Verdict {
    /// Exact component count, when known.
    pub fn component_count(&self) -> Option<usize> {
        match &self.kind {
            VerdictKind::FiniteUnion { exact_count, .. } => *exact_count,
            VerdictKind::UnboundedInterval | VerdictKind::WholeLine => Some(1),
            _ => None,
        }
    }

    pub fn to_json(&self, profile_len: usize) -> Value {
        let certificate = match &self.kind {
            VerdictKind::CantorSet { certificate: CantorCertificate::AllExceed } => json!({"type": "all_exceed"}),
            VerdictKind::CantorSet { certificate: CantorCertificate::LambdaBelowQuarter { lambda, strands } } => {
                json!({"type": "lambda_below_quarter", "lambda": format_rational(lambda), "strands": strands})
            }
            VerdictKind::SymmetricCantorval { coverage, strength } => json!({
                "type": "digit_coverage",
                "base": coverage.base,
                "numerators": coverage.numerators,
                "digit_set": coverage.digit_set,
                "representatives": coverage.representatives,
                "injective_to": coverage.injective_to,
                "exceeds_infinitely_often": true,
                "strength": match strength { Strength::Proven => "proven", Strength::PaperPresumed => "paper_presumed" },
            }),
            VerdictKind::Undetermined { known: Some(Known::InfinitelyManyComponents) } => {
                json!({"type": "none", "known": "infinitely_many_components"})
            }
            _ => Value::Null,
        };
        let component_bounds = match &self.kind {
            VerdictKind::FiniteUnion { component_lower, component_upper, .. } => {
                json!([big_to_json(component_lower), big_to_json(component_upper)])
            }
            VerdictKind::UnboundedInterval | VerdictKind::WholeLine => json!([1, 1]),
            VerdictKind::CantorSet { .. } | VerdictKind::SymmetricCantorval { .. } => json!(["inf", Value::Null]),
            VerdictKind::Undetermined { known: Some(_) } => json!(["inf", Value::Null]),
            VerdictKind::Undetermined { known: None } => json!([1, Value::Null]),
        };
        let (profile_prefix, eventual) = match &self.profile {
            Some(p) => (
                json!(p.comparisons.iter().take(profile_len).map(|c| c.symbol().to_string()).collect::<Vec<_>>()),
                serde_json::to_value(&p.eventual).unwrap_or(Value::Null),
            ),
            None => (json!([]), Value::Null),
        };
        json!({
            "kind": self.kind.name(),
            "summability": self.summability,
            "certificate": certificate,
            "hull": [self.hull[0].to_json(), self.hull[1].to_json()],
            "component_bounds": component_bounds,
            "component_count": self.component_count(),
            "translation": self.translation.as_ref().map(Bound::to_json),
            "profile_prefix": profile_prefix,
            "eventual": eventual,
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ClassifyOptions {
    pub horizon: usize,
    pub cap: usize,
    /// Largest base tried for a digit-coverage certificate.
    pub max_digit_base: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self { horizon: DEFAULT_HORIZON, cap: DEFAULT_CAP, max_digit_base: MAX_DIGIT_BASE }
    }
}

pub fn classify(spec: &MergedSpec) -> Result<Verdict> {
    classify_with(spec, &ClassifyOptions::default())
}

pub fn classify_spec(spec: &SequenceSpec) -> Result<Verdict> {
    classify(&MergedSpec::from(spec.clone()))
}

pub fn classify_with(spec: &MergedSpec, opts: &ClassifyOptions) -> Result<Verdict> {
    let split = spec.sign_split();
    let summability = spec.summability_class();
    match summability {
        SummabilityClass::Conditionally => Ok(Verdict {
            kind: VerdictKind::WholeLine,
            summability,
            hull: [Bound::NegInf, Bound::PosInf],
            translation: None,
            profile: None,
        }),
        SummabilityClass::Unconditionally => Ok(Verdict {
            kind: VerdictKind::UnboundedInterval,
            summability,
            hull: [
                Bound::from_enclosure(&split.x_minus, Bound::NegInf),
                Bound::from_enclosure(&split.x_plus, Bound::PosInf),
            ],
            translation: None,
            profile: None,
        }),
        SummabilityClass::Absolutely => {
            let abs = spec.abs_spec();
            let (kind, profile) = classify_positive(&abs, opts)?;
            let x_minus = Bound::from_enclosure(&split.x_minus, Bound::NegInf);
            let x_plus = Bound::from_enclosure(&split.x_plus, Bound::PosInf);
            Ok(Verdict { kind, summability, hull: [x_minus.clone(), x_plus], translation: Some(x_minus), profile: Some(profile) })
        }
    }
}

fn exact_component_count(reordered: &SequenceSpec, after: usize, cap: usize) -> Option<usize> {
    let mut extra = 0;
    loop {
        let cn = build_cn_refined(reordered, after, cap, extra).ok()?;
        let (lo, hi) = cn.component_range();
        if lo == hi {
            return Some(lo);
        }
        if extra >= REFINE_LIMIT {
            return None;
        }
        extra = (extra * 2).max(8);
    }
}

fn power_of_two(e: u64) -> BigUint {
    BigUint::one() << e
}

/// Classification of a positive summable sequence.
pub fn classify_positive(spec: &SequenceSpec, opts: &ClassifyOptions) -> Result<(VerdictKind, TermTailProfile)> {
    let profile = term_tail_profile(spec, opts.horizon)?;
    let kind = match profile.eventual.as_ref().map(|e| &e.verdict) {
        Some(EventualVerdict::AllBound) => VerdictKind::FiniteUnion {
            component_lower: BigUint::one(),
            component_upper: BigUint::one(),
            exact_count: Some(1),
        },
        Some(EventualVerdict::EventuallyBound { after }) => {
            let after = *after;
            let (lower, upper) = match profile.pseries() {
                Some(p) if p.is_pure() => (power_of_two(p.k_exceed), power_of_two(p.n_bound)),
                _ => {
                    let exceed = profile.exceed_count(after).expect("analytic profile") as u64;
                    (power_of_two(exceed), power_of_two(after as u64))
                }
            };
            let exact_count = exact_component_count(&profile.reordered, after, opts.cap);
            VerdictKind::FiniteUnion { component_lower: lower, component_upper: upper, exact_count }
        }
        Some(EventualVerdict::AllExceed) => VerdictKind::CantorSet { certificate: CantorCertificate::AllExceed },
        Some(_) => infinitely_many_components(spec, &profile, opts)?,
        None => {
            let tail_half = &profile.comparisons[profile.comparisons.len() / 2..];
            if tail_half.contains(&Comparison::TermExceedsTail) {
                match coverage(spec, opts.max_digit_base)? {
                    Some(coverage) => VerdictKind::SymmetricCantorval { coverage, strength: Strength::PaperPresumed },
                    None => VerdictKind::Undetermined { known: None },
                }
            } else {
                VerdictKind::Undetermined { known: None }
            }
        }
    };
    Ok((kind, profile))
}

fn coverage(spec: &SequenceSpec, max_base: u64) -> Result<Option<CoverageCertificate>> {
    match digit_form_bounded(spec, max_base) {
        Ok(form) => digit_coverage_test(form.base, &form.numerators),
        Err(Error::NotDigitForm(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn infinitely_many_components(
    spec: &SequenceSpec,
    profile: &TermTailProfile,
    opts: &ClassifyOptions,
) -> Result<VerdictKind> {
    if let Some(data) = profile.periodic() {
        let shrink = pow(&Rational::from_integer(2.into()), data.period as u64) * &data.ratio;
        if data.period > 0 && shrink < Rational::one() {
            return Ok(VerdictKind::CantorSet {
                certificate: CantorCertificate::LambdaBelowQuarter { lambda: data.ratio.clone(), strands: data.period },
            });
        }
    }
    Ok(match coverage(spec, opts.max_digit_base)? {
        Some(coverage) => VerdictKind::SymmetricCantorval { coverage, strength: Strength::Proven },
        None => VerdictKind::Undetermined { known: Some(Known::InfinitelyManyComponents) },
    })
}

/// Endpoints of the components of `C_n` (on the non-increasing rearrangement),
/// each of which is a one-point component of the subsum set when the term
/// exceeds the tail infinitely often.
pub fn one_point_components(spec: &SequenceSpec, n: usize, cap: usize) -> Result<Vec<Rational>> {
    let profile = term_tail_profile(spec, 0)?;
    let applies = profile.eventual.as_ref().is_some_and(|e| e.verdict.exceeds_infinitely_often());
    if !applies {
        return Err(Error::NotApplicable("the term does not provably exceed the tail infinitely often".into()));
    }
    let cn = build_cn(&profile.reordered, n, cap)?;
    let mut points: Vec<Rational> = Vec::new();
    for iv in cn.fattened.intervals() {
        points.push(iv.left().clone());
        if iv.right() != iv.left() {
            points.push(iv.right().clone());
        }
    }
    Ok(points)
}

/// `λ = (1-α)(1-β)`.
pub fn bigeometric_lambda(alpha: &Rational, beta: &Rational) -> Rational {
    (Rational::one() - alpha) * (Rational::one() - beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn kind(spec: &SequenceSpec) -> VerdictKind {
        classify_spec(spec).unwrap().kind
    }

    #[test]
    fn geometric_dichotomy() {
        let thirds = SequenceSpec::geometric(rat(1, 3), rat(1, 3)).unwrap();
        assert_eq!(kind(&thirds), VerdictKind::CantorSet { certificate: CantorCertificate::AllExceed });
        let halves = SequenceSpec::geometric(rat(1, 2), rat(1, 2)).unwrap();
        let v = classify_spec(&halves).unwrap();
        assert_eq!(v.component_count(), Some(1));
        assert_eq!(v.hull, [Bound::Exact(int(0)), Bound::Exact(int(1))]);
    }

    #[test]
    fn two_then_halves() {
        let s = SequenceSpec::geometric(rat(1, 2), rat(1, 2)).unwrap().with_prefix(vec![int(2)]).unwrap();
        let v = classify_spec(&s).unwrap();
        assert_eq!(
            v.kind,
            VerdictKind::FiniteUnion { component_lower: 2u32.into(), component_upper: 2u32.into(), exact_count: Some(2) }
        );
        assert_eq!(v.hull, [Bound::Exact(int(0)), Bound::Exact(int(3))]);
    }

    #[test]
    fn bigeometric_lambda_below_quarter() {
        let s = SequenceSpec::bigeometric(rat(2, 5), rat(3, 5), int(1)).unwrap();
        assert_eq!(
            kind(&s),
            VerdictKind::CantorSet {
                certificate: CantorCertificate::LambdaBelowQuarter { lambda: rat(6, 25), strands: 2 }
            }
        );
    }

    #[test]
    fn cantorval_examples() {
        for spec in [
            SequenceSpec::bigeometric(rat(9, 20), rat(6, 11), rat(5, 3)).unwrap(),
            SequenceSpec::bigeometric(rat(9, 14), rat(3, 10), rat(7, 3)).unwrap(),
        ] {
            assert!(matches!(kind(&spec), VerdictKind::SymmetricCantorval { strength: Strength::Proven, .. }));
        }
    }

    #[test]
    fn basel_bounds() {
        let v = classify_spec(&SequenceSpec::pseries(2).unwrap()).unwrap();
        assert_eq!(
            v.kind,
            VerdictKind::FiniteUnion { component_lower: 2u32.into(), component_upper: 4u32.into(), exact_count: Some(2) }
        );
        assert!(matches!(v.hull[1], Bound::Between { .. }));
    }

    #[test]
    fn signed_reductions() {
        let pos = SequenceSpec::geometric(rat(1, 4), rat(1, 4)).unwrap();
        let neg = SequenceSpec::geometric(rat(1, 2), rat(1, 4)).unwrap().negated();
        let v = classify(&MergedSpec::new(vec![neg.clone(), pos]).unwrap()).unwrap();
        assert_eq!(v.kind.name(), "FiniteUnion");
        assert_eq!(v.hull, [Bound::Exact(rat(-2, 3)), Bound::Exact(rat(1, 3))]);

        let unc = MergedSpec::new(vec![SequenceSpec::harmonic(), SequenceSpec::geometric(int(1), rat(1, 2)).unwrap().negated()]).unwrap();
        let v = classify(&unc).unwrap();
        assert_eq!(v.kind, VerdictKind::UnboundedInterval);
        assert_eq!(v.hull, [Bound::Exact(int(-2)), Bound::PosInf]);

        let both = MergedSpec::new(vec![SequenceSpec::harmonic(), SequenceSpec::harmonic().negated()]).unwrap();
        assert_eq!(classify(&both).unwrap().kind, VerdictKind::WholeLine);
    }

    #[test]
    fn one_point_components_of_thirds() {
        let thirds = SequenceSpec::geometric(rat(1, 3), rat(1, 3)).unwrap();
        assert_eq!(
            one_point_components(&thirds, 1, DEFAULT_CAP).unwrap(),
            vec![int(0), rat(1, 6), rat(1, 3), rat(1, 2)]
        );
        let halves = SequenceSpec::geometric(rat(1, 2), rat(1, 2)).unwrap();
        assert!(matches!(one_point_components(&halves, 3, DEFAULT_CAP), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn empty_sequence_is_a_point() {
        let v = classify_spec(&SequenceSpec::empty()).unwrap();
        assert_eq!(v.component_count(), Some(1));
        assert_eq!(v.hull, [Bound::Exact(int(0)), Bound::Exact(int(0))]);
    }
}
