//! Artin-Schreier extensions `X^p − X = a` over perfect-hull and Hahn base
//! fields: root approximation, the distance cut `v(ϑ − K)`, the ramification
//! jump and ideal, ramification-value sampling and generator chains.

use alloc::boxed::Box;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::extension::{element_valuation, ApproximationPoint, ExtensionElement, Poly};
use crate::hahn::{BaseFieldSpec, HahnSeries, Valuation};
use crate::ogroup::{GroupElement, OrderedGroup};
use crate::rational::{fmt_rational, simplest_left_open, Q};
use crate::segcalc::{FinalSegment, IdealDesc, InitialSegment};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsExtensionSpec {
    base: BaseFieldSpec,
    a: HahnSeries,
}

impl AsExtensionSpec {
    pub fn new(base: BaseFieldSpec, a: HahnSeries) -> Result<Self> {
        base.contains(&a)?;
        match a.valuation() {
            Valuation::Value(v) if v.is_negative() => Ok(AsExtensionSpec { base, a }),
            other => Err(Error::NonNegativeRhs(format!("v({a}) = {other}"))),
        }
    }

    pub fn p(&self) -> u32 {
        self.base.p
    }

    pub fn base(&self) -> &BaseFieldSpec {
        &self.base
    }

    pub fn rhs(&self) -> &HahnSeries {
        &self.a
    }

    pub fn value_group(&self) -> OrderedGroup {
        self.base.value_group()
    }

    /// `a − ℘(c)`.
    pub fn residual(&self, c: &HahnSeries) -> Result<HahnSeries> {
        self.a.sub(&c.wp())
    }

    /// `v(ϑ − c) = v(a − ℘(c))/p`, valid when the residual has negative value.
    pub fn distance_value(&self, c: &HahnSeries) -> Result<Q> {
        self.base.contains(c)?;
        let r = self.residual(c)?;
        match r.valuation() {
            Valuation::Value(e) if e.is_negative() => Ok(e / Q::from_integer(BigInt::from(self.p()))),
            other => Err(Error::NotImmediate(format!(
                "v(a - wp(c)) = {other} for c = {c}; a defect extension needs a negative value"
            ))),
        }
    }

    pub fn theta(&self) -> ExtensionElement {
        ExtensionElement::theta(self.a.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    /// Stop once `v(ϑ − c) > −target`.
    pub target: Q,
    pub max_steps: usize,
}

impl SolverConfig {
    /// Target `p^{-e}`.
    pub fn p_power(p: u32, e: u32) -> Self {
        SolverConfig {
            target: Q::new(1.into(), num_traits::pow(BigInt::from(p), e as usize)),
            max_steps: 256,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxStep {
    pub c: HahnSeries,
    pub residual: HahnSeries,
    /// `v(ϑ − c)`.
    pub value: Q,
}

impl ApproximationPoint for ApproxStep {
    fn center(&self) -> &HahnSeries {
        &self.c
    }
    fn distance_value(&self) -> &Q {
        &self.value
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxSequence {
    pub p: u32,
    pub steps: Vec<ApproxStep>,
    /// The residual became indeterminate before the target was reached.
    pub precision_exhausted: bool,
}

impl ApproxSequence {
    pub fn values(&self) -> Vec<Q> {
        self.steps.iter().map(|s| s.value.clone()).collect()
    }

    pub fn last(&self) -> Option<&ApproxStep> {
        self.steps.last()
    }
}

/// Henselian root of `X^p − X = r` for `v(r) > 0`: `−Σ r^{p^i}`.
fn hensel_root(r: &HahnSeries, e: &Q, cap: &Q) -> Result<HahnSeries> {
    let mut acc = HahnSeries::zero(r.p());
    let mut term = r.clone();
    let mut v = e.clone();
    let p = Q::from_integer(BigInt::from(r.p()));
    while &v < cap {
        acc = acc.sub(&term)?;
        term = term.frobenius();
        v *= &p;
    }
    acc.add(&HahnSeries::unknown(r.p(), v))
}

/// Successive approximation of a root `ϑ` of `X^p − X = a` by elements of `K`.
pub fn solve_as_root(spec: &AsExtensionSpec, cfg: &SolverConfig) -> Result<ApproxSequence> {
    if !cfg.target.is_positive() {
        return Err(Error::InvalidArgument("target precision must be positive".into()));
    }
    let p = spec.p();
    let pq = Q::from_integer(BigInt::from(p));
    let mut c = HahnSeries::zero(p);
    let mut steps: Vec<ApproxStep> = Vec::new();
    let mut exhausted = false;
    loop {
        let r = spec.residual(&c)?;
        let e = match r.valuation() {
            Valuation::Infinity => {
                return Err(Error::NoDefect {
                    root: Box::new(c),
                    exact: true,
                })
            }
            Valuation::AtLeast(_) => {
                exhausted = true;
                break;
            }
            Valuation::Value(e) => e,
        };
        if e.is_zero() {
            return Err(Error::NotImmediate(format!(
                "residual {r} is a unit: the residue field extends"
            )));
        }
        if e.is_positive() {
            let root = c.add(&hensel_root(&r, &e, &(&e * &pq * &pq * &pq))?)?;
            return Err(Error::NoDefect {
                root: Box::new(root),
                exact: false,
            });
        }
        let value = &e / &pq;
        if !spec.base.contains_exponent(&value) {
            return Err(Error::NotImmediate(format!(
                "v(theta - c) = {} is not in the value group {}",
                fmt_rational(&value),
                spec.value_group()
            )));
        }
        if let Some(prev) = steps.last() {
            if value <= prev.value {
                return Err(Error::Incoherent(format!(
                    "approximation values did not increase: {} then {}",
                    fmt_rational(&prev.value),
                    fmt_rational(&value)
                )));
            }
        }
        let (_, kappa) = r.leading_term().expect("determinate value");
        let d = HahnSeries::monomial(p, kappa, value.clone());
        let done = value > -cfg.target.clone() || steps.len() + 1 >= cfg.max_steps;
        steps.push(ApproxStep {
            c: c.clone(),
            residual: r,
            value,
        });
        if done {
            break;
        }
        c = c.add(&d)?;
    }
    Ok(ApproxSequence {
        p,
        steps,
        precision_exhausted: exhausted,
    })
}

/// Estimated position of the cut `v(ϑ − K) = {γ < β}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CutEstimate {
    Converged {
        beta: Q,
        /// `β − v(ϑ − c_last)`.
        bracket_width: Q,
    },
    Inconclusive {
        lo: Q,
        hi: Q,
    },
}

/// Detects the limit of a strictly increasing negative value sequence.
///
/// Each step proposes the simplest rational in
/// `(v_i, min(v_i + p·(v_i − v_{i−1}), 0)]`; the limit is declared once the
/// last three proposals agree.
pub fn estimate_cut(values: &[Q], p: u32) -> Result<CutEstimate> {
    if values.len() < 2 {
        return Err(Error::InsufficientSteps {
            needed: 2,
            have: values.len(),
        });
    }
    for w in values.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::Incoherent("distance values must strictly increase".into()));
        }
    }
    if let Some(v) = values.iter().find(|v| !v.is_negative()) {
        return Err(Error::BoundViolation(format!(
            "v(theta - c) = {} is not negative",
            fmt_rational(v)
        )));
    }
    let pq = Q::from_integer(BigInt::from(p));
    let candidates: Vec<Q> = values
        .windows(2)
        .map(|w| {
            let step = &w[1] - &w[0];
            let mut hi = &w[1] + &pq * step;
            if hi.is_positive() {
                hi = Q::zero();
            }
            simplest_left_open(&w[1], &hi)
        })
        .collect();
    let last = values.last().expect("nonempty").clone();
    let n = candidates.len();
    if n >= 3 && candidates[n - 1] == candidates[n - 2] && candidates[n - 2] == candidates[n - 3] {
        let beta = candidates[n - 1].clone();
        return Ok(CutEstimate::Converged {
            bracket_width: &beta - &last,
            beta,
        });
    }
    let hi = candidates
        .iter()
        .max()
        .cloned()
        .unwrap_or_else(Q::zero);
    Ok(CutEstimate::Inconclusive { lo: last, hi })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceData {
    pub beta: Q,
    pub bracket_width: Q,
    /// `v(ϑ − K) = {γ < β}`.
    pub distance: InitialSegment,
    /// `Σ_E = −v(ϑ − K)`.
    pub sigma_e: FinalSegment,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DistanceOutcome {
    Determined(DistanceData),
    Inconclusive { lo: Q, hi: Q },
}

pub fn distance_and_sigma(group: &Arc<OrderedGroup>, seq: &ApproxSequence) -> Result<DistanceOutcome> {
    if group.rank() != 1 {
        return Err(Error::InvalidGroup("field-level distance cuts need a rank-one group".into()));
    }
    match estimate_cut(&seq.values(), seq.p)? {
        CutEstimate::Inconclusive { lo, hi } => Ok(DistanceOutcome::Inconclusive { lo, hi }),
        CutEstimate::Converged { beta, bracket_width } => {
            let b = GroupElement::scalar(beta.clone());
            let distance = InitialSegment::below(group.clone(), &b)?;
            let sigma_e = distance.negate();
            Ok(DistanceOutcome::Determined(DistanceData {
                beta,
                bracket_width,
                distance,
                sigma_e,
            }))
        }
    }
}

/// `I_E = (b : vb ∈ Σ_E)`.
pub fn ramification_ideal(sigma_e: &FinalSegment) -> Result<IdealDesc> {
    if sigma_e.is_empty() {
        return Err(Error::EmptySegment);
    }
    IdealDesc::new(sigma_e.clone())
}

/// `v((σb − b)/b)` for `σ : ϑ ↦ ϑ + 1`; `None` when `b ∈ K`.
pub fn ramification_value(b: &ExtensionElement, seq: &ApproxSequence) -> Result<Option<Q>> {
    let diff = b.sigma()?.sub(b)?;
    if diff.is_zero() {
        return Ok(None);
    }
    let vd = element_valuation(&diff, &seq.steps)?;
    let vb = element_valuation(b, &seq.steps)?;
    Ok(Some(vd - vb))
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RamificationSample {
    pub values: Vec<Q>,
    /// Values from `b = ϑ − c_i`, in step order.
    pub chain_values: Vec<Q>,
    pub skipped: usize,
}

/// A random monomial `κ t^e` with `e` on the grid `j / p^d`, `|e| <= bound`.
pub fn random_monomial<R: Rng + ?Sized>(rng: &mut R, p: u32, den_exp: u32, bound: i64) -> HahnSeries {
    let den = i64::from(p).pow(den_exp);
    let num = rng.gen_range(-bound * den..=bound * den);
    let coeff = rng.gen_range(1..p);
    HahnSeries::monomial(p, coeff, Q::new(num.into(), den.into()))
}

/// A random element of `K` with a few monomial terms.
pub fn random_base_element<R: Rng + ?Sized>(rng: &mut R, p: u32, terms: usize) -> HahnSeries {
    let mut acc = HahnSeries::zero(p);
    for _ in 0..terms {
        acc = acc.add(&random_monomial(rng, p, 3, 2)).expect("same p");
    }
    acc
}

/// A random element of degree `< p` over `K`.
pub fn random_extension_element<R: Rng + ?Sized>(rng: &mut R, a: &HahnSeries) -> ExtensionElement {
    let p = a.p();
    let coeffs = (0..p)
        .map(|_| {
            if rng.gen_bool(0.25) {
                HahnSeries::zero(p)
            } else {
                let terms = rng.gen_range(1..=2);
                random_base_element(rng, p, terms)
            }
        })
        .collect();
    ExtensionElement::new(a.clone(), coeffs).expect("p coefficients")
}

/// Samples `v((σb − b)/b)` over random `b` and over `b = ϑ − c_i`.
pub fn sample_ramification_values<R: Rng + ?Sized>(
    spec: &AsExtensionSpec,
    seq: &ApproxSequence,
    n: usize,
    rng: &mut R,
) -> Result<RamificationSample> {
    let mut out = RamificationSample::default();
    for step in &seq.steps {
        let b = ExtensionElement::linear(spec.a.clone(), &HahnSeries::one(spec.p()), &step.c)?;
        match ramification_value(&b, seq) {
            Ok(Some(v)) => out.chain_values.push(v),
            Ok(None) | Err(Error::ValuationUnresolved(_)) => out.skipped += 1,
            Err(e) => return Err(e),
        }
    }
    let mut attempts = 0;
    while out.values.len() < n && attempts < 4 * n + 16 {
        attempts += 1;
        let b = random_extension_element(rng, &spec.a);
        match ramification_value(&b, seq) {
            Ok(Some(v)) => out.values.push(v),
            Ok(None) | Err(Error::ValuationUnresolved(_)) => out.skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// `t_c`, the monomial with `v(t_c) = −v(ϑ − c)`.
pub fn t_c(spec: &AsExtensionSpec, value: &Q) -> HahnSeries {
    HahnSeries::monomial(spec.p(), 1, -value.clone())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainLink {
    pub c: HahnSeries,
    /// `v(ϑ − c)`.
    pub value: Q,
    pub t_c: HahnSeries,
    /// `ϑ_c = t_c(ϑ − c)`.
    pub theta_c: ExtensionElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainTransition {
    /// `t_{c1}/t_{c2}`.
    pub lambda: HahnSeries,
    /// `t_{c1}(c2 − c1)`.
    pub offset: HahnSeries,
    pub coefficients_integral: bool,
    /// `O_K[ϑ_{c1}] ⊊ O_K[ϑ_{c2}]`, decided from the reverse transition.
    pub strict: bool,
    /// `v(ϑ − c1) < v(ϑ − c2)`.
    pub values_increase: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorChain {
    pub links: Vec<ChainLink>,
    /// Transition between consecutive links.
    pub transitions: Vec<ChainTransition>,
}

fn nonnegative(x: &HahnSeries) -> bool {
    match x.valuation() {
        Valuation::Infinity => true,
        Valuation::Value(v) | Valuation::AtLeast(v) => !v.is_negative(),
    }
}

pub fn chain_link(spec: &AsExtensionSpec, c: &HahnSeries) -> Result<ChainLink> {
    let value = spec.distance_value(c)?;
    let t = t_c(spec, &value);
    let theta_c = ExtensionElement::linear(spec.a.clone(), &t, c)?;
    Ok(ChainLink {
        c: c.clone(),
        value,
        t_c: t,
        theta_c,
    })
}

/// Transition data from link 1 to link 2, verified as an exact identity
/// `ϑ_{c1} = λ ϑ_{c2} + e`.
pub fn chain_transition(l1: &ChainLink, l2: &ChainLink) -> Result<ChainTransition> {
    let lambda = HahnSeries::monomial(l1.t_c.p(), 1, &l2.value - &l1.value);
    let offset = l1.t_c.mul(&l2.c.sub(&l1.c)?)?;
    let rebuilt = l2
        .theta_c
        .scale(&lambda)?
        .add(&ExtensionElement::from_base(l1.theta_c.rhs().clone(), offset.clone()))?;
    if rebuilt != l1.theta_c {
        return Err(Error::Incoherent(format!(
            "theta_c1 != lambda*theta_c2 + e for c1 = {}, c2 = {}",
            l1.c, l2.c
        )));
    }
    let inv_lambda = HahnSeries::monomial(l1.t_c.p(), 1, &l1.value - &l2.value);
    let rev_offset = l2.t_c.mul(&l1.c.sub(&l2.c)?)?;
    Ok(ChainTransition {
        coefficients_integral: nonnegative(&lambda) && nonnegative(&offset),
        strict: !(nonnegative(&inv_lambda) && nonnegative(&rev_offset)),
        values_increase: l1.value < l2.value,
        lambda,
        offset,
    })
}

/// Links for the given `c`'s, sorted by `v(ϑ − c)`, with consecutive
/// transitions.
pub fn generator_chain(spec: &AsExtensionSpec, cs: &[HahnSeries]) -> Result<GeneratorChain> {
    let mut links = cs.iter().map(|c| chain_link(spec, c)).collect::<Result<Vec<_>>>()?;
    links.sort_by(|a, b| a.value.cmp(&b.value));
    let transitions = links
        .windows(2)
        .map(|w| chain_transition(&w[0], &w[1]))
        .collect::<Result<Vec<_>>>()?;
    Ok(GeneratorChain { links, transitions })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalPolynomial {
    /// `g_c(X) = X^p − t_c^{p−1}X − t_c^p(a − ℘(c))`.
    pub poly: Poly,
    pub derivative: Poly,
    /// `−t_c^{p−1}`.
    pub expected_derivative: HahnSeries,
    /// `g_c(ϑ_c) = 0` holds exactly in `K(ϑ)`.
    pub vanishes_at_theta_c: bool,
    pub derivative_is_constant: bool,
    /// `v(g_c'(ϑ_c))`.
    pub derivative_value: Q,
    /// `(p − 1)·v(t_c)`.
    pub expected_value: Q,
    pub coefficients_integral: bool,
}

pub fn minimal_polynomial_theta_c(spec: &AsExtensionSpec, link: &ChainLink) -> Result<MinimalPolynomial> {
    let p = spec.p();
    let tp1 = link.t_c.pow(p - 1)?;
    let tp = tp1.mul(&link.t_c)?;
    let r = spec.residual(&link.c)?;
    let mut coeffs = alloc::vec![HahnSeries::zero(p); p as usize + 1];
    coeffs[0] = tp.mul(&r)?.neg();
    coeffs[1] = tp1.neg();
    coeffs[p as usize] = HahnSeries::one(p);
    let poly = Poly::new(p, coeffs);
    let derivative = poly.derivative();
    let expected_derivative = tp1.neg();
    let vanishes = poly.eval(&link.theta_c)?.is_zero();
    let derivative_is_constant = derivative.coeffs().len() == 1 && derivative.coeff(0) == expected_derivative;
    let derivative_value = match derivative.eval(&link.theta_c)?.coeffs()[0].valuation() {
        Valuation::Value(v) => v,
        other => return Err(Error::PrecisionLoss(format!("v(g'_c) = {other}"))),
    };
    let t_value = link.t_c.valuation().value().cloned().expect("monomial");
    let expected_value = t_value * Q::from_integer(BigInt::from(p - 1));
    let coefficients_integral = poly.coeffs().iter().all(nonnegative);
    Ok(MinimalPolynomial {
        poly,
        derivative,
        expected_derivative,
        vanishes_at_theta_c: vanishes,
        derivative_is_constant,
        derivative_value,
        expected_value,
        coefficients_integral,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};
    use alloc::string::ToString;

    fn abhyankar(p: u32) -> AsExtensionSpec {
        AsExtensionSpec::new(
            BaseFieldSpec::perfect_hull_rational(p).unwrap(),
            HahnSeries::parse("t^-1", p).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn abhyankar_p2_steps() {
        let spec = abhyankar(2);
        let seq = solve_as_root(&spec, &SolverConfig::p_power(2, 10)).unwrap();
        assert_eq!(seq.steps[1].c, HahnSeries::parse("t^(-1/2)", 2).unwrap());
        assert_eq!(seq.steps[1].residual, HahnSeries::parse("t^(-1/2)", 2).unwrap());
        assert_eq!(seq.steps[2].c, HahnSeries::parse("t^(-1/2) + t^(-1/4)", 2).unwrap());
        assert_eq!(seq.steps[2].residual, HahnSeries::parse("t^(-1/4)", 2).unwrap());
        for (n, st) in seq.steps.iter().enumerate() {
            assert_eq!(st.value, -Q::new(1.into(), BigInt::from(2).pow(n as u32 + 1)));
        }
        assert_eq!(seq.steps.len(), 11);
    }

    #[test]
    fn abhyankar_p3_values() {
        let seq = solve_as_root(&abhyankar(3), &SolverConfig::p_power(3, 6)).unwrap();
        for (n, st) in seq.steps.iter().enumerate() {
            let pn = BigInt::from(3).pow(n as u32);
            assert_eq!(st.residual.valuation(), Valuation::Value(-Q::new(1.into(), pn.clone())));
            assert_eq!(st.value, -Q::new(1.into(), pn * 3));
        }
    }

    #[test]
    fn exact_root_is_reported() {
        let p = 3;
        let base = BaseFieldSpec::new(
            p,
            crate::hahn::BaseFieldKind::TruncatedHahn(OrderedGroup::p_localized(3).unwrap()),
        )
        .unwrap();
        let a = HahnSeries::parse("t^-1", p).unwrap().wp();
        let spec = AsExtensionSpec::new(base, a).unwrap();
        match solve_as_root(&spec, &SolverConfig::p_power(3, 5)) {
            Err(Error::NoDefect { root, exact }) => {
                assert!(exact);
                assert_eq!(*root, HahnSeries::parse("t^-1", p).unwrap());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn hensel_tail() {
        let p = 2;
        let spec = AsExtensionSpec::new(
            BaseFieldSpec::perfect_hull_rational(p).unwrap(),
            HahnSeries::parse("t^-2 + t^-1 + t", p).unwrap(),
        )
        .unwrap();
        match solve_as_root(&spec, &SolverConfig::p_power(2, 5)) {
            Err(Error::NoDefect { root, exact }) => {
                assert!(!exact);
                let r = spec.residual(&root).unwrap();
                assert!(r.is_indeterminate_zero());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn residue_extension_is_not_immediate() {
        let p = 2;
        let spec = AsExtensionSpec::new(
            BaseFieldSpec::perfect_hull_rational(p).unwrap(),
            HahnSeries::parse("t^-2 + t^-1 + 1", p).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            solve_as_root(&spec, &SolverConfig::p_power(2, 5)),
            Err(Error::NotImmediate(_))
        ));
    }

    #[test]
    fn value_outside_group_is_not_immediate() {
        let p = 2;
        let base = BaseFieldSpec::new(
            p,
            crate::hahn::BaseFieldKind::TruncatedHahn(OrderedGroup::integers()),
        )
        .unwrap();
        let spec = AsExtensionSpec::new(base, HahnSeries::parse("t^-1", p).unwrap()).unwrap();
        assert!(matches!(
            solve_as_root(&spec, &SolverConfig::p_power(2, 5)),
            Err(Error::NotImmediate(_))
        ));
    }

    #[test]
    fn rejects_nonnegative_rhs() {
        let base = BaseFieldSpec::perfect_hull_rational(2).unwrap();
        assert!(matches!(
            AsExtensionSpec::new(base, HahnSeries::parse("1 + t", 2).unwrap()),
            Err(Error::NonNegativeRhs(_))
        ));
    }

    #[test]
    fn cut_estimates() {
        let vals: Vec<Q> = (1..8).map(|n| -Q::new(1.into(), BigInt::from(2).pow(n))).collect();
        match estimate_cut(&vals, 2).unwrap() {
            CutEstimate::Converged { beta, .. } => assert_eq!(beta, qi(0)),
            other => panic!("{other:?}"),
        }
        let vals: Vec<Q> = (1..8).map(|n| qi(-1) - Q::new(1.into(), BigInt::from(2).pow(n))).collect();
        match estimate_cut(&vals, 2).unwrap() {
            CutEstimate::Converged { beta, .. } => assert_eq!(beta, qi(-1)),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            estimate_cut(&[q(-1, 2)], 2),
            Err(Error::InsufficientSteps { needed: 2, have: 1 })
        );
        assert!(matches!(
            estimate_cut(&[q(-1, 2), q(-1, 4)], 2).unwrap(),
            CutEstimate::Inconclusive { .. }
        ));
    }

    #[test]
    fn sigma_for_abhyankar() {
        let spec = abhyankar(2);
        let seq = solve_as_root(&spec, &SolverConfig::p_power(2, 10)).unwrap();
        let g = Arc::new(spec.value_group());
        match distance_and_sigma(&g, &seq).unwrap() {
            DistanceOutcome::Determined(d) => {
                assert_eq!(d.distance.to_string(), "<0");
                assert_eq!(d.sigma_e.to_string(), ">0");
                let ideal = ramification_ideal(&d.sigma_e).unwrap();
                assert_eq!(ideal, IdealDesc::maximal(g.clone()));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(ramification_ideal(&FinalSegment::empty(g)), Err(Error::EmptySegment));
    }

    #[test]
    fn ramification_values_of_chain_elements() {
        let spec = abhyankar(2);
        let seq = solve_as_root(&spec, &SolverConfig::p_power(2, 8)).unwrap();
        let th = spec.theta();
        assert_eq!(ramification_value(&th, &seq).unwrap(), Some(q(1, 2)));
        for (n, st) in seq.steps.iter().enumerate() {
            let b = ExtensionElement::linear(spec.rhs().clone(), &HahnSeries::one(2), &st.c).unwrap();
            let expected = Q::new(1.into(), BigInt::from(2).pow(n as u32 + 1));
            assert_eq!(ramification_value(&b, &seq).unwrap(), Some(expected));
        }
        let k = ExtensionElement::from_base(spec.rhs().clone(), HahnSeries::parse("t^3", 2).unwrap());
        assert_eq!(ramification_value(&k, &seq).unwrap(), None);
    }

    #[test]
    fn chain_for_abhyankar() {
        let spec = abhyankar(2);
        let c1 = HahnSeries::zero(2);
        let c2 = HahnSeries::parse("t^(-1/2)", 2).unwrap();
        let chain = generator_chain(&spec, &[c2.clone(), c1.clone()]).unwrap();
        assert_eq!(chain.links[0].c, c1);
        let tr = &chain.transitions[0];
        assert_eq!(tr.lambda, HahnSeries::parse("t^(1/4)", 2).unwrap());
        assert_eq!(tr.offset, HahnSeries::one(2));
        assert!(tr.coefficients_integral && tr.strict && tr.values_increase);

        let same = chain_transition(&chain.links[0], &chain.links[0]).unwrap();
        assert!(!same.strict);
        // same distance, different centre
        let c3 = HahnSeries::parse("t^(-1/2) + t^(1/4)", 2).unwrap();
        let l2 = chain_link(&spec, &c2).unwrap();
        let l3 = chain_link(&spec, &c3).unwrap();
        assert_eq!(l2.value, l3.value);
        let tr = chain_transition(&l2, &l3).unwrap();
        assert!(tr.coefficients_integral && !tr.strict);
    }

    #[test]
    fn minimal_polynomial_example() {
        let spec = abhyankar(2);
        let link = chain_link(&spec, &HahnSeries::zero(2)).unwrap();
        assert_eq!(link.t_c, HahnSeries::parse("t^(1/2)", 2).unwrap());
        let mp = minimal_polynomial_theta_c(&spec, &link).unwrap();
        assert_eq!(
            mp.poly.coeffs(),
            &[HahnSeries::one(2), HahnSeries::parse("t^(1/2)", 2).unwrap(), HahnSeries::one(2)]
        );
        assert!(mp.vanishes_at_theta_c && mp.derivative_is_constant && mp.coefficients_integral);
        assert_eq!(mp.derivative_value, q(1, 2));
        assert_eq!(mp.expected_value, q(1, 2));
    }
}
