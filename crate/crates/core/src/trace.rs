//! Traces on Artin-Schreier extensions `K(ϑ)|K` and the trace of the maximal
//! ideal, `Tr(M_L) = (b ∈ K : vb ∈ (p−1)Σ_E)`.

use alloc::vec::Vec;

use num_traits::Zero;
use rand::Rng;

use crate::asext::{random_extension_element, ApproxSequence, AsExtensionSpec};
use crate::error::{Error, Result};
use crate::extension::{element_valuation, ExtensionElement};
use crate::hahn::{HahnSeries, Valuation};
use crate::ogroup::GroupElement;
use crate::rational::{qi, Q};
use crate::segcalc::{FinalSegment, IdealDesc};

/// `Tr(Σ b_i ϑ^i) = −b_{p−1}`.
pub fn trace_element(x: &ExtensionElement) -> HahnSeries {
    x.trace()
}

/// `Tr(ϑ^i)` for `i = 0, …, p−1`, by reducing powers of `ϑ`.
pub fn trace_table(a: &HahnSeries) -> Result<Vec<HahnSeries>> {
    let theta = ExtensionElement::theta(a.clone());
    (0..a.p()).map(|i| theta.pow(i)?.trace_by_matrix()).collect()
}

/// The ideal with segment `((p−1)Σ_E)↑`.
pub fn trace_ideal(sigma_e: &FinalSegment, p: u32) -> Result<IdealDesc> {
    if sigma_e.is_empty() {
        return Err(Error::EmptySegment);
    }
    IdealDesc::new(sigma_e.scale_up(u64::from(p) - 1)?)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TraceReport {
    /// Sampled elements of `M_L`.
    pub tested: usize,
    /// Those whose trace has value in the trace-ideal segment (or is 0).
    pub passed: usize,
    /// Valuation could not be resolved.
    pub skipped: usize,
    /// Candidates rejected because their value is not positive.
    pub filtered_out: usize,
    /// Samples whose trace also matched the matrix and conjugate formulas.
    pub cross_checked: usize,
    pub witnesses_built: usize,
    pub witnesses_passed: usize,
}

impl TraceReport {
    pub fn ok(&self) -> bool {
        self.passed == self.tested && self.witnesses_passed == self.witnesses_built
    }
}

fn value_of(x: &ExtensionElement, seq: &ApproxSequence) -> Result<Option<Q>> {
    match element_valuation(x, &seq.steps) {
        Ok(v) => Ok(Some(v)),
        Err(Error::ValuationUnresolved(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn in_trace_ideal(tr: &HahnSeries, ideal: &IdealDesc) -> bool {
    match tr.valuation() {
        Valuation::Infinity => true,
        Valuation::Value(v) => ideal.contains_value(&GroupElement::scalar(v)),
        Valuation::AtLeast(_) => false,
    }
}

/// Samples `n` elements of `M_L` and checks `v(Tr m)` against the trace
/// ideal; then builds witnesses `b(ϑ − c)^{p−1}` with `Tr = −b` for targets
/// in the segment.
pub fn verify_trace_theorem<R: Rng + ?Sized>(
    spec: &AsExtensionSpec,
    seq: &ApproxSequence,
    sigma_e: &FinalSegment,
    n: usize,
    rng: &mut R,
) -> Result<TraceReport> {
    let p = spec.p();
    let ideal = trace_ideal(sigma_e, p)?;
    let a = spec.rhs().clone();
    let mut report = TraceReport::default();
    let check = |m: &ExtensionElement, report: &mut TraceReport| -> Result<()> {
        match value_of(m, seq)? {
            None => report.skipped += 1,
            Some(v) if v <= Q::zero() => report.filtered_out += 1,
            Some(_) => {
                report.tested += 1;
                let tr = trace_element(m);
                if in_trace_ideal(&tr, &ideal) {
                    report.passed += 1;
                }
                if report.cross_checked < 8 {
                    let conj = m.trace_by_conjugates()?;
                    if m.trace_by_matrix()? == tr && conj.is_in_base() && conj.coeffs()[0] == tr {
                        report.cross_checked += 1;
                    }
                }
            }
        }
        Ok(())
    };
    // structured candidates t^e (ϑ − c_k)^i, some on the boundary v = 0
    for step in seq.steps.iter().take(6) {
        let lin = ExtensionElement::linear(a.clone(), &HahnSeries::one(p), &step.c)?;
        for i in 1..p {
            let pw = lin.pow(i)?;
            let base = -&step.value * qi(i64::from(i));
            for extra in [Q::zero(), -&step.value / qi(i64::from(p))] {
                let m = pw.scale(&HahnSeries::monomial(p, 1, &base + &extra))?;
                check(&m, &mut report)?;
            }
        }
    }
    let den = i64::from(p).pow(3);
    let mut attempts = 0;
    while report.tested < n && attempts < 4 * n + 16 {
        attempts += 1;
        let x = random_extension_element(rng, &a);
        if x.is_zero() {
            continue;
        }
        let Some(v) = value_of(&x, seq)? else {
            report.skipped += 1;
            continue;
        };
        let eps = Q::new(rng.gen_range(1..=2 * den).into(), den.into());
        let m = x.scale(&HahnSeries::monomial(p, 1, eps - v))?;
        check(&m, &mut report)?;
    }
    for step in &seq.steps {
        let depth = -&step.value;
        let floor = &depth * qi(i64::from(p) - 1);
        for frac in [qi(1) / qi(i64::from(p)), qi(1) / qi(i64::from(p * p))] {
            let beta = &floor + &depth * frac;
            let target = GroupElement::scalar(beta.clone());
            if !ideal.contains_value(&target) || !spec.base().contains_exponent(&beta) {
                continue;
            }
            report.witnesses_built += 1;
            let b = HahnSeries::monomial(p, 1, beta.clone());
            let lin = ExtensionElement::linear(a.clone(), &HahnSeries::one(p), &step.c)?;
            let m = lin.pow(p - 1)?.scale(&b)?;
            let positive = matches!(value_of(&m, seq)?, Some(v) if v > Q::zero());
            let tr = trace_element(&m);
            if positive && tr == b.neg() && tr.valuation() == Valuation::Value(beta) {
                report.witnesses_passed += 1;
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asext::{solve_as_root, SolverConfig};
    use crate::hahn::BaseFieldSpec;
    use crate::ogroup::OrderedGroup;
    use crate::rational::q;
    use alloc::string::ToString;
    use alloc::sync::Arc;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn abhyankar(p: u32) -> AsExtensionSpec {
        AsExtensionSpec::new(
            BaseFieldSpec::perfect_hull_rational(p).unwrap(),
            HahnSeries::parse("t^-1", p).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn table() {
        for p in [2u32, 3, 5] {
            let a = HahnSeries::parse("t^-1", p).unwrap();
            let t = trace_table(&a).unwrap();
            for (i, tr) in t.iter().enumerate() {
                let expected = if i == p as usize - 1 {
                    HahnSeries::one(p).neg()
                } else {
                    HahnSeries::zero(p)
                };
                assert_eq!(*tr, expected, "p={p} i={i}");
            }
        }
    }

    #[test]
    fn read_off() {
        let a = HahnSeries::parse("t^-1", 3).unwrap();
        let one = HahnSeries::one(3);
        let x = ExtensionElement::new(a.clone(), alloc::vec![one.clone(), one.scalar_mul(5), one.clone()]).unwrap();
        assert_eq!(trace_element(&x), HahnSeries::parse("2", 3).unwrap());
        let a2 = HahnSeries::parse("t^-1", 2).unwrap();
        assert_eq!(trace_element(&ExtensionElement::theta(a2)), HahnSeries::one(2));
    }

    #[test]
    fn ideals() {
        let g = Arc::new(OrderedGroup::rationals());
        let s = FinalSegment::parse(">=1", g.clone()).unwrap();
        assert_eq!(trace_ideal(&s, 3).unwrap().segment().to_string(), ">=2");
        let g2 = Arc::new(OrderedGroup::parse_shorthand("QxZ").unwrap());
        let s = FinalSegment::parse(">H1", g2).unwrap();
        assert_eq!(trace_ideal(&s, 2).unwrap().is_prime().map(|h| h.index()), Some(1));
    }

    #[test]
    fn boundary_example() {
        let spec = abhyankar(2);
        let seq = solve_as_root(&spec, &SolverConfig::p_power(2, 8)).unwrap();
        let a = spec.rhs().clone();
        let c2 = &seq.steps[1];
        assert_eq!(c2.value, q(-1, 4));
        let lin = ExtensionElement::linear(a.clone(), &HahnSeries::one(2), &c2.c).unwrap();
        let m = lin.scale(&HahnSeries::monomial(2, 1, q(1, 4))).unwrap();
        assert_eq!(element_valuation(&m, &seq.steps).unwrap(), Q::zero());
        let m = lin.scale(&HahnSeries::monomial(2, 1, q(1, 2))).unwrap();
        assert_eq!(element_valuation(&m, &seq.steps).unwrap(), q(1, 4));
        assert_eq!(trace_element(&m), HahnSeries::monomial(2, 1, q(1, 2)));
    }

    #[test]
    fn abhyankar_samples() {
        for p in [2u32, 3] {
            let spec = abhyankar(p);
            let seq = solve_as_root(&spec, &SolverConfig::p_power(p, 10)).unwrap();
            let g = Arc::new(spec.value_group());
            let sigma = FinalSegment::parse(">0", g).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let r = verify_trace_theorem(&spec, &seq, &sigma, 100, &mut rng).unwrap();
            assert!(r.ok(), "{r:?}");
            assert!(r.tested >= 100 && r.witnesses_built >= 10, "{r:?}");
            assert!(r.filtered_out > 0 && r.cross_checked == 8);
        }
    }
}
