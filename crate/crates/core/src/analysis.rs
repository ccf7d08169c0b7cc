//! The full pipeline for one extension: distance cut, `Σ_E`, `I_E`, the
//! verdict, the five equivalent characterizations of independence, the
//! condition table, and the field-level sample checks.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::Zero;
use rand::Rng;

use crate::asext::{
    distance_and_sigma, ramification_ideal, sample_ramification_values, solve_as_root, AsExtensionSpec,
    DistanceOutcome, SolverConfig,
};
use crate::conditions::{evaluate, ConditionTable, CutSetting, FieldEvidence, Verdict};
use crate::error::{Error, Result};
use crate::hahn::{HahnSeries, Valuation};
use crate::kahler::{finite_chain_presentation_check, omega_presentation, ChainPresentationReport, PresentedModule};
use crate::ogroup::{ConvexSubgroup, GroupElement, OrderedGroup};
use crate::rational::{qi, Q};
use crate::segcalc::{lemma_sd_classify, FinalSegment, IdealDesc, InitialSegment, LemmaSd};
use crate::trace::{trace_ideal, verify_trace_theorem, TraceReport};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisConfig {
    pub solver: SolverConfig,
    /// Random samples for the ramification and trace checks.
    pub samples: usize,
}

impl AnalysisConfig {
    /// Precision `p^{-10}`, 200 samples.
    pub fn standard(p: u32) -> Self {
        AnalysisConfig {
            solver: SolverConfig::p_power(p, 10),
            samples: 200,
        }
    }
}

/// The characterizations of independence, each computed on its own.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceLedger {
    /// `Σ_E = Γ^{>H}` with `H` strongly convex.
    pub segment: Verdict,
    /// `I_E = M_{v_H}` with `H` strongly convex.
    pub prime_shape: Option<ConvexSubgroup>,
    /// `I_E^p = I_E`.
    pub idempotent: bool,
    /// `I_E/I_E^p = 0`.
    pub omega_zero: bool,
    /// `Tr(M_L) = M_{v_H} ∩ K` with `H` strongly convex.
    pub trace_prime: Option<ConvexSubgroup>,
}

impl EquivalenceLedger {
    pub fn agrees(&self) -> bool {
        let h = match self.segment {
            Verdict::Independent(h) => Some(h),
            Verdict::Dependent => None,
        };
        self.prime_shape == h
            && self.trace_prime == h
            && self.idempotent == h.is_some()
            && self.omega_zero == h.is_some()
    }
}

fn strongly_convex_prime(ideal: &IdealDesc) -> Result<Option<ConvexSubgroup>> {
    match ideal.is_prime() {
        Some(h) if h.index() >= 1 && ideal.segment().group().is_strongly_convex(h)? => Ok(Some(h)),
        _ => Ok(None),
    }
}

pub fn classify_segment(sigma_e: &FinalSegment, p: u32) -> Result<Verdict> {
    Ok(match lemma_sd_classify(sigma_e, u64::from(p))? {
        LemmaSd::Matches(h) => Verdict::Independent(h),
        LemmaSd::Fails => Verdict::Dependent,
    })
}

pub fn equivalence_ledger(sigma_e: &FinalSegment, p: u32) -> Result<EquivalenceLedger> {
    let ideal = ramification_ideal(sigma_e)?;
    Ok(EquivalenceLedger {
        segment: classify_segment(sigma_e, p)?,
        prime_shape: strongly_convex_prime(&ideal)?,
        idempotent: ideal.is_idempotent(u64::from(p))?,
        omega_zero: omega_presentation(&ideal, p)?.is_zero(),
        trace_prime: strongly_convex_prime(&trace_ideal(sigma_e, p)?)?,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamificationReport {
    pub sampled: usize,
    /// Sampled values lying in `Σ_E`.
    pub in_sigma: usize,
    pub skipped: usize,
    /// `v((σb − b)/b)` for `b = ϑ − c_i`.
    pub chain_values: Vec<Q>,
    pub chain_in_sigma: bool,
    /// The chain values decrease strictly toward the boundary.
    pub chain_monotone: bool,
}

impl RamificationReport {
    pub fn ok(&self) -> bool {
        self.in_sigma == self.sampled && self.chain_in_sigma && self.chain_monotone
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldData {
    pub base: String,
    pub rhs: HahnSeries,
    pub distance_values: Vec<Q>,
    pub residual_values: Vec<Q>,
    /// `p·v(ϑ − c_i) = v(a − ℘(c_i))` at every step.
    pub residual_law: bool,
    pub beta: Q,
    pub bracket_width: Q,
    pub precision_exhausted: bool,
    pub ramification: RamificationReport,
    pub trace: TraceReport,
    pub chain: ChainPresentationReport,
}

impl FieldData {
    pub fn ok(&self, omega: &PresentedModule, p: u32) -> bool {
        self.residual_law
            && self.ramification.ok()
            && self.trace.ok()
            && self.chain.all_verified()
            && self.chain.within(omega, p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectReport {
    pub p: u32,
    pub group: Arc<OrderedGroup>,
    /// `v(ϑ − K)`.
    pub distance: InitialSegment,
    pub sigma_e: FinalSegment,
    pub ideal: IdealDesc,
    pub verdict: Verdict,
    pub ledger: EquivalenceLedger,
    pub conditions: ConditionTable,
    pub omega: PresentedModule,
    pub trace_ideal: IdealDesc,
    /// Absent for injected cuts.
    pub field: Option<Box<FieldData>>,
    pub warnings: Vec<String>,
}

impl DefectReport {
    pub fn subgroup(&self) -> Option<ConvexSubgroup> {
        match self.verdict {
            Verdict::Independent(h) => Some(h),
            Verdict::Dependent => None,
        }
    }

    /// Every computed characterization and every field-level check agree.
    pub fn coherent(&self) -> bool {
        self.ledger.segment == self.verdict
            && self.ledger.agrees()
            && self.conditions.coherent()
            && self.conditions.all_hold() == self.verdict.is_independent()
            && self.omega.is_zero() == self.ledger.omega_zero
            && self.field.as_ref().is_none_or(|f| f.ok(&self.omega, self.p))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Analysis {
    Report(Box<DefectReport>),
    /// The distance cut did not stabilize; `β` lies in `(lo, hi]`.
    Inconclusive { lo: Q, hi: Q, distance_values: Vec<Q> },
}

fn value_level(sigma_e: &FinalSegment, p: u32, evidence: Option<&FieldEvidence>) -> Result<DefectReport> {
    let group = sigma_e.group().clone();
    let ideal = ramification_ideal(sigma_e)?;
    let ledger = equivalence_ledger(sigma_e, p)?;
    let setting = CutSetting::artin_schreier(sigma_e, p)?;
    let conditions = evaluate(&setting, evidence)?;
    let omega = omega_presentation(&ideal, p)?;
    let mut warnings = Vec::new();
    if conditions.d_without_containment && !conditions.all_hold() {
        warnings.push("condition d holds without its containment clause".into());
    }
    Ok(DefectReport {
        p,
        distance: setting.distance,
        sigma_e: sigma_e.clone(),
        verdict: ledger.segment,
        trace_ideal: trace_ideal(sigma_e, p)?,
        ideal,
        ledger,
        conditions,
        omega,
        group,
        field: None,
        warnings,
    })
}

/// Report for an injected ramification jump.
pub fn analyze_cut(sigma_e: &FinalSegment, p: u32) -> Result<DefectReport> {
    value_level(sigma_e, p, None)
}

fn ramification_report(
    sample: crate::asext::RamificationSample,
    sigma_e: &FinalSegment,
) -> RamificationReport {
    let inside = |v: &Q| sigma_e.contains(&GroupElement::scalar(v.clone()));
    RamificationReport {
        sampled: sample.values.len(),
        in_sigma: sample.values.iter().filter(|v| inside(v)).count(),
        skipped: sample.skipped,
        chain_in_sigma: sample.chain_values.iter().all(inside),
        chain_monotone: sample.chain_values.windows(2).all(|w| w[1] < w[0]),
        chain_values: sample.chain_values,
    }
}

/// Runs the solver and every check on an Artin-Schreier extension.
pub fn classify_defect<R: Rng + ?Sized>(spec: &AsExtensionSpec, cfg: &AnalysisConfig, rng: &mut R) -> Result<Analysis> {
    let p = spec.p();
    let seq = solve_as_root(spec, &cfg.solver)?;
    let group = Arc::new(spec.value_group());
    let data = match distance_and_sigma(&group, &seq)? {
        DistanceOutcome::Determined(d) => d,
        DistanceOutcome::Inconclusive { lo, hi } => {
            return Ok(Analysis::Inconclusive {
                lo,
                hi,
                distance_values: seq.values(),
            })
        }
    };
    let pq = qi(i64::from(p));
    let mut residual_values = Vec::with_capacity(seq.steps.len());
    let mut residual_law = true;
    for step in &seq.steps {
        match step.residual.valuation() {
            Valuation::Value(r) => {
                residual_law &= r == &step.value * &pq;
                residual_values.push(r);
            }
            other => {
                return Err(Error::PrecisionLoss(format!("residual value {other} at a recorded step")));
            }
        }
    }
    let evidence = FieldEvidence {
        distance_values: seq.values(),
        probe_floor: residual_values.last().map_or_else(Q::zero, |r| -r.clone()),
        residual_values: residual_values.clone(),
    };
    let mut report = value_level(&data.sigma_e, p, Some(&evidence))?;
    if report.distance != data.distance {
        return Err(Error::Incoherent(format!(
            "distance cut {} vs {}",
            report.distance, data.distance
        )));
    }
    let sample = sample_ramification_values(spec, &seq, cfg.samples, rng)?;
    let ramification = ramification_report(sample, &data.sigma_e);
    let trace = verify_trace_theorem(spec, &seq, &data.sigma_e, cfg.samples.max(1), rng)?;
    let cs: Vec<HahnSeries> = seq.steps.iter().map(|s| s.c.clone()).collect();
    let chain = finite_chain_presentation_check(spec, &cs)?;
    if seq.precision_exhausted {
        report
            .warnings
            .push("series precision ran out before the solver target".into());
    }
    report.field = Some(Box::new(FieldData {
        base: spec.base().name(),
        rhs: spec.rhs().clone(),
        distance_values: seq.values(),
        residual_values,
        residual_law,
        beta: data.beta,
        bracket_width: data.bracket_width,
        precision_exhausted: seq.precision_exhausted,
        ramification,
        trace,
        chain,
    }));
    Ok(Analysis::Report(Box::new(report)))
}
