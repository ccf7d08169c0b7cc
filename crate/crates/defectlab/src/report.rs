//! Serializable reports. Field order is the output order.

use std::collections::BTreeSet;

use defectlab_core::analysis::{DefectReport, EquivalenceLedger};
use defectlab_core::conditions::{ConditionTable, Verdict};
use defectlab_core::kahler::omega_presentation;
use defectlab_core::kummer::{KummerReport, KummerValueData};
use defectlab_core::rational::fmt_rational;
use defectlab_core::trace::trace_ideal;
use defectlab_core::{ConvexSubgroup, OrderedGroup, Q};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Report {
    Defect(Box<DefectJson>),
    Inconclusive(InconclusiveJson),
    Kummer(Box<KummerJson>),
}

impl Report {
    pub fn coherent(&self) -> bool {
        match self {
            Report::Defect(r) => r.coherent,
            Report::Inconclusive(_) => true,
            Report::Kummer(r) => r.coherent,
        }
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Report::Inconclusive(_))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LedgerJson {
    pub segment: String,
    pub prime_shape: Option<String>,
    pub idempotent: bool,
    pub omega_zero: bool,
    pub trace_prime: Option<String>,
    pub agree: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionJson {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field_check: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct IndependenceConditionsJson {
    /// Letter → outcome, in letter order.
    pub conditions: serde_json::Map<String, serde_json::Value>,
    pub d_without_containment: bool,
    pub coherent: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct OmegaJson {
    pub u_segment: String,
    pub uv_segment: String,
    pub is_zero: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolverJson {
    pub steps: usize,
    pub distance_values: Vec<String>,
    pub residual_values: Vec<String>,
    pub residual_law: bool,
    pub beta: String,
    pub bracket_width: String,
    pub precision_exhausted: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceSamplesJson {
    pub tested: usize,
    pub passed: usize,
    pub skipped: usize,
    pub filtered_out: usize,
    pub cross_checked: usize,
    pub witnesses_built: usize,
    pub witnesses_passed: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RamificationJson {
    pub sampled: usize,
    pub in_sigma: usize,
    pub skipped: usize,
    pub chain_values: Vec<String>,
    pub chain_monotone: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainJson {
    pub links: usize,
    pub derivatives_verified: bool,
    pub pairs_verified: bool,
    pub u_segment: String,
    pub v_segment: String,
    pub uv_segment: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DefectJson {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub p: u32,
    pub group: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
    pub distance: String,
    pub sigma_e: String,
    pub ideal: String,
    pub verdict: String,
    pub h_e: Option<String>,
    pub ledger: LedgerJson,
    pub independence_conditions: IndependenceConditionsJson,
    pub omega_zero: bool,
    pub omega: OmegaJson,
    pub trace_ideal: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace_samples: Option<TraceSamplesJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ramification_samples: Option<RamificationJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain: Option<ChainJson>,
    pub coherent: bool,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InconclusiveJson {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub p: u32,
    pub verdict: String,
    /// The cut boundary lies in `(lo, hi]`.
    pub lo: String,
    pub hi: String,
    pub distance_values: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChiJson {
    pub value: String,
    pub in_group: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct KummerJson {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub p: u32,
    pub group: String,
    pub vp: String,
    pub distance: String,
    pub a_distance: String,
    pub sigma_e: String,
    pub chi: ChiJson,
    pub verdict: String,
    pub h_e: Option<String>,
    pub vp_in_h: bool,
    pub independence_conditions: IndependenceConditionsJson,
    pub idempotent: bool,
    pub omega_zero: bool,
    pub omega: OmegaJson,
    pub trace_ideal: String,
    pub coherent: bool,
    pub warnings: Vec<String>,
}

fn rationals(xs: &[Q]) -> Vec<String> {
    xs.iter().map(fmt_rational).collect()
}

fn subgroup(group: &OrderedGroup, h: Option<ConvexSubgroup>) -> Option<String> {
    h.map(|h| group.describe_subgroup(h))
}

fn verdict_word(v: &Verdict) -> String {
    match v {
        Verdict::Independent(_) => "independent".into(),
        Verdict::Dependent => "dependent".into(),
    }
}

fn verdict_subgroup(v: &Verdict) -> Option<ConvexSubgroup> {
    match v {
        Verdict::Independent(h) => Some(*h),
        Verdict::Dependent => None,
    }
}

/// `selection` limits the listed conditions; coherence is always judged on
/// the full table.
fn independence_conditions(table: &ConditionTable, group: &OrderedGroup, selection: Option<&BTreeSet<char>>) -> IndependenceConditionsJson {
    let mut conditions = serde_json::Map::new();
    for e in &table.entries {
        if selection.is_some_and(|s| !s.contains(&e.id.letter())) {
            continue;
        }
        let c = ConditionJson {
            holds: e.holds,
            subgroup: subgroup(group, e.subgroup),
            field_check: e.field_check,
            note: e.note.clone(),
        };
        conditions.insert(e.id.letter().to_string(), serde_json::to_value(c).expect("plain data"));
    }
    IndependenceConditionsJson {
        conditions,
        d_without_containment: table.d_without_containment,
        coherent: table.coherent(),
    }
}

fn ledger(l: &EquivalenceLedger, group: &OrderedGroup) -> LedgerJson {
    LedgerJson {
        segment: verdict_word(&l.segment),
        prime_shape: subgroup(group, l.prime_shape),
        idempotent: l.idempotent,
        omega_zero: l.omega_zero,
        trace_prime: subgroup(group, l.trace_prime),
        agree: l.agrees(),
    }
}

pub fn defect_json(r: &DefectReport, name: Option<String>, selection: Option<&BTreeSet<char>>) -> DefectJson {
    let g = &r.group;
    let f = r.field.as_deref();
    DefectJson {
        kind: if f.is_some() { "artin_schreier" } else { "injected_cut" },
        name,
        p: r.p,
        group: g.to_string(),
        base: f.map(|f| f.base.clone()),
        rhs: f.map(|f| f.rhs.to_string()),
        distance: r.distance.to_string(),
        sigma_e: r.sigma_e.to_string(),
        ideal: r.ideal.segment().to_string(),
        verdict: verdict_word(&r.verdict),
        h_e: subgroup(g, r.subgroup()),
        ledger: ledger(&r.ledger, g),
        independence_conditions: independence_conditions(&r.conditions, g, selection),
        omega_zero: r.ledger.omega_zero,
        omega: OmegaJson {
            u_segment: r.omega.u.segment().to_string(),
            uv_segment: r.omega.uv.segment().to_string(),
            is_zero: r.omega.is_zero(),
        },
        trace_ideal: r.trace_ideal.segment().to_string(),
        trace_samples: f.map(|f| TraceSamplesJson {
            tested: f.trace.tested,
            passed: f.trace.passed,
            skipped: f.trace.skipped,
            filtered_out: f.trace.filtered_out,
            cross_checked: f.trace.cross_checked,
            witnesses_built: f.trace.witnesses_built,
            witnesses_passed: f.trace.witnesses_passed,
        }),
        ramification_samples: f.map(|f| RamificationJson {
            sampled: f.ramification.sampled,
            in_sigma: f.ramification.in_sigma,
            skipped: f.ramification.skipped,
            chain_values: rationals(&f.ramification.chain_values),
            chain_monotone: f.ramification.chain_monotone,
        }),
        solver: f.map(|f| SolverJson {
            steps: f.distance_values.len(),
            distance_values: rationals(&f.distance_values),
            residual_values: rationals(&f.residual_values),
            residual_law: f.residual_law,
            beta: fmt_rational(&f.beta),
            bracket_width: fmt_rational(&f.bracket_width),
            precision_exhausted: f.precision_exhausted,
        }),
        chain: f.map(|f| ChainJson {
            links: f.chain.values.len(),
            derivatives_verified: f.chain.derivatives.iter().all(|&b| b),
            pairs_verified: f.chain.all_verified(),
            u_segment: f.chain.u_segment.to_string(),
            v_segment: f.chain.v_segment.to_string(),
            uv_segment: f.chain.uv_segment.to_string(),
        }),
        coherent: r.coherent(),
        warnings: r.warnings.clone(),
    }
}

pub fn inconclusive_json(name: Option<String>, p: u32, lo: &Q, hi: &Q, values: &[Q]) -> InconclusiveJson {
    InconclusiveJson {
        kind: "artin_schreier",
        name,
        p,
        verdict: "inconclusive".into(),
        lo: fmt_rational(lo),
        hi: fmt_rational(hi),
        distance_values: rationals(values),
    }
}

pub fn kummer_json(
    d: &KummerValueData,
    r: &KummerReport,
    name: Option<String>,
    selection: Option<&BTreeSet<char>>,
) -> defectlab_core::Result<KummerJson> {
    let g = d.group();
    let ideal = defectlab_core::IdealDesc::new(r.sigma_e.clone())?;
    let omega = omega_presentation(&ideal, d.p())?;
    let coherent = r.coherent() && omega.is_zero() == r.idempotent;
    Ok(KummerJson {
        kind: "kummer",
        name,
        p: d.p(),
        group: g.to_string(),
        vp: d.vp().to_string(),
        distance: d.distance().to_string(),
        a_distance: d.a_distance()?.to_string(),
        sigma_e: r.sigma_e.to_string(),
        chi: ChiJson {
            value: r.chi.value.to_string(),
            in_group: r.chi.in_group,
        },
        verdict: verdict_word(&r.verdict),
        h_e: subgroup(g, verdict_subgroup(&r.verdict)),
        vp_in_h: r.vp_in_h,
        independence_conditions: independence_conditions(&r.conditions, g, selection),
        idempotent: r.idempotent,
        omega_zero: omega.is_zero(),
        omega: OmegaJson {
            u_segment: omega.u.segment().to_string(),
            uv_segment: omega.uv.segment().to_string(),
            is_zero: omega.is_zero(),
        },
        trace_ideal: trace_ideal(&r.sigma_e, d.p())?.segment().to_string(),
        coherent,
        warnings: r.warnings.clone(),
    })
}

/// Indented `key: value` lines from the JSON form of a report.
pub fn render_text(value: &serde_json::Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0);
    out
}

fn scalar(v: &serde_json::Value) -> Option<String> {
    match v {
        serde_json::Value::Null => Some("-".into()),
        serde_json::Value::Bool(b) => Some(if *b { "yes" } else { "no" }.into()),
        serde_json::Value::Number(n) => Some(n.to_string()),
        serde_json::Value::String(s) => Some(s.clone()),
        serde_json::Value::Array(a) if a.iter().all(|x| x.is_string() || x.is_number()) => Some(
            a.iter()
                .map(|x| scalar(x).unwrap_or_default())
                .collect::<Vec<_>>()
                .join(", "),
        ),
        _ => None,
    }
}

fn write_value(out: &mut String, v: &serde_json::Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        serde_json::Value::Object(map) => {
            for (k, x) in map {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        write_value(out, x, depth + 1);
                    }
                }
            }
        }
        serde_json::Value::Array(items) => {
            for x in items {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        write_value(out, x, depth + 1);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}
