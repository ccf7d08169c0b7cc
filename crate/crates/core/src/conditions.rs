//! Value-level characterizations of independence for a degree-`p` defect
//! extension, phrased through the distance `D` of a generator from the base
//! field and a characteristic shift `s`:
//!
//! * Artin-Schreier: `s = 0`, `D = v(ϑ − K)`;
//! * Kummer: `s = vp/(p−1)`, `D = v(η − K)`.
//!
//! In both cases `Σ_E = s − D`, and the quantities `v(a − ℘(c))` (resp.
//! `v(a − c^p)`) sweep out `pD`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ogroup::{ConvexSubgroup, Divisibility, GroupElement, OrderedGroup};
use crate::rational::{qi, Q};
use crate::segcalc::{transport_initial, FinalSegment, InitialSegment};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// `Σ_E = Γ^{≥0} ∖ H` for the given proper strongly convex `H`.
    Independent(ConvexSubgroup),
    Dependent,
}

impl Verdict {
    pub fn is_independent(&self) -> bool {
        matches!(self, Verdict::Independent(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Independent(h) => write!(f, "independent ({h})"),
            Verdict::Dependent => write!(f, "dependent"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CutSetting {
    pub group: Arc<OrderedGroup>,
    pub p: u32,
    /// `s`, in the divisible hull.
    pub shift: GroupElement,
    pub distance: InitialSegment,
}

impl CutSetting {
    pub fn new(group: Arc<OrderedGroup>, p: u32, shift: GroupElement, distance: InitialSegment) -> Result<Self> {
        group.check_hull(&shift)?;
        if **distance.group() != *group {
            return Err(Error::GroupMismatch(format!("{} vs {}", distance.group(), group)));
        }
        Ok(CutSetting {
            group,
            p,
            shift,
            distance,
        })
    }

    /// Artin-Schreier setting: `s = 0`, `D = −Σ_E`.
    pub fn artin_schreier(sigma_e: &FinalSegment, p: u32) -> Result<Self> {
        let group = sigma_e.group().clone();
        let zero = group.zero();
        Self::new(group, p, zero, sigma_e.negate())
    }

    /// `Σ_E = s − D`.
    pub fn sigma_e(&self) -> Result<FinalSegment> {
        self.distance.negate().shift(&self.shift)
    }

    fn p64(&self) -> u64 {
        u64::from(self.p)
    }

    fn pq(&self) -> Q {
        qi(i64::from(self.p))
    }
}

/// Values observed along an approximation sequence (rank one).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FieldEvidence {
    /// `v(a − ℘(c_i))` (or `v(a − c_i^p)`).
    pub residual_values: Vec<Q>,
    /// `v(ϑ − c_i)`.
    pub distance_values: Vec<Q>,
    /// Probes `β` below this are beyond the precision of the observed steps.
    pub probe_floor: Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ConditionId {
    B,
    C,
    D,
    E,
    F,
    G,
}

impl ConditionId {
    pub fn letter(self) -> char {
        match self {
            ConditionId::B => 'b',
            ConditionId::C => 'c',
            ConditionId::D => 'd',
            ConditionId::E => 'e',
            ConditionId::F => 'f',
            ConditionId::G => 'g',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionOutcome {
    pub id: ConditionId,
    pub holds: bool,
    /// The subgroup witnessing the condition, when it names one.
    pub subgroup: Option<ConvexSubgroup>,
    /// Whether the observed field data are consistent with `holds`, when
    /// evidence was supplied.
    pub field_check: Option<bool>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionTable {
    pub entries: Vec<ConditionOutcome>,
    /// Condition d without the containment clause `Σ_E ⊆ Γ^{>H}`.
    pub d_without_containment: bool,
}

impl ConditionTable {
    pub fn get(&self, id: ConditionId) -> Option<&ConditionOutcome> {
        self.entries.iter().find(|e| e.id == id)
    }

    /// All evaluated conditions agree, and every field-level check agrees
    /// with its value-level counterpart.
    pub fn coherent(&self) -> bool {
        let Some(first) = self.entries.first() else {
            return true;
        };
        self.entries.iter().all(|e| {
            e.holds == first.holds && e.field_check != Some(false)
        })
    }

    pub fn all_hold(&self) -> bool {
        self.entries.iter().all(|e| e.holds)
    }
}

/// Positive elements `β` with `β > H_j`, used as probes.
pub fn samples_above(group: &OrderedGroup, j: usize) -> Vec<GroupElement> {
    let k = group.rank();
    let mut out = Vec::new();
    for i in 0..j.min(k) {
        let slot = group.slot(i);
        if slot.is_trivial() {
            continue;
        }
        let mut leads = Vec::new();
        let divisor: Option<u64> = match slot.divisibility() {
            Divisibility::All => Some(3),
            Divisibility::Primes(ps) => ps.first().copied(),
        };
        for m in [1i64, 2, 3, 7] {
            let g = slot.base() * qi(m);
            match divisor {
                Some(l) => {
                    let mut den = Q::one();
                    for _ in 0..=16 {
                        leads.push(&g / &den);
                        den *= qi(l as i64);
                    }
                }
                None => leads.push(g),
            }
        }
        for u in leads {
            for tail in [0i64, 1000, -1000] {
                let coords = (0..k)
                    .map(|c| match c.cmp(&i) {
                        core::cmp::Ordering::Less => Q::zero(),
                        core::cmp::Ordering::Equal => u.clone(),
                        core::cmp::Ordering::Greater => group.slot(c).base() * qi(tail),
                    })
                    .collect();
                out.push(GroupElement::new(coords));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// The proper strongly convex subgroups `H_1 … H_k`.
fn strongly_convex(group: &OrderedGroup) -> Vec<ConvexSubgroup> {
    (1..=group.rank())
        .filter_map(|j| group.subgroup(j).ok())
        .filter(|&h| group.is_strongly_convex(h).unwrap_or(false))
        .collect()
}

/// `D = s − (Γ^{>H})`, the distance an independent extension would have.
fn independent_distance(group: &Arc<OrderedGroup>, h: ConvexSubgroup, s: &GroupElement) -> Result<InitialSegment> {
    FinalSegment::above_subgroup(group.clone(), h)?.negate().shift(s)
}

fn condition_b(setting: &CutSetting) -> Result<ConditionOutcome> {
    let mut found = None;
    for h in strongly_convex(&setting.group) {
        if independent_distance(&setting.group, h, &setting.shift)? == setting.distance {
            found = Some(h);
            break;
        }
    }
    Ok(ConditionOutcome {
        id: ConditionId::B,
        holds: found.is_some(),
        subgroup: found,
        field_check: None,
        note: None,
    })
}

/// `pD` inside `pΓ` against `ps − (pΓ)^{>H}`.
fn condition_c(setting: &CutSetting) -> Result<ConditionOutcome> {
    let pg = Arc::new(setting.group.scaled(&setting.pq()));
    let image = transport_initial(&setting.distance, &setting.pq(), pg.clone())?;
    let ps = setting.shift.scale(&setting.pq());
    let mut found = None;
    for h in strongly_convex(&pg) {
        if independent_distance(&pg, h, &ps)? == image {
            found = Some(h);
            break;
        }
    }
    Ok(ConditionOutcome {
        id: ConditionId::C,
        holds: found.is_some(),
        subgroup: found,
        field_check: None,
        note: None,
    })
}

/// Some `δ ∈ D` satisfies `pδ ≥ ps − β`.
fn reaches(setting: &CutSetting, beta: &GroupElement) -> Result<bool> {
    let x = setting
        .shift
        .sub(&beta.scale(&(Q::one() / setting.pq())));
    let below = InitialSegment::below(setting.group.clone(), &x)?;
    Ok(!setting.distance.is_subset_of(&below)?)
}

fn reaches_all_above(setting: &CutSetting, h: ConvexSubgroup) -> Result<bool> {
    for beta in samples_above(&setting.group, h.index()) {
        if !reaches(setting, &beta)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn condition_d(setting: &CutSetting) -> Result<(ConditionOutcome, bool)> {
    let sigma = setting.sigma_e()?;
    let mut literal = false;
    let mut found = None;
    for h in strongly_convex(&setting.group) {
        if !reaches_all_above(setting, h)? {
            continue;
        }
        literal = true;
        let above = FinalSegment::above_subgroup(setting.group.clone(), h)?;
        if sigma.is_subset_of(&above)? {
            found = Some(h);
            break;
        }
    }
    Ok((
        ConditionOutcome {
            id: ConditionId::D,
            holds: found.is_some(),
            subgroup: found,
            field_check: None,
            note: (literal && found.is_none())
                .then(|| "every probe is reached, but Σ_E meets a strongly convex subgroup".into()),
        },
        literal,
    ))
}

/// `(pD)↓ = (p−1)s + D`, with a pointwise cross-check on a grid.
fn condition_e(setting: &CutSetting) -> Result<ConditionOutcome> {
    let lhs = setting.distance.scale_down_closure(setting.p64())?;
    let offset = setting.shift.scale(&(setting.pq() - Q::one()));
    let rhs = setting.distance.shift(&offset)?;
    let holds = lhs == rhs;
    if holds {
        let inv = Q::one() / setting.pq();
        for g in setting.group.grid(&qi(4), 3, 6) {
            let a = setting.distance.contains_hull(&g.scale(&inv));
            let b = setting.distance.contains_hull(&g.sub(&offset));
            if a != b {
                return Err(Error::Incoherent(format!(
                    "(pD)↓ = (p−1)s + D as cuts, but {g} separates them"
                )));
            }
        }
    }
    Ok(ConditionOutcome {
        id: ConditionId::E,
        holds,
        subgroup: None,
        field_check: None,
        note: None,
    })
}

/// `pD = (p−1)s + D`, computing `pD` by transport (valid since `pΓ = Γ`),
/// and checking observed values against it.
fn condition_f(setting: &CutSetting, evidence: Option<&FieldEvidence>) -> Result<ConditionOutcome> {
    let image = transport_initial(&setting.distance, &setting.pq(), setting.group.clone())?;
    let offset = setting.shift.scale(&(setting.pq() - Q::one()));
    let rhs = setting.distance.shift(&offset)?;
    let holds = image == rhs;
    let field_check = match evidence {
        Some(ev) if setting.group.rank() == 1 && !ev.residual_values.is_empty() => {
            let inside = ev
                .residual_values
                .iter()
                .all(|r| image.contains(&GroupElement::scalar(r.clone())));
            let n = ev.distance_values.len().min(ev.residual_values.len());
            let matched = ev.distance_values[..n.saturating_sub(1)]
                .iter()
                .all(|d| ev.residual_values.contains(&(d * setting.pq())));
            Some(inside && matched)
        }
        _ => None,
    };
    Ok(ConditionOutcome {
        id: ConditionId::F,
        holds,
        subgroup: None,
        field_check,
        note: None,
    })
}

/// Rank one: every `β > 0` is reached. Field level: every probe above the
/// precision floor is reached by an observed residual.
fn condition_g(setting: &CutSetting, evidence: Option<&FieldEvidence>) -> Result<ConditionOutcome> {
    let mut holds = true;
    for beta in samples_above(&setting.group, 1) {
        if !reaches(setting, &beta)? {
            holds = false;
            break;
        }
    }
    let field_check = match evidence {
        Some(ev) if !ev.residual_values.is_empty() => {
            let ps = &setting.shift.coords()[0] * setting.pq();
            let reached = samples_above(&setting.group, 1)
                .iter()
                .map(|b| b.coords()[0].clone())
                .filter(|b| b >= &ev.probe_floor)
                .all(|b| ev.residual_values.iter().any(|r| r >= &(&ps - &b)));
            Some(reached == holds)
        }
        _ => None,
    };
    Ok(ConditionOutcome {
        id: ConditionId::G,
        holds,
        subgroup: None,
        field_check,
        note: (holds && setting.group.rank() == 1)
            .then(|| "b ∈ O_K read as vb > 0".into()),
    })
}

/// Evaluates b–d, plus e–f when `Γ` is `p`-divisible and g in rank one.
pub fn evaluate(setting: &CutSetting, evidence: Option<&FieldEvidence>) -> Result<ConditionTable> {
    if setting.distance.is_empty() {
        return Err(Error::EmptySegment);
    }
    let mut entries = Vec::new();
    entries.push(condition_b(setting)?);
    entries.push(condition_c(setting)?);
    let (d, literal) = condition_d(setting)?;
    entries.push(d);
    if setting.group.is_divisible_by(setting.p64()) {
        entries.push(condition_e(setting)?);
        entries.push(condition_f(setting, evidence)?);
    }
    if setting.group.rank() == 1 {
        entries.push(condition_g(setting, evidence)?);
    }
    Ok(ConditionTable {
        entries,
        d_without_containment: literal,
    })
}
