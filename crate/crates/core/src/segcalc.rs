//! Final segments (cuts) of lexicographic value groups and the proper ideals
//! of a valuation ring they describe.
//!
//! Every supported final segment is one of
//!
//! * `Empty`;
//! * `ClosedAt(β)` = `{γ ≥ β}` with `β ∈ Γ`;
//! * `OpenAt(b)` with `b ∈ Q^j`, `1 <= j <= k`, meaning `{γ : γ|_j > b}` where
//!   `γ|_j` is the length-`j` prefix compared lexicographically.
//!
//! `OpenAt(0 ∈ Q^j)` is the set of elements above the convex subgroup `H_j`.
//! Forms are kept canonical so that structural equality is set equality.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ogroup::{fmt_coords, parse_hull_element, ConvexSubgroup, GroupElement, OrderedGroup};
use crate::rational::{parse_rational, q, Q};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SegmentForm {
    Empty,
    ClosedAt(GroupElement),
    OpenAt(Vec<Q>),
}

/// A cut in the divisible hull: `{x : x|_j ≥ b}` (closed) or `{x : x|_j > b}`.
/// Exactly describes the segment on group elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct HullCut {
    pub(crate) b: Vec<Q>,
    pub(crate) closed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinalSegment {
    group: Arc<OrderedGroup>,
    form: SegmentForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum KeyPart<'a> {
    Fin(&'a Q),
    PlusInf,
}

impl FinalSegment {
    pub fn empty(group: Arc<OrderedGroup>) -> Self {
        FinalSegment {
            group,
            form: SegmentForm::Empty,
        }
    }

    /// `{γ ≥ β}`; `β` must lie in the group.
    pub fn closed_at(group: Arc<OrderedGroup>, beta: GroupElement) -> Result<Self> {
        group.check(&beta)?;
        Ok(FinalSegment {
            group,
            form: SegmentForm::ClosedAt(beta),
        })
    }

    /// `{γ > β}` for `β` in the divisible hull, canonicalized.
    pub fn open_at(group: Arc<OrderedGroup>, beta: &GroupElement) -> Result<Self> {
        group.check_hull(beta)?;
        Self::from_hull_cut(
            group,
            HullCut {
                b: beta.coords().to_vec(),
                closed: false,
            },
        )
    }

    /// `{γ ≥ β}` for `β` in the divisible hull, canonicalized.
    pub fn at_least(group: Arc<OrderedGroup>, beta: &GroupElement) -> Result<Self> {
        group.check_hull(beta)?;
        Self::from_hull_cut(
            group,
            HullCut {
                b: beta.coords().to_vec(),
                closed: true,
            },
        )
    }

    /// `{γ : γ > H}`; the segment `Γ^{≥0} ∖ H` for proper `H`.
    pub fn above_subgroup(group: Arc<OrderedGroup>, h: ConvexSubgroup) -> Result<Self> {
        let j = h.index();
        if j == 0 {
            return Err(Error::NotProper(0));
        }
        if j > group.rank() {
            return Err(Error::InvalidArgument(format!("H{j} does not exist")));
        }
        Self::from_hull_cut(
            group,
            HullCut {
                b: alloc::vec![Q::zero(); j],
                closed: false,
            },
        )
    }

    /// `{γ > b + H_j}` for a prefix `b ∈ Q^j`.
    pub fn open_above_prefix(group: Arc<OrderedGroup>, prefix: Vec<Q>) -> Result<Self> {
        if prefix.is_empty() || prefix.len() > group.rank() {
            return Err(Error::InvalidArgument(format!(
                "prefix length {} out of range for rank {}",
                prefix.len(),
                group.rank()
            )));
        }
        Self::from_hull_cut(
            group,
            HullCut {
                b: prefix,
                closed: false,
            },
        )
    }

    pub fn group(&self) -> &Arc<OrderedGroup> {
        &self.group
    }

    pub fn form(&self) -> &SegmentForm {
        &self.form
    }

    pub fn is_empty(&self) -> bool {
        self.form == SegmentForm::Empty
    }

    pub(crate) fn from_hull_cut(group: Arc<OrderedGroup>, cut: HullCut) -> Result<Self> {
        let k = group.rank();
        let HullCut { mut b, closed } = cut;
        let j = b.len();
        debug_assert!(j <= k);
        if j == 0 {
            if closed {
                return Err(Error::UnsupportedCut(
                    "the whole group is not a segment of the positive cone".into(),
                ));
            }
            return Ok(Self::empty(group));
        }
        if let Some(i) = (0..j).find(|&i| !group.slot(i).contains(&b[i])) {
            if i + 1 < j {
                b.truncate(i + 1);
                return Self::from_hull_cut(group, HullCut { b, closed: false });
            }
            let slot = group.slot(i);
            if let Some(c) = slot.floor_discrete(&b[i]) {
                b[i] = c + slot.base();
                return Self::from_hull_cut(group, HullCut { b, closed: true });
            }
            return Ok(FinalSegment {
                group,
                form: SegmentForm::OpenAt(b),
            });
        }
        let slot = group.slot(j - 1);
        let half = q(1, 2);
        let form = match (closed, j == k, slot.step().cloned()) {
            (true, true, _) => SegmentForm::ClosedAt(GroupElement::new(b)),
            (true, false, Some(g)) => {
                b[j - 1] -= g * half;
                SegmentForm::OpenAt(b)
            }
            (true, false, None) => {
                return Err(Error::UnsupportedCut(format!(
                    "{{x : x|{j} >= {}}} over a dense slot has no canonical form",
                    Prefix(&b)
                )))
            }
            (false, true, Some(g)) => {
                b[j - 1] += g;
                SegmentForm::ClosedAt(GroupElement::new(b))
            }
            (false, false, Some(g)) => {
                b[j - 1] += g * half;
                SegmentForm::OpenAt(b)
            }
            (false, _, None) => SegmentForm::OpenAt(b),
        };
        Ok(FinalSegment { group, form })
    }

    /// The cut in the divisible hull whose trace on `Γ` is this segment.
    /// Discrete open levels are expressed as closed cuts at the next element
    /// so that scaling in the hull commutes with upward closure.
    pub(crate) fn to_hull_cut(&self) -> HullCut {
        match &self.form {
            SegmentForm::Empty => HullCut {
                b: Vec::new(),
                closed: false,
            },
            SegmentForm::ClosedAt(beta) => HullCut {
                b: beta.coords().to_vec(),
                closed: true,
            },
            SegmentForm::OpenAt(b) => {
                let j = b.len();
                let slot = self.group.slot(j - 1);
                match slot.floor_discrete(&b[j - 1]) {
                    Some(f) => {
                        let mut b = b.clone();
                        b[j - 1] = f + slot.base();
                        HullCut { b, closed: true }
                    }
                    None => HullCut {
                        b: b.clone(),
                        closed: false,
                    },
                }
            }
        }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        if !self.group.contains(g) {
            return false;
        }
        self.contains_hull(g)
    }

    /// Membership of a divisible-hull vector in the hull cut.
    pub fn contains_hull(&self, g: &GroupElement) -> bool {
        let cut = self.to_hull_cut();
        if cut.b.is_empty() {
            return false;
        }
        let ord = g.prefix(cut.b.len()).cmp(&cut.b[..]);
        ord == Ordering::Greater || (cut.closed && ord == Ordering::Equal)
    }

    fn key(&self) -> (Vec<KeyPart<'_>>, bool) {
        let k = self.group.rank();
        match &self.form {
            SegmentForm::Empty => (alloc::vec![KeyPart::PlusInf; k], true),
            SegmentForm::ClosedAt(beta) => (beta.coords().iter().map(KeyPart::Fin).collect(), false),
            SegmentForm::OpenAt(b) => {
                let mut key: Vec<KeyPart<'_>> = b.iter().map(KeyPart::Fin).collect();
                key.resize(k, KeyPart::PlusInf);
                (key, true)
            }
        }
    }

    fn same_group(&self, other: &FinalSegment) -> Result<()> {
        if self.group != other.group {
            return Err(Error::GroupMismatch(format!(
                "segments over {} and {}",
                self.group, other.group
            )));
        }
        Ok(())
    }

    /// Set inclusion `self ⊆ other`.
    pub fn is_subset_of(&self, other: &FinalSegment) -> Result<bool> {
        self.same_group(other)?;
        Ok(self.key() >= other.key())
    }

    pub fn is_subset_of_positive(&self) -> bool {
        !self.contains(&self.group.zero())
    }

    /// `(nΣ)↑`.
    pub fn scale_up(&self, n: u64) -> Result<FinalSegment> {
        if n == 0 {
            return Err(Error::InvalidArgument("scale factor must be at least 1".into()));
        }
        let mut cut = self.to_hull_cut();
        let n = Q::from_integer(n.into());
        for x in &mut cut.b {
            *x *= &n;
        }
        Self::from_hull_cut(self.group.clone(), cut)
    }

    /// `nΣ` as a (non upward-closed) point set.
    pub fn scale(&self, n: u64) -> ScaledSegment {
        ScaledSegment {
            n,
            segment: self.clone(),
        }
    }

    /// `γ + Σ` for `γ` in the divisible hull, traced back onto `Γ`.
    pub fn shift(&self, gamma: &GroupElement) -> Result<FinalSegment> {
        self.group.check_hull(gamma)?;
        let mut cut = self.to_hull_cut();
        for (x, s) in cut.b.iter_mut().zip(gamma.coords()) {
            *x += s;
        }
        Self::from_hull_cut(self.group.clone(), cut)
    }

    /// `{γ : nγ ∈ Σ}`.
    pub fn preimage_scale(&self, n: u64) -> Result<FinalSegment> {
        if n == 0 {
            return Err(Error::InvalidArgument("scale factor must be at least 1".into()));
        }
        let mut cut = self.to_hull_cut();
        let n = Q::from_integer(n.into());
        for x in &mut cut.b {
            *x /= &n;
        }
        Self::from_hull_cut(self.group.clone(), cut)
    }

    pub fn negate(&self) -> InitialSegment {
        InitialSegment { neg: self.clone() }
    }

    /// `(Σ + Σ')↑`, the segment of the product of the two ideals.
    pub fn sum(&self, other: &FinalSegment) -> Result<FinalSegment> {
        self.same_group(other)?;
        let a = self.to_hull_cut();
        let b = other.to_hull_cut();
        if a.b.is_empty() || b.b.is_empty() {
            return Ok(Self::empty(self.group.clone()));
        }
        let (short, long) = if a.b.len() <= b.b.len() { (&a, &b) } else { (&b, &a) };
        let j = short.b.len();
        let closed = if long.b.len() == j {
            short.closed && long.closed
        } else {
            short.closed
        };
        let sum: Vec<Q> = short.b.iter().zip(&long.b).map(|(x, y)| x + y).collect();
        Self::from_hull_cut(self.group.clone(), HullCut { b: sum, closed })
    }

    /// Whether the segment equals `{γ > H_j}` for the convex subgroup `H_j`.
    pub fn as_above_subgroup(&self) -> Option<ConvexSubgroup> {
        (1..=self.group.rank()).find_map(|j| {
            let h = self.group.subgroup(j).ok()?;
            let above = Self::above_subgroup(self.group.clone(), h).ok()?;
            (above == *self).then_some(h)
        })
    }

    /// Parses `">0"`, `">=1"`, `">1/2"`, `">(0,1)"`, `">H1"`, `">(1/2)+H1"`,
    /// `">=(1)+H1"` and `"empty"`.
    pub fn parse(text: &str, group: Arc<OrderedGroup>) -> Result<FinalSegment> {
        let s = text.trim();
        if s == "empty" {
            return Ok(Self::empty(group));
        }
        let (closed, rest) = if let Some(r) = s.strip_prefix(">=") {
            (true, r)
        } else if let Some(r) = s.strip_prefix('>') {
            (false, r)
        } else {
            return Err(Error::Parse(format!("final segment literal must start with > or >=: {s:?}")));
        };
        let cut = parse_boundary(rest.trim(), group.rank(), closed)?;
        Self::from_hull_cut(group, cut)
    }

    /// Lower boundary of the segment in the hull, if any (for reports).
    pub fn boundary(&self) -> Option<&[Q]> {
        match &self.form {
            SegmentForm::Empty => None,
            SegmentForm::ClosedAt(b) => Some(b.coords()),
            SegmentForm::OpenAt(b) => Some(b),
        }
    }
}

fn parse_boundary(rest: &str, rank: usize, closed: bool) -> Result<HullCut> {
    let (point, level) = match rest.rsplit_once('H') {
        Some((head, idx)) => {
            let j: usize = idx
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad subgroup index in {rest:?}")))?;
            if j == 0 || j > rank {
                return Err(Error::Parse(format!("H{j} is not a proper convex subgroup")));
            }
            let head = head.trim();
            let prefix = if head.is_empty() {
                alloc::vec![Q::zero(); j]
            } else {
                let p = head
                    .strip_suffix('+')
                    .ok_or_else(|| Error::Parse(format!("expected '+' before H in {rest:?}")))?
                    .trim();
                let inner = p
                    .strip_prefix('(')
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| Error::Parse(format!("prefix must be parenthesized in {rest:?}")))?;
                inner.split(',').map(parse_rational).collect::<Result<Vec<_>>>()?
            };
            if prefix.len() != j {
                return Err(Error::Parse(format!(
                    "prefix of H{j} must have {j} coordinates in {rest:?}"
                )));
            }
            (prefix, j)
        }
        None => {
            let g = parse_hull_element(rest, rank)?;
            (g.coords().to_vec(), rank)
        }
    };
    debug_assert_eq!(point.len(), level);
    Ok(HullCut { b: point, closed })
}

struct Prefix<'a>(&'a [Q]);

impl fmt::Display for Prefix<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            write!(f, "(")?;
            fmt_coords(f, self.0)?;
            write!(f, ")")
        } else {
            fmt_coords(f, self.0)
        }
    }
}

fn fmt_form(f: &mut fmt::Formatter<'_>, form: &SegmentForm, rank: usize, negated: bool) -> fmt::Result {
    let (strict, weak) = if negated { ("<", "<=") } else { (">", ">=") };
    let flip = |xs: &[Q]| -> Vec<Q> {
        if negated {
            xs.iter().map(|x| -x).collect()
        } else {
            xs.to_vec()
        }
    };
    match form {
        SegmentForm::Empty => write!(f, "empty"),
        SegmentForm::ClosedAt(b) => {
            write!(f, "{weak}")?;
            fmt_coords(f, &flip(b.coords()))
        }
        SegmentForm::OpenAt(b) if b.len() == rank => {
            write!(f, "{strict}")?;
            fmt_coords(f, &flip(b))
        }
        SegmentForm::OpenAt(b) => {
            write!(f, "{strict}")?;
            if !b.iter().all(Zero::is_zero) {
                write!(f, "{}+", Prefix(&flip(b)))?;
            }
            write!(f, "H{}", b.len())
        }
    }
}

impl fmt::Display for FinalSegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_form(f, &self.form, self.group.rank(), false)
    }
}

/// An initial segment, stored as the pointwise negation of a final segment.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InitialSegment {
    neg: FinalSegment,
}

impl InitialSegment {
    /// `{γ < β}` for `β` in the divisible hull.
    pub fn below(group: Arc<OrderedGroup>, beta: &GroupElement) -> Result<Self> {
        Ok(FinalSegment::open_at(group, &beta.neg())?.negate())
    }

    /// `{γ ≤ β}` for `β` in the divisible hull.
    pub fn at_most(group: Arc<OrderedGroup>, beta: &GroupElement) -> Result<Self> {
        Ok(FinalSegment::at_least(group, &beta.neg())?.negate())
    }

    pub fn group(&self) -> &Arc<OrderedGroup> {
        self.neg.group()
    }

    /// The final segment `−S`.
    pub fn negate(&self) -> FinalSegment {
        self.neg.clone()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.neg.contains(&g.neg())
    }

    pub fn contains_hull(&self, g: &GroupElement) -> bool {
        self.neg.contains_hull(&g.neg())
    }

    pub fn is_empty(&self) -> bool {
        self.neg.is_empty()
    }

    /// `γ + S`.
    pub fn shift(&self, gamma: &GroupElement) -> Result<InitialSegment> {
        Ok(self.neg.shift(&gamma.neg())?.negate())
    }

    /// `(nS)↓`.
    pub fn scale_down_closure(&self, n: u64) -> Result<InitialSegment> {
        Ok(self.neg.scale_up(n)?.negate())
    }

    /// `{γ : nγ ∈ S}`.
    pub fn preimage_scale(&self, n: u64) -> Result<InitialSegment> {
        Ok(self.neg.preimage_scale(n)?.negate())
    }

    pub fn is_subset_of(&self, other: &InitialSegment) -> Result<bool> {
        self.neg.is_subset_of(&other.neg)
    }

    /// Upper boundary in the hull (negated boundary of `−S`).
    pub fn boundary(&self) -> Option<GroupElement> {
        self.neg
            .boundary()
            .map(|b| GroupElement::new(b.iter().map(|x| -x).collect()))
    }

    /// Parses `"<0"`, `"<=1/2"`, `"<H1"`, `"<(1/2)+H1"`, `"empty"`.
    pub fn parse(text: &str, group: Arc<OrderedGroup>) -> Result<InitialSegment> {
        let s = text.trim();
        if s == "empty" {
            return Ok(FinalSegment::empty(group).negate());
        }
        let (closed, rest) = if let Some(r) = s.strip_prefix("<=") {
            (true, r)
        } else if let Some(r) = s.strip_prefix('<') {
            (false, r)
        } else {
            return Err(Error::Parse(format!("initial segment literal must start with < or <=: {s:?}")));
        };
        let mut cut = parse_boundary(rest.trim(), group.rank(), closed)?;
        for x in &mut cut.b {
            *x = -&*x;
        }
        Ok(FinalSegment::from_hull_cut(group, cut)?.negate())
    }
}

/// `{λδ : δ ∈ D}` as an initial segment of `target`, which must contain
/// `λΓ` with every element of `target` of the form `λγ` on the cut's level
/// (e.g. `target = nΓ`, or `Γ` itself when `Γ` is `n`-divisible).
pub(crate) fn transport_initial(d: &InitialSegment, factor: &Q, target: Arc<OrderedGroup>) -> Result<InitialSegment> {
    if target.rank() != d.group().rank() {
        return Err(Error::GroupMismatch(format!("{} vs {}", target, d.group())));
    }
    let mut cut = d.neg.to_hull_cut();
    for x in &mut cut.b {
        *x *= factor;
    }
    Ok(FinalSegment::from_hull_cut(target, cut)?.negate())
}

impl fmt::Display for InitialSegment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_form(f, &self.neg.form, self.neg.group.rank(), true)
    }
}

/// The point set `nΣ` (not upward closed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledSegment {
    pub n: u64,
    pub segment: FinalSegment,
}

impl ScaledSegment {
    pub fn contains(&self, g: &GroupElement) -> bool {
        let x = g.scale(&Q::new(One::one(), self.n.into()));
        self.segment.contains(&x)
    }
}

/// Point-set descriptors accepted by [`upward_closure`].
#[derive(Debug, Clone)]
pub enum PointSet {
    Finite(Vec<GroupElement>),
    Scaled(u64, FinalSegment),
    Shifted(GroupElement, FinalSegment),
}

/// `S↑`, the smallest final segment containing `S`.
pub fn upward_closure(group: &Arc<OrderedGroup>, set: &PointSet) -> Result<FinalSegment> {
    match set {
        PointSet::Finite(points) => {
            for x in points {
                if x.rank() != group.rank() || !group.contains(x) {
                    return Err(Error::GroupMismatch(format!("{x} is not an element of {group}")));
                }
            }
            match points.iter().min_by(|a, b| a.lex_cmp(b)) {
                Some(m) => FinalSegment::closed_at(group.clone(), m.clone()),
                None => Ok(FinalSegment::empty(group.clone())),
            }
        }
        PointSet::Scaled(n, s) => {
            check_group(group, s)?;
            s.scale_up(*n)
        }
        PointSet::Shifted(gamma, s) => {
            check_group(group, s)?;
            group.check(gamma).map_err(|e| Error::GroupMismatch(format!("{e}")))?;
            s.shift(gamma)
        }
    }
}

fn check_group(group: &Arc<OrderedGroup>, s: &FinalSegment) -> Result<()> {
    if s.group() != group {
        return Err(Error::GroupMismatch(format!(
            "segment over {} used with {}",
            s.group(),
            group
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LemmaSd {
    Matches(ConvexSubgroup),
    Fails,
}

/// Decides `Σ = (mΣ)↑` and, when it holds, recovers `Δ` with
/// `Σ = Γ^{≥0} ∖ Δ`. Σ must be a nonempty segment of `Γ^{>0}`.
pub fn lemma_sd_classify(sigma: &FinalSegment, m: u64) -> Result<LemmaSd> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("m must be at least 2, got {m}")));
    }
    if sigma.is_empty() {
        return Err(Error::EmptySegment);
    }
    if !sigma.is_subset_of_positive() {
        return Err(Error::NotPositive(format!("{sigma} contains 0")));
    }
    if sigma.scale_up(m)? != *sigma {
        return Ok(LemmaSd::Fails);
    }
    let h = sigma.as_above_subgroup().ok_or_else(|| {
        Error::Incoherent(format!("{sigma} is {m}-stable but not of the form Γ^{{≥0}}∖Δ"))
    })?;
    if !sigma.group().is_strongly_convex(h)? {
        return Err(Error::Incoherent(format!(
            "{sigma} is {m}-stable but Γ/H{} has a smallest positive element",
            h.index()
        )));
    }
    for n in 2..=7 {
        if sigma.scale_up(n)? != *sigma {
            return Err(Error::Incoherent(format!("{sigma} is {m}-stable but not {n}-stable")));
        }
    }
    Ok(LemmaSd::Matches(h))
}

/// A proper ideal of the valuation ring, given by its value segment.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IdealDesc {
    segment: FinalSegment,
}

impl IdealDesc {
    /// `I_Σ = (a : va ∈ Σ)`; Σ must avoid 0 (proper ideal).
    pub fn new(segment: FinalSegment) -> Result<Self> {
        if !segment.is_subset_of_positive() {
            return Err(Error::NotPositive(format!(
                "{segment} contains 0, so the ideal is not proper"
            )));
        }
        Ok(IdealDesc { segment })
    }

    /// The maximal ideal, segment `Γ^{>0}`.
    pub fn maximal(group: Arc<OrderedGroup>) -> Self {
        let h = group.trivial_subgroup();
        let seg = FinalSegment::above_subgroup(group, h)
            .expect("H_k is proper");
        IdealDesc { segment: seg }
    }

    pub fn segment(&self) -> &FinalSegment {
        &self.segment
    }

    pub fn contains_value(&self, g: &GroupElement) -> bool {
        self.segment.contains(g)
    }

    pub fn is_subset_of(&self, other: &IdealDesc) -> Result<bool> {
        self.segment.is_subset_of(&other.segment)
    }

    /// `I^m`, segment `(mΣ)↑`.
    pub fn power(&self, m: u64) -> Result<IdealDesc> {
        if m == 0 {
            return Err(Error::InvalidArgument("ideal power exponent must be at least 1".into()));
        }
        Ok(IdealDesc {
            segment: self.segment.scale_up(m)?,
        })
    }

    /// `IJ`, segment `(Σ_I + Σ_J)↑`.
    pub fn product(&self, other: &IdealDesc) -> Result<IdealDesc> {
        Ok(IdealDesc {
            segment: self.segment.sum(&other.segment)?,
        })
    }

    pub fn is_idempotent(&self, p: u64) -> Result<bool> {
        Ok(self.power(p)? == *self)
    }

    /// `Some(H)` iff the ideal is the prime `M_{v_H}`, i.e. Σ = Γ^{≥0}∖H.
    /// The zero ideal is `M_{v_Γ}`.
    pub fn is_prime(&self) -> Option<ConvexSubgroup> {
        if self.segment.is_empty() {
            return Some(self.segment.group().whole());
        }
        self.segment.as_above_subgroup()
    }
}

impl fmt::Display for IdealDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "I({})", self.segment)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;
    use alloc::string::ToString;

    fn grp(s: &str) -> Arc<OrderedGroup> {
        Arc::new(OrderedGroup::parse_shorthand(s).unwrap())
    }

    fn seg(s: &str, g: &Arc<OrderedGroup>) -> FinalSegment {
        FinalSegment::parse(s, g.clone()).unwrap()
    }

    #[test]
    fn canonical_literals() {
        let gq = grp("Q");
        let z = grp("Z");
        let qz = grp("QxZ");
        assert_eq!(seg(">0", &z).to_string(), ">=1");
        assert_eq!(seg(">1/2", &z).to_string(), ">=1");
        assert_eq!(seg(">=1/2", &z).to_string(), ">=1");
        assert_eq!(seg(">1/2", &gq).to_string(), ">1/2");
        assert_eq!(seg(">H1", &qz).to_string(), ">H1");
        assert_eq!(seg(">(0,1)", &qz).to_string(), ">=(0,2)");
        assert_eq!(seg(">(1/3)+H1", &qz).to_string(), ">(1/3)+H1");
        assert_eq!(seg(">(1/3,7/2)", &qz).to_string(), ">=(1/3,4)");
        assert_eq!(seg(">(1/2,1/2)", &grp("ZxQ")).to_string(), ">(1/2)+H1");
        assert!(FinalSegment::parse(">=(0)+H1", qz.clone()).is_err());
        assert_eq!(seg(">=(0)+H1", &grp("ZxQ")).to_string(), ">(-1/2)+H1");
        assert_eq!(seg("empty", &gq).to_string(), "empty");
    }

    #[test]
    fn upward_closure_examples() {
        let gq = grp("Q");
        let pts = PointSet::Finite([1, 2, 5].iter().map(|&n| GroupElement::scalar(qi(n))).collect());
        assert_eq!(upward_closure(&gq, &pts).unwrap().to_string(), ">=1");
        let s = PointSet::Scaled(2, seg(">0", &gq));
        assert_eq!(upward_closure(&gq, &s).unwrap().to_string(), ">0");
        let z = grp("Z");
        let s = PointSet::Scaled(2, seg(">=1", &z));
        assert_eq!(upward_closure(&z, &s).unwrap().to_string(), ">=2");
        let bad = PointSet::Finite(alloc::vec![GroupElement::scalar(q(1, 2))]);
        assert!(matches!(upward_closure(&z, &bad), Err(Error::GroupMismatch(_))));
    }

    #[test]
    fn scale_up_examples() {
        let gq = grp("Q");
        assert_eq!(seg(">0", &gq).scale_up(3).unwrap(), seg(">0", &gq));
        assert_eq!(seg(">=1", &gq).scale_up(2).unwrap(), seg(">=2", &gq));
        let qz = grp("QxZ");
        assert_eq!(seg(">H1", &qz).scale_up(2).unwrap(), seg(">H1", &qz));
        assert_eq!(seg(">0", &grp("Z")).scale_up(3).unwrap().to_string(), ">=3");
    }

    #[test]
    fn negate_and_shift() {
        let gq = grp("Q");
        assert_eq!(seg(">0", &gq).negate().to_string(), "<0");
        let half = GroupElement::scalar(q(1, 2));
        assert_eq!(seg(">0", &gq).shift(&half).unwrap().to_string(), ">1/2");
        assert_eq!(seg(">=3/4", &gq).negate().to_string(), "<=-3/4");
        let d = InitialSegment::parse("<1/2", gq.clone()).unwrap();
        assert_eq!(d.negate().to_string(), ">-1/2");
        assert_eq!(d.to_string(), "<1/2");
        let d = InitialSegment::parse("<(1/2)+H1", grp("QxZ")).unwrap();
        assert_eq!(d.to_string(), "<(1/2)+H1");
    }

    #[test]
    fn lemma_sd_examples() {
        let gq = grp("Q");
        let qz = grp("QxZ");
        assert_eq!(
            lemma_sd_classify(&seg(">0", &gq), 2).unwrap(),
            LemmaSd::Matches(gq.subgroup(1).unwrap())
        );
        assert_eq!(lemma_sd_classify(&seg(">=1", &gq), 2).unwrap(), LemmaSd::Fails);
        assert_eq!(
            lemma_sd_classify(&seg(">H1", &qz), 3).unwrap(),
            LemmaSd::Matches(qz.subgroup(1).unwrap())
        );
        assert_eq!(lemma_sd_classify(&seg("empty", &gq), 2), Err(Error::EmptySegment));
        assert!(matches!(lemma_sd_classify(&seg(">=0", &gq), 2), Err(Error::NotPositive(_))));
        // quotient Q x Z / H2 has a smallest positive element
        assert_eq!(lemma_sd_classify(&seg(">(0,0)", &qz), 2).unwrap(), LemmaSd::Fails);
    }

    #[test]
    fn ideal_examples() {
        let gq = grp("Q");
        let z = grp("Z");
        let qz = grp("QxZ");
        let m = IdealDesc::new(seg(">0", &gq)).unwrap();
        assert_eq!(m.power(5).unwrap(), m);
        let i = IdealDesc::new(seg(">=1", &z)).unwrap();
        assert_eq!(i.power(2).unwrap().segment().to_string(), ">=2");
        let i = IdealDesc::new(seg(">=1", &gq)).unwrap();
        assert_eq!(i.power(1).unwrap(), i);
        assert!(m.is_idempotent(2).unwrap());
        assert!(!i.is_idempotent(2).unwrap());
        assert!(IdealDesc::new(seg(">H1", &qz)).unwrap().is_idempotent(5).unwrap());
        assert_eq!(m.is_prime(), Some(gq.subgroup(1).unwrap()));
        assert_eq!(i.is_prime(), None);
        assert_eq!(
            IdealDesc::new(seg(">H1", &qz)).unwrap().is_prime(),
            Some(qz.subgroup(1).unwrap())
        );
        assert!(IdealDesc::new(seg(">=0", &gq)).is_err());
        assert_eq!(IdealDesc::maximal(z.clone()).segment().to_string(), ">=1");
    }

    #[test]
    fn product_matches_power() {
        let g = grp("QxZ[1/2]");
        for lit in [">0", ">=(1,0)", ">H1", ">(1/3)+H1", ">(0,1/3)", ">=(2,-1/4)"] {
            let i = IdealDesc::new(seg(lit, &g)).unwrap();
            let mut acc = i.clone();
            for n in 2..6 {
                acc = acc.product(&i).unwrap();
                assert_eq!(acc, i.power(n).unwrap(), "{lit} ^ {n}");
            }
        }
    }

    #[test]
    fn inclusion_order() {
        let g = grp("ZxZ");
        let a = seg(">=(1,-5)", &g);
        let b = seg(">(1/2)+H1", &g);
        assert!(a.is_subset_of(&b).unwrap());
        assert!(!b.is_subset_of(&a).unwrap());
        assert!(seg("empty", &g).is_subset_of(&a).unwrap());
    }
}
