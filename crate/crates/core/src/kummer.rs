//! Degree-`p` Kummer extensions in mixed characteristic, at the level of
//! values only: the generator `η`, `a = η^p` and the approximations `c`
//! appear through `vp`, the distance `v(η − K)` and single values `v(η − c)`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_traits::One;

use crate::conditions::{evaluate, ConditionTable, CutSetting, Verdict};
use crate::error::{Error, Result};
use crate::ogroup::{GroupElement, OrderedGroup};
use crate::rational::{qi, Q};
use crate::segcalc::{lemma_sd_classify, transport_initial, FinalSegment, IdealDesc, InitialSegment, LemmaSd};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiValue {
    /// `vχ = −vp/(p−1)`, in the divisible hull.
    pub value: GroupElement,
    pub in_group: bool,
}

/// `vχ = −vp/(p−1)`, the negative of `v(1 − ζ_p)`.
pub fn chi_value(p: u32, vp: &GroupElement, group: &OrderedGroup) -> Result<ChiValue> {
    check_p(p)?;
    group.check_hull(vp)?;
    if !vp.is_positive() {
        return Err(Error::InvalidCharacteristicData(format!("vp = {vp} is not positive")));
    }
    let value = vp.scale(&(-(Q::one() / qi(i64::from(p) - 1))));
    let in_group = group.contains(&value);
    Ok(ChiValue { value, in_group })
}

fn check_p(p: u32) -> Result<()> {
    if !crate::rational::is_prime(u64::from(p)) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct KummerValueData {
    p: u32,
    group: Arc<OrderedGroup>,
    vp: GroupElement,
    distance: InitialSegment,
    warnings: Vec<String>,
}

impl KummerValueData {
    /// Validates `vp > 0` and `v(η − K) < vp/(p−1)`.
    pub fn new(p: u32, group: Arc<OrderedGroup>, vp: GroupElement, distance: InitialSegment) -> Result<Self> {
        check_p(p)?;
        group.check(&vp)?;
        if !vp.is_positive() {
            return Err(Error::InvalidCharacteristicData(format!("vp = {vp} is not positive")));
        }
        if **distance.group() != *group {
            return Err(Error::GroupMismatch(format!("{} vs {}", distance.group(), group)));
        }
        if distance.is_empty() {
            return Err(Error::EmptySegment);
        }
        let s = vp.scale(&(Q::one() / qi(i64::from(p) - 1)));
        let bound = InitialSegment::below(group.clone(), &s)?;
        if !distance.is_subset_of(&bound)? {
            return Err(Error::BoundViolation(format!(
                "distance {distance} reaches vp/(p−1) = {s}"
            )));
        }
        let mut warnings = Vec::new();
        let nonpositive = InitialSegment::at_most(group.clone(), &group.zero())?;
        if distance.is_subset_of(&nonpositive)? {
            warnings.push(format!("distance {distance} has no positive value; the generator is not a 1-unit"));
        }
        if !group.contains(&s) {
            warnings.push(format!("vp/(p−1) = {s} lies outside the value group"));
        }
        Ok(KummerValueData {
            p,
            group,
            vp,
            distance,
            warnings,
        })
    }

    /// Builds the data from `v(a − K^p)`, using `v(a − K^p) = p·v(η − K)`.
    /// The segment may be given over `Γ` or over `pΓ`.
    pub fn from_a_distance(p: u32, group: Arc<OrderedGroup>, vp: GroupElement, a_distance: &InitialSegment) -> Result<Self> {
        let pq = qi(i64::from(p));
        let home = a_distance.group();
        if **home != *group && **home != group.scaled(&pq) {
            return Err(Error::GroupMismatch(format!("{home} is neither {group} nor its {p}-multiple")));
        }
        let distance = transport_initial(a_distance, &(Q::one() / pq), group.clone())?;
        Self::new(p, group, vp, distance)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn group(&self) -> &Arc<OrderedGroup> {
        &self.group
    }

    pub fn vp(&self) -> &GroupElement {
        &self.vp
    }

    pub fn distance(&self) -> &InitialSegment {
        &self.distance
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// `vp/(p−1)`.
    pub fn shift(&self) -> GroupElement {
        self.vp.scale(&(Q::one() / qi(i64::from(self.p) - 1)))
    }

    /// `v(a − K^p) = p·v(η − K)`, as a segment of `pΓ`.
    pub fn a_distance(&self) -> Result<InitialSegment> {
        let pq = qi(i64::from(self.p));
        transport_initial(&self.distance, &pq, Arc::new(self.group.scaled(&pq)))
    }

    pub fn setting(&self) -> Result<CutSetting> {
        CutSetting::new(self.group.clone(), self.p, self.shift(), self.distance.clone())
    }
}

/// `Σ_E = vp/(p−1) − v(η − K)`.
pub fn sigma_e_kummer(d: &KummerValueData) -> Result<FinalSegment> {
    d.distance.negate().shift(&d.shift())
}

/// `Σ_E` computed as `−(v(η − K) − vp/(p−1))`.
fn sigma_e_reflected(d: &KummerValueData) -> Result<FinalSegment> {
    Ok(d.distance.shift(&d.shift().neg())?.negate())
}

/// `vT_c = vp/(p−1) − v(η − c)`.
pub fn tc_value(d: &KummerValueData, v_eta_c: &GroupElement) -> Result<GroupElement> {
    d.group.check(v_eta_c)?;
    let s = d.shift();
    if v_eta_c.lex_cmp(&s) != core::cmp::Ordering::Less {
        return Err(Error::BoundViolation(format!("v(η − c) = {v_eta_c} is not below vp/(p−1) = {s}")));
    }
    if !d.distance.contains(v_eta_c) {
        return Err(Error::BoundViolation(format!("{v_eta_c} is not in the distance {}", d.distance)));
    }
    Ok(s.sub(v_eta_c))
}

#[derive(Debug, Clone)]
pub struct KummerReport {
    pub sigma_e: FinalSegment,
    pub chi: ChiValue,
    pub verdict: Verdict,
    pub conditions: ConditionTable,
    pub idempotent: bool,
    /// `vp ∈ H_E`, which no Kummer extension allows.
    pub vp_in_h: bool,
    pub warnings: Vec<String>,
}

impl KummerReport {
    /// Conditions agree with each other, with the segment classification and
    /// with idempotence of `I_E`.
    pub fn coherent(&self) -> bool {
        self.conditions.coherent()
            && self.conditions.all_hold() == self.verdict.is_independent()
            && self.idempotent == self.verdict.is_independent()
    }
}

pub fn check_kummer_conditions(d: &KummerValueData) -> Result<KummerReport> {
    let sigma_e = sigma_e_kummer(d)?;
    let other = sigma_e_reflected(d)?;
    if other != sigma_e {
        return Err(Error::Incoherent(format!("Σ_E computed two ways: {sigma_e} vs {other}")));
    }
    let chi = chi_value(d.p, &d.vp, &d.group)?;
    let verdict = match lemma_sd_classify(&sigma_e, u64::from(d.p))? {
        LemmaSd::Matches(h) => Verdict::Independent(h),
        LemmaSd::Fails => Verdict::Dependent,
    };
    let conditions = evaluate(&d.setting()?, None)?;
    let idempotent = IdealDesc::new(sigma_e.clone())?.is_idempotent(u64::from(d.p))?;
    let mut warnings = d.warnings.clone();
    let mut vp_in_h = false;
    if let Verdict::Independent(h) = verdict {
        if d.group.subgroup_contains(h, &d.vp) {
            vp_in_h = true;
            warnings.push(format!(
                "H_E = {} contains vp = {}; no Kummer extension has this distance",
                d.group.describe_subgroup(h),
                d.vp
            ));
        }
    }
    Ok(KummerReport {
        sigma_e,
        chi,
        verdict,
        conditions,
        idempotent,
        vp_in_h,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;
    use alloc::string::ToString;

    fn grp(s: &str) -> Arc<OrderedGroup> {
        Arc::new(OrderedGroup::parse_shorthand(s).unwrap())
    }

    fn data(p: u32, vp: &str, g: &Arc<OrderedGroup>, distance: &str) -> Result<KummerValueData> {
        let vp = g.parse_element(vp)?;
        let d = InitialSegment::parse(distance, g.clone())?;
        KummerValueData::new(p, g.clone(), vp, d)
    }

    #[test]
    fn chi() {
        let g = grp("Q");
        let c = chi_value(3, &GroupElement::scalar(qi(1)), &g).unwrap();
        assert_eq!(c.value, GroupElement::scalar(q(-1, 2)));
        assert!(c.in_group);
        let c = chi_value(2, &GroupElement::scalar(qi(1)), &g).unwrap();
        assert_eq!(c.value, GroupElement::scalar(qi(-1)));
        let z5 = OrderedGroup::p_localized(5).unwrap();
        let c = chi_value(5, &GroupElement::scalar(qi(4)), &z5).unwrap();
        assert_eq!(c.value, GroupElement::scalar(qi(-1)));
        let z = OrderedGroup::integers();
        assert!(!chi_value(3, &GroupElement::scalar(qi(1)), &z).unwrap().in_group);
        assert!(matches!(
            chi_value(3, &GroupElement::scalar(qi(0)), &g),
            Err(Error::InvalidCharacteristicData(_))
        ));
    }

    #[test]
    fn sigma() {
        let g = grp("Q");
        let d = data(3, "1", &g, "<1/2").unwrap();
        assert_eq!(sigma_e_kummer(&d).unwrap().to_string(), ">0");
        let d = data(2, "1", &g, "<1/2").unwrap();
        assert_eq!(sigma_e_kummer(&d).unwrap().to_string(), ">1/2");
        assert!(matches!(data(3, "1", &g, "<=1/2"), Err(Error::BoundViolation(_))));
    }

    #[test]
    fn tc() {
        let g = grp("Q");
        let d = data(3, "1", &g, "<1/2").unwrap();
        assert_eq!(tc_value(&d, &GroupElement::scalar(q(1, 4))).unwrap(), GroupElement::scalar(q(1, 4)));
        assert!(tc_value(&d, &GroupElement::scalar(q(1, 2))).is_err());
        let d = data(2, "1", &g, "<1/2").unwrap();
        assert_eq!(tc_value(&d, &GroupElement::scalar(qi(0))).unwrap(), GroupElement::scalar(qi(1)));
    }

    #[test]
    fn reports() {
        let g = grp("Q");
        let r = check_kummer_conditions(&data(3, "1", &g, "<1/2").unwrap()).unwrap();
        assert!(r.coherent());
        assert_eq!(r.verdict, Verdict::Independent(g.trivial_subgroup()));
        assert_eq!(r.conditions.entries.len(), 6);
        let r = check_kummer_conditions(&data(3, "1", &g, "<1/3").unwrap()).unwrap();
        assert_eq!(r.sigma_e.to_string(), ">1/6");
        assert!(r.coherent());
        assert_eq!(r.verdict, Verdict::Dependent);
    }

    #[test]
    fn vp_in_subgroup_flagged() {
        let g = grp("QxZ[1/2]");
        let d = data(2, "(0,1)", &g, "<H1").unwrap();
        let r = check_kummer_conditions(&d).unwrap();
        assert!(r.coherent());
        assert_eq!(r.verdict, Verdict::Independent(g.subgroup(1).unwrap()));
        assert!(r.vp_in_h);
    }

    #[test]
    fn one_unit_warning() {
        let g = grp("Q");
        let d = data(3, "1", &g, "<=0").unwrap();
        assert_eq!(d.warnings().len(), 1);
    }

    #[test]
    fn a_distance_round_trip() {
        for (g, vp, lit) in [
            (grp("Z[1/3]"), "3", "<1/2"),
            (grp("Z[1/3]"), "3", "<0"),
            (grp("Z[1/3]"), "3", "<=1/9"),
            (grp("Z[1/3]"), "3", "<-1"),
            (grp("Z"), "3", "<=0"),
            (grp("Z"), "3", "<=-2"),
            (grp("QxZ"), "(1,0)", "<(0,1)"),
        ] {
            let d = data(3, vp, &g, lit).unwrap();
            let a = d.a_distance().unwrap();
            let back = a.preimage_scale(1).unwrap();
            let re = KummerValueData::from_a_distance(
                3,
                g.clone(),
                d.vp().clone(),
                &transport_initial(&back, &Q::one(), g.clone()).unwrap(),
            )
            .unwrap();
            assert_eq!(re.distance(), d.distance(), "{lit}");
        }
    }
}
