//! `Ω_{O_L|O_K}` presented as `U/UV` by ideal data. For a degree-`p` defect
//! extension `U = I_E` and `V = I_E^{p−1}`, so the module is `I_E/I_E^p`.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::asext::{generator_chain, minimal_polynomial_theta_c, AsExtensionSpec};
use crate::error::{Error, Result};
use crate::extension::Poly;
use crate::hahn::HahnSeries;
use crate::ogroup::{GroupElement, OrderedGroup};
use crate::rational::{qi, Q};
use crate::segcalc::{upward_closure, FinalSegment, IdealDesc, PointSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentedModule {
    pub u: IdealDesc,
    pub v: IdealDesc,
    /// `UV`, computed as a product of ideals.
    pub uv: IdealDesc,
}

impl PresentedModule {
    pub fn new(u: IdealDesc, v: IdealDesc) -> Result<Self> {
        let uv = u.product(&v)?;
        Ok(PresentedModule { u, v, uv })
    }

    /// `U/UV = 0` iff `U = UV`.
    pub fn is_zero(&self) -> bool {
        self.u == self.uv
    }
}

impl fmt::Display for PresentedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.u, self.uv)
    }
}

/// `U = I_E`, `V = I_E^{p−1}`.
pub fn omega_presentation(ideal_e: &IdealDesc, p: u32) -> Result<PresentedModule> {
    if p < 2 {
        return Err(Error::InvalidArgument(format!("p = {p}")));
    }
    let v = if p == 2 {
        ideal_e.clone()
    } else {
        ideal_e.power(u64::from(p) - 1)?
    };
    PresentedModule::new(ideal_e.clone(), v)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCheck {
    pub alpha_value: Q,
    pub beta_value: Q,
    /// `a_α/a_β = t_α/t_β`.
    pub lambda: HahnSeries,
    /// `h_α(λX + e) = λ^p h_β(X)`.
    pub substitution: bool,
    /// `h'_β(b_β) = h'_α(b_α)·λ^{1−p}` for the monic minimal polynomials.
    pub chain_rule_monic: bool,
    /// `h̃'(b_β) = h'_α(b_α)·λ` for `h̃ = h_α(λX + e)`.
    pub chain_rule_composite: bool,
    /// `(p−1)vt_β = (p−1)vt_α − (p−1)(vt_α − vt_β)`.
    pub value_identity: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainPresentationReport {
    /// `v(ϑ − c)` in ascending order.
    pub values: Vec<Q>,
    /// `h'_c(ϑ_c) = −t_c^{p−1}` exactly, with value `(p−1)vt_c`.
    pub derivatives: Vec<bool>,
    pub pairs: Vec<PairCheck>,
    /// `({vt_c})↑`.
    pub u_segment: FinalSegment,
    /// `({(p−1)vt_c})↑`.
    pub v_segment: FinalSegment,
    /// `({p·vt_c})↑`.
    pub uv_segment: FinalSegment,
}

impl ChainPresentationReport {
    pub fn all_verified(&self) -> bool {
        self.derivatives.iter().all(|&b| b)
            && self.pairs.iter().all(|c| {
                c.substitution && c.chain_rule_monic && c.chain_rule_composite && c.value_identity
            })
    }

    /// Every `vt_c` lies in `Σ_E`, and `(p−1)vt_c` in the segment of `V`.
    pub fn within(&self, module: &PresentedModule, p: u32) -> bool {
        let pm1 = qi(i64::from(p) - 1);
        self.values.iter().all(|v| {
            let t = GroupElement::scalar(-v.clone());
            module.u.contains_value(&t) && module.v.contains_value(&t.scale(&pm1))
        })
    }
}

fn value_segment(group: &Arc<OrderedGroup>, values: &[Q], factor: i64) -> Result<FinalSegment> {
    let points = values
        .iter()
        .map(|v| GroupElement::scalar(-v.clone() * qi(factor)))
        .collect();
    upward_closure(group, &PointSet::Finite(points))
}

/// Checks the directed-system relations on the finite chain
/// `O_K[ϑ_{c_1}] ⊆ … ⊆ O_K[ϑ_{c_n}]` (the `c` are reordered by `v(ϑ − c)`).
pub fn finite_chain_presentation_check(spec: &AsExtensionSpec, cs: &[HahnSeries]) -> Result<ChainPresentationReport> {
    if cs.is_empty() {
        return Err(Error::InvalidArgument("empty chain".into()));
    }
    let p = spec.p();
    let chain = generator_chain(spec, cs)?;
    let polys = chain
        .links
        .iter()
        .map(|l| minimal_polynomial_theta_c(spec, l))
        .collect::<Result<Vec<_>>>()?;
    let derivatives = polys
        .iter()
        .map(|m| {
            m.vanishes_at_theta_c && m.derivative_is_constant && m.derivative_value == m.expected_value
        })
        .collect();
    let mut pairs = Vec::new();
    for (i, tr) in chain.transitions.iter().enumerate() {
        let (la, lb) = (&chain.links[i], &chain.links[i + 1]);
        let (ha, hb) = (&polys[i], &polys[i + 1]);
        let lam = &tr.lambda;
        let composite = ha.poly.compose(&Poly::linear(lam.clone(), tr.offset.clone()))?;
        let substitution = composite == hb.poly.scale(&lam.pow(p)?)?;
        let d_alpha = ha.derivative.eval(&la.theta_c)?;
        let d_beta = hb.derivative.eval(&lb.theta_c)?;
        let lam_inv = HahnSeries::monomial(p, 1, &la.value - &lb.value);
        let chain_rule_monic = d_beta == d_alpha.scale(&lam_inv.pow(p - 1)?)?;
        let chain_rule_composite = composite.derivative().eval(&lb.theta_c)? == d_alpha.scale(lam)?;
        let pm1 = qi(i64::from(p) - 1);
        let (ta, tb) = (-la.value.clone(), -lb.value.clone());
        let value_identity = &pm1 * &tb == &pm1 * &ta - &pm1 * (&ta - &tb)
            && hb.derivative_value == &pm1 * &tb;
        pairs.push(PairCheck {
            alpha_value: la.value.clone(),
            beta_value: lb.value.clone(),
            lambda: lam.clone(),
            substitution,
            chain_rule_monic,
            chain_rule_composite,
            value_identity,
        });
    }
    let group = Arc::new(spec.value_group());
    let values: Vec<Q> = chain.links.iter().map(|l| l.value.clone()).collect();
    Ok(ChainPresentationReport {
        u_segment: value_segment(&group, &values, 1)?,
        v_segment: value_segment(&group, &values, i64::from(p) - 1)?,
        uv_segment: value_segment(&group, &values, i64::from(p))?,
        values,
        derivatives,
        pairs,
    })
}
