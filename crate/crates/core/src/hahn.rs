//! Truncated generalized power series over `F_p` with rational exponents.
//!
//! A series carries finitely many terms and an optional precision `π`: all
//! coefficients at exponents `< π` are exact, nothing is known at or above
//! `π`. `precision = None` marks an exact (finite-support) element.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ogroup::{GroupElement, OrderedGroup, Slot};
use crate::rational::{fmt_rational, is_prime, mod_small, parse_rational, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Valuation {
    Value(Q),
    /// No known term below the precision: the value is at least this.
    AtLeast(Q),
    /// Exact zero.
    Infinity,
}

impl Valuation {
    /// A lower bound for the value (`None` for exact zero).
    pub fn lower_bound(&self) -> Option<&Q> {
        match self {
            Valuation::Value(v) | Valuation::AtLeast(v) => Some(v),
            Valuation::Infinity => None,
        }
    }

    pub fn value(&self) -> Option<&Q> {
        match self {
            Valuation::Value(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Value(v) => write!(f, "{}", fmt_rational(v)),
            Valuation::AtLeast(v) => write!(f, ">={}", fmt_rational(v)),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HahnSeries {
    p: u32,
    terms: BTreeMap<Q, u32>,
    precision: Option<Q>,
}

fn min_opt(a: Option<Q>, b: Option<Q>) -> Option<Q> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if x <= y { x } else { y }),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Multiplicative inverse in `F_p`.
pub fn fp_inv(c: u32, p: u32) -> u32 {
    debug_assert!(!c.is_multiple_of(p));
    let mut acc: u64 = 1;
    let mut base = u64::from(c % p);
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % u64::from(p);
        }
        base = base * base % u64::from(p);
        e >>= 1;
    }
    acc as u32
}

impl HahnSeries {
    pub fn new<I>(p: u32, terms: I, precision: Option<Q>) -> Self
    where
        I: IntoIterator<Item = (Q, u32)>,
    {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            let slot: &mut u32 = map.entry(e).or_insert(0);
            *slot = (*slot + c % p) % p;
        }
        map.retain(|e, c| *c != 0 && precision.as_ref().is_none_or(|pi| e < pi));
        HahnSeries {
            p,
            terms: map,
            precision,
        }
    }

    pub fn zero(p: u32) -> Self {
        HahnSeries::new(p, [], None)
    }

    pub fn one(p: u32) -> Self {
        HahnSeries::monomial(p, 1, Q::zero())
    }

    /// `c·t^e`, exact.
    pub fn monomial(p: u32, c: u32, e: Q) -> Self {
        HahnSeries::new(p, [(e, c)], None)
    }

    /// `O(t^π)`: an unknown element of value at least `π`.
    pub fn unknown(p: u32, precision: Q) -> Self {
        HahnSeries::new(p, [], Some(precision))
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Q, u32)> {
        self.terms.iter().map(|(e, c)| (e, *c))
    }

    pub fn coefficient(&self, e: &Q) -> u32 {
        self.terms.get(e).copied().unwrap_or(0)
    }

    pub fn precision(&self) -> Option<&Q> {
        self.precision.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_none()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn valuation(&self) -> Valuation {
        match (self.terms.keys().next(), &self.precision) {
            (Some(e), _) => Valuation::Value(e.clone()),
            (None, Some(pi)) => Valuation::AtLeast(pi.clone()),
            (None, None) => Valuation::Infinity,
        }
    }

    /// Exact zero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.precision.is_none()
    }

    /// No known term (zero up to precision).
    pub fn is_indeterminate_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_term(&self) -> Option<(&Q, u32)> {
        self.terms.iter().next().map(|(e, c)| (e, *c))
    }

    fn check_p(&self, other: &HahnSeries) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        Ok(())
    }

    /// Drops everything at or above `pi`.
    pub fn truncate(&self, pi: &Q) -> HahnSeries {
        let precision = min_opt(self.precision.clone(), Some(pi.clone()));
        HahnSeries::new(self.p, self.terms.iter().map(|(e, c)| (e.clone(), *c)), precision)
    }

    /// Terms strictly below `bound`, as an exact element.
    pub fn terms_below(&self, bound: &Q) -> HahnSeries {
        HahnSeries::new(
            self.p,
            self.terms.range(..bound.clone()).map(|(e, c)| (e.clone(), *c)),
            None,
        )
    }

    pub fn add(&self, other: &HahnSeries) -> Result<HahnSeries> {
        self.check_p(other)?;
        let precision = min_opt(self.precision.clone(), other.precision.clone());
        let terms = self
            .terms
            .iter()
            .chain(other.terms.iter())
            .map(|(e, c)| (e.clone(), *c));
        Ok(HahnSeries::new(self.p, terms, precision))
    }

    pub fn neg(&self) -> HahnSeries {
        let p = self.p;
        HahnSeries::new(
            p,
            self.terms.iter().map(|(e, c)| (e.clone(), p - c)),
            self.precision.clone(),
        )
    }

    pub fn sub(&self, other: &HahnSeries) -> Result<HahnSeries> {
        self.add(&other.neg())
    }

    pub fn scalar_mul(&self, k: u32) -> HahnSeries {
        let p = self.p;
        let k = u64::from(k % p);
        HahnSeries::new(
            p,
            self.terms
                .iter()
                .map(|(e, c)| (e.clone(), (u64::from(*c) * k % u64::from(p)) as u32)),
            if k == 0 { None } else { self.precision.clone() },
        )
    }

    /// Multiplies by `t^s`.
    pub fn shift(&self, s: &Q) -> HahnSeries {
        HahnSeries::new(
            self.p,
            self.terms.iter().map(|(e, c)| (e + s, *c)),
            self.precision.as_ref().map(|pi| pi + s),
        )
    }

    pub fn mul(&self, other: &HahnSeries) -> Result<HahnSeries> {
        self.check_p(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(HahnSeries::zero(self.p));
        }
        let lb = |x: &HahnSeries| x.valuation().lower_bound().cloned().expect("nonzero");
        let precision = min_opt(
            self.precision.as_ref().map(|pi| pi + lb(other)),
            other.precision.as_ref().map(|pi| pi + lb(self)),
        );
        let p = u64::from(self.p);
        let mut acc: BTreeMap<Q, u64> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1 + e2;
                if precision.as_ref().is_some_and(|pi| &e >= pi) {
                    continue;
                }
                let slot = acc.entry(e).or_insert(0);
                *slot = (*slot + u64::from(*c1) * u64::from(*c2)) % p;
            }
        }
        Ok(HahnSeries::new(
            self.p,
            acc.into_iter().map(|(e, c)| (e, c as u32)),
            precision,
        ))
    }

    pub fn pow(&self, n: u32) -> Result<HahnSeries> {
        let mut acc = HahnSeries::one(self.p);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `x^p`; exponents and precision multiplied by `p`.
    pub fn frobenius(&self) -> HahnSeries {
        let p = Q::from_integer(BigInt::from(self.p));
        HahnSeries::new(
            self.p,
            self.terms.iter().map(|(e, c)| (e * &p, *c)),
            self.precision.as_ref().map(|pi| pi * &p),
        )
    }

    /// The unique `y` with `y^p = x`.
    pub fn pth_root(&self) -> HahnSeries {
        let p = Q::from_integer(BigInt::from(self.p));
        HahnSeries::new(
            self.p,
            self.terms.iter().map(|(e, c)| (e / &p, *c)),
            self.precision.as_ref().map(|pi| pi / &p),
        )
    }

    /// `℘(x) = x^p − x`.
    pub fn wp(&self) -> HahnSeries {
        self.frobenius().sub(self).expect("same characteristic")
    }

    /// `1/x`, computed to absolute precision at most `cap`.
    pub fn invert(&self, cap: &Q) -> Result<HahnSeries> {
        let (e, c) = match self.leading_term() {
            Some((e, c)) => (e.clone(), c),
            None => {
                return Err(Error::PrecisionLoss(format!(
                    "cannot invert {self}: no determinate leading term"
                )))
            }
        };
        let target = match &self.precision {
            Some(pi) => {
                let own = pi - &e - &e;
                if &own < cap {
                    own
                } else {
                    cap.clone()
                }
            }
            None => cap.clone(),
        };
        let p = self.p;
        let cinv = fp_inv(c, p);
        // x = c t^e (1 + w), v(w) > 0
        let unit = self.shift(&-&e).scalar_mul(cinv);
        let w = unit.sub(&HahnSeries::one(p))?;
        let rel = &target + &e;
        if !rel.is_positive() {
            return Ok(HahnSeries::unknown(p, target));
        }
        let w = w.truncate(&rel);
        let mut sum = HahnSeries::new(p, [(Q::zero(), 1)], Some(rel.clone()));
        if let Some(delta) = w.valuation().lower_bound().cloned() {
            let neg_w = w.neg();
            let mut power = HahnSeries::one(p);
            let mut n = Q::zero();
            loop {
                n += &delta;
                if n >= rel {
                    break;
                }
                power = power.mul(&neg_w)?.truncate(&rel);
                sum = sum.add(&power)?;
            }
        }
        Ok(sum.shift(&-&e).scalar_mul(cinv))
    }

    /// Parses `"t^-1 + 2*t^(1/2) - t + 3 + O(t^2)"`.
    pub fn parse(text: &str, p: u32) -> Result<HahnSeries> {
        if !is_prime(u64::from(p)) {
            return Err(Error::InvalidArgument(format!("{p} is not a prime")));
        }
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty series literal".into()));
        }
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut depth = 0i32;
        let mut cur = String::new();
        let mut negative = false;
        let mut prev: Option<char> = None;
        for ch in s.chars() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            let top_sign = depth == 0 && (ch == '+' || ch == '-') && prev != Some('^');
            if top_sign {
                if !cur.is_empty() {
                    pieces.push((negative, core::mem::take(&mut cur)));
                } else if prev.is_some() {
                    return Err(Error::Parse(format!("dangling sign in {text:?}")));
                }
                negative = ch == '-';
            } else {
                cur.push(ch);
            }
            prev = Some(ch);
        }
        if cur.is_empty() {
            return Err(Error::Parse(format!("trailing sign in {text:?}")));
        }
        pieces.push((negative, cur));

        let mut terms = Vec::new();
        let mut precision = None;
        for (neg, piece) in pieces {
            if let Some(inner) = piece.strip_prefix("O(").and_then(|r| r.strip_suffix(')')) {
                let e = parse_exponent(inner.strip_prefix('t').ok_or_else(|| {
                    Error::Parse(format!("precision marker must be O(t^e): {piece:?}"))
                })?)?;
                precision = min_opt(precision, Some(e));
                continue;
            }
            let (coeff, rest) = match piece.find('t') {
                Some(0) => (BigInt::one(), &piece[..]),
                Some(i) => {
                    let head = piece[..i].trim_end_matches('*');
                    (parse_int(head, &piece)?, &piece[i..])
                }
                None => (parse_int(&piece, &piece)?, ""),
            };
            let e = if rest.is_empty() {
                Q::zero()
            } else {
                parse_exponent(&rest[1..])?
            };
            let coeff = if neg { -coeff } else { coeff };
            terms.push((e, mod_small(&coeff, p)));
        }
        Ok(HahnSeries::new(p, terms, precision))
    }
}

fn parse_int(s: &str, ctx: &str) -> Result<BigInt> {
    s.parse()
        .map_err(|_| Error::Parse(format!("bad coefficient in term {ctx:?}")))
}

fn parse_exponent(s: &str) -> Result<Q> {
    if s.is_empty() {
        return Ok(Q::one());
    }
    let e = s
        .strip_prefix('^')
        .ok_or_else(|| Error::Parse(format!("expected '^' in exponent {s:?}")))?;
    parse_rational(e)
}

fn fmt_exponent(e: &Q) -> String {
    if e.is_integer() {
        format!("{}", e.numer())
    } else {
        format!("({})", fmt_rational(e))
    }
}

impl fmt::Display for HahnSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono = if e.is_zero() {
                None
            } else if e.is_one() {
                Some(String::from("t"))
            } else {
                Some(format!("t^{}", fmt_exponent(e)))
            };
            match (mono, c) {
                (None, c) => write!(f, "{c}")?,
                (Some(m), 1) => write!(f, "{m}")?,
                (Some(m), c) => write!(f, "{c}*{m}")?,
            }
        }
        if let Some(pi) = &self.precision {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "O(t^{})", fmt_exponent(pi))?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Valuation::Value(a), Valuation::Value(b)) => Some(a.cmp(b)),
            (Valuation::Infinity, Valuation::Infinity) => Some(Ordering::Equal),
            (Valuation::Infinity, Valuation::Value(_)) => Some(Ordering::Greater),
            (Valuation::Value(_), Valuation::Infinity) => Some(Ordering::Less),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseFieldKind {
    /// Perfect hull of `F_p(t)`.
    PerfectHullRationalFunction,
    /// Perfect hull of `F_p((t))`.
    PerfectHullLaurent,
    /// Hahn series with exponents in a rank-one group.
    TruncatedHahn(OrderedGroup),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseFieldSpec {
    pub p: u32,
    pub kind: BaseFieldKind,
}

impl BaseFieldSpec {
    pub fn new(p: u32, kind: BaseFieldKind) -> Result<Self> {
        if !is_prime(u64::from(p)) {
            return Err(Error::InvalidArgument(format!("{p} is not a prime")));
        }
        if let BaseFieldKind::TruncatedHahn(g) = &kind {
            if g.rank() != 1 {
                return Err(Error::InvalidGroup(format!(
                    "Hahn base fields need a rank-one exponent group, got {g}"
                )));
            }
        }
        Ok(BaseFieldSpec { p, kind })
    }

    pub fn perfect_hull_rational(p: u32) -> Result<Self> {
        Self::new(p, BaseFieldKind::PerfectHullRationalFunction)
    }

    pub fn value_group(&self) -> OrderedGroup {
        match &self.kind {
            BaseFieldKind::TruncatedHahn(g) => g.clone(),
            _ => OrderedGroup::new(alloc::vec![
                Slot::localized(&[u64::from(self.p)]).expect("p is prime")
            ])
            .expect("nontrivial slot"),
        }
    }

    pub fn contains_exponent(&self, e: &Q) -> bool {
        self.value_group().slot(0).contains(e)
    }

    /// Every known support exponent lies in the value group.
    pub fn contains(&self, x: &HahnSeries) -> Result<()> {
        if x.p() != self.p {
            return Err(Error::PrimeMismatch(self.p, x.p()));
        }
        let slot = self.value_group().slot(0).clone();
        if let Some((e, _)) = x.terms().find(|(e, _)| !slot.contains(e)) {
            return Err(Error::NotInBaseField(format!(
                "exponent {} of {x} is not in {slot}",
                fmt_rational(e)
            )));
        }
        Ok(())
    }

    /// `t^γ` for a rank-one value `γ`.
    pub fn monomial_of_value(&self, gamma: &GroupElement) -> Result<HahnSeries> {
        let e = &gamma.coords()[0];
        if gamma.rank() != 1 || !self.contains_exponent(e) {
            return Err(Error::NotInBaseField(format!("no monomial of value {gamma}")));
        }
        Ok(HahnSeries::monomial(self.p, 1, e.clone()))
    }

    pub fn name(&self) -> String {
        match &self.kind {
            BaseFieldKind::PerfectHullRationalFunction => format!("F_{}(t)^(1/p^inf)", self.p),
            BaseFieldKind::PerfectHullLaurent => format!("F_{}((t))^(1/p^inf)", self.p),
            BaseFieldKind::TruncatedHahn(g) => format!("F_{}((t^{}))", self.p, g),
        }
    }
}
