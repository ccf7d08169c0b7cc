//! Ordered abelian groups of finite rank realized as lexicographic products
//! of subgroups of the rationals.
//!
//! A [`Slot`] is a subgroup `g·Z[1/S]` of `Q` (or all of `Q`), where `g` is
//! the positive generator of the subgroup generated by the listed generators
//! and `S` the set of primes the slot is closed under division by. Slot 1 is
//! the coarsest coordinate. The convex subgroups of a rank-`k` group are
//! exactly `H_j = {0}^j × Slot_{j+1} × … × Slot_k` for `0 <= j <= k`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{factors_within, floor_q, fmt_rational, is_prime, parse_rational, Q};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Divisibility {
    /// Closed under division by each listed prime.
    Primes(Vec<u64>),
    /// Closed under division by every positive integer (the slot is `Q`).
    All,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Slot {
    generators: Vec<Q>,
    base: Q,
    divisibility: Divisibility,
}

fn rational_gcd(xs: &[Q]) -> Q {
    let lcm_den = xs
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let g = xs.iter().fold(BigInt::zero(), |acc, x| {
        let n = x.numer() * (&lcm_den / x.denom());
        acc.gcd(&n)
    });
    Q::new(g, lcm_den)
}

impl Slot {
    pub fn new(generators: Vec<Q>, divisibility: Divisibility) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidGroup(
                "slot needs at least one generator; use Slot::trivial for {0}".into(),
            ));
        }
        if let Some(g) = generators.iter().find(|g| !g.is_positive()) {
            return Err(Error::InvalidGroup(format!(
                "slot generators must be positive, got {}",
                fmt_rational(g)
            )));
        }
        let divisibility = match divisibility {
            Divisibility::Primes(mut ps) => {
                if let Some(p) = ps.iter().find(|p| !is_prime(**p)) {
                    return Err(Error::InvalidGroup(format!("{p} is not a prime")));
                }
                ps.sort_unstable();
                ps.dedup();
                Divisibility::Primes(ps)
            }
            Divisibility::All => Divisibility::All,
        };
        let base = match divisibility {
            Divisibility::All => Q::one(),
            Divisibility::Primes(_) => rational_gcd(&generators),
        };
        Ok(Slot {
            generators,
            base,
            divisibility,
        })
    }

    /// The trivial subgroup `{0}`. Not allowed as a slot of an [`OrderedGroup`].
    pub fn trivial() -> Self {
        Slot {
            generators: Vec::new(),
            base: Q::zero(),
            divisibility: Divisibility::Primes(Vec::new()),
        }
    }

    pub fn integers() -> Self {
        Slot::new(alloc::vec![Q::one()], Divisibility::Primes(Vec::new())).unwrap()
    }

    pub fn rationals() -> Self {
        Slot::new(alloc::vec![Q::one()], Divisibility::All).unwrap()
    }

    /// `Z[1/p_1, …, 1/p_r]`.
    pub fn localized(primes: &[u64]) -> Result<Self> {
        Slot::new(alloc::vec![Q::one()], Divisibility::Primes(primes.to_vec()))
    }

    pub fn generators(&self) -> &[Q] {
        &self.generators
    }

    /// Positive generator `g` with slot `= g·Z[1/S]`.
    pub fn base(&self) -> &Q {
        &self.base
    }

    pub fn divisibility(&self) -> &Divisibility {
        &self.divisibility
    }

    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    /// Dense iff closed under division by some prime; otherwise the slot is
    /// cyclic and has a smallest positive element.
    pub fn is_dense(&self) -> bool {
        match &self.divisibility {
            Divisibility::All => !self.is_trivial(),
            Divisibility::Primes(ps) => !ps.is_empty() && !self.is_trivial(),
        }
    }

    pub fn is_divisible_by(&self, n: u64) -> bool {
        match &self.divisibility {
            Divisibility::All => true,
            Divisibility::Primes(ps) => {
                let mut m = BigInt::from(n);
                for &p in ps {
                    let p = BigInt::from(p);
                    while m.is_multiple_of(&p) {
                        m /= &p;
                    }
                }
                m.is_one()
            }
        }
    }

    pub fn contains(&self, x: &Q) -> bool {
        if x.is_zero() {
            return true;
        }
        if self.is_trivial() {
            return false;
        }
        match &self.divisibility {
            Divisibility::All => true,
            Divisibility::Primes(ps) => {
                let r = x / &self.base;
                r.is_integer() || factors_within(r.denom(), ps)
            }
        }
    }

    /// Smallest positive element of a discrete slot.
    pub fn step(&self) -> Option<&Q> {
        if self.is_dense() || self.is_trivial() {
            None
        } else {
            Some(&self.base)
        }
    }

    /// For a discrete slot: the largest element `<= x`.
    pub fn floor_discrete(&self, x: &Q) -> Option<Q> {
        let g = self.step()?;
        Some(Q::from_integer(floor_q(&(x / g))) * g)
    }

    /// The slot `n·S`.
    pub fn scaled(&self, n: &Q) -> Slot {
        Slot {
            generators: self.generators.iter().map(|g| g * n).collect(),
            base: &self.base * n,
            divisibility: self.divisibility.clone(),
        }
    }

    /// Largest element `<= x` whose denominator (relative to the slot base)
    /// is at most `resolution` divisions deep. Exact for discrete slots.
    pub fn floor_at_resolution(&self, x: &Q, resolution: u32) -> Q {
        if self.contains(x) {
            return x.clone();
        }
        if let Some(f) = self.floor_discrete(x) {
            return f;
        }
        let unit = match &self.divisibility {
            Divisibility::All => Q::new(BigInt::one(), BigInt::from(resolution.max(1))),
            Divisibility::Primes(ps) => {
                let p = BigInt::from(ps[0]);
                Q::new(BigInt::one(), num_traits::pow(p, resolution as usize))
            }
        } * &self.base;
        Q::from_integer(floor_q(&(x / &unit))) * unit
    }

    /// Elements `g·n/m` with `|value| <= max_abs`, where `m` ranges over
    /// products of divisibility primes with exponents `<= den_exponent`
    /// (for `Q`: all `m <= den_cap`). Sorted ascending, deduplicated.
    pub fn grid(&self, max_abs: &Q, den_exponent: u32, den_cap: u32) -> Vec<Q> {
        let dens: Vec<BigInt> = match &self.divisibility {
            Divisibility::All => (1..=den_cap.max(1)).map(BigInt::from).collect(),
            Divisibility::Primes(ps) => {
                let mut dens = alloc::vec![BigInt::one()];
                for &p in ps {
                    let mut next = Vec::new();
                    for d in &dens {
                        let mut pe = BigInt::one();
                        for _ in 0..=den_exponent {
                            next.push(d * &pe);
                            pe *= p;
                        }
                    }
                    dens = next;
                }
                dens
            }
        };
        let mut out = Vec::new();
        for d in dens {
            let unit = &self.base / Q::from_integer(d);
            let bound = floor_q(&(max_abs / &unit));
            let mut n = -bound.clone();
            while n <= bound {
                out.push(Q::from_integer(n.clone()) * &unit);
                n += 1;
            }
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn parse_shorthand(text: &str) -> Result<Slot> {
        let s = text.trim();
        match s {
            "Q" => return Ok(Slot::rationals()),
            "Z" => return Ok(Slot::integers()),
            _ => {}
        }
        if let Some(inner) = s.strip_prefix("Z[").and_then(|r| r.strip_suffix(']')) {
            let mut primes = Vec::new();
            for part in inner.split(',') {
                let part = part.trim();
                let p = part
                    .strip_prefix("1/")
                    .ok_or_else(|| Error::Parse(format!("expected 1/p in {s:?}")))?;
                primes.push(
                    p.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::Parse(format!("bad prime in {s:?}")))?,
                );
            }
            return Slot::localized(&primes);
        }
        Err(Error::Parse(format!("unknown slot shorthand {s:?}")))
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        if !self.base.is_one() {
            write!(f, "({})", fmt_rational(&self.base))?;
        }
        match &self.divisibility {
            Divisibility::All => write!(f, "Q"),
            Divisibility::Primes(ps) if ps.is_empty() => write!(f, "Z"),
            Divisibility::Primes(ps) => {
                write!(f, "Z[")?;
                for (i, p) in ps.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "1/{p}")?;
                }
                write!(f, "]")
            }
        }
    }
}

/// An element of the divisible hull `Q^k`; membership in a particular group
/// is checked by [`OrderedGroup::contains`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(Vec<Q>);

impl GroupElement {
    pub fn new(coords: Vec<Q>) -> Self {
        GroupElement(coords)
    }

    pub fn zero(rank: usize) -> Self {
        GroupElement(alloc::vec![Q::zero(); rank])
    }

    pub fn scalar(x: Q) -> Self {
        GroupElement(alloc::vec![x])
    }

    /// `x·e_i` in rank `rank`.
    pub fn unit(rank: usize, i: usize, x: Q) -> Self {
        let mut v = alloc::vec![Q::zero(); rank];
        v[i] = x;
        GroupElement(v)
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &GroupElement) -> GroupElement {
        GroupElement(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &GroupElement) -> GroupElement {
        GroupElement(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> GroupElement {
        GroupElement(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, n: &Q) -> GroupElement {
        GroupElement(self.0.iter().map(|a| a * n).collect())
    }

    pub fn prefix(&self, j: usize) -> &[Q] {
        &self.0[..j]
    }

    /// Index of the first nonzero coordinate.
    pub fn leading_index(&self) -> Option<usize> {
        self.0.iter().position(|x| !x.is_zero())
    }

    /// Lexicographic comparison in the divisible hull.
    pub fn lex_cmp(&self, other: &GroupElement) -> Ordering {
        self.0.cmp(&other.0)
    }

    pub fn is_positive(&self) -> bool {
        self.leading_index().is_some_and(|i| self.0[i].is_positive())
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_coords(f, &self.0)
    }
}

pub(crate) fn fmt_coords(f: &mut fmt::Formatter<'_>, coords: &[Q]) -> fmt::Result {
    if coords.len() == 1 {
        return write!(f, "{}", fmt_rational(&coords[0]));
    }
    write!(f, "(")?;
    for (i, c) in coords.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{}", fmt_rational(c))?;
    }
    write!(f, ")")
}

/// Convex subgroup `H_j` of a rank-`k` group (`H_0` whole group, `H_k = {0}`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConvexSubgroup(usize);

impl ConvexSubgroup {
    pub fn index(self) -> usize {
        self.0
    }

    /// `H_j ⊇ H_other` iff `j <= other`.
    pub fn contains_subgroup(self, other: ConvexSubgroup) -> bool {
        self.0 <= other.0
    }
}

/// Pair of consecutive convex subgroups `C(g) ⊋ C⁺(g)` and the slot realizing
/// the archimedean component `C(g)/C⁺(g)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArchimedeanComponent<'a> {
    pub smallest_containing: ConvexSubgroup,
    pub largest_excluding: ConvexSubgroup,
    pub slot: &'a Slot,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrderedGroup {
    slots: Vec<Slot>,
}

impl OrderedGroup {
    pub fn new(slots: Vec<Slot>) -> Result<Self> {
        if slots.is_empty() {
            return Err(Error::InvalidGroup("rank must be at least 1".into()));
        }
        if slots.iter().any(Slot::is_trivial) {
            return Err(Error::InvalidGroup(
                "trivial slots are not allowed in a lexicographic product".into(),
            ));
        }
        Ok(OrderedGroup { slots })
    }

    pub fn integers() -> Self {
        OrderedGroup::new(alloc::vec![Slot::integers()]).unwrap()
    }

    pub fn rationals() -> Self {
        OrderedGroup::new(alloc::vec![Slot::rationals()]).unwrap()
    }

    /// `Z[1/p]`, the value group of a perfect hull of `F_p(t)`.
    pub fn p_localized(p: u64) -> Result<Self> {
        OrderedGroup::new(alloc::vec![Slot::localized(&[p])?])
    }

    /// Parses shorthands like `Q`, `Z[1/2]`, `QxZ`, `QxZ[1/3]`.
    pub fn parse_shorthand(text: &str) -> Result<Self> {
        let slots = text
            .split(['x', '×'])
            .map(Slot::parse_shorthand)
            .collect::<Result<Vec<_>>>()?;
        OrderedGroup::new(slots)
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn slot(&self, i: usize) -> &Slot {
        &self.slots[i]
    }

    pub fn rank(&self) -> usize {
        self.slots.len()
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement::zero(self.rank())
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.rank() == self.rank() && self.slots.iter().zip(g.coords()).all(|(s, x)| s.contains(x))
    }

    /// Membership of a length-`j` prefix in `Slot_1 × … × Slot_j`.
    pub fn contains_prefix(&self, prefix: &[Q]) -> bool {
        prefix.len() <= self.rank() && self.slots.iter().zip(prefix).all(|(s, x)| s.contains(x))
    }

    pub fn check(&self, g: &GroupElement) -> Result<()> {
        if g.rank() != self.rank() {
            return Err(Error::MalformedElement(format!(
                "{g} has rank {} but the group has rank {}",
                g.rank(),
                self.rank()
            )));
        }
        if let Some(i) = (0..self.rank()).find(|&i| !self.slots[i].contains(&g.coords()[i])) {
            return Err(Error::MalformedElement(format!(
                "coordinate {} of {g} is not in slot {}",
                i + 1,
                self.slots[i]
            )));
        }
        Ok(())
    }

    /// Checks rank only (element of the divisible hull).
    pub fn check_hull(&self, g: &GroupElement) -> Result<()> {
        if g.rank() != self.rank() {
            return Err(Error::GroupMismatch(format!(
                "{g} has rank {} but the group has rank {}",
                g.rank(),
                self.rank()
            )));
        }
        Ok(())
    }

    pub fn compare(&self, g: &GroupElement, h: &GroupElement) -> Result<Ordering> {
        self.check(g)?;
        self.check(h)?;
        Ok(g.lex_cmp(h))
    }

    pub fn subgroup(&self, j: usize) -> Result<ConvexSubgroup> {
        if j > self.rank() {
            return Err(Error::InvalidArgument(format!(
                "H{j} does not exist in a group of rank {}",
                self.rank()
            )));
        }
        Ok(ConvexSubgroup(j))
    }

    pub fn whole(&self) -> ConvexSubgroup {
        ConvexSubgroup(0)
    }

    pub fn trivial_subgroup(&self) -> ConvexSubgroup {
        ConvexSubgroup(self.rank())
    }

    /// All convex subgroups `H_0 ⊇ H_1 ⊇ … ⊇ H_k`.
    pub fn convex_subgroups(&self) -> impl Iterator<Item = ConvexSubgroup> {
        (0..=self.rank()).map(ConvexSubgroup)
    }

    pub fn subgroup_contains(&self, h: ConvexSubgroup, g: &GroupElement) -> bool {
        g.prefix(h.0).iter().all(Zero::is_zero)
    }

    /// `Γ/H_j` has no smallest positive element.
    pub fn is_strongly_convex(&self, h: ConvexSubgroup) -> Result<bool> {
        if h.0 == 0 {
            return Err(Error::NotProper(0));
        }
        Ok(self.slots[h.0 - 1].is_dense())
    }

    pub fn archimedean_component(&self, g: &GroupElement) -> Result<ArchimedeanComponent<'_>> {
        self.check(g)?;
        let i = g.leading_index().ok_or(Error::UndefinedComponent)?;
        Ok(ArchimedeanComponent {
            smallest_containing: ConvexSubgroup(i),
            largest_excluding: ConvexSubgroup(i + 1),
            slot: &self.slots[i],
        })
    }

    /// No archimedean component is discrete.
    pub fn satisfies_drvg(&self) -> bool {
        self.slots.iter().all(Slot::is_dense)
    }

    /// `pΓ = Γ`.
    pub fn is_divisible_by(&self, p: u64) -> bool {
        self.slots.iter().all(|s| s.is_divisible_by(p))
    }

    /// The group `nΓ` (isomorphic to `Γ` via `γ ↦ nγ`).
    pub fn scaled(&self, n: &Q) -> OrderedGroup {
        OrderedGroup {
            slots: self.slots.iter().map(|s| s.scaled(n)).collect(),
        }
    }

    /// Parses `"0"` (zero of any rank), a scalar for rank 1, or `"(a,b,…)"`.
    pub fn parse_element(&self, text: &str) -> Result<GroupElement> {
        let g = parse_hull_element(text, self.rank())?;
        self.check(&g)?;
        Ok(g)
    }

    pub fn describe_subgroup(&self, h: ConvexSubgroup) -> String {
        if h.0 == self.rank() {
            "{0}".into()
        } else if h.0 == 0 {
            "G".into()
        } else {
            format!("H{}", h.0)
        }
    }

    /// Grid of bounded-height elements (product of per-slot grids).
    pub fn grid(&self, max_abs: &Q, den_exponent: u32, den_cap: u32) -> Vec<GroupElement> {
        let mut out: Vec<Vec<Q>> = alloc::vec![Vec::new()];
        for s in &self.slots {
            let g = s.grid(max_abs, den_exponent, den_cap);
            let mut next = Vec::with_capacity(out.len() * g.len());
            for prefix in &out {
                for x in &g {
                    let mut v = prefix.clone();
                    v.push(x.clone());
                    next.push(v);
                }
            }
            out = next;
        }
        out.into_iter().map(GroupElement).collect()
    }

    /// A group element `<= x` (x in the divisible hull), chosen as large as
    /// possible at the given resolution: coordinates are kept while they lie in
    /// their slot, the first non-member is floored and the rest zeroed.
    pub fn element_at_or_below(&self, x: &GroupElement, resolution: u32) -> GroupElement {
        let mut out = Vec::with_capacity(self.rank());
        let mut floored = false;
        for (s, c) in self.slots.iter().zip(x.coords()) {
            if floored {
                out.push(Q::zero());
            } else if s.contains(c) {
                out.push(c.clone());
            } else {
                let mut f = s.floor_at_resolution(c, resolution);
                if &f >= c {
                    f -= s.base();
                }
                out.push(f);
                floored = true;
            }
        }
        GroupElement(out)
    }
}

impl fmt::Display for OrderedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.slots.iter().enumerate() {
            if i > 0 {
                write!(f, "x")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Parses an element of `Q^rank`.
pub fn parse_hull_element(text: &str, rank: usize) -> Result<GroupElement> {
    let s = text.trim();
    if s == "0" {
        return Ok(GroupElement::zero(rank));
    }
    let coords: Vec<Q> = if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        if inner.contains(',') {
            inner.split(',').map(parse_rational).collect::<Result<_>>()?
        } else {
            alloc::vec![parse_rational(inner)?]
        }
    } else {
        alloc::vec![parse_rational(s)?]
    };
    if coords.len() != rank {
        return Err(Error::MalformedElement(format!(
            "{s:?} has {} coordinates, expected {rank}",
            coords.len()
        )));
    }
    Ok(GroupElement(coords))
}

impl fmt::Display for ConvexSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H{}", self.0)
    }
}

impl From<&ConvexSubgroup> for String {
    fn from(h: &ConvexSubgroup) -> String {
        h.to_string()
    }
}
