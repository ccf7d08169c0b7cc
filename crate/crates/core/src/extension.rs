//! Elements of an Artin-Schreier extension `K(ϑ)`, `ϑ^p = ϑ + a`, in the
//! basis `1, ϑ, …, ϑ^{p−1}`, and univariate polynomials over `K`.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::hahn::{HahnSeries, Valuation};
use crate::rational::{fmt_rational, Q};

/// `C(n, k) mod p` by Lucas' theorem.
pub fn binomial_mod(n: u32, k: u32, p: u32) -> u32 {
    let (mut n, mut k) = (n, k);
    let mut acc: u64 = 1;
    while n > 0 || k > 0 {
        let (ni, ki) = (n % p, k % p);
        if ki > ni {
            return 0;
        }
        let mut c: u64 = 1;
        for i in 0..ki {
            c = c * u64::from(ni - i) / u64::from(i + 1);
        }
        acc = acc * (c % u64::from(p)) % u64::from(p);
        n /= p;
        k /= p;
    }
    acc as u32
}

/// A polynomial over `K`, coefficients in increasing degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    p: u32,
    coeffs: Vec<HahnSeries>,
}

impl Poly {
    pub fn new(p: u32, mut coeffs: Vec<HahnSeries>) -> Self {
        while coeffs.last().is_some_and(HahnSeries::is_zero) {
            coeffs.pop();
        }
        Poly { p, coeffs }
    }

    pub fn constant(c: HahnSeries) -> Self {
        let p = c.p();
        Poly::new(p, alloc::vec![c])
    }

    /// `λX + e`.
    pub fn linear(lambda: HahnSeries, e: HahnSeries) -> Self {
        let p = e.p();
        Poly::new(p, alloc::vec![e, lambda])
    }

    pub fn coeffs(&self) -> &[HahnSeries] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> HahnSeries {
        self.coeffs.get(i).cloned().unwrap_or_else(|| HahnSeries::zero(self.p))
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.coeff(i).add(&other.coeff(i)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(self.p, coeffs))
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Ok(Poly::new(self.p, Vec::new()));
        }
        let mut out = alloc::vec![HahnSeries::zero(self.p); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            for (j, y) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&x.mul(y)?)?;
            }
        }
        Ok(Poly::new(self.p, out))
    }

    pub fn scale(&self, k: &HahnSeries) -> Result<Poly> {
        let coeffs = self.coeffs.iter().map(|c| c.mul(k)).collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(self.p, coeffs))
    }

    /// `f(q(X))`.
    pub fn compose(&self, q: &Poly) -> Result<Poly> {
        let mut acc = Poly::new(self.p, Vec::new());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(q)?.add(&Poly::constant(c.clone()))?;
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scalar_mul((i as u32) % self.p))
            .collect();
        Poly::new(self.p, coeffs)
    }

    /// Evaluates at an extension element.
    pub fn eval(&self, x: &ExtensionElement) -> Result<ExtensionElement> {
        let mut acc = ExtensionElement::zero(x.a.clone());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x)?.add(&ExtensionElement::from_base(x.a.clone(), c.clone()))?;
        }
        Ok(acc)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*X")?,
                _ => write!(f, "({c})*X^{i}")?,
            }
        }
        Ok(())
    }
}

/// `Σ b_i ϑ^i` with `b_i ∈ K` and `ϑ^p = ϑ + a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionElement {
    a: HahnSeries,
    coeffs: Vec<HahnSeries>,
}

impl ExtensionElement {
    pub fn new(a: HahnSeries, mut coeffs: Vec<HahnSeries>) -> Result<Self> {
        let p = a.p() as usize;
        if coeffs.len() > p {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients given, basis has {p}",
                coeffs.len()
            )));
        }
        coeffs.resize(p, HahnSeries::zero(a.p()));
        Ok(ExtensionElement { a, coeffs })
    }

    pub fn zero(a: HahnSeries) -> Self {
        let p = a.p();
        ExtensionElement {
            coeffs: alloc::vec![HahnSeries::zero(p); p as usize],
            a,
        }
    }

    pub fn from_base(a: HahnSeries, b: HahnSeries) -> Self {
        let mut x = Self::zero(a);
        x.coeffs[0] = b;
        x
    }

    /// `ϑ`.
    pub fn theta(a: HahnSeries) -> Self {
        let p = a.p();
        let mut x = Self::zero(a);
        x.coeffs[1] = HahnSeries::one(p);
        x
    }

    /// `b(ϑ − c)`.
    pub fn linear(a: HahnSeries, b: &HahnSeries, c: &HahnSeries) -> Result<Self> {
        let mut x = Self::zero(a);
        x.coeffs[0] = b.mul(c)?.neg();
        x.coeffs[1] = b.clone();
        Ok(x)
    }

    pub fn p(&self) -> u32 {
        self.a.p()
    }

    pub fn rhs(&self) -> &HahnSeries {
        &self.a
    }

    pub fn coeffs(&self) -> &[HahnSeries] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(HahnSeries::is_zero)
    }

    /// Lies in `K` (all higher coefficients exactly zero).
    pub fn is_in_base(&self) -> bool {
        self.coeffs[1..].iter().all(HahnSeries::is_zero)
    }

    fn check(&self, other: &ExtensionElement) -> Result<()> {
        if self.a != other.a {
            return Err(Error::InvalidArgument("elements of different extensions".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &ExtensionElement) -> Result<Self> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| x.add(y))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExtensionElement {
            a: self.a.clone(),
            coeffs,
        })
    }

    pub fn neg(&self) -> Self {
        ExtensionElement {
            a: self.a.clone(),
            coeffs: self.coeffs.iter().map(HahnSeries::neg).collect(),
        }
    }

    pub fn sub(&self, other: &ExtensionElement) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &HahnSeries) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|c| c.mul(k)).collect::<Result<Vec<_>>>()?;
        Ok(ExtensionElement {
            a: self.a.clone(),
            coeffs,
        })
    }

    pub fn mul(&self, other: &ExtensionElement) -> Result<Self> {
        self.check(other)?;
        let p = self.p() as usize;
        let mut wide = alloc::vec![HahnSeries::zero(self.p()); 2 * p - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                wide[i + j] = wide[i + j].add(&x.mul(y)?)?;
            }
        }
        // ϑ^m = ϑ^{m−p+1} + a ϑ^{m−p}
        for m in (p..2 * p - 1).rev() {
            let e = core::mem::replace(&mut wide[m], HahnSeries::zero(self.p()));
            if e.is_zero() {
                continue;
            }
            wide[m - p + 1] = wide[m - p + 1].add(&e)?;
            wide[m - p] = wide[m - p].add(&e.mul(&self.a)?)?;
        }
        wide.truncate(p);
        Ok(ExtensionElement {
            a: self.a.clone(),
            coeffs: wide,
        })
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut acc = Self::from_base(self.a.clone(), HahnSeries::one(self.p()));
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// The generator `σ : ϑ ↦ ϑ + 1` of the Galois group.
    pub fn sigma(&self) -> Result<Self> {
        self.taylor_shift(&HahnSeries::one(self.p()))
    }

    /// Coefficients of `x` as a polynomial in `Y = ϑ − c`, i.e. the values
    /// `∂_i g(c)` where `x = g(ϑ)`; returned in increasing degree.
    pub fn taylor_coefficients(&self, c: &HahnSeries) -> Result<Vec<HahnSeries>> {
        let p = self.p();
        let n = self.coeffs.len();
        let mut out = alloc::vec![HahnSeries::zero(p); n];
        // powers of c
        let mut cpow = alloc::vec![HahnSeries::one(p)];
        for i in 1..n {
            let next = cpow[i - 1].mul(c)?;
            cpow.push(next);
        }
        for (i, b) in self.coeffs.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            for (j, slot) in out.iter_mut().enumerate().take(i + 1) {
                let binom = binomial_mod(i as u32, j as u32, p);
                if binom == 0 {
                    continue;
                }
                let term = b.mul(&cpow[i - j])?.scalar_mul(binom);
                *slot = slot.add(&term)?;
            }
        }
        Ok(out)
    }

    /// `g(ϑ + s)` for `s ∈ K`, re-expanded in the basis.
    fn taylor_shift(&self, s: &HahnSeries) -> Result<Self> {
        // coefficients of g(Y + s) in Y, read back with Y = ϑ
        let coeffs = self.taylor_coefficients(s)?;
        Ok(ExtensionElement {
            a: self.a.clone(),
            coeffs,
        })
    }

    /// `Tr_{K(ϑ)|K}` by basis reduction: `−b_{p−1}`.
    pub fn trace(&self) -> HahnSeries {
        let p = self.p() as usize;
        self.coeffs[p - 1].neg()
    }

    /// Trace of the multiplication-by-`x` matrix (cross-check).
    pub fn trace_by_matrix(&self) -> Result<HahnSeries> {
        let p = self.p();
        let mut acc = HahnSeries::zero(p);
        let theta = Self::theta(self.a.clone());
        let mut basis = Self::from_base(self.a.clone(), HahnSeries::one(p));
        for i in 0..p as usize {
            let prod = self.mul(&basis)?;
            acc = acc.add(&prod.coeffs[i])?;
            basis = basis.mul(&theta)?;
        }
        Ok(acc)
    }

    /// `Σ_k σ^k x` (cross-check); lies in `K`.
    pub fn trace_by_conjugates(&self) -> Result<Self> {
        let mut acc = Self::zero(self.a.clone());
        let mut conj = self.clone();
        for _ in 0..self.p() {
            acc = acc.add(&conj)?;
            conj = conj.sigma()?;
        }
        Ok(acc)
    }
}

impl fmt::Display for ExtensionElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*th")?,
                _ => write!(f, "({c})*th^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A point `c ∈ K` with known `v(ϑ − c)`.
pub trait ApproximationPoint {
    fn center(&self) -> &HahnSeries;
    fn distance_value(&self) -> &Q;
}

/// `v(x)` from the Taylor expansion of `x = g(ϑ)` around approximations `c`
/// of `ϑ`: at a `c` where the values `v(∂_i g(c)) + i·v(ϑ−c)` have a unique
/// minimum that minimum is `v(x)`. Points are tried from the shallowest
/// (cheapest) one; the first resolving point gives the value and the point
/// after it, if it resolves too, must agree.
pub fn element_valuation<P: ApproximationPoint>(x: &ExtensionElement, points: &[P]) -> Result<Q> {
    if x.is_zero() {
        return Err(Error::ValuationUnresolved("element is zero".into()));
    }
    if x.is_in_base() {
        return match x.coeffs[0].valuation() {
            Valuation::Value(v) => Ok(v),
            other => Err(Error::ValuationUnresolved(format!("base coefficient has value {other}"))),
        };
    }
    let mut found: Option<Q> = None;
    for pt in points {
        match taylor_min(x, pt)? {
            Some(v) => match &found {
                None => found = Some(v),
                Some(w) if *w == v => return Ok(v),
                Some(w) => {
                    return Err(Error::Incoherent(format!(
                        "Taylor valuations {} and {} disagree",
                        fmt_rational(w),
                        fmt_rational(&v)
                    )))
                }
            },
            None => {
                if found.is_some() {
                    break;
                }
            }
        }
    }
    found.ok_or_else(|| Error::ValuationUnresolved(format!("no approximation separates the terms of {x}")))
}

fn taylor_min<P: ApproximationPoint>(x: &ExtensionElement, pt: &P) -> Result<Option<Q>> {
    let coeffs = x.taylor_coefficients(pt.center())?;
    let delta = pt.distance_value();
    let mut best: Option<Q> = None;
    let mut unique = true;
    let mut bounds: Vec<Q> = Vec::new();
    for (i, c) in coeffs.iter().enumerate() {
        let shift = delta * Q::from_integer((i as i64).into());
        match c.valuation() {
            Valuation::Infinity => {}
            Valuation::AtLeast(pi) => bounds.push(pi + shift),
            Valuation::Value(v) => {
                let w = v + shift;
                match &best {
                    None => best = Some(w),
                    Some(b) if w < *b => {
                        best = Some(w);
                        unique = true;
                    }
                    Some(b) if w == *b => unique = false,
                    _ => {}
                }
            }
        }
    }
    Ok(match best {
        Some(b) if unique && bounds.iter().all(|lb| *lb > b) => Some(b),
        _ => None,
    })
}

impl ApproximationPoint for (HahnSeries, Q) {
    fn center(&self) -> &HahnSeries {
        &self.0
    }
    fn distance_value(&self) -> &Q {
        &self.1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn s(text: &str, p: u32) -> HahnSeries {
        HahnSeries::parse(text, p).unwrap()
    }

    #[test]
    fn lucas() {
        assert_eq!(binomial_mod(4, 2, 5), 1);
        assert_eq!(binomial_mod(5, 2, 5), 0);
        assert_eq!(binomial_mod(6, 3, 7), 20 % 7);
        assert_eq!(binomial_mod(9, 3, 3), 0);
        assert_eq!(binomial_mod(2, 1, 2), 0);
    }

    #[test]
    fn theta_to_the_p() {
        for p in [2u32, 3, 5] {
            let a = s("t^-1 + t^(1/2)", p);
            let th = ExtensionElement::theta(a.clone());
            let lhs = th.pow(p).unwrap();
            let rhs = th.add(&ExtensionElement::from_base(a.clone(), a.clone())).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn sigma_is_automorphism() {
        let p = 3;
        let a = s("t^-1", p);
        let x = ExtensionElement::new(a.clone(), alloc::vec![s("t", p), s("2*t^(-1/3)", p), s("1 + t^2", p)]).unwrap();
        let y = ExtensionElement::new(a.clone(), alloc::vec![s("t^-2", p), s("0", p), s("t^(1/9)", p)]).unwrap();
        assert_eq!(x.mul(&y).unwrap().sigma().unwrap(), x.sigma().unwrap().mul(&y.sigma().unwrap()).unwrap());
        let mut z = x.clone();
        for _ in 0..p {
            z = z.sigma().unwrap();
        }
        assert_eq!(z, x);
        let th = ExtensionElement::theta(a.clone());
        assert_eq!(th.sigma().unwrap().sub(&th).unwrap(), ExtensionElement::from_base(a, HahnSeries::one(p)));
    }

    #[test]
    fn traces_agree() {
        for p in [2u32, 3, 5] {
            let a = s("t^-1", p);
            let x = ExtensionElement::new(
                a.clone(),
                (0..p).map(|i| HahnSeries::monomial(p, i + 1, q(i as i64 - 1, 2))).collect(),
            )
            .unwrap();
            let tr = x.trace();
            assert_eq!(x.trace_by_matrix().unwrap(), tr);
            assert_eq!(x.trace_by_conjugates().unwrap(), ExtensionElement::from_base(a, tr));
        }
    }

    #[test]
    fn polynomial_composition() {
        let p = 3;
        let f = Poly::new(p, alloc::vec![s("1", p), s("0", p), s("t", p)]);
        let g = Poly::linear(s("t^(1/3)", p), s("2", p));
        // t(t^{1/3}X + 2)^2 + 1 = t^{5/3}X^2 + 4t^{4/3}X + 4t + 1
        let h = f.compose(&g).unwrap();
        assert_eq!(h.coeffs(), &[s("t + 1", p), s("t^(4/3)", p), s("t^(5/3)", p)]);
        assert_eq!(h.derivative().coeffs(), &[s("t^(4/3)", p), s("2*t^(5/3)", p)]);
    }

    #[test]
    fn valuation_of_theta() {
        let p = 2;
        let a = s("t^-1", p);
        let pts = alloc::vec![
            (HahnSeries::zero(p), q(-1, 2)),
            (s("t^(-1/2)", p), q(-1, 4)),
            (s("t^(-1/2) + t^(-1/4)", p), q(-1, 8)),
        ];
        let th = ExtensionElement::theta(a.clone());
        assert_eq!(element_valuation(&th, &pts).unwrap(), q(-1, 2));
        let lin = ExtensionElement::linear(a.clone(), &HahnSeries::one(p), &pts[2].0).unwrap();
        assert_eq!(element_valuation(&lin, &pts).unwrap(), q(-1, 8));
        let sq = lin.mul(&lin).unwrap().scale(&s("t^3", p)).unwrap();
        assert_eq!(element_valuation(&sq, &pts).unwrap(), qi(3) - q(1, 4));
    }
}
