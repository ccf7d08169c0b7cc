//! Exact rational helpers shared by the group, segment and series code.

use alloc::format;
use alloc::string::String;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Exact rational number used for group coordinates and series exponents.
pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `base^exp` for a possibly negative integer exponent.
pub fn qpow(base: &Q, exp: i64) -> Q {
    let mut acc = Q::one();
    for _ in 0..exp.unsigned_abs() {
        acc *= base;
    }
    if exp < 0 {
        acc.recip()
    } else {
        acc
    }
}

/// Parses `"3"`, `"-1/2"`, `"(1/4)"`, `"p^-3"`-free plain rationals.
pub fn parse_rational(text: &str) -> Result<Q, Error> {
    let s = text.trim();
    let s = s
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .unwrap_or(s)
        .trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(num, den))
}

pub fn fmt_rational(x: &Q) -> String {
    if x.is_integer() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn floor_q(x: &Q) -> BigInt {
    x.floor().to_integer()
}

/// True iff every prime factor of `n` lies in `primes`.
pub fn factors_within(n: &BigInt, primes: &[u64]) -> bool {
    let mut m = n.abs();
    if m.is_zero() {
        return false;
    }
    for &p in primes {
        let p = BigInt::from(p);
        while m.is_multiple_of(&p) {
            m /= &p;
        }
    }
    m.is_one()
}

/// Largest exponent `e` with `p^e | n` (n nonzero).
pub fn multiplicity(n: &BigInt, p: u64) -> u32 {
    let p = BigInt::from(p);
    let mut m = n.abs();
    let mut e = 0;
    while !m.is_zero() && m.is_multiple_of(&p) {
        m /= &p;
        e += 1;
    }
    e
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Reduces an integer modulo a small prime into `0..p`.
pub fn mod_small(n: &BigInt, p: u32) -> u32 {
    let r = n.mod_floor(&BigInt::from(p));
    r.to_u32().unwrap_or(0)
}

fn simpler(a: &Q, b: &Q) -> bool {
    (a.denom(), a.numer().abs()) < (b.denom(), b.numer().abs())
}

/// Simplest rational (least denominator, then least |numerator|) in the open
/// interval `(lo, hi)`; `hi = None` means `+inf`.
pub fn simplest_open(lo: &Q, hi: Option<&Q>) -> Q {
    if let Some(h) = hi {
        debug_assert!(lo < h);
        if lo.is_negative() && h.is_positive() {
            return Q::zero();
        }
        if !h.is_positive() {
            let nlo = -h;
            let nhi = -lo;
            return -simplest_open(&nlo, Some(&nhi));
        }
    } else if lo.is_negative() {
        return Q::zero();
    }
    // 0 <= lo < hi
    let fl = floor_q(lo);
    let next = Q::from_integer(&fl + 1);
    match hi {
        None => return next,
        Some(h) if &next < h => return next,
        _ => {}
    }
    let h = hi.unwrap();
    let base = Q::from_integer(fl);
    let inv_lo = (h - &base).recip();
    let frac_lo = lo - &base;
    let inv_hi = if frac_lo.is_zero() {
        None
    } else {
        Some(frac_lo.recip())
    };
    base + simplest_open(&inv_lo, inv_hi.as_ref()).recip()
}

/// Simplest rational in the half-open interval `(lo, hi]`.
pub fn simplest_left_open(lo: &Q, hi: &Q) -> Q {
    let inner = simplest_open(lo, Some(hi));
    if simpler(hi, &inner) {
        hi.clone()
    } else {
        inner
    }
}
