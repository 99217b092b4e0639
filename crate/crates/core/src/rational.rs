//! Exact rational numbers and the text forms they travel in.
//!
//! Every value, fraction and probability in the crate is a [`Rational`]:
//! an arbitrary-precision ratio kept in lowest terms with a positive
//! denominator. Text accepts integers, finite decimals (converted exactly,
//! so `0.6` is `3/5`) and `p/q` strings.

use alloc::string::{String, ToString};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Builds `num/den`. Panics when `den == 0`; use [`checked_div`] on data.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Division that reports a zero divisor instead of panicking.
pub fn checked_div(a: &Rational, b: &Rational) -> Result<Rational> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(a / b)
}

pub fn floor(q: &Rational) -> Rational {
    q.floor()
}

pub fn ceil(q: &Rational) -> Rational {
    q.ceil()
}

pub fn is_integer(q: &Rational) -> bool {
    q.is_integer()
}

/// Lossy conversion for diagnostics and float solvers.
pub fn to_f64(q: &Rational) -> f64 {
    match q.to_f64() {
        Some(x) => x,
        None => {
            let n = q.numer().to_f64().unwrap_or(f64::NAN);
            let d = q.denom().to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// Parses `"3"`, `"-2"`, `"0.6"`, `"1.25e-1"` style decimals, or `"p/q"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".to_string()));
    }
    if let Some((p, q)) = s.split_once('/') {
        let num = parse_int(p)?;
        let den = parse_int(q)?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        return Ok(Rational::new(num, den));
    }
    parse_decimal(s)
}

fn parse_int(s: &str) -> Result<BigInt> {
    let t = s.trim();
    let digits = t.strip_prefix('+').unwrap_or(t);
    digits
        .parse::<BigInt>()
        .map_err(|_| Error::Parse(alloc::format!("invalid integer `{t}`")))
}

fn parse_decimal(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(alloc::format!("invalid number `{s}`"));
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (negative, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = match body.split_once('.') {
        Some((w, f)) => (w, f),
        None => (body, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let mut digits = String::with_capacity(whole.len() + frac.len());
    digits.push_str(whole);
    digits.push_str(frac);
    let mut num: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    if negative {
        num = -num;
    }
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// Canonical text form: `"p/q"`, or just `"p"` for integers.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        alloc::format!("{}/{}", q.numer(), q.denom())
    }
}

/// Last continued-fraction convergent of `x` whose denominator is at most
/// `max_den`.
pub fn from_f64_bounded(x: f64, max_den: u64) -> Rational {
    if !x.is_finite() {
        return zero();
    }
    let negative = x < 0.0;
    let mut r = if negative { -x } else { x };
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    let cap = BigInt::from(max_den);
    for step in 0..64 {
        let a_f = libm::floor(r);
        let a = BigInt::from(a_f as u64);
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        if step > 0 && k_next > cap {
            break;
        }
        h_prev = core::mem::replace(&mut h, h_next);
        k_prev = core::mem::replace(&mut k, k_next);
        let frac = r - a_f;
        if frac < 1e-15 {
            break;
        }
        r = 1.0 / frac;
        if r > 1e18 {
            break;
        }
    }
    let q = Rational::new(h, k);
    if negative {
        -q
    } else {
        q
    }
}

/// Exact value of a finite `f64`.
pub fn from_f64_exact(x: f64) -> Rational {
    Rational::from_float(x).unwrap_or_else(zero)
}

/// Sum of an iterator of borrowed rationals.
pub fn sum<'a, I: IntoIterator<Item = &'a Rational>>(items: I) -> Rational {
    items.into_iter().fold(zero(), |acc, x| acc + x)
}
