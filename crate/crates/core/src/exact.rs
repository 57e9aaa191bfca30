//! Exact rational helpers: parsing, integer roots, and outward-rounded
//! enclosures of rational powers.

use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Fractional bits used when a power has to be enclosed rather than computed.
pub const ENCLOSURE_BITS: u32 = 128;

/// Parses `"3"`, `"-2/5"` or a finite decimal such as `"0.75"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_part: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            digits => digits.parse().map_err(|_| bad())?,
        };
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let mag = BigRational::new(int_part * &scale + frac_part, scale);
        return Ok(if negative { -mag } else { mag });
    }
    let v: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(v))
}

pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Decimal rendering with ten significant digits.
pub fn decimal(r: &BigRational) -> String {
    let x = to_f64(r);
    if x == 0.0 || (1e-4..1e9).contains(&x.abs()) {
        let s = format!("{x:.10}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{x:.9e}")
    }
}

fn split_exponent(exp: &BigRational) -> Result<(u32, u32)> {
    if exp.is_negative() {
        return Err(Error::params("negative exponents are not supported"));
    }
    let p = exp
        .numer()
        .to_u32()
        .ok_or_else(|| Error::params("exponent numerator too large"))?;
    let q = exp
        .denom()
        .to_u32()
        .ok_or_else(|| Error::params("exponent denominator too large"))?;
    Ok((p, q))
}

/// `ceil(x^exp)` for a nonnegative rational exponent.
pub fn ceil_pow(x: &BigUint, exp: &BigRational) -> Result<BigUint> {
    let (p, q) = split_exponent(exp)?;
    let target = x.pow(p);
    let root = target.nth_root(q);
    if root.pow(q) == target {
        Ok(root)
    } else {
        Ok(root + 1u32)
    }
}

/// `ceil(coeff * x^exp)` for positive rational `coeff`, nonnegative `exp`.
pub fn ceil_scaled_pow(coeff: &BigRational, x: &BigUint, exp: &BigRational) -> Result<BigUint> {
    if !coeff.is_positive() {
        return Err(Error::params("coefficient must be positive"));
    }
    let (p, q) = split_exponent(exp)?;
    // c >= a x^(p/q)  <=>  (c * den)^q >= num^q x^p
    let num = coeff.numer().magnitude().clone();
    let den = coeff.denom().magnitude().clone();
    let rhs = num.pow(q) * x.pow(p);
    let den_q = den.pow(q);
    // floor estimate, then step up to the least admissible integer
    let mut c = (&rhs / &den_q).nth_root(q);
    while (&c * &den).pow(q) < rhs {
        c += 1u32;
    }
    while !c.is_zero() && ((&c - 1u32) * &den).pow(q) >= rhs {
        c -= 1u32;
    }
    Ok(c)
}

/// Smallest integer `g` with `g^2 >= x`.
pub fn ceil_sqrt(x: u64) -> u64 {
    let r = x.sqrt();
    if r * r == x {
        r
    } else {
        r + 1
    }
}

/// Closed interval `[lo, hi]` of rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Enclosure {
    pub fn point(v: BigRational) -> Self {
        Enclosure { lo: v.clone(), hi: v }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn exact(&self) -> Option<&BigRational> {
        self.is_exact().then_some(&self.lo)
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }
}

/// Enclosure of `x^exp` for an integer `x >= 1`, exact whenever the power is
/// rational, otherwise `hi - lo = 2^-ENCLOSURE_BITS`.
pub fn pow_enclosure(x: &BigUint, exp: &BigRational) -> Result<Enclosure> {
    let (p, q) = split_exponent(exp)?;
    if q == 1 {
        return Ok(Enclosure::point(BigRational::from_integer(BigInt::from(x.pow(p)))));
    }
    let target = x.pow(p);
    let exact = target.nth_root(q);
    if exact.pow(q) == target {
        return Ok(Enclosure::point(BigRational::from_integer(BigInt::from(exact))));
    }
    let scale = BigUint::one() << ENCLOSURE_BITS;
    let scaled = target << (ENCLOSURE_BITS as usize * q as usize);
    let r = scaled.nth_root(q);
    let den = BigInt::from(scale);
    Ok(Enclosure {
        lo: BigRational::new(BigInt::from(r.clone()), den.clone()),
        hi: BigRational::new(BigInt::from(r + 1u32), den),
    })
}

fn exact_root(x: &BigUint, q: u32) -> Option<BigUint> {
    let r = x.nth_root(q);
    (r.pow(q) == *x).then_some(r)
}

/// `base^exp` when it is rational (base positive, exponent nonnegative).
pub fn exact_rational_pow(base: &BigRational, exp: &BigRational) -> Option<BigRational> {
    let (p, q) = split_exponent(exp).ok()?;
    if !base.is_positive() {
        return None;
    }
    let num = exact_root(&base.numer().magnitude().pow(p), q)?;
    let den = exact_root(&base.denom().magnitude().pow(p), q)?;
    Some(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

pub fn ratio(num: &BigUint, den: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}

pub fn int(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}
