//! Exact rational helpers.

use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::{Error, Result};

pub type Rational = num_rational::Ratio<i128>;

pub fn rat(numer: i128, denom: i128) -> Rational {
    Rational::new(numer, denom)
}

pub fn checked_pow(base: i128, exp: u32) -> Result<i128> {
    base.checked_pow(exp).ok_or(Error::Overflow("integer power"))
}

pub fn dyadic(n: u32) -> Rational {
    Rational::new(1, 1i128 << n)
}

pub fn to_f64(r: &Rational) -> f64 {
    // i128 -> f64 loses nothing that matters once divided
    let (n, d) = (*r.numer(), *r.denom());
    if n.unsigned_abs() < (1u128 << 100) && d < (1i128 << 100) {
        n as f64 / d as f64
    } else {
        let g = n.gcd(&d);
        (n / g) as f64 / (d / g) as f64
    }
}

pub fn floor_div(x: &Rational, step: &Rational) -> i128 {
    (x / step).floor().to_integer()
}

/// Exact square root when the rational is a perfect square.
pub fn exact_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = isqrt_u128(r.numer().unsigned_abs());
    let d = isqrt_u128(r.denom().unsigned_abs());
    if n * n == r.numer().unsigned_abs() && d * d == r.denom().unsigned_abs() {
        Some(Rational::new(n as i128, d as i128))
    } else {
        None
    }
}

pub fn isqrt_u128(v: u128) -> u128 {
    if v < 2 {
        return v;
    }
    let mut x = (v as f64).sqrt() as u128;
    while x.checked_mul(x).is_none_or(|s| s > v) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|s| s <= v) {
        x += 1;
    }
    x
}

/// Least common multiple of positive i128 values, `None` on overflow.
pub fn lcm_checked(a: i128, b: i128) -> Option<i128> {
    let g = a.gcd(&b);
    (a / g).checked_mul(b)
}

pub fn is_power_of(mut v: i128, base: i128) -> bool {
    if v < 1 {
        return false;
    }
    while v % base == 0 {
        v /= base;
    }
    v.is_one()
}
