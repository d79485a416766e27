//! Small exact-integer helpers shared by every module.

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_all(values: &[u64]) -> u64 {
    values.iter().fold(0, |acc, &v| gcd(acc, v))
}

pub fn checked_mul(a: u64, b: u64, what: &'static str) -> Result<u64> {
    a.checked_mul(b).ok_or(Error::Overflow(what))
}

pub fn checked_add(a: u64, b: u64, what: &'static str) -> Result<u64> {
    a.checked_add(b).ok_or(Error::Overflow(what))
}

/// Inverse of `a` modulo `m` for coprime `a`, `m` (with `m >= 1`).
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Smallest `x >= 0` with `s = x*a + y*b` for some integer `y` (possibly
/// negative), together with the period `b / gcd(a, b)` of such `x`.
/// `None` when `gcd(a, b)` does not divide `s`.
fn first_coefficient(s: u64, a: u64, b: u64) -> Option<(u64, u64)> {
    let g = gcd(a, b);
    if !s.is_multiple_of(g) {
        return None;
    }
    let (a, b, s) = (a / g, b / g, s / g);
    if b == 1 {
        return Some((0, 1));
    }
    let inv = mod_inverse(a % b, b)?;
    let x = ((s % b) as u128 * inv as u128 % b as u128) as u64;
    Some((x, b))
}

/// Membership of `s` in the semigroup generated by the two positive integers
/// `a` and `b` (no coprimality required).
pub fn in_two_generated(s: u64, a: u64, b: u64) -> bool {
    debug_assert!(a >= 1 && b >= 1);
    match first_coefficient(s, a, b) {
        Some((x, _)) => (x as u128) * (a as u128) <= s as u128,
        None => false,
    }
}

/// All pairs `(x, y)` of nonnegative integers with `x*a + y*b = s`, ordered by `x`.
pub fn two_generated_witnesses(s: u64, a: u64, b: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let Some((mut x, period)) = first_coefficient(s, a, b) else {
        return out;
    };
    while (x as u128) * (a as u128) <= s as u128 {
        let rest = s - x * a;
        out.push((x, rest / b));
        x += period;
    }
    out
}
