//! Integer and polynomial primitives: primality, totients, multiplicative
//! orders, the Kronecker symbol, dense integer polynomials and cyclotomic
//! polynomials.

mod cyclotomic;
mod poly;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use cyclotomic::{cyclotomic, cyclotomic_decompose};
pub use poly::{poly_kth_root, Degree, IntPoly};

/// Deterministic trial division; the primes in scope are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization as ascending `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Ascending list of the positive divisors of `m`.
pub fn divisors(m: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            small.push(d);
            if d != m / d {
                large.push(m / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Euler's totient, computed from the factorization of `m`.
///
/// `m = 0` is outside the domain and returns 0.
pub fn euler_phi(m: u64) -> u64 {
    if m == 0 {
        return 0;
    }
    factorize(m)
        .into_iter()
        .fold(1, |acc, (p, e)| acc * (p - 1) * p.pow(e - 1))
}

/// All `m` with `euler_phi(m) == k`.
///
/// The scan stops at `2k^2`, which suffices because `phi(m) >= sqrt(m/2)`.
pub fn phi_inverse(k: u64) -> BTreeSet<u64> {
    if k == 0 {
        return BTreeSet::new();
    }
    (1..=2 * k * k).filter(|&m| euler_phi(m) == k).collect()
}

/// All `m` with `1 <= euler_phi(m) <= k`, ascending.
pub fn phi_at_most(k: u64) -> Vec<u64> {
    (1..=2 * k * k).filter(|&m| euler_phi(m) <= k).collect()
}

/// Multiplicative order of `a` modulo `m`. The order modulo 1 is 1.
pub fn mult_order(a: i64, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::invalid("modulus must be positive"));
    }
    if m == 1 {
        return Ok(1);
    }
    let a = a.rem_euclid(m as i64) as u64;
    if a.gcd(&m) != 1 {
        return Err(Error::invalid(format!("gcd({a}, {m}) != 1")));
    }
    let mut x = a;
    let mut f = 1;
    while x != 1 {
        x = mul_mod(x, a, m);
        f += 1;
    }
    Ok(f)
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[cfg(test)]
fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Units of `Z/m`, ascending. For `m = 1` this is `{0}` (the trivial group).
pub fn units(m: u64) -> Vec<u64> {
    if m == 1 {
        return vec![0];
    }
    (1..m).filter(|a| a.gcd(&m) == 1).collect()
}

/// Kronecker symbol `(d | a)`.
pub fn kronecker(d: i64, a: i64) -> i32 {
    if a == 0 {
        return if d == 1 || d == -1 { 1 } else { 0 };
    }
    let mut result = 1;
    let mut a = a;
    if a < 0 {
        a = -a;
        if d < 0 {
            result = -result;
        }
    }
    let twos = a.trailing_zeros();
    a >>= twos;
    if twos > 0 {
        if d % 2 == 0 {
            return 0;
        }
        let r = d.rem_euclid(8);
        if twos % 2 == 1 && (r == 3 || r == 5) {
            result = -result;
        }
    }
    result * jacobi(d, a)
}

/// Jacobi symbol for odd positive `n`.
fn jacobi(a: i64, n: i64) -> i32 {
    debug_assert!(n > 0 && n % 2 == 1);
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut result = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Least `M` with `sqrt(p)` in `Q(zeta_M)`: 8 for `p = 2`, `p` for
/// `p = 1 mod 4`, `4p` for `p = 3 mod 4`.
pub fn sqrt_conductor(p: u64) -> u64 {
    match p % 4 {
        _ if p == 2 => 8,
        1 => p,
        _ => 4 * p,
    }
}

/// Exact integer square root, if `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.sign() == num_bigint::Sign::Minus {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// The base field size `q = p^n` with `p` prime and `n` odd.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPrimePower", into = "RawPrimePower")]
pub struct PrimePower {
    p: u64,
    n: u32,
    q: BigInt,
}

#[derive(Serialize, Deserialize)]
struct RawPrimePower {
    p: u64,
    n: u32,
}

impl TryFrom<RawPrimePower> for PrimePower {
    type Error = Error;
    fn try_from(raw: RawPrimePower) -> Result<Self> {
        PrimePower::new(raw.p, raw.n)
    }
}

impl From<PrimePower> for RawPrimePower {
    fn from(q: PrimePower) -> Self {
        RawPrimePower { p: q.p, n: q.n }
    }
}

impl PrimePower {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::invalid(format!("{p} is not prime")));
        }
        if n.is_multiple_of(2) {
            return Err(Error::invalid(format!("exponent {n} must be odd and >= 1")));
        }
        Ok(PrimePower {
            p,
            n,
            q: BigInt::from(p).pow(n),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn q_pow(&self, k: u32) -> BigInt {
        Pow::pow(&self.q, k)
    }

    /// `p^((n-1)/2)`, so that `sqrt(q) = p^((n-1)/2) * sqrt(p)`.
    pub fn half_power(&self) -> BigInt {
        BigInt::from(self.p).pow((self.n - 1) / 2)
    }

    /// `sqrt(p * q) = p^((n+1)/2)`, an integer because `n` is odd.
    pub fn sqrt_pq(&self) -> BigInt {
        BigInt::from(self.p).pow(self.n.div_ceil(2))
    }

    /// `q` as `u64`, when it fits.
    pub fn q_u64(&self) -> Option<u64> {
        u64::try_from(&self.q).ok()
    }

    pub fn is_one(&self) -> bool {
        self.q.is_one()
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}^{}", self.p, self.n)
        }
    }
}

/// Functional equation of a Weil polynomial: with `P = sum a_i X^(2g-i)`,
/// `a_(2g-i) = q^(g-i) a_i` for `0 <= i <= g`.
pub fn is_weil_palindromic(poly: &IntPoly, q: &PrimePower) -> Result<bool> {
    let deg = poly
        .deg()
        .filter(|d| d % 2 == 0)
        .ok_or_else(|| Error::invalid("Weil polynomial must have even degree"))?;
    if !poly.is_monic() {
        return Err(Error::invalid("Weil polynomial must be monic"));
    }
    let g = deg / 2;
    let a = |i: usize| poly.coeff(deg - i);
    Ok((0..=g).all(|i| a(deg - i) == q.q_pow((g - i) as u32) * a(i)))
}
