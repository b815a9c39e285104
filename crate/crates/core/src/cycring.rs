//! Exact arithmetic in `Z[zeta_M] = Z[x] / Phi_M(x)`.
//!
//! Elements are coordinate vectors in the power basis `1, x, ..., x^(phi(M)-1)`.
//! The Galois automorphism `sigma_a : x -> x^a` is exponent substitution
//! followed by reduction, and `sqrt(p)` is realized as an explicit Gauss sum,
//! so every conjugate of a supersingular Weil number is a concrete ring
//! element.
//!
//! Coordinates are `i128` with checked arithmetic; an overflow aborts rather
//! than producing a wrong answer.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::numtheory::{cyclotomic, euler_phi, is_prime, kronecker, sqrt_conductor, IntPoly};
use crate::{Error, Result};

/// Reduction data for one conductor, built once and shared.
#[derive(Debug)]
pub struct CycRing {
    conductor: u64,
    phi: usize,
    /// Nonzero coefficients of `Phi_M` below the leading term.
    lower: Vec<(usize, i128)>,
}

fn rings() -> &'static Mutex<HashMap<u64, Arc<CycRing>>> {
    static RINGS: OnceLock<Mutex<HashMap<u64, Arc<CycRing>>>> = OnceLock::new();
    RINGS.get_or_init(Default::default)
}

#[inline]
fn checked_mul_add(acc: i128, a: i128, b: i128) -> i128 {
    a.checked_mul(b)
        .and_then(|ab| acc.checked_add(ab))
        .expect("cyclotomic coordinate overflow")
}

impl CycRing {
    pub fn get(conductor: u64) -> Arc<CycRing> {
        assert!(conductor >= 1, "conductor must be positive");
        let mut map = rings().lock().expect("ring cache poisoned");
        map.entry(conductor)
            .or_insert_with(|| {
                let phi_m = cyclotomic(conductor);
                let phi = euler_phi(conductor) as usize;
                let lower = phi_m
                    .coeffs()
                    .iter()
                    .take(phi)
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (i, c.to_i128().expect("small cyclotomic coefficient")))
                    .collect();
                Arc::new(CycRing {
                    conductor,
                    phi,
                    lower,
                })
            })
            .clone()
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// Rank of the ring as a `Z`-module, `phi(M)`.
    pub fn rank(&self) -> usize {
        self.phi
    }

    /// Reduce a dense coefficient vector of any length modulo `Phi_M`.
    fn reduce(&self, mut v: Vec<i128>) -> Vec<i128> {
        let phi = self.phi;
        for i in (phi..v.len()).rev() {
            let c = v[i];
            if c == 0 {
                continue;
            }
            let base = i - phi;
            for &(j, a) in &self.lower {
                v[base + j] = checked_mul_add(v[base + j], -c, a);
            }
            v[i] = 0;
        }
        v.resize(phi, 0);
        v
    }
}

/// An element of `Z[zeta_M]`.
#[derive(Clone)]
pub struct CycElem {
    ring: Arc<CycRing>,
    coords: Vec<i128>,
}

impl PartialEq for CycElem {
    fn eq(&self, other: &Self) -> bool {
        self.ring.conductor == other.ring.conductor && self.coords == other.coords
    }
}

impl Eq for CycElem {}

impl fmt::Debug for CycElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycElem(M={}, {:?})", self.ring.conductor, self.coords)
    }
}

impl CycElem {
    pub fn zero(conductor: u64) -> Self {
        let ring = CycRing::get(conductor);
        let coords = vec![0; ring.phi];
        CycElem { ring, coords }
    }

    pub fn rational(conductor: u64, c: i128) -> Self {
        let mut e = CycElem::zero(conductor);
        e.coords[0] = c;
        e
    }

    /// `zeta_M^k`.
    pub fn zeta(conductor: u64, k: i64) -> Self {
        CycElem::from_exponents(conductor, &[(k, 1)])
    }

    /// `sum c_i * zeta_M^(e_i)`, exponents taken modulo `M`.
    pub fn from_exponents(conductor: u64, terms: &[(i64, i128)]) -> Self {
        let ring = CycRing::get(conductor);
        let m = conductor as i64;
        let mut v = vec![0i128; conductor as usize];
        for &(e, c) in terms {
            let idx = e.rem_euclid(m) as usize;
            v[idx] = v[idx].checked_add(c).expect("cyclotomic coordinate overflow");
        }
        let coords = ring.reduce(v);
        CycElem { ring, coords }
    }

    pub fn conductor(&self) -> u64 {
        self.ring.conductor
    }

    pub fn coords(&self) -> &[i128] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// The integer value, if every coordinate except the constant one is zero.
    pub fn as_rational(&self) -> Option<i128> {
        self.coords[1..]
            .iter()
            .all(|&c| c == 0)
            .then(|| self.coords[0])
    }

    fn check_same(&self, other: &CycElem) -> Result<()> {
        if self.ring.conductor == other.ring.conductor {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "conductor mismatch: {} vs {}",
                self.ring.conductor, other.ring.conductor
            )))
        }
    }

    pub fn try_add(&self, other: &CycElem) -> Result<CycElem> {
        self.check_same(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.checked_add(*b).expect("cyclotomic coordinate overflow"))
            .collect();
        Ok(CycElem {
            ring: self.ring.clone(),
            coords,
        })
    }

    pub fn try_sub(&self, other: &CycElem) -> Result<CycElem> {
        self.try_add(&-other)
    }

    /// Product reduced modulo `Phi_M`.
    pub fn try_mul(&self, other: &CycElem) -> Result<CycElem> {
        self.check_same(other)?;
        let phi = self.ring.phi;
        let mut v = vec![0i128; 2 * phi - 1];
        for (i, &a) in self.coords.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coords.iter().enumerate() {
                if b != 0 {
                    v[i + j] = checked_mul_add(v[i + j], a, b);
                }
            }
        }
        Ok(CycElem {
            ring: self.ring.clone(),
            coords: self.ring.reduce(v),
        })
    }

    pub fn scale(&self, c: i128) -> CycElem {
        CycElem {
            ring: self.ring.clone(),
            coords: self
                .coords
                .iter()
                .map(|&a| a.checked_mul(c).expect("cyclotomic coordinate overflow"))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> CycElem {
        let mut acc = CycElem::rational(self.conductor(), 1);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Image under `sigma_a : zeta_M -> zeta_M^a`.
    pub fn galois_apply(&self, a: i64) -> Result<CycElem> {
        let m = self.ring.conductor;
        let a = a.rem_euclid(m as i64) as u64;
        if a.gcd(&m) != 1 && m > 1 {
            return Err(Error::invalid(format!("{a} is not a unit mod {m}")));
        }
        let mut v = vec![0i128; m as usize];
        for (i, &c) in self.coords.iter().enumerate() {
            if c != 0 {
                let idx = ((i as u64 * a) % m) as usize;
                v[idx] = v[idx].checked_add(c).expect("cyclotomic coordinate overflow");
            }
        }
        Ok(CycElem {
            ring: self.ring.clone(),
            coords: self.ring.reduce(v),
        })
    }

    /// Image under the inclusion `Z[zeta_M] -> Z[zeta_M']`, `zeta_M -> zeta_M'^(M'/M)`.
    pub fn embed_up(&self, target: u64) -> Result<CycElem> {
        let m = self.ring.conductor;
        if target == 0 || !target.is_multiple_of(m) {
            return Err(Error::invalid(format!("{m} does not divide {target}")));
        }
        let step = (target / m) as i64;
        let terms: Vec<(i64, i128)> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i as i64 * step, c))
            .collect();
        Ok(CycElem::from_exponents(target, &terms))
    }

    /// Product with the sparse element `sum c * zeta_M^e`.
    pub fn mul_terms(&self, terms: &[(i64, i128)]) -> CycElem {
        let m = self.ring.conductor;
        let mut v = vec![0i128; m as usize];
        for &(e, c) in terms {
            let e = e.rem_euclid(m as i64) as u64;
            for (i, &a) in self.coords.iter().enumerate() {
                if a != 0 {
                    let idx = ((i as u64 + e) % m) as usize;
                    v[idx] = checked_mul_add(v[idx], a, c);
                }
            }
        }
        CycElem {
            ring: self.ring.clone(),
            coords: self.ring.reduce(v),
        }
    }

    /// Evaluate an integer polynomial at this element.
    pub fn eval_poly(&self, f: &IntPoly) -> CycElem {
        let m = self.conductor();
        f.coeffs()
            .iter()
            .rev()
            .fold(CycElem::zero(m), |acc, c| {
                let c = c.to_i128().expect("coefficient fits in i128");
                let mut next = &acc * self;
                next.coords[0] = next.coords[0]
                    .checked_add(c)
                    .expect("cyclotomic coordinate overflow");
                next
            })
    }
}

impl Add for &CycElem {
    type Output = CycElem;
    /// Panics on conductor mismatch; use [`CycElem::try_add`] to handle it.
    fn add(self, rhs: &CycElem) -> CycElem {
        self.try_add(rhs).expect("conductor mismatch")
    }
}

impl Sub for &CycElem {
    type Output = CycElem;
    fn sub(self, rhs: &CycElem) -> CycElem {
        self.try_sub(rhs).expect("conductor mismatch")
    }
}

impl Mul for &CycElem {
    type Output = CycElem;
    fn mul(self, rhs: &CycElem) -> CycElem {
        self.try_mul(rhs).expect("conductor mismatch")
    }
}

impl Neg for &CycElem {
    type Output = CycElem;
    fn neg(self) -> CycElem {
        self.scale(-1)
    }
}

/// `a * b` in `Z[zeta_M]`; errors if the conductors differ.
pub fn cyc_mul(a: &CycElem, b: &CycElem) -> Result<CycElem> {
    a.try_mul(b)
}

pub fn galois_apply(a: i64, e: &CycElem) -> Result<CycElem> {
    e.galois_apply(a)
}

pub fn embed_up(e: &CycElem, target: u64) -> Result<CycElem> {
    e.embed_up(target)
}

/// An element `s` of `Z[zeta_M]` with `s^2 = p`.
///
/// * `p = 2`: `zeta_8 + zeta_8^-1`
/// * `p = 1 mod 4`: the Gauss sum `sum_t (t|p) zeta_p^t`
/// * `p = 3 mod 4`: `zeta_4^3` times that Gauss sum
pub fn sqrt_p_embed(p: u64, conductor: u64) -> Result<CycElem> {
    Ok(CycElem::from_exponents(conductor, &sqrt_p_terms(p, conductor)?))
}

/// The terms `(e, c)` of [`sqrt_p_embed`] as `sum c * zeta_M^e`, unreduced.
pub fn sqrt_p_terms(p: u64, conductor: u64) -> Result<Vec<(i64, i128)>> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    let c = sqrt_conductor(p);
    if conductor == 0 || !conductor.is_multiple_of(c) {
        return Err(Error::invalid(format!(
            "sqrt({p}) needs conductor divisible by {c}, got {conductor}"
        )));
    }
    let m = conductor as i64;
    if p == 2 {
        let e8 = m / 8;
        return Ok(vec![(e8, 1), (7 * e8, 1)]);
    }
    let ep = m / p as i64;
    let shift = if p % 4 == 3 { 3 * m / 4 } else { 0 };
    Ok((1..p as i64)
        .map(|t| (t * ep + shift, kronecker(t, p as i64) as i128))
        .collect())
}

/// Discriminant of `Q(sqrt(p))`: the Kronecker character `(D | a)` is the sign
/// with `sigma_a(sqrt p) = (D | a) sqrt p`.
pub fn sqrt_discriminant(p: u64) -> i64 {
    match p % 4 {
        _ if p == 2 => 8,
        1 => p as i64,
        _ => 4 * p as i64,
    }
}

/// The sign `chi(a)` with `sigma_a(sqrt p) = chi(a) sqrt p`, tabulated over
/// `Z / c_p` by applying the Galois action to the Gauss sum itself.
#[derive(Debug, Clone)]
pub struct SqrtCharacter {
    p: u64,
    modulus: u64,
    table: Vec<i8>,
}

impl SqrtCharacter {
    /// Shared instance for `p`, built on first use.
    pub fn get(p: u64) -> Arc<SqrtCharacter> {
        static CACHE: OnceLock<Mutex<HashMap<u64, Arc<SqrtCharacter>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(chi) = cache.lock().expect("cache poisoned").get(&p) {
            return chi.clone();
        }
        let chi = Arc::new(SqrtCharacter::new(p));
        cache
            .lock()
            .expect("cache poisoned")
            .entry(p)
            .or_insert(chi)
            .clone()
    }

    pub fn new(p: u64) -> Self {
        let modulus = sqrt_conductor(p);
        let s = sqrt_p_embed(p, modulus).expect("conductor is admissible");
        let neg = -&s;
        let mut table = vec![0i8; modulus as usize];
        for a in 1..modulus {
            if a.gcd(&modulus) != 1 {
                continue;
            }
            let img = s.galois_apply(a as i64).expect("unit");
            table[a as usize] = if img == s {
                1
            } else if img == neg {
                -1
            } else {
                panic!("sigma_{a} does not map sqrt({p}) to +-sqrt({p})");
            };
        }
        SqrtCharacter { p, modulus, table }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `chi(a)` for `a` coprime to `c_p`; 0 otherwise.
    pub fn eval(&self, a: u64) -> i8 {
        self.table[(a % self.modulus) as usize]
    }
}
