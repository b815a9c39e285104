//! Point counts of Artin-Schreier curves `y^2 + y = f(x)` over `F_(2^w)` and
//! recovery of the characteristic polynomial of Frobenius from them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::expr::{MultiPoly, Var};
use crate::numtheory::factorize;
use crate::{Error, IntPoly, Result};

/// Largest `w * i` for which `count_points` will enumerate `F_(2^(w i))`.
pub const MAX_COUNT_BITS: u32 = 24;

/// Degree of a nonzero polynomial over `F_2` stored as bits.
fn bit_degree(a: u64) -> u32 {
    63 - a.leading_zeros()
}

/// Remainder of `a` modulo `m` over `F_2`.
fn gf2_rem(mut a: u64, m: u64) -> u64 {
    let dm = bit_degree(m);
    while a != 0 && bit_degree(a) >= dm {
        a ^= m << (bit_degree(a) - dm);
    }
    a
}

/// Irreducibility over `F_2` by trial division with every polynomial of
/// degree `1..=deg/2`.
pub fn is_irreducible_gf2(poly: u64) -> bool {
    if poly < 2 {
        return false;
    }
    let d = bit_degree(poly);
    (2u64..1 << (d / 2 + 1)).all(|f| gf2_rem(poly, f) != 0)
}

/// `F_2[t] / (modulus)`, elements as bit vectors in the basis `1, t, ..., t^(w-1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryField {
    w: u32,
    modulus: u64,
    trace_mask: u64,
}

impl BinaryField {
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus < 4 || bit_degree(modulus) > 32 {
            return Err(Error::invalid(format!("modulus {modulus:#b} must have degree 2..=32")));
        }
        if !is_irreducible_gf2(modulus) {
            return Err(Error::invalid(format!("modulus {modulus:#b} is reducible over F_2")));
        }
        let mut field = BinaryField {
            w: bit_degree(modulus),
            modulus,
            trace_mask: 0,
        };
        field.trace_mask = (0..field.w)
            .filter(|&j| field.trace_by_squaring(1 << j) == 1)
            .fold(0, |m, j| m | 1 << j);
        Ok(field)
    }

    /// `F_32 = F_2[t] / (t^5 + t^2 + 1)`.
    pub fn default_f32() -> Self {
        BinaryField::new(0b100101).expect("t^5 + t^2 + 1 is irreducible")
    }

    /// The field of size `2^w` with the numerically smallest irreducible modulus.
    pub fn smallest(w: u32) -> Result<Self> {
        if !(1..=32).contains(&w) {
            return Err(Error::invalid(format!("extension degree {w} out of range")));
        }
        if w == 1 {
            return Ok(BinaryField {
                w: 1,
                modulus: 0b10,
                trace_mask: 1,
            });
        }
        let m = (1u64 << w..1u64 << (w + 1))
            .find(|&m| is_irreducible_gf2(m))
            .expect("irreducible polynomials exist in every degree");
        BinaryField::new(m)
    }

    pub fn w(&self) -> u32 {
        self.w
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn size(&self) -> u64 {
        1 << self.w
    }

    pub fn mul(&self, mut a: u64, mut b: u64) -> u64 {
        let top = 1u64 << self.w;
        let mut acc = 0;
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & top != 0 {
                a ^= self.modulus;
            }
        }
        acc
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// `Tr(a) = a + a^2 + ... + a^(2^(w-1))`.
    pub fn trace_by_squaring(&self, a: u64) -> u8 {
        let mut t = a;
        let mut acc = a;
        for _ in 1..self.w {
            t = self.mul(t, t);
            acc ^= t;
        }
        debug_assert!(acc <= 1, "trace must lie in F_2");
        acc as u8
    }

    /// Same as [`trace_by_squaring`](Self::trace_by_squaring), via the traces of the basis.
    pub fn trace(&self, a: u64) -> u8 {
        ((a & self.trace_mask).count_ones() & 1) as u8
    }

    /// Whether `a` generates the multiplicative group.
    pub fn is_generator(&self, a: u64) -> bool {
        if a == 0 {
            return false;
        }
        let order = self.size() - 1;
        factorize(order)
            .into_iter()
            .all(|(r, _)| self.pow(a, order / r) != 1)
    }

    /// Smallest element that is a root of `poly` (coefficients in `F_2`).
    pub fn root_of(&self, poly: u64) -> Option<u64> {
        (0..self.size()).find(|&x| {
            let mut acc = 0;
            for j in (0..=bit_degree(poly)).rev() {
                acc = self.mul(acc, x) ^ ((poly >> j) & 1);
            }
            acc == 0
        })
    }

    /// Value of `sum c_j x^j`.
    pub fn eval(&self, coeffs: &[u64], x: u64) -> u64 {
        coeffs.iter().rev().fold(0, |acc, &c| self.mul(acc, x) ^ c)
    }
}

/// `y^2 + y = f(x)` with `f` over the base field, `deg f` odd.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveAS {
    field: BinaryField,
    f: Vec<u64>,
}

impl CurveAS {
    pub fn new(field: BinaryField, mut f: Vec<u64>) -> Result<Self> {
        while f.last() == Some(&0) {
            f.pop();
        }
        if f.iter().any(|&c| c >= field.size()) {
            return Err(Error::invalid("coefficient outside the base field"));
        }
        if f.len() % 2 == 1 {
            return Err(Error::invalid("deg f must be odd"));
        }
        Ok(CurveAS { field, f })
    }

    /// Build `f` from an expression in `x` and `a`, where `a` stands for `alpha`.
    pub fn from_expr(field: BinaryField, alpha: u64, f: &MultiPoly) -> Result<Self> {
        f.require_vars(&[Var::X, Var::A])?;
        let mut coeffs = vec![0u64; f.degree_in(Var::X) as usize + 1];
        for (e, c) in f.terms() {
            if c.is_odd() {
                coeffs[e[0] as usize] ^= field.pow(alpha, e[3] as u64);
            }
        }
        CurveAS::new(field, coeffs)
    }

    pub fn field(&self) -> &BinaryField {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.f
    }

    pub fn degree(&self) -> usize {
        self.f.len() - 1
    }

    pub fn genus(&self) -> u32 {
        (self.degree() as u32 - 1) / 2
    }

    pub fn q(&self) -> u64 {
        self.field.size()
    }
}

/// `N_1, ..., N_k` for a curve over `F_q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCounts {
    pub q: u64,
    pub counts: Vec<u64>,
}

impl PointCounts {
    /// `S_i = q^i + 1 - N_i`.
    pub fn power_sums(&self) -> Vec<BigInt> {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, n)| num_traits::pow(BigInt::from(self.q), i + 1) + 1 - n)
            .collect()
    }

    /// `|S_i| <= 2g q^(i/2)` for every `i`.
    pub fn within_weil_bound(&self, g: u32) -> bool {
        self.power_sums().iter().enumerate().all(|(i, s)| {
            let bound = BigInt::from(4 * g as u64 * g as u64) * num_traits::pow(BigInt::from(self.q), i + 1);
            s * s <= bound
        })
    }
}

/// `N_i` over `F_(q^i)`, counting the single point at infinity.
pub fn count_points(c: &CurveAS, i: u32) -> Result<u64> {
    let base = &c.field;
    if i == 0 {
        return Err(Error::invalid("extension index must be positive"));
    }
    let bits = base.w() * i;
    if bits > MAX_COUNT_BITS {
        return Err(Error::Refused(format!(
            "counting over F_2^{bits} exceeds the cap of 2^{MAX_COUNT_BITS} elements"
        )));
    }
    let (ext, f) = if i == 1 {
        (base.clone(), c.f.clone())
    } else {
        let ext = BinaryField::smallest(bits)?;
        let beta = ext
            .root_of(base.modulus())
            .expect("the base modulus splits in the extension");
        let embed = |a: u64| {
            (0..base.w())
                .filter(|j| a >> j & 1 == 1)
                .fold(0, |acc, j| acc ^ ext.pow(beta, j as u64))
        };
        let f = c.f.iter().map(|&a| embed(a)).collect();
        (ext, f)
    };
    let zeros: u64 = (0..ext.size())
        .into_par_iter()
        .filter(|&x| ext.trace(ext.eval(&f, x)) == 0)
        .count() as u64;
    Ok(1 + 2 * zeros)
}

/// `N_1, ..., N_g`.
pub fn count_all(c: &CurveAS) -> Result<PointCounts> {
    let counts = (1..=c.genus()).map(|i| count_points(c, i)).collect::<Result<_>>()?;
    Ok(PointCounts { q: c.q(), counts })
}

/// Newton's identities on `S_i = q^i + 1 - N_i`, completed by the
/// functional equation.
pub fn charpoly_from_counts(q: u64, g: u32, counts: &PointCounts) -> Result<IntPoly> {
    if counts.counts.len() != g as usize {
        return Err(Error::invalid(format!(
            "need {g} counts, got {}",
            counts.counts.len()
        )));
    }
    if counts.q != q {
        return Err(Error::invalid("counts belong to a different field"));
    }
    let s = counts.power_sums();
    let g = g as usize;
    let mut a = vec![BigInt::one()];
    for i in 1..=g {
        let mut rhs = s[i - 1].clone();
        for k in 1..i {
            rhs += &s[k - 1] * &a[i - k];
        }
        let (quot, rem) = (-rhs).div_rem(&BigInt::from(i));
        if !rem.is_zero() {
            return Err(Error::Inconsistent(format!(
                "a_{i} is not an integer; the counts do not come from a curve"
            )));
        }
        a.push(quot);
    }
    let qb = BigInt::from(q);
    for i in 1..=g {
        let v = &a[g - i] * num_traits::pow(qb.clone(), i);
        a.push(v);
    }
    Ok(IntPoly::new(a.into_iter().rev().collect()))
}

/// Point counts predicted by a q-palindromic `P`, up to `depth`.
pub fn roundtrip_counts(p: &IntPoly, q: u64, depth: usize) -> Result<PointCounts> {
    let d = p.deg().unwrap_or(0);
    if !p.is_monic() || d == 0 || d % 2 == 1 {
        return Err(Error::invalid("P must be monic of positive even degree"));
    }
    // a[i] = coefficient of X^(d-i)
    let a: Vec<BigInt> = (0..=d).map(|i| p.coeff(d - i)).collect();
    let mut s: Vec<BigInt> = Vec::with_capacity(depth);
    for i in 1..=depth {
        let mut v = if i <= d {
            -BigInt::from(i) * &a[i]
        } else {
            BigInt::zero()
        };
        for k in 1..i.min(d + 1) {
            v -= &a[k] * &s[i - k - 1];
        }
        s.push(v);
    }
    let qb = BigInt::from(q);
    let counts = s
        .iter()
        .enumerate()
        .map(|(i, si)| {
            let n: BigInt = num_traits::pow(qb.clone(), i + 1) + 1 - si;
            if n.is_negative() {
                return Err(Error::Inconsistent(format!("N_{} would be negative", i + 1)));
            }
            n.to_u64()
                .ok_or_else(|| Error::Refused(format!("N_{} does not fit in 64 bits", i + 1)))
        })
        .collect::<Result<_>>()?;
    Ok(PointCounts { q, counts })
}

/// Characteristic polynomial of the Jacobian from `g` brute-force counts.
pub fn jacobian_charpoly(c: &CurveAS) -> Result<IntPoly> {
    charpoly_from_counts(c.q(), c.genus(), &count_all(c)?)
}

/// Every generator of `F^*`, ascending.
pub fn generators(field: &BinaryField) -> Vec<u64> {
    (1..field.size()).filter(|&a| field.is_generator(a)).collect()
}

/// Generators `alpha` of `F^*` for which every curve `f_j(x, alpha)` has
/// Jacobian polynomial `P_j`.
pub fn matching_generators(field: &BinaryField, rows: &[(MultiPoly, IntPoly)]) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    'alpha: for alpha in generators(field) {
        for (f, p) in rows {
            let c = CurveAS::from_expr(field.clone(), alpha, f)?;
            if &jacobian_charpoly(&c)? != p {
                continue 'alpha;
            }
        }
        out.push(alpha);
    }
    Ok(out)
}
