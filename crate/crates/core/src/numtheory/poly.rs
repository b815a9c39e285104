use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Degree of a polynomial; the zero polynomial has its own variant so that
/// degree arithmetic never needs a signed sentinel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

/// Dense univariate polynomial over `Z`, coefficients in ascending degree.
///
/// The representation is canonical: no stored leading zeros, and the zero
/// polynomial has no coefficients at all.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "Vec<BigInt>", into = "Vec<BigInt>")]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl From<Vec<BigInt>> for IntPoly {
    fn from(coeffs: Vec<BigInt>) -> Self {
        IntPoly::new(coeffs)
    }
}

impl From<IntPoly> for Vec<BigInt> {
    fn from(p: IntPoly) -> Self {
        p.coeffs
    }
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    /// `c * x^k`.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        IntPoly::new(coeffs)
    }

    /// `x^m - 1`.
    pub fn x_pow_minus_one(m: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); m + 1];
        coeffs[0] = BigInt::from(-1);
        coeffs[m] = BigInt::one();
        IntPoly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// Coefficient of `x^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    /// Degree as a plain number; `None` for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Divide every coefficient by `c`, if all divisions are exact.
    pub fn div_exact_scalar(&self, c: &BigInt) -> Option<IntPoly> {
        if c.is_zero() {
            return None;
        }
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            let (quo, rem) = a.div_rem(c);
            if !rem.is_zero() {
                return None;
            }
            out.push(quo);
        }
        Some(IntPoly::new(out))
    }

    pub fn pow(&self, k: u32) -> IntPoly {
        let mut acc = IntPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `f(x^k)`.
    pub fn inflate(&self, k: usize) -> IntPoly {
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len().saturating_sub(1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        IntPoly::new(coeffs)
    }

    /// `f(c x)`.
    pub fn scale_var(&self, c: &BigInt) -> IntPoly {
        let mut pw = BigInt::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pw);
            pw *= c;
        }
        IntPoly::new(out)
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Division by a divisor whose leading coefficient is `+-1`.
    pub fn div_rem_monic(&self, d: &IntPoly) -> Result<(IntPoly, IntPoly)> {
        let lead = d
            .leading()
            .ok_or_else(|| Error::invalid("division by the zero polynomial"))?;
        if !lead.abs().is_one() {
            return Err(Error::invalid("divisor leading coefficient must be +-1"));
        }
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((IntPoly::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quo = vec![BigInt::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let c = &rem[i] * lead;
            for (j, dc) in d.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    rem[i - dd + j] -= &c * dc;
                }
            }
            quo[i - dd] = c;
        }
        rem.truncate(dd);
        Ok((IntPoly::new(quo), IntPoly::new(rem)))
    }

    /// Exact quotient by a `+-1`-leading divisor, or `None` if it does not divide.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        let (q, r) = self.div_rem_monic(d).ok()?;
        r.is_zero().then_some(q)
    }

    /// Gcd of the coefficients, nonnegative.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut c = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            c = -c;
        }
        self.div_exact_scalar(&c).expect("content divides")
    }

    /// Pseudo-remainder `lc(d)^(deg f - deg d + 1) * f mod d`.
    fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        let dd = d.coeffs.len() - 1;
        let lead = d.leading().expect("nonzero divisor").clone();
        let mut rem = self.coeffs.clone();
        while rem.len() > dd {
            let top = rem.pop().expect("nonempty");
            for c in rem.iter_mut() {
                *c *= &lead;
            }
            let shift = rem.len() - dd;
            for (j, dc) in d.coeffs.iter().take(dd).enumerate() {
                rem[shift + j] -= &top * dc;
            }
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        IntPoly::new(rem)
    }

    /// Primitive gcd over `Q[x]`, normalized to a primitive polynomial with
    /// positive leading coefficient.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let (mut a, mut b) = (self.primitive(), other.primitive());
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a.primitive()
    }

    /// Product of the distinct irreducible factors of a monic polynomial.
    pub fn squarefree_part(&self) -> IntPoly {
        if self.deg().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        if g.deg() == Some(0) {
            return self.clone();
        }
        // g is primitive with positive leading term; for monic self it is monic.
        self.div_exact(&g).unwrap_or_else(|| self.clone())
    }

    /// Lexicographic comparison on `(degree, top coefficient down to constant)`.
    pub fn cmp_lex(&self, other: &IntPoly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }

    /// Ascending comma-separated decimal coefficients, e.g. `2,2,1`.
    pub fn to_csv(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn from_csv(s: &str) -> Result<IntPoly> {
        let coeffs = s
            .split(',')
            .map(|t| {
                BigInt::from_str(t.trim())
                    .map_err(|_| Error::invalid(format!("bad coefficient {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IntPoly::new(coeffs))
    }

    /// Human-readable form in the variable `var`, highest degree first.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                out.push_str(&mag.to_string());
            }
            match i {
                0 => {}
                1 => {
                    if show_coeff {
                        out.push('*');
                    }
                    out.push_str(var);
                }
                _ => {
                    if show_coeff {
                        out.push('*');
                    }
                    out.push_str(&format!("{var}^{i}"));
                }
            }
        }
        out
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("X"))
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Monic `G` with `G^k = F`, found coefficient by coefficient from the top.
pub fn poly_kth_root(f: &IntPoly, k: u32) -> Result<IntPoly> {
    if k == 0 {
        return Err(Error::invalid("k must be positive"));
    }
    if !f.is_monic() {
        return Err(Error::invalid("polynomial must be monic"));
    }
    let n = f.deg().expect("monic is nonzero");
    if !n.is_multiple_of(k as usize) {
        return Err(Error::invalid(format!("{k} does not divide degree {n}")));
    }
    let m = n / k as usize;
    let mut g = vec![BigInt::zero(); m + 1];
    g[m] = BigInt::one();
    let kb = BigInt::from(k);
    for j in 1..=m {
        // With g_{m-j} = 0, the X^{n-j} coefficient of G^k only involves the
        // already-fixed upper coefficients; the true one adds k * g_{m-j}.
        let partial = IntPoly::new(g.clone()).pow(k).coeff(n - j);
        let diff = f.coeff(n - j) - partial;
        let (quo, rem) = diff.div_rem(&kb);
        if !rem.is_zero() {
            return Err(Error::NoRoot);
        }
        g[m - j] = quo;
    }
    let g = IntPoly::new(g);
    if &g.pow(k) == f {
        Ok(g)
    } else {
        Err(Error::NoRoot)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn canonical_form() {
        assert_eq!(p(&[1, 2, 0, 0]).coeffs().len(), 2);
        assert_eq!(p(&[0, 0]).degree(), Degree::NegInfinity);
        assert_eq!(p(&[5]).degree(), Degree::Finite(0));
        assert!(Degree::NegInfinity < Degree::Finite(0));
    }

    #[test]
    fn arithmetic() {
        let a = p(&[1, 1]);
        assert_eq!(&a * &a, p(&[1, 2, 1]));
        assert_eq!(&(&a * &a) - &a, p(&[0, 1, 1]));
        let (q, r) = p(&[-1, 0, 0, 1]).div_rem_monic(&p(&[-1, 1])).unwrap();
        assert_eq!(q, p(&[1, 1, 1]));
        assert!(r.is_zero());
        assert_eq!(p(&[2, 0, 1]).eval(&BigInt::from(3)), BigInt::from(11));
    }

    #[test]
    fn kth_root_examples() {
        let t1 = p(&[1, 1]);
        assert_eq!(poly_kth_root(&t1.pow(2), 2).unwrap(), t1);
        let c8 = p(&[1, 0, 0, 0, 1]);
        assert_eq!(poly_kth_root(&c8.pow(2), 2).unwrap(), c8);
        assert_eq!(poly_kth_root(&p(&[2, 0, 0, 0, 1]), 2), Err(Error::NoRoot));
        assert!(poly_kth_root(&p(&[1, 0, 1]), 3).is_err());
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = p(&[-2, 0, 1]);
        let b = p(&[2, 2, 1]);
        let f = &(&a * &a) * &b;
        assert_eq!(f.squarefree_part(), &a * &b);
        assert_eq!(a.gcd(&b), IntPoly::one());
        assert_eq!(f.gcd(&a), a);
    }

    #[test]
    fn csv_round_trip_and_display() {
        let f = p(&[2, -2, 1]);
        assert_eq!(f.to_csv(), "2,-2,1");
        assert_eq!(IntPoly::from_csv("2, -2, 1").unwrap(), f);
        assert!(IntPoly::from_csv("1,x").is_err());
        assert_eq!(f.to_string(), "X^2 - 2*X + 2");
        assert_eq!(p(&[-1, 0, 0, 1]).display_in("t"), "t^3 - 1");
    }

    proptest! {
        #[test]
        fn kth_root_inverts_power(
            lower in proptest::collection::vec(-9i64..=9, 0..8),
            k in 1u32..=4,
        ) {
            let mut c = lower;
            c.push(1);
            let g = p(&c);
            prop_assert_eq!(poly_kth_root(&g.pow(k), k).unwrap(), g);
        }

        #[test]
        fn csv_round_trip(c in proptest::collection::vec(-1000i64..1000, 1..12)) {
            let f = p(&c);
            prop_assert_eq!(IntPoly::from_csv(&f.to_csv()).unwrap(), f);
        }
    }
}
