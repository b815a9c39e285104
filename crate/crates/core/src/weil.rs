//! Supersingular Weil numbers `pi = sqrt(q) * zeta_L^k` and their minimal
//! polynomials over `Q`.
//!
//! With `sqrt(q) = p^((n-1)/2) * sqrt(p)`, the Galois image of `pi` under
//! `sigma_a` is `chi(a) * sqrt(q) * zeta_L^(ak)`, where `chi` is the quadratic
//! character of `Q(sqrt p)`. Every conjugate of `pi / sqrt(q)` is therefore a
//! `2L`-th root of unity, which is how the stabilizer and the orbit are
//! computed. The expanded minimal polynomial is then checked to have rational
//! integer coefficients.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::cycring::{sqrt_p_embed, sqrt_p_terms, CycElem, SqrtCharacter};
use crate::numtheory::{euler_phi, is_weil_palindromic, sqrt_conductor, units};
use crate::{Error, IntPoly, PrimePower, Result};

/// `lcm(L, c_p)`: the least conductor containing `zeta_L` and `sqrt(p)`.
pub fn conductor(p: u64, l: u64) -> u64 {
    l.lcm(&sqrt_conductor(p))
}

/// A subgroup of `(Z/M)^*`, as a sorted member list with a membership mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitSubgroup {
    modulus: u64,
    members: Vec<u64>,
    mask: Vec<bool>,
}

impl UnitSubgroup {
    pub fn from_members(modulus: u64, members: impl IntoIterator<Item = u64>) -> Self {
        let mut mask = vec![false; modulus as usize];
        for a in members {
            mask[(a % modulus) as usize] = true;
        }
        let members = (0..modulus).filter(|&a| mask[a as usize]).collect();
        UnitSubgroup {
            modulus,
            members,
            mask,
        }
    }

    pub fn whole(modulus: u64) -> Self {
        UnitSubgroup::from_members(modulus, units(modulus))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, a: u64) -> bool {
        self.mask[(a % self.modulus) as usize]
    }

    pub fn intersection_len(&self, other: &UnitSubgroup) -> usize {
        assert_eq!(self.modulus, other.modulus, "subgroups of different groups");
        self.members.iter().filter(|&&a| other.contains(a)).count()
    }

    /// Closed under multiplication and contains 1.
    pub fn is_subgroup(&self) -> bool {
        let m = self.modulus;
        self.contains(1 % m)
            && self
                .members
                .iter()
                .all(|&a| self.members.iter().all(|&b| self.contains(a * b % m)))
    }
}

/// `pi = sqrt(q) * zeta_L^k` with `gcd(k, L) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeilNumber {
    q: PrimePower,
    l: u64,
    k: u64,
    m: u64,
}

impl WeilNumber {
    pub fn new(q: PrimePower, l: u64, k: i64) -> Result<Self> {
        if l == 0 {
            return Err(Error::invalid("root of unity order must be positive"));
        }
        let k = k.rem_euclid(l as i64) as u64;
        if k.gcd(&l) != 1 {
            return Err(Error::invalid(format!("exponent {k} is not a unit mod {l}")));
        }
        let m = conductor(q.p(), l);
        Ok(WeilNumber { q, l, k, m })
    }

    pub fn q(&self) -> &PrimePower {
        &self.q
    }

    /// `L`, the order of `pi / sqrt(q)`.
    pub fn order(&self) -> u64 {
        self.l
    }

    pub fn exponent(&self) -> u64 {
        self.k
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    /// `sqrt(p) * zeta_L^k` as sparse terms over `zeta_M`.
    fn unit_terms(&self) -> Vec<(i64, i128)> {
        let shift = (self.k * (self.m / self.l)) as i64;
        sqrt_p_terms(self.q.p(), self.m)
            .expect("conductor is a multiple of c_p")
            .into_iter()
            .map(|(e, c)| (e + shift, c))
            .collect()
    }

    /// `pi` at `n = 1`, that is `sqrt(p) * zeta_L^k`.
    pub fn unit_value(&self) -> CycElem {
        CycElem::from_exponents(self.m, &self.unit_terms())
    }

    /// `pi` itself; refused when `p^((n-1)/2)` leaves the coordinate range.
    pub fn value(&self) -> Result<CycElem> {
        let scale = self
            .q
            .half_power()
            .to_i128()
            .ok_or_else(|| Error::Refused(format!("sqrt({}) too large for exact value", self.q)))?;
        Ok(self.unit_value().scale(scale))
    }

    /// `sigma_a(pi) / sqrt(q)` as an exponent of `zeta_2L`.
    fn conjugate_exponent(&self, a: u64, chi: &SqrtCharacter) -> u64 {
        let l2 = 2 * self.l;
        let sign = if chi.eval(a) < 0 { self.l } else { 0 };
        (2 * (a % self.l) * self.k + sign) % l2
    }

    /// Coset representatives of the stabilizer (least unit in each coset)
    /// with the matching conjugates as exponents of `zeta_2L`.
    fn orbit(&self, chi: &SqrtCharacter) -> Vec<(u64, u64)> {
        let mut seen = BTreeMap::new();
        for a in units(self.m) {
            seen.entry(self.conjugate_exponent(a, chi)).or_insert(a);
        }
        let mut orbit: Vec<(u64, u64)> = seen.into_iter().map(|(e, a)| (a, e)).collect();
        orbit.sort_unstable();
        orbit
    }

    /// Every conjugate `sigma_a(pi)` written as `sqrt(q) * zeta_L'^k'`, normalized
    /// to `(L', k' mod L')`.
    pub fn conjugate_labels(&self) -> Vec<(u64, u64)> {
        let chi = SqrtCharacter::get(self.q.p());
        let l2 = 2 * self.l;
        self.orbit(&chi)
            .into_iter()
            .map(|(_, e)| {
                let g = e.gcd(&l2);
                let order = l2 / g;
                (order, (e / g) % order)
            })
            .collect()
    }
}

/// `H = {a : sigma_a(pi) = pi}`, via the character test
/// `chi(a) * zeta_L^(k(a-1)) = 1`.
pub fn stabilizer(w: &WeilNumber) -> UnitSubgroup {
    let chi = SqrtCharacter::get(w.q.p());
    let base = w.conjugate_exponent(1, &chi);
    UnitSubgroup::from_members(
        w.m,
        units(w.m)
            .into_iter()
            .filter(|&a| w.conjugate_exponent(a, &chi) == base),
    )
}

/// `H` by comparing `sigma_a(pi)` with `pi` in the ring for every unit `a`.
pub fn stabilizer_direct(w: &WeilNumber) -> UnitSubgroup {
    let v = w.unit_value();
    UnitSubgroup::from_members(
        w.m,
        units(w.m)
            .into_iter()
            .filter(|&a| v.galois_apply(a as i64).expect("unit") == v),
    )
}

/// The minimal polynomial of a Weil number with its Galois data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeilClass {
    pub h: IntPoly,
    /// Coset representatives of the stabilizer in `(Z/M)^*`.
    pub orbit: Vec<u64>,
    pub number: WeilNumber,
    pub stabilizer: UnitSubgroup,
}

pub fn min_poly(w: &WeilNumber) -> WeilClass {
    min_poly_with(w, stabilizer(w))
}

pub(crate) fn min_poly_with(w: &WeilNumber, stab: UnitSubgroup) -> WeilClass {
    let chi = SqrtCharacter::get(w.q.p());
    let orbit = w.orbit(&chi);
    assert_eq!(
        orbit.len() * stab.len(),
        euler_phi(w.m) as usize,
        "orbit-stabilizer mismatch"
    );
    let roots: Vec<u64> = orbit.iter().map(|&(_, e)| e).collect();
    let normalized = normalized_product(w.q.p(), 2 * w.l, &roots);
    WeilClass {
        h: denormalize(&normalized, &w.q),
        orbit: orbit.into_iter().map(|(a, _)| a).collect(),
        number: w.clone(),
        stabilizer: stab,
    }
}

/// `prod (Y - zeta_R^e)` over the given exponents. Coefficient `j` (of
/// `Y^(D-j)`) must be an integer for even `j` and an integer multiple of
/// `sqrt(p)` for odd `j`; returns those integers.
fn normalized_product(p: u64, r: u64, roots: &[u64]) -> Vec<BigInt> {
    let mut poly = vec![CycElem::rational(r, 1)];
    for &e in roots {
        let mut next = poly.clone();
        next.push(CycElem::zero(r));
        for (j, c) in poly.iter().enumerate() {
            next[j + 1] = &next[j + 1] - &c.mul_terms(&[(e as i64, 1)]);
        }
        poly = next;
    }
    let sqrt_p = sqrt_p_embed(p, r).ok();
    poly.iter()
        .enumerate()
        .map(|(j, c)| {
            if j % 2 == 0 {
                let v = c
                    .as_rational()
                    .unwrap_or_else(|| panic!("non-rational coefficient {j}: {c:?}"));
                BigInt::from(v)
            } else if c.is_zero() {
                BigInt::zero()
            } else {
                let s = sqrt_p
                    .as_ref()
                    .unwrap_or_else(|| panic!("coefficient {j} is irrational but sqrt({p}) is not in Q(zeta_{r})"));
                let v = (c * s)
                    .as_rational()
                    .unwrap_or_else(|| panic!("coefficient {j} is not a rational multiple of sqrt({p})"));
                assert_eq!(v % p as i128, 0, "coefficient {j} is not integral");
                BigInt::from(v / p as i128)
            }
        })
        .collect()
}

/// Write `h = sum a_j X^(D-j)` in the `q`-free form: `a_j / q^(j/2)` for even
/// `j`, `a_j / (q^((j-1)/2) p^((n+1)/2))` for odd `j`. `None` if some division
/// is inexact.
pub fn normalized_coefficients(h: &IntPoly, q: &PrimePower) -> Option<Vec<BigInt>> {
    let d = h.deg()?;
    let s = q.sqrt_pq();
    (0..=d)
        .map(|j| {
            let a = h.coeff(d - j);
            let mut div = q.q_pow((j / 2) as u32);
            if j % 2 == 1 {
                div *= &s;
            }
            let (quo, rem) = a.div_rem(&div);
            rem.is_zero().then_some(quo)
        })
        .collect()
}

/// Inverse of [`normalized_coefficients`].
pub fn denormalize(c: &[BigInt], q: &PrimePower) -> IntPoly {
    let d = c.len() - 1;
    let s = q.sqrt_pq();
    let mut coeffs = vec![BigInt::zero(); d + 1];
    for (j, cj) in c.iter().enumerate() {
        let mut a = cj * q.q_pow((j / 2) as u32);
        if j % 2 == 1 {
            a *= &s;
        }
        coeffs[d - j] = a;
    }
    IntPoly::new(coeffs)
}

/// `prod (X - sigma_a(pi))` over the given units, expanded in `Z[zeta_M]`.
/// Intended for cross-checks at small conductors.
pub fn min_poly_from_reps(w: &WeilNumber, reps: &[u64]) -> IntPoly {
    let beta = w.unit_value();
    let m = w.m;
    let mut poly = vec![CycElem::rational(m, 1)];
    for &a in reps {
        let root = beta.galois_apply(a as i64).expect("unit");
        let mut next = poly.clone();
        next.push(CycElem::zero(m));
        for (j, c) in poly.iter().enumerate() {
            next[j + 1] = &next[j + 1] - &(c * &root);
        }
        poly = next;
    }
    let h1 = IntPoly::new(
        poly.iter()
            .rev()
            .map(|c| BigInt::from(c.as_rational().expect("rational coefficient")))
            .collect(),
    );
    let q1 = PrimePower::new(w.q.p(), 1).expect("prime");
    denormalize(
        &normalized_coefficients(&h1, &q1).expect("normalizable"),
        &w.q,
    )
}

/// `h(pi) = 0` exactly in `Z[zeta_M]`, checked at `n = 1` where
/// `h_n(pi_n) = p^(D(n-1)/2) h_1(pi_1)`.
pub fn vanishes_at(h: &IntPoly, w: &WeilNumber) -> bool {
    let Some(c) = normalized_coefficients(h, &w.q) else {
        return false;
    };
    let q1 = PrimePower::new(w.q.p(), 1).expect("prime");
    let h1 = denormalize(&c, &q1);
    let terms = w.unit_terms();
    let mut acc = CycElem::zero(w.m);
    for a in h1.coeffs().iter().rev() {
        acc = &acc.mul_terms(&terms) + &CycElem::rational(w.m, a.to_i128().expect("fits"));
    }
    acc.is_zero()
}

const ROOT_TOLERANCE: f64 = 1e-9;

/// Every complex root has modulus `sqrt(q)` to relative precision `1e-9`, and
/// `h` satisfies the functional equation exactly when its degree is even.
pub fn weil_root_check(h: &IntPoly, q: &PrimePower) -> bool {
    let Some(d) = h.deg() else { return false };
    if !h.is_monic() {
        return false;
    }
    if d % 2 == 0 && !is_weil_palindromic(h, q).unwrap_or(false) {
        return false;
    }
    let f = h.squarefree_part();
    let d = f.deg().unwrap_or(0);
    if d == 0 {
        return true;
    }
    // Roots of f(sqrt(q) t) / q^(d/2) should lie on the unit circle.
    let qf = q.q().to_f64().unwrap_or(f64::INFINITY);
    let coeffs: Vec<f64> = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, a)| a.to_f64().unwrap_or(f64::INFINITY) * qf.powf((i as f64 - d as f64) / 2.0))
        .collect();
    if coeffs.iter().any(|c| !c.is_finite()) {
        return false;
    }
    aberth(&coeffs)
        .into_iter()
        .all(|z| (z.norm() - 1.0).abs() <= ROOT_TOLERANCE)
}

fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Aberth-Ehrlich iteration for all roots of a monic polynomial (ascending
/// coefficients), followed by Newton polishing.
fn aberth(coeffs: &[f64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    let mut z: Vec<Complex64> = (0..d)
        .map(|i| Complex64::from_polar(1.1, 0.4 + std::f64::consts::TAU * i as f64 / d as f64))
        .collect();
    for _ in 0..1000 {
        let mut max_step: f64 = 0.0;
        for i in 0..d {
            let (p, dp) = horner(coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            z[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-15 {
            break;
        }
    }
    for zi in &mut z {
        for _ in 0..3 {
            let (p, dp) = horner(coeffs, *zi);
            if dp.norm() > 0.0 {
                *zi -= p / dp;
            }
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::phi_at_most;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    fn pp(p: u64, n: u32) -> PrimePower {
        PrimePower::new(p, n).unwrap()
    }

    fn poly(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn conductor_examples() {
        assert_eq!(conductor(2, 5), 40);
        assert_eq!(conductor(11, 4), 44);
        assert_eq!(conductor(3, 4), 12);
    }

    #[test]
    fn stabilizer_examples() {
        let w = WeilNumber::new(pp(2, 1), 8, 1).unwrap();
        assert_eq!(stabilizer(&w).members(), &[1, 5]);
        let w = WeilNumber::new(pp(3, 1), 4, 1).unwrap();
        assert_eq!(stabilizer(&w).members(), &[1, 7]);
        for p in [2, 3, 5, 7, 13] {
            let w = WeilNumber::new(pp(p, 1), 1, 0).unwrap();
            let h = stabilizer(&w);
            assert_eq!(2 * h.len(), euler_phi(w.conductor()) as usize);
            let chi = SqrtCharacter::get(p);
            assert!(h.members().iter().all(|&a| chi.eval(a) == 1));
        }
    }

    #[test]
    fn min_poly_examples() {
        let w = WeilNumber::new(pp(2, 1), 8, 1).unwrap();
        assert_eq!(min_poly(&w).h, poly(&[2, -2, 1]));
        let w = WeilNumber::new(pp(3, 1), 4, 1).unwrap();
        assert_eq!(min_poly(&w).h, poly(&[3, 0, 1]));
        let w = WeilNumber::new(pp(5, 1), 5, 1).unwrap();
        assert_eq!(min_poly(&w).h, poly(&[25, -25, 15, -5, 1]));
        let w = WeilNumber::new(pp(7, 3), 1, 0).unwrap();
        assert_eq!(min_poly(&w).h, poly(&[-343, 0, 1]));
    }

    #[test]
    fn root_check_examples() {
        assert!(weil_root_check(&poly(&[2, 0, 1]), &pp(2, 1)));
        assert!(!weil_root_check(&poly(&[2, -3, 1]), &pp(2, 1)));
        assert!(weil_root_check(&poly(&[25, -25, 15, -5, 1]), &pp(5, 1)));
        // repeated real roots are handled through the squarefree part
        assert!(weil_root_check(&poly(&[-3, 0, 1]).pow(2), &pp(3, 1)));
        assert!(!weil_root_check(&poly(&[4, 0, 1]), &pp(2, 1)));
    }

    /// Every `(L, k)` with `phi(L) <= bound` at the given `q`.
    fn all_numbers(q: &PrimePower, bound: u64) -> Vec<WeilNumber> {
        phi_at_most(bound)
            .into_iter()
            .flat_map(|l| {
                let q = q.clone();
                units(l)
                    .into_iter()
                    .map(move |k| WeilNumber::new(q.clone(), l, k as i64).unwrap())
            })
            .collect()
    }

    #[test]
    fn class_invariants_over_small_orders() {
        for (p, n) in [(2, 1), (3, 1), (5, 1), (7, 3), (2, 3), (13, 1)] {
            let q = pp(p, n);
            for w in all_numbers(&q, 12) {
                let class = min_poly(&w);
                let d = class.h.deg().unwrap();
                assert!(class.h.is_monic());
                assert_eq!(d * class.stabilizer.len(), euler_phi(w.conductor()) as usize);
                assert!(euler_phi(w.order()) as usize <= 2 * d);
                assert!(class.stabilizer.is_subgroup());
                assert!(vanishes_at(&class.h, &w), "{w:?}");
                if w.order() > 2 {
                    assert!(is_weil_palindromic(&class.h, &q).unwrap());
                }
                let conj = WeilNumber::new(q.clone(), w.order(), -(w.exponent() as i64)).unwrap();
                assert_eq!(min_poly(&conj).h, class.h);
            }
        }
    }

    #[test]
    fn factored_stabilizer_matches_ring_comparison() {
        for p in [2, 3, 5, 7, 11] {
            let q = pp(p, 1);
            for w in all_numbers(&q, 8).into_iter().filter(|w| w.conductor() <= 200) {
                assert_eq!(stabilizer(&w), stabilizer_direct(&w), "{w:?}");
            }
        }
    }

    #[test]
    fn ring_expansion_with_shuffled_reps_agrees() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for (p, n) in [(2, 1), (3, 1), (5, 3), (7, 1)] {
            let q = pp(p, n);
            for w in all_numbers(&q, 8).into_iter().filter(|w| w.conductor() <= 120) {
                let class = min_poly(&w);
                let stab = class.stabilizer.members();
                let mut reps: Vec<u64> = class
                    .orbit
                    .iter()
                    .map(|&a| a * stab[rng.gen_range(0..stab.len())] % w.conductor())
                    .collect();
                reps.shuffle(&mut rng);
                assert_eq!(min_poly_from_reps(&w, &reps), class.h, "{w:?}");
            }
        }
    }

    #[test]
    fn value_squares_to_q_zeta() {
        for (p, n) in [(2, 3), (3, 1), (5, 1), (11, 3)] {
            let q = pp(p, n);
            for w in all_numbers(&q, 6) {
                let v = w.value().unwrap();
                let qi = q.q().to_i128().unwrap();
                let rhs = CycElem::zeta(w.conductor(), (2 * w.exponent() * (w.conductor() / w.order())) as i64)
                    .scale(qi);
                assert_eq!(&v * &v, rhs);
            }
        }
    }

    use rand::Rng;

    proptest! {
        #[test]
        fn normalization_round_trips(p in prop::sample::select(vec![2u64, 3, 5, 7, 11]), n in prop::sample::select(vec![1u32, 3, 5]),
                                     c in proptest::collection::vec(-50i64..50, 1..10)) {
            let q = pp(p, n);
            let mut c: Vec<BigInt> = c.into_iter().map(BigInt::from).collect();
            c[0] = BigInt::from(1);
            let h = denormalize(&c, &q);
            prop_assert_eq!(normalized_coefficients(&h, &q), Some(c));
        }
    }
}
