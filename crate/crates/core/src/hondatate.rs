//! Local invariants at `p`, the multiplicity `e` and the dimension `g` of the
//! simple abelian variety attached to a supersingular Weil class.
//!
//! Every root of `h` has `p`-adic valuation `n/2`, so the invariant at a place
//! over `p` is `d/2 mod 1` with `d` the common local degree. Places away from
//! `p` contribute nothing, and the real places of `Q(sqrt q)` (only when
//! `pi = +-sqrt(q)`) contribute `1/2`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::numtheory::{euler_phi, units};
use crate::weil::{UnitSubgroup, WeilClass, WeilNumber};
use crate::{IntPoly, PrimePower};

/// `D_p = {a : a mod M' is a power of p}` where `M'` is the prime-to-`p` part
/// of `M`: inertia is the kernel of reduction mod `M'`, Frobenius is `p mod M'`.
pub fn decomposition_subgroup(m: u64, p: u64) -> UnitSubgroup {
    let mut m_prime = m;
    while m_prime.is_multiple_of(p) {
        m_prime /= p;
    }
    let mut powers = BTreeSet::new();
    let mut x = 1 % m_prime;
    while powers.insert(x) {
        x = x * (p % m_prime) % m_prime;
    }
    UnitSubgroup::from_members(
        m,
        units(m)
            .into_iter()
            .filter(|a| powers.contains(&(a % m_prime))),
    )
}

/// `(d, r)` with `d = [D : D cap H]` and `r = [G : DH]`.
pub fn local_degree(h: &UnitSubgroup, d: &UnitSubgroup) -> (u64, u64) {
    assert_eq!(h.modulus(), d.modulus(), "subgroups of different groups");
    let inter = h.intersection_len(d);
    let local = d.len() / inter;
    let product = d.len() * h.len() / inter;
    let group = euler_phi(h.modulus()) as usize;
    assert_eq!(group % product, 0, "DH does not divide the group order");
    (local as u64, (group / product) as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LocalSplitting {
    /// Local degree of `Q(pi)` at each place over `p`.
    pub d: u64,
    /// Number of places over `p`.
    pub r: u64,
    pub inv_order: u32,
    pub has_real_place: bool,
}

impl LocalSplitting {
    pub fn new(d: u64, r: u64, has_real_place: bool) -> Self {
        LocalSplitting {
            d,
            r,
            inv_order: if d % 2 == 1 { 2 } else { 1 },
            has_real_place,
        }
    }
}

pub fn local_splitting(w: &WeilNumber, stab: &UnitSubgroup) -> LocalSplitting {
    let dp = decomposition_subgroup(w.conductor(), w.q().p());
    let (d, r) = local_degree(stab, &dp);
    LocalSplitting::new(d, r, w.order() <= 2)
}

/// A local invariant in `Q/Z`; only `0` and `1/2` occur here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Invariant {
    Zero,
    Half,
}

impl Invariant {
    pub fn order(self) -> u32 {
        match self {
            Invariant::Zero => 1,
            Invariant::Half => 2,
        }
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Invariant::Zero => "0",
            Invariant::Half => "1/2",
        })
    }
}

/// The invariant `d/2 mod 1` at `p` and `e`, the lcm of all invariant orders.
pub fn invariant_and_e(split: &LocalSplitting) -> (Invariant, u32) {
    let inv = if split.d % 2 == 1 {
        Invariant::Half
    } else {
        Invariant::Zero
    };
    let e = if inv == Invariant::Half || split.has_real_place {
        2
    } else {
        1
    };
    (inv, e)
}

/// A simple supersingular isogeny class with `P = h^e` of degree `2g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsogenyClass {
    pub h: IntPoly,
    pub e: u32,
    pub g: u32,
    pub weil_poly: IntPoly,
    pub order: u64,
    pub exponent: u64,
    pub conductor: u64,
    pub local: LocalSplitting,
}

/// `(splitting, e, g)` from the Galois data alone, without expanding `h`.
pub fn predicted_dimension(w: &WeilNumber, stab: &UnitSubgroup) -> (LocalSplitting, u32, u32) {
    let split = local_splitting(w, stab);
    let (_, e) = invariant_and_e(&split);
    let deg = (split.d * split.r) as u32;
    assert_eq!((e * deg) % 2, 0, "odd e * deg h");
    (split, e, e * deg / 2)
}

pub fn dimension(class: &WeilClass, q: &PrimePower) -> IsogenyClass {
    let w = &class.number;
    assert_eq!(w.q(), q, "class computed over a different field");
    let (local, e, g) = predicted_dimension(w, &class.stabilizer);
    let deg = class.h.deg().expect("nonzero h") as u64;
    assert_eq!(local.d * local.r, deg, "r * d differs from deg h");
    IsogenyClass {
        weil_poly: class.h.pow(e),
        h: class.h.clone(),
        e,
        g,
        order: w.order(),
        exponent: w.exponent(),
        conductor: w.conductor(),
        local,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::{mult_order, phi_at_most};
    use crate::weil::{min_poly, stabilizer};

    fn pp(p: u64, n: u32) -> PrimePower {
        PrimePower::new(p, n).unwrap()
    }

    #[test]
    fn decomposition_examples() {
        assert_eq!(decomposition_subgroup(12, 3), UnitSubgroup::whole(12));
        assert_eq!(decomposition_subgroup(8, 2), UnitSubgroup::whole(8));
        assert_eq!(decomposition_subgroup(5, 7), UnitSubgroup::whole(5));
        // 2 has order 3 mod 7, so D_2 in (Z/56)^* has index 2
        let d = decomposition_subgroup(56, 2);
        assert_eq!(d.len() * 2, euler_phi(56) as usize);
        assert!(d.is_subgroup());
    }

    #[test]
    fn local_degree_examples() {
        let h = UnitSubgroup::from_members(12, [1, 7]);
        assert_eq!(local_degree(&h, &decomposition_subgroup(12, 3)), (2, 1));

        let w = WeilNumber::new(pp(13, 1), 1, 0).unwrap();
        let s = local_splitting(&w, &stabilizer(&w));
        assert_eq!((s.d, s.r), (2, 1));
        assert!(s.has_real_place);

        // the p = 2 octic lives at M = 40
        let w = WeilNumber::new(pp(2, 1), 5, 1).unwrap();
        assert_eq!(w.conductor(), 40);
        let s = local_splitting(&w, &stabilizer(&w));
        assert_eq!((s.d, s.r), (8, 1));
    }

    #[test]
    fn invariant_examples() {
        assert_eq!(
            invariant_and_e(&LocalSplitting::new(2, 1, false)),
            (Invariant::Zero, 1)
        );
        assert_eq!(
            invariant_and_e(&LocalSplitting::new(1, 2, false)),
            (Invariant::Half, 2)
        );
        assert_eq!(invariant_and_e(&LocalSplitting::new(2, 1, true)).1, 2);
        assert_eq!(Invariant::Half.to_string(), "1/2");
    }

    #[test]
    fn dimension_examples() {
        for p in [2, 3, 5, 7, 11, 13] {
            let q = pp(p, 1);
            let w = WeilNumber::new(q.clone(), 4, 1).unwrap();
            let c = dimension(&min_poly(&w), &q);
            assert_eq!(c.h, IntPoly::from_i64(&[p as i64, 0, 1]));
            assert_eq!((c.g, c.e), (1, 1));

            let w = WeilNumber::new(q.clone(), 1, 0).unwrap();
            let c = dimension(&min_poly(&w), &q);
            assert_eq!((c.g, c.e), (2, 2));
            assert_eq!(c.weil_poly, IntPoly::from_i64(&[-(p as i64), 0, 1]).pow(2));
        }
        // X^8 + q^4 at p = 17 comes from zeta_16
        let q = pp(17, 1);
        let w = WeilNumber::new(q.clone(), 16, 1).unwrap();
        let c = dimension(&min_poly(&w), &q);
        let mut x8 = vec![0i64; 9];
        x8[0] = 17i64.pow(4);
        x8[8] = 1;
        assert_eq!(c.h, IntPoly::from_i64(&x8));
        assert_eq!((c.g, c.e, c.local.d, c.local.r), (4, 1, 2, 4));
    }

    #[test]
    fn class_properties_and_n_independence() {
        for p in [2, 3, 5, 7, 11, 13, 17, 19] {
            let (q1, q3) = (pp(p, 1), pp(p, 3));
            for l in phi_at_most(16) {
                for k in units(l) {
                    let w1 = WeilNumber::new(q1.clone(), l, k as i64).unwrap();
                    let w3 = WeilNumber::new(q3.clone(), l, k as i64).unwrap();
                    let (s1, e1, g1) = predicted_dimension(&w1, &stabilizer(&w1));
                    let (s3, e3, g3) = predicted_dimension(&w3, &stabilizer(&w3));
                    assert_eq!((s1, e1, g1), (s3, e3, g3));
                    let (inv, e) = invariant_and_e(&s1);
                    assert!(inv.order() <= 2);
                    assert_eq!(e, e1);
                    // d is even away from the real classes
                    if l > 2 {
                        assert_eq!(s1.d % 2, 0, "p={p} L={l} k={k}");
                        assert_eq!(e1, 1);
                    }
                }
            }
        }
    }

    /// For `h(X) = Phi_m0`-type classes the number of places over `p` is the
    /// number of `Q_p`-factors of `Phi_m0`, namely `phi(m0) / ord_m0(p)`.
    #[test]
    fn place_count_matches_cyclotomic_splitting() {
        for m0 in [5u64, 8, 10, 12, 9, 14, 18] {
            for p in [2u64, 3, 5, 7, 11, 13, 17, 19] {
                if m0 % p == 0 {
                    continue;
                }
                let q = pp(p, 1);
                let expected = euler_phi(m0) / mult_order(p as i64, m0).unwrap();
                // X^(deg) classes: pi^2 = q * zeta with zeta of order m0
                let l = if m0 % 2 == 0 { 2 * m0 } else { m0 };
                let w = WeilNumber::new(q.clone(), l, 1).unwrap();
                let stab = stabilizer(&w);
                let s = local_splitting(&w, &stab);
                let deg = s.d * s.r;
                // Q(pi) contains Q(zeta_m0) with index deg / phi(m0)
                let ratio = deg / euler_phi(m0);
                assert!(ratio == 1 || ratio == 2, "m0={m0} p={p}");
                let sub = local_splitting_of_subfield(&w, m0);
                assert_eq!(sub, expected, "m0={m0} p={p}");
                assert!(s.r == sub || s.r == 2 * sub, "m0={m0} p={p} r={}", s.r);
            }
        }
    }

    /// Places over `p` of `Q(zeta_m0)` computed inside `(Z/M)^*` as `[G : D K]`
    /// with `K` the kernel of reduction mod `m0`.
    fn local_splitting_of_subfield(w: &WeilNumber, m0: u64) -> u64 {
        let m = w.conductor();
        let kernel = UnitSubgroup::from_members(m, units(m).into_iter().filter(|a| a % m0 == 1 % m0));
        let (_, r) = local_degree(&kernel, &decomposition_subgroup(m, w.q().p()));
        r
    }
}
