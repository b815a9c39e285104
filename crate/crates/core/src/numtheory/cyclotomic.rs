use std::collections::BTreeMap;

use super::{divisors, euler_phi, IntPoly};
use crate::{Error, Result};

/// The `m`-th cyclotomic polynomial, by exact division of `x^m - 1` by
/// `Phi_d` for every proper divisor `d` of `m`.
pub fn cyclotomic(m: u64) -> IntPoly {
    assert!(m >= 1, "cyclotomic index must be positive");
    let mut table: BTreeMap<u64, IntPoly> = BTreeMap::new();
    for d in divisors(m) {
        let mut f = IntPoly::x_pow_minus_one(d as usize);
        for (e, phi_e) in &table {
            if d % e == 0 {
                f = f.div_exact(phi_e).expect("Phi_e divides x^d - 1");
            }
        }
        table.insert(d, f);
    }
    table.remove(&m).expect("m divides itself")
}

/// Multiset `{m_i}` with `f = prod Phi_{m_i}`, by trial division in ascending
/// `m` over every `m` with `phi(m) <= deg f`.
pub fn cyclotomic_decompose(f: &IntPoly) -> Result<Vec<u64>> {
    if f.is_zero() || !f.is_monic() {
        return Err(Error::invalid("expected a monic nonzero polynomial"));
    }
    let mut rest = f.clone();
    let mut out = Vec::new();
    let n = f.deg().unwrap_or(0) as u64;
    for m in 1..=(2 * n * n).max(1) {
        let deg = rest.deg().unwrap_or(0) as u64;
        if deg == 0 {
            break;
        }
        let phi = euler_phi(m);
        if phi > deg {
            continue;
        }
        let c = cyclotomic(m);
        while let Some(q) = rest.div_exact(&c) {
            out.push(m);
            rest = q;
        }
    }
    if rest.is_one() {
        Ok(out)
    } else {
        Err(Error::NotCyclotomicProduct)
    }
}
