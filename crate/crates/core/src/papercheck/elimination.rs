//! Tools for ruling out integer roots of auxiliary polynomials `f(z, q)`:
//! the residue test mod 3 and 5, Eisenstein's criterion and a sieved
//! brute-force search.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::expr::{parse_and_expand, MultiPoly, Var};
use crate::{Error, IntPoly, PrimePower, Result};

const INVENTORY: &str = include_str!("../../data/eliminated.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mod35Verdict {
    ProvenNoRoot,
    Inconclusive,
}

impl fmt::Display for Mod35Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mod35Verdict::ProvenNoRoot => "proven-no-root",
            Mod35Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Residues of `q` mod 3 and mod 5 for which `q` is an odd power of a prime
/// other than 3 and 5 respectively.
const RESIDUE_CASES: [(i64, &[i64]); 2] = [(3, &[1, 2]), (5, &[1, 4])];

/// `f(z, q)` has no integer root `z` for any prime power `q = p^n`, `n` odd,
/// `p` not 3 or 5, provided `f` has no root mod 3 for `q = 1, 2` and no root
/// mod 5 for `q = 1, 4`.
pub fn mod35_no_integer_root(f: &MultiPoly) -> Result<Mod35Verdict> {
    f.require_vars(&[Var::Z, Var::Q])?;
    let dz = f.degree_in(Var::Z);
    if dz == 0 || !f.coefficient_of(Var::Z, dz).is_one() {
        return Err(Error::invalid("f must be monic of positive degree in z"));
    }
    for (m, qs) in RESIDUE_CASES {
        for &q in qs {
            if (0..m).any(|z| f.eval_mod([0, z, q, 0], m) == 0) {
                return Ok(Mod35Verdict::Inconclusive);
            }
        }
    }
    Ok(Mod35Verdict::ProvenNoRoot)
}

/// Eisenstein at `p` after clearing the content; a positive answer means `f`
/// is irreducible over `Q`.
pub fn eisenstein_irreducible(f: &IntPoly, p: u64) -> bool {
    let Some(n) = f.deg() else { return false };
    if n == 0 {
        return false;
    }
    let f = f.primitive();
    let p = BigInt::from(p);
    let c = f.coeffs();
    !c[n].is_multiple_of(&p)
        && c[..n].iter().all(|a| a.is_multiple_of(&p))
        && !c[0].is_multiple_of(&(&p * &p))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EliminationMethod {
    Mod35,
    /// Eisenstein at the given prime, for every field of another characteristic.
    Eisenstein(u64),
}

impl fmt::Display for EliminationMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EliminationMethod::Mod35 => f.write_str("mod35"),
            EliminationMethod::Eisenstein(p) => write!(f, "eisenstein:{p}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EliminatedPoly {
    pub label: String,
    pub source: String,
    pub poly: MultiPoly,
    pub method: EliminationMethod,
}

fn parse_entry(line: &str) -> Result<EliminatedPoly> {
    let fields: Vec<&str> = line.split('|').map(str::trim).collect();
    let [label, source, method] = fields[..] else {
        return Err(Error::Template(format!("expected 3 fields: {line}")));
    };
    let method = match method {
        "mod35" => EliminationMethod::Mod35,
        m => m
            .strip_prefix("eisenstein:")
            .and_then(|p| p.parse().ok())
            .map(EliminationMethod::Eisenstein)
            .ok_or_else(|| Error::Template(format!("bad method in {line}")))?,
    };
    let poly = parse_and_expand(source)?;
    poly.require_vars(&[Var::Z, Var::Q])?;
    Ok(EliminatedPoly {
        label: label.to_string(),
        source: source.to_string(),
        poly,
        method,
    })
}

pub fn parse_inventory(text: &str) -> Result<Vec<EliminatedPoly>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(parse_entry)
        .collect()
}

/// The built-in list of eliminated polynomials.
pub fn eliminated_inventory() -> &'static [EliminatedPoly] {
    static INV: OnceLock<Vec<EliminatedPoly>> = OnceLock::new();
    INV.get_or_init(|| parse_inventory(INVENTORY).expect("built-in inventory is well-formed"))
}

const SIEVE_PRIMES: [i64; 4] = [1009, 1013, 1019, 1021];

fn residues(f: &IntPoly, m: i64) -> Vec<i64> {
    let m_big = BigInt::from(m);
    f.coeffs()
        .iter()
        .map(|c| c.mod_floor(&m_big).to_i64().expect("small residue"))
        .collect()
}

fn horner_mod(res: &[i64], z: i64, m: i64) -> i64 {
    let z = z.rem_euclid(m);
    res.iter().rev().fold(0, |acc, &c| (acc * z + c) % m)
}

/// Every integer root of `f` with `|z| <= bound`, ascending.
pub fn integer_roots(f: &IntPoly, bound: u64) -> Result<Vec<i64>> {
    if f.is_zero() {
        return Err(Error::invalid("the zero polynomial has every root"));
    }
    let bound = i64::try_from(bound).map_err(|_| Error::invalid("bound too large"))?;
    let [m0, rest @ ..] = SIEVE_PRIMES;
    let r0 = residues(f, m0);
    let filters: Vec<(i64, Vec<i64>)> = rest.iter().map(|&m| (m, residues(f, m))).collect();
    let mut roots = Vec::new();
    for r in (0..m0).filter(|&r| horner_mod(&r0, r, m0) == 0) {
        let mut z = -bound + (r + bound).rem_euclid(m0);
        while z <= bound {
            if filters.iter().all(|(m, res)| horner_mod(res, z, *m) == 0)
                && f.eval(&BigInt::from(z)).is_zero()
            {
                roots.push(z);
            }
            z += m0;
        }
    }
    roots.sort_unstable();
    Ok(roots)
}

#[derive(Debug, Clone, Serialize)]
pub struct EliminationCheck {
    pub label: String,
    pub method: EliminationMethod,
    /// `None` for Eisenstein entries.
    pub mod35: Option<Mod35Verdict>,
    /// Fields where the Eisenstein test applied and failed.
    pub eisenstein_failures: Vec<PrimePower>,
    /// Integer roots found by brute force, as `(q, z)`.
    pub roots: Vec<(PrimePower, i64)>,
}

impl EliminationCheck {
    pub fn passed(&self) -> bool {
        self.mod35 != Some(Mod35Verdict::Inconclusive)
            && self.eisenstein_failures.is_empty()
            && self.roots.is_empty()
    }
}

/// Run the claimed method and a brute-force root search over `fields`.
pub fn check_entry(entry: &EliminatedPoly, fields: &[PrimePower], bound: u64) -> Result<EliminationCheck> {
    let mut check = EliminationCheck {
        label: entry.label.clone(),
        method: entry.method,
        mod35: None,
        eisenstein_failures: Vec::new(),
        roots: Vec::new(),
    };
    match entry.method {
        EliminationMethod::Mod35 => check.mod35 = Some(mod35_no_integer_root(&entry.poly)?),
        EliminationMethod::Eisenstein(ell) => {
            for q in fields.iter().filter(|q| q.p() != ell) {
                let f = specialize_q(&entry.poly, q);
                if !eisenstein_irreducible(&f, ell) {
                    check.eisenstein_failures.push(q.clone());
                }
            }
        }
    }
    for q in fields {
        let f = specialize_q(&entry.poly, q);
        for z in integer_roots(&f, bound)? {
            check.roots.push((q.clone(), z));
        }
    }
    Ok(check)
}

fn specialize_q(f: &MultiPoly, q: &PrimePower) -> IntPoly {
    let mut point: [BigInt; 4] = Default::default();
    point[2] = q.q().clone();
    f.specialize(Var::Z, &point)
}

/// `q` values used for the brute-force search.
pub fn default_search_fields() -> Vec<PrimePower> {
    [(2, 1), (3, 1), (5, 1), (7, 1), (2, 3), (11, 1), (13, 1), (3, 3), (2, 5)]
        .into_iter()
        .map(|(p, n)| PrimePower::new(p, n).expect("valid field"))
        .collect()
}
