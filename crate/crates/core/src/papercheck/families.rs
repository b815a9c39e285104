//! Closed-form family tables, stored as data in `data/families.txt`.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::numtheory::{exact_sqrt, is_weil_palindromic};
use crate::{Error, IntPoly, PrimePower, Result};

const TABLE: &str = include_str!("../../data/families.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeCondition {
    Any,
    Equal(u64),
    NotEqual(u64),
}

impl PrimeCondition {
    pub fn holds(self, p: u64) -> bool {
        match self {
            PrimeCondition::Any => true,
            PrimeCondition::Equal(c) => p == c,
            PrimeCondition::NotEqual(c) => p != c,
        }
    }
}

impl fmt::Display for PrimeCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeCondition::Any => f.write_str("any"),
            PrimeCondition::Equal(c) => write!(f, "p={c}"),
            PrimeCondition::NotEqual(c) => write!(f, "p!={c}"),
        }
    }
}

impl FromStr for PrimeCondition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Template(format!("bad prime condition '{s}'"));
        if s == "any" {
            Ok(PrimeCondition::Any)
        } else if let Some(c) = s.strip_prefix("p!=") {
            c.parse().map(PrimeCondition::NotEqual).map_err(|_| bad())
        } else if let Some(c) = s.strip_prefix("p=") {
            c.parse().map(PrimeCondition::Equal).map_err(|_| bad())
        } else {
            Err(bad())
        }
    }
}

/// `P = sum a_i X^(2g-i)` with `a_i = c_i q^(i/2) s^(i mod 2)`,
/// `s = sqrt(radicand * q)`, completed by the functional equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyTemplate {
    pub label: String,
    pub g: u32,
    pub condition: PrimeCondition,
    pub radicand: Option<u64>,
    /// `c_0, ..., c_g`.
    pub pattern: Vec<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instantiation {
    Inapplicable,
    /// One polynomial, or two when the odd terms carry a sign.
    Polys(Vec<IntPoly>),
}

impl FamilyTemplate {
    pub fn parse_line(line: &str) -> Result<Self> {
        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        let [label, g, cond, radicand, pattern] = fields[..] else {
            return Err(Error::Template(format!("expected 5 fields: {line}")));
        };
        let g: u32 = g
            .parse()
            .map_err(|_| Error::Template(format!("bad dimension in {line}")))?;
        let radicand = match radicand {
            "-" => None,
            r => Some(
                r.parse()
                    .map_err(|_| Error::Template(format!("bad radicand in {line}")))?,
            ),
        };
        let pattern: Vec<BigInt> = pattern
            .split(',')
            .map(|c| c.trim().parse())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Template(format!("bad pattern in {line}")))?;
        if pattern.len() != g as usize + 1 || !pattern[0].is_one() {
            return Err(Error::Template(format!("pattern must be 1,c_1..c_g in {line}")));
        }
        let has_odd = pattern.iter().skip(1).step_by(2).any(|c| !c.is_zero());
        if has_odd && radicand.is_none() {
            return Err(Error::Template(format!("odd terms without radicand in {line}")));
        }
        Ok(FamilyTemplate {
            label: label.to_string(),
            g,
            condition: cond.parse()?,
            radicand,
            pattern,
        })
    }

    /// `c_0, ..., c_2g`, symmetric about `g`.
    pub fn full_pattern(&self) -> Vec<BigInt> {
        let g = self.g as usize;
        (0..=2 * g)
            .map(|i| self.pattern[i.min(2 * g - i)].clone())
            .collect()
    }

    fn has_odd_terms(&self) -> bool {
        self.pattern.iter().skip(1).step_by(2).any(|c| !c.is_zero())
    }

    pub fn instantiate(&self, q: &PrimePower) -> Result<Instantiation> {
        if !self.condition.holds(q.p()) {
            return Ok(Instantiation::Inapplicable);
        }
        let s = match self.radicand {
            Some(r) => exact_sqrt(&(q.q() * r)).ok_or_else(|| {
                Error::Template(format!("{}: sqrt({r}*{q}) is not an integer", self.label))
            })?,
            None => BigInt::zero(),
        };
        let signs: &[i32] = if self.has_odd_terms() { &[1, -1] } else { &[1] };
        let full = self.full_pattern();
        let d = full.len() - 1;
        let mut polys = Vec::new();
        for &sign in signs {
            let mut coeffs = vec![BigInt::zero(); d + 1];
            for (i, c) in full.iter().enumerate() {
                let mut a = c * q.q_pow((i / 2) as u32);
                if i % 2 == 1 {
                    a *= &s * sign;
                }
                coeffs[d - i] = a;
            }
            let p = IntPoly::new(coeffs);
            if !is_weil_palindromic(&p, q)? {
                return Err(Error::Template(format!("{} is not q-palindromic", self.label)));
            }
            polys.push(p);
        }
        Ok(Instantiation::Polys(polys))
    }
}

pub fn instantiate(t: &FamilyTemplate, q: &PrimePower) -> Result<Instantiation> {
    t.instantiate(q)
}

pub fn parse_templates(text: &str) -> Result<Vec<FamilyTemplate>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(FamilyTemplate::parse_line)
        .collect()
}

/// The built-in table.
pub fn family_templates() -> &'static [FamilyTemplate] {
    static TEMPLATES: OnceLock<Vec<FamilyTemplate>> = OnceLock::new();
    TEMPLATES.get_or_init(|| parse_templates(TABLE).expect("built-in family table is well-formed"))
}

pub fn templates_for(g: u32) -> impl Iterator<Item = &'static FamilyTemplate> {
    family_templates().iter().filter(move |t| t.g == g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(p: u64, n: u32) -> PrimePower {
        PrimePower::new(p, n).unwrap()
    }

    fn find(label: &str) -> &'static FamilyTemplate {
        family_templates().iter().find(|t| t.label == label).unwrap()
    }

    #[test]
    fn table_loads() {
        let t = family_templates();
        assert_eq!(t.len(), 29);
        for g in 1..=6 {
            assert!(templates_for(g).count() > 0);
        }
        assert_eq!(templates_for(7).count(), 0);
    }

    #[test]
    fn instantiate_examples() {
        assert_eq!(
            find("dim1/1").instantiate(&pp(2, 3)).unwrap(),
            Instantiation::Polys(vec![
                IntPoly::from_i64(&[8, 4, 1]),
                IntPoly::from_i64(&[8, -4, 1])
            ])
        );
        assert_eq!(
            find("dim2/1").instantiate(&pp(3, 1)).unwrap(),
            Instantiation::Inapplicable
        );
        assert_eq!(
            find("dim3/1").instantiate(&pp(3, 1)).unwrap(),
            Instantiation::Polys(vec![
                IntPoly::from_i64(&[27, 0, 0, 9, 0, 0, 1]),
                IntPoly::from_i64(&[27, 0, 0, -9, 0, 0, 1])
            ])
        );
    }

    #[test]
    fn every_applicable_instance_is_palindromic_of_degree_2g() {
        for t in family_templates() {
            for p in [2, 3, 5, 7, 11, 13] {
                for n in [1, 3] {
                    let q = pp(p, n);
                    if let Instantiation::Polys(ps) = t.instantiate(&q).unwrap() {
                        for poly in ps {
                            assert_eq!(poly.deg(), Some(2 * t.g as usize));
                            assert!(is_weil_palindromic(&poly, &q).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn malformed_templates_are_rejected() {
        assert!(FamilyTemplate::parse_line("x | 1 | any | - | 1,1").is_err());
        assert!(FamilyTemplate::parse_line("x | 2 | any | - | 1,0").is_err());
        assert!(FamilyTemplate::parse_line("x | 1 | p<3 | - | 1,0").is_err());
        // prime condition holds but sqrt(3q) is irrational at p = 2
        let t = FamilyTemplate::parse_line("x | 1 | p=2 | 3 | 1,1").unwrap();
        assert!(matches!(t.instantiate(&pp(2, 1)), Err(Error::Template(_))));
    }
}
