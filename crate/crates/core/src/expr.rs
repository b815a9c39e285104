//! Integer polynomial expressions over the variables `x`, `z`, `q`, `a`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := base ('^' uint)?
//! base   := var | uint | '(' expr ')'
//! ```
//!
//! Whitespace is ignored. There is no unary minus and no implicit
//! multiplication.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, IntPoly, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X,
    Z,
    Q,
    A,
}

impl Var {
    const ALL: [Var; 4] = [Var::X, Var::Z, Var::Q, Var::A];

    fn index(self) -> usize {
        self as usize
    }

    fn from_char(c: char) -> Option<Var> {
        match c {
            'x' => Some(Var::X),
            'z' => Some(Var::Z),
            'q' => Some(Var::Q),
            'a' => Some(Var::A),
            _ => None,
        }
    }

    pub fn name(self) -> char {
        match self {
            Var::X => 'x',
            Var::Z => 'z',
            Var::Q => 'q',
            Var::A => 'a',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyExpr {
    Var(Var),
    Int(BigInt),
    Add(Box<PolyExpr>, Box<PolyExpr>),
    Sub(Box<PolyExpr>, Box<PolyExpr>),
    Mul(Box<PolyExpr>, Box<PolyExpr>),
    Pow(Box<PolyExpr>, u32),
}

impl fmt::Display for PolyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyExpr::Var(v) => write!(f, "{}", v.name()),
            PolyExpr::Int(n) => write!(f, "{n}"),
            PolyExpr::Add(l, r) => write!(f, "({l} + {r})"),
            PolyExpr::Sub(l, r) => write!(f, "({l} - {r})"),
            PolyExpr::Mul(l, r) => write!(f, "({l} * {r})"),
            PolyExpr::Pow(b, e) if matches!(**b, PolyExpr::Pow(..)) => write!(f, "({b})^{e}"),
            PolyExpr::Pow(b, e) => write!(f, "{b}^{e}"),
        }
    }
}

/// Degree cap for expansion; larger inputs are refused.
const MAX_DEGREE: u64 = 4096;

struct Parser<'s> {
    src: &'s str,
    pos: usize,
}

impl<'s> Parser<'s> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T> {
        Err(Error::Syntax {
            offset: self.pos,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn expr(&mut self) -> Result<PolyExpr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    lhs = PolyExpr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some('-') => {
                    self.pos += 1;
                    lhs = PolyExpr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<PolyExpr> {
        let mut lhs = self.factor()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            lhs = PolyExpr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<PolyExpr> {
        let base = self.base()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let digits = self.digits();
        if digits.is_empty() {
            return self.fail(&["integer"]);
        }
        match digits.parse::<u32>() {
            Ok(e) => {
                self.pos += digits.len();
                Ok(PolyExpr::Pow(Box::new(base), e))
            }
            Err(_) => self.fail(&["exponent below 2^32"]),
        }
    }

    fn digits(&self) -> &'s str {
        let rest = &self.src[self.pos..];
        let end = rest
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(rest.len());
        &rest[..end]
    }

    fn base(&mut self) -> Result<PolyExpr> {
        const EXPECTED: [&str; 3] = ["variable", "integer", "("];
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return self.fail(&["+", "-", "*", "^", ")"]);
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.digits();
                self.pos += digits.len();
                Ok(PolyExpr::Int(digits.parse().expect("decimal digits")))
            }
            Some(c) => match Var::from_char(c) {
                Some(v) => {
                    self.pos += 1;
                    Ok(PolyExpr::Var(v))
                }
                None => self.fail(&EXPECTED),
            },
            None => self.fail(&EXPECTED),
        }
    }
}

pub fn parse_poly_expr(s: &str) -> Result<PolyExpr> {
    let mut p = Parser { src: s, pos: 0 };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.fail(&["+", "-", "*", "^", "end of input"]);
    }
    Ok(e)
}

/// Expanded polynomial in `x, z, q, a` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiPoly {
    terms: BTreeMap<[u32; 4], BigInt>,
}

impl MultiPoly {
    fn constant(c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0; 4], c);
        }
        MultiPoly { terms }
    }

    fn var(v: Var) -> Self {
        let mut e = [0; 4];
        e[v.index()] = 1;
        MultiPoly {
            terms: BTreeMap::from([(e, BigInt::one())]),
        }
    }

    fn add_term(&mut self, e: [u32; 4], c: BigInt) {
        let slot = self.terms.entry(e).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    fn add(&self, other: &MultiPoly, sign: i32) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, if sign < 0 { -c } else { c.clone() });
        }
        out
    }

    fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::default();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = [e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3]];
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn total_degree(&self) -> u64 {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&d| d as u64).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|e| e[v.index()]).max().unwrap_or(0)
    }

    pub fn uses(&self, v: Var) -> bool {
        self.degree_in(v) > 0
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 4], &BigInt)> {
        self.terms.iter()
    }

    /// Fails unless every variable that occurs is in `allowed`.
    pub fn require_vars(&self, allowed: &[Var]) -> Result<()> {
        for v in Var::ALL {
            if self.uses(v) && !allowed.contains(&v) {
                return Err(Error::invalid(format!("variable '{}' is not allowed here", v.name())));
            }
        }
        Ok(())
    }

    /// Value at an integer point, ordered `[x, z, q, a]`.
    pub fn eval(&self, point: &[BigInt; 4]) -> BigInt {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = c.clone();
                for (v, &d) in point.iter().zip(e) {
                    t *= num_traits::pow(v.clone(), d as usize);
                }
                t
            })
            .sum()
    }

    /// Value modulo `m` at a point of small residues.
    pub fn eval_mod(&self, point: [i64; 4], m: i64) -> i64 {
        let mut acc = 0i64;
        for (e, c) in &self.terms {
            let mut t = (c % BigInt::from(m)).to_i64().expect("residue");
            for (v, &d) in point.iter().zip(e) {
                for _ in 0..d {
                    t = t * v.rem_euclid(m) % m;
                }
            }
            acc = (acc + t).rem_euclid(m);
        }
        acc
    }

    /// Substitute integer values for every variable but `v`; the result is a
    /// univariate polynomial in `v`.
    pub fn specialize(&self, v: Var, point: &[BigInt; 4]) -> IntPoly {
        let mut coeffs = vec![BigInt::zero(); self.degree_in(v) as usize + 1];
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, (val, &d)) in point.iter().zip(e).enumerate() {
                if i != v.index() {
                    t *= num_traits::pow(val.clone(), d as usize);
                }
            }
            coeffs[e[v.index()] as usize] += t;
        }
        IntPoly::new(coeffs)
    }

    /// Coefficient of `v^k` as a polynomial in the remaining variables.
    pub fn coefficient_of(&self, v: Var, k: u32) -> MultiPoly {
        let mut out = MultiPoly::default();
        for (e, c) in &self.terms {
            if e[v.index()] == k {
                let mut e2 = *e;
                e2[v.index()] = 0;
                out.add_term(e2, c.clone());
            }
        }
        out
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&[0; 4]).is_some_and(One::is_one)
    }
}

impl PolyExpr {
    /// Expand into a sum of monomials; refused past a degree cap.
    pub fn expand(&self) -> Result<MultiPoly> {
        let out = match self {
            PolyExpr::Var(v) => MultiPoly::var(*v),
            PolyExpr::Int(n) => MultiPoly::constant(n.clone()),
            PolyExpr::Add(l, r) => l.expand()?.add(&r.expand()?, 1),
            PolyExpr::Sub(l, r) => l.expand()?.add(&r.expand()?, -1),
            PolyExpr::Mul(l, r) => {
                let (l, r) = (l.expand()?, r.expand()?);
                check_degree(l.total_degree() + r.total_degree())?;
                l.mul(&r)
            }
            PolyExpr::Pow(b, e) => {
                let b = b.expand()?;
                check_degree(b.total_degree() * *e as u64)?;
                let mut acc = MultiPoly::constant(BigInt::one());
                for _ in 0..*e {
                    acc = acc.mul(&b);
                }
                acc
            }
        };
        Ok(out)
    }
}

fn check_degree(d: u64) -> Result<()> {
    if d > MAX_DEGREE {
        Err(Error::Refused(format!(
            "expression degree {d} exceeds the cap of {MAX_DEGREE}"
        )))
    } else {
        Ok(())
    }
}

/// Parse and expand in one step.
pub fn parse_and_expand(s: &str) -> Result<MultiPoly> {
    parse_poly_expr(s)?.expand()
}
