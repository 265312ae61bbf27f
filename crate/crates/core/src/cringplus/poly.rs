//! Sparse multivariate integer polynomials.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exponent vector, one entry per variable.
pub type Monomial = Vec<u32>;

/// An element of `ℤ[x_1, …, x_k]`. No zero coefficient is ever stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Poly::monomial(vec![0; nvars])
    }

    pub fn monomial(exps: Monomial) -> Self {
        Poly::term(exps, BigInt::one())
    }

    pub fn term(exps: Monomial, coeff: BigInt) -> Self {
        let mut p = Poly::zero(exps.len());
        if !coeff.is_zero() {
            p.terms.insert(exps, coeff);
        }
        p
    }

    /// Builds from `(exponents, coefficient)` pairs, summing repeats.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Result<Self> {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            if m.len() != nvars {
                return Err(Error::TypeMismatch(format!(
                    "monomial with {} exponents in a ring with {nvars} variables",
                    m.len()
                )));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &[u32]) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars, "adding polynomials over different rings");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        let mut out = Poly::zero(self.nvars);
        if !c.is_zero() {
            for (m, d) in &self.terms {
                out.terms.insert(m.clone(), d * c);
            }
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars, "multiplying polynomials over different rings");
        let mut out = Poly::zero(self.nvars);
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                let m = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(m, c * d);
            }
        }
        out
    }

    /// `p ⊗ q` in the ring on the disjoint union of the variables.
    pub fn outer(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars + other.nvars);
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                let mut m = a.clone();
                m.extend_from_slice(b);
                out.terms.insert(m, c * d);
            }
        }
        out
    }

    /// Extends a monomial rule additively: `Σ c_m m ↦ Σ c_m rule(m)`.
    pub fn apply_additive(&self, target_vars: usize, rule: impl Fn(&[u32]) -> Poly) -> Poly {
        let mut out = Poly::zero(target_vars);
        for (m, c) in &self.terms {
            let image = rule(m);
            assert_eq!(image.nvars, target_vars, "rule produced a polynomial over the wrong ring");
            for (k, d) in image.terms {
                out.add_term(k, d * c);
            }
        }
        out
    }

    /// Renders with the given variable names, highest monomials first.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        PolyDisplay { p: self, names }
    }

    /// Parses `2*s*t^3 - t + 1`-style input. Juxtaposition and `*` both
    /// multiply; a bare integer is a constant.
    pub fn parse(src: &str, names: &[String]) -> Result<Poly> {
        Parser {
            src: src.as_bytes(),
            pos: 0,
            names,
        }
        .poly()
    }
}

struct PolyDisplay<'a> {
    p: &'a Poly,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.p.terms.iter().rev().enumerate() {
            let constant = m.iter().all(|&e| e == 0);
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            if constant || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            let mut first = constant || !mag.is_one();
            for (v, &e) in m.iter().enumerate().filter(|(_, &e)| e > 0) {
                if first {
                    f.write_str("*")?;
                }
                first = true;
                let name = self.names.get(v).map(String::as_str).unwrap_or("?");
                if e == 1 {
                    f.write_str(name)?;
                } else {
                    write!(f, "{name}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        let shown = format!("{}", self.display_with(&names));
        f.write_str(&shown)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [String],
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::InvalidMorphism(format!("polynomial parse error at byte {}: {msg}", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn number(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| {
            let digits = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
            digits.parse().expect("digits parse")
        })
    }

    fn ident(&mut self) -> Option<&str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            if self.pos == start && self.src[self.pos].is_ascii_digit() {
                break;
            }
            self.pos += 1;
        }
        (self.pos > start).then(|| core::str::from_utf8(&self.src[start..self.pos]).expect("ascii"))
    }

    fn poly(&mut self) -> Result<Poly> {
        let n = self.names.len();
        let mut acc = Poly::zero(n);
        let mut sign = BigInt::one();
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                sign = -sign;
            }
            Some(b'+') => self.pos += 1,
            None => return Err(self.err("empty polynomial")),
            _ => {}
        }
        loop {
            let (m, c) = self.term()?;
            acc.add_term(m, c * &sign);
            match self.peek() {
                None => return Ok(acc),
                Some(b'+') => sign = BigInt::one(),
                Some(b'-') => sign = -BigInt::one(),
                Some(_) => return Err(self.err("expected '+' or '-'")),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<(Monomial, BigInt)> {
        let mut coeff = BigInt::one();
        let mut exps = vec![0u32; self.names.len()];
        let mut factors = 0;
        loop {
            match self.peek() {
                Some(b'*') if factors > 0 => {
                    self.pos += 1;
                    continue;
                }
                Some(c) if c.is_ascii_digit() => {
                    coeff *= self.number().expect("digit present");
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let name = String::from(self.ident().expect("letter present"));
                    let v = self
                        .names
                        .iter()
                        .position(|n| *n == name)
                        .ok_or_else(|| Error::UnknownLabel(format!("variable {name}")))?;
                    let mut e = 1;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        let n = self.number().ok_or_else(|| self.err("expected exponent"))?;
                        e = u32::try_from(n).map_err(|_| self.err("exponent too large"))?;
                    }
                    exps[v] += e;
                }
                _ if factors == 0 => return Err(self.err("expected a term")),
                _ => return Ok((exps, coeff)),
            }
            factors += 1;
        }
    }
}
