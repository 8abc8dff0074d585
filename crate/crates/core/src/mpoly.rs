//! Sparse multivariate polynomials over GF(q).
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`], whose `Ord` is
//! degree-reverse-lexicographic with variable 0 the largest. Iterating a
//! polynomial in reverse therefore yields its terms in canonical (decreasing)
//! order, which is also the order used by the text format.
//!
//! Polynomials are kept in the plain polynomial ring; nothing is reduced
//! modulo the field equations `z^q - z`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::gf::{FieldError, FieldMatrix, PrimeField};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("expected {expected} variables, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("polynomials over different fields: GF({0}) and GF({1})")]
    FieldMismatch(u32, u32),
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("unknown variable `{name}` at byte {position}")]
    UnknownVariable { name: String, position: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// An exponent vector. Ordered by grevlex through `Ord`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Box<[u16]>,
    degree: u32,
}

impl Monomial {
    pub fn new(exps: Vec<u16>) -> Self {
        let degree = exps.iter().map(|&e| e as u32).sum();
        Self {
            exps: exps.into_boxed_slice(),
            degree,
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::new(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::new(e)
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exps: self.exps.iter().zip(other.exps.iter()).map(|(a, b)| a + b).collect(),
            degree: self.degree + other.degree,
        }
    }

    /// Variables with positive exponent, as `(index, exponent)`.
    pub fn support(&self) -> impl Iterator<Item = (usize, u16)> + '_ {
        self.exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        TermOrder::Grevlex.compare(self, other)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree-compatible term orders. Variable 0 is the largest variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TermOrder {
    #[default]
    Grevlex,
    Deglex,
}

impl TermOrder {
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match a.degree.cmp(&b.degree) {
            Ordering::Equal => {}
            o => return o,
        }
        match self {
            TermOrder::Grevlex => {
                for (x, y) in a.exps.iter().zip(b.exps.iter()).rev() {
                    if x != y {
                        // smaller exponent in the last differing variable wins
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }
            TermOrder::Deglex => a.exps.cmp(&b.exps),
        }
    }
}

/// All monomials in `n` variables of degree at most `d`, strictly decreasing
/// in `order`.
pub fn monomials_up_to(n: usize, d: u32, order: TermOrder) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u16; n];
    fn rec(i: usize, left: u32, exps: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if i == exps.len() {
            out.push(Monomial::new(exps.clone()));
            return;
        }
        for e in 0..=left {
            exps[i] = e as u16;
            rec(i + 1, left - e, exps, out);
        }
        exps[i] = 0;
    }
    rec(0, d, &mut exps, &mut out);
    out.sort_by(|a, b| order.compare(b, a));
    out
}

/// All monomials of degree exactly `d`, strictly decreasing in `order`.
pub fn monomials_of_degree(n: usize, d: u32, order: TermOrder) -> Vec<Monomial> {
    monomials_up_to(n, d, order)
        .into_iter()
        .filter(|m| m.degree() == d)
        .collect()
}

/// An ordered list of monomials indexing matrix columns, with conversions
/// between polynomials and coefficient rows.
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    columns: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialBasis {
    pub fn new(columns: Vec<Monomial>) -> Self {
        let index = columns.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        Self { columns, index }
    }

    /// Monomials of degree at most `d`, decreasing in `order`.
    pub fn up_to(n: usize, d: u32, order: TermOrder) -> Self {
        Self::new(monomials_up_to(n, d, order))
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn columns(&self) -> &[Monomial] {
        &self.columns
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Coefficient row of `p`, or `None` if `p` has a monomial outside the basis.
    pub fn row_of(&self, p: &Polynomial) -> Option<Vec<u32>> {
        let mut row = vec![0u32; self.columns.len()];
        for (m, c) in p.terms() {
            row[self.position(m)?] = c;
        }
        Some(row)
    }

    pub fn polynomial_of(&self, field: PrimeField, nvars: usize, row: &[u32]) -> Polynomial {
        Polynomial::from_terms(
            field,
            nvars,
            row.iter()
                .zip(&self.columns)
                .filter(|(&c, _)| c != 0)
                .map(|(&c, m)| (m.clone(), c)),
        )
    }

    /// Row of `mu * f` given the row of `f`, or `None` if a product leaves the basis.
    pub fn shifted_row(&self, row: &[u32], mu: &Monomial) -> Option<Vec<u32>> {
        let mut out = vec![0u32; self.columns.len()];
        for (j, &c) in row.iter().enumerate() {
            if c != 0 {
                out[self.position(&self.columns[j].mul(mu))?] = c;
            }
        }
        Some(out)
    }
}

/// Names for the variables of a polynomial ring, used by the text format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarNames {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl VarNames {
    pub fn new(names: Vec<String>) -> Self {
        let index = names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        Self { names, index }
    }

    /// `prefix1 .. prefix{count}`.
    pub fn indexed(prefix: &str, count: usize) -> Self {
        Self::new((1..=count).map(|i| format!("{prefix}{i}")).collect())
    }

    /// Scheme side: `x1..xt, y1..y(n-t)`.
    pub fn scheme(n: usize, t: usize) -> Self {
        let mut names: Vec<String> = (1..=t).map(|i| format!("x{i}")).collect();
        names.extend((1..=n - t).map(|i| format!("y{i}")));
        Self::new(names)
    }

    /// Public input side: `z1..zn`.
    pub fn inputs(n: usize) -> Self {
        Self::indexed("z", n)
    }

    /// Input/output relations: `w1..wm, z1..zn`, outputs first.
    pub fn relation(n: usize, m: usize) -> Self {
        let mut names: Vec<String> = (1..=m).map(|i| format!("w{i}")).collect();
        names.extend((1..=n).map(|i| format!("z{i}")));
        Self::new(names)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    field: PrimeField,
    nvars: usize,
    terms: BTreeMap<Monomial, u32>,
}

impl Polynomial {
    pub fn zero(field: PrimeField, nvars: usize) -> Self {
        Self {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: PrimeField, nvars: usize, c: u32) -> Self {
        Self::monomial(field, Monomial::one(nvars), c)
    }

    pub fn var(field: PrimeField, nvars: usize, i: usize) -> Self {
        Self::monomial(field, Monomial::var(nvars, i), 1)
    }

    pub fn monomial(field: PrimeField, mon: Monomial, c: u32) -> Self {
        let mut p = Self::zero(field, mon.nvars());
        p.add_term(mon, c);
        p
    }

    /// Builds a polynomial from `(monomial, coefficient)` pairs; repeated
    /// monomials are summed.
    pub fn from_terms<I>(field: PrimeField, nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, u32)>,
    {
        let mut p = Self::zero(field, nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Dense random polynomial of degree at most `max_degree`, every
    /// coefficient uniform in GF(q).
    pub fn random<R: Rng + ?Sized>(field: PrimeField, nvars: usize, max_degree: u32, rng: &mut R) -> Self {
        let mons = monomials_up_to(nvars, max_degree, TermOrder::Grevlex);
        Self::from_terms(field, nvars, mons.into_iter().map(|m| (m, field.random(rng))))
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Adds `c * mon` in place.
    pub fn add_term(&mut self, mon: Monomial, c: u32) {
        debug_assert_eq!(mon.nvars(), self.nvars);
        let c = c % self.field.modulus();
        if c == 0 {
            return;
        }
        let f = self.field;
        match self.terms.entry(mon) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = f.add(*e.get(), c);
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn coeff(&self, mon: &Monomial) -> u32 {
        self.terms.get(mon).copied().unwrap_or(0)
    }

    pub fn constant_term(&self) -> u32 {
        self.coeff(&Monomial::one(self.nvars))
    }

    /// Terms in decreasing grevlex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u32)> + '_ {
        self.terms.iter().rev().map(|(m, &c)| (m, c))
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn leading_monomial(&self, order: TermOrder) -> Option<&Monomial> {
        match order {
            TermOrder::Grevlex => self.terms.keys().next_back(),
            _ => self.terms.keys().max_by(|a, b| order.compare(a, b)),
        }
    }

    pub fn homogeneous_component(&self, d: u32) -> Polynomial {
        Polynomial {
            field: self.field,
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, &c)| (m.clone(), c))
                .collect(),
        }
    }

    fn check_compatible(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.field != other.field {
            return Err(PolyError::FieldMismatch(self.field.modulus(), other.field.modulus()));
        }
        if self.nvars != other.nvars {
            return Err(PolyError::ArityMismatch {
                expected: self.nvars,
                got: other.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), self.field.neg(c));
        }
        Ok(out)
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(self.field.modulus() - 1)
    }

    pub fn scale(&self, c: u32) -> Polynomial {
        let c = c % self.field.modulus();
        if c == 0 {
            return Polynomial::zero(self.field, self.nvars);
        }
        Polynomial {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, &v)| (m.clone(), self.field.mul(v, c))).collect(),
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Polynomial, c: u32) -> Result<(), PolyError> {
        self.check_compatible(other)?;
        let c = c % self.field.modulus();
        if c == 0 {
            return Ok(());
        }
        for (m, &v) in &other.terms {
            self.add_term(m.clone(), self.field.mul(v, c));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_compatible(other)?;
        let f = self.field;
        let mut acc: HashMap<Monomial, u32> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                let e = acc.entry(ma.mul(mb)).or_insert(0);
                *e = f.add(*e, f.mul(ca, cb));
            }
        }
        Ok(Polynomial {
            field: f,
            nvars: self.nvars,
            terms: acc.into_iter().filter(|&(_, c)| c != 0).collect(),
        })
    }

    pub fn mul_monomial(&self, mon: &Monomial) -> Polynomial {
        Polynomial {
            field: self.field,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, &c)| (m.mul(mon), c)).collect(),
        }
    }

    pub fn evaluate(&self, point: &[u32]) -> Result<u32, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::ArityMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let f = self.field;
        let max_e = self
            .terms
            .keys()
            .flat_map(|m| m.exps.iter().copied())
            .max()
            .unwrap_or(0) as usize;
        // powers[i][e] = point[i]^e
        let powers: Vec<Vec<u32>> = point
            .iter()
            .map(|&x| {
                let x = x % f.modulus();
                let mut row = Vec::with_capacity(max_e + 1);
                let mut acc = 1;
                for _ in 0..=max_e {
                    row.push(acc);
                    acc = f.mul(acc, x);
                }
                row
            })
            .collect();
        let mut sum = 0u32;
        for (m, &c) in &self.terms {
            let mut v = c;
            for (i, e) in m.support() {
                v = f.mul(v, powers[i][e as usize]);
                if v == 0 {
                    break;
                }
            }
            sum = f.add(sum, v);
        }
        Ok(sum)
    }

    /// Replaces variable `i` by `images[i]`. All images must share one ring.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Polynomial, PolyError> {
        if images.len() != self.nvars {
            return Err(PolyError::ArityMismatch {
                expected: self.nvars,
                got: images.len(),
            });
        }
        let Some(first) = images.first() else {
            return Ok(self.clone());
        };
        for img in images {
            if img.field != self.field {
                return Err(PolyError::FieldMismatch(self.field.modulus(), img.field.modulus()));
            }
            first.check_compatible(img)?;
        }
        let target = first.nvars;
        let mut memo: HashMap<Monomial, Polynomial> = HashMap::new();
        let mut out = Polynomial::zero(self.field, target);
        for (m, &c) in &self.terms {
            let value = monomial_image(m, images, &mut memo)?;
            out.add_scaled(&value, c)?;
        }
        Ok(out)
    }

    /// Fixes the variables with `Some(value)` and returns a polynomial in the
    /// remaining variables, renumbered in their original relative order.
    pub fn specialize(&self, assignment: &[Option<u32>]) -> Result<Polynomial, PolyError> {
        if assignment.len() != self.nvars {
            return Err(PolyError::ArityMismatch {
                expected: self.nvars,
                got: assignment.len(),
            });
        }
        let f = self.field;
        let free: Vec<usize> = (0..self.nvars).filter(|&i| assignment[i].is_none()).collect();
        let mut out = Polynomial::zero(f, free.len());
        for (m, &c) in &self.terms {
            let mut v = c;
            for (i, e) in m.support() {
                if let Some(x) = assignment[i] {
                    v = f.mul(v, f.pow(x, e as u64));
                }
            }
            if v == 0 {
                continue;
            }
            let exps = free.iter().map(|&i| m.exps[i]).collect();
            out.add_term(Monomial::new(exps), v);
        }
        Ok(out)
    }

    /// Moves the polynomial into a ring with `nvars` variables, sending
    /// variable `i` to `offset + i`.
    pub fn embed(&self, nvars: usize, offset: usize) -> Polynomial {
        assert!(offset + self.nvars <= nvars, "embedding does not fit");
        let terms = self.terms.iter().map(|(m, &c)| {
            let mut exps = vec![0u16; nvars];
            exps[offset..offset + self.nvars].copy_from_slice(&m.exps);
            (Monomial::new(exps), c)
        });
        Polynomial::from_terms(self.field, nvars, terms)
    }

    /// For a polynomial of degree at most one, its linear coefficients and
    /// constant term.
    pub fn affine_parts(&self) -> Option<(Vec<u32>, u32)> {
        if self.degree().unwrap_or(0) > 1 {
            return None;
        }
        let mut lin = vec![0u32; self.nvars];
        for (m, &c) in &self.terms {
            if let Some((i, _)) = m.support().next() {
                lin[i] = c;
            }
        }
        Some((lin, self.constant_term()))
    }

    pub fn render(&self, names: &VarNames) -> String {
        assert_eq!(names.len(), self.nvars, "variable names do not match the ring");
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::with_capacity(self.terms.len());
        for (m, c) in self.terms() {
            let mut factors: Vec<String> = Vec::new();
            if c != 1 || m.is_one() {
                factors.push(c.to_string());
            }
            for (i, e) in m.support() {
                if e == 1 {
                    factors.push(names.name(i).to_string());
                } else {
                    factors.push(format!("{}^{}", names.name(i), e));
                }
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }

    pub fn parse(text: &str, field: PrimeField, names: &VarNames) -> Result<Polynomial, PolyError> {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            field,
            names,
        }
        .polynomial()
    }
}

fn monomial_image(
    m: &Monomial,
    images: &[Polynomial],
    memo: &mut HashMap<Monomial, Polynomial>,
) -> Result<Polynomial, PolyError> {
    if let Some(p) = memo.get(m) {
        return Ok(p.clone());
    }
    let value = match m.support().last() {
        None => Polynomial::constant(images[0].field, images[0].nvars, 1),
        Some((i, _)) => {
            let mut exps = m.exps.to_vec();
            exps[i] -= 1;
            let rest = monomial_image(&Monomial::new(exps), images, memo)?;
            rest.mul(&images[i])?
        }
    };
    memo.insert(m.clone(), value.clone());
    Ok(value)
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Renders with `z1..zn`.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&VarNames::inputs(self.nvars)))
    }
}

// poly   := term ('+' term)*
// term   := factor ('*' factor)*
// factor := number | name ('^' number)?
struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    field: PrimeField,
    names: &'a VarNames,
}

impl Parser<'_> {
    fn err(&self, message: impl Into<String>) -> PolyError {
        PolyError::Parse {
            position: self.pos,
            message: message.into(),
        }
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

    fn number(&mut self) -> Result<u64, PolyError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        digits.parse::<u64>().map_err(|_| PolyError::Parse {
            position: start,
            message: format!("number `{digits}` out of range"),
        })
    }

    fn polynomial(mut self) -> Result<Polynomial, PolyError> {
        let nvars = self.names.len();
        let mut p = Polynomial::zero(self.field, nvars);
        loop {
            let (m, c) = self.term()?;
            p.add_term(m, c);
            match self.peek() {
                None => return Ok(p),
                Some(b'+') => self.pos += 1,
                Some(ch) => return Err(self.err(format!("expected `+` or end of input, found `{}`", ch as char))),
            }
        }
    }

    fn term(&mut self) -> Result<(Monomial, u32), PolyError> {
        let q = self.field.modulus();
        let mut exps = vec![0u16; self.names.len()];
        let mut coeff = 1u32;
        loop {
            match self.peek() {
                Some(ch) if ch.is_ascii_digit() => {
                    let start = self.pos;
                    let v = self.number()?;
                    if v >= q as u64 {
                        return Err(PolyError::Parse {
                            position: start,
                            message: format!("coefficient {v} not in [0, {q})"),
                        });
                    }
                    coeff = self.field.mul(coeff, v as u32);
                }
                Some(ch) if ch.is_ascii_alphabetic() => {
                    let start = self.pos;
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                        self.pos += 1;
                    }
                    let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii name");
                    let idx = self.names.lookup(name).ok_or_else(|| PolyError::UnknownVariable {
                        name: name.to_string(),
                        position: start,
                    })?;
                    let mut e = 1u64;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        match self.peek() {
                            Some(ch) if ch.is_ascii_digit() => e = self.number()?,
                            _ => return Err(self.err("expected exponent after `^`")),
                        }
                    }
                    let total = exps[idx] as u64 + e;
                    exps[idx] = u16::try_from(total).map_err(|_| self.err("exponent too large"))?;
                }
                Some(ch) => return Err(self.err(format!("unexpected `{}`", ch as char))),
                None => return Err(self.err("unexpected end of input")),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok((Monomial::new(exps), coeff));
            }
        }
    }
}

/// Affine bijection `z -> L z + c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMap {
    linear: FieldMatrix,
    translation: Vec<u32>,
}

impl AffineMap {
    pub fn new(linear: FieldMatrix, translation: Vec<u32>) -> Result<Self, FieldError> {
        if linear.rows() != linear.cols() {
            return Err(FieldError::DimensionMismatch {
                expected: linear.rows(),
                got: linear.cols(),
            });
        }
        if translation.len() != linear.rows() {
            return Err(FieldError::DimensionMismatch {
                expected: linear.rows(),
                got: translation.len(),
            });
        }
        if !linear.is_invertible() {
            return Err(FieldError::Singular);
        }
        let q = linear.field().modulus();
        let translation = translation.into_iter().map(|v| v % q).collect();
        Ok(Self { linear, translation })
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        Self {
            linear: FieldMatrix::identity(field, n),
            translation: vec![0; n],
        }
    }

    pub fn random<R: Rng + ?Sized>(field: PrimeField, n: usize, rng: &mut R) -> Self {
        let linear = FieldMatrix::random_invertible(field, n, rng);
        let translation = field.random_vector(n, rng);
        Self { linear, translation }
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn field(&self) -> PrimeField {
        self.linear.field()
    }

    pub fn linear(&self) -> &FieldMatrix {
        &self.linear
    }

    pub fn translation(&self) -> &[u32] {
        &self.translation
    }

    pub fn apply(&self, z: &[u32]) -> Result<Vec<u32>, FieldError> {
        let f = self.field();
        let lz = self.linear.mul_vec(z)?;
        Ok(lz.iter().zip(&self.translation).map(|(&a, &c)| f.add(a, c)).collect())
    }

    pub fn inverse(&self) -> AffineMap {
        let f = self.field();
        let inv = self.linear.inverse().expect("affine map is bijective");
        let shifted = inv.mul_vec(&self.translation).expect("square");
        AffineMap {
            linear: inv,
            translation: shifted.into_iter().map(|v| f.neg(v)).collect(),
        }
    }

    /// Output coordinate `i` as a polynomial of degree at most one.
    pub fn component_polynomials(&self) -> Vec<Polynomial> {
        let f = self.field();
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut p = Polynomial::constant(f, n, self.translation[i]);
                for j in 0..n {
                    p.add_term(Monomial::var(n, j), self.linear.get(i, j));
                }
                p
            })
            .collect()
    }
}

/// `p ∘ A`, i.e. the polynomial `z -> p(A(z))`.
pub fn compose_affine(p: &Polynomial, a: &AffineMap) -> Result<Polynomial, PolyError> {
    if a.dim() != p.nvars() {
        return Err(PolyError::ArityMismatch {
            expected: p.nvars(),
            got: a.dim(),
        });
    }
    p.substitute(&a.component_polynomials())
}

/// `A ∘ (p_1, .., p_k)`: output `i` is `sum_j L[i][j] p_j + c_i`.
pub fn apply_affine_to_system(a: &AffineMap, system: &[Polynomial]) -> Result<Vec<Polynomial>, PolyError> {
    if a.dim() != system.len() {
        return Err(PolyError::ArityMismatch {
            expected: a.dim(),
            got: system.len(),
        });
    }
    let Some(first) = system.first() else {
        return Ok(Vec::new());
    };
    let (f, n) = (first.field(), first.nvars());
    (0..a.dim())
        .map(|i| {
            let mut out = Polynomial::constant(f, n, a.translation()[i]);
            for (j, p) in system.iter().enumerate() {
                out.add_scaled(p, a.linear().get(i, j))?;
            }
            Ok(out)
        })
        .collect()
}
