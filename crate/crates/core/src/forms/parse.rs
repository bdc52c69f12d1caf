//! Text syntax for forms.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer ('/' integer)? | variable | '(' expr ')'
//! variable := 'X' | 'Y' | 'Z' | 'X' digits
//! ```
//!
//! `X`, `Y`, `Z` are aliases for `X0`, `X1`, `X2`. Whitespace is ignored.
//! The parsed polynomial must be homogeneous. The printer emits exactly
//! this syntax, so every nonzero form round-trips.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::HomogeneousForm;
use crate::error::{Error, Result};

/// Sparse polynomial keyed by `(variable index, exponent)` lists.
type Poly = BTreeMap<Vec<(usize, u32)>, BigRational>;

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

fn normalize_key(mut k: Vec<(usize, u32)>) -> Vec<(usize, u32)> {
    k.sort();
    let mut out: Vec<(usize, u32)> = Vec::new();
    for (v, e) in k {
        match out.last_mut() {
            Some(last) if last.0 == v => last.1 += e,
            _ => out.push((v, e)),
        }
    }
    out.retain(|&(_, e)| e > 0);
    out
}

fn poly_add(mut a: Poly, b: Poly, sign: i32) -> Poly {
    for (k, c) in b {
        let c = if sign < 0 { -c } else { c };
        let slot = a.entry(k.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            a.remove(&k);
        }
    }
    a
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ka, ca) in a {
        for (kb, cb) in b {
            let k = normalize_key(ka.iter().chain(kb).copied().collect());
            let slot = out.entry(k.clone()).or_insert_with(BigRational::zero);
            *slot += ca * cb;
            if slot.is_zero() {
                out.remove(&k);
            }
        }
    }
    out
}

fn constant(c: BigRational) -> Poly {
    let mut p = Poly::new();
    if !c.is_zero() {
        p.insert(Vec::new(), c);
    }
    p
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            chars: src.chars().filter(|c| !c.is_whitespace()).collect(),
            pos: 0,
            src,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn err(&self, what: &str) -> Error {
        Error::parse(format!("{what} at offset {} in {:?}", self.pos, self.src))
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = poly_add(acc, self.term()?, 1);
            } else if self.eat('-') {
                acc = poly_add(acc, self.term()?, -1);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            acc = poly_mul(&acc, &self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.eat('-') {
            let p = self.unary()?;
            return Ok(poly_add(Poly::new(), p, -1));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.eat('^') {
            let e: u32 = self
                .digits()
                .ok_or_else(|| self.err("expected exponent"))?
                .parse()
                .map_err(|_| self.err("exponent too large"))?;
            let mut acc = constant(BigRational::one());
            for _ in 0..e {
                acc = poly_mul(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let p = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(p)
            }
            Some(c) if c.is_ascii_digit() => {
                let n: BigInt = self.digits().unwrap().parse().unwrap();
                let d = if self.eat('/') {
                    let d: BigInt = self
                        .digits()
                        .ok_or_else(|| self.err("expected denominator"))?
                        .parse()
                        .unwrap();
                    if d.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    d
                } else {
                    BigInt::one()
                };
                Ok(constant(BigRational::new(n, d)))
            }
            Some(c @ ('X' | 'Y' | 'Z' | 'x' | 'y' | 'z')) => {
                self.pos += 1;
                let idx = match c.to_ascii_uppercase() {
                    'X' => match self.digits() {
                        Some(d) => d.parse().map_err(|_| self.err("bad variable index"))?,
                        None => 0,
                    },
                    'Y' => 1,
                    _ => 2,
                };
                let mut p = Poly::new();
                p.insert(vec![(idx, 1)], BigRational::one());
                Ok(p)
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

fn max_var(p: &Poly) -> Option<usize> {
    p.keys().flat_map(|k| k.iter().map(|&(v, _)| v)).max()
}

fn to_form(p: &Poly, n_vars: usize) -> Result<HomogeneousForm<BigRational>> {
    let mut degree = None;
    let mut terms = Vec::new();
    for (k, c) in p {
        let mut e = vec![0u32; n_vars];
        for &(v, x) in k {
            if v >= n_vars {
                return Err(Error::parse(format!(
                    "variable X{v} out of range for {n_vars} variables"
                )));
            }
            e[v] = x;
        }
        let d: u32 = e.iter().sum();
        match degree {
            None => degree = Some(d),
            Some(d0) if d0 != d => {
                return Err(Error::parse("form is not homogeneous"));
            }
            _ => {}
        }
        terms.push((e, c.clone()));
    }
    let degree = degree.ok_or_else(|| Error::parse("the zero form has no degree"))?;
    HomogeneousForm::from_terms(n_vars, degree, terms)
}

fn parse_poly(s: &str) -> Result<Poly> {
    let mut parser = Parser::new(s);
    let p = parser.expr()?;
    if parser.pos != parser.chars.len() {
        return Err(parser.err("trailing input"));
    }
    Ok(p)
}

/// Parse one form. Without an explicit variable count, uses the largest
/// variable index seen (at least two variables).
pub fn parse_form(s: &str, n_vars: Option<usize>) -> Result<HomogeneousForm<BigRational>> {
    let p = parse_poly(s)?;
    let n = n_vars.unwrap_or_else(|| max_var(&p).map_or(2, |v| (v + 1).max(2)));
    to_form(&p, n)
}

/// Parse `n+1` semicolon-separated forms as a system in `n+1` variables.
pub fn parse_forms(s: &str) -> Result<Vec<HomogeneousForm<BigRational>>> {
    let parts: Vec<&str> = s.split(';').map(str::trim).collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::parse("empty form in list"));
    }
    let n = parts.len();
    parts.iter().map(|p| parse_form(p, Some(n))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_and_prints() {
        let f = parse_form("X^2 + 6*Y^2", None).unwrap();
        assert_eq!(f.to_string(), "X^2 + 6*Y^2");
        let g = parse_form("(x+y)^2 - 2*x*y", None).unwrap();
        assert_eq!(g.to_string(), "X^2 + Y^2");
        let h = parse_form("X0*X3 - 1/2*X1^2", None).unwrap();
        assert_eq!(h.n_vars(), 4);
        assert_eq!(h.to_string(), "X0*X3 - 1/2*X1^2");
        let z = parse_form("-Z", None).unwrap();
        assert_eq!(z.n_vars(), 3);
        assert_eq!(z.to_string(), "-Z");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_form("X^2 + Y", None), Err(Error::Parse(_))));
        assert!(matches!(parse_form("X +", None), Err(Error::Parse(_))));
        assert!(matches!(parse_form("X - X", None), Err(Error::Parse(_))));
        assert!(matches!(parse_form("X*Z", Some(2)), Err(Error::Parse(_))));
        assert!(matches!(parse_form("1/0*X", None), Err(Error::Parse(_))));
        assert!(matches!(parse_forms("X^2;"), Err(Error::Parse(_))));
    }

    #[test]
    fn morphism_lists() {
        let fs = parse_forms("X^2+6*Y^2; X*Y").unwrap();
        assert_eq!(fs.len(), 2);
        assert!(fs.iter().all(|f| f.n_vars() == 2 && f.degree() == 2));
        let fs = parse_forms("X^2; Y^2; Z^2").unwrap();
        assert_eq!(fs[2].n_vars(), 3);
    }

    fn arb_form() -> impl Strategy<Value = HomogeneousForm<BigRational>> {
        (1usize..4, 0u32..4).prop_flat_map(|(n, d)| {
            let n_vars = n + 1;
            let mons = super::super::monomials_of_degree(n_vars, d);
            let k = mons.len();
            prop::collection::vec((-20i64..20, 1i64..5), k).prop_map(move |cs| {
                let terms = mons
                    .iter()
                    .cloned()
                    .zip(cs)
                    .map(|(m, (a, b))| (m, BigRational::new(a.into(), b.into())));
                HomogeneousForm::from_terms(n_vars, d, terms).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(f in arb_form()) {
            prop_assume!(!f.is_zero());
            let back = parse_form(&f.to_string(), Some(f.n_vars())).unwrap();
            prop_assert_eq!(back, f);
        }
    }
}
