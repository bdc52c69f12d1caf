//! Homogeneous forms in `n+1` variables with exact coefficients.

mod parse;
mod resultant;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{rational_from_int, Scalar, Zp};

pub use parse::{parse_form, parse_forms};
pub use resultant::{
    all_monomials as monomials_of_degree, int_sylvester_resultant, macaulay_matrix_rank_test, macaulay_resultant, sylvester_matrix,
    sylvester_resultant, MacaulayResultant,
};

/// Exponent vector `(j_0, …, j_n)`.
pub type Monomial = Vec<u32>;

/// A homogeneous form `Σ a_j X^j`. Zero coefficients are never stored.
///
/// Monomials are ordered lexicographically on their exponent vectors, so
/// the *leading* term is the one with the largest power of `X0`, then `X1`,
/// and so on.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HomogeneousForm<T> {
    n_vars: usize,
    degree: u32,
    coeffs: BTreeMap<Monomial, T>,
}

impl<T: Scalar> HomogeneousForm<T> {
    pub fn zero(n_vars: usize, degree: u32) -> Self {
        HomogeneousForm {
            n_vars,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(n_vars: usize, c: T) -> Self {
        let mut f = Self::zero(n_vars, 0);
        f.add_term(vec![0; n_vars], c);
        f
    }

    /// The coordinate form `X_i`.
    pub fn var(n_vars: usize, i: usize) -> Self {
        assert!(i < n_vars, "variable index out of range");
        let mut e = vec![0; n_vars];
        e[i] = 1;
        let mut f = Self::zero(n_vars, 1);
        f.add_term(e, T::one());
        f
    }

    pub fn from_terms(
        n_vars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Monomial, T)>,
    ) -> Result<Self> {
        let mut f = Self::zero(n_vars, degree);
        for (e, c) in terms {
            Error::check_dim(n_vars, e.len())?;
            if e.iter().sum::<u32>() != degree {
                return Err(Error::domain(format!(
                    "monomial {e:?} does not have degree {degree}"
                )));
            }
            f.add_term(e, c);
        }
        Ok(f)
    }

    /// A linear form with the given coefficient vector.
    pub fn linear(coeffs: &[T]) -> Self {
        let n = coeffs.len();
        let mut f = Self::zero(n, 1);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            f.add_term(e, c.clone());
        }
        f
    }

    fn add_term(&mut self, e: Monomial, c: T) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &T)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> T {
        self.coeffs.get(e).cloned().unwrap_or_else(T::zero)
    }

    /// Leading term under the lexicographic order.
    pub fn leading(&self) -> Option<(&Monomial, &T)> {
        self.coeffs.iter().next_back()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn map_coeffs<U: Scalar>(&self, f: impl Fn(&T) -> U) -> HomogeneousForm<U> {
        let mut out = HomogeneousForm::zero(self.n_vars, self.degree);
        for (e, c) in &self.coeffs {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    fn check_shape(&self, other: &Self) {
        assert_eq!(self.n_vars, other.n_vars, "forms in different numbers of variables");
        assert!(
            self.degree == other.degree || self.is_zero() || other.is_zero(),
            "adding forms of different degrees"
        );
    }

    /// Sum of two forms.
    ///
    /// Panics when the variable counts or (nonzero) degrees differ.
    pub fn add(&self, other: &Self) -> Self {
        self.check_shape(other);
        let mut out = if self.is_zero() { other.clone() } else { self.clone() };
        if !self.is_zero() {
            for (e, c) in &other.coeffs {
                out.add_term(e.clone(), c.clone());
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| -c.clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &T) -> Self {
        self.map_coeffs(|c| c.clone() * k.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n_vars, other.n_vars, "forms in different numbers of variables");
        let mut out = Self::zero(self.n_vars, self.degree + other.degree);
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &other.coeffs {
                let e: Monomial = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.n_vars, T::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn evaluate(&self, x: &[T]) -> Result<T> {
        Error::check_dim(self.n_vars, x.len())?;
        Ok(self.coeffs.iter().fold(T::zero(), |acc, (e, c)| {
            let m = e
                .iter()
                .zip(x)
                .fold(c.clone(), |m, (&k, xi)| m * xi.pow(k));
            acc + m
        }))
    }

    /// `F(G_0, …, G_n)` for forms `G_i` of a common degree.
    pub fn substitute(&self, g: &[HomogeneousForm<T>]) -> Result<Self> {
        Error::check_dim(self.n_vars, g.len())?;
        let Some(first) = g.first() else {
            return Ok(self.clone());
        };
        let (m, e) = (first.n_vars, first.degree);
        if g.iter().any(|gi| gi.n_vars != m || (gi.degree != e && !gi.is_zero())) {
            return Err(Error::domain("substituted forms must share degree and variables"));
        }
        // cache powers G_i^k
        let mut powers: Vec<Vec<HomogeneousForm<T>>> = g
            .iter()
            .map(|gi| vec![HomogeneousForm::constant(m, T::one()), gi.clone()])
            .collect();
        let mut out = HomogeneousForm::zero(m, self.degree * e);
        for (exps, c) in &self.coeffs {
            let mut term = HomogeneousForm::constant(m, c.clone());
            for (i, &k) in exps.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul(&g[i]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][k as usize]);
            }
            out = out.add(&term);
        }
        out.degree = self.degree * e;
        Ok(out)
    }

    /// `F(A·X)`: substitute `X_i ↦ Σ_j A_ij X_j`.
    pub fn linear_substitute(&self, a: &[Vec<T>]) -> Result<Self> {
        let rows: Vec<HomogeneousForm<T>> = a.iter().map(|r| HomogeneousForm::linear(r)).collect();
        self.substitute(&rows)
    }

    /// Permute variables: the result has `X_{perm[i]}` where `self` has `X_i`.
    pub fn permute_vars(&self, perm: &[usize]) -> Self {
        let mut out = Self::zero(self.n_vars, self.degree);
        for (e, c) in &self.coeffs {
            let mut ne = vec![0; self.n_vars];
            for (i, &k) in e.iter().enumerate() {
                ne[perm[i]] = k;
            }
            out.add_term(ne, c.clone());
        }
        out
    }

    /// `∂F/∂X_i`.
    pub fn partial(&self, i: usize) -> Self {
        assert!(i < self.n_vars, "variable index out of range");
        let mut out = Self::zero(self.n_vars, self.degree.saturating_sub(1));
        for (e, c) in &self.coeffs {
            if e[i] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[i] -= 1;
            out.add_term(ne, c.clone() * T::from_int(&BigInt::from(e[i])));
        }
        out
    }

    /// Coefficients `a_d, a_{d-1}, …, a_0` of a binary form, `a_j` on `X^j Y^(d-j)`.
    pub fn binary_coeffs_desc(&self) -> Result<Vec<T>> {
        if self.n_vars != 2 {
            return Err(Error::domain("not a binary form"));
        }
        let d = self.degree;
        Ok((0..=d).rev().map(|j| self.coeff(&[j, d - j])).collect())
    }

    /// `F(x, 1)` as ascending coefficients.
    pub fn dehomogenize_binary(&self) -> Result<Vec<T>> {
        let mut c = self.binary_coeffs_desc()?;
        c.reverse();
        Ok(c)
    }
}

/// Forms with integer coefficients.
impl HomogeneousForm<BigInt> {
    pub fn content(&self) -> BigInt {
        self.coeffs.values().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn to_rational(&self) -> HomogeneousForm<BigRational> {
        self.map_coeffs(rational_from_int)
    }

    pub fn reduce_mod(&self, p: u64) -> HomogeneousForm<Zp> {
        self.map_coeffs(|c| Zp::from_bigint(c, p))
    }

    pub fn exact_div(&self, k: &BigInt) -> Self {
        HomogeneousForm {
            n_vars: self.n_vars,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(e, c)| (e.clone(), c / k)).collect(),
        }
    }
}

impl HomogeneousForm<BigRational> {
    /// Integer form if every coefficient is integral.
    pub fn to_integer(&self) -> Option<HomogeneousForm<BigInt>> {
        self.coeffs
            .values()
            .all(|c| c.is_integer())
            .then(|| self.map_coeffs(|c| c.to_integer()))
    }
}

/// Write `F = c·G` with `G` integral, primitive, and with positive leading
/// coefficient.
pub fn content_normalize(
    f: &HomogeneousForm<BigRational>,
) -> Result<(HomogeneousForm<BigInt>, BigRational)> {
    let Some((_, lead)) = f.leading() else {
        return Err(Error::domain("cannot normalize the zero form"));
    };
    let den = f.coeffs.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let num = f
        .coeffs
        .values()
        .fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()));
    let mut c = BigRational::new(num, den);
    if lead.is_negative() {
        c = -c;
    }
    let g = f.map_coeffs(|a| (a / &c).to_integer());
    Ok((g, c))
}

/// A nonzero linear form `Σ p_i X_i`, identified with the point `(p_0 : … : p_n)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    coeffs: Vec<BigInt>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.iter().all(Zero::is_zero) {
            return Err(Error::domain("the zero linear form"));
        }
        Ok(LinearForm { coeffs })
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn n_vars(&self) -> usize {
        self.coeffs.len()
    }

    /// Primitive representative with first nonzero coefficient positive.
    pub fn normalized(&self) -> LinearForm {
        let g = self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let first_neg = self.coeffs.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative());
        let g = if first_neg { -g } else { g };
        LinearForm {
            coeffs: self.coeffs.iter().map(|c| c / &g).collect(),
        }
    }

    pub fn to_form(&self) -> HomogeneousForm<BigInt> {
        HomogeneousForm::linear(&self.coeffs)
    }
}

/// Signed rendering of a coefficient for the text printer.
pub trait CoeffFmt {
    /// Returns (is_negative, absolute value as text).
    fn split_sign(&self) -> (bool, String);
}

impl CoeffFmt for BigInt {
    fn split_sign(&self) -> (bool, String) {
        (self.is_negative(), self.abs().to_string())
    }
}

impl CoeffFmt for BigRational {
    fn split_sign(&self) -> (bool, String) {
        (self.is_negative(), self.abs().to_string())
    }
}

impl CoeffFmt for Zp {
    fn split_sign(&self) -> (bool, String) {
        (false, self.value().to_string())
    }
}

pub(crate) fn var_name(n_vars: usize, i: usize) -> String {
    if n_vars <= 3 {
        ["X", "Y", "Z"][i].to_string()
    } else {
        format!("X{i}")
    }
}

impl<T: Scalar + CoeffFmt> fmt::Display for HomogeneousForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.coeffs.iter().rev().enumerate() {
            let (neg, abs) = c.split_sign();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(|(i, &p)| {
                    let v = var_name(self.n_vars, i);
                    if p == 1 {
                        v
                    } else {
                        format!("{v}^{p}")
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{abs}")?;
            } else if abs == "1" {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{abs}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<T: Scalar + CoeffFmt> fmt::Debug for HomogeneousForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}; n_vars={}, deg={}]", self, self.n_vars, self.degree)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Form;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn form(s: &str) -> Form {
        parse_form(s, None).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(form("X^2 + 6*Y^2").evaluate(&[q(1, 1), q(1, 1)]).unwrap(), q(7, 1));
        assert_eq!(form("X*Y").evaluate(&[q(3, 1), q(0, 1)]).unwrap(), q(0, 1));
        assert_eq!(form("X^2*Y + X*Y^2").evaluate(&[q(2, 1), q(3, 1)]).unwrap(), q(30, 1));
        assert!(matches!(
            form("X*Y").evaluate(&[q(1, 1)]),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn content_normalize_examples() {
        let (g, c) = content_normalize(&form("4*X^2 + 6*Y^2")).unwrap();
        assert_eq!(g.to_string(), "2*X^2 + 3*Y^2");
        assert_eq!(c, q(2, 1));
        let (g, c) = content_normalize(&form("1/2*X*Y")).unwrap();
        assert_eq!(g.to_string(), "X*Y");
        assert_eq!(c, q(1, 2));
        let (g, c) = content_normalize(&form("-3*X^2 + 6*X*Y - 9*Y^2")).unwrap();
        assert_eq!(g.to_string(), "X^2 - 2*X*Y + 3*Y^2");
        assert_eq!(c, q(-3, 1));
        assert!(content_normalize(&Form::zero(2, 2)).is_err());
    }

    #[test]
    fn content_normalize_is_idempotent() {
        let (g, _) = content_normalize(&form("-4/3*X^2*Z + 2/9*Y^3 - 8*X*Y*Z")).unwrap();
        let (g2, c2) = content_normalize(&g.to_rational()).unwrap();
        assert_eq!(g, g2);
        assert_eq!(c2, q(1, 1));
    }

    #[test]
    fn substitution_composes() {
        // (X^2 + Y^2, XY) ∘ itself, first component
        let f = form("X^2 + Y^2").to_integer().unwrap();
        let g = form("X*Y").to_integer().unwrap();
        let c = f.substitute(&[f.clone(), g.clone()]).unwrap();
        assert_eq!(c.to_string(), "X^4 + 3*X^2*Y^2 + Y^4");
        assert_eq!(c.degree(), 4);
    }

    #[test]
    fn linear_form_normalization() {
        let l = LinearForm::new(vec![BigInt::from(-4), BigInt::from(6)]).unwrap();
        assert_eq!(l.normalized().coeffs(), &[BigInt::from(2), BigInt::from(-3)]);
        assert!(LinearForm::new(vec![BigInt::zero(), BigInt::zero()]).is_err());
    }
}

