//! Sylvester and Macaulay resultants.
//!
//! Sign convention: the Sylvester matrix carries the coefficients of `F`
//! (highest power of `X` first) in its first `deg G` rows, followed by `deg F`
//! rows of `G`. With this choice `Res(X^a, Y^b) = 1` and, for
//! `F = ∏ (b_i X − a_i Y)`, `Res(F, G) = ∏ G(a_i, b_i)`. The Macaulay
//! resultant is normalized by `Res(X_0^d, …, X_n^d) = 1`.

use std::collections::HashMap;


use super::{HomogeneousForm, Monomial};
use crate::error::{Error, Result};
use num_bigint::BigInt;

use crate::linalg::{determinant, int_determinant, rank, Matrix};
use crate::scalar::{Field, Scalar};

/// The Sylvester matrix of two binary forms (see the module docs for the
/// row order).
pub fn sylvester_matrix<T: Scalar>(f: &HomogeneousForm<T>, g: &HomogeneousForm<T>) -> Result<Matrix<T>> {
    if f.n_vars() != 2 || g.n_vars() != 2 {
        return Err(Error::domain("Sylvester resultant needs binary forms"));
    }
    if f.is_zero() || g.is_zero() {
        return Err(Error::domain("Sylvester resultant of a zero form"));
    }
    let a = f.binary_coeffs_desc()?;
    let b = g.binary_coeffs_desc()?;
    let (df, dg) = (f.degree() as usize, g.degree() as usize);
    let size = df + dg;
    let mut m: Matrix<T> = vec![vec![T::zero(); size]; size];
    for i in 0..dg {
        for (j, c) in a.iter().enumerate() {
            m[i][i + j] = c.clone();
        }
    }
    for i in 0..df {
        for (j, c) in b.iter().enumerate() {
            m[dg + i][i + j] = c.clone();
        }
    }
    Ok(m)
}

pub fn sylvester_resultant<T: Field>(f: &HomogeneousForm<T>, g: &HomogeneousForm<T>) -> Result<T> {
    Ok(determinant(&sylvester_matrix(f, g)?))
}

/// Sylvester resultant of integer forms, by fraction-free elimination.
pub fn int_sylvester_resultant(f: &HomogeneousForm<BigInt>, g: &HomogeneousForm<BigInt>) -> Result<BigInt> {
    Ok(int_determinant(&sylvester_matrix(f, g)?))
}

/// Outcome of a Macaulay resultant computation.
#[derive(Debug, Clone, PartialEq)]
pub enum MacaulayResultant<T> {
    /// The exact value.
    Exact(T),
    /// Every extraneous minor tried vanished; only the zero/nonzero verdict
    /// from the rank test is available.
    RankOnly { nonzero: bool },
}

impl<T: Field> MacaulayResultant<T> {
    pub fn is_nonzero(&self) -> bool {
        match self {
            MacaulayResultant::Exact(v) => !v.is_zero(),
            MacaulayResultant::RankOnly { nonzero } => *nonzero,
        }
    }

    pub fn exact(&self) -> Option<&T> {
        match self {
            MacaulayResultant::Exact(v) => Some(v),
            MacaulayResultant::RankOnly { .. } => None,
        }
    }
}

/// All exponent vectors of the given degree, lexicographically descending.
pub fn all_monomials(n_vars: usize, degree: u32) -> Vec<Monomial> {
    fn rec(prefix: &mut Monomial, left: usize, degree: u32, out: &mut Vec<Monomial>) {
        if left == 1 {
            prefix.push(degree);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=degree).rev() {
            prefix.push(k);
            rec(prefix, left - 1, degree - k, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), n_vars, degree, &mut out);
    out
}

fn check_square_system<T: Field>(forms: &[HomogeneousForm<T>]) -> Result<(usize, u32)> {
    let n_vars = forms.first().map_or(0, |f| f.n_vars());
    if n_vars == 0 || forms.len() != n_vars {
        return Err(Error::domain(format!(
            "need exactly n+1 forms in n+1 variables, got {} forms in {} variables",
            forms.len(),
            n_vars
        )));
    }
    let mut critical = 1;
    for f in forms {
        Error::check_dim(n_vars, f.n_vars())?;
        if f.degree() == 0 {
            return Err(Error::domain("Macaulay resultant needs forms of degree at least 1"));
        }
        critical += f.degree() - 1;
    }
    Ok((n_vars, critical))
}

/// `det(M) / det(M')` in the standard variable order, or `None` when the
/// extraneous minor `M'` vanishes.
fn macaulay_quotient<T: Field>(forms: &[HomogeneousForm<T>], critical: u32) -> Option<T> {
    let n_vars = forms.len();
    let mons = all_monomials(n_vars, critical);
    let index: HashMap<&Monomial, usize> = mons.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let size = mons.len();
    let mut m: Matrix<T> = vec![vec![T::zero(); size]; size];
    let mut non_reduced = Vec::new();
    for (r, mon) in mons.iter().enumerate() {
        let divisible: Vec<usize> = (0..n_vars)
            .filter(|&i| mon[i] >= forms[i].degree())
            .collect();
        if divisible.len() > 1 {
            non_reduced.push(r);
        }
        let i = divisible[0];
        let mut shift = mon.clone();
        shift[i] -= forms[i].degree();
        for (e, c) in forms[i].terms() {
            let col: Monomial = shift.iter().zip(e).map(|(a, b)| a + b).collect();
            m[r][index[&col]] = c.clone();
        }
    }
    let minor: Matrix<T> = non_reduced
        .iter()
        .map(|&r| non_reduced.iter().map(|&c| m[r][c].clone()).collect())
        .collect();
    let den = determinant(&minor);
    if den.is_zero() {
        return None;
    }
    Some(determinant(&m) / den)
}

/// Zero/nonzero test without division: the forms have no common projective
/// zero iff their multiples span every monomial of the critical degree.
pub fn macaulay_matrix_rank_test<T: Field>(forms: &[HomogeneousForm<T>]) -> Result<bool> {
    let (n_vars, critical) = check_square_system(forms)?;
    let mons = all_monomials(n_vars, critical);
    let index: HashMap<&Monomial, usize> = mons.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows: Matrix<T> = Vec::new();
    for f in forms {
        for shift in all_monomials(n_vars, critical - f.degree()) {
            let mut row = vec![T::zero(); mons.len()];
            for (e, c) in f.terms() {
                let col: Monomial = shift.iter().zip(e).map(|(a, b)| a + b).collect();
                row[index[&col]] = c.clone();
            }
            rows.push(row);
        }
    }
    Ok(rank(&rows) == mons.len())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

fn permutation_is_odd(p: &[usize]) -> bool {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}

/// Macaulay resultant of `n+1` forms in `n+1` variables.
///
/// If the extraneous minor vanishes in the standard variable order, the
/// computation is retried after permuting variables and after unimodular
/// shears; both change the value only by the sign `det(A)^(d_0⋯d_n)`, which
/// is corrected. If every attempt degenerates the rank test decides.
pub fn macaulay_resultant<T: Field>(forms: &[HomogeneousForm<T>]) -> Result<MacaulayResultant<T>> {
    let (n_vars, critical) = check_square_system(forms)?;
    let degree_product: u64 = forms.iter().map(|f| f.degree() as u64).product();
    for perm in permutations(n_vars) {
        let permuted: Vec<HomogeneousForm<T>> = forms.iter().map(|f| f.permute_vars(&perm)).collect();
        if let Some(v) = macaulay_quotient(&permuted, critical) {
            let flip = permutation_is_odd(&perm) && degree_product % 2 == 1;
            return Ok(MacaulayResultant::Exact(if flip { -v } else { v }));
        }
    }
    for k in 1..=3i64 {
        for target in 0..n_vars {
            // X_target ↦ X_target + k·Σ_{j≠target} X_j, determinant 1
            let a: Vec<Vec<T>> = (0..n_vars)
                .map(|i| {
                    (0..n_vars)
                        .map(|j| {
                            if i == j {
                                T::one()
                            } else if i == target {
                                T::from_int(&k.into())
                            } else {
                                T::zero()
                            }
                        })
                        .collect()
                })
                .collect();
            let sheared: Vec<HomogeneousForm<T>> = forms
                .iter()
                .map(|f| f.linear_substitute(&a))
                .collect::<Result<_>>()?;
            if let Some(v) = macaulay_quotient(&sheared, critical) {
                return Ok(MacaulayResultant::Exact(v));
            }
        }
    }
    Ok(MacaulayResultant::RankOnly {
        nonzero: macaulay_matrix_rank_test(forms)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::parse_form;
    use crate::Form;
    use num_rational::BigRational;
    use num_traits::Signed;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn f2(s: &str) -> Form {
        parse_form(s, Some(2)).unwrap()
    }

    fn f3(s: &str) -> Form {
        parse_form(s, Some(3)).unwrap()
    }

    #[test]
    fn sylvester_examples() {
        assert_eq!(sylvester_resultant(&f2("X^2"), &f2("Y^2")).unwrap(), q(1));
        assert_eq!(sylvester_resultant(&f2("X^2 + 6*Y^2"), &f2("X*Y")).unwrap(), q(6));
        assert_eq!(sylvester_resultant(&f2("X^2"), &f2("X^2")).unwrap(), q(0));
        assert_eq!(sylvester_resultant(&f2("X^2 - Y^2"), &f2("X*Y")).unwrap().abs(), q(1));
        assert!(sylvester_resultant(&f3("X"), &f3("Y")).is_err());
    }

    #[test]
    fn sylvester_antisymmetry() {
        let f = f2("3*X^3 - X*Y^2 + 2*Y^3");
        let g = f2("X^2 + 5*X*Y - 7*Y^2");
        let a = sylvester_resultant(&f, &g).unwrap();
        let b = sylvester_resultant(&g, &f).unwrap();
        assert_eq!(a, b); // (-1)^(3·2) = 1
        let h = f2("X + 4*Y");
        assert_eq!(sylvester_resultant(&f, &h).unwrap(), -sylvester_resultant(&h, &f).unwrap());
    }

    #[test]
    fn macaulay_examples() {
        let r = macaulay_resultant(&[f3("X"), f3("Y"), f3("Z")]).unwrap();
        assert_eq!(r, MacaulayResultant::Exact(q(1)));
        let r = macaulay_resultant(&[f3("X^2"), f3("X*Y"), f3("Z^2")]).unwrap();
        assert!(!r.is_nonzero());
        let r = macaulay_resultant(&[f3("X^2"), f3("Y^2"), f3("Z^2")]).unwrap();
        assert_eq!(r, MacaulayResultant::Exact(q(1)));
        assert!(macaulay_resultant(&[f3("X"), f3("Y")]).is_err());
    }

    #[test]
    fn macaulay_agrees_with_sylvester_up_to_sign() {
        let pairs = [
            ("X^2 + 6*Y^2", "X*Y"),
            ("2*X^2 - 3*X*Y + Y^2", "X^2 + Y^2"),
            ("X^3 - Y^3", "X^2*Y + 4*Y^3"),
        ];
        for (a, b) in pairs {
            let s = sylvester_resultant(&f2(a), &f2(b)).unwrap();
            let m = macaulay_resultant(&[f2(a), f2(b)]).unwrap();
            assert_eq!(m.exact().unwrap().abs(), s.abs(), "{a}; {b}");
        }
    }

    #[test]
    fn macaulay_cubics_use_extraneous_minor() {
        // diagonal cubics: Res = ∏ of the coefficients to the power d^n = 9
        let r = macaulay_resultant(&[f3("2*X^3"), f3("Y^3"), f3("3*Z^3 + X*Y*Z")]).unwrap();
        assert_eq!(r, MacaulayResultant::Exact(q(2 * 2 * 2 * 2 * 2 * 2 * 2 * 2 * 2 * 19683)));
        let zero = macaulay_resultant(&[f3("X^3 + Y^3"), f3("X*Y^2"), f3("Y*Z^2 + X^3")]).unwrap();
        assert!(!zero.is_nonzero());
    }

    #[test]
    fn rank_test_matches() {
        assert!(macaulay_matrix_rank_test(&[f3("X^2"), f3("Y^2"), f3("Z^2")]).unwrap());
        assert!(!macaulay_matrix_rank_test(&[f3("X^2"), f3("X*Y"), f3("Z^2")]).unwrap());
    }

    #[test]
    fn monomial_count() {
        assert_eq!(all_monomials(3, 3).len(), 10);
        assert_eq!(all_monomials(2, 4).len(), 5);
        assert_eq!(permutations(3).len(), 6);
    }
}
