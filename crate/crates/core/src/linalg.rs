//! Dense exact linear algebra over a [`Field`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::scalar::{rational_from_int, Field};

pub type Matrix<T> = Vec<Vec<T>>;

/// Row-echelon reduction in place. Returns the pivot columns and the sign
/// picked up by row swaps.
fn echelon<T: Field>(m: &mut Matrix<T>) -> (Vec<usize>, bool) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut negated = false;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        if pr != r {
            m.swap(pr, r);
            negated = !negated;
        }
        let pivot = m[r][c].clone();
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = m[i][c].clone() / pivot.clone();
            for j in c..cols {
                let t = m[r][j].clone() * factor.clone();
                m[i][j] = m[i][j].clone() - t;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (pivots, negated)
}

pub fn determinant<T: Field>(m: &Matrix<T>) -> T {
    let n = m.len();
    if n == 0 {
        return T::one();
    }
    assert!(m.iter().all(|row| row.len() == n), "determinant of a non-square matrix");
    let mut a = m.clone();
    let (pivots, negated) = echelon(&mut a);
    if pivots.len() < n {
        return T::zero();
    }
    let mut det = (0..n).fold(T::one(), |acc, i| acc * a[i][i].clone());
    if negated {
        det = -det;
    }
    det
}

pub fn rank<T: Field>(m: &Matrix<T>) -> usize {
    let mut a = m.clone();
    echelon(&mut a).0.len()
}

/// A basis of the right kernel `{x : m x = 0}`.
pub fn nullspace<T: Field>(m: &Matrix<T>, cols: usize) -> Vec<Vec<T>> {
    let mut a = m.clone();
    let (pivots, _) = echelon(&mut a);
    // back-substitute to reduced row echelon form
    for (r, &c) in pivots.iter().enumerate().rev() {
        let p = a[r][c].clone();
        for j in c..cols {
            a[r][j] = a[r][j].clone() / p.clone();
        }
        for i in 0..r {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in c..cols {
                let t = a[r][j].clone() * f.clone();
                a[i][j] = a[i][j].clone() - t;
            }
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![T::zero(); cols];
            v[fc] = T::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[r][fc].clone();
            }
            v
        })
        .collect()
}

pub fn to_rational(m: &Matrix<BigInt>) -> Matrix<BigRational> {
    m.iter().map(|row| row.iter().map(rational_from_int).collect()).collect()
}

/// Determinant of an integer matrix by fraction-free (Bareiss) elimination.
pub fn int_determinant(m: &Matrix<BigInt>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    assert!(m.iter().all(|row| row.len() == n), "determinant of a non-square matrix");
    let mut a = m.clone();
    let mut sign = false;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, r);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

pub fn int_mat_mul(a: &Matrix<BigInt>, b: &Matrix<BigInt>) -> Matrix<BigInt> {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).fold(BigInt::zero(), |acc, t| acc + &a[i][t] * &b[t][j]))
                .collect()
        })
        .collect()
}

pub fn int_mat_vec(a: &Matrix<BigInt>, v: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(BigInt::zero(), |acc, (x, y)| acc + x * y))
        .collect()
}

pub fn transpose<T: Clone>(a: &Matrix<T>) -> Matrix<T> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Classical adjugate; `adj(A) A = det(A) I`.
pub fn int_adjugate(a: &Matrix<BigInt>) -> Matrix<BigInt> {
    let n = a.len();
    if n == 1 {
        return vec![vec![BigInt::from(1)]];
    }
    let mut adj = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Matrix<BigInt> = a
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != i)
                .map(|(_, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let cof = int_determinant(&minor);
            // adj[j][i] = (-1)^(i+j) M_ij
            adj[j][i] = if (i + j) % 2 == 0 { cof } else { -cof };
        }
    }
    adj
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Zp;

    fn im(rows: &[&[i64]]) -> Matrix<BigInt> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn det_small() {
        assert_eq!(int_determinant(&im(&[&[0, 1], &[2, 1]])), BigInt::from(-2));
        assert_eq!(int_determinant(&im(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]])), BigInt::zero());
        assert_eq!(int_determinant(&im(&[&[2, 7, 1], &[0, 3, 5], &[4, 1, 1]])), BigInt::from(124));
    }

    #[test]
    fn adjugate_inverts_up_to_det() {
        let a = im(&[&[2, 7, 1], &[0, 3, 5], &[4, 1, 1]]);
        let p = int_mat_mul(&int_adjugate(&a), &a);
        for (i, row) in p.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert_eq!(*x, if i == j { BigInt::from(124) } else { BigInt::zero() });
            }
        }
    }

    #[test]
    fn nullspace_and_rank_mod_p() {
        let m: Matrix<Zp> = vec![
            vec![Zp::new(1, 5), Zp::new(2, 5), Zp::new(3, 5)],
            vec![Zp::new(0, 5), Zp::new(1, 5), Zp::new(1, 5)],
        ];
        assert_eq!(rank(&m), 2);
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 1);
        for row in &m {
            let s = row.iter().zip(&ns[0]).fold(Zp::zero(), |a, (x, y)| a + *x * *y);
            assert!(s.is_zero());
        }
    }
}
