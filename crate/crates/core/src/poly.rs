//! Dense univariate polynomials over a field, and exact rational root
//! finding for integer polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::primes_up_to;
use crate::scalar::{rational_from_int, Field, Zp};

/// Coefficients in ascending degree; no trailing zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct UniPoly<T> {
    coeffs: Vec<T>,
}

impl<T: Field> UniPoly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
        let mut k = T::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                out.push(c.clone() * k.clone());
            }
            k = k + T::one();
        }
        UniPoly::new(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        UniPoly::new(out)
    }

    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("polynomial division by zero");
        let lead = divisor.lead().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if nd < dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![T::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = rem[k + dd].clone() / lead.clone();
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * d.clone();
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            None => Self::zero(),
            Some(l) => {
                let l = l.clone();
                UniPoly::new(self.coeffs.iter().map(|c| c.clone() / l.clone()).collect())
            }
        }
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

fn int_poly_to_rational(f: &[BigInt]) -> UniPoly<BigRational> {
    UniPoly::new(f.iter().map(rational_from_int).collect())
}

/// Scale a rational polynomial to a primitive integer polynomial.
fn primitive_part(f: &UniPoly<BigRational>) -> Vec<BigInt> {
    let lcm = f
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|c| c / &g).collect()
}

fn eval_int(f: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    f.iter().rev().fold(BigInt::zero(), |acc, c| (acc * x + c).mod_floor(m))
}

/// Find `a/b` with `a ≡ b·r (mod m)`, `|a| ≤ bound`, `0 < b ≤ bound`.
fn rational_reconstruct(r: &BigInt, m: &BigInt, bound: &BigInt) -> Option<BigRational> {
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > *bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > *bound {
        return None;
    }
    let (a, b) = if t1.is_negative() { (-r1, -t1) } else { (r1, t1) };
    Some(BigRational::new(a, b))
}

/// All rational roots (without multiplicity, sorted) of a nonzero integer
/// polynomial given by ascending coefficients.
///
/// Works on the squarefree part: picks a small prime where it stays
/// squarefree, Hensel-lifts every root mod p past `2·N²` (N bounding the
/// extreme coefficients) and recovers candidates by rational reconstruction.
/// Every candidate is checked by exact evaluation.
pub fn rational_roots(f: &[BigInt]) -> Vec<BigRational> {
    let f = int_poly_to_rational(f);
    assert!(!f.is_zero(), "roots of the zero polynomial");
    let mut roots = Vec::new();
    // strip the root at zero
    let shift = f.coeffs().iter().take_while(|c| c.is_zero()).count();
    if shift > 0 {
        roots.push(BigRational::zero());
    }
    let f = UniPoly::new(f.coeffs()[shift..].to_vec());
    let h = f.gcd(&f.derivative());
    let (sqfree, _) = f.div_rem(&h);
    let g = primitive_part(&sqfree);
    let deg = g.len() - 1;
    if deg == 0 {
        return roots;
    }
    if deg == 1 {
        roots.push(BigRational::new(-g[0].clone(), g[1].clone()));
        roots.sort();
        return roots;
    }
    let lead = g[deg].clone();
    let bound = g[0].abs().max(lead.abs());
    let target = &bound * &bound * 2u32;

    let gq = int_poly_to_rational(&g);
    let mut chosen = None;
    for p in primes_up_to(100_000).into_iter().skip(1) {
        let pb = BigInt::from(p);
        if (&lead % &pb).is_zero() {
            continue;
        }
        let gp = UniPoly::new(g.iter().map(|c| Zp::from_bigint(c, p)).collect());
        if gp.gcd(&gp.derivative()).degree() == Some(0) {
            chosen = Some((p, gp));
            break;
        }
    }
    let (p, gp) = chosen.expect("a prime where the squarefree part stays squarefree");
    let dg: Vec<BigInt> = g
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    for r in 0..p {
        if !gp.eval(&Zp::new(r as i128, p)).is_zero() {
            continue;
        }
        let mut m = BigInt::from(p);
        let mut x = BigInt::from(r);
        while m <= target {
            m = &m * &m;
            let fx = eval_int(&g, &x, &m);
            let dfx = eval_int(&dg, &x, &m);
            let inv = dfx.extended_gcd(&m).x.mod_floor(&m);
            x = (&x - fx * inv).mod_floor(&m);
        }
        if let Some(c) = rational_reconstruct(&x, &m, &bound) {
            if gq.eval(&c).is_zero() {
                roots.push(c);
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

/// Convenience: wrap an integer polynomial as a polynomial over `T`.
pub fn lift_int_poly<T: Field>(f: &[BigInt]) -> UniPoly<T> {
    UniPoly::new(f.iter().map(T::from_int).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ip(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn from_roots(roots: &[(i64, i64)], extra: &[i64]) -> Vec<BigInt> {
        // ∏ (b x - a) · extra
        let mut acc = UniPoly::<BigRational>::new(extra.iter().map(|&x| q(x, 1)).collect());
        for &(a, b) in roots {
            acc = acc.mul(&UniPoly::new(vec![q(-a, 1), q(b, 1)]));
        }
        acc.coeffs().iter().map(|c| c.to_integer()).collect()
    }

    #[test]
    fn gcd_and_division() {
        let a = UniPoly::new(vec![q(-1, 1), q(0, 1), q(1, 1)]); // x^2 - 1
        let b = UniPoly::new(vec![q(1, 1), q(1, 1)]); // x + 1
        assert_eq!(a.gcd(&b), b);
        let (quo, rem) = a.div_rem(&b);
        assert!(rem.is_zero());
        assert_eq!(quo, UniPoly::new(vec![q(-1, 1), q(1, 1)]));
        assert_eq!(a.derivative(), UniPoly::new(vec![q(0, 1), q(2, 1)]));
    }

    #[test]
    fn gcd_over_finite_field() {
        // x^2 and x^2 + 3x over F_3 share x^2 up to the common factor x
        let p = 3;
        let a = UniPoly::new(vec![Zp::new(0, p), Zp::new(0, p), Zp::new(1, p)]);
        let b = UniPoly::new(vec![Zp::new(0, p), Zp::new(3, p), Zp::new(1, p)]);
        assert_eq!(a.gcd(&b).degree(), Some(2));
        let c = UniPoly::new(vec![Zp::new(1, p), Zp::new(1, p)]);
        assert_eq!(a.gcd(&c).degree(), Some(0));
    }

    #[test]
    fn rational_roots_simple() {
        assert_eq!(rational_roots(&ip(&[-2, 0, 1])), Vec::<BigRational>::new());
        assert_eq!(rational_roots(&ip(&[-1, 0, 1])), vec![q(-1, 1), q(1, 1)]);
        assert_eq!(rational_roots(&ip(&[0, 0, 5])), vec![q(0, 1)]);
        let f = from_roots(&[(3, 2), (-7, 5), (3, 2), (11, 1)], &[1, 0, 1]);
        assert_eq!(rational_roots(&f), vec![q(-7, 5), q(3, 2), q(11, 1)]);
    }

    #[test]
    fn rational_roots_match_divisor_search() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let k = rng.gen_range(1..4);
            let roots: Vec<(i64, i64)> = (0..k)
                .map(|_| (rng.gen_range(-30..30), rng.gen_range(1..9)))
                .collect();
            let extra: Vec<i64> = (0..3).map(|_| rng.gen_range(1..5)).collect();
            let f = from_roots(&roots, &extra);
            // brute force oracle over a/b with |a| ≤ 40, b ≤ 10
            let fq = int_poly_to_rational(&f);
            let mut want: Vec<BigRational> = (-40..=40)
                .flat_map(|a| (1..=10).map(move |b| q(a, b)))
                .filter(|c| fq.eval(c).is_zero())
                .collect();
            want.sort();
            want.dedup();
            assert_eq!(rational_roots(&f), want);
        }
    }
}
