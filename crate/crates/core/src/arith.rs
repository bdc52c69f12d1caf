//! Integer and rational utilities over the rational field: valuations,
//! primality and factorization, S-integers and their fractional ideals,
//! and square classes of S-units.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const TRIAL_LIMIT: u64 = 1_000_000;
const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

pub fn is_prime_u64(n: u64) -> bool {
    is_prime(&BigInt::from(n))
}

/// Miller-Rabin with the first 13 prime bases; deterministic below 3.3e24.
pub fn is_prime(n: &BigInt) -> bool {
    let two = BigInt::from(2);
    if *n < two {
        return false;
    }
    for &b in &MR_BASES {
        let b = BigInt::from(b);
        if *n == b {
            return true;
        }
        if (n % &b).is_zero() {
            return false;
        }
    }
    let n1 = n - 1u32;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'bases: for &b in &MR_BASES {
        let mut x = BigInt::from(b).modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Primes in `[2, bound]` by sieve.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter(|(_, &p)| p)
        .map(|(i, _)| i as u64)
        .collect()
}

fn pollard_rho(n: &BigInt) -> BigInt {
    // Brent's variant with f(x) = x^2 + c
    let one = BigInt::one();
    for c in 1u32.. {
        let c = BigInt::from(c);
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut y = BigInt::from(2);
        let mut r: u64 = 1;
        let mut q = BigInt::one();
        let m = 128u64;
        let mut g = BigInt::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    q = (q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if g > one {
                    break;
                }
            }
        }
        if g != *n {
            return g;
        }
    }
    unreachable!()
}

fn split_into(n: BigInt, out: &mut BTreeMap<BigInt, u32>) {
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        *out.entry(n).or_insert(0) += 1;
        return;
    }
    let d = pollard_rho(&n);
    let rest = &n / &d;
    split_into(d, out);
    split_into(rest, out);
}

/// Prime factorization of `|n|` for nonzero `n`: trial division up to 10^6,
/// then Pollard rho on the cofactor.
pub fn factorize(n: &BigInt) -> Result<BTreeMap<BigInt, u32>> {
    if n.is_zero() {
        return Err(Error::domain("cannot factor zero"));
    }
    let mut m = n.abs();
    let mut out = BTreeMap::new();
    let mut p: u64 = 2;
    while p <= TRIAL_LIMIT {
        let bp = BigInt::from(p);
        if &bp * &bp > m {
            break;
        }
        let mut e = 0;
        while (&m % &bp).is_zero() {
            m /= &bp;
            e += 1;
        }
        if e > 0 {
            out.insert(bp, e);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    split_into(m, &mut out);
    Ok(out)
}

/// The p-adic valuation of a nonzero rational.
pub fn valuation(x: &BigRational, p: &BigInt) -> Result<i64> {
    if x.is_zero() {
        return Err(Error::domain("valuation of zero is infinite"));
    }
    Ok(int_valuation(x.numer(), p) as i64 - int_valuation(x.denom(), p) as i64)
}

/// Exponent of `p` in a nonzero integer.
pub fn int_valuation(n: &BigInt, p: &BigInt) -> u64 {
    debug_assert!(!n.is_zero());
    let mut m = n.abs();
    let mut e = 0;
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return e;
        }
        m = q;
        e += 1;
    }
}

/// The finite places of S. The Archimedean place is always implied.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlaceSet {
    finite_primes: BTreeSet<u64>,
}

impl PlaceSet {
    /// S = {∞}.
    pub fn archimedean() -> Self {
        Self::default()
    }

    pub fn new(primes: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut finite_primes = BTreeSet::new();
        for p in primes {
            if !is_prime_u64(p) {
                return Err(Error::domain(format!("{p} is not prime")));
            }
            if !finite_primes.insert(p) {
                return Err(Error::domain(format!("prime {p} listed twice")));
            }
        }
        Ok(PlaceSet { finite_primes })
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.finite_primes.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.finite_primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.finite_primes.is_empty()
    }

    pub fn contains(&self, p: &BigInt) -> bool {
        p.to_u64().is_some_and(|p| self.finite_primes.contains(&p))
    }
}

impl fmt::Display for PlaceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{∞")?;
        for p in &self.finite_primes {
            write!(f, ",{p}")?;
        }
        write!(f, "}}")
    }
}

/// A fractional ideal of the S-integers, stored as prime → exponent over
/// primes outside S. The unit ideal is the empty map.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SIdeal {
    exponents: BTreeMap<BigInt, i64>,
}

impl SIdeal {
    pub fn unit() -> Self {
        Self::default()
    }

    pub fn is_unit(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents(&self) -> &BTreeMap<BigInt, i64> {
        &self.exponents
    }

    pub fn exponent(&self, p: &BigInt) -> i64 {
        self.exponents.get(p).copied().unwrap_or(0)
    }

    pub fn from_rational(x: &BigRational, s: &PlaceSet) -> Result<Self> {
        if x.is_zero() {
            return Err(Error::domain("the zero ideal has no exponent map"));
        }
        let mut exponents = BTreeMap::new();
        for (p, e) in factorize(x.numer())? {
            if !s.contains(&p) {
                exponents.insert(p, e as i64);
            }
        }
        for (p, e) in factorize(x.denom())? {
            if !s.contains(&p) {
                exponents.insert(p, -(e as i64));
            }
        }
        Ok(SIdeal { exponents })
    }

    /// Product of ideals: exponentwise sum.
    pub fn mul(&self, other: &SIdeal) -> SIdeal {
        let mut exponents = self.exponents.clone();
        for (p, e) in &other.exponents {
            let slot = exponents.entry(p.clone()).or_insert(0);
            *slot += e;
            if *slot == 0 {
                exponents.remove(p);
            }
        }
        SIdeal { exponents }
    }

    pub fn pow(&self, k: i64) -> SIdeal {
        if k == 0 {
            return SIdeal::unit();
        }
        SIdeal {
            exponents: self.exponents.iter().map(|(p, e)| (p.clone(), e * k)).collect(),
        }
    }

    /// The positive generator ∏ p^e.
    pub fn generator(&self) -> BigRational {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (p, &e) in &self.exponents {
            let pe = num_traits::pow(p.clone(), e.unsigned_abs() as usize);
            if e > 0 {
                num *= pe;
            } else {
                den *= pe;
            }
        }
        BigRational::new(num, den)
    }
}

impl fmt::Display for SIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.generator())
    }
}

pub fn sideal_of_rational(x: &BigRational, s: &PlaceSet) -> Result<SIdeal> {
    SIdeal::from_rational(x, s)
}

pub fn is_s_unit(x: &BigRational, s: &PlaceSet) -> Result<bool> {
    Ok(SIdeal::from_rational(x, s)?.is_unit())
}

/// Integer-valued convenience wrapper around [`is_s_unit`].
pub fn is_s_unit_int(x: &BigInt, s: &PlaceSet) -> Result<bool> {
    is_s_unit(&BigRational::from_integer(x.clone()), s)
}

/// A class of S-units modulo squares, represented by a signed squarefree
/// integer supported on the finite primes of S.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareClass {
    representative: BigInt,
}

impl SquareClass {
    /// The square class of the S-unit `x`.
    pub fn of(x: &BigRational, s: &PlaceSet) -> Result<Self> {
        if !is_s_unit(x, s)? {
            return Err(Error::domain(format!("{x} is not an S-unit for S = {s}")));
        }
        // x·den² has the same class as x
        let n = x.numer() * x.denom();
        let mut rep = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
        for (p, e) in factorize(&n)? {
            if e % 2 == 1 {
                rep *= p;
            }
        }
        Ok(SquareClass { representative: rep })
    }

    pub fn representative(&self) -> &BigInt {
        &self.representative
    }

    pub fn as_rational(&self) -> BigRational {
        BigRational::from_integer(self.representative.clone())
    }

    pub fn is_trivial(&self) -> bool {
        self.representative.is_one()
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.representative)
    }
}

/// All square classes of S-units: ±∏ over subsets of the finite primes of S.
/// Positive classes come first, each half in increasing absolute value.
pub fn square_class_reps(s: &PlaceSet) -> Vec<SquareClass> {
    let primes: Vec<u64> = s.primes().collect();
    let mut positive: Vec<BigInt> = (0u64..1 << primes.len())
        .map(|mask| {
            primes
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(BigInt::one(), |acc, (_, &p)| acc * p)
        })
        .collect();
    positive.sort();
    let negative: Vec<BigInt> = positive.iter().map(|r| -r).collect();
    positive
        .into_iter()
        .chain(negative)
        .map(|representative| SquareClass { representative })
        .collect()
}
