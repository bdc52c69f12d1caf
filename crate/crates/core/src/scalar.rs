//! Scalar abstractions shared by forms, matrices and univariate polynomials.
//!
//! Everything in this crate is exact. The two traits below are satisfied by
//! `BigInt` (ring), `BigRational` (field) and [`Zp`] (prime field with a
//! runtime modulus).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A commutative ring element with exact arithmetic.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    fn from_int(n: &BigInt) -> Self;

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

/// A field: every nonzero element is invertible.
pub trait Field: Scalar + Div<Output = Self> {}

impl Scalar for BigInt {
    fn from_int(n: &BigInt) -> Self {
        n.clone()
    }
}

impl Scalar for BigRational {
    fn from_int(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
}

impl Field for BigRational {}

/// Element of the prime field with `p` elements.
///
/// The modulus travels with the value. `Zp::zero()` and `Zp::one()` are
/// created without a modulus (stored as 0) and adopt the modulus of the
/// other operand on first use; mixing two different nonzero moduli panics.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Zp {
    value: u64,
    modulus: u64,
}

impl Zp {
    pub fn new(value: i128, modulus: u64) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        let m = modulus as i128;
        Zp {
            value: value.rem_euclid(m) as u64,
            modulus,
        }
    }

    pub fn from_bigint(value: &BigInt, modulus: u64) -> Self {
        let r = value.mod_floor(&BigInt::from(modulus));
        Zp {
            value: r.to_u64().expect("residue fits u64"),
            modulus,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> Option<u64> {
        (self.modulus != 0).then_some(self.modulus)
    }

    fn join(a: u64, b: u64) -> u64 {
        match (a, b) {
            (0, m) | (m, 0) => m,
            (x, y) if x == y => x,
            (x, y) => panic!("mixed moduli {x} and {y}"),
        }
    }

    fn reduce(v: u128, m: u64) -> u64 {
        if m == 0 {
            // only the unbound constants 0 and 1 live here
            v as u64
        } else {
            (v % m as u128) as u64
        }
    }

    pub fn inverse(&self) -> Option<Zp> {
        let m = self.modulus;
        if self.value == 0 {
            return None;
        }
        if m == 0 {
            return Some(*self);
        }
        let (g, x, _) = ext_gcd(self.value as i128, m as i128);
        (g == 1).then(|| Zp::new(x, m))
    }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

impl fmt::Debug for Zp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

impl fmt::Display for Zp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Zp {
    type Output = Zp;
    fn add(self, rhs: Zp) -> Zp {
        let m = Zp::join(self.modulus, rhs.modulus);
        Zp {
            value: Zp::reduce(self.value as u128 + rhs.value as u128, m),
            modulus: m,
        }
    }
}

impl Neg for Zp {
    type Output = Zp;
    fn neg(self) -> Zp {
        if self.value == 0 {
            return self;
        }
        assert!(self.modulus != 0, "negating an unbound residue");
        Zp {
            value: self.modulus - self.value,
            modulus: self.modulus,
        }
    }
}

impl Sub for Zp {
    type Output = Zp;
    fn sub(self, rhs: Zp) -> Zp {
        let m = Zp::join(self.modulus, rhs.modulus);
        let rhs = Zp {
            value: rhs.value,
            modulus: m,
        };
        let lhs = Zp {
            value: self.value,
            modulus: m,
        };
        lhs + (-rhs)
    }
}

impl Mul for Zp {
    type Output = Zp;
    fn mul(self, rhs: Zp) -> Zp {
        let m = Zp::join(self.modulus, rhs.modulus);
        Zp {
            value: Zp::reduce(self.value as u128 * rhs.value as u128, m),
            modulus: m,
        }
    }
}

impl Div for Zp {
    type Output = Zp;
    fn div(self, rhs: Zp) -> Zp {
        let m = Zp::join(self.modulus, rhs.modulus);
        let rhs = Zp {
            value: rhs.value,
            modulus: m,
        };
        self * rhs.inverse().expect("division by zero in Zp")
    }
}

impl Zero for Zp {
    fn zero() -> Self {
        Zp {
            value: 0,
            modulus: 0,
        }
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
}

impl One for Zp {
    fn one() -> Self {
        Zp {
            value: 1,
            modulus: 0,
        }
    }
}

impl Scalar for Zp {
    /// Integers lift into an unbound residue only when they are 0 or 1;
    /// anything else must go through [`Zp::from_bigint`].
    fn from_int(n: &BigInt) -> Self {
        if n.is_zero() {
            Zp::zero()
        } else if n.is_one() {
            Zp::one()
        } else {
            panic!("Zp::from_int needs a modulus; use Zp::from_bigint")
        }
    }
}

impl Field for Zp {}

pub fn rational_from_int(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// Exact integer square root test.
pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// True iff the nonzero rational `q` is the square of a rational.
pub fn is_rational_square(q: &BigRational) -> bool {
    !q.is_negative() && is_perfect_square(q.numer()) && is_perfect_square(q.denom())
}
