pub mod arith;
pub mod error;
pub mod forms;
pub mod linalg;
pub mod dynamics;
pub mod poly;
pub mod projective;
pub mod scalar;
pub mod shafarevich;
pub mod verify;

pub use error::{Error, Result};

pub type Integer = num_bigint::BigInt;
pub type Rational = num_rational::BigRational;
pub type Form = forms::HomogeneousForm<Rational>;
pub type IntForm = forms::HomogeneousForm<Integer>;
pub type FormModP = forms::HomogeneousForm<scalar::Zp>;
