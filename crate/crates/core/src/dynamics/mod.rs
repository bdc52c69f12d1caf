//! Rational self-maps of projective space given by `n+1` forms of a common
//! degree: iteration, conjugation, orbits and reduction modulo primes.

mod preperiodic;
mod search;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, int_valuation, is_s_unit_int, PlaceSet};
use crate::error::{Error, Result};
use crate::forms::{
    int_sylvester_resultant, macaulay_matrix_rank_test, macaulay_resultant, parse_forms,
    HomogeneousForm, MacaulayResultant,
};
use crate::linalg::int_adjugate;
use crate::poly::UniPoly;
use crate::projective::{ProjLinearMap, ProjPoint};
use crate::scalar::Zp;
use crate::{Form, FormModP, IntForm};

pub use preperiodic::{binary_rational_roots, critical_points, rational_preperiodic};
pub use search::{good_reduction_search, GoodReductionSearch};

/// Largest degree an iterate may reach.
pub const MAX_ITERATE_DEGREE: u64 = 64;

/// A morphism `P^n → P^n` of degree `d`, stored as its canonical
/// homogeneous lift: integer forms with overall content 1 whose first
/// nonzero coefficient (forms in order, each from its leading term down)
/// is positive.
#[derive(Clone)]
pub struct MorphismPN {
    n: usize,
    d: u32,
    forms: Vec<IntForm>,
    resultant: OnceLock<Option<BigInt>>,
}

impl PartialEq for MorphismPN {
    fn eq(&self, other: &Self) -> bool {
        self.forms == other.forms
    }
}

impl Eq for MorphismPN {}

impl std::hash::Hash for MorphismPN {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.forms.hash(state);
    }
}

/// Wire form `{n, d, forms: [..]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub n: usize,
    pub d: u32,
    pub forms: Vec<String>,
}

fn canonical_forms(forms: Vec<IntForm>) -> Vec<IntForm> {
    let g = forms.iter().fold(BigInt::zero(), |acc, f| acc.gcd(&f.content()));
    let first_negative = forms
        .iter()
        .find_map(|f| f.leading().map(|(_, c)| c.is_negative()))
        .unwrap_or(false);
    let g = if first_negative { -g } else { g };
    forms.iter().map(|f| f.exact_div(&g)).collect()
}

impl MorphismPN {
    /// Build from rational forms, checking shape and the resultant.
    pub fn new(forms: Vec<Form>) -> Result<Self> {
        let den = forms
            .iter()
            .flat_map(|f| f.terms().map(|(_, c)| c.denom().clone()).collect::<Vec<_>>())
            .fold(BigInt::one(), |acc, d| acc.lcm(&d));
        let den = BigRational::from_integer(den);
        let ints: Vec<IntForm> = forms
            .iter()
            .map(|f| f.scale(&den).to_integer().expect("denominators cleared"))
            .collect();
        Self::from_int_forms(ints)
    }

    pub fn from_int_forms(forms: Vec<IntForm>) -> Result<Self> {
        let n_vars = forms.len();
        if n_vars < 2 {
            return Err(Error::domain("a morphism of P^n needs n+1 ≥ 2 forms"));
        }
        let d = forms[0].degree();
        for f in &forms {
            Error::check_dim(n_vars, f.n_vars())?;
            if f.degree() != d {
                return Err(Error::domain("forms of a morphism must share a degree"));
            }
        }
        if d == 0 {
            return Err(Error::domain("morphisms need degree at least 1"));
        }
        let forms = canonical_forms(forms);
        let phi = Self::from_canonical_unchecked(forms);
        if !phi.resultant_is_nonzero()? {
            return Err(Error::domain("the forms have a common zero (resultant vanishes)"));
        }
        Ok(phi)
    }

    fn from_canonical_unchecked(forms: Vec<IntForm>) -> Self {
        MorphismPN {
            n: forms.len() - 1,
            d: forms[0].degree(),
            forms,
            resultant: OnceLock::new(),
        }
    }

    /// Parse `"F0; F1; …"` or the JSON object `{n, d, forms}`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.starts_with('{') {
            let j: MorphismJson =
                serde_json::from_str(t).map_err(|e| Error::parse(format!("morphism JSON: {e}")))?;
            return Self::from_json(&j);
        }
        Self::new(parse_forms(t)?)
    }

    pub fn from_json(j: &MorphismJson) -> Result<Self> {
        let phi = Self::new(parse_forms(&j.forms.join(";"))?)?;
        if phi.n != j.n || phi.d != j.d {
            return Err(Error::parse(format!(
                "declared n={}, d={} but forms give n={}, d={}",
                j.n, j.d, phi.n, phi.d
            )));
        }
        Ok(phi)
    }

    pub fn to_json(&self) -> MorphismJson {
        MorphismJson {
            n: self.n,
            d: self.d,
            forms: self.forms.iter().map(|f| f.to_string()).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn forms(&self) -> &[IntForm] {
        &self.forms
    }

    /// Number of coefficients minus one: the dimension `N` of the ambient
    /// parameter space.
    pub fn parameter_space_dim(&self) -> usize {
        let monomials = binomial(self.n + self.d as usize, self.d as usize);
        (self.n + 1) * monomials - 1
    }

    fn compute_resultant(&self) -> Result<Option<BigInt>> {
        if self.n == 1 {
            return Ok(Some(int_sylvester_resultant(&self.forms[0], &self.forms[1])?));
        }
        let rat: Vec<Form> = self.forms.iter().map(|f| f.to_rational()).collect();
        Ok(match macaulay_resultant(&rat)? {
            MacaulayResultant::Exact(v) => Some(v.to_integer()),
            MacaulayResultant::RankOnly { .. } => None,
        })
    }

    fn resultant_is_nonzero(&self) -> Result<bool> {
        match self.resultant_value()? {
            Some(r) => Ok(!r.is_zero()),
            None => {
                let rat: Vec<Form> = self.forms.iter().map(|f| f.to_rational()).collect();
                macaulay_matrix_rank_test(&rat)
            }
        }
    }

    fn resultant_value(&self) -> Result<Option<&BigInt>> {
        if self.resultant.get().is_none() {
            let r = self.compute_resultant()?;
            let _ = self.resultant.set(r);
        }
        Ok(self.resultant.get().unwrap().as_ref())
    }

    /// Resultant of the canonical lift (Sylvester for `n = 1`, Macaulay
    /// otherwise). Fails only when every Macaulay extraneous minor
    /// degenerates and just the nonvanishing is known.
    pub fn resultant(&self) -> Result<BigInt> {
        self.resultant_value()?
            .cloned()
            .ok_or_else(|| Error::Unsupported("exact Macaulay resultant unavailable".into()))
    }

    pub fn apply(&self, p: &ProjPoint) -> Result<ProjPoint> {
        Error::check_dim(self.n + 1, p.coords().len())?;
        let vals = self
            .forms
            .iter()
            .map(|f| f.evaluate(p.coords()))
            .collect::<Result<Vec<_>>>()?;
        ProjPoint::from_ints(&vals)
    }

    /// `φ ∘ ψ` as forms: `Φ(Ψ(x))`, content-normalized.
    fn compose_forms(&self, inner: &[IntForm]) -> Result<Vec<IntForm>> {
        let out = self
            .forms
            .iter()
            .map(|f| f.substitute(inner))
            .collect::<Result<Vec<_>>>()?;
        Ok(canonical_forms(out))
    }

    /// The `k`-fold composite.
    pub fn iterate(&self, k: u32) -> Result<MorphismPN> {
        if k == 0 {
            return Err(Error::domain("iterate count must be at least 1"));
        }
        let degree = (self.d as u64).checked_pow(k);
        if degree.is_none_or(|deg| deg > MAX_ITERATE_DEGREE) {
            return Err(Error::Resource(format!(
                "iterate {k} of a degree-{} map exceeds degree {MAX_ITERATE_DEGREE}",
                self.d
            )));
        }
        let mut acc = self.forms.clone();
        for _ in 1..k {
            acc = self.compose_forms(&acc)?;
        }
        Ok(Self::from_canonical_unchecked(acc))
    }

    /// `φ^f = f ∘ φ ∘ f⁻¹`, with the adjugate of the lift standing in for
    /// the inverse.
    pub fn conjugate(&self, f: &ProjLinearMap) -> Result<MorphismPN> {
        Error::check_dim(self.n, f.dim())?;
        let a = f.lift();
        let adj = int_adjugate(a);
        let inner: Vec<IntForm> = adj.iter().map(|row| HomogeneousForm::linear(row)).collect();
        let pulled: Vec<IntForm> = self
            .forms
            .iter()
            .map(|g| g.substitute(&inner))
            .collect::<Result<_>>()?;
        let pushed: Vec<IntForm> = a
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&pulled)
                    .fold(IntForm::zero(self.n + 1, self.d), |acc, (c, g)| acc.add(&g.scale(c)))
            })
            .collect();
        let out = Self::from_canonical_unchecked(canonical_forms(pushed));
        // resultant changes by a power of det(A): keep it lazily recomputed
        Ok(out)
    }

    /// Forward orbit of `p`, stopping at the first repeat or after `cap`
    /// distinct points.
    pub fn orbit(&self, p: &ProjPoint, cap: usize) -> Result<OrbitRecord> {
        if cap == 0 {
            return Err(Error::domain("orbit cap must be at least 1"));
        }
        let mut points = vec![p.clone()];
        let mut seen: HashMap<ProjPoint, usize> = HashMap::from([(p.clone(), 0)]);
        loop {
            let next = self.apply(points.last().unwrap())?;
            if let Some(&i) = seen.get(&next) {
                let len = points.len();
                return Ok(OrbitRecord {
                    start: p.clone(),
                    points,
                    tail_length: i,
                    cycle_length: len - i,
                    truncated: false,
                });
            }
            if points.len() == cap {
                return Ok(OrbitRecord {
                    start: p.clone(),
                    tail_length: points.len(),
                    points,
                    cycle_length: 0,
                    truncated: true,
                });
            }
            seen.insert(next.clone(), points.len());
            points.push(next);
        }
    }

    /// Primes dividing the resultant of the canonical lift.
    pub fn bad_primes(&self) -> Result<BTreeSet<BigInt>> {
        Ok(factorize(&self.resultant()?)?.into_keys().collect())
    }

    /// The canonical lift is an `O_S`-model with unit resultant.
    pub fn is_s_model(&self, s: &PlaceSet) -> Result<bool> {
        is_s_unit_int(&self.resultant()?, s)
    }

    pub fn valuation_of_resultant(&self, p: u64) -> Result<u64> {
        let r = self.resultant()?;
        if r.is_zero() {
            return Err(Error::domain("zero resultant"));
        }
        Ok(int_valuation(&r, &BigInt::from(p)))
    }

    /// Reduce the canonical lift modulo `p`.
    ///
    /// On the projective line the degree of the reduced map is found by
    /// removing the gcd of the two reduced binary forms over `F_p`; in higher
    /// dimension the morphism test is the Macaulay rank test over `F_p` and
    /// the degree is reported only when the reduction is a morphism.
    pub fn reduce_at_p(&self, p: u64) -> Result<ReductionReport> {
        if !crate::arith::is_prime_u64(p) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        let reduced: Vec<FormModP> = self.forms.iter().map(|f| f.reduce_mod(p)).collect();
        let (degree, is_morphism) = if self.n == 1 {
            let common = binary_common_factor_degree(&reduced[0], &reduced[1], p);
            let deg = self.d - common;
            (Some(deg), common == 0)
        } else {
            let ok = macaulay_matrix_rank_test(&bind_modulus(&reduced, p))?;
            (ok.then_some(self.d), ok)
        };
        Ok(ReductionReport {
            p,
            reduced,
            degree,
            is_morphism,
        })
    }
}

/// Zero coefficients never appear in a form, so every stored coefficient
/// already carries the modulus; this only documents that fact.
fn bind_modulus(forms: &[FormModP], p: u64) -> Vec<FormModP> {
    debug_assert!(forms
        .iter()
        .all(|f| f.terms().all(|(_, c)| c.modulus() == Some(p))));
    forms.to_vec()
}

/// Degree of the common factor of two binary forms of degree `d` over `F_p`.
fn binary_common_factor_degree(f: &FormModP, g: &FormModP, p: u64) -> u32 {
    let d = f.degree();
    if f.is_zero() {
        return d;
    }
    if g.is_zero() {
        return d;
    }
    let uni = |h: &FormModP| {
        UniPoly::new(
            h.dehomogenize_binary()
                .unwrap()
                .into_iter()
                .map(|c| if c.is_zero() { Zp::new(0, p) } else { c })
                .collect(),
        )
    };
    let (a, b) = (uni(f), uni(g));
    // the power of Y dividing a form is d minus the degree of F(x, 1)
    let ord_y = |u: &UniPoly<Zp>| d - u.degree().unwrap() as u32;
    let y_part = ord_y(&a).min(ord_y(&b));
    y_part + a.gcd(&b).degree().unwrap() as u32
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

impl fmt::Display for MorphismPN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.forms.iter().map(|g| g.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

impl fmt::Debug for MorphismPN {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MorphismPN({self})")
    }
}

/// A forward orbit with its tail/cycle structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitRecord {
    pub start: ProjPoint,
    pub points: Vec<ProjPoint>,
    pub tail_length: usize,
    /// Zero when truncated.
    pub cycle_length: usize,
    pub truncated: bool,
}

impl OrbitRecord {
    pub fn size(&self) -> usize {
        self.points.len()
    }
}

#[derive(Debug, Clone)]
pub struct ReductionReport {
    pub p: u64,
    pub reduced: Vec<FormModP>,
    /// Degree of the reduced map; `None` when unknown (higher dimension,
    /// not a morphism).
    pub degree: Option<u32>,
    pub is_morphism: bool,
}

impl ReductionReport {
    /// Reduced coefficients, per form, over all monomials of degree `d` in
    /// descending lexicographic order.
    pub fn reduced_coeffs(&self, degree: u32) -> Vec<Vec<u64>> {
        self.reduced
            .iter()
            .map(|f| {
                crate::forms::monomials_of_degree(f.n_vars(), degree)
                    .iter()
                    .map(|m| f.coeff(m).value())
                    .collect()
            })
            .collect()
    }
}

pub fn apply(phi: &MorphismPN, p: &ProjPoint) -> Result<ProjPoint> {
    phi.apply(p)
}

pub fn bad_primes_of_model(phi: &MorphismPN) -> Result<BTreeSet<BigInt>> {
    phi.bad_primes()
}

pub fn is_s_model(phi: &MorphismPN, s: &PlaceSet) -> Result<bool> {
    phi.is_s_model(s)
}
