//! Finite point sets, their decomposable forms and discriminant ideals, the
//! action of projective linear maps on them, and quadratic twists.

mod maps;
mod twists;
#[cfg(test)]
mod tests;

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{PlaceSet, SIdeal};
use crate::error::{Error, Result};
use crate::forms::LinearForm;
use crate::projective::{combinations, det_points, ProjLinearMap, ProjPoint};
use crate::{Form, IntForm};

pub use maps::{
    anchor_points, automorphism_group, conjugating_maps, is_k_isomorphic, maps_between, KIsoVerdict,
};
pub use twists::{
    classify_twists, enumerate_twist_set, is_odd, quadratic_twist, TwistRecord, TwistReport,
    TWIST_COMPLETENESS,
};

/// A finite set of distinct rational points of `P^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    n: usize,
    points: BTreeSet<ProjPoint>,
}

impl PointSet {
    pub fn new(points: impl IntoIterator<Item = ProjPoint>) -> Result<Self> {
        let mut set = BTreeSet::new();
        let mut n = None;
        for p in points {
            match n {
                None => n = Some(p.dim()),
                Some(m) => Error::check_dim(m + 1, p.dim() + 1)?,
            }
            if !set.insert(p.clone()) {
                return Err(Error::domain(format!("point {p} listed twice")));
            }
        }
        let n = n.ok_or_else(|| Error::domain("empty point set"))?;
        Ok(PointSet { n, points: set })
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::new(crate::projective::parse_points(s)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &BTreeSet<ProjPoint> {
        &self.points
    }

    pub fn to_vec(&self) -> Vec<ProjPoint> {
        self.points.iter().cloned().collect()
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.points.contains(p)
    }

    /// Some `n+1` of the points are linearly independent.
    pub fn has_independent_frame(&self) -> bool {
        let pts = self.to_vec();
        pts.len() > self.n
            && combinations(pts.len(), self.n + 1).iter().any(|idx| {
                let tuple: Vec<ProjPoint> = idx.iter().map(|&i| pts[i].clone()).collect();
                !det_points(&tuple).unwrap().is_zero()
            })
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.points.iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// `λ · ∏ ℓ_i^{k_i}` with pairwise non-proportional rational linear forms,
/// each stored normalized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecomposableForm {
    factors: Vec<(LinearForm, u32)>,
    scalar: BigRational,
}

impl DecomposableForm {
    pub fn new(factors: Vec<(LinearForm, u32)>, scalar: BigRational) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::domain("a decomposable form needs at least one factor"));
        }
        if scalar.is_zero() {
            return Err(Error::domain("zero scalar"));
        }
        let n_vars = factors[0].0.n_vars();
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(factors.len());
        let mut scalar = scalar;
        for (l, k) in factors {
            Error::check_dim(n_vars, l.n_vars())?;
            if k == 0 {
                return Err(Error::domain("factor multiplicities must be positive"));
            }
            let raw = l.clone();
            let l = l.normalized();
            let i = raw.coeffs().iter().position(|c| !c.is_zero()).unwrap();
            let ratio = BigRational::new(raw.coeffs()[i].clone(), l.coeffs()[i].clone());
            scalar *= num_traits::pow(ratio, k as usize);
            if !seen.insert(l.clone()) {
                return Err(Error::domain(format!("proportional factors {}", l.to_form())));
            }
            out.push((l, k));
        }
        Ok(DecomposableForm { factors: out, scalar })
    }

    pub fn factors(&self) -> &[(LinearForm, u32)] {
        &self.factors
    }

    pub fn scalar(&self) -> &BigRational {
        &self.scalar
    }

    pub fn n_vars(&self) -> usize {
        self.factors[0].0.n_vars()
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|(_, k)| k).sum()
    }

    pub fn scaled(&self, gamma: &BigRational) -> Result<Self> {
        Self::new(self.factors.clone(), &self.scalar * gamma)
    }

    /// The product of the normalized factors, without the scalar.
    pub fn product(&self) -> IntForm {
        self.factors
            .iter()
            .fold(IntForm::constant(self.n_vars(), BigInt::one()), |acc, (l, k)| {
                acc.mul(&l.to_form().pow(*k))
            })
    }

    pub fn expand(&self) -> Form {
        self.product().to_rational().scale(&self.scalar)
    }
}

/// The form `∏ ℓ_P` whose factors have the coordinates of the points as
/// coefficients. The product of primitive forms is primitive, so the
/// scalar is 1.
pub fn form_of_point_set(v: &PointSet) -> DecomposableForm {
    let factors = v
        .points
        .iter()
        .map(|p| (LinearForm::new(p.coords().to_vec()).unwrap(), 1))
        .collect();
    DecomposableForm::new(factors, BigRational::one()).unwrap()
}

/// Product over linearly independent `(n+1)`-subsets of distinct factors
/// of the squared determinant, as an ideal away from `S`.
pub fn discriminant_ideal(f: &DecomposableForm, s: &PlaceSet) -> Result<SIdeal> {
    let size = f.n_vars();
    let rows: Vec<ProjPoint> = f
        .factors
        .iter()
        .map(|(l, _)| ProjPoint::from_ints(l.coeffs()))
        .collect::<Result<_>>()?;
    let mut acc = SIdeal::unit();
    let mut any = false;
    for idx in combinations(rows.len(), size) {
        let tuple: Vec<ProjPoint> = idx.iter().map(|&i| rows[i].clone()).collect();
        let det = det_points(&tuple)?;
        if det.is_zero() {
            continue;
        }
        any = true;
        let sq = BigRational::from_integer(&det * &det);
        acc = acc.mul(&SIdeal::from_rational(&sq, s)?);
    }
    if !any {
        return Err(Error::domain("no linearly independent set of factors: discriminant undefined"));
    }
    Ok(acc)
}

/// The conditions defining membership in `P(S, N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassPReport {
    pub cardinality: bool,
    /// Vacuous for rational points.
    pub galois_stable: bool,
    pub independent_frame: bool,
    /// `None` when the discriminant is undefined.
    pub discriminant: Option<SIdeal>,
    pub unit_discriminant: bool,
}

impl ClassPReport {
    pub fn holds(&self) -> bool {
        self.cardinality && self.galois_stable && self.independent_frame && self.unit_discriminant
    }
}

pub fn in_class_p(v: &PointSet, s: &PlaceSet, n_points: usize) -> Result<ClassPReport> {
    let independent_frame = v.has_independent_frame();
    let discriminant =
        if independent_frame { Some(discriminant_ideal(&form_of_point_set(v), s)?) } else { None };
    Ok(ClassPReport {
        cardinality: v.len() == n_points,
        galois_stable: true,
        independent_frame,
        unit_discriminant: discriminant.as_ref().is_some_and(SIdeal::is_unit),
        discriminant,
    })
}

/// `f(V)`.
pub fn act(f: &ProjLinearMap, v: &PointSet) -> Result<PointSet> {
    Error::check_dim(v.n, f.dim())?;
    PointSet::new(v.points.iter().map(|p| f.apply(p)).collect::<Result<Vec<_>>>()?)
}

/// Compares the discriminant ideals of `V` and `f(V)` for an S-unimodular
/// `f`. A `false` return means the implementation is wrong.
pub fn discriminant_invariance_check(v: &PointSet, f: &ProjLinearMap, s: &PlaceSet) -> Result<bool> {
    if !f.is_s_unimodular(s) {
        return Err(Error::domain(format!("{f} is not S-unimodular for S = {s}")));
    }
    if !v.has_independent_frame() {
        return Err(Error::domain("point set has no independent frame"));
    }
    let before = discriminant_ideal(&form_of_point_set(v), s)?;
    let after = discriminant_ideal(&form_of_point_set(&act(f, v)?), s)?;
    Ok(before == after)
}

/// `G(A·X)` for the lift of `A`.
fn pull_back(g: &DecomposableForm, a: &ProjLinearMap) -> Result<Form> {
    let rows: Vec<Vec<BigRational>> = a
        .lift()
        .iter()
        .map(|r| r.iter().map(|c| BigRational::from_integer(c.clone())).collect())
        .collect();
    g.expand().linear_substitute(&rows)
}

fn check_same_shape(f: &DecomposableForm, g: &DecomposableForm, a: &ProjLinearMap) -> Result<()> {
    Error::check_dim(f.n_vars(), g.n_vars())?;
    Error::check_dim(f.n_vars(), a.dim() + 1)?;
    if f.degree() != g.degree() {
        return Err(Error::domain(format!(
            "degree mismatch: {} versus {}",
            f.degree(),
            g.degree()
        )));
    }
    Ok(())
}

/// The unique `λ` with `F = λ·G(A·X)`, if any.
pub fn forced_lambda(f: &DecomposableForm, g: &DecomposableForm, a: &ProjLinearMap) -> Result<Option<BigRational>> {
    check_same_shape(f, g, a)?;
    let lhs = f.expand();
    let rhs = pull_back(g, a)?;
    let Some((m, c)) = lhs.leading() else {
        return Ok(None);
    };
    let denom = rhs.coeff(m);
    if denom.is_zero() {
        return Ok(None);
    }
    let lambda = c / denom;
    Ok((rhs.scale(&lambda) == lhs).then_some(lambda))
}

/// Checks `F = λ·G(A·X)`; on success pairs each factor index of `F` with the
/// factor of `G` it comes from, factor `q` of `G` going to `A^t q`.
pub fn weak_equivalence_transport(
    f: &DecomposableForm,
    g: &DecomposableForm,
    a: &ProjLinearMap,
    lambda: &BigRational,
) -> Result<Option<Vec<(usize, usize)>>> {
    check_same_shape(f, g, a)?;
    if pull_back(g, a)?.scale(lambda) != f.expand() {
        return Ok(None);
    }
    let at = a.transpose();
    let mut pairs = Vec::with_capacity(g.factors.len());
    for (j, (q, k)) in g.factors.iter().enumerate() {
        let image = at.apply(&ProjPoint::from_ints(q.coeffs())?)?;
        let target = LinearForm::new(image.coords().to_vec())?;
        match f.factors.iter().position(|(l, kf)| *l == target && kf == k) {
            Some(i) => pairs.push((i, j)),
            None => return Ok(None),
        }
    }
    pairs.sort();
    Ok(Some(pairs))
}
