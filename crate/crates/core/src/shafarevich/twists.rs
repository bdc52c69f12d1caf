//! Quadratic twists of odd maps of the projective line and the S-integral
//! twist set they parameterize.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::maps::{anchor_points, conjugacies_over};
use crate::arith::{square_class_reps, PlaceSet, SquareClass};
use crate::dynamics::MorphismPN;
use crate::error::{Error, Result};
use crate::projective::ProjLinearMap;
use crate::Form;

/// Scope of [`enumerate_twist_set`]: one twist per square class, which
/// exhausts the twists exactly when the geometric automorphism group is
/// `{±1}`.
pub const TWIST_COMPLETENESS: &str = "complete relative to the Z/2 parameterization";

/// `φ` commutes with `z ↦ -z`.
pub fn is_odd(phi: &MorphismPN) -> Result<bool> {
    if phi.n() != 1 {
        return Ok(false);
    }
    Ok(phi.conjugate(&ProjLinearMap::mobius(-1, 0, 0, 1)?)? == *phi)
}

/// `φ` conjugated by `z ↦ cz` with `c² = γ`. Oddness makes every
/// coefficient pick up powers of `c` of one parity, so after dividing by a
/// common `c` only powers of `γ` remain.
pub fn quadratic_twist(phi: &MorphismPN, gamma: &BigRational) -> Result<MorphismPN> {
    if gamma.is_zero() {
        return Err(Error::domain("twist parameter must be nonzero"));
    }
    if !is_odd(phi)? {
        return Err(Error::Unsupported(format!("{phi} is not an odd map of P^1")));
    }
    let d = phi.degree();
    let mut parity = None;
    let mut forms = Vec::with_capacity(2);
    for (i, f) in phi.forms().iter().enumerate() {
        let mut terms = Vec::new();
        for (mono, c) in f.terms() {
            // first form: c^{1 + deg_Y}, second: c^{deg_Y}
            let e = (1 - i as u32) + mono[1];
            match parity {
                None => parity = Some(e % 2),
                Some(q) if q != e % 2 => {
                    return Err(Error::Unsupported("mixed parities in twist exponents".into()))
                }
                _ => {}
            }
            let k = (e - parity.unwrap()) / 2;
            terms.push((mono.clone(), BigRational::from_integer(c.clone()) * num_traits::pow(gamma.clone(), k as usize)));
        }
        forms.push(Form::from_terms(2, d, terms)?);
    }
    MorphismPN::new(forms)
}

#[derive(Debug, Clone)]
pub struct TwistRecord {
    pub gamma: SquareClass,
    pub model: MorphismPN,
    pub resultant: BigInt,
    pub bad_primes: BTreeSet<BigInt>,
    pub s_model: bool,
    /// Records sharing an index were shown K-isomorphic.
    pub k_iso_class: usize,
}

#[derive(Debug, Clone)]
pub struct TwistReport {
    pub records: Vec<TwistRecord>,
    pub completeness: &'static str,
    pub iso_checked: bool,
    /// Pairs of record indices whose isomorphism test was inconclusive.
    pub inconclusive_pairs: Vec<(usize, usize)>,
}

/// One twist of `φ` per square class of S-units.
pub fn enumerate_twist_set(phi: &MorphismPN, s: &PlaceSet) -> Result<TwistReport> {
    if phi.n() != 1 || !is_odd(phi)? {
        return Err(Error::Unsupported(format!("{phi} is not an odd map of P^1")));
    }
    if !phi.is_s_model(s)? {
        return Err(Error::Unsupported(format!("{phi} has bad reduction outside S = {s}")));
    }
    let records = square_class_reps(s)
        .into_iter()
        .enumerate()
        .map(|(i, gamma)| {
            let model = quadratic_twist(phi, &gamma.as_rational())?;
            Ok(TwistRecord {
                resultant: model.resultant()?,
                bad_primes: model.bad_primes()?,
                s_model: model.is_s_model(s)?,
                gamma,
                model,
                k_iso_class: i,
            })
        })
        .collect::<Result<_>>()?;
    Ok(TwistReport {
        records,
        completeness: TWIST_COMPLETENESS,
        iso_checked: false,
        inconclusive_pairs: vec![],
    })
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    parent[i] = r;
    r
}

/// Runs the pairwise K-isomorphism test and merges classes that are shown
/// isomorphic; class indices are the smallest member index.
pub fn classify_twists(report: &mut TwistReport, max_orbit: usize, height_bound: u64) -> Result<()> {
    let anchors = report
        .records
        .iter()
        .map(|r| anchor_points(&r.model, max_orbit, height_bound))
        .collect::<Result<Vec<_>>>()?;
    let n = report.records.len();
    let mut parent: Vec<usize> = (0..n).collect();
    report.inconclusive_pairs.clear();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&report.records[i].model, &report.records[j].model);
            match conjugacies_over(a, b, &anchors[i], &anchors[j])? {
                Some(maps) if !maps.is_empty() => {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri.max(rj)] = ri.min(rj);
                }
                Some(_) => {}
                None => report.inconclusive_pairs.push((i, j)),
            }
        }
    }
    for i in 0..n {
        report.records[i].k_iso_class = find(&mut parent, i);
    }
    report.iso_checked = true;
    Ok(())
}
