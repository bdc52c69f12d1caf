//! Projective linear maps carrying one point set onto another, and the
//! rational conjugacies between two morphisms that they bound.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{act, PointSet};
use crate::dynamics::{critical_points, rational_preperiodic, MorphismPN};
use crate::error::{Error, Result};
use crate::linalg::{int_adjugate, int_determinant, int_mat_mul, Matrix};
use crate::projective::{combinations, in_general_position, ProjLinearMap, ProjPoint};

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Integer matrix sending the standard frame `e_0, …, e_n, e_0+…+e_n` to the
/// given `n+2` points (up to scalars). Cramer's rule without the common
/// denominator.
fn frame_matrix(pts: &[ProjPoint]) -> Matrix<BigInt> {
    let size = pts.len() - 1;
    let columns: Matrix<BigInt> = pts[..size].iter().map(|p| p.coords().to_vec()).collect();
    let last = pts[size].coords();
    let weights: Vec<BigInt> = (0..size)
        .map(|i| {
            let mut cols = columns.clone();
            cols[i] = last.to_vec();
            int_determinant(&cols)
        })
        .collect();
    (0..size)
        .map(|r| (0..size).map(|c| &weights[c] * &columns[c][r]).collect())
        .collect()
}

fn general_position_subsets(pts: &[ProjPoint], k: usize) -> Vec<Vec<ProjPoint>> {
    combinations(pts.len(), k)
        .into_iter()
        .map(|idx| idx.iter().map(|&i| pts[i].clone()).collect::<Vec<_>>())
        .filter(|sub| in_general_position(sub).unwrap_or(false))
        .collect()
}

/// Every `f ∈ PGL_{n+1}(Q)` with `f(V) = W`, sorted.
pub fn maps_between(v: &PointSet, w: &PointSet) -> Result<Vec<ProjLinearMap>> {
    Error::check_dim(v.n() + 1, w.n() + 1)?;
    if v.len() != w.len() {
        return Err(Error::domain(format!("point sets of sizes {} and {}", v.len(), w.len())));
    }
    let k = v.n() + 2;
    let vs = v.to_vec();
    let Some(anchor) = general_position_subsets(&vs, k).into_iter().next() else {
        return Err(Error::domain(format!("no {k} points of the source in general position")));
    };
    let inv = int_adjugate(&frame_matrix(&anchor));
    let perms = permutations(k);
    let mut out = BTreeSet::new();
    for sub in general_position_subsets(&w.to_vec(), k) {
        for perm in &perms {
            let image: Vec<ProjPoint> = perm.iter().map(|&i| sub[i].clone()).collect();
            let f = ProjLinearMap::new(int_mat_mul(&frame_matrix(&image), &inv))?;
            if act(&f, v)? == *w {
                out.insert(f);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Rational points that any rational conjugacy must permute: the rational
/// preperiodic points found within the bounds and, on `P^1`, the rational
/// critical points together with their first `max_orbit` images.
pub fn anchor_points(phi: &MorphismPN, max_orbit: usize, height_bound: u64) -> Result<BTreeSet<ProjPoint>> {
    let mut out = rational_preperiodic(phi, max_orbit, height_bound)?;
    if phi.n() == 1 {
        for c in critical_points(phi)? {
            let mut p = c;
            for _ in 0..=max_orbit {
                let next = phi.apply(&p)?;
                out.insert(p);
                p = next;
            }
        }
    }
    Ok(out)
}

fn rational_roots_of(r: &BigRational, k: u32) -> Vec<BigRational> {
    let root = |n: &BigInt| {
        let a = n.abs().nth_root(k);
        (num_traits::pow(a.clone(), k as usize) == n.abs()).then_some(a)
    };
    if r.is_zero() || (r.is_negative() && k % 2 == 0) {
        return vec![];
    }
    let (Some(num), Some(den)) = (root(r.numer()), root(r.denom())) else {
        return vec![];
    };
    let c = BigRational::new(num, den);
    if r.is_negative() {
        vec![-c]
    } else if k % 2 == 0 {
        vec![c.clone(), -c]
    } else {
        vec![c]
    }
}

/// Candidate `c` with `φ'` conjugated by `z ↦ cz` proportional to `ψ'`, on
/// `P^1`. Conjugation multiplies the `X^j Y^{d-j}` term of the first form by
/// `c^{1+d-j}` and of the second by `c^{d-j}`.
fn torus_parameters(phi: &MorphismPN, psi: &MorphismPN) -> Vec<BigRational> {
    let terms = |m: &MorphismPN| -> Vec<(usize, Vec<u32>, BigInt, i64)> {
        m.forms()
            .iter()
            .enumerate()
            .flat_map(|(i, f)| {
                f.terms()
                    .map(move |(mono, c)| (i, mono.clone(), c.clone(), (1 - i as i64) + mono[1] as i64))
                    .collect::<Vec<_>>()
            })
            .collect()
    };
    let (a, b) = (terms(phi), terms(psi));
    if a.len() != b.len() || a.iter().zip(&b).any(|(s, t)| s.0 != t.0 || s.1 != t.1) {
        return vec![];
    }
    let (_, _, a0, e0) = &a[0];
    let b0 = &b[0].2;
    let best = a
        .iter()
        .zip(&b)
        .filter(|(s, _)| s.3 != *e0)
        .min_by_key(|(s, _)| (s.3 - e0).abs());
    let Some(((_, _, at, et), (_, _, bt, _))) = best else {
        return vec![];
    };
    // c^{e_t - e_0} = (b_t a_0) / (b_0 a_t)
    let mut r = BigRational::new(bt * a0, b0 * at);
    let mut k = et - e0;
    if k < 0 {
        r = r.recip();
        k = -k;
    }
    rational_roots_of(&r, k as u32)
}

/// Map of `P^1` sending `∞ ↦ a` and `0 ↦ b`.
fn two_point_frame(a: &ProjPoint, b: &ProjPoint) -> Result<ProjLinearMap> {
    let (a, b) = (a.coords(), b.coords());
    ProjLinearMap::new(vec![vec![a[0].clone(), b[0].clone()], vec![a[1].clone(), b[1].clone()]])
}

fn torus_conjugacies(
    phi: &MorphismPN,
    psi: &MorphismPN,
    e_phi: &[ProjPoint],
    e_psi: &[ProjPoint],
) -> Result<Vec<ProjLinearMap>> {
    let p_phi = two_point_frame(&e_phi[0], &e_phi[1])?;
    let phi0 = phi.conjugate(&p_phi.inverse())?;
    let mut out = BTreeSet::new();
    for (a, b) in [(&e_psi[0], &e_psi[1]), (&e_psi[1], &e_psi[0])] {
        let p_psi = two_point_frame(a, b)?;
        let psi0 = psi.conjugate(&p_psi.inverse())?;
        for c in torus_parameters(&phi0, &psi0) {
            let dc = ProjLinearMap::from_rationals(&[
                vec![c, BigRational::zero()],
                vec![BigRational::zero(), BigRational::one()],
            ])?;
            let f = p_psi.compose(&dc)?.compose(&p_phi.inverse())?;
            if phi.conjugate(&f)? == *psi {
                out.insert(f);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Preference order among witnesses: small entries, few negative signs.
fn witness_key(f: &ProjLinearMap) -> (BigInt, usize, ProjLinearMap) {
    let entries = f.lift().iter().flatten();
    let max = entries.clone().map(|c| c.abs()).max().unwrap_or_default();
    let negatives = entries.filter(|c| c.is_negative()).count();
    (max, negatives, f.clone())
}

fn has_frame(pts: &[ProjPoint], n: usize) -> bool {
    pts.len() >= n + 2 && !general_position_subsets(pts, n + 2).is_empty()
}

/// Rational `f` with `φ^f = ψ` that carry the anchor set of `φ` onto that
/// of `ψ`, best witness first; `None` when the anchors are too few to bound
/// the search.
pub(super) fn conjugacies_over(
    phi: &MorphismPN,
    psi: &MorphismPN,
    e_phi: &BTreeSet<ProjPoint>,
    e_psi: &BTreeSet<ProjPoint>,
) -> Result<Option<Vec<ProjLinearMap>>> {
    if e_phi.len() != e_psi.len() {
        return Ok(Some(vec![]));
    }
    let n = phi.n();
    let (a, b): (Vec<_>, Vec<_>) = (e_phi.iter().cloned().collect(), e_psi.iter().cloned().collect());
    let mut found = if has_frame(&a, n) {
        let v = PointSet::new(a)?;
        let w = PointSet::new(b)?;
        if !has_frame(&w.to_vec(), n) {
            return Ok(Some(vec![]));
        }
        let mut out = Vec::new();
        for f in maps_between(&v, &w)? {
            if phi.conjugate(&f)? == *psi {
                out.push(f);
            }
        }
        out
    } else if n == 1 && a.len() == 2 {
        torus_conjugacies(phi, psi, &a, &b)?
    } else {
        return Ok(None);
    };
    found.sort_by_cached_key(witness_key);
    Ok(Some(found))
}

fn check_pair(phi: &MorphismPN, psi: &MorphismPN) -> Result<()> {
    Error::check_dim(phi.n() + 1, psi.n() + 1)?;
    if phi.degree() != psi.degree() {
        return Err(Error::domain(format!("degrees {} and {} differ", phi.degree(), psi.degree())));
    }
    if phi.degree() < 2 {
        return Err(Error::domain("conjugacy search needs degree at least 2"));
    }
    Ok(())
}

/// All rational conjugacies from `φ` to `ψ` visible through the anchor
/// sets, best witness first. `None` means inconclusive.
pub fn conjugating_maps(
    phi: &MorphismPN,
    psi: &MorphismPN,
    max_orbit: usize,
    height_bound: u64,
) -> Result<Option<Vec<ProjLinearMap>>> {
    check_pair(phi, psi)?;
    let e_phi = anchor_points(phi, max_orbit, height_bound)?;
    let e_psi = anchor_points(psi, max_orbit, height_bound)?;
    conjugacies_over(phi, psi, &e_phi, &e_psi)
}

/// Rational automorphisms of `φ`, sorted.
pub fn automorphism_group(phi: &MorphismPN, max_orbit: usize, height_bound: u64) -> Result<Vec<ProjLinearMap>> {
    match conjugating_maps(phi, phi, max_orbit, height_bound)? {
        Some(mut maps) => {
            maps.sort();
            Ok(maps)
        }
        None => Err(Error::Inconclusive(format!(
            "fewer than {} anchor points in general position",
            phi.n() + 2
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KIsoVerdict {
    Yes { witness: ProjLinearMap },
    /// Sound only relative to the computed anchor sets.
    NoRationalWitness { reason: String },
    Inconclusive { reason: String },
}

impl KIsoVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, KIsoVerdict::Yes { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            KIsoVerdict::Yes { .. } => "yes",
            KIsoVerdict::NoRationalWitness { .. } => "no rational witness over the computed sets",
            KIsoVerdict::Inconclusive { .. } => "inconclusive",
        }
    }
}

pub fn is_k_isomorphic(
    phi: &MorphismPN,
    psi: &MorphismPN,
    max_orbit: usize,
    height_bound: u64,
) -> Result<KIsoVerdict> {
    check_pair(phi, psi)?;
    let e_phi = anchor_points(phi, max_orbit, height_bound)?;
    let e_psi = anchor_points(psi, max_orbit, height_bound)?;
    if e_phi.len() != e_psi.len() {
        return Ok(KIsoVerdict::NoRationalWitness {
            reason: format!("anchor sets have {} and {} points", e_phi.len(), e_psi.len()),
        });
    }
    Ok(match conjugacies_over(phi, psi, &e_phi, &e_psi)? {
        None => KIsoVerdict::Inconclusive {
            reason: format!("{} anchor points, too few to fix a frame", e_phi.len()),
        },
        Some(maps) => match maps.into_iter().next() {
            Some(witness) => KIsoVerdict::Yes { witness },
            None => KIsoVerdict::NoRationalWitness {
                reason: format!("no map between the {} anchor points conjugates", e_phi.len()),
            },
        },
    })
}
