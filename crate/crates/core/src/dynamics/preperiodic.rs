//! Rational preperiodic points by height-bounded search, with exact
//! periodic-point recovery on the projective line.

use std::collections::BTreeSet;

use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;

use super::{MorphismPN, MAX_ITERATE_DEGREE};
use crate::error::{Error, Result};
use crate::poly::rational_roots;
use crate::projective::ProjPoint;
use crate::IntForm;

/// Rational points of `P^1` where the binary form `h` vanishes.
pub fn binary_rational_roots(h: &IntForm) -> Result<Vec<ProjPoint>> {
    if h.n_vars() != 2 {
        return Err(Error::domain("not a binary form"));
    }
    if h.is_zero() {
        return Err(Error::domain("every point is a root of the zero form"));
    }
    let d = h.degree();
    let mut out = Vec::new();
    if h.coeff(&[d, 0]).is_zero() {
        out.push(ProjPoint::infinity());
    }
    let f = h.dehomogenize_binary()?;
    if f.iter().any(|c| !c.is_zero()) {
        out.extend(rational_roots(&f).iter().map(ProjPoint::affine));
    }
    out.sort();
    Ok(out)
}

/// Rational critical points of a map of the projective line: the rational
/// zeros of the Wronskian `F_X G_Y − F_Y G_X`.
pub fn critical_points(phi: &MorphismPN) -> Result<Vec<ProjPoint>> {
    if phi.n() != 1 {
        return Err(Error::Unsupported("critical points are computed on P^1 only".into()));
    }
    let [f, g] = [&phi.forms()[0], &phi.forms()[1]];
    let w = f.partial(0).mul(&g.partial(1)).sub(&f.partial(1).mul(&g.partial(0)));
    binary_rational_roots(&w)
}

/// Fixed points of `φ` on `P^1`: zeros of `X·G − Y·F`.
pub(crate) fn fixed_points(phi: &MorphismPN) -> Result<Vec<ProjPoint>> {
    let [f, g] = [&phi.forms()[0], &phi.forms()[1]];
    let x = IntForm::var(2, 0);
    let y = IntForm::var(2, 1);
    binary_rational_roots(&x.mul(g).sub(&y.mul(f)))
}

/// Canonical points with every coordinate in `[-bound, bound]` and the
/// given first coordinate.
fn canonical_points_with_first(n_vars: usize, bound: i64, first: i64) -> Vec<ProjPoint> {
    let mut out = Vec::new();
    let mut rest = vec![-bound; n_vars - 1];
    loop {
        let mut v = Vec::with_capacity(n_vars);
        v.push(first);
        v.extend_from_slice(&rest);
        let leading = v.iter().find(|&&c| c != 0);
        let g = v.iter().fold(0i64, |acc, &c| acc.gcd(&c));
        if leading.is_some_and(|&c| c > 0) && g == 1 {
            out.push(ProjPoint::from_i64(&v).unwrap());
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == rest.len() {
                return out;
            }
            if rest[i] < bound {
                rest[i] += 1;
                break;
            }
            rest[i] = -bound;
            i += 1;
        }
    }
}

/// Rational points whose forward orbit has at most `max_orbit` elements.
///
/// Searches all canonical points with coordinates bounded by `height_bound`;
/// membership is decided by an orbit computation capped at `max_orbit + 1`
/// points. On `P^1` the result also contains every rational root of the
/// fixed-point forms of `φ^k` for `k ≤ max_orbit` (iterates beyond
/// degree 64 are skipped), which picks up periodic points of any height.
pub fn rational_preperiodic(
    phi: &MorphismPN,
    max_orbit: usize,
    height_bound: u64,
) -> Result<BTreeSet<ProjPoint>> {
    if phi.degree() < 2 {
        return Err(Error::domain("preperiodic points need degree at least 2"));
    }
    if max_orbit == 0 || height_bound == 0 {
        return Err(Error::domain("orbit size and height bound must be positive"));
    }
    let bound =
        i64::try_from(height_bound).map_err(|_| Error::Resource("height bound too large".into()))?;
    let n_vars = phi.n() + 1;
    let accept = |p: &ProjPoint| -> Result<bool> {
        let orbit = phi.orbit(p, max_orbit + 1)?;
        Ok(!orbit.truncated && orbit.size() <= max_orbit)
    };
    let found: Vec<Vec<ProjPoint>> = (0..=bound)
        .into_par_iter()
        .map(|first| {
            canonical_points_with_first(n_vars, bound, first)
                .into_iter()
                .filter_map(|p| match accept(&p) {
                    Ok(true) => Some(Ok(p)),
                    Ok(false) => None,
                    Err(e) => Some(Err(e)),
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut out: BTreeSet<ProjPoint> = found.into_iter().flatten().collect();
    if phi.n() == 1 {
        for k in 1..=max_orbit as u32 {
            if (phi.degree() as u64)
                .checked_pow(k)
                .is_none_or(|d| d > MAX_ITERATE_DEGREE)
            {
                break;
            }
            for p in fixed_points(&phi.iterate(k)?)? {
                if accept(&p)? {
                    out.insert(p);
                }
            }
        }
    }
    Ok(out)
}
