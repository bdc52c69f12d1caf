//! Points of projective space over the rationals and projective linear maps,
//! both held as canonical primitive integer representatives.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::{is_s_unit_int, PlaceSet};
use crate::error::{Error, Result};
use crate::linalg::{int_adjugate, int_determinant, int_mat_mul, int_mat_vec, transpose, Matrix};
use crate::scalar::Zp;

/// Divide by the gcd and make the first nonzero entry positive.
fn primitive(v: &[BigInt]) -> Option<Vec<BigInt>> {
    let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return None;
    }
    let first_neg = v.iter().find(|c| !c.is_zero())?.is_negative();
    let g = if first_neg { -g } else { g };
    Some(v.iter().map(|c| c / &g).collect())
}

/// A point of `P^n(Q)` with coprime integer coordinates whose first nonzero
/// entry is positive. Equality, ordering and hashing act on this canonical
/// representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    coords: Vec<BigInt>,
}

impl ProjPoint {
    pub fn from_ints(coords: &[BigInt]) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::domain("a projective point needs at least two coordinates"));
        }
        primitive(coords)
            .map(|coords| ProjPoint { coords })
            .ok_or_else(|| Error::domain("the zero vector is not a projective point"))
    }

    pub fn from_i64(coords: &[i64]) -> Result<Self> {
        Self::from_ints(&coords.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>())
    }

    /// The point `z = (z : 1)` of the projective line.
    pub fn affine(z: &BigRational) -> Self {
        ProjPoint::from_ints(&[z.numer().clone(), z.denom().clone()]).unwrap()
    }

    /// `(1 : 0)` on the projective line.
    pub fn infinity() -> Self {
        ProjPoint::from_i64(&[1, 0]).unwrap()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    /// Ambient dimension `n`.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn max_abs_coord(&self) -> BigInt {
        self.coords.iter().map(|c| c.abs()).max().unwrap()
    }

    /// Affine coordinate `X/Y` on the projective line, `None` at infinity.
    pub fn as_affine(&self) -> Option<BigRational> {
        (self.coords.len() == 2 && !self.coords[1].is_zero())
            .then(|| BigRational::new(self.coords[0].clone(), self.coords[1].clone()))
    }
}

pub fn normalize_point(raw: &[BigRational]) -> Result<ProjPoint> {
    let den = raw.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = raw
        .iter()
        .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    ProjPoint::from_ints(&ints)
}

/// Coordinates mod `p`. Never the zero vector, since some coordinate of a
/// primitive vector is a unit at `p`.
pub fn reduce_point(point: &ProjPoint, p: u64) -> Vec<Zp> {
    point.coords.iter().map(|c| Zp::from_bigint(c, p)).collect()
}

/// Determinant of the matrix whose rows are the canonical coordinates.
pub fn det_points(points: &[ProjPoint]) -> Result<BigInt> {
    let size = points.first().map_or(0, |p| p.coords.len());
    if points.len() != size || size == 0 {
        return Err(Error::domain(format!(
            "need exactly n+1 points of P^n, got {} points",
            points.len()
        )));
    }
    for p in points {
        Error::check_dim(size, p.coords.len())?;
    }
    let m: Matrix<BigInt> = points.iter().map(|p| p.coords.clone()).collect();
    Ok(int_determinant(&m))
}

/// All `k`-subsets of `0..n` as sorted index lists, in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// No `n+1` of the points lie on a hyperplane.
pub fn in_general_position(points: &[ProjPoint]) -> Result<bool> {
    let Some(first) = points.first() else {
        return Err(Error::domain("empty point set"));
    };
    let size = first.coords.len();
    if points.len() < size {
        return Err(Error::domain(format!(
            "general position needs at least {size} points, got {}",
            points.len()
        )));
    }
    for idx in combinations(points.len(), size) {
        let tuple: Vec<ProjPoint> = idx.iter().map(|&i| points[i].clone()).collect();
        if det_points(&tuple)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(" : "))
    }
}

impl FromStr for ProjPoint {
    type Err = Error;

    /// Parses `(a : b : c)`; the parentheses are optional.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t.strip_prefix('(').map_or(t, |r| r.strip_suffix(')').unwrap_or(r));
        let coords = t
            .split(':')
            .map(|c| {
                c.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::parse(format!("bad coordinate {c:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        ProjPoint::from_ints(&coords)
    }
}

/// Parse a JSON array of integer coordinate arrays, `[[a,b],[c,d],…]`.
/// Integers may be JSON numbers or decimal strings.
pub fn parse_points_json(s: &str) -> Result<Vec<ProjPoint>> {
    let v: Vec<Vec<serde_json::Value>> =
        serde_json::from_str(s).map_err(|e| Error::parse(format!("point set JSON: {e}")))?;
    v.iter()
        .map(|row| {
            let coords = row
                .iter()
                .map(|x| {
                    let text = match x {
                        serde_json::Value::Number(n) => n.to_string(),
                        serde_json::Value::String(s) => s.clone(),
                        other => return Err(Error::parse(format!("bad coordinate {other}"))),
                    };
                    text.parse::<BigInt>()
                        .map_err(|_| Error::parse(format!("coordinate {text} is not an integer")))
                })
                .collect::<Result<Vec<_>>>()?;
            ProjPoint::from_ints(&coords)
        })
        .collect()
}

/// Parse a point list either as JSON or as `(a : b); (c : d); …`.
pub fn parse_points(s: &str) -> Result<Vec<ProjPoint>> {
    let t = s.trim();
    if t.starts_with('[') {
        return parse_points_json(t);
    }
    t.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(str::parse)
        .collect()
}

pub fn points_to_json(points: &[ProjPoint]) -> String {
    let rows: Vec<String> = points
        .iter()
        .map(|p| {
            let c: Vec<String> = p.coords.iter().map(|x| x.to_string()).collect();
            format!("[{}]", c.join(","))
        })
        .collect();
    format!("[{}]", rows.join(","))
}

/// An element of `PGL_{n+1}(Q)` held as a primitive integer matrix whose
/// first nonzero entry is positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjLinearMap {
    lift: Matrix<BigInt>,
}

impl ProjLinearMap {
    pub fn new(lift: Matrix<BigInt>) -> Result<Self> {
        let n = lift.len();
        if n < 2 || lift.iter().any(|r| r.len() != n) {
            return Err(Error::domain("a projective linear map needs a square matrix of size ≥ 2"));
        }
        if int_determinant(&lift).is_zero() {
            return Err(Error::domain("singular matrix"));
        }
        let flat: Vec<BigInt> = lift.iter().flatten().cloned().collect();
        let flat = primitive(&flat).unwrap();
        Ok(ProjLinearMap {
            lift: flat.chunks(n).map(<[BigInt]>::to_vec).collect(),
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn from_rationals(rows: &[Vec<BigRational>]) -> Result<Self> {
        let den = rows
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let den = BigRational::from_integer(den);
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|c| (c * &den).to_integer()).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let lift = (0..=n)
            .map(|i| (0..=n).map(|j| BigInt::from((i == j) as i64)).collect())
            .collect();
        ProjLinearMap { lift }
    }

    /// `z ↦ (a z + b) / (c z + d)` on the projective line.
    pub fn mobius(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::from_i64(&[&[a, b], &[c, d]])
    }

    pub fn lift(&self) -> &Matrix<BigInt> {
        &self.lift
    }

    pub fn dim(&self) -> usize {
        self.lift.len() - 1
    }

    pub fn det(&self) -> BigInt {
        int_determinant(&self.lift)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim())
    }

    pub fn apply(&self, p: &ProjPoint) -> Result<ProjPoint> {
        Error::check_dim(self.lift.len(), p.coords.len())?;
        ProjPoint::from_ints(&int_mat_vec(&self.lift, &p.coords))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        Error::check_dim(self.lift.len(), other.lift.len())?;
        Self::new(int_mat_mul(&self.lift, &other.lift))
    }

    /// The inverse, through the adjugate of the lift.
    pub fn inverse(&self) -> Self {
        Self::new(int_adjugate(&self.lift)).expect("adjugate of an invertible matrix")
    }

    pub fn transpose(&self) -> Self {
        Self::new(transpose(&self.lift)).unwrap()
    }

    /// The canonical lift lies in `GL_{n+1}(O_S)`: its determinant is an S-unit.
    pub fn is_s_unimodular(&self, s: &PlaceSet) -> bool {
        is_s_unit_int(&self.det(), s).expect("nonzero determinant")
    }
}

pub fn apply_map(f: &ProjLinearMap, p: &ProjPoint) -> Result<ProjPoint> {
    f.apply(p)
}

pub fn is_s_unimodular(f: &ProjLinearMap, s: &PlaceSet) -> bool {
    f.is_s_unimodular(s)
}

impl fmt::Display for ProjLinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .lift
            .iter()
            .map(|r| {
                let c: Vec<String> = r.iter().map(|x| x.to_string()).collect();
                format!("[{}]", c.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rank, to_rational};
    use proptest::prelude::*;

    fn pt(c: &[i64]) -> ProjPoint {
        ProjPoint::from_i64(c).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_point(&[q(4, 1), q(6, 1)]).unwrap(), pt(&[2, 3]));
        assert_eq!(normalize_point(&[q(1, 2), q(1, 3)]).unwrap(), pt(&[3, 2]));
        assert_eq!(normalize_point(&[q(0, 1), q(-5, 1)]).unwrap(), pt(&[0, 1]));
        assert!(normalize_point(&[q(0, 1), q(0, 1)]).is_err());
    }

    #[test]
    fn reduce_examples() {
        let vals = |p: &ProjPoint, m| reduce_point(p, m).iter().map(Zp::value).collect::<Vec<_>>();
        assert_eq!(vals(&pt(&[2, 3]), 3), vec![2, 0]);
        assert_eq!(vals(&pt(&[1, 1]), 2), vec![1, 1]);
        assert_eq!(vals(&pt(&[7, -5]), 5), vec![2, 0]);
    }

    #[test]
    fn det_examples() {
        assert_eq!(det_points(&[pt(&[1, 0]), pt(&[0, 1])]).unwrap(), BigInt::from(1));
        assert_eq!(det_points(&[pt(&[0, 1]), pt(&[2, 1])]).unwrap(), BigInt::from(-2));
        assert!(det_points(&[pt(&[1, 0, 0]), pt(&[0, 1, 0]), pt(&[1, 1, 0])])
            .unwrap()
            .is_zero());
        assert!(det_points(&[pt(&[1, 0])]).is_err());
    }

    #[test]
    fn general_position_examples() {
        assert!(in_general_position(&[pt(&[0, 1]), pt(&[1, 1]), pt(&[1, 0])]).unwrap());
        let frame = [pt(&[1, 0, 0]), pt(&[0, 1, 0]), pt(&[0, 0, 1]), pt(&[1, 1, 1])];
        assert!(in_general_position(&frame).unwrap());
        let bad = [pt(&[1, 0, 0]), pt(&[0, 1, 0]), pt(&[1, 1, 0]), pt(&[0, 0, 1])];
        assert!(!in_general_position(&bad).unwrap());
        assert!(in_general_position(&[pt(&[1, 0, 0])]).is_err());
    }

    #[test]
    fn apply_examples() {
        let id = ProjLinearMap::identity(1);
        assert_eq!(id.apply(&pt(&[2, 3])).unwrap(), pt(&[2, 3]));
        let swap = ProjLinearMap::mobius(0, 1, 1, 0).unwrap();
        assert_eq!(swap.apply(&pt(&[0, 1])).unwrap(), pt(&[1, 0]));
        let shift = ProjLinearMap::mobius(1, 1, 0, 1).unwrap();
        assert_eq!(shift.apply(&pt(&[1, 1])).unwrap(), pt(&[2, 1]));
        assert!(shift.apply(&pt(&[1, 1, 1])).is_err());
    }

    #[test]
    fn unimodular_examples() {
        let s0 = PlaceSet::archimedean();
        assert!(ProjLinearMap::identity(2).is_s_unimodular(&s0));
        let d = ProjLinearMap::mobius(2, 0, 0, 1).unwrap();
        assert!(!d.is_s_unimodular(&s0));
        assert!(d.is_s_unimodular(&PlaceSet::new([2]).unwrap()));
        // entry-gcd normalization happens first: 2·I is the identity
        assert!(ProjLinearMap::mobius(2, 0, 0, 2).unwrap().is_s_unimodular(&s0));
    }

    #[test]
    fn text_and_json_forms() {
        let p: ProjPoint = "(4 : -6 : 2)".parse().unwrap();
        assert_eq!(p, pt(&[2, -3, 1]));
        assert_eq!(p.to_string(), "(2 : -3 : 1)");
        let v = parse_points("[[0,1],[1,1],[\"1\",0]]").unwrap();
        assert_eq!(points_to_json(&v), "[[0,1],[1,1],[1,0]]");
        assert_eq!(parse_points("(0:1); (2:1)").unwrap(), vec![pt(&[0, 1]), pt(&[2, 1])]);
        assert!(parse_points("[[0,0]]").is_err());
        assert!(parse_points("(a:1)").is_err());
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 3).len(), 10);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
    }

    fn arb_vec(n: usize) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-30i64..30, n).prop_filter("nonzero", |v| v.iter().any(|&x| x != 0))
    }

    fn arb_map(n: usize) -> impl Strategy<Value = ProjLinearMap> {
        prop::collection::vec(-5i64..6, n * n).prop_filter_map("singular", move |v| {
            let rows: Vec<Vec<BigInt>> = v.chunks(n).map(|r| r.iter().map(|&x| x.into()).collect()).collect();
            ProjLinearMap::new(rows).ok()
        })
    }

    proptest! {
        #[test]
        fn normalization_is_scale_invariant(v in arb_vec(3), num in 1i64..50, den in 1i64..50, neg: bool) {
            let raw: Vec<BigRational> = v.iter().map(|&x| q(x, 1)).collect();
            let lam = q(if neg { -num } else { num }, den);
            let scaled: Vec<BigRational> = raw.iter().map(|x| x * &lam).collect();
            let p = normalize_point(&raw).unwrap();
            prop_assert_eq!(&normalize_point(&scaled).unwrap(), &p);
            let again: Vec<BigRational> = p.coords().iter().map(|c| BigRational::from_integer(c.clone())).collect();
            prop_assert_eq!(normalize_point(&again).unwrap(), p.clone());
            // reduction does not depend on the scaling either
            for m in [2u64, 3, 5, 7] {
                prop_assert_eq!(reduce_point(&normalize_point(&scaled).unwrap(), m), reduce_point(&p, m));
            }
        }

        #[test]
        fn det_sign_and_rank(a in arb_vec(3), b in arb_vec(3), c in arb_vec(3)) {
            let (pa, pb, pc) = (pt(&a), pt(&b), pt(&c));
            let d1 = det_points(&[pa.clone(), pb.clone(), pc.clone()]).unwrap();
            let d2 = det_points(&[pb.clone(), pa.clone(), pc.clone()]).unwrap();
            prop_assert_eq!(&d1, &-d2);
            let m: Matrix<BigInt> = [pa, pb, pc].iter().map(|p| p.coords().to_vec()).collect();
            prop_assert_eq!(d1.is_zero(), rank(&to_rational(&m)) < 3);
        }

        #[test]
        fn action_composes(f in arb_map(3), g in arb_map(3), v in arb_vec(3)) {
            let p = pt(&v);
            let lhs = f.apply(&g.apply(&p).unwrap()).unwrap();
            prop_assert_eq!(lhs, f.compose(&g).unwrap().apply(&p).unwrap());
            prop_assert_eq!(f.inverse().apply(&f.apply(&p).unwrap()).unwrap(), p);
        }

        #[test]
        fn reduction_commutes_with_unimodular_maps(f in arb_map(2), v in arb_vec(2), w in arb_vec(2)) {
            let s = PlaceSet::new([2, 3]).unwrap();
            prop_assume!(f.is_s_unimodular(&s));
            let (p1, p2) = (pt(&v), pt(&w));
            for m in [5u64, 7, 11, 13] {
                let same = |a: &ProjPoint, b: &ProjPoint| {
                    // equal as points of P^n(F_m): all 2x2 minors vanish
                    let (x, y) = (reduce_point(a, m), reduce_point(b, m));
                    (x[0] * y[1] - x[1] * y[0]).value() == 0
                };
                if same(&p1, &p2) {
                    prop_assert!(same(&f.apply(&p1).unwrap(), &f.apply(&p2).unwrap()));
                }
            }
        }
    }
}
