//! Seeded randomized checks of the library's structural properties, for the
//! `verify` command.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::PlaceSet;
use crate::dynamics::MorphismPN;
use crate::error::{Error, Result};
use crate::forms::{int_sylvester_resultant, macaulay_resultant, HomogeneousForm};
use crate::projective::{ProjLinearMap, ProjPoint};
use crate::shafarevich::{act, discriminant_invariance_check, in_class_p, PointSet};
use crate::IntForm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Invariants,
    Conjugation,
    Resultants,
    Reduction,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "invariants" => Suite::Invariants,
            "conjugation" => Suite::Conjugation,
            "resultants" => Suite::Resultants,
            "reduction" => Suite::Reduction,
            "all" => Suite::All,
            _ => return Err(Error::parse(format!("unknown suite {s:?}"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Invariants => "invariants",
            Suite::Conjugation => "conjugation",
            Suite::Resultants => "resultants",
            Suite::Reduction => "reduction",
            Suite::All => "all",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub trials: usize,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }
}

struct Tally {
    name: &'static str,
    trials: usize,
    failures: usize,
    first_failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, trials: 0, failures: 0, first_failure: None }
    }

    fn record(&mut self, ok: Result<bool>, describe: impl FnOnce() -> String) {
        self.trials += 1;
        let failure = match ok {
            Ok(true) => return,
            Ok(false) => describe(),
            Err(e) => format!("{}: {e}", describe()),
        };
        self.failures += 1;
        self.first_failure.get_or_insert(failure);
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome {
            name: self.name.to_string(),
            trials: self.trials,
            failures: self.failures,
            first_failure: self.first_failure,
        }
    }
}

pub fn random_point(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> ProjPoint {
    loop {
        let c: Vec<i64> = (0..=n).map(|_| rng.gen_range(-bound..=bound)).collect();
        if let Ok(p) = ProjPoint::from_i64(&c) {
            return p;
        }
    }
}

/// Between 3 and 6 distinct points of `P^n` including an independent frame.
pub fn random_point_set(rng: &mut ChaCha8Rng, n: usize) -> PointSet {
    loop {
        let size = rng.gen_range(3.max(n + 1)..=6);
        let pts: Vec<ProjPoint> = (0..size).map(|_| random_point(rng, n, 9)).collect();
        if let Ok(v) = PointSet::new(pts) {
            if v.has_independent_frame() {
                return v;
            }
        }
    }
}

/// A product of elementary matrices and diagonal S-units, so the
/// determinant is an S-unit.
pub fn random_unimodular(rng: &mut ChaCha8Rng, n: usize, s: &PlaceSet) -> ProjLinearMap {
    let size = n + 1;
    let mut units: Vec<i64> = vec![-1];
    units.extend(s.primes().map(|p| p as i64));
    let mut a: Vec<Vec<BigInt>> = (0..size)
        .map(|i| (0..size).map(|j| BigInt::from((i == j) as i64)).collect())
        .collect();
    for _ in 0..rng.gen_range(1..=6) {
        let (i, j) = (rng.gen_range(0..size), rng.gen_range(0..size));
        if i != j {
            let c = rng.gen_range(-3i64..=3);
            for k in 0..size {
                let add = &a[j][k] * c;
                a[i][k] += add;
            }
        } else {
            let u = *units.choose(rng).unwrap();
            for x in a[i].iter_mut() {
                *x *= u;
            }
        }
    }
    ProjLinearMap::new(a).unwrap()
}

fn random_binary_form(rng: &mut ChaCha8Rng, d: u32, bound: i64) -> IntForm {
    let terms = (0..=d).map(|j| (vec![j, d - j], BigInt::from(rng.gen_range(-bound..=bound))));
    HomogeneousForm::from_terms(2, d, terms).unwrap()
}

/// A degree-`d` map of `P^1` with small coefficients and nonzero resultant.
pub fn random_morphism_p1(rng: &mut ChaCha8Rng, d: u32, bound: i64) -> MorphismPN {
    loop {
        let f = random_binary_form(rng, d, bound);
        let g = random_binary_form(rng, d, bound);
        if let Ok(m) = MorphismPN::from_int_forms(vec![f, g]) {
            return m;
        }
    }
}

pub fn random_invertible_map(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> ProjLinearMap {
    loop {
        let a: Vec<Vec<BigInt>> = (0..=n)
            .map(|_| (0..=n).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect())
            .collect();
        if let Ok(f) = ProjLinearMap::new(a) {
            if !f.det().is_zero() {
                return f;
            }
        }
    }
}

fn random_places(rng: &mut ChaCha8Rng) -> PlaceSet {
    PlaceSet::new([2u64, 3, 5].into_iter().filter(|_| rng.gen_bool(0.5))).unwrap()
}

/// Point sets known to lie in `P(S, N)` for every `S` containing 2: three
/// and four points on the line and the standard frame of the plane.
fn class_p_seeds() -> Vec<PointSet> {
    let line = |pts: &[[i64; 2]]| PointSet::new(pts.iter().map(|c| ProjPoint::from_i64(c).unwrap())).unwrap();
    vec![
        line(&[[0, 1], [1, 1], [1, 0]]),
        line(&[[0, 1], [1, 1], [-1, 1], [1, 0]]),
        line(&[[0, 1], [1, 1], [2, 1], [1, 0]]),
        PointSet::new(
            [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]].iter().map(|c| ProjPoint::from_i64(c).unwrap()),
        )
        .unwrap(),
    ]
}

fn invariants(rng: &mut ChaCha8Rng, trials: usize) -> Vec<CheckOutcome> {
    let mut delta = Tally::new("discriminant invariance");
    for _ in 0..trials {
        let n = rng.gen_range(1..=2);
        let s = random_places(rng);
        let v = random_point_set(rng, n);
        let f = random_unimodular(rng, n, &s);
        delta.record(discriminant_invariance_check(&v, &f, &s), || format!("V = {v}, f = {f}, S = {s}"));
    }
    let mut closure = Tally::new("class P closed under the action");
    let seeds = class_p_seeds();
    for _ in 0..trials {
        let mut s = random_places(rng);
        if !s.contains(&BigInt::from(2)) {
            s = PlaceSet::new(s.primes().chain([2])).unwrap();
        }
        let seed = seeds.choose(rng).unwrap();
        // move the seed by a random map first so the starting sets vary
        let v = act(&random_unimodular(rng, seed.n(), &s), seed).unwrap();
        let f = random_unimodular(rng, seed.n(), &s);
        let ok = (|| {
            let before = in_class_p(&v, &s, v.len())?;
            let after = in_class_p(&act(&f, &v)?, &s, v.len())?;
            Ok(before.holds() && after.holds())
        })();
        closure.record(ok, || format!("V = {v}, f = {f}, S = {s}"));
    }
    vec![delta.finish(), closure.finish()]
}

fn conjugation(rng: &mut ChaCha8Rng, trials: usize) -> Vec<CheckOutcome> {
    let mut t = Tally::new("conjugation commutes with iteration");
    for _ in 0..trials {
        let phi = random_morphism_p1(rng, 2, 5);
        let f = random_invertible_map(rng, 1, 4);
        let k = rng.gen_range(1..=3);
        let ok = (|| Ok(phi.conjugate(&f)?.iterate(k)? == phi.iterate(k)?.conjugate(&f)?))();
        t.record(ok, || format!("phi = {phi}, f = {f}, k = {k}"));
    }
    vec![t.finish()]
}

/// `∏ (b_i X − a_i Y)` together with its roots `(a_i : b_i)`.
pub fn random_split_form(rng: &mut ChaCha8Rng, d: u32) -> (IntForm, Vec<(BigInt, BigInt)>) {
    let mut f = HomogeneousForm::constant(2, BigInt::one());
    let mut roots = Vec::new();
    for _ in 0..d {
        let (a, b) = loop {
            let a = rng.gen_range(-6i64..=6);
            let b = rng.gen_range(-6i64..=6);
            if a != 0 || b != 0 {
                break (BigInt::from(a), BigInt::from(b));
            }
        };
        f = f.mul(&HomogeneousForm::linear(&[b.clone(), -a.clone()]));
        roots.push((a, b));
    }
    (f, roots)
}

fn resultants(rng: &mut ChaCha8Rng, trials: usize) -> Vec<CheckOutcome> {
    let mut t = Tally::new("Sylvester resultant equals the product over roots");
    for _ in 0..trials {
        let (df, dg) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let (f, roots) = random_split_form(rng, df);
        let g = random_binary_form(rng, dg, 6);
        if g.is_zero() {
            continue;
        }
        let ok = (|| {
            let expected = roots.iter().try_fold(BigInt::one(), |acc, (a, b)| {
                Ok::<_, Error>(acc * g.evaluate(&[a.clone(), b.clone()])?)
            })?;
            Ok(int_sylvester_resultant(&f, &g)? == expected)
        })();
        t.record(ok, || format!("F = {f}, G = {g}"));
    }
    let mut mac = Tally::new("Macaulay and Sylvester agree up to sign");
    for _ in 0..trials {
        let (df, dg) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let f = random_binary_form(rng, df, 5);
        let g = random_binary_form(rng, dg, 5);
        if f.is_zero() || g.is_zero() {
            continue;
        }
        let ok = (|| {
            let syl = int_sylvester_resultant(&f, &g)?;
            let rat = [f.to_rational(), g.to_rational()];
            Ok(match macaulay_resultant(&rat)? {
                crate::forms::MacaulayResultant::Exact(v) => {
                    let v = v.to_integer();
                    v == syl || v == -syl
                }
                crate::forms::MacaulayResultant::RankOnly { nonzero } => nonzero == !syl.is_zero(),
            })
        })();
        mac.record(ok, || format!("F = {f}, G = {g}"));
    }
    vec![t.finish(), mac.finish()]
}

fn reduction(rng: &mut ChaCha8Rng, trials: usize) -> Vec<CheckOutcome> {
    let mut t = Tally::new("good reduction iff p does not divide the resultant");
    let primes = crate::arith::primes_up_to(30);
    for _ in 0..trials {
        let phi = random_morphism_p1(rng, 2, 9);
        let ok = (|| {
            let res = phi.resultant()?;
            for &p in &primes {
                let divides = (&res % BigInt::from(p)).is_zero();
                if phi.reduce_at_p(p)?.is_morphism == divides {
                    return Ok(false);
                }
            }
            Ok(true)
        })();
        t.record(ok, || format!("phi = {phi}"));
    }
    vec![t.finish()]
}

/// Runs one suite, or all of them, from a fixed seed.
pub fn run_suite(suite: Suite, trials: usize, seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Invariants {
        checks.extend(invariants(&mut rng, trials));
    }
    if all || suite == Suite::Conjugation {
        checks.extend(conjugation(&mut rng, trials));
    }
    if all || suite == Suite::Resultants {
        checks.extend(resultants(&mut rng, trials));
    }
    if all || suite == Suite::Reduction {
        checks.extend(reduction(&mut rng, trials));
    }
    SuiteReport { suite, seed, trials, checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_and_repeat() {
        let a = run_suite(Suite::All, 12, 7);
        assert!(a.passed(), "{a:?}");
        assert_eq!(a.checks.len(), 6);
        assert_eq!(a, run_suite(Suite::All, 12, 7));
    }

    #[test]
    fn suite_names_round_trip() {
        for s in ["invariants", "conjugation", "resultants", "reduction", "all"] {
            assert_eq!(s.parse::<Suite>().unwrap().to_string(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }
}
