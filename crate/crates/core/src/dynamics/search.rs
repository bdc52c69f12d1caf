//! Bounded search for a conjugate with good reduction at a prime, on the
//! projective line.

use num_bigint::BigInt;

use super::MorphismPN;
use crate::error::{Error, Result};
use crate::projective::ProjLinearMap;

/// Outcome of [`good_reduction_search`]. `found == false` only means no
/// good model was located within the budget.
#[derive(Debug, Clone)]
pub struct GoodReductionSearch {
    pub found: bool,
    pub witness: Option<ProjLinearMap>,
    pub model: Option<MorphismPN>,
    /// Smallest `v_p(Res)` reached.
    pub best_valuation: u64,
}

fn elementary_moves(p: u64, budget: u32) -> Vec<ProjLinearMap> {
    let mut moves = Vec::new();
    let pk = |k: u32| BigInt::from(p).pow(k);
    for k in 1..=budget {
        let (one, zero) = (BigInt::from(1), BigInt::from(0));
        // z ↦ p^k z and z ↦ z / p^k
        moves.push(ProjLinearMap::new(vec![vec![pk(k), zero.clone()], vec![zero.clone(), one.clone()]]).unwrap());
        moves.push(ProjLinearMap::new(vec![vec![one, zero.clone()], vec![zero, pk(k)]]).unwrap());
    }
    for c in 1..p as i64 {
        moves.push(ProjLinearMap::mobius(1, c, 0, 1).unwrap());
    }
    moves.push(ProjLinearMap::mobius(0, 1, 1, 0).unwrap());
    moves
}

type Step = (u64, MorphismPN, ProjLinearMap);

/// Best strictly improving single move; failing that, best improving pair.
fn best_step(model: &MorphismPN, moves: &[ProjLinearMap], p: u64, val: u64) -> Result<Option<Step>> {
    let mut singles = Vec::with_capacity(moves.len());
    let mut best: Option<Step> = None;
    let consider = |v: u64, c: &MorphismPN, m: &ProjLinearMap, best: &mut Option<Step>| {
        if v < val && best.as_ref().is_none_or(|(bv, _, _)| v < *bv) {
            *best = Some((v, c.clone(), m.clone()));
        }
    };
    for m in moves {
        let c = model.conjugate(m)?;
        let v = c.valuation_of_resultant(p)?;
        consider(v, &c, m, &mut best);
        singles.push((c, m));
    }
    if best.is_some() {
        return Ok(best);
    }
    for (c1, m1) in &singles {
        for m2 in moves {
            let c = c1.conjugate(m2)?;
            let v = c.valuation_of_resultant(p)?;
            consider(v, &c, &m2.compose(m1)?, &mut best);
        }
    }
    Ok(best)
}

/// Greedy descent on `v_p(Res)` over conjugations by `z ↦ p^k z`
/// (`|k| ≤ budget`), `z ↦ z + c` (`0 < c < p`) and `z ↦ 1/z`, for at most
/// `budget` rounds; a round takes the best improving single move, or the
/// best improving pair of moves when no single move helps. The witness `f` satisfies `conjugate(φ, f) = model`.
pub fn good_reduction_search(phi: &MorphismPN, p: u64, budget: u32) -> Result<GoodReductionSearch> {
    if phi.n() != 1 {
        return Err(Error::Unsupported("good reduction search runs on P^1 only".into()));
    }
    if budget == 0 {
        return Err(Error::domain("search budget must be at least 1"));
    }
    if !crate::arith::is_prime_u64(p) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    let mut model = phi.clone();
    let mut witness = ProjLinearMap::identity(1);
    let mut val = model.valuation_of_resultant(p)?;
    let moves = elementary_moves(p, budget);
    for _ in 0..budget {
        if val == 0 {
            break;
        }
        let Some((v, candidate, m)) = best_step(&model, &moves, p, val)? else {
            break;
        };
        val = v;
        model = candidate;
        witness = m.compose(&witness)?;
    }
    let found = val == 0;
    Ok(GoodReductionSearch {
        found,
        witness: found.then_some(witness),
        model: found.then_some(model),
        best_valuation: val,
    })
}
