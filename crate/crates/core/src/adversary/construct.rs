//! Completion of a designated subset `Q` of the picks into an instance in
//! which `Q ∪ R` is the only subset summing to `N`.
//!
//! Phase 1 places `m − 2` items (with `m = (1−β)n`) inside
//! `J = [a − U, a + U]`, `a = (N − sum(Q))/m`, each avoiding the removal
//! rules over everything placed so far and chosen to keep the running sum
//! as close as possible to `t·a`. Phase 2 closes the gap with a pair
//! `(⌊v/2⌋ − i, ⌈v/2⌉ + i)` whose members are not subset-sum differences.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::game::GameState;
use super::params::ceil_floor;
use crate::error::{Error, Result};
use crate::knapsack::{enumeration_size, subsets_summing_to, Instance, Limits, Selector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    /// Designated subset, as indices into the picks.
    pub q: Selector,
    pub q_sum: BigInt,
    /// Completion items; the last two are `b1` and `b2`.
    pub r: Vec<BigInt>,
    /// Center `a = (N − sum(Q)) / m`.
    pub center: BigRational,
    /// Integer window `[⌈a − U⌉, ⌊a + U⌋]`.
    pub window: (BigInt, BigInt),
    /// Sum of the first `m − 2` completion items.
    pub w: BigInt,
    /// `v = N − sum(Q) − w`, the target for the final pair.
    pub v: BigInt,
    pub b1: BigInt,
    pub b2: BigInt,
    /// Offset `i` of the accepted pair.
    pub pair_offset: BigInt,
}

impl Construction {
    /// Selector of `Q ∪ R` in the instance `P ++ R`.
    pub fn designated(&self, picks: usize) -> Selector {
        self.q.indices().iter().copied().chain(picks..picks + self.r.len()).collect()
    }
}

fn ratio(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// Nearest integer to `target` inside `[lo, hi]` accepted by `ok`; ties
/// go to the smaller candidate.
fn nearest_feasible(
    target: &BigRational,
    lo_bound: &BigInt,
    hi_bound: &BigInt,
    mut ok: impl FnMut(&BigInt) -> bool,
) -> Option<BigInt> {
    let mut lo = target.floor().to_integer();
    let mut hi = &lo + 1u32;
    if &lo > hi_bound {
        lo = hi_bound.clone();
        hi = hi_bound + 1u32;
    }
    if &hi < lo_bound {
        hi = lo_bound.clone();
        lo = lo_bound - 1u32;
    }
    loop {
        let lo_in = &lo >= lo_bound;
        let hi_in = &hi <= hi_bound;
        let take_lo = match (lo_in, hi_in) {
            (false, false) => return None,
            (true, false) => true,
            (false, true) => false,
            (true, true) => (target - ratio(&lo)) <= (ratio(&hi) - target),
        };
        let x = if take_lo {
            let x = lo.clone();
            lo -= 1u32;
            x
        } else {
            let x = hi.clone();
            hi += 1u32;
            x
        };
        if ok(&x) {
            return Some(x);
        }
    }
}

/// Builds `R_Q` for a designated subset `Q` of a completed game.
pub fn construct_completion(state: &GameState, q: &Selector) -> Result<Construction> {
    let params = state.params();
    params.check()?;
    if !state.is_complete() {
        return Err(Error::Input(format!("game has {} of {} picks", state.round(), params.picks())));
    }
    q.check(state.round())?;
    if q.len() != params.subset_size() {
        return Err(Error::Input(format!("|Q| = {} but gamma*n = {}", q.len(), params.subset_size())));
    }
    let limits = state.limits();
    let capacity = &params.capacity;
    let slack = &params.slack;
    let m = params.completion_size();
    let q_sum: BigInt = q.indices().iter().map(|&i| &state.picks()[i]).sum();
    let center = ratio(&(capacity - &q_sum)) / BigRational::from_integer(m.into());
    let (j_lo, _) = ceil_floor(&(&center - ratio(slack)));
    let (_, j_hi) = ceil_floor(&(&center + ratio(slack)));

    let mut signed = state.signed_sums().clone();
    let mut subsets = state.subset_sums().clone();
    let mut r = Vec::with_capacity(m);
    let mut w = BigInt::from(0);
    for t in 1..=m - 2 {
        let target = &center * BigRational::from_integer(t.into()) - ratio(&w);
        let x = nearest_feasible(&target, &j_lo, &j_hi, |x| !signed.contains(x) && !subsets.contains(&(capacity - x)))
            .ok_or_else(|| Error::Internal(format!("phase 1: no available integer in J for step {t}")))?;
        if !params.in_range(&x) {
            return Err(Error::Internal(format!("phase 1: {x} outside the item range")));
        }
        signed.extend(&x, limits.sum_budget)?;
        subsets.extend(&x, limits.sum_budget)?;
        if !subsets.all_distinct() || subsets.contains(capacity) {
            return Err(Error::Internal(format!("phase 1: item {x} broke subset-sum distinctness")));
        }
        w += &x;
        r.push(x);
    }
    let deviation = (ratio(&w) - &center * BigRational::from_integer((m - 2).into())).abs();
    if deviation > ratio(slack) {
        return Err(Error::Internal(format!("phase 1: running sum deviates by {deviation} > U")));
    }

    let v = capacity - &q_sum - &w;
    let two = BigInt::from(2);
    let half_lo = num_integer::Integer::div_floor(&v, &two);
    let half_hi = &v - &half_lo;
    let mut i = BigInt::one();
    let limit = slack + 1u32;
    let (b1, b2) = loop {
        if i > limit {
            return Err(Error::Internal(format!("phase 2: no admissible pair within {limit} offsets")));
        }
        let b1 = &half_lo - &i;
        let b2 = &half_hi + &i;
        if !params.in_range(&b1) || !params.in_range(&b2) {
            return Err(Error::Internal(format!("phase 2: pair ({b1}, {b2}) leaves the item range")));
        }
        if !signed.contains(&b1) && !signed.contains(&b2) {
            break (b1, b2);
        }
        i += 1u32;
    };
    r.push(b1.clone());
    r.push(b2.clone());
    Ok(Construction { q: q.clone(), q_sum, r, center, window: (j_lo, j_hi), w, v, b1, b2, pair_offset: i })
}

/// Brute-force evidence that a designated subset is the unique subset
/// summing to the capacity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub instance: Instance,
    pub designated: Selector,
    /// Every selector hitting the capacity exactly.
    pub found: Vec<Selector>,
    pub verified: bool,
    /// Number of selectors enumerated, `2^n`.
    pub enumeration_size: BigInt,
}

/// Enumerates all subsets of `instance` and checks that `designated` is
/// the only one summing to the capacity.
pub fn certify(instance: &Instance, designated: &Selector, limits: &Limits) -> Result<Certificate> {
    designated.check(instance.len())?;
    let found = subsets_summing_to(instance, instance.capacity(), limits)?;
    let verified = found.len() == 1 && &found[0] == designated;
    Ok(Certificate {
        instance: instance.clone(),
        designated: designated.clone(),
        found,
        verified,
        enumeration_size: enumeration_size(instance.len()),
    })
}

/// Certifies the instance `P ++ R` for a construction; additionally the
/// unique solution must restrict to exactly `Q` on the picks.
pub fn verify_unique_solution(c: &Construction, state: &GameState) -> Result<Certificate> {
    let picks = state.picks();
    let mut items = picks.to_vec();
    items.extend(c.r.iter().cloned());
    let instance = Instance::new(items, state.params().capacity.clone())?;
    let designated = c.designated(picks.len());
    let mut cert = certify(&instance, &designated, state.limits())?;
    cert.verified &= designated.restrict(picks.len()) == c.q;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::{play_game, AdversaryParams, SmallestFeasible};
    use itertools::Itertools;

    fn desk8() -> GameState {
        play_game(&mut SmallestFeasible, &AdversaryParams::desk(8), &Limits::default()).unwrap()
    }

    #[test]
    fn completes_q_one_two() {
        let state = desk8();
        let q = Selector::new(vec![0, 1]);
        let c = construct_completion(&state, &q).unwrap();
        assert_eq!(c.center, BigRational::new(524_877.into(), 4.into()));
        assert_eq!(c.window, (BigInt::from(124_659), BigInt::from(137_780)));
        assert_eq!(c.r.len(), 4);
        let total: BigInt = c.q_sum.clone() + c.r.iter().sum::<BigInt>();
        assert_eq!(total, BigInt::from(524_880));
        assert_eq!(&c.b1 + &c.b2, c.v);
        assert!(c.b1 < c.b2);
        let cert = verify_unique_solution(&c, &state).unwrap();
        assert!(cert.verified);
        assert_eq!(cert.enumeration_size, BigInt::from(256));
        assert_eq!(cert.found, vec![Selector::new(vec![0, 1, 4, 5, 6, 7])]);
    }

    #[test]
    fn every_q_of_desk_eight_completes() {
        let state = desk8();
        for q in (0..4).combinations(2) {
            let c = construct_completion(&state, &Selector::new(q)).unwrap();
            let dev = (ratio(&c.w) - &c.center * BigRational::from_integer(2.into())).abs();
            assert!(dev <= ratio(&state.params().slack));
            assert!(c.r.iter().all(|x| state.params().in_range(x)));
            assert!(verify_unique_solution(&c, &state).unwrap().verified);
        }
    }

    #[test]
    fn wrong_q_size_is_rejected() {
        let state = desk8();
        let err = construct_completion(&state, &Selector::new(vec![0])).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
        assert!(construct_completion(&state, &Selector::new(vec![0, 9])).is_err());
    }

    #[test]
    fn certify_examples() {
        let limits = Limits::default();
        let inst = Instance::from_u64(&[2, 3, 5], 5).unwrap();
        let cert = certify(&inst, &Selector::new(vec![2]), &limits).unwrap();
        assert!(!cert.verified);
        assert_eq!(cert.found.len(), 2);
        let inst = Instance::from_u64(&[1, 2, 4], 7).unwrap();
        let cert = certify(&inst, &Selector::new(vec![0, 1, 2]), &limits).unwrap();
        assert!(cert.verified);
        assert_eq!(cert.enumeration_size, BigInt::from(8));
    }

    #[test]
    fn nearest_feasible_prefers_closer_then_lower() {
        let t = BigRational::new(21.into(), 2.into());
        let got = nearest_feasible(&t, &BigInt::from(0), &BigInt::from(100), |_| true);
        assert_eq!(got, Some(BigInt::from(10)));
        let got = nearest_feasible(&t, &BigInt::from(0), &BigInt::from(100), |x| x != &BigInt::from(10));
        assert_eq!(got, Some(BigInt::from(11)));
        let t = BigRational::from_integer(500.into());
        let got = nearest_feasible(&t, &BigInt::from(0), &BigInt::from(100), |_| true);
        assert_eq!(got, Some(BigInt::from(100)));
        let got = nearest_feasible(&t, &BigInt::from(0), &BigInt::from(3), |_| false);
        assert_eq!(got, None);
    }
}
