use std::fmt;

use num_bigint::{BigInt, RandBigInt};
use num_traits::{One, Signed};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::params::AdversaryParams;
use crate::error::{Error, Result};
use crate::knapsack::{Limits, SignedSumSet, SubsetSumSet};

/// Which removal rule makes a value unavailable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForbiddenRule {
    /// The value is a difference of two subset sums of the picks.
    Difference,
    /// The value completes some subset of the picks to exactly `N`.
    Completion,
}

impl fmt::Display for ForbiddenRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ForbiddenRule::Difference => write!(f, "rule 1: difference of two subset sums"),
            ForbiddenRule::Completion => write!(f, "rule 2: completes a subset to N"),
        }
    }
}

/// The partial instance built by the Solver and the Adversary's
/// bookkeeping over it.
#[derive(Debug, Clone)]
pub struct GameState {
    params: AdversaryParams,
    picks: Vec<BigInt>,
    signed: SignedSumSet,
    subsets: SubsetSumSet,
    limits: Limits,
}

impl GameState {
    pub fn new(params: AdversaryParams, limits: Limits) -> Self {
        GameState { params, picks: Vec::new(), signed: SignedSumSet::new(), subsets: SubsetSumSet::new(), limits }
    }

    pub fn params(&self) -> &AdversaryParams {
        &self.params
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn picks(&self) -> &[BigInt] {
        &self.picks
    }

    pub fn round(&self) -> usize {
        self.picks.len()
    }

    pub fn is_complete(&self) -> bool {
        self.round() == self.params.picks()
    }

    pub fn signed_sums(&self) -> &SignedSumSet {
        &self.signed
    }

    pub fn subset_sums(&self) -> &SubsetSumSet {
        &self.subsets
    }

    /// The rule that removes `x`, if any. Rule 1 is checked first.
    pub fn forbidden(&self, x: &BigInt) -> Option<ForbiddenRule> {
        if self.signed.contains(x) {
            Some(ForbiddenRule::Difference)
        } else if self.subsets.contains(&(&self.params.capacity - x)) {
            Some(ForbiddenRule::Completion)
        } else {
            None
        }
    }

    /// Positive values removed by each rule, in increasing order.
    pub fn forbidden_values(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        let differences = self.signed.values().into_iter().filter(|x| x.is_positive()).collect();
        let mut completions: Vec<BigInt> =
            self.subsets.values().into_iter().map(|s| &self.params.capacity - s).filter(|x| x.is_positive()).collect();
        completions.sort();
        (differences, completions)
    }

    pub fn check_pick(&self, pick: &BigInt) -> Result<()> {
        if self.is_complete() {
            return Err(Error::Illegal(format!("all {} rounds already played", self.params.picks())));
        }
        if !self.params.in_range(pick) {
            return Err(Error::Illegal(format!("{pick} is outside (0, alpha*N/n)")));
        }
        if let Some(rule) = self.forbidden(pick) {
            return Err(Error::Illegal(format!("{pick} is forbidden by {rule}")));
        }
        Ok(())
    }

    /// Adds `pick` to the partial instance and extends both sum sets.
    pub fn play_round(&mut self, pick: BigInt) -> Result<()> {
        self.check_pick(&pick)?;
        let mut signed = self.signed.clone();
        let mut subsets = self.subsets.clone();
        signed.extend(&pick, self.limits.sum_budget)?;
        subsets.extend(&pick, self.limits.sum_budget)?;
        if !subsets.all_distinct() || subsets.contains(&self.params.capacity) {
            return Err(Error::Internal(format!("pick {pick} broke the subset-sum invariants")));
        }
        self.signed = signed;
        self.subsets = subsets;
        self.picks.push(pick);
        Ok(())
    }
}

/// Chooses the next item during the game.
pub trait Solver: Send {
    fn name(&self) -> String;
    fn seed(&self) -> Option<u64>;
    fn pick(&mut self, state: &GameState) -> Result<BigInt>;
}

/// Scans `1, 2, 3, …` for the first available value.
#[derive(Debug, Clone, Copy, Default)]
pub struct SmallestFeasible;

impl Solver for SmallestFeasible {
    fn name(&self) -> String {
        "smallest_feasible".into()
    }

    fn seed(&self) -> Option<u64> {
        None
    }

    fn pick(&mut self, state: &GameState) -> Result<BigInt> {
        let max = state.params().max_item();
        let mut x = BigInt::one();
        while x <= max {
            if state.forbidden(&x).is_none() {
                return Ok(x);
            }
            x += 1u32;
        }
        Err(Error::Internal("item range exhausted".into()))
    }
}

/// Uniform draws from the item range, redrawn while forbidden.
#[derive(Debug, Clone)]
pub struct RandomFeasible {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomFeasible {
    pub const MAX_DRAWS: usize = 1_000_000;

    pub fn new(seed: u64) -> Self {
        RandomFeasible { seed, rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl Solver for RandomFeasible {
    fn name(&self) -> String {
        "random_feasible".into()
    }

    fn seed(&self) -> Option<u64> {
        Some(self.seed)
    }

    fn pick(&mut self, state: &GameState) -> Result<BigInt> {
        let hi = state.params().max_item() + 1u32;
        for _ in 0..Self::MAX_DRAWS {
            let x = self.rng.gen_bigint_range(&BigInt::one(), &hi);
            if state.forbidden(&x).is_none() {
                return Ok(x);
            }
        }
        Err(Error::Internal(format!("no available value after {} draws", Self::MAX_DRAWS)))
    }
}

/// `"smallest"` or `"random"` (seeded).
pub fn solver_by_name(name: &str, seed: u64) -> Result<Box<dyn Solver>> {
    match name {
        "smallest" | "smallest_feasible" => Ok(Box::new(SmallestFeasible)),
        "random" | "random_feasible" => Ok(Box::new(RandomFeasible::new(seed))),
        other => Err(Error::Input(format!("unknown solver {other:?}"))),
    }
}

/// Plays all `βn` rounds.
pub fn play_game(solver: &mut dyn Solver, params: &AdversaryParams, limits: &Limits) -> Result<GameState> {
    params.check()?;
    let mut state = GameState::new(params.clone(), *limits);
    while !state.is_complete() {
        let pick = solver.pick(&state)?;
        state.play_round(pick).map_err(|e| match e {
            Error::Illegal(msg) => Error::Illegal(format!("solver {} made an illegal pick: {msg}", solver.name())),
            other => other,
        })?;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knapsack::{all_subset_sums_distinct, subsets_summing_to, Instance};

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn small_state(n_cap: i64, picks: &[i64]) -> GameState {
        let mut p = AdversaryParams::desk(8);
        p.capacity = BigInt::from(n_cap);
        // Widen the item range so small capacities still admit the picks under test.
        p.alpha = num_rational::BigRational::from_integer(BigInt::from(40));
        let mut s = GameState::new(p, Limits::default());
        for &x in picks {
            s.play_round(BigInt::from(x)).unwrap();
        }
        s
    }

    #[test]
    fn forbidden_sets_for_three_and_five() {
        let s = small_state(20, &[3, 5]);
        let (diff, comp) = s.forbidden_values();
        assert_eq!(diff, big(&[2, 3, 5, 8]));
        assert_eq!(comp, big(&[12, 15, 17, 20]));
    }

    #[test]
    fn empty_state_forbids_only_capacity() {
        let s = small_state(20, &[]);
        let (diff, comp) = s.forbidden_values();
        assert!(diff.is_empty());
        assert_eq!(comp, big(&[20]));
    }

    #[test]
    fn powers_of_two_forbid_one_through_seven() {
        let s = GameState::new(AdversaryParams::desk(8), Limits::default());
        let mut s = s;
        for x in [1, 2, 4] {
            s.play_round(BigInt::from(x)).unwrap();
        }
        let (diff, _) = s.forbidden_values();
        assert_eq!(diff, big(&[1, 2, 3, 4, 5, 6, 7]));
        let err = s.play_round(BigInt::from(7)).unwrap_err();
        assert!(err.to_string().contains("rule 1"), "{err}");
    }

    #[test]
    fn completion_pick_is_rejected() {
        let mut s = small_state(20, &[3, 5]);
        let err = s.play_round(BigInt::from(12)).unwrap_err();
        assert!(err.to_string().contains("rule 2"), "{err}");
        assert_eq!(s.picks(), &big(&[3, 5])[..]);
    }

    #[test]
    fn first_pick_and_range() {
        let mut s = GameState::new(AdversaryParams::desk(8), Limits::default());
        s.play_round(BigInt::from(1)).unwrap();
        assert_eq!(s.picks(), &big(&[1])[..]);
        assert!(s.play_round(BigInt::from(0)).is_err());
        assert!(s.play_round(BigInt::from(196_830)).is_err());
        s.play_round(BigInt::from(196_829)).unwrap();
    }

    #[test]
    fn smallest_solver_picks_powers_of_two() {
        let state = play_game(&mut SmallestFeasible, &AdversaryParams::desk(8), &Limits::default()).unwrap();
        assert_eq!(state.picks(), &big(&[1, 2, 4, 8])[..]);
    }

    #[test]
    fn random_solver_is_deterministic_and_sound() {
        let params = AdversaryParams::desk(8);
        let a = play_game(&mut RandomFeasible::new(7), &params, &Limits::default()).unwrap();
        let b = play_game(&mut RandomFeasible::new(7), &params, &Limits::default()).unwrap();
        assert_eq!(a.picks(), b.picks());
        let limits = Limits::default();
        assert!(all_subset_sums_distinct(a.picks(), &limits).unwrap());
        let inst = Instance::new(a.picks().to_vec(), params.capacity.clone()).unwrap();
        assert!(subsets_summing_to(&inst, &params.capacity, &limits).unwrap().is_empty());
    }

    #[test]
    fn infeasible_params_are_refused() {
        let mut p = AdversaryParams::desk(8);
        p.capacity = BigInt::from(6561);
        let err = play_game(&mut SmallestFeasible, &p, &Limits::default()).unwrap_err();
        assert!(matches!(err, Error::Infeasible(_)));
    }

    #[test]
    fn game_stops_after_beta_n_rounds() {
        let mut state = play_game(&mut SmallestFeasible, &AdversaryParams::desk(8), &Limits::default()).unwrap();
        assert!(state.is_complete());
        assert!(state.play_round(BigInt::from(100)).is_err());
    }
}
