//! The Solver/Adversary game for simple knapsack.
//!
//! The Solver picks `βn` items one at a time; after each pick the
//! Adversary removes every value that is a difference of two subset sums
//! of the picks, and every value completing a subset of the picks to `N`.
//! Afterwards each size-`γn` subset `Q` of the picks can be completed to
//! an instance in which `Q` is the only possible choice among the picks,
//! so a correct BT algorithm must keep all `C(βn, γn)` of them alive.

mod construct;
mod game;
mod params;
mod witness;

pub use construct::{certify, construct_completion, verify_unique_solution, Certificate, Construction};
pub use game::{play_game, solver_by_name, ForbiddenRule, GameState, RandomFeasible, SmallestFeasible, Solver};
pub use params::{
    default_alpha, default_capacity, default_slack, format_ratio, params_feasible, parse_ratio, pow3, AdversaryParams,
    ParamViolation,
};
pub use witness::{refute_capped_solver, witness_all_q, Refutation, WitnessEntry, WitnessReport};
