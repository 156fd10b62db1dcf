use itertools::Itertools;
use num_bigint::BigInt;
use rayon::prelude::*;

use super::construct::{construct_completion, verify_unique_solution, Certificate, Construction};
use super::game::GameState;
use crate::bounds::binomial_exact;
use crate::bt::{best_feasible, build_tree, extract_solutions, tree_width, width_capped, ItemOrder};
use crate::error::{Error, Result};
use crate::knapsack::{enumeration_size, optimum_bruteforce, Instance, Selector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessEntry {
    pub q: Selector,
    pub construction: Option<Construction>,
    pub certificate: Option<Certificate>,
    /// Set when construction or certification failed for this `Q`.
    pub failure: Option<String>,
}

impl WitnessEntry {
    pub fn verified(&self) -> bool {
        self.certificate.as_ref().is_some_and(|c| c.verified)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessReport {
    pub picks: Vec<BigInt>,
    /// One entry per size-`γn` subset of the picks, in lexicographic order.
    pub entries: Vec<WitnessEntry>,
    pub successes: usize,
    /// `C(βn, γn)`, the implied width lower bound.
    pub bound: BigInt,
    pub complete: bool,
}

impl WitnessReport {
    /// First entry that did not verify.
    pub fn first_failure(&self) -> Option<&WitnessEntry> {
        self.entries.iter().find(|e| !e.verified())
    }
}

/// Size-`k` subsets of `0..n` in lexicographic order.
pub(crate) fn designated_subsets(n: usize, k: usize) -> Vec<Selector> {
    (0..n).combinations(k).map(Selector::new).collect()
}

/// Runs the construction and brute-force certification for every
/// designated subset `Q`. Subsets are processed in parallel; entries come
/// back in lexicographic `Q` order.
pub fn witness_all_q(state: &GameState) -> Result<WitnessReport> {
    let params = state.params();
    params.check()?;
    if !state.is_complete() {
        return Err(Error::Input(format!("game has {} of {} picks", state.round(), params.picks())));
    }
    let (k, s) = (params.picks(), params.subset_size());
    let bound = binomial_exact(k as u64, s as u64)?;
    let limits = state.limits();
    limits.check_enumeration(params.n)?;
    let work = &bound * enumeration_size(params.n);
    if work > BigInt::from(limits.work_budget) {
        return Err(Error::budget("witnessing every Q", format!("{work} subset visits"), limits.work_budget));
    }

    let entries: Vec<WitnessEntry> = designated_subsets(k, s)
        .into_par_iter()
        .map(|q| {
            let outcome = construct_completion(state, &q).and_then(|c| {
                let cert = verify_unique_solution(&c, state)?;
                Ok((c, cert))
            });
            match outcome {
                Ok((c, cert)) => {
                    let failure = (!cert.verified).then(|| format!("{} subsets reach N", cert.found.len()));
                    WitnessEntry { q, construction: Some(c), certificate: Some(cert), failure }
                }
                Err(e) => WitnessEntry { q, construction: None, certificate: None, failure: Some(e.to_string()) },
            }
        })
        .collect();
    let successes = entries.iter().filter(|e| e.verified()).count();
    let complete = BigInt::from(successes) == bound;
    Ok(WitnessReport { picks: state.picks().to_vec(), entries, successes, bound, complete })
}

/// Outcome of playing the adversary against `width_capped(b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refutation {
    pub cap: usize,
    /// Distinct depth-`βn` partial solutions the capped solver kept.
    pub surviving: usize,
    /// Designated subset whose accept pattern the solver discarded.
    pub excluded_q: Selector,
    pub construction: Construction,
    pub instance: Instance,
    /// Best feasible value the capped solver reaches on `P ++ R`.
    pub capped_best: Option<BigInt>,
    pub capped_width: usize,
    pub optimum: BigInt,
    pub certificate: Certificate,
}

impl Refutation {
    /// The capped solver misses the optimum while `Q ∪ R` is certified unique.
    pub fn refuted(&self) -> bool {
        self.certificate.verified && self.capped_best.as_ref().is_none_or(|v| v < &self.optimum)
    }
}

/// Runs `width_capped(b)` over the picks, finds a designated subset it
/// discarded, completes that subset, and reruns the solver on the completed
/// instance with the picks ordered first.
pub fn refute_capped_solver(state: &GameState, b: usize) -> Result<Refutation> {
    let params = state.params();
    params.check()?;
    if !state.is_complete() {
        return Err(Error::Input(format!("game has {} of {} picks", state.round(), params.picks())));
    }
    let (k, s) = (params.picks(), params.subset_size());
    let total = binomial_exact(k as u64, s as u64)?;
    if BigInt::from(b) >= total {
        return Err(Error::Input(format!("cap {b} is not below C({k}, {s}) = {total}")));
    }
    let picks = state.picks().to_vec();
    let prefix = Instance::new(picks.clone(), params.capacity.clone())?;
    let solver = width_capped(b, ItemOrder::Listed(picks.clone()))?;
    let tree = build_tree(&solver, &prefix)?;
    let level = tree.level(k);
    let kept: Vec<Selector> = level.partial_solutions.iter().map(|l| l.accepted()).collect();

    let excluded_q = designated_subsets(k, s)
        .into_iter()
        .find(|q| !kept.contains(q))
        .ok_or_else(|| Error::Internal("capped solver kept every designated pattern".into()))?;
    let construction = construct_completion(state, &excluded_q)?;
    let certificate = verify_unique_solution(&construction, state)?;

    let mut items = picks.clone();
    items.extend(construction.r.iter().cloned());
    let instance = Instance::new(items.clone(), params.capacity.clone())?;
    let solver = width_capped(b, ItemOrder::Listed(items))?;
    let full = build_tree(&solver, &instance)?;
    if full.level(k) != level {
        return Err(Error::Internal("capped solver changed its prefix behavior on the completed instance".into()));
    }
    let capped_best = best_feasible(&extract_solutions(&full, &instance), instance.capacity());
    let optimum = optimum_bruteforce(&instance, state.limits())?.value;
    Ok(Refutation {
        cap: b,
        surviving: kept.len(),
        excluded_q,
        construction,
        instance,
        capped_best,
        capped_width: tree_width(&full),
        optimum,
        certificate,
    })
}
