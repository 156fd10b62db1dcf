//! Simple knapsack instances and the brute-force oracles everything else is
//! checked against.
//!
//! All arithmetic is exact. Enumeration runs over `2^n` selectors in Gray
//! code order with a running sum, using `i128` when the total weight fits
//! and `BigInt` otherwise.

mod sums;

pub use sums::{SignedSumSet, SubsetSumSet, DEFAULT_SUM_BUDGET};

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use sums::Scalar;

/// Default ceiling on item count for exhaustive enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 26;

/// Caps on the exponential oracles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest item count the `2^n` oracles accept.
    pub enumeration_cap: usize,
    /// Largest signed-sum or subset-sum set, in elements.
    pub sum_budget: u128,
    /// Largest total number of subset visits for multi-instance runs.
    pub work_budget: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { enumeration_cap: DEFAULT_ENUMERATION_CAP, sum_budget: DEFAULT_SUM_BUDGET, work_budget: 1 << 34 }
    }
}

impl Limits {
    pub(crate) fn check_enumeration(&self, n: usize) -> Result<()> {
        if n > self.enumeration_cap || n >= 64 {
            return Err(Error::budget(
                "exhaustive enumeration",
                format!("{n} items"),
                format!("{} items", self.enumeration_cap),
            ));
        }
        Ok(())
    }
}

/// Items and capacity `N`. Each item's weight is also its value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    items: Vec<BigInt>,
    capacity: BigInt,
}

impl Instance {
    pub fn new(items: Vec<BigInt>, capacity: BigInt) -> Result<Self> {
        if let Some(bad) = items.iter().find(|x| !x.is_positive()) {
            return Err(Error::Input(format!("item weight {bad} is not positive")));
        }
        if !capacity.is_positive() {
            return Err(Error::Input(format!("capacity {capacity} is not positive")));
        }
        Ok(Instance { items, capacity })
    }

    pub fn from_u64(items: &[u64], capacity: u64) -> Result<Self> {
        Self::new(items.iter().map(|&x| BigInt::from(x)).collect(), BigInt::from(capacity))
    }

    pub fn items(&self) -> &[BigInt] {
        &self.items
    }

    pub fn capacity(&self) -> &BigInt {
        &self.capacity
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn total(&self) -> BigInt {
        self.items.iter().sum()
    }
}

/// A subset of item indices, kept sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Selector(Vec<usize>);

impl Selector {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        Selector(indices)
    }

    pub fn empty() -> Self {
        Selector(Vec::new())
    }

    /// Selector with the bits of `mask` as indices.
    pub fn from_mask(mask: u64) -> Self {
        Selector((0..64).filter(|i| mask >> i & 1 == 1).collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.binary_search(&index).is_ok()
    }

    /// Keeps indices below `bound`.
    pub fn restrict(&self, bound: usize) -> Selector {
        Selector(self.0.iter().copied().filter(|&i| i < bound).collect())
    }

    pub fn check(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&i) if i >= n => Err(Error::Input(format!("selector index {i} out of range for {n} items"))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl FromIterator<usize> for Selector {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Selector::new(iter.into_iter().collect())
    }
}

pub fn subset_sum(instance: &Instance, sel: &Selector) -> Result<BigInt> {
    sel.check(instance.len())?;
    Ok(sel.indices().iter().map(|&i| &instance.items[i]).sum())
}

/// Best feasible value and every selector achieving it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Optimum {
    pub value: BigInt,
    pub selectors: Vec<Selector>,
}

enum Weights {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

impl Weights {
    fn of(items: &[BigInt]) -> Self {
        let total: BigInt = items.iter().map(|x| x.abs()).sum();
        if total.bits() <= 120 {
            Weights::Small(items.iter().map(|x| x.to_i128().expect("bounded by total")).collect())
        } else {
            Weights::Big(items.to_vec())
        }
    }
}

/// Visits every mask with its subset sum, in Gray code order.
fn gray_walk<T: Scalar>(weights: &[T], mut visit: impl FnMut(u64, &T)) {
    let n = weights.len();
    let mut mask = 0u64;
    let mut sum = T::origin();
    visit(mask, &sum);
    for g in 1..(1u64 << n) {
        let bit = g.trailing_zeros() as usize;
        mask ^= 1 << bit;
        sum = if mask >> bit & 1 == 1 { sum.plus(&weights[bit]) } else { sum.minus(&weights[bit]) };
        visit(mask, &sum);
    }
}

fn canonical(mut masks: Vec<u64>) -> Vec<Selector> {
    let mut sels: Vec<Selector> = masks.drain(..).map(Selector::from_mask).collect();
    sels.sort();
    sels
}

/// Exhaustive optimum: the largest subset sum not exceeding `N`.
pub fn optimum_bruteforce(instance: &Instance, limits: &Limits) -> Result<Optimum> {
    limits.check_enumeration(instance.len())?;
    fn run<T: Scalar>(w: &[T], cap: &T) -> (T, Vec<u64>) {
        let mut best = T::origin();
        let mut masks = Vec::new();
        gray_walk(w, |mask, s| {
            if s > cap {
                return;
            }
            match s.cmp(&best) {
                std::cmp::Ordering::Greater => {
                    best = s.clone();
                    masks.clear();
                    masks.push(mask);
                }
                std::cmp::Ordering::Equal => masks.push(mask),
                std::cmp::Ordering::Less => {}
            }
        });
        (best, masks)
    }
    let (value, masks) = match Weights::of(&instance.items) {
        Weights::Small(w) => {
            // Every subset sum fits in i128, so a capacity above that range never binds.
            let cap = instance.capacity.to_i128().unwrap_or(i128::MAX);
            let (best, masks) = run(&w, &cap);
            (BigInt::from(best), masks)
        }
        Weights::Big(w) => run(&w, &instance.capacity),
    };
    Ok(Optimum { value, selectors: canonical(masks) })
}

/// Every selector whose sum is exactly `target`, in canonical order.
pub fn subsets_summing_to(instance: &Instance, target: &BigInt, limits: &Limits) -> Result<Vec<Selector>> {
    limits.check_enumeration(instance.len())?;
    fn run<T: Scalar>(w: &[T], target: &T) -> Vec<u64> {
        let mut masks = Vec::new();
        gray_walk(w, |mask, s| {
            if s == target {
                masks.push(mask);
            }
        });
        masks
    }
    let masks = match Weights::of(&instance.items) {
        Weights::Small(w) => match target.to_i128() {
            Some(t) => run(&w, &t),
            None => Vec::new(),
        },
        Weights::Big(w) => run(&w, target),
    };
    Ok(canonical(masks))
}

/// Whether all `2^k` subset sums of `items` are pairwise distinct.
pub fn all_subset_sums_distinct(items: &[BigInt], limits: &Limits) -> Result<bool> {
    limits.check_enumeration(items.len())?;
    let budget = limits.sum_budget.max(1u128 << items.len());
    let mut sums = SubsetSumSet::new();
    for x in items {
        sums.extend(x, budget)?;
        if !sums.all_distinct() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn signed_sums(items: &[BigInt], limits: &Limits) -> Result<SignedSumSet> {
    SignedSumSet::from_items(items, limits.sum_budget)
}

/// `2^n` as an exact integer.
pub fn enumeration_size(n: usize) -> BigInt {
    BigInt::one() << n
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn sel(v: &[usize]) -> Selector {
        Selector::new(v.to_vec())
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn subset_sum_examples() {
        let inst = Instance::from_u64(&[1, 2, 3], 10).unwrap();
        assert_eq!(subset_sum(&inst, &Selector::empty()).unwrap(), BigInt::zero());
        assert_eq!(subset_sum(&inst, &sel(&[0, 1, 2])).unwrap(), BigInt::from(6));
        let inst = Instance::from_u64(&[3, 5], 10).unwrap();
        assert_eq!(subset_sum(&inst, &sel(&[1])).unwrap(), BigInt::from(5));
        assert!(matches!(subset_sum(&inst, &sel(&[2])), Err(Error::Input(_))));
    }

    #[test]
    fn instances_reject_nonpositive_values() {
        assert!(Instance::from_u64(&[0, 1], 3).is_err());
        assert!(Instance::from_u64(&[1], 0).is_err());
    }

    #[test]
    fn optimum_of_two_three_five() {
        let inst = Instance::from_u64(&[2, 3, 5], 5).unwrap();
        let opt = optimum_bruteforce(&inst, &Limits::default()).unwrap();
        assert_eq!(opt.value, BigInt::from(5));
        assert_eq!(opt.selectors, vec![sel(&[0, 1]), sel(&[2])]);

        let inst = Instance::from_u64(&[1], 1).unwrap();
        let opt = optimum_bruteforce(&inst, &Limits::default()).unwrap();
        assert_eq!(opt.value, BigInt::one());
        assert_eq!(opt.selectors, vec![sel(&[0])]);
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let inst = Instance::from_u64(&[1; 5], 3).unwrap();
        let limits = Limits { enumeration_cap: 4, ..Limits::default() };
        assert!(matches!(optimum_bruteforce(&inst, &limits), Err(Error::Budget { .. })));
        assert!(matches!(subsets_summing_to(&inst, &BigInt::one(), &limits), Err(Error::Budget { .. })));
        assert!(matches!(all_subset_sums_distinct(inst.items(), &limits), Err(Error::Budget { .. })));
    }

    #[test]
    fn subsets_summing_to_examples() {
        let limits = Limits::default();
        let inst = Instance::from_u64(&[2, 3, 5], 5).unwrap();
        assert_eq!(subsets_summing_to(&inst, &BigInt::from(5), &limits).unwrap().len(), 2);
        assert!(subsets_summing_to(&inst, &BigInt::from(-1), &limits).unwrap().is_empty());
        let inst = Instance::from_u64(&[1, 2, 4], 7).unwrap();
        assert_eq!(subsets_summing_to(&inst, &BigInt::from(7), &limits).unwrap(), vec![sel(&[0, 1, 2])]);
    }

    #[test]
    fn distinctness_examples() {
        let limits = Limits::default();
        assert!(all_subset_sums_distinct(&big(&[1, 2, 4, 8]), &limits).unwrap());
        assert!(!all_subset_sums_distinct(&big(&[2, 3, 5]), &limits).unwrap());
        assert!(all_subset_sums_distinct(&[], &limits).unwrap());
    }

    #[test]
    fn big_weights_enumerate_exactly() {
        let huge = BigInt::one() << 200usize;
        let items = vec![huge.clone(), &huge + 1u32, BigInt::from(1)];
        let inst = Instance::new(items, &huge * 2u32 + 1u32).unwrap();
        let limits = Limits::default();
        let hits = subsets_summing_to(&inst, inst.capacity(), &limits).unwrap();
        assert_eq!(hits, vec![sel(&[0, 1])]);
        let opt = optimum_bruteforce(&inst, &limits).unwrap();
        assert_eq!(&opt.value, inst.capacity());
    }

    #[test]
    fn huge_capacity_with_small_items() {
        let inst = Instance::new(big(&[3, 4]), BigInt::one() << 300usize).unwrap();
        let opt = optimum_bruteforce(&inst, &Limits::default()).unwrap();
        assert_eq!(opt.value, BigInt::from(7));
    }
}
