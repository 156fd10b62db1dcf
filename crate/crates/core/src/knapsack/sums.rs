//! Sorted sum sets over a growing list of generators.
//!
//! Both sets keep a native `i128` representation while every reachable
//! value is provably in range (bounded by the sum of absolute generator
//! values) and switch to `BigInt` storage otherwise. Membership is a
//! binary search; extension by one generator is a linear merge.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest absolute generator total for which the `i128` store is used.
const SMALL_LIMIT_BITS: u64 = 120;

/// Default element budget for sum sets: 3^16.
pub const DEFAULT_SUM_BUDGET: u128 = 43_046_721;

pub(crate) trait Scalar: Ord + Clone + Send + Sync {
    fn origin() -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn magnitude(&self) -> Self;
}

impl Scalar for i128 {
    fn origin() -> Self {
        0
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn magnitude(&self) -> Self {
        i128::abs(*self)
    }
}

impl Scalar for BigInt {
    fn origin() -> Self {
        Zero::zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn magnitude(&self) -> Self {
        Signed::abs(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Store {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

impl Store {
    fn zero() -> Self {
        Store::Small(vec![0])
    }

    fn len(&self) -> usize {
        match self {
            Store::Small(v) => v.len(),
            Store::Big(v) => v.len(),
        }
    }

    fn contains(&self, x: &BigInt) -> bool {
        match self {
            Store::Small(v) => match x.to_i128() {
                Some(x) => v.binary_search(&x).is_ok(),
                None => false,
            },
            Store::Big(v) => v.binary_search(x).is_ok(),
        }
    }

    fn to_big(&self) -> Vec<BigInt> {
        match self {
            Store::Small(v) => v.iter().map(|&x| BigInt::from(x)).collect(),
            Store::Big(v) => v.clone(),
        }
    }

    /// Switches to `BigInt` storage if `bound` no longer fits the small store.
    fn widen_for(&mut self, bound: &BigInt) {
        if let Store::Small(v) = self {
            if bound.bits() > SMALL_LIMIT_BITS {
                *self = Store::Big(v.iter().map(|&x| BigInt::from(x)).collect());
            }
        }
    }
}

fn to_small(y: &BigInt) -> i128 {
    // Only called after `widen_for`, which guarantees the range.
    y.to_i128().expect("generator within small-store range")
}

fn extend_half<T: Scalar>(half: &[T], y: &T) -> Vec<T> {
    let mut out = Vec::with_capacity(half.len() * 3);
    out.extend_from_slice(half);
    out.extend(half.iter().map(|h| h.plus(y)));
    out.extend(half.iter().map(|h| h.minus(y).magnitude()));
    out.sort_unstable();
    out.dedup();
    out
}

/// Union of `v` and `v + y`, both sorted. The flag reports whether the two
/// sequences shared a value.
fn merge_shifted<T: Scalar>(v: &[T], y: &T) -> (Vec<T>, bool) {
    let shifted: Vec<T> = v.iter().map(|x| x.plus(y)).collect();
    let mut out = Vec::with_capacity(v.len() * 2);
    let mut collided = false;
    let (mut i, mut j) = (0, 0);
    while i < v.len() && j < shifted.len() {
        match v[i].cmp(&shifted[j]) {
            std::cmp::Ordering::Less => {
                out.push(v[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(shifted[j].clone());
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                collided = true;
                out.push(v[i].clone());
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&v[i..]);
    out.extend_from_slice(&shifted[j..]);
    (out, collided)
}

/// All values `Σ εᵢ·xᵢ` with `εᵢ ∈ {−1, 0, 1}` over the generators.
///
/// The set is symmetric under negation, so only its nonnegative half is
/// stored. It equals the set of all differences `sum(S1) − sum(S2)` of
/// two subsets of the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedSumSet {
    half: Store,
    generators: Vec<BigInt>,
    abs_total: BigInt,
}

impl Default for SignedSumSet {
    fn default() -> Self {
        Self::new()
    }
}

impl SignedSumSet {
    /// The set over no generators, `{0}`.
    pub fn new() -> Self {
        SignedSumSet { half: Store::zero(), generators: Vec::new(), abs_total: BigInt::zero() }
    }

    pub fn from_items(items: &[BigInt], budget: u128) -> Result<Self> {
        let mut set = Self::new();
        for x in items {
            set.extend(x, budget)?;
        }
        Ok(set)
    }

    /// Upper bound on the size of the set after adding `y`.
    fn estimate_after(&self, y: &BigInt) -> BigInt {
        let by_count = BigInt::from(self.len()) * 3u32;
        let by_range = (&self.abs_total + y.abs()) * 2u32 + 1u32;
        by_count.min(by_range)
    }

    /// Adds one generator: `V ↦ V ∪ (V + y) ∪ (V − y)`.
    pub fn extend(&mut self, y: &BigInt, budget: u128) -> Result<()> {
        let estimate = self.estimate_after(y);
        if estimate > BigInt::from(budget) {
            return Err(Error::budget("signed-sum set", format!("{estimate} values"), budget));
        }
        self.abs_total += y.abs();
        self.half.widen_for(&self.abs_total);
        let y = y.abs();
        self.half = match &self.half {
            Store::Small(v) => Store::Small(extend_half(v, &to_small(&y))),
            Store::Big(v) => Store::Big(extend_half(v, &y)),
        };
        self.generators.push(y);
        Ok(())
    }

    pub fn contains(&self, x: &BigInt) -> bool {
        self.half.contains(&x.abs())
    }

    /// Number of distinct values, negatives included.
    pub fn len(&self) -> usize {
        2 * self.half.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Absolute values of the generators, in insertion order.
    pub fn generators(&self) -> &[BigInt] {
        &self.generators
    }

    /// All values in increasing order.
    pub fn values(&self) -> Vec<BigInt> {
        let half = self.half.to_big();
        let mut out: Vec<BigInt> = half.iter().rev().filter(|x| !x.is_zero()).map(|x| -x).collect();
        out.extend(half);
        out
    }
}

/// Sorted distinct subset sums of the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetSumSet {
    sums: Store,
    generators: Vec<BigInt>,
    abs_total: BigInt,
    distinct: bool,
}

impl Default for SubsetSumSet {
    fn default() -> Self {
        Self::new()
    }
}

impl SubsetSumSet {
    pub fn new() -> Self {
        SubsetSumSet { sums: Store::zero(), generators: Vec::new(), abs_total: BigInt::zero(), distinct: true }
    }

    pub fn from_items(items: &[BigInt], budget: u128) -> Result<Self> {
        let mut set = Self::new();
        for x in items {
            set.extend(x, budget)?;
        }
        Ok(set)
    }

    /// Adds one generator: `V ↦ V ∪ (V + y)`.
    pub fn extend(&mut self, y: &BigInt, budget: u128) -> Result<()> {
        let by_count = BigInt::from(self.sums.len()) * 2u32;
        let by_range = &self.abs_total + y.abs() + 1u32;
        let estimate = by_count.min(by_range);
        if estimate > BigInt::from(budget) {
            return Err(Error::budget("subset-sum set", format!("{estimate} values"), budget));
        }
        self.abs_total += y.abs();
        self.sums.widen_for(&self.abs_total);
        let collided;
        self.sums = match &self.sums {
            Store::Small(v) => {
                let (out, c) = merge_shifted(v, &to_small(y));
                collided = c;
                Store::Small(out)
            }
            Store::Big(v) => {
                let (out, c) = merge_shifted(v, y);
                collided = c;
                Store::Big(out)
            }
        };
        self.distinct &= !collided;
        self.generators.push(y.clone());
        Ok(())
    }

    pub fn contains(&self, x: &BigInt) -> bool {
        self.sums.contains(x)
    }

    /// Whether all `2^k` subset sums are pairwise distinct.
    pub fn all_distinct(&self) -> bool {
        self.distinct
    }

    pub fn len(&self) -> usize {
        self.sums.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn generators(&self) -> &[BigInt] {
        &self.generators
    }

    pub fn values(&self) -> Vec<BigInt> {
        self.sums.to_big()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn signed_oracle(items: &[i64]) -> BTreeSet<i64> {
        let mut out = BTreeSet::new();
        let k = items.len() as u32;
        for code in 0..3u64.pow(k) {
            let mut c = code;
            let mut s = 0;
            for &x in items {
                match c % 3 {
                    1 => s += x,
                    2 => s -= x,
                    _ => {}
                }
                c /= 3;
            }
            out.insert(s);
        }
        out
    }

    #[test]
    fn signed_sums_of_three_and_five() {
        let set = SignedSumSet::from_items(&big(&[3, 5]), DEFAULT_SUM_BUDGET).unwrap();
        assert_eq!(set.values(), big(&[-8, -5, -3, -2, 0, 2, 3, 5, 8]));
        assert_eq!(set.len(), 9);
    }

    #[test]
    fn empty_generators_give_zero() {
        let set = SignedSumSet::new();
        assert_eq!(set.values(), big(&[0]));
        assert!(set.contains(&BigInt::zero()));
    }

    #[test]
    fn extension_matches_enumeration() {
        let mut set = SignedSumSet::from_items(&big(&[3, 5]), DEFAULT_SUM_BUDGET).unwrap();
        set.extend(&BigInt::from(1), DEFAULT_SUM_BUDGET).unwrap();
        let expected: Vec<BigInt> = signed_oracle(&[3, 5, 1]).into_iter().map(BigInt::from).collect();
        assert_eq!(set.values(), expected);
    }

    #[test]
    fn big_store_agrees_with_small() {
        let huge = BigInt::from(1u8) << 130usize;
        let items = vec![huge.clone(), BigInt::from(7), &huge + 3u32];
        let set = SignedSumSet::from_items(&items, DEFAULT_SUM_BUDGET).unwrap();
        assert!(matches!(set.half, Store::Big(_)));
        assert!(set.contains(&BigInt::from(3)));
        assert!(set.contains(&BigInt::from(-4)));
        assert!(set.contains(&(&huge * 2u32 + 10u32)));
        assert!(!set.contains(&BigInt::from(5)));
        assert_eq!(set.len(), 27);
    }

    #[test]
    fn budget_is_enforced_with_estimate() {
        let items: Vec<BigInt> = (0..5).map(|i| BigInt::from(10i64.pow(i + 1))).collect();
        let err = SignedSumSet::from_items(&items, 100).unwrap_err();
        assert!(matches!(err, Error::Budget { .. }));
        assert!(err.to_string().contains("243 values"), "{err}");
    }

    #[test]
    fn dense_generators_stay_within_range_estimate() {
        // {1,2,4,...,2^15}: 3^16 would blow the budget, the range bound does not.
        let items: Vec<BigInt> = (0..16).map(|i| BigInt::from(1i64 << i)).collect();
        let set = SignedSumSet::from_items(&items, 200_000).unwrap();
        assert_eq!(set.len(), 2 * 65535 + 1);
    }

    #[test]
    fn subset_sums_detect_collisions() {
        let set = SubsetSumSet::from_items(&big(&[2, 3, 5]), DEFAULT_SUM_BUDGET).unwrap();
        assert!(!set.all_distinct());
        assert_eq!(set.values(), big(&[0, 2, 3, 5, 7, 8, 10]));

        let set = SubsetSumSet::from_items(&big(&[1, 2, 4, 8]), DEFAULT_SUM_BUDGET).unwrap();
        assert!(set.all_distinct());
        assert_eq!(set.len(), 16);
    }
}
