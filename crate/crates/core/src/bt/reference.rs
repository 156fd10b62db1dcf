use num_bigint::BigInt;

use super::{AdaptivityClass, BtAlgorithm, Choice, ChoiceList, Decision, History, OrderKey};
use crate::error::{Error, Result};

/// Item orderings used by the reference algorithms. None of them reads
/// the history, so they are valid for every adaptivity class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ItemOrder {
    /// Lightest item first.
    Ascending,
    /// Heaviest item first.
    Descending,
    /// Listed values first, in list order; anything else afterwards by weight.
    Listed(Vec<BigInt>),
}

impl ItemOrder {
    fn key(&self, x: &BigInt) -> OrderKey {
        match self {
            ItemOrder::Ascending => vec![x.clone()],
            ItemOrder::Descending => vec![-x],
            ItemOrder::Listed(list) => match list.iter().position(|y| y == x) {
                Some(p) => vec![BigInt::from(0), BigInt::from(p)],
                None => vec![BigInt::from(1), x.clone()],
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Strategy {
    Greedy,
    Full,
    Capped(usize),
}

/// One of the built-in algorithms: greedy, full backtracking, or a
/// backtracker that keeps at most `b` partial solutions per level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceAlgorithm {
    strategy: Strategy,
    order: ItemOrder,
}

/// Accepts the next item whenever it still fits.
pub fn greedy_largest_fit(order: ItemOrder) -> ReferenceAlgorithm {
    ReferenceAlgorithm { strategy: Strategy::Greedy, order }
}

/// Branches on accept then reject at every node.
pub fn full_backtrack(order: ItemOrder) -> ReferenceAlgorithm {
    ReferenceAlgorithm { strategy: Strategy::Full, order }
}

/// Keeps, at every depth, the `b` feasible partial solutions with the
/// largest accepted sums; ties go to the lexicographically larger decision
/// vector with accept above reject.
///
/// The choice function only reads its own arguments: because the ordering
/// never looks at decisions, every node at depth `k` has seen the same
/// items, so each node can replay the level-by-level selection itself.
pub fn width_capped(b: usize, order: ItemOrder) -> Result<ReferenceAlgorithm> {
    if b == 0 {
        return Err(Error::Input("width cap must be at least 1".into()));
    }
    Ok(ReferenceAlgorithm { strategy: Strategy::Capped(b), order })
}

/// The catalog: greedy, full backtracking and `width_capped(b)`, all with
/// the same item order.
pub fn reference_algorithms(b: usize, order: ItemOrder) -> Result<Vec<ReferenceAlgorithm>> {
    Ok(vec![greedy_largest_fit(order.clone()), full_backtrack(order.clone()), width_capped(b, order)?])
}

impl ReferenceAlgorithm {
    /// Looks up a catalog entry by its command-line name.
    pub fn by_name(name: &str, cap: Option<usize>, order: ItemOrder) -> Result<Self> {
        match name {
            "greedy" | "greedy_largest_fit" => Ok(greedy_largest_fit(order)),
            "full" | "full_backtrack" => Ok(full_backtrack(order)),
            "capped" | "width_capped" => {
                let b = cap.ok_or_else(|| Error::Input("width_capped needs a cap".into()))?;
                width_capped(b, order)
            }
            other => Err(Error::Input(format!("unknown algorithm {other:?}"))),
        }
    }

    pub fn cap(&self) -> Option<usize> {
        match self.strategy {
            Strategy::Capped(b) => Some(b),
            _ => None,
        }
    }
}

/// Decision vectors kept at depth `items.len()` by the capped strategy.
pub(crate) fn capped_survivors(items: &[BigInt], capacity: &BigInt, b: usize) -> Vec<Vec<Decision>> {
    let mut level: Vec<(BigInt, Vec<Decision>)> = vec![(BigInt::from(0), Vec::new())];
    for x in items {
        let mut next = Vec::with_capacity(level.len() * 2);
        for (sum, ds) in &level {
            let with = sum + x;
            if &with <= capacity {
                let mut acc = ds.clone();
                acc.push(Decision::Accept);
                next.push((with, acc));
            }
            let mut rej = ds.clone();
            rej.push(Decision::Reject);
            next.push((sum.clone(), rej));
        }
        next.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| b.1.cmp(&a.1)));
        next.truncate(b);
        level = next;
    }
    level.into_iter().map(|(_, ds)| ds).collect()
}

impl BtAlgorithm for ReferenceAlgorithm {
    fn name(&self) -> String {
        match self.strategy {
            Strategy::Greedy => "greedy_largest_fit".into(),
            Strategy::Full => "full_backtrack".into(),
            Strategy::Capped(b) => format!("width_capped({b})"),
        }
    }

    fn class(&self) -> AdaptivityClass {
        AdaptivityClass::Adaptive
    }

    fn order_key(&self, _history: &History<'_>, candidate: &BigInt) -> OrderKey {
        self.order.key(candidate)
    }

    fn choices(&self, history: &History<'_>, next: &BigInt) -> ChoiceList {
        match self.strategy {
            Strategy::Greedy => {
                if history.accepted_sum() + next <= *history.capacity {
                    ChoiceList::only(Decision::Accept)
                } else {
                    ChoiceList::only(Decision::Reject)
                }
            }
            Strategy::Full => ChoiceList(vec![Choice::Decide(Decision::Accept), Choice::Decide(Decision::Reject)]),
            Strategy::Capped(b) => {
                let mut items = history.items.to_vec();
                items.push(next.clone());
                let kept = capped_survivors(&items, history.capacity, b);
                let mut out = Vec::new();
                for d in [Decision::Accept, Decision::Reject] {
                    let mut ext = history.decisions.to_vec();
                    ext.push(d);
                    if kept.contains(&ext) {
                        out.push(Choice::Decide(d));
                    }
                }
                if out.is_empty() {
                    out.push(Choice::Stop);
                }
                ChoiceList(out)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bt::{build_tree, extract_solutions, tree_width};
    use crate::knapsack::Instance;

    #[test]
    fn zero_cap_is_rejected() {
        assert!(width_capped(0, ItemOrder::Ascending).is_err());
        assert!(reference_algorithms(0, ItemOrder::Ascending).is_err());
    }

    #[test]
    fn cap_one_matches_greedy() {
        for (items, cap) in [(vec![5u64, 3, 9, 1], 10u64), (vec![7, 2, 4], 6), (vec![1, 2, 4, 8, 16], 21)] {
            for order in [ItemOrder::Ascending, ItemOrder::Descending] {
                let inst = Instance::from_u64(&items, cap).unwrap();
                let g = build_tree(&greedy_largest_fit(order.clone()), &inst).unwrap();
                let c = build_tree(&width_capped(1, order).unwrap(), &inst).unwrap();
                assert_eq!(extract_solutions(&g, &inst), extract_solutions(&c, &inst));
                assert_eq!(tree_width(&c), 1);
            }
        }
    }

    #[test]
    fn capped_width_never_exceeds_cap() {
        let inst = Instance::from_u64(&[3, 5, 7, 11, 13, 17, 19], 30).unwrap();
        for b in 1..=10 {
            let tree = build_tree(&width_capped(b, ItemOrder::Ascending).unwrap(), &inst).unwrap();
            assert!(tree_width(&tree) <= b, "b={b}");
            tree.check_structure().unwrap();
        }
    }

    #[test]
    fn listed_order_puts_listed_items_first() {
        let order = ItemOrder::Listed(vec![BigInt::from(9), BigInt::from(2)]);
        let mut keys: Vec<(OrderKey, i32)> = [1, 2, 9, 4].iter().map(|&x| (order.key(&BigInt::from(x)), x)).collect();
        keys.sort();
        assert_eq!(keys.iter().map(|k| k.1).collect::<Vec<_>>(), vec![9, 2, 1, 4]);
    }

    #[test]
    fn lookup_by_name() {
        assert_eq!(ReferenceAlgorithm::by_name("width_capped", Some(3), ItemOrder::Ascending).unwrap().cap(), Some(3));
        assert!(ReferenceAlgorithm::by_name("width_capped", None, ItemOrder::Ascending).is_err());
        assert!(ReferenceAlgorithm::by_name("dp", None, ItemOrder::Ascending).is_err());
    }
}
