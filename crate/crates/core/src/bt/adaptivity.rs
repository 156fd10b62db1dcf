use num_bigint::BigInt;

use super::{rank, AdaptivityClass, BtAlgorithm, Decision, History};
use crate::error::{Error, Result};

/// An item prefix together with decision histories to replay it under.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Probe {
    pub items: Vec<BigInt>,
    pub histories: Vec<Vec<Decision>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdaptivityReport {
    Pass,
    /// Two argument tuples the declared class must not distinguish, with the
    /// differing rankings of the candidates.
    Fail {
        first: (Vec<BigInt>, Vec<Decision>),
        second: (Vec<BigInt>, Vec<Decision>),
        first_ranking: Vec<BigInt>,
        second_ranking: Vec<BigInt>,
    },
}

impl AdaptivityReport {
    pub fn passed(&self) -> bool {
        matches!(self, AdaptivityReport::Pass)
    }
}

/// Items and decisions seen by a node.
type Observed = (Vec<BigInt>, Vec<Decision>);

/// Evaluates the ordering on `candidates` for every probe and compares the
/// rankings the declared class is required to keep equal: across decision
/// histories for `Adaptive`, across everything for `Fixed`.
pub fn check_adaptivity(
    alg: &dyn BtAlgorithm,
    capacity: &BigInt,
    candidates: &[BigInt],
    probes: &[Probe],
) -> Result<AdaptivityReport> {
    if probes.is_empty() || probes.iter().all(|p| p.histories.is_empty()) {
        return Err(Error::Input("no probes supplied".into()));
    }
    for p in probes {
        if let Some(h) = p.histories.iter().find(|h| h.len() != p.items.len()) {
            return Err(Error::Input(format!(
                "history of length {} does not match an item prefix of length {}",
                h.len(),
                p.items.len()
            )));
        }
    }
    let class = alg.class();
    match class {
        AdaptivityClass::FullyAdaptive => return Ok(AdaptivityReport::Pass),
        AdaptivityClass::Adaptive => {
            if probes.iter().any(|p| distinct_count(&p.histories) < 2) {
                return Err(Error::Input("adaptive check needs two distinct histories per prefix".into()));
            }
        }
        AdaptivityClass::Fixed => {
            let prefixes: Vec<&Vec<BigInt>> = probes.iter().map(|p| &p.items).collect();
            if distinct_count(&prefixes) < 2 {
                return Err(Error::Input("fixed check needs two distinct item prefixes".into()));
            }
        }
    }

    let ranking = |items: &[BigInt], decisions: &[Decision]| -> Result<Vec<BigInt>> {
        let history = History { capacity, items, decisions };
        Ok(rank(alg, &history, candidates)?.into_iter().map(|i| candidates[i].clone()).collect())
    };

    let mut reference: Option<(Observed, Vec<BigInt>)> = None;
    for p in probes {
        if class == AdaptivityClass::Adaptive {
            reference = None;
        }
        for h in &p.histories {
            let r = ranking(&p.items, h)?;
            match &reference {
                None => reference = Some(((p.items.clone(), h.clone()), r)),
                Some((args, base)) if *base != r => {
                    return Ok(AdaptivityReport::Fail {
                        first: args.clone(),
                        second: (p.items.clone(), h.clone()),
                        first_ranking: base.clone(),
                        second_ranking: r,
                    });
                }
                Some(_) => {}
            }
        }
    }
    Ok(AdaptivityReport::Pass)
}

fn distinct_count<T: PartialEq>(xs: &[T]) -> usize {
    let mut seen: Vec<&T> = Vec::new();
    for x in xs {
        if !seen.contains(&x) {
            seen.push(x);
        }
    }
    seen.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bt::{full_backtrack, ChoiceList, ItemOrder, OrderKey};
    use Decision::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// Declares a class but orders by weight, reversed when the last
    /// decision was an accept.
    struct Sneaky(AdaptivityClass);

    impl BtAlgorithm for Sneaky {
        fn name(&self) -> String {
            "sneaky".into()
        }
        fn class(&self) -> AdaptivityClass {
            self.0
        }
        fn order_key(&self, h: &History<'_>, c: &BigInt) -> OrderKey {
            if h.decisions.last() == Some(&Accept) {
                vec![-c]
            } else {
                vec![c.clone()]
            }
        }
        fn choices(&self, _: &History<'_>, _: &BigInt) -> ChoiceList {
            ChoiceList::only(Accept)
        }
    }

    /// Orders by distance to the last seen item: adaptive, not fixed.
    struct Nearest;

    impl BtAlgorithm for Nearest {
        fn name(&self) -> String {
            "nearest".into()
        }
        fn class(&self) -> AdaptivityClass {
            AdaptivityClass::Fixed
        }
        fn order_key(&self, h: &History<'_>, c: &BigInt) -> OrderKey {
            let anchor = h.items.last().cloned().unwrap_or_default();
            vec![num_traits::Signed::abs(&(c - anchor)), c.clone()]
        }
        fn choices(&self, _: &History<'_>, _: &BigInt) -> ChoiceList {
            ChoiceList::only(Accept)
        }
    }

    fn probes() -> Vec<Probe> {
        vec![
            Probe { items: big(&[4]), histories: vec![vec![Accept], vec![Reject]] },
            Probe { items: big(&[4, 20]), histories: vec![vec![Accept, Reject], vec![Reject, Reject]] },
        ]
    }

    #[test]
    fn weight_ordering_passes_fixed() {
        struct ByWeight;
        impl BtAlgorithm for ByWeight {
            fn name(&self) -> String {
                "by-weight".into()
            }
            fn class(&self) -> AdaptivityClass {
                AdaptivityClass::Fixed
            }
            fn order_key(&self, _: &History<'_>, c: &BigInt) -> OrderKey {
                vec![c.clone()]
            }
            fn choices(&self, _: &History<'_>, _: &BigInt) -> ChoiceList {
                ChoiceList::only(Accept)
            }
        }
        let report = check_adaptivity(&ByWeight, &BigInt::from(50), &big(&[1, 7, 19]), &probes()).unwrap();
        assert!(report.passed());
        let report =
            check_adaptivity(&full_backtrack(ItemOrder::Ascending), &BigInt::from(50), &big(&[1, 7]), &probes())
                .unwrap();
        assert!(report.passed());
    }

    #[test]
    fn decision_reading_fails_adaptive() {
        let report =
            check_adaptivity(&Sneaky(AdaptivityClass::Adaptive), &BigInt::from(50), &big(&[1, 7, 19]), &probes())
                .unwrap();
        match report {
            AdaptivityReport::Fail { first, second, .. } => {
                assert_eq!(first, (big(&[4]), vec![Accept]));
                assert_eq!(second, (big(&[4]), vec![Reject]));
            }
            AdaptivityReport::Pass => panic!("expected a counterexample"),
        }
    }

    #[test]
    fn fully_adaptive_passes_vacuously() {
        let report =
            check_adaptivity(&Sneaky(AdaptivityClass::FullyAdaptive), &BigInt::from(50), &big(&[1, 7]), &probes())
                .unwrap();
        assert!(report.passed());
    }

    #[test]
    fn item_reading_fails_fixed_but_passes_adaptive_probes() {
        let cands = big(&[1, 7, 19]);
        let report = check_adaptivity(&Nearest, &BigInt::from(50), &cands, &probes()).unwrap();
        assert!(!report.passed());
    }

    #[test]
    fn empty_and_thin_probe_sets_are_rejected() {
        let cands = big(&[1, 2]);
        let cap = BigInt::from(5);
        assert!(check_adaptivity(&Nearest, &cap, &cands, &[]).is_err());
        let one = vec![Probe { items: big(&[4]), histories: vec![vec![Accept]] }];
        assert!(check_adaptivity(&Sneaky(AdaptivityClass::Adaptive), &cap, &cands, &one).is_err());
        assert!(check_adaptivity(&Nearest, &cap, &cands, &one).is_err());
        let mismatched = vec![Probe { items: big(&[4]), histories: vec![vec![], vec![Accept]] }];
        assert!(check_adaptivity(&Sneaky(AdaptivityClass::Adaptive), &cap, &cands, &mismatched).is_err());
    }
}
