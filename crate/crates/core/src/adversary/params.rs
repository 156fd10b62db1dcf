use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};

/// Parameters of the game and the completion construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversaryParams {
    /// Total item count of a completed instance.
    pub n: usize,
    /// Fraction of items the Solver picks.
    pub beta: BigRational,
    /// Size fraction of the designated subset `Q`.
    pub gamma: BigRational,
    /// Items live in the open interval `(0, α·N/n)`.
    pub alpha: BigRational,
    /// Knapsack capacity `N`.
    pub capacity: BigInt,
    /// Slack radius `U` around the completion center.
    pub slack: BigInt,
}

pub fn pow3(k: usize) -> BigInt {
    Pow::pow(BigInt::from(3u32), k)
}

/// `N = 10·n·3^n`.
pub fn default_capacity(n: usize) -> BigInt {
    pow3(n) * 10u32 * n
}

/// `U = 3^n`.
pub fn default_slack(n: usize) -> BigInt {
    pow3(n)
}

/// Midpoint of the admissible interval `(1/(1−β), 1/γ)`.
pub fn default_alpha(beta: &BigRational, gamma: &BigRational) -> Option<BigRational> {
    let one = BigRational::one();
    if beta >= &one || !gamma.is_positive() {
        return None;
    }
    let lo = (&one - beta).recip();
    let hi = gamma.recip();
    Some((lo + hi) / BigRational::from_integer(2.into()))
}

/// Parses `"p/q"`, an integer, or an exact decimal like `"0.25"`.
pub fn parse_ratio(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Input(format!("cannot parse {s:?} as an exact fraction"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int: BigInt = if int.is_empty() || int == "-" { BigInt::zero() } else { int.parse().map_err(|_| bad())? };
        let scale = Pow::pow(BigInt::from(10u32), frac.len());
        let frac: BigInt = frac.parse().map_err(|_| bad())?;
        let mag = int.abs() * &scale + frac;
        let num = if negative { -mag } else { mag };
        return Ok(BigRational::new(num, scale));
    }
    Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?))
}

pub fn format_ratio(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// The first inequality that fails, as a human-readable statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamViolation(pub String);

impl fmt::Display for ParamViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated", self.0)
    }
}

impl From<ParamViolation> for Error {
    fn from(v: ParamViolation) -> Self {
        Error::Infeasible(v.to_string())
    }
}

fn ratio(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

impl AdversaryParams {
    /// The `(β, γ, α) = (1/2, 1/4, 3)` configuration with default `N` and `U`.
    pub fn desk(n: usize) -> Self {
        AdversaryParams {
            n,
            beta: BigRational::new(1.into(), 2.into()),
            gamma: BigRational::new(1.into(), 4.into()),
            alpha: ratio(3),
            capacity: default_capacity(n),
            slack: default_slack(n),
        }
    }

    fn scaled(&self, frac: &BigRational) -> BigRational {
        frac * ratio(self.n)
    }

    /// `βn`, the number of Solver picks.
    pub fn picks(&self) -> usize {
        usize::try_from(self.scaled(&self.beta).floor().to_integer()).unwrap_or(0)
    }

    /// `γn`, the size of each designated subset.
    pub fn subset_size(&self) -> usize {
        usize::try_from(self.scaled(&self.gamma).floor().to_integer()).unwrap_or(0)
    }

    /// `(1−β)n`, the size of each completion set `R`.
    pub fn completion_size(&self) -> usize {
        self.n - self.picks().min(self.n)
    }

    /// `α·N/n`, the open upper end of the item range.
    pub fn item_limit(&self) -> BigRational {
        &self.alpha * ratio(self.capacity.clone()) / ratio(self.n.max(1))
    }

    /// Largest integer strictly below `α·N/n`.
    pub fn max_item(&self) -> BigInt {
        let lim = self.item_limit();
        let c = lim.ceil().to_integer();
        c - 1u32
    }

    pub fn in_range(&self, x: &BigInt) -> bool {
        x.is_positive() && ratio(x.clone()) < self.item_limit()
    }

    /// Checks every inequality the game and construction rely on, in order.
    pub fn check(&self) -> Result<(), ParamViolation> {
        let fail = |s: &str| Err(ParamViolation(s.to_string()));
        let one = BigRational::one();
        let zero = BigRational::zero();
        if self.n == 0 {
            return fail("n >= 1");
        }
        if self.gamma <= zero {
            return fail("gamma > 0");
        }
        if self.beta <= self.gamma {
            return fail("beta > gamma");
        }
        if &self.beta + &self.gamma >= one {
            return fail("beta + gamma < 1");
        }
        if &self.alpha * (&one - &self.beta) <= one {
            return fail("alpha*(1-beta) > 1");
        }
        if &self.alpha * &self.gamma >= one {
            return fail("alpha*gamma < 1");
        }
        if !self.scaled(&self.beta).is_integer() {
            return fail("beta*n integral");
        }
        if !self.scaled(&self.gamma).is_integer() {
            return fail("gamma*n integral");
        }
        if self.completion_size() < 2 {
            return fail("(1-beta)*n >= 2");
        }
        if !self.capacity.is_positive() {
            return fail("N > 0");
        }
        if !self.slack.is_positive() {
            return fail("U > 0");
        }
        let n_cap = ratio(self.capacity.clone());
        let u = ratio(self.slack.clone());
        let m = ratio(self.completion_size());
        let five_halves_u = &u * BigRational::new(5.into(), 2.into());
        let lower = (&n_cap - &self.gamma * &self.alpha * &n_cap) / &m - &five_halves_u - &one;
        if lower <= zero {
            return fail("containment (N - gamma*alpha*N)/((1-beta)*n) - (5/2)*U - 1 > 0");
        }
        let upper = &n_cap / &m + &five_halves_u + &one;
        if upper >= self.item_limit() {
            return fail("containment N/((1-beta)*n) + (5/2)*U + 1 < alpha*N/n");
        }
        if pow3(self.n.saturating_sub(2)) * 2u32 > self.slack {
            return fail("counting margin 2*3^(n-2) < U+1");
        }
        let k = self.picks();
        let pool = pow3(k) + (BigInt::one() << k);
        if self.max_item() <= pool {
            return fail("item range larger than 3^(beta*n) + 2^(beta*n)");
        }
        Ok(())
    }
}

/// Pass, or the first violated inequality.
pub fn params_feasible(params: &AdversaryParams) -> Result<(), ParamViolation> {
    params.check()
}

/// Exact ceiling and floor of a rational, as integers.
pub(crate) fn ceil_floor(x: &BigRational) -> (BigInt, BigInt) {
    let (q, r) = x.numer().div_mod_floor(x.denom());
    if r.is_zero() {
        (q.clone(), q)
    } else {
        (&q + 1u32, q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn desk_eight_passes() {
        let p = AdversaryParams::desk(8);
        assert_eq!(p.capacity, BigInt::from(524_880));
        assert_eq!(p.slack, BigInt::from(6561));
        assert_eq!(params_feasible(&p), Ok(()));
        assert_eq!((p.picks(), p.subset_size(), p.completion_size()), (4, 2, 4));
    }

    #[test]
    fn containment_margins_for_desk_eight() {
        // (N − N·3/4)/4 − (5/2)·6561 − 1 = 16401.5 and 196830 − 147623.5.
        let p = AdversaryParams::desk(8);
        let n_cap = ratio(p.capacity.clone());
        let lower = (&n_cap - &n_cap * BigRational::new(3.into(), 4.into())) / ratio(4)
            - ratio(6561) * BigRational::new(5.into(), 2.into())
            - ratio(1);
        assert_eq!(lower, BigRational::new(32803.into(), 2.into()));
        assert_eq!(p.item_limit(), ratio(196_830));
        assert_eq!(p.max_item(), BigInt::from(196_829));
    }

    #[test]
    fn small_capacity_fails_containment() {
        let mut p = AdversaryParams::desk(8);
        p.capacity = BigInt::from(6561);
        let v = params_feasible(&p).unwrap_err();
        assert!(v.to_string().contains("containment"), "{v}");
    }

    #[test]
    fn swapped_fractions_fail_first_on_ordering() {
        let mut p = AdversaryParams::desk(8);
        p.beta = parse_ratio("1/4").unwrap();
        p.gamma = parse_ratio("1/2").unwrap();
        assert_eq!(params_feasible(&p).unwrap_err().to_string(), "beta > gamma violated");
    }

    #[test]
    fn alpha_and_divisibility_checks() {
        let mut p = AdversaryParams::desk(8);
        p.alpha = ratio(2);
        assert_eq!(params_feasible(&p).unwrap_err().0, "alpha*(1-beta) > 1");
        p.alpha = ratio(4);
        assert_eq!(params_feasible(&p).unwrap_err().0, "alpha*gamma < 1");
        let mut p = AdversaryParams::desk(10);
        p.capacity = default_capacity(10);
        assert_eq!(params_feasible(&p).unwrap_err().0, "gamma*n integral");
        let mut p = AdversaryParams::desk(8);
        p.slack = BigInt::from(100);
        assert!(params_feasible(&p).unwrap_err().0.starts_with("counting margin"));
    }

    #[test]
    fn ratios_parse_exactly() {
        assert_eq!(parse_ratio("1/2").unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(parse_ratio("3").unwrap(), ratio(3));
        assert_eq!(parse_ratio("0.25").unwrap(), BigRational::new(1.into(), 4.into()));
        assert_eq!(parse_ratio("-1.5").unwrap(), BigRational::new((-3).into(), 2.into()));
        assert!(parse_ratio("1/0").is_err());
        assert!(parse_ratio("abc").is_err());
        assert!(parse_ratio("1.").is_err());
        assert_eq!(format_ratio(&parse_ratio("2/4").unwrap()), "1/2");
    }

    #[test]
    fn default_alpha_is_midpoint() {
        let half = BigRational::new(1.into(), 2.into());
        let quarter = BigRational::new(1.into(), 4.into());
        assert_eq!(default_alpha(&half, &quarter), Some(ratio(3)));
        assert_eq!(default_alpha(&ratio(1), &quarter), None);
    }

    #[test]
    fn ceil_floor_of_rationals() {
        assert_eq!(ceil_floor(&BigRational::new(7.into(), 2.into())), (4.into(), 3.into()));
        assert_eq!(ceil_floor(&BigRational::new((-7).into(), 2.into())), ((-3).into(), (-4).into()));
        assert_eq!(ceil_floor(&ratio(5)), (5.into(), 5.into()));
    }
}
