//! Growth rate of `C(βn, γn)` and the choice of `(β, γ)` maximizing it.
//!
//! By Stirling, `C(βn, γn) ~ c·e^{f(β,γ)·n} / √n` with
//! `f(β,γ) = β ln β − γ ln γ − (β−γ) ln(β−γ)`. Since `f` increases in `β`,
//! the constrained maximum over `β + γ ≤ 1` sits on `β = 1 − γ`, where
//! `g(γ) = f(1−γ, γ)` peaks at the root of `5γ² − 5γ + 1`.

mod root;
mod table;

pub use root::{bisect, quadratic_roots};
pub use table::{bound_report, bound_table, format_sig, render_csv, BoundQuery, BoundReport, CSV_HEADER};

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};

/// Bisection tolerance for the optimal `γ`.
pub const ROOT_TOLERANCE: f64 = 1e-12;

fn xlnx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `f(β, γ)`, with the `(β−γ) ln(β−γ)` term taken as its limit 0 at `γ = β`.
pub fn f(beta: f64, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && beta >= gamma && beta.is_finite()) {
        return Err(Error::Domain(format!("f needs beta >= gamma > 0, got ({beta}, {gamma})")));
    }
    Ok(xlnx(beta) - xlnx(gamma) - xlnx(beta - gamma))
}

/// `∂f/∂β = ln β − ln(β − γ)`.
pub fn df_dbeta(beta: f64, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && beta > gamma) {
        return Err(Error::Domain(format!("df/dbeta needs beta > gamma > 0, got ({beta}, {gamma})")));
    }
    Ok(beta.ln() - (beta - gamma).ln())
}

fn check_half_open(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma < 0.5 {
        Ok(())
    } else {
        Err(Error::Domain(format!("gamma must lie in (0, 1/2), got {gamma}")))
    }
}

pub fn g(gamma: f64) -> Result<f64> {
    check_half_open(gamma)?;
    Ok(xlnx(1.0 - gamma) - xlnx(gamma) - xlnx(1.0 - 2.0 * gamma))
}

/// `g′(γ) = 2 ln(1−2γ) − ln γ − ln(1−γ)`.
pub fn g_prime(gamma: f64) -> Result<f64> {
    check_half_open(gamma)?;
    Ok(2.0 * (1.0 - 2.0 * gamma).ln() - gamma.ln() - (1.0 - gamma).ln())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalGamma {
    /// `(5 − √5)/10`.
    pub closed_form: f64,
    /// Bisection root of `g′` on `(0, 1/2)`.
    pub numeric: f64,
}

/// Roots of `5γ² − 5γ + 1` inside `(0, 1/2)`.
pub fn stationary_points() -> Vec<f64> {
    quadratic_roots(5.0, -5.0, 1.0).into_iter().filter(|&r| r > 0.0 && r < 0.5).collect()
}

pub fn optimal_gamma() -> Result<OptimalGamma> {
    let closed_form = match stationary_points().as_slice() {
        [r] => *r,
        other => return Err(Error::Internal(format!("expected one stationary point, found {other:?}"))),
    };
    // g′ is strictly decreasing on (0, 1/2), from +∞ to −∞.
    let numeric = bisect(|x| g_prime(x).expect("inside (0, 1/2)"), 1e-9, 0.5 - 1e-9, ROOT_TOLERANCE)?;
    Ok(OptimalGamma { closed_form, numeric })
}

/// `e^{g(γ*)}`, the growth base of the optimized bound.
pub fn optimal_base() -> Result<f64> {
    Ok(g(optimal_gamma()?.closed_form)?.exp())
}

/// Whether `f(·, γ)` is strictly increasing along `beta_grid`.
pub fn monotonicity_check(gamma: f64, beta_grid: &[f64]) -> Result<bool> {
    if let Some(b) = beta_grid.iter().find(|&&b| !(b > gamma && b <= 1.0 - gamma)) {
        return Err(Error::Domain(format!("grid point {b} outside ({gamma}, {}]", 1.0 - gamma)));
    }
    let values = beta_grid.iter().map(|&b| f(b, gamma)).collect::<Result<Vec<_>>>()?;
    Ok(beta_grid.windows(2).zip(values.windows(2)).all(|(b, v)| b[0] < b[1] && v[0] < v[1]))
}

/// Exact `C(a, b)`.
pub fn binomial_exact(a: u64, b: u64) -> Result<BigInt> {
    if b > a {
        return Err(Error::Domain(format!("C({a}, {b}) needs b <= a")));
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 0..b {
        acc = acc * (a - i) / (i + 1);
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StirlingEstimate {
    /// Each factorial replaced by `√(2πm)(m/e)^m`.
    pub full: f64,
    /// `c · base^n / √n`.
    pub simplified: f64,
    /// `c = √(β / (2π γ (β−γ)))`.
    pub constant: f64,
}

fn ln_stirling_factorial(m: f64) -> f64 {
    0.5 * (2.0 * PI * m).ln() + m * (m / std::f64::consts::E).ln()
}

/// The constant in `C(βn, γn) ~ c · e^{f n} / √n`.
pub fn leading_constant(beta: f64, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && beta > gamma) {
        return Err(Error::Domain(format!("needs beta > gamma > 0, got ({beta}, {gamma})")));
    }
    Ok((beta / (2.0 * PI * gamma * (beta - gamma))).sqrt())
}

pub fn stirling_binomial(beta: f64, gamma: f64, n: u64) -> Result<StirlingEstimate> {
    let nf = n as f64;
    if !(beta * nf >= 1.0 && gamma * nf >= 1.0 && beta > gamma) {
        return Err(Error::Domain(format!(
            "Stirling estimate needs beta*n, gamma*n >= 1 and beta > gamma, got ({beta}, {gamma}, {n})"
        )));
    }
    let ln_full = ln_stirling_factorial(beta * nf)
        - ln_stirling_factorial(gamma * nf)
        - ln_stirling_factorial((beta - gamma) * nf);
    let constant = leading_constant(beta, gamma)?;
    let simplified = constant * (f(beta, gamma)? * nf).exp() / nf.sqrt();
    Ok(StirlingEstimate { full: ln_full.exp(), simplified, constant })
}

/// Open interval of admissible `α`: `α(1−β) > 1` and `αγ < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaInterval {
    pub lo: f64,
    pub hi: f64,
    pub midpoint: f64,
}

pub fn alpha_interval(beta: f64, gamma: f64) -> Result<AlphaInterval> {
    if !(gamma > 0.0 && beta > 0.0 && beta < 1.0) {
        return Err(Error::Domain(format!("needs 0 < beta < 1 and gamma > 0, got ({beta}, {gamma})")));
    }
    if beta + gamma >= 1.0 {
        return Err(Error::Domain(format!("beta + gamma = {} >= 1 leaves no valid alpha", beta + gamma)));
    }
    let lo = 1.0 / (1.0 - beta);
    let hi = 1.0 / gamma;
    Ok(AlphaInterval { lo, hi, midpoint: (lo + hi) / 2.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    const GAMMA_STAR: f64 = 0.276_393_202_250_021;

    #[test]
    fn f_at_half_quarter() {
        let v = f(0.5, 0.25).unwrap();
        assert!((v - 2f64.ln() / 2.0).abs() < 1e-15);
        assert!((v.exp() - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn f_at_three_quarters() {
        // 0.75 ln 0.75 − 0.25 ln 0.25 − 0.5 ln 0.5, evaluated term by term.
        let expected = -0.215_761_554_29 + 0.346_573_590_28 + 0.346_573_590_28;
        assert!((f(0.75, 0.25).unwrap() - expected).abs() < 1e-9);
        assert!((f(0.75, 0.25).unwrap() - 0.477_385_6).abs() < 1e-7);
    }

    #[test]
    fn f_limit_on_diagonal() {
        assert_eq!(f(0.3, 0.3).unwrap(), 0.0);
        assert!(f(0.2, 0.3).is_err());
        assert!(f(0.5, 0.0).is_err());
    }

    #[test]
    fn g_and_derivative_examples() {
        assert!((g(0.25).unwrap() - f(0.75, 0.25).unwrap()).abs() < 1e-15);
        assert!((g_prime(0.25).unwrap() - (4.0f64 / 3.0).ln()).abs() < 1e-12);
        assert!(g_prime(GAMMA_STAR).unwrap().abs() < 1e-12);
        assert!(g(0.5).is_err());
        assert!(g_prime(0.0).is_err());
    }

    #[test]
    fn optimum_matches_closed_form() {
        let opt = optimal_gamma().unwrap();
        assert!((opt.closed_form - (5.0 - 5f64.sqrt()) / 10.0).abs() < 1e-15);
        assert!((opt.numeric - opt.closed_form).abs() < 1e-10);
        // The other root of 5γ² − 5γ + 1 is outside (0, 1/2).
        let roots = quadratic_roots(5.0, -5.0, 1.0);
        assert_eq!(roots.len(), 2);
        assert!((roots[1] - (5.0 + 5f64.sqrt()) / 10.0).abs() < 1e-15);
        assert_eq!(stationary_points().len(), 1);
    }

    #[test]
    fn base_is_golden_ratio() {
        let base = optimal_base().unwrap();
        assert!((base - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-9);
        assert!((base.log2() - 0.694_241_9).abs() < 1e-6);
        let at_quarter = g(0.25).unwrap().exp();
        assert!((at_quarter - 1.611_854_9).abs() < 1e-6);
        assert!(at_quarter < base);
    }

    #[test]
    fn monotone_in_beta() {
        assert!(monotonicity_check(0.25, &[0.3, 0.5, 0.7, 0.75]).unwrap());
        for b in [0.3, 0.5, 0.7, 0.75] {
            assert!(df_dbeta(b, 0.25).unwrap() > 0.0);
        }
        assert!(monotonicity_check(0.25, &[0.5]).unwrap());
        assert!(monotonicity_check(0.25, &[0.5, 0.3]).is_ok_and(|ok| !ok));
        assert!(monotonicity_check(0.25, &[0.2]).is_err());
    }

    #[test]
    fn exact_binomials() {
        assert_eq!(binomial_exact(4, 2).unwrap(), BigInt::from(6));
        assert_eq!(binomial_exact(8, 4).unwrap(), BigInt::from(70));
        assert_eq!(binomial_exact(6, 3).unwrap(), BigInt::from(20));
        assert_eq!(binomial_exact(0, 0).unwrap(), BigInt::one());
        assert!(binomial_exact(3, 4).is_err());
        let big = binomial_exact(200, 100).unwrap();
        // C(200,100) ≈ 9.0549e58
        assert!((big.to_f64().unwrap() / 9.054_851_465_610_329e58 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn stirling_of_four_choose_two() {
        // 4! ≈ √(8π)(4/e)^4, 2! ≈ √(4π)(2/e)^2, computed independently.
        let fact = |m: f64| (2.0 * PI * m).sqrt() * (m / std::f64::consts::E).powf(m);
        let oracle = fact(4.0) / (fact(2.0) * fact(2.0));
        let est = stirling_binomial(0.5, 0.25, 8).unwrap();
        assert!((est.full - oracle).abs() < 1e-12);
        assert!(est.full > 6.3 && est.full < 6.45, "{}", est.full);
        assert!((6.0 / est.full - 0.94).abs() < 0.01);
        // Both forms agree exactly: the √n and constant factors are algebraic rewrites.
        assert!((est.simplified / est.full - 1.0).abs() < 1e-12);
        assert!(stirling_binomial(0.5, 0.25, 2).is_err());
    }

    #[test]
    fn alpha_interval_examples() {
        let iv = alpha_interval(0.5, 0.25).unwrap();
        assert_eq!((iv.lo, iv.hi, iv.midpoint), (2.0, 4.0, 3.0));
        let beta = 1.0 - GAMMA_STAR - 0.01;
        let iv = alpha_interval(beta, GAMMA_STAR).unwrap();
        assert!((iv.lo - 3.4917).abs() < 1e-4, "{}", iv.lo);
        assert!((iv.hi - 3.6180).abs() < 1e-4, "{}", iv.hi);
        assert!(alpha_interval(0.75, 0.25).is_err());
    }
}
