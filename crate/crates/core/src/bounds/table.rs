use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{binomial_exact, f, stirling_binomial};
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "beta,gamma,n,f,base,exponent_log2,binomial_exact,stirling_approx,ratio";

/// Slack for the boundary `β + γ = 1` and for integrality of `βn`.
const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundQuery {
    pub beta: f64,
    pub gamma: f64,
    pub n: Option<u64>,
}

impl BoundQuery {
    /// `β > γ > 0` and `β + γ ≤ 1`; the boundary is admitted.
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.beta > self.gamma) {
            return Err(Error::Domain(format!("needs beta > gamma > 0, got ({}, {})", self.beta, self.gamma)));
        }
        if self.beta + self.gamma > 1.0 + EPS {
            return Err(Error::Domain(format!("beta + gamma = {} exceeds 1", self.beta + self.gamma)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub query: BoundQuery,
    pub f_value: f64,
    pub base: f64,
    pub exponent_log2: f64,
    pub binomial_exact: Option<BigInt>,
    pub stirling_approx: Option<f64>,
    pub ratio: Option<f64>,
}

fn integral(x: f64, what: &str) -> Result<u64> {
    let r = x.round();
    if (x - r).abs() > EPS || r < 0.0 {
        return Err(Error::Domain(format!("{what} = {x} is not a nonnegative integer")));
    }
    Ok(r as u64)
}

pub fn bound_report(query: BoundQuery) -> Result<BoundReport> {
    query.validate()?;
    let f_value = f(query.beta, query.gamma)?;
    let mut report = BoundReport {
        query,
        f_value,
        base: f_value.exp(),
        exponent_log2: f_value / std::f64::consts::LN_2,
        binomial_exact: None,
        stirling_approx: None,
        ratio: None,
    };
    if let Some(n) = query.n {
        let a = integral(query.beta * n as f64, "beta*n")?;
        let b = integral(query.gamma * n as f64, "gamma*n")?;
        let exact = binomial_exact(a, b)?;
        let approx = stirling_binomial(query.beta, query.gamma, n)?.full;
        report.ratio = exact.to_f64().map(|e| e / approx);
        report.binomial_exact = Some(exact);
        report.stirling_approx = Some(approx);
    }
    Ok(report)
}

/// One row per query, in input order. A failing row does not affect others.
pub fn bound_table(queries: &[BoundQuery]) -> Vec<Result<BoundReport>> {
    queries.iter().map(|&q| bound_report(q)).collect()
}

/// `x` with `digits` significant digits, `%#.{digits}g` style.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return format!("{:.*}", digits.saturating_sub(1), 0.0);
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{mantissa}e{exp}")
    } else {
        format!("{:.*}", (digits as i32 - 1 - exp) as usize, x)
    }
}

fn sig(x: f64) -> String {
    format_sig(x, 12)
}

/// CSV with header. Unavailable cells are empty; a failed row carries the
/// error text in the `f` column.
pub fn render_csv(rows: &[Result<BoundReport>], queries: &[BoundQuery]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (row, q) in rows.iter().zip(queries) {
        let n = q.n.map(|n| n.to_string()).unwrap_or_default();
        let cells = match row {
            Ok(r) => vec![
                sig(q.beta),
                sig(q.gamma),
                n,
                sig(r.f_value),
                sig(r.base),
                sig(r.exponent_log2),
                r.binomial_exact.as_ref().map(ToString::to_string).unwrap_or_default(),
                r.stirling_approx.map(sig).unwrap_or_default(),
                r.ratio.map(sig).unwrap_or_default(),
            ],
            Err(e) => {
                let msg = format!("error: {e}").replace([',', '\n'], ";");
                vec![
                    sig(q.beta),
                    sig(q.gamma),
                    n,
                    msg,
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                ]
            }
        };
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
