use crate::error::{Error, Result};

/// Bisection on `[lo, hi]` for a continuous `f` with a sign change, until
/// the bracket is narrower than `tol`.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    if lo.is_nan() || hi.is_nan() || lo >= hi || tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!("bad bracket [{lo}, {hi}] or tolerance {tol}")));
    }
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::Domain(format!("no sign change on [{lo}, {hi}]")));
    }
    while hi - lo > tol {
        let mid = lo + (hi - lo) / 2.0;
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo + (hi - lo) / 2.0)
}

/// Real roots of `a·x² + b·x + c` in increasing order.
pub fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let disc = b * b - 4.0 * a * c;
    if a == 0.0 || disc < 0.0 {
        return Vec::new();
    }
    let s = disc.sqrt();
    let mut roots = vec![(-b - s) / (2.0 * a), (-b + s) / (2.0 * a)];
    roots.sort_by(f64::total_cmp);
    roots.dedup();
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn rejects_missing_sign_change() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-9).is_err());
        assert!(bisect(|x| x, 1.0, -1.0, 1e-9).is_err());
    }

    #[test]
    fn quadratic_roots_sorted() {
        assert_eq!(quadratic_roots(1.0, -3.0, 2.0), vec![1.0, 2.0]);
        assert!(quadratic_roots(1.0, 0.0, 1.0).is_empty());
    }
}
