use crate::{Error, Result};

/// Two-sided 95% standard normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// 95% Wilson score interval for `errors` successes in `trials`.
pub fn wilson_interval(errors: u64, trials: u64) -> Result<(f64, f64)> {
    if trials == 0 || errors > trials {
        return Err(Error::Domain(format!(
            "wilson_interval needs errors <= trials and trials >= 1, got ({errors}, {trials})"
        )));
    }
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z_95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if errors == 0 {
        0.0
    } else {
        (center - half).clamp(0.0, p)
    };
    let hi = if errors == trials {
        1.0
    } else {
        (center + half).clamp(p, 1.0)
    };
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundaries() {
        assert_eq!(wilson_interval(0, 10).unwrap().0, 0.0);
        assert_eq!(wilson_interval(10, 10).unwrap().1, 1.0);
        assert!(wilson_interval(0, 0).is_err());
        assert!(wilson_interval(3, 2).is_err());
    }

    #[test]
    fn brackets_and_shrinks() {
        let (lo, hi) = wilson_interval(50, 100).unwrap();
        assert!(lo < 0.5 && 0.5 < hi);
        let (lo2, hi2) = wilson_interval(500, 1000).unwrap();
        assert!(hi2 - lo2 < hi - lo);
    }

    #[test]
    fn known_value() {
        // 50/100: centre 0.5, half-width z·sqrt(0.25/100 + z²/40000)/(1 + z²/100)
        let (lo, hi) = wilson_interval(50, 100).unwrap();
        assert!((lo - 0.403_831_530_366).abs() < 1e-8);
        assert!((hi - 0.596_168_469_634).abs() < 1e-8);
    }
}
