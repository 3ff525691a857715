use crate::error::{Result, UvpError};

/// Optimistic extrapolation of the full-horizon value from the last two
/// observations. `+inf` when only one value is known.
pub fn pred(values: &[f64], horizon: usize) -> Result<f64> {
    match values {
        [] => Err(UvpError::EmptyHistory),
        [_] => Ok(f64::INFINITY),
        [.., a1, a2] => {
            let t2 = values.len();
            Ok(a2 + (a2 - a1) * (horizon as f64 - t2 as f64))
        }
    }
}

/// Least-squares line through the trailing `max(2, ceil(theta * len))`
/// observations, evaluated at `horizon` and capped at 1. A falling fit
/// returns the last observation instead.
pub fn tail_fit_pred(values: &[f64], horizon: usize, theta: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(UvpError::EmptyHistory);
    }
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(UvpError::InvalidParams(format!("theta must lie in (0, 1], got {theta}")));
    }
    let len = values.len();
    if len < 2 {
        return Ok(f64::INFINITY);
    }
    let m = ((theta * len as f64).ceil() as usize).clamp(2, len);
    let start = len - m;
    let xs = (start + 1..=len).map(|b| b as f64);
    let ys = &values[start..];
    let mx = xs.clone().sum::<f64>() / m as f64;
    let my = ys.iter().sum::<f64>() / m as f64;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, &y) in xs.zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    let slope = sxy / sxx;
    let last = values[len - 1];
    if slope < 0.0 {
        return Ok(last);
    }
    Ok((my + slope * (horizon as f64 - mx)).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn pred_examples() {
        assert_eq!(pred(&[0.9], 7).unwrap(), f64::INFINITY);
        assert_relative_eq!(pred(&[0.5, 0.6], 5).unwrap(), 0.9, epsilon = 1e-12);
        assert_eq!(pred(&[0.3, 0.3], 10).unwrap(), 0.3);
        assert!(matches!(pred(&[], 3), Err(UvpError::EmptyHistory)));
    }

    #[test]
    fn pred_at_horizon_is_last() {
        assert_eq!(pred(&[0.1, 0.4, 0.6], 3).unwrap(), 0.6);
    }

    #[test]
    fn tail_fit_examples() {
        assert_relative_eq!(
            tail_fit_pred(&[0.1, 0.2, 0.3, 0.4], 10, 0.5).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        assert_relative_eq!(tail_fit_pred(&[0.4, 0.4, 0.4], 8, 0.3).unwrap(), 0.4, epsilon = 1e-12);
        assert_eq!(tail_fit_pred(&[0.2], 5, 0.3).unwrap(), f64::INFINITY);
        assert!(matches!(tail_fit_pred(&[], 5, 0.3), Err(UvpError::EmptyHistory)));
    }

    #[test]
    fn tail_fit_falling_returns_last() {
        assert_eq!(tail_fit_pred(&[0.5, 0.45, 0.4], 10, 1.0).unwrap(), 0.4);
    }

    #[test]
    fn tail_fit_uses_trailing_window() {
        // early noise is ignored with theta = 0.3 on ten points (window of 3)
        let h = [0.9, 0.0, 0.9, 0.0, 0.2, 0.3, 0.4, 0.50, 0.51, 0.52];
        let got = tail_fit_pred(&h, 12, 0.3).unwrap();
        assert_relative_eq!(got, 0.54, epsilon = 1e-12);
    }
}
