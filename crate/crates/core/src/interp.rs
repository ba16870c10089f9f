//! Monotone (Fritsch-Carlson / Fritsch-Butland) cubic Hermite interpolation on a
//! uniform grid.

/// Slope at an interior node from its two neighbours (harmonic mean of secants,
/// zero at local extrema).
pub(crate) fn interior_slope(prev: f64, cur: f64, next: f64, h: f64) -> f64 {
    let d0 = (cur - prev) / h;
    let d1 = (next - cur) / h;
    if d0 * d1 <= 0.0 {
        0.0
    } else {
        2.0 * d0 * d1 / (d0 + d1)
    }
}

/// One-sided three-point slope at an end node, clipped to preserve shape.
/// `d0` is the secant next to the end node, `d1` the one after it.
fn end_slope(d0: f64, d1: f64) -> f64 {
    let m = (3.0 * d0 - d1) / 2.0;
    if m.signum() != d0.signum() || d0 == 0.0 {
        0.0
    } else if d0.signum() != d1.signum() && m.abs() > (3.0 * d0).abs() {
        3.0 * d0
    } else {
        m
    }
}

/// Slopes for every node of `y`; `NaN` entries mark undefined nodes and the
/// slopes next to them fall back to one-sided formulas.
pub(crate) fn slopes(y: &[f64], h: f64) -> Vec<f64> {
    let n = y.len();
    let ok = |i: usize| i < n && y[i].is_finite();
    let mut m = vec![f64::NAN; n];
    for i in 0..n {
        if !ok(i) {
            continue;
        }
        let left = i > 0 && ok(i - 1);
        let right = ok(i + 1);
        m[i] = match (left, right) {
            (true, true) => interior_slope(y[i - 1], y[i], y[i + 1], h),
            (false, true) => {
                let d0 = (y[i + 1] - y[i]) / h;
                if ok(i + 2) {
                    end_slope(d0, (y[i + 2] - y[i + 1]) / h)
                } else {
                    d0
                }
            }
            (true, false) => {
                let d0 = (y[i] - y[i - 1]) / h;
                if i >= 2 && ok(i - 2) {
                    end_slope(d0, (y[i - 1] - y[i - 2]) / h)
                } else {
                    d0
                }
            }
            (false, false) => 0.0,
        };
    }
    m
}

/// Cubic Hermite value at fraction `t` of a cell of width `h`.
pub(crate) fn hermite(y0: f64, y1: f64, m0: f64, m1: f64, h: f64, t: f64) -> f64 {
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0) * y0
        + (t3 - 2.0 * t2 + t) * h * m0
        + (3.0 * t2 - 2.0 * t3) * y1
        + (t3 - t2) * h * m1
}

/// Cubic Hermite value at the cell midpoint.
pub(crate) fn hermite_mid(y0: f64, y1: f64, m0: f64, m1: f64, h: f64) -> f64 {
    0.5 * (y0 + y1) + h * (m0 - m1) / 8.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_nodes_and_midpoint_form() {
        let h = 0.1;
        let y: Vec<f64> = (0..20).map(|i| (i as f64 * h).exp()).collect();
        let m = slopes(&y, h);
        for i in 0..19 {
            assert_eq!(hermite(y[i], y[i + 1], m[i], m[i + 1], h, 0.0), y[i]);
            assert!((hermite(y[i], y[i + 1], m[i], m[i + 1], h, 1.0) - y[i + 1]).abs() < 1e-14);
            let a = hermite(y[i], y[i + 1], m[i], m[i + 1], h, 0.5);
            let b = hermite_mid(y[i], y[i + 1], m[i], m[i + 1], h);
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn accurate_on_smooth_data() {
        let h = 1e-3;
        let y: Vec<f64> = (0..2000).map(|i| 1.0 / (1.0 + i as f64 * h)).collect();
        let m = slopes(&y, h);
        for i in 10..1990 {
            let s = (i as f64 + 0.5) * h;
            let v = hermite_mid(y[i], y[i + 1], m[i], m[i + 1], h);
            assert!((v - 1.0 / (1.0 + s)).abs() < 1e-9);
        }
    }

    #[test]
    fn nan_prefix_is_skipped() {
        let y = [f64::NAN, f64::NAN, 1.0, 2.0, 4.0];
        let m = slopes(&y, 1.0);
        assert!(m[0].is_nan() && m[1].is_nan());
        assert!(m[2].is_finite() && m[2] >= 0.0);
    }
}
