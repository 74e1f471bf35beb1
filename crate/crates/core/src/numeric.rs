//! Small numerical helpers shared across modules.

/// Neumaier-compensated sum; long sums of positive weights otherwise lose
/// the last few digits that the eigenvalue tolerances depend on.
pub fn accurate_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_digits() {
        assert_eq!(accurate_sum([1.0, 1e100, 1.0, -1e100]), 2.0);
        let n = 1_000_000;
        let s = accurate_sum((0..n).map(|_| 0.1));
        assert!((s - 100_000.0).abs() < 1e-9);
    }
}
