//! Minimum and maximum over windows whose ends never move left.

use std::collections::VecDeque;

/// Extreme of `values[lo..=hi]` for each window, in order. Both `lo` and `hi`
/// must be non-decreasing across windows; every element is pushed and
/// popped at most once, so the total cost is O(len + windows).
///
/// With `want_min` the comparison keeps the first minimum, otherwise the
/// first maximum. NaN is never produced from non-NaN input.
pub fn sliding_extrema<I>(values: &[f64], windows: I, want_min: bool) -> Vec<f64>
where
    I: IntoIterator<Item = (usize, usize)>,
{
    let beats = |a: f64, b: f64| if want_min { a <= b } else { a >= b };
    let mut deque: VecDeque<usize> = VecDeque::new();
    let mut next = 0usize;
    let mut prev = (0usize, 0usize);
    let mut out = Vec::new();
    for (lo, hi) in windows {
        debug_assert!(lo <= hi && hi < values.len(), "bad window ({lo},{hi})");
        debug_assert!(out.is_empty() || (lo >= prev.0 && hi >= prev.1), "windows must move right");
        prev = (lo, hi);
        next = next.max(lo);
        while next <= hi {
            let v = values[next];
            while let Some(&back) = deque.back() {
                if beats(v, values[back]) {
                    deque.pop_back();
                } else {
                    break;
                }
            }
            deque.push_back(next);
            next += 1;
        }
        while let Some(&front) = deque.front() {
            if front < lo {
                deque.pop_front();
            } else {
                break;
            }
        }
        out.push(values[*deque.front().expect("window is non-empty")]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(values: &[f64], windows: &[(usize, usize)], want_min: bool) -> Vec<f64> {
        windows
            .iter()
            .map(|&(lo, hi)| {
                let it = values[lo..=hi].iter().copied();
                if want_min {
                    it.fold(f64::INFINITY, f64::min)
                } else {
                    it.fold(f64::NEG_INFINITY, f64::max)
                }
            })
            .collect()
    }

    #[test]
    fn matches_brute_force() {
        let values: Vec<f64> = (0..200).map(|k| ((k * 37 % 101) as f64).sin() * k as f64).collect();
        let windows: Vec<(usize, usize)> = (0..150).map(|k| (k, (k + 1 + k / 3).min(199))).collect();
        for want_min in [true, false] {
            assert_eq!(
                sliding_extrema(&values, windows.iter().copied(), want_min),
                brute(&values, &windows, want_min)
            );
        }
    }

    #[test]
    fn windows_may_skip_ahead() {
        let values = [5.0, 1.0, 4.0, 2.0, 8.0, 0.5, 3.0];
        let windows = [(0, 0), (0, 2), (3, 4), (3, 4), (5, 6), (6, 6)];
        assert_eq!(
            sliding_extrema(&values, windows, true),
            vec![5.0, 1.0, 2.0, 2.0, 0.5, 3.0]
        );
        assert_eq!(
            sliding_extrema(&values, windows, false),
            vec![5.0, 5.0, 8.0, 8.0, 3.0, 3.0]
        );
    }

    #[test]
    fn infinities_are_ordinary() {
        let values = [1.0, f64::INFINITY, -f64::INFINITY, 2.0];
        let windows = [(0, 1), (1, 2), (2, 3)];
        assert_eq!(
            sliding_extrema(&values, windows, true),
            vec![1.0, -f64::INFINITY, -f64::INFINITY]
        );
        assert_eq!(
            sliding_extrema(&values, windows, false),
            vec![f64::INFINITY, f64::INFINITY, 2.0]
        );
    }
}
