//! Summary statistics for sweep output.

/// Linear-interpolation percentile (`q` in `[0, 1]`) of sorted data.
pub fn percentile_sorted(sorted: &[f64], q: f64) -> f64 {
    match sorted.len() {
        0 => f64::NAN,
        1 => sorted[0],
        n => {
            let pos = q.clamp(0.0, 1.0) * (n - 1) as f64;
            let lo = pos.floor() as usize;
            let hi = (lo + 1).min(n - 1);
            sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    pub p5: f64,
    pub p95: f64,
}

/// Summary of the finite values in `data`.
pub fn summarize(data: impl IntoIterator<Item = f64>) -> Summary {
    let mut v: Vec<f64> = data.into_iter().filter(|x| x.is_finite()).collect();
    v.sort_by(f64::total_cmp);
    let mean = if v.is_empty() {
        f64::NAN
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    };
    Summary {
        count: v.len(),
        mean,
        median: percentile_sorted(&v, 0.5),
        p5: percentile_sorted(&v, 0.05),
        p95: percentile_sorted(&v, 0.95),
    }
}
