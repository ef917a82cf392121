//! Small statistical tests used by the diagnostics and test suites.

use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

#[derive(Clone, Copy, Debug)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// Pearson goodness of fit of counts against cell probabilities.
pub fn chi_square_gof(observed: &[u64], probs: &[f64]) -> TestResult {
    assert_eq!(observed.len(), probs.len(), "one probability per cell");
    assert!(observed.len() >= 2, "need at least two cells");
    let total: u64 = observed.iter().sum();
    let statistic = observed
        .iter()
        .zip(probs)
        .map(|(&o, &p)| {
            let e = p * total as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    let dist = ChiSquared::new((observed.len() - 1) as f64).expect("positive degrees of freedom");
    TestResult {
        statistic,
        p_value: dist.sf(statistic),
    }
}

/// One-sided Mann-Whitney U test of the alternative that `x` tends to be
/// smaller than `y`. Normal approximation with tie correction.
pub fn mann_whitney_less(x: &[f64], y: &[f64]) -> TestResult {
    let (n1, n2) = (x.len() as f64, y.len() as f64);
    assert!(n1 > 0.0 && n2 > 0.0, "both samples must be nonempty");
    let mut all: Vec<(f64, usize)> = x
        .iter()
        .map(|&v| (v, 0))
        .chain(y.iter().map(|&v| (v, 1)))
        .collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut rank_sum_x = 0.0;
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < all.len() {
        let mut j = i;
        while j < all.len() && all[j].0 == all[i].0 {
            j += 1;
        }
        let avg_rank = (i + j + 1) as f64 / 2.0;
        let t = (j - i) as f64;
        tie_term += t * t * t - t;
        rank_sum_x += avg_rank * all[i..j].iter().filter(|p| p.1 == 0).count() as f64;
        i = j;
    }
    let u = rank_sum_x - n1 * (n1 + 1.0) / 2.0;
    let n = n1 + n2;
    let mean = n1 * n2 / 2.0;
    let var = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if var <= 0.0 {
        return TestResult {
            statistic: u,
            p_value: 1.0,
        };
    }
    // Continuity correction towards the mean.
    let z = (u - mean + 0.5) / var.sqrt();
    let normal = Normal::standard();
    TestResult {
        statistic: u,
        p_value: normal.cdf(z),
    }
}

/// Wilson score interval for a binomial proportion at the given two-sided
/// confidence level.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> (f64, f64) {
    assert!(trials > 0 && successes <= trials);
    let z = Normal::standard().inverse_cdf(1.0 - (1.0 - confidence) / 2.0);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}
