use super::sample::EnsembleRecord;

/// Distribution of imbalance ratios (largest over smallest part) in an
/// ensemble.
#[derive(Clone, Debug, PartialEq)]
pub struct BalanceProfile {
    pub count: usize,
    pub fraction_balanced: f64,
    pub mean: f64,
    pub min: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub max: f64,
    /// All ratios, ascending.
    pub ratios: Vec<f64>,
}

/// `None` for an empty ensemble.
pub fn balance_profile(records: &[EnsembleRecord]) -> Option<BalanceProfile> {
    if records.is_empty() {
        return None;
    }
    let mut ratios: Vec<f64> = records
        .iter()
        .map(EnsembleRecord::imbalance_ratio)
        .collect();
    ratios.sort_by(f64::total_cmp);
    let n = ratios.len();
    // lower-median convention keeps every quantile an observed ratio
    let q = |p: f64| ratios[((n - 1) as f64 * p).floor() as usize];
    Some(BalanceProfile {
        count: n,
        fraction_balanced: ratios.iter().filter(|&&r| r == 1.0).count() as f64 / n as f64,
        mean: ratios.iter().sum::<f64>() / n as f64,
        min: ratios[0],
        q25: q(0.25),
        median: q(0.5),
        q75: q(0.75),
        max: ratios[n - 1],
        ratios,
    })
}

impl BalanceProfile {
    pub fn to_csv(&self) -> String {
        format!(
            "count,fraction_balanced,mean,min,q25,median,q75,max\n{},{},{},{},{},{},{},{}\n",
            self.count,
            self.fraction_balanced,
            self.mean,
            self.min,
            self.q25,
            self.median,
            self.q75,
            self.max
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(sizes: Vec<usize>) -> EnsembleRecord {
        EnsembleRecord {
            index: 0,
            step: 0,
            assignment: Vec::new(),
            sizes,
            log_weight: 0.0,
            phi: None,
            avg_gap: None,
        }
    }

    #[test]
    fn balanced_input() {
        let p = balance_profile(&[rec(vec![3, 3]), rec(vec![2, 2, 2])]).unwrap();
        assert_eq!(p.fraction_balanced, 1.0);
        assert!(p.ratios.iter().all(|&r| r == 1.0));
        assert_eq!((p.min, p.max, p.mean), (1.0, 1.0, 1.0));
    }

    #[test]
    fn single_record() {
        let p = balance_profile(&[rec(vec![1, 3])]).unwrap();
        assert_eq!(
            (p.count, p.min, p.median, p.max, p.mean),
            (1, 3.0, 3.0, 3.0, 3.0)
        );
        assert_eq!(p.fraction_balanced, 0.0);
        assert!(balance_profile(&[]).is_none());
    }

    #[test]
    fn quantiles() {
        let recs: Vec<_> = [4, 1, 2, 3, 1].iter().map(|&s| rec(vec![1, s])).collect();
        let p = balance_profile(&recs).unwrap();
        assert_eq!(p.ratios, vec![1.0, 1.0, 2.0, 3.0, 4.0]);
        assert_eq!((p.q25, p.median, p.q75), (1.0, 2.0, 3.0));
        assert_eq!(p.fraction_balanced, 0.4);
        assert!(p.to_csv().starts_with("count,"));
    }
}
