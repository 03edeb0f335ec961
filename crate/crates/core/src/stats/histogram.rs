use super::StatsError;

/// Fixed-bin counts. Bins are half-open `[lo, hi)` except the last, which
/// also includes its upper edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    edges: Vec<f64>,
    counts: Vec<u64>,
}

impl Histogram {
    pub fn from_parts(edges: Vec<f64>, counts: Vec<u64>) -> Result<Self, StatsError> {
        if edges.len() < 2 || counts.len() + 1 != edges.len() {
            return Err(StatsError::InvalidArgument(format!(
                "{} edges for {} bins",
                edges.len(),
                counts.len()
            )));
        }
        if edges.iter().any(|e| !e.is_finite()) || edges.windows(2).any(|w| w[0] >= w[1]) {
            return Err(StatsError::InvalidArgument(
                "bin edges must be finite and strictly ascending".into(),
            ));
        }
        Ok(Self { edges, counts })
    }

    /// `bins` equal-width bins over `[0, 1]`.
    pub fn unit_interval(bins: usize) -> Result<Self, StatsError> {
        if bins == 0 {
            return Err(StatsError::InvalidArgument("need at least one bin".into()));
        }
        let edges = (0..=bins).map(|i| i as f64 / bins as f64).collect();
        Self::from_parts(edges, vec![0; bins])
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn bin_of(&self, value: f64) -> Option<usize> {
        let last = *self.edges.last()?;
        if !(value >= self.edges[0] && value <= last) {
            return None;
        }
        let idx = self.edges.partition_point(|&e| e <= value);
        Some((idx - 1).min(self.bins() - 1))
    }

    pub fn record(&mut self, value: f64) -> Result<(), StatsError> {
        let bin = self.bin_of(value).ok_or_else(|| {
            StatsError::InvalidArgument(format!("value {value} outside histogram range"))
        })?;
        self.counts[bin] += 1;
        Ok(())
    }

    /// Per-bin relative frequency; all zeros for an empty histogram.
    pub fn frequencies(&self) -> Vec<f64> {
        let total = self.total();
        if total == 0 {
            return vec![0.0; self.bins()];
        }
        self.counts
            .iter()
            .map(|&c| c as f64 / total as f64)
            .collect()
    }

    /// Fraction of recorded values strictly below the edge `x`. `x` must be
    /// one of the bin edges.
    pub fn mass_below(&self, x: f64) -> Result<f64, StatsError> {
        let k = self
            .edges
            .iter()
            .position(|&e| e == x)
            .ok_or_else(|| StatsError::InvalidArgument(format!("{x} is not a bin edge")))?;
        let total = self.total();
        if total == 0 {
            return Ok(0.0);
        }
        Ok(self.counts[..k].iter().sum::<u64>() as f64 / total as f64)
    }

    fn check_compatible(&self, other: &Histogram) -> Result<(), StatsError> {
        if self.edges != other.edges {
            return Err(StatsError::BinMismatch);
        }
        Ok(())
    }

    /// Adds another histogram's counts (same edges).
    pub fn merge(&mut self, other: &Histogram) -> Result<(), StatsError> {
        self.check_compatible(other)?;
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        Ok(())
    }
}

/// Total-variation distance `½ Σ |p_i − q_i|` between normalised histograms.
pub fn tv_distance(a: &Histogram, b: &Histogram) -> Result<f64, StatsError> {
    a.check_compatible(b)?;
    Ok(0.5
        * a.frequencies()
            .iter()
            .zip(b.frequencies())
            .map(|(p, q)| (p - q).abs())
            .sum::<f64>())
}

/// Kolmogorov–Smirnov distance `sup |F_n − F|` between the empirical CDF of
/// `samples` and `cdf`, checked on both sides of every jump.
pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    let mut i = 0;
    while i < sorted.len() {
        let x = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == x {
            j += 1;
        }
        let f = cdf(x);
        let below = i as f64 / n;
        let at = j as f64 / n;
        d = d.max((f - below).abs()).max((at - f).abs());
        i = j;
    }
    d
}
