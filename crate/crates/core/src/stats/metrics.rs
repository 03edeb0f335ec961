//! Detection metrics over scored samples. Higher scores mean "more likely
//! stego"; a sample is flagged when its score exceeds the threshold.

use std::str::FromStr;

use super::StatsError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Truth {
    Cover,
    Stego,
}

impl FromStr for Truth {
    type Err = StatsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cover" => Ok(Truth::Cover),
            "stego" => Ok(Truth::Stego),
            other => Err(StatsError::InvalidArgument(format!(
                "unknown truth token '{other}' (expected cover or stego)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoredSample {
    score: f64,
    truth: Truth,
}

impl ScoredSample {
    pub fn new(score: f64, truth: Truth) -> Result<Self, StatsError> {
        if !score.is_finite() {
            return Err(StatsError::NonFiniteScore(score));
        }
        Ok(Self { score, truth })
    }

    pub fn score(&self) -> f64 {
        self.score
    }

    pub fn truth(&self) -> Truth {
        self.truth
    }

    pub fn flipped(&self) -> Self {
        Self {
            score: self.score,
            truth: match self.truth {
                Truth::Cover => Truth::Stego,
                Truth::Stego => Truth::Cover,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsSummary {
    pub p_e: f64,
    pub auc: f64,
    pub covers: usize,
    pub stegos: usize,
}

impl MetricsSummary {
    pub fn compute(samples: &[ScoredSample]) -> Result<Self, StatsError> {
        let (covers, stegos) = class_counts(samples)?;
        Ok(Self {
            p_e: p_e(samples)?,
            auc: auc(samples)?,
            covers,
            stegos,
        })
    }
}

fn class_counts(samples: &[ScoredSample]) -> Result<(usize, usize), StatsError> {
    let stegos = samples.iter().filter(|s| s.truth == Truth::Stego).count();
    let covers = samples.len() - stegos;
    if covers == 0 || stegos == 0 {
        return Err(StatsError::SingleClass);
    }
    Ok((covers, stegos))
}

fn sorted_by_score(samples: &[ScoredSample]) -> Vec<ScoredSample> {
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.score.total_cmp(&b.score));
    sorted
}

/// `min_t ½(P_FA(t) + P_MD(t))` over every distinct split of the sorted
/// scores, including flagging everything and flagging nothing.
pub fn p_e(samples: &[ScoredSample]) -> Result<f64, StatsError> {
    let (covers, stegos) = class_counts(samples)?;
    let sorted = sorted_by_score(samples);
    // threshold below everything: all flagged
    let (mut false_alarms, mut misses) = (covers, 0usize);
    let rate = |fa: usize, md: usize| 0.5 * (fa as f64 / covers as f64 + md as f64 / stegos as f64);
    let mut best = rate(false_alarms, misses);
    let mut i = 0;
    while i < sorted.len() {
        let score = sorted[i].score;
        // raise the threshold to `score`: everything equal to it is cleared
        while i < sorted.len() && sorted[i].score == score {
            match sorted[i].truth {
                Truth::Cover => false_alarms -= 1,
                Truth::Stego => misses += 1,
            }
            i += 1;
        }
        best = best.min(rate(false_alarms, misses));
    }
    Ok(best)
}

/// Mann–Whitney statistic `P(stego > cover) + ½·P(tie)`, via midranks.
pub fn auc(samples: &[ScoredSample]) -> Result<f64, StatsError> {
    let (covers, stegos) = class_counts(samples)?;
    let sorted = sorted_by_score(samples);
    let mut stego_rank_sum = 0.0f64;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j < sorted.len() && sorted[j].score == sorted[i].score {
            j += 1;
        }
        // ranks i+1..=j share the midrank
        let midrank = (i + 1 + j) as f64 / 2.0;
        let tied_stegos = sorted[i..j]
            .iter()
            .filter(|s| s.truth == Truth::Stego)
            .count();
        stego_rank_sum += midrank * tied_stegos as f64;
        i = j;
    }
    let n_s = stegos as f64;
    let u = stego_rank_sum - n_s * (n_s + 1.0) / 2.0;
    Ok(u / (n_s * covers as f64))
}

/// ROC vertices `(false-alarm rate, detection rate)` from the strictest to
/// the loosest threshold, starting at `(0, 0)` and ending at `(1, 1)`.
pub fn roc_curve(samples: &[ScoredSample]) -> Result<Vec<(f64, f64)>, StatsError> {
    let (covers, stegos) = class_counts(samples)?;
    let mut sorted = sorted_by_score(samples);
    sorted.reverse();
    let mut points = vec![(0.0, 0.0)];
    let (mut fp, mut tp) = (0usize, 0usize);
    let mut i = 0;
    while i < sorted.len() {
        let score = sorted[i].score;
        while i < sorted.len() && sorted[i].score == score {
            match sorted[i].truth {
                Truth::Cover => fp += 1,
                Truth::Stego => tp += 1,
            }
            i += 1;
        }
        points.push((fp as f64 / covers as f64, tp as f64 / stegos as f64));
    }
    Ok(points)
}
