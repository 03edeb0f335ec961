use std::fs::File;
use std::path::PathBuf;

use anyhow::{anyhow, Context, Result};
use bitmix::batch_io::write_csv_scores;
use bitmix::stats::{MetricsSummary, ScoredSample, Truth};

use super::{ensure_dir, write_file};
use crate::manifest::Recorder;

#[derive(Debug, clap::Args)]
pub struct Args {
    /// CSV with a header and columns `score,truth` (truth is cover or stego).
    pub scores_csv: PathBuf,
    /// Output directory for metrics.csv and the manifest.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

fn read_scores(path: &PathBuf) -> Result<Vec<ScoredSample>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);
    let headers = reader.headers()?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| anyhow!("{}: missing '{name}' column", path.display()))
    };
    let (score_col, truth_col) = (column("score")?, column("truth")?);
    let mut samples = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let line = i + 2;
        let field = |c: usize| record.get(c).unwrap_or("");
        let score: f64 = field(score_col)
            .parse()
            .map_err(|_| anyhow!("line {line}: bad score '{}'", field(score_col)))?;
        let truth: Truth = field(truth_col)
            .parse()
            .map_err(|_| anyhow!("line {line}: unknown truth '{}'", field(truth_col)))?;
        let sample = ScoredSample::new(score, truth).map_err(|e| anyhow!("line {line}: {e}"))?;
        samples.push(sample);
    }
    Ok(samples)
}

pub fn run(args: Args, argv: &[String]) -> Result<()> {
    let mut recorder = Recorder::start(None);
    let samples = read_scores(&args.scores_csv)?;
    recorder.input(&args.scores_csv);
    let summary = MetricsSummary::compute(&samples)?;

    ensure_dir(&args.out)?;
    let mut csv = Vec::new();
    write_csv_scores(&summary, &mut csv)?;
    let path = args.out.join("metrics.csv");
    write_file(&path, &csv)?;
    recorder.output(path);
    recorder.finish(&args.out, argv)?;
    println!("P_E={:.4} AUC={:.4}", summary.p_e, summary.auc);
    Ok(())
}
