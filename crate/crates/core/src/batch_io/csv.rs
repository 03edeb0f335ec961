//! Plain CSV emitters (LF line endings, numbers with 9 significant digits).

use std::io::{self, Read, Write};

use super::BatchIoError;
use crate::stats::{Heatmap, Histogram, MetricsSummary};

/// Formats like C's `%.9g`.
pub fn format_sig9(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..9).contains(&exp) {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        trim_fraction(&format!("{v:.*}", (8 - exp) as usize)).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

struct Counting<'a, W> {
    inner: &'a mut W,
    written: usize,
}

impl<W: Write> Counting<'_, W> {
    fn line(&mut self, line: &str) -> io::Result<()> {
        self.inner.write_all(line.as_bytes())?;
        self.inner.write_all(b"\n")?;
        self.written += line.len() + 1;
        Ok(())
    }
}

pub const HISTOGRAM_HEADER: &str = "bin_lo,bin_hi,count,frequency";

/// One row per bin: `bin_lo,bin_hi,count,frequency`.
pub fn write_csv_histogram<W: Write>(h: &Histogram, sink: &mut W) -> io::Result<usize> {
    let mut out = Counting {
        inner: sink,
        written: 0,
    };
    out.line(HISTOGRAM_HEADER)?;
    for (i, (count, freq)) in h.counts().iter().zip(h.frequencies()).enumerate() {
        out.line(&format!(
            "{},{},{count},{}",
            format_sig9(h.edges()[i]),
            format_sig9(h.edges()[i + 1]),
            format_sig9(freq)
        ))?;
    }
    Ok(out.written)
}

/// Several histograms in long format: `gamma,bin_lo,bin_hi,count,frequency`.
pub fn write_csv_histograms_long<W: Write>(
    rows: &[(f64, Histogram)],
    sink: &mut W,
) -> io::Result<usize> {
    let mut out = Counting {
        inner: sink,
        written: 0,
    };
    out.line("gamma,bin_lo,bin_hi,count,frequency")?;
    for (gamma, h) in rows {
        for (i, (count, freq)) in h.counts().iter().zip(h.frequencies()).enumerate() {
            out.line(&format!(
                "{},{},{},{count},{}",
                format_sig9(*gamma),
                format_sig9(h.edges()[i]),
                format_sig9(h.edges()[i + 1]),
                format_sig9(freq)
            ))?;
        }
    }
    Ok(out.written)
}

/// Parses the output of [`write_csv_histogram`] back into counts.
pub fn read_csv_histogram<R: Read>(source: R) -> Result<Histogram, BatchIoError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(source);
    let headers = reader.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != HISTOGRAM_HEADER.split(',').collect::<Vec<_>>() {
        return Err(BatchIoError::Malformed(format!(
            "unexpected header {headers:?}"
        )));
    }
    let mut edges = Vec::new();
    let mut counts = Vec::new();
    for record in reader.records() {
        let record = record?;
        let field = |i: usize| record.get(i).unwrap_or("");
        let lo: f64 = field(0)
            .parse()
            .map_err(|_| BatchIoError::Malformed(format!("bad bin_lo {:?}", field(0))))?;
        let hi: f64 = field(1)
            .parse()
            .map_err(|_| BatchIoError::Malformed(format!("bad bin_hi {:?}", field(1))))?;
        let count: u64 = field(2)
            .parse()
            .map_err(|_| BatchIoError::Malformed(format!("bad count {:?}", field(2))))?;
        if edges.is_empty() {
            edges.push(lo);
        } else if edges.last() != Some(&lo) {
            return Err(BatchIoError::Malformed("bins are not contiguous".into()));
        }
        edges.push(hi);
        counts.push(count);
    }
    Histogram::from_parts(edges, counts).map_err(|e| BatchIoError::Malformed(e.to_string()))
}

/// `metric,value` rows for P_E, AUC and the class sizes.
pub fn write_csv_scores<W: Write>(summary: &MetricsSummary, sink: &mut W) -> io::Result<usize> {
    let mut out = Counting {
        inner: sink,
        written: 0,
    };
    out.line("metric,value")?;
    out.line(&format!("p_e,{}", format_sig9(summary.p_e)))?;
    out.line(&format!("auc,{}", format_sig9(summary.auc)))?;
    out.line(&format!("covers,{}", summary.covers))?;
    out.line(&format!("stegos,{}", summary.stegos))?;
    Ok(out.written)
}

/// `x,y,count,density` per pixel in raster order.
pub fn write_csv_heatmap<W: Write>(map: &Heatmap, sink: &mut W) -> io::Result<usize> {
    let mut out = Counting {
        inner: sink,
        written: 0,
    };
    out.line("x,y,count,density")?;
    let density = map.density();
    for y in 0..map.height() {
        for x in 0..map.width() {
            let i = y * map.width() + x;
            out.line(&format!(
                "{x},{y},{},{}",
                map.counts()[i],
                format_sig9(density[i])
            ))?;
        }
    }
    Ok(out.written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig9_matches_printf() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (0.5, "0.5"),
            (0.1, "0.1"),
            (0.75, "0.75"),
            (1.0 / 3.0, "0.333333333"),
            (2.0 / 3.0, "0.666666667"),
            (123456789.0, "123456789"),
            (1234567890.0, "1.23456789e+09"),
            (0.0001, "0.0001"),
            (0.00001234, "1.234e-05"),
            (-2.5, "-2.5"),
            (0.999999999, "0.999999999"),
            (0.9999999999, "1"),
        ];
        for (v, want) in cases {
            assert_eq!(format_sig9(v), want, "{v}");
        }
    }

    #[test]
    fn two_bin_histogram() {
        let h = Histogram::from_parts(vec![0.0, 0.5, 1.0], vec![3, 1]).unwrap();
        let mut out = Vec::new();
        let n = write_csv_histogram(&h, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(n, text.len());
        assert_eq!(
            text,
            "bin_lo,bin_hi,count,frequency\n0,0.5,3,0.75\n0.5,1,1,0.25\n"
        );
    }

    #[test]
    fn empty_histogram_rows_have_zero_frequency() {
        let h = Histogram::unit_interval(3).unwrap();
        let mut out = Vec::new();
        write_csv_histogram(&h, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(text.lines().skip(1).all(|l| l.ends_with(",0,0")));
    }

    #[test]
    fn reparse_reproduces_counts() {
        let mut h = Histogram::unit_interval(7).unwrap();
        for i in 0..100 {
            h.record((i as f64 * 0.37) % 1.0).unwrap();
        }
        let mut out = Vec::new();
        write_csv_histogram(&h, &mut out).unwrap();
        let back = read_csv_histogram(out.as_slice()).unwrap();
        assert_eq!(back.counts(), h.counts());
        for (a, b) in back.edges().iter().zip(h.edges()) {
            assert!((a - b).abs() < 1e-9);
        }
        let freq_sum: f64 = back.frequencies().iter().sum();
        assert!((freq_sum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn scores_summary() {
        let s = MetricsSummary {
            p_e: 0.25,
            auc: 0.75,
            covers: 2,
            stegos: 2,
        };
        let mut out = Vec::new();
        write_csv_scores(&s, &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "metric,value\np_e,0.25\nauc,0.75\ncovers,2\nstegos,2\n"
        );
    }
}
