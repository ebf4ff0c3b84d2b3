//! Discrete-versus-continuum comparison reports and their CSV form.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        }
    }
}

/// One comparison; `x` is complex to cover off-axis starts, `inf` for harmonic measure.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RatioRow {
    pub n: i64,
    pub x_re: f64,
    pub x_im: f64,
    pub s: f64,
    pub discrete: f64,
    pub continuum: f64,
    pub ratio: f64,
    /// size of the claimed error term at this row
    pub envelope: f64,
}

impl RatioRow {
    pub fn new(n: i64, x_re: f64, x_im: f64, s: f64, discrete: f64, continuum: f64, envelope: f64) -> RatioRow {
        RatioRow { n, x_re, x_im, s, discrete, continuum, ratio: discrete / continuum, envelope }
    }

    pub fn deviation(&self) -> f64 {
        (self.ratio - 1.0).abs()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Summary {
    pub max_dev: f64,
    /// `sup |ratio - 1| / envelope`
    pub fitted_constant: f64,
    pub verdict: Verdict,
    pub note: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RatioReport {
    pub claim: String,
    pub rows: Vec<RatioRow>,
    pub summary: Summary,
}

impl RatioReport {
    /// Summary statistics filled in; the verdict starts as `Pass` and is set by the caller.
    pub fn new(claim: &str, rows: Vec<RatioRow>) -> RatioReport {
        let max_dev = rows.iter().map(RatioRow::deviation).fold(0.0, f64::max);
        let fitted_constant = rows.iter().map(|r| r.deviation() / r.envelope).fold(0.0, f64::max);
        RatioReport {
            claim: claim.to_string(),
            rows,
            summary: Summary { max_dev, fitted_constant, verdict: Verdict::Pass, note: String::new() },
        }
    }

    pub fn judge(mut self, ok: bool, note: impl Into<String>) -> RatioReport {
        self.summary.verdict = Verdict::from_bool(ok);
        self.summary.note = note.into();
        self
    }

    /// Mean `|ratio - 1|` over rows with segment index `n`.
    pub fn mean_dev(&self, n: i64) -> f64 {
        let d: Vec<f64> = self.rows.iter().filter(|r| r.n == n).map(RatioRow::deviation).collect();
        d.iter().sum::<f64>() / d.len().max(1) as f64
    }

    pub const CSV_HEADER: &'static str = "claim,n,x_re,x_im,s,discrete,continuum,ratio,envelope";

    /// Rows without header; floats carry 17 significant digits.
    pub fn write_rows<W: Write>(&self, out: &mut W) -> Result<()> {
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                self.claim, r.n, r.x_re, r.x_im, r.s, r.discrete, r.continuum, r.ratio, r.envelope
            )?;
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        self.write_rows(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_and_csv() {
        let rows = vec![RatioRow::new(4, 5.0, 0.0, 1.0, 1.1, 1.0, 0.5), RatioRow::new(8, 10.0, 0.0, 1.0, 0.95, 1.0, 0.25)];
        let r = RatioReport::new("thm1", rows).judge(true, "");
        assert!((r.summary.max_dev - 0.1).abs() < 1e-12);
        assert!((r.summary.fitted_constant - 0.2).abs() < 1e-12);
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.lines().nth(1).unwrap().starts_with("thm1,4,5.0000000000000000e0,"));
    }
}
