//! Machine- and human-readable run reports. Field order is fixed and every
//! float prints in shortest round-trip form, so reports are byte-stable
//! across runs on identical inputs.

use serde::Serialize;

use crate::statefile::StateFile;

#[derive(Debug, Clone, Serialize)]
pub struct CutSummary {
    /// Tested split in original subsystem labels.
    pub partition: String,
    pub product: bool,
    pub rank: usize,
    pub ratio: f64,
    pub singular_values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportFile {
    pub command: String,
    pub input: String,
    pub input_digest: String,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub singular_values: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cuts: Vec<CutSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factor_adjustment: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<StateFile>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub finest_partition: Option<String>,
}

impl ReportFile {
    pub fn new(command: &str, input: &str, digest: String, tolerance: f64) -> Self {
        ReportFile {
            command: command.to_string(),
            input: input.to_string(),
            input_digest: digest,
            tolerance,
            partition: None,
            verdict: None,
            singular_values: None,
            rank: None,
            ratio: None,
            cuts: Vec::new(),
            factor_adjustment: None,
            factors: None,
            finest_partition: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line(format!("command: {}", self.command));
        line(format!("input: {}", self.input));
        line(format!("digest: {}", self.input_digest));
        line(format!("tolerance: {}", self.tolerance));
        if let Some(p) = &self.partition {
            line(format!("partition: {p}"));
        }
        if let Some(sv) = &self.singular_values {
            line(format!("singular_values: {}", join_floats(sv)));
        }
        if let Some(rank) = self.rank {
            line(format!("rank: {rank}"));
        }
        if let Some(ratio) = self.ratio {
            line(format!("ratio: {ratio}"));
        }
        if let Some(v) = self.verdict {
            line(format!(
                "verdict: {}",
                if v { "product" } else { "not-product" }
            ));
        }
        for cut in &self.cuts {
            line(format!(
                "split {}: {} rank {} ratio {}",
                cut.partition,
                if cut.product {
                    "product"
                } else {
                    "not-product"
                },
                cut.rank,
                cut.ratio
            ));
        }
        if let Some(adj) = self.factor_adjustment {
            line(format!("adjustment: {adj}"));
        }
        if let Some(factors) = &self.factors {
            for (idx, factor) in factors.iter().enumerate() {
                let dims = factor
                    .dims
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(",");
                line(format!("factor {} (dims {}):", idx + 1, dims));
                match &factor.data {
                    crate::statefile::StateData::Density(rows) => {
                        for row in rows {
                            line(join_pairs(row));
                        }
                    }
                    crate::statefile::StateData::Pure(amps) => line(join_pairs(amps)),
                }
            }
        }
        if let Some(finest) = &self.finest_partition {
            line(format!("finest_partition: {finest}"));
        }
        out
    }
}

pub fn join_floats(values: &[f64]) -> String {
    values
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn format_complex(re: f64, im: f64) -> String {
    if im == 0.0 {
        format!("{re}")
    } else if im < 0.0 {
        format!("{re}-{}i", -im)
    } else {
        format!("{re}+{im}i")
    }
}

fn join_pairs(pairs: &[[f64; 2]]) -> String {
    pairs
        .iter()
        .map(|[re, im]| format_complex(*re, *im))
        .collect::<Vec<_>>()
        .join(" ")
}
