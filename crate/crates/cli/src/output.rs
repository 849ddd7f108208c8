use serde::Serialize;
use serde_json::Value;
use shapql::game::OracleStats;
use shapql::{Rational, Scalar};

/// One line of output.
#[derive(Debug, Serialize)]
pub struct OutputRecord {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<PlayerValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stats: Option<Stats>,
    #[serde(flatten)]
    pub extra: serde_json::Map<String, Value>,
    /// Wall-clock milliseconds; only with `--timing`, since it breaks byte-identical output.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl OutputRecord {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            method: None,
            values: Vec::new(),
            seed: None,
            stats: None,
            extra: serde_json::Map::new(),
            timing_ms: None,
        }
    }

    pub fn set(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.extra.insert(key.to_string(), v.into());
        self
    }
}

#[derive(Debug, Serialize)]
pub struct PlayerValue {
    pub player: String,
    pub value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approx_decimal: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
}

impl PlayerValue {
    pub fn exact(player: String, v: &Rational, approx: bool) -> Self {
        Self {
            player,
            value: ratio(v),
            approx_decimal: approx.then(|| v.approx()),
            samples: None,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Stats {
    pub oracle_calls: u64,
    pub memo_hits: u64,
}

impl From<OracleStats> for Stats {
    fn from(s: OracleStats) -> Self {
        Self {
            oracle_calls: s.oracle_calls,
            memo_hits: s.memo_hits,
        }
    }
}

/// `num/den` in lowest terms.
pub fn ratio(v: &Rational) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

pub fn render_json(rec: &OutputRecord) -> String {
    serde_json::to_string(rec).expect("records serialize")
}

/// A human view: the player table, then the remaining fields one per line.
pub fn render_table(rec: &OutputRecord) -> String {
    let mut out = rec.command.to_string();
    if let Some(m) = &rec.method {
        out.push_str(&format!(" ({m})"));
    }
    out.push('\n');
    let width = rec.values.iter().map(|v| v.player.len()).max().unwrap_or(0);
    for v in &rec.values {
        out.push_str(&format!("  {:width$}  {:>12}", v.player, v.value));
        if let Some(d) = v.approx_decimal {
            out.push_str(&format!("  {d:.6}"));
        }
        out.push('\n');
    }
    for (k, v) in &rec.extra {
        out.push_str(&format!("  {k}: {v}\n"));
    }
    if let Some(s) = rec.seed {
        out.push_str(&format!("  seed: {s}\n"));
    }
    if let Some(s) = &rec.stats {
        out.push_str(&format!("  oracle calls: {}, memo hits: {}\n", s.oracle_calls, s.memo_hits));
    }
    if let Some(t) = rec.timing_ms {
        out.push_str(&format!("  time: {t:.1} ms\n"));
    }
    out
}
