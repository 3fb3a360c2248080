//! Sequence files: one line per time-step with space-separated vertex
//! indices, `-` for the empty set. Blank lines and `#` comments are
//! skipped. A JSON run report is accepted as well; its `sequence` field is
//! used.

use tsr_core::prelude::*;

pub fn format_sequence(sets: &[TokenSet]) -> String {
    sets.iter().map(|s| format!("{s}\n")).collect()
}

pub fn parse_sequence(text: &str) -> Result<Vec<TokenSet>, String> {
    if text.trim_start().starts_with('{') {
        return from_report(text);
    }
    let mut sets = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line == "-" {
            sets.push(TokenSet::new());
            continue;
        }
        let set = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<Vertex>()
                    .map_err(|_| format!("line {}: `{tok}` is not a vertex index", i + 1))
            })
            .collect::<Result<TokenSet, String>>()?;
        if set.len() != line.split_whitespace().count() {
            return Err(format!("line {}: repeated vertex", i + 1));
        }
        sets.push(set);
    }
    Ok(sets)
}

fn from_report(text: &str) -> Result<Vec<TokenSet>, String> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| format!("invalid JSON report: {e}"))?;
    let steps = value
        .get("sequence")
        .and_then(|s| s.as_array())
        .ok_or("JSON report has no `sequence` array")?;
    steps
        .iter()
        .map(|step| {
            step.as_array()
                .ok_or_else(|| "sequence entries must be arrays".to_string())?
                .iter()
                .map(|v| {
                    v.as_u64()
                        .map(|v| v as Vertex)
                        .ok_or_else(|| format!("`{v}` is not a vertex index"))
                })
                .collect()
        })
        .collect()
}
