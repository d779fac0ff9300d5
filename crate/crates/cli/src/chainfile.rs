//! Chain input files: a JSON object with the transition rows, the tracked
//! subset, and optional state labels.
//!
//! ```json
//! {"states": ["a", "b"], "P": [[0.8, 0.2], [0.4, 0.6]], "U": ["a"]}
//! ```
//!
//! `U` entries are either state indices (JSON numbers) or labels (JSON
//! strings); mixing the two in one list is rejected.

use serde::Deserialize;

use occupancy_core::{StochasticMatrix, SubsetMask};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChainFile {
    states: Option<Vec<String>>,
    #[serde(rename = "P")]
    p: Vec<Vec<f64>>,
    #[serde(rename = "U")]
    u: Vec<URef>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum URef {
    Index(usize),
    Label(String),
}

/// Parses and validates a chain file; every failure is a validation error
/// (exit code 2) with the offending line or field named.
pub fn load_chain(path: &std::path::Path) -> Result<(StochasticMatrix, SubsetMask), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("cannot read {}: {e}", path.display())))?;
    let file: ChainFile = serde_json::from_str(&text)
        .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?;

    let mut chain = StochasticMatrix::from_rows(&file.p)
        .map_err(|e| CliError::validation(format!("invalid transition matrix: {e}")))?;
    if let Some(states) = file.states {
        chain = chain
            .with_labels(states)
            .map_err(|e| CliError::validation(e.to_string()))?;
    }

    let all_indices = file.u.iter().all(|r| matches!(r, URef::Index(_)));
    let all_labels = file.u.iter().all(|r| matches!(r, URef::Label(_)));
    if !file.u.is_empty() && !all_indices && !all_labels {
        return Err(CliError::validation(
            "\"U\" mixes indices and labels; use one or the other".to_string(),
        ));
    }
    let indices: Vec<usize> = file
        .u
        .iter()
        .map(|r| match r {
            URef::Index(i) => Ok(*i),
            URef::Label(l) => chain
                .label_index(l)
                .ok_or_else(|| CliError::validation(format!("\"U\" names unknown state {l:?}"))),
        })
        .collect::<Result<_, _>>()?;
    let mask = SubsetMask::from_indices(chain.size(), &indices)
        .map_err(|e| CliError::validation(format!("invalid \"U\": {e}")))?;
    Ok((chain, mask))
}

/// Resolves a `--start` argument: a label when one matches, otherwise a
/// state index.
pub fn resolve_state(chain: &StochasticMatrix, raw: &str) -> Result<usize, CliError> {
    if let Some(i) = chain.label_index(raw) {
        return Ok(i);
    }
    match raw.parse::<usize>() {
        Ok(i) if i < chain.size() => Ok(i),
        Ok(i) => Err(CliError::validation(format!(
            "state index {i} out of range for {} states",
            chain.size()
        ))),
        Err(_) => Err(CliError::validation(format!(
            "unknown state {raw:?}; expected a label or an index"
        ))),
    }
}
