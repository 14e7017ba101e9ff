use std::fmt;
use std::path::Path;

use stallings::subgroup::{Subgroup, SubgroupSpec};
use stallings::word::{Alphabet, Word};

#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A subgroup given inline as JSON, as a path to a JSON file, or as a
/// comma-separated generator list in rank 2.
pub fn read_spec(arg: &str) -> Result<SubgroupSpec, InputError> {
    let text = arg.trim_start();
    if text.starts_with('{') {
        return serde_json::from_str(text).map_err(|e| InputError(format!("inline spec: {e}")));
    }
    let path = Path::new(arg);
    if path.is_file() {
        let body = std::fs::read_to_string(path).map_err(|e| InputError(format!("{arg}: {e}")))?;
        return serde_json::from_str(&body).map_err(|e| InputError(format!("{arg}: {e}")));
    }
    if arg.is_empty() || arg.contains(['/', '\\']) || arg.ends_with(".json") {
        return Err(InputError(format!("{arg}: no such file")));
    }
    Ok(SubgroupSpec { alphabet_rank: 2, generators: arg.split(',').map(|g| g.trim().to_string()).collect() })
}

pub fn read_subgroup(arg: &str) -> Result<Subgroup, InputError> {
    let spec = read_spec(arg)?;
    spec.to_subgroup().map_err(|e| InputError(format!("{arg}: {e}")))
}

pub fn parse_words(rank: u32, words: &[String]) -> Result<Subgroup, InputError> {
    let alphabet = Alphabet::new(rank).map_err(|e| InputError(e.to_string()))?;
    let parsed = words
        .iter()
        .map(|w| Word::parse(alphabet, w).map_err(|e| InputError(format!("{w}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Subgroup::from_generators(alphabet, parsed).map_err(|e| InputError(e.to_string()))
}
