//! The matrix word file: `{"word": [[a, b, c, d], ...]}`, row-major entries.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sl2::Mat2;
use crate::words::MatrixWord;

#[derive(Debug, Serialize, Deserialize)]
struct RawWordFile {
    word: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct WordFileRef<'a> {
    word: &'a [Mat2],
}

/// Parses and validates a word document. Diagnostics name the offending
/// entry by its 1-based position.
pub fn parse_word(text: &str) -> Result<MatrixWord> {
    let raw: RawWordFile =
        serde_json::from_str(text).map_err(|e| Error::WordFile(format!("malformed JSON: {e}")))?;
    if raw.word.is_empty() {
        return Err(Error::WordFile(
            "\"word\" must contain at least one matrix".into(),
        ));
    }
    let letters = raw
        .word
        .iter()
        .enumerate()
        .map(|(i, entry)| {
            let pos = i + 1;
            let arr: [f64; 4] = entry.as_slice().try_into().map_err(|_| {
                Error::WordFile(format!(
                    "entry {pos}: expected 4 numbers, found {}",
                    entry.len()
                ))
            })?;
            Mat2::from_array(arr).map_err(|e| Error::WordFile(format!("entry {pos}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    MatrixWord::new(letters)
}

pub fn load_word(path: &Path) -> Result<MatrixWord> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::WordFile(format!("cannot read {}: {e}", path.display())))?;
    parse_word(&text)
}

pub fn word_to_json(w: &MatrixWord) -> String {
    serde_json::to_string(&WordFileRef { word: w.letters() }).expect("matrices serialize")
}
