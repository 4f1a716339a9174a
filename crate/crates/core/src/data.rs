//! Sequences, labeled examples and datasets.
//!
//! Sequences are fixed-length token index vectors. When an alphabet defines a
//! PAD token, padding must form a contiguous suffix; the helpers here enforce
//! that convention.

use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::alphabet::{Alphabet, TokenId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PadError {
    #[error("sequence length {len} exceeds target length {target}")]
    TooLong { len: usize, target: usize },
    #[error("alphabet has no pad token")]
    NoPadToken,
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("sequence {index} has length {len}, dataset length is {expected}")]
    LengthMismatch { index: usize, len: usize, expected: usize },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// A token index sequence over some alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequence {
    ids: Vec<TokenId>,
}

impl Sequence {
    pub fn from_ids(ids: Vec<TokenId>) -> Self {
        Self { ids }
    }

    pub fn empty() -> Self {
        Self { ids: Vec::new() }
    }

    pub fn ids(&self) -> &[TokenId] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn push(&mut self, id: TokenId) {
        self.ids.push(id);
    }

    /// True when every index is in range and PAD only occurs as a suffix.
    pub fn respects(&self, alphabet: &Alphabet) -> bool {
        let c = alphabet.len() as TokenId;
        if self.ids.iter().any(|&id| id >= c) {
            return false;
        }
        match alphabet.pad_index() {
            Some(pad) => {
                let first_pad = self.ids.iter().position(|&id| id == pad);
                match first_pad {
                    Some(i) => self.ids[i..].iter().all(|&id| id == pad),
                    None => true,
                }
            }
            None => true,
        }
    }

    /// Extends with PAD to length `target`.
    pub fn pad_to(&self, target: usize, alphabet: &Alphabet) -> Result<Sequence, PadError> {
        if self.len() > target {
            return Err(PadError::TooLong { len: self.len(), target });
        }
        let pad = alphabet.pad_index().ok_or(PadError::NoPadToken)?;
        let mut ids = self.ids.clone();
        ids.resize(target, pad);
        Ok(Sequence::from_ids(ids))
    }

    /// Removes the trailing PAD run, if the alphabet has one.
    pub fn strip_pad(&self, alphabet: &Alphabet) -> Sequence {
        match alphabet.pad_index() {
            Some(pad) => {
                let end = self
                    .ids
                    .iter()
                    .rposition(|&id| id != pad)
                    .map_or(0, |i| i + 1);
                Sequence::from_ids(self.ids[..end].to_vec())
            }
            None => self.clone(),
        }
    }
}

impl From<Vec<TokenId>> for Sequence {
    fn from(ids: Vec<TokenId>) -> Self {
        Self::from_ids(ids)
    }
}

/// A sequence with its binary validity label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledExample {
    pub sequence: Sequence,
    pub label: bool,
}

impl LabeledExample {
    pub fn new(sequence: Sequence, label: bool) -> Self {
        Self { sequence, label }
    }
}

/// A labeled training set; all sequences share one length and one alphabet.
#[derive(Debug, Clone, Default)]
pub struct Dataset {
    examples: Vec<LabeledExample>,
}

impl Dataset {
    pub fn new(examples: Vec<LabeledExample>) -> Result<Self, DatasetError> {
        if let Some(first) = examples.first() {
            let expected = first.sequence.len();
            for (index, ex) in examples.iter().enumerate() {
                if ex.sequence.len() != expected {
                    return Err(DatasetError::LengthMismatch {
                        index,
                        len: ex.sequence.len(),
                        expected,
                    });
                }
            }
        }
        Ok(Self { examples })
    }

    pub fn empty() -> Self {
        Self { examples: Vec::new() }
    }

    /// Appends examples; the shared-length invariant is the caller's to keep
    /// (checked in debug builds).
    pub fn extend(&mut self, examples: impl IntoIterator<Item = LabeledExample>) {
        let expected = self.sequence_len();
        for ex in examples {
            debug_assert!(expected.is_none_or(|t| t == ex.sequence.len()));
            self.examples.push(ex);
        }
    }

    pub fn examples(&self) -> &[LabeledExample] {
        &self.examples
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn sequence_len(&self) -> Option<usize> {
        self.examples.first().map(|e| e.sequence.len())
    }

    pub fn valid_fraction(&self) -> f64 {
        if self.examples.is_empty() {
            return 0.0;
        }
        self.examples.iter().filter(|e| e.label).count() as f64 / self.examples.len() as f64
    }

    /// Parses the dataset text format: `label<TAB>sequence-text` records,
    /// `#` comment lines.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self, DatasetError> {
        let mut examples = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            if raw.is_empty() || raw.starts_with('#') {
                continue;
            }
            let (label_str, seq_text) = raw.split_once('\t').ok_or_else(|| DatasetError::Parse {
                line,
                msg: "expected `label<TAB>sequence-text`".into(),
            })?;
            let label = match label_str {
                "0" => false,
                "1" => true,
                other => {
                    return Err(DatasetError::Parse {
                        line,
                        msg: format!("label must be 0 or 1, got {other:?}"),
                    })
                }
            };
            let sequence = alphabet.tokenize(seq_text).map_err(|e| DatasetError::Parse {
                line,
                msg: e.to_string(),
            })?;
            if !sequence.respects(alphabet) {
                return Err(DatasetError::Parse {
                    line,
                    msg: "pad token occurs outside the suffix".into(),
                });
            }
            examples.push(LabeledExample::new(sequence, label));
        }
        Self::new(examples)
    }

    pub fn to_file_string(&self, alphabet: &Alphabet) -> String {
        let mut out = String::new();
        for ex in &self.examples {
            out.push_str(if ex.label { "1" } else { "0" });
            out.push('\t');
            out.push_str(&alphabet.detokenize(&ex.sequence));
            out.push('\n');
        }
        out
    }

    pub fn load(path: &Path, alphabet: &Alphabet) -> Result<Self, DatasetError> {
        Self::parse(&fs::read_to_string(path)?, alphabet)
    }

    pub fn save(&self, path: &Path, alphabet: &Alphabet) -> Result<(), DatasetError> {
        fs::write(path, self.to_file_string(alphabet))?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn smiles() -> Alphabet {
        Alphabet::smiles()
    }

    #[test]
    fn pad_extends_and_strips() {
        let a = smiles();
        let seq = a.tokenize("CC").unwrap();
        let padded = seq.pad_to(4, &a).unwrap();
        assert_eq!(a.detokenize(&padded), "CC__");
        assert_eq!(padded.strip_pad(&a), seq);
    }

    #[test]
    fn pad_identity_at_target_length() {
        let a = smiles();
        let seq = a.tokenize("CCCC").unwrap();
        assert_eq!(seq.pad_to(4, &a).unwrap(), seq);
    }

    #[test]
    fn pad_too_long() {
        let a = smiles();
        let seq = a.tokenize("CCCCC").unwrap();
        assert_eq!(
            seq.pad_to(4, &a),
            Err(PadError::TooLong { len: 5, target: 4 })
        );
    }

    #[test]
    fn pad_requires_pad_token() {
        let a = Alphabet::python_expressions();
        let seq = a.tokenize("1").unwrap();
        assert_eq!(seq.pad_to(4, &a), Err(PadError::NoPadToken));
    }

    #[test]
    fn interior_pad_is_rejected() {
        let a = smiles();
        let seq = a.tokenize("C_C").unwrap();
        assert!(!seq.respects(&a));
        assert!(a.tokenize("CC__").unwrap().respects(&a));
    }

    #[test]
    fn dataset_text_roundtrip() {
        let a = smiles();
        let text = "# comment\n1\tCC__\n0\tC(__\n";
        let ds = Dataset::parse(text, &a).unwrap();
        assert_eq!(ds.len(), 2);
        assert!(ds.examples()[0].label);
        assert!(!ds.examples()[1].label);
        assert_eq!(ds.to_file_string(&a), "1\tCC__\n0\tC(__\n");
    }

    #[test]
    fn dataset_bad_label_names_line() {
        let a = smiles();
        let err = Dataset::parse("1\tCC\n2\tCC\n", &a).unwrap_err();
        match err {
            DatasetError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn dataset_length_mismatch() {
        let a = smiles();
        let err = Dataset::parse("1\tCC\n1\tCCC\n", &a).unwrap_err();
        assert!(matches!(err, DatasetError::LengthMismatch { index: 1, .. }));
    }
}
