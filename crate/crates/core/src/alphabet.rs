//! Token alphabets with greedy longest-match tokenization.
//!
//! An [`Alphabet`] is an ordered set of symbol strings. Symbols may span
//! several characters (`Cl`, `Br`), so text is segmented by greedy longest
//! match. Two indices get special treatment: an optional PAD token that may
//! only appear as a contiguous suffix of a sequence, and a virtual START
//! index (`== len()`) that is fed to the model before the first real token
//! and never appears in emitted sequences.

use std::fmt;
use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::data::Sequence;

/// Index of a token within an [`Alphabet`].
pub type TokenId = u16;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("duplicate token {0:?}")]
    DuplicateToken(String),
    #[error("empty token at position {0}")]
    EmptyToken(usize),
    #[error("pad token {0:?} is not a member of the alphabet")]
    UnknownPadToken(String),
    #[error("alphabet file line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("no alphabet token matches input at byte position {position}")]
pub struct UnknownSymbol {
    pub position: usize,
}

/// Ordered token set shared by sequences, oracles and models.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    tokens: Vec<String>,
    pad: Option<TokenId>,
    /// token indices sorted by decreasing token length, for longest-match scans
    by_len: Vec<TokenId>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(tokens: impl IntoIterator<Item = S>) -> Result<Self, AlphabetError> {
        let tokens: Vec<String> = tokens.into_iter().map(Into::into).collect();
        for (i, t) in tokens.iter().enumerate() {
            if t.is_empty() {
                return Err(AlphabetError::EmptyToken(i));
            }
            if tokens[..i].contains(t) {
                return Err(AlphabetError::DuplicateToken(t.clone()));
            }
        }
        let mut by_len: Vec<TokenId> = (0..tokens.len() as TokenId).collect();
        by_len.sort_by_key(|&i| std::cmp::Reverse(tokens[i as usize].len()));
        Ok(Self { tokens, pad: None, by_len })
    }

    /// Marks `token` as the PAD symbol, appending it if not already present.
    pub fn with_pad(mut self, token: &str) -> Result<Self, AlphabetError> {
        match self.tokens.iter().position(|t| t == token) {
            Some(i) => self.pad = Some(i as TokenId),
            None => {
                let mut tokens = self.tokens;
                tokens.push(token.to_string());
                let mut a = Self::new(tokens)?;
                a.pad = Some((a.tokens.len() - 1) as TokenId);
                return Ok(a);
            }
        }
        Ok(self)
    }

    /// The Python 3 expression alphabet: digits, operators, comparisons, brackets.
    pub fn python_expressions() -> Self {
        Self::new("1234567890+-*/%!=<>()".chars().map(|c| c.to_string())).unwrap()
    }

    /// The SMILES alphabet: atoms and chirality, bonds and ring-bond digits,
    /// charges, branches and brackets, plus a `_` pad token.
    pub fn smiles() -> Self {
        let atoms = ["B", "C", "N", "O", "S", "P", "F", "I", "H", "Cl", "Br", "@"];
        let rest = "=#/\\12345678-+()[]".chars().map(|c| c.to_string());
        Self::new(atoms.iter().map(|s| s.to_string()).chain(rest))
            .unwrap()
            .with_pad("_")
            .unwrap()
    }

    /// Builds an alphabet from a restricted token list, e.g. for the reduced
    /// oracle-equivalence test spaces.
    pub fn from_tokens(tokens: &[&str]) -> Result<Self, AlphabetError> {
        Self::new(tokens.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn token(&self, id: TokenId) -> &str {
        &self.tokens[id as usize]
    }

    pub fn tokens(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(String::as_str)
    }

    pub fn index_of(&self, token: &str) -> Option<TokenId> {
        self.tokens.iter().position(|t| t == token).map(|i| i as TokenId)
    }

    pub fn pad_index(&self) -> Option<TokenId> {
        self.pad
    }

    /// Virtual model-input-only index; never a member of emitted sequences.
    pub fn start_index(&self) -> usize {
        self.tokens.len()
    }

    /// Token ids that generation and uniform sampling may emit (PAD excluded).
    pub fn real_tokens(&self) -> Vec<TokenId> {
        (0..self.len() as TokenId).filter(|&i| Some(i) != self.pad).collect()
    }

    /// Greedy longest-match segmentation of `text` into token indices.
    pub fn tokenize(&self, text: &str) -> Result<Sequence, UnknownSymbol> {
        let mut ids = Vec::new();
        let mut pos = 0;
        let bytes = text.as_bytes();
        while pos < bytes.len() {
            let rest = &text[pos..];
            let hit = self
                .by_len
                .iter()
                .copied()
                .find(|&id| rest.starts_with(self.token(id)));
            match hit {
                Some(id) => {
                    ids.push(id);
                    pos += self.token(id).len();
                }
                None => return Err(UnknownSymbol { position: pos }),
            }
        }
        Ok(Sequence::from_ids(ids))
    }

    /// Concatenates token strings; inverse of [`Self::tokenize`] on well-formed input.
    pub fn detokenize(&self, seq: &Sequence) -> String {
        seq.ids().iter().map(|&id| self.token(id)).collect()
    }

    /// Parses the alphabet file format: one token per line (verbatim, so `#`
    /// and `!` are ordinary tokens), order significant, plus `!pad <token>`
    /// directive lines.
    pub fn parse(text: &str) -> Result<Self, AlphabetError> {
        let mut tokens = Vec::new();
        let mut pad = None;
        for raw in text.lines() {
            let line = raw.trim_end_matches('\r');
            if line.is_empty() {
                continue;
            }
            if let Some(tok) = line.strip_prefix("!pad ") {
                pad = Some(tok.to_string());
            } else {
                tokens.push(line.to_string());
            }
        }
        let alphabet = Self::new(tokens)?;
        match pad {
            Some(tok) => alphabet.with_pad(&tok),
            None => Ok(alphabet),
        }
    }

    pub fn load(path: &Path) -> Result<Self, AlphabetError> {
        let text = fs::read_to_string(path).map_err(|e| AlphabetError::Parse {
            line: 0,
            msg: e.to_string(),
        })?;
        Self::parse(&text)
    }

    pub fn save(&self, path: &Path) -> std::io::Result<()> {
        fs::write(path, self.to_file_string())
    }

    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for t in &self.tokens {
            out.push_str(t);
            out.push('\n');
        }
        if let Some(p) = self.pad {
            out.push_str(&format!("!pad {}\n", self.token(p)));
        }
        out
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.tokens.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn longest_match_wins() {
        let a = Alphabet::smiles();
        let seq = a.tokenize("CCl").unwrap();
        assert_eq!(seq.len(), 2);
        assert_eq!(a.token(seq.ids()[0]), "C");
        assert_eq!(a.token(seq.ids()[1]), "Cl");
    }

    #[test]
    fn single_char_alphabet() {
        let a = Alphabet::python_expressions();
        let seq = a.tokenize("1+1").unwrap();
        assert_eq!(seq.len(), 3);
        assert_eq!(a.detokenize(&seq), "1+1");
    }

    #[test]
    fn unknown_symbol_reports_position() {
        let a = Alphabet::python_expressions();
        assert_eq!(a.tokenize("X?"), Err(UnknownSymbol { position: 0 }));
        assert_eq!(a.tokenize("1?"), Err(UnknownSymbol { position: 1 }));
    }

    #[test]
    fn empty_roundtrip() {
        let a = Alphabet::python_expressions();
        assert_eq!(a.detokenize(&a.tokenize("").unwrap()), "");
    }

    #[test]
    fn duplicate_and_empty_rejected() {
        assert!(matches!(
            Alphabet::from_tokens(&["a", "a"]),
            Err(AlphabetError::DuplicateToken(_))
        ));
        assert!(matches!(
            Alphabet::from_tokens(&["a", ""]),
            Err(AlphabetError::EmptyToken(1))
        ));
    }

    #[test]
    fn file_format_roundtrip() {
        let a = Alphabet::smiles();
        let b = Alphabet::parse(&a.to_file_string()).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.pad_index().map(|p| b.token(p)), Some("_"));
    }

    #[test]
    fn smiles_alphabet_is_table_sized() {
        let a = Alphabet::smiles();
        // 12 atoms/chirality + 12 bonds/ringbonds + 2 charges + 4 brackets + pad
        assert_eq!(a.len(), 31);
        assert_eq!(a.start_index(), 31);
    }
}
