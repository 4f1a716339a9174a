//! Exact validity oracles.
//!
//! Two grammars are supported: Python-style arithmetic expressions
//! ([`expr`]) and a Kekulé-SMILES subset ([`smiles`]). Both expose a
//! complete-sequence validator; SMILES additionally has an exact analytic
//! prefix-feasibility oracle, and [`brute`] provides exhaustive-search prefix
//! oracles and enumeration for any validator on small spaces.

pub mod expr;

use crate::alphabet::Alphabet;
use crate::data::Sequence;

/// Outcome of a validity check. The diagnostic `reason` is advisory and
/// excluded from equality; it is present exactly when the verdict is invalid.
#[derive(Debug, Clone, Eq)]
pub struct Verdict {
    valid: bool,
    reason: Option<String>,
}

impl Verdict {
    pub fn valid() -> Self {
        Self { valid: true, reason: None }
    }

    pub fn invalid(reason: impl Into<String>) -> Self {
        Self { valid: false, reason: Some(reason.into()) }
    }

    pub fn is_valid(&self) -> bool {
        self.valid
    }

    pub fn reason(&self) -> Option<&str> {
        self.reason.as_deref()
    }
}

impl PartialEq for Verdict {
    fn eq(&self, other: &Self) -> bool {
        self.valid == other.valid
    }
}

impl std::hash::Hash for Verdict {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.valid.hash(state);
    }
}

/// A validator `v : X -> {0, 1}` over complete token strings.
pub trait Validator: Send + Sync {
    fn check_text(&self, text: &str) -> Verdict;
}

impl<T: Validator + ?Sized> Validator for &T {
    fn check_text(&self, text: &str) -> Verdict {
        (**self).check_text(text)
    }
}

impl<T: Validator + ?Sized> Validator for std::sync::Arc<T> {
    fn check_text(&self, text: &str) -> Verdict {
        (**self).check_text(text)
    }
}

/// Applies a text validator to a token sequence: the PAD suffix is stripped
/// first, and interior PAD is invalid outright.
pub fn validate_sequence(validator: &dyn Validator, alphabet: &Alphabet, seq: &Sequence) -> Verdict {
    if !seq.respects(alphabet) {
        return Verdict::invalid("pad token outside the suffix or index out of range");
    }
    let stripped = seq.strip_pad(alphabet);
    validator.check_text(&alphabet.detokenize(&stripped))
}

/// A prefix validator: 1 iff the prefix has at least one valid completion
/// within `remaining` further tokens.
pub trait PrefixOracle: Send + Sync {
    fn feasible(&self, prefix: &Sequence, remaining: usize) -> bool;
}

impl<T: PrefixOracle + ?Sized> PrefixOracle for &T {
    fn feasible(&self, prefix: &Sequence, remaining: usize) -> bool {
        (**self).feasible(prefix, remaining)
    }
}

impl<T: PrefixOracle + ?Sized> PrefixOracle for std::sync::Arc<T> {
    fn feasible(&self, prefix: &Sequence, remaining: usize) -> bool {
        (**self).feasible(prefix, remaining)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_equality_ignores_reason() {
        assert_eq!(Verdict::invalid("a"), Verdict::invalid("b"));
        assert_ne!(Verdict::valid(), Verdict::invalid("x"));
    }

    #[test]
    fn reason_present_iff_invalid() {
        assert!(Verdict::valid().reason().is_none());
        assert_eq!(Verdict::invalid("why").reason(), Some("why"));
    }
}
