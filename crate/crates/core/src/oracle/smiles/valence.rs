//! Valence capacities for the SMILES subset.

/// Maximum explicit-bond counts per atom, with the charge adjustment rule.
///
/// Capacities are the charge-neutral maxima of the standard organic subset;
/// multi-valent atoms keep their full set but validity only ever compares
/// against the largest member. A positive charge adds capacity on atoms with
/// a lone pair to donate (N, O, P, S) and removes it elsewhere (a carbocation
/// has three bonds); a negative charge removes capacity everywhere.
#[derive(Debug, Clone)]
pub struct ValenceTable {
    entries: Vec<(&'static str, &'static [u8])>,
}

impl Default for ValenceTable {
    fn default() -> Self {
        Self {
            entries: vec![
                ("B", &[3]),
                ("C", &[4]),
                ("N", &[3]),
                ("O", &[2]),
                ("P", &[3, 5]),
                ("S", &[2, 4, 6]),
                ("F", &[1]),
                ("Cl", &[1]),
                ("Br", &[1]),
                ("I", &[1]),
                ("H", &[1]),
            ],
        }
    }
}

impl ValenceTable {
    pub fn capacities(&self, atom: &str) -> Option<&[u8]> {
        self.entries.iter().find(|(a, _)| *a == atom).map(|(_, c)| *c)
    }

    pub fn is_atom(&self, token: &str) -> bool {
        self.capacities(token).is_some()
    }

    /// Largest allowed explicit-bond count for a neutral atom.
    pub fn max_capacity(&self, atom: &str) -> Option<u8> {
        self.capacities(atom).and_then(|c| c.iter().copied().max())
    }

    /// Charge-adjusted capacity, clamped at zero.
    pub fn charged_capacity(&self, atom: &str, charge: i8) -> Option<u8> {
        let base = self.max_capacity(atom)? as i16;
        let gains_when_positive = matches!(atom, "N" | "O" | "P" | "S");
        let shift = if charge >= 0 || gains_when_positive {
            // N-like cations gain a bond per unit charge; anions always lose;
            // other cations lose too (isoelectronic rule)
            if charge > 0 && !gains_when_positive {
                -(charge as i16)
            } else {
                charge as i16
            }
        } else {
            charge as i16
        };
        Some((base + shift).clamp(0, 15) as u8)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_covers_every_atom_token() {
        let t = ValenceTable::default();
        for atom in ["B", "C", "N", "O", "S", "P", "F", "I", "H", "Cl", "Br"] {
            let caps = t.capacities(atom).unwrap();
            assert!(!caps.is_empty());
            assert!(caps.iter().all(|&c| c >= 1));
        }
    }

    #[test]
    fn charge_adjustments() {
        let t = ValenceTable::default();
        assert_eq!(t.charged_capacity("N", 1), Some(4)); // ammonium
        assert_eq!(t.charged_capacity("O", 1), Some(3)); // hydronium
        assert_eq!(t.charged_capacity("O", -1), Some(1)); // alkoxide
        assert_eq!(t.charged_capacity("C", -1), Some(3)); // carbanion
        assert_eq!(t.charged_capacity("C", 1), Some(3)); // carbocation
        assert_eq!(t.charged_capacity("F", -2), Some(0));
    }
}
