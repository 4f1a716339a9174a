//! Incremental parse state for the SMILES subset.
//!
//! [`PrefixState`] consumes one token at a time and records the first
//! violation it sees; violations are sticky, which gives the prefix oracle
//! its monotonicity. Valence is accounted eagerly: every bond debits both
//! endpoint atoms the moment it is committed, and a ring opened without an
//! explicit bond symbol commits the minimum order of one until closure.

use super::valence::ValenceTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(super) struct AtomRecord {
    pub capacity: u8,
    pub used: u8,
}

impl AtomRecord {
    fn spare(&self) -> u8 {
        self.capacity - self.used
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(super) struct RingOpen {
    pub digit: u8,
    pub opener: usize,
    /// bond order committed so far (1 unless a bond symbol was written)
    pub committed: u8,
    /// whether the opener wrote an explicit bond symbol
    pub specified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(super) struct BranchFrame {
    pub parent: usize,
    pub saw_atom: bool,
}

/// Where the bracket-atom grammar currently stands:
/// `[` symbol, optional `@`/`@@`, optional `H` with count, optional charge, `]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(super) enum BracketPos {
    ExpectSymbol,
    AfterSymbol,
    Chiral1,
    Chiral2,
    AfterH,
    AfterHCount,
    ChargeSign,
    ChargeCount,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(super) struct BracketState {
    pub pos: BracketPos,
    pub symbol: Option<String>,
    pub hcount: u8,
    pub charge: i8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(super) enum LastKind {
    Start,
    Atom,
    RingDigit,
    BondSymbol,
    OpenParen,
    CloseParen,
}

#[derive(Debug, Clone)]
pub struct PrefixState {
    table: ValenceTable,
    pub(super) atoms: Vec<AtomRecord>,
    pub(super) cur: Option<usize>,
    pub(super) pending_bond: Option<u8>,
    pub(super) branches: Vec<BranchFrame>,
    pub(super) rings: Vec<RingOpen>,
    pub(super) bracket: Option<BracketState>,
    pub(super) last: LastKind,
    pub(super) padded: bool,
    violation: Option<String>,
}

impl PrefixState {
    pub fn new(table: ValenceTable) -> Self {
        Self {
            table,
            atoms: Vec::new(),
            cur: None,
            pending_bond: None,
            branches: Vec::new(),
            rings: Vec::new(),
            bracket: None,
            last: LastKind::Start,
            padded: false,
            violation: None,
        }
    }

    pub fn table(&self) -> &ValenceTable {
        &self.table
    }

    pub fn violation(&self) -> Option<&str> {
        self.violation.as_deref()
    }

    fn violate(&mut self, msg: impl Into<String>) {
        if self.violation.is_none() {
            self.violation = Some(msg.into());
        }
    }

    /// True when the tokens consumed so far form a complete valid string.
    pub fn is_complete_valid(&self) -> bool {
        self.violation.is_none()
            && self.bracket.is_none()
            && self.pending_bond.is_none()
            && self.branches.is_empty()
            && self.rings.is_empty()
            && !self.atoms.is_empty()
    }

    /// Consumes one token. `pad` marks the alphabet's PAD symbol, which may
    /// only begin a suffix of further PADs.
    pub fn step(&mut self, token: &str, pad: Option<&str>) {
        if self.violation.is_some() {
            return;
        }
        if Some(token) == pad {
            self.padded = true;
            return;
        }
        if self.padded {
            self.violate("token after pad");
            return;
        }
        if self.bracket.is_some() {
            self.step_bracket(token);
            return;
        }
        match token {
            "=" => self.bond_symbol(2, token),
            "#" => self.bond_symbol(3, token),
            "/" | "\\" | "-" => self.bond_symbol(1, token),
            "+" => self.violate("charge symbol outside brackets"),
            "@" => self.violate("chirality symbol outside brackets"),
            "(" => self.open_branch(),
            ")" => self.close_branch(),
            "[" => self.open_bracket(),
            "]" => self.violate("unmatched bracket close"),
            d if is_ring_digit(d) => self.ring_digit(d.as_bytes()[0] - b'0'),
            a if self.table.is_atom(a) => {
                let capacity = self.table.max_capacity(a).unwrap();
                self.place_atom(AtomRecord { capacity, used: 0 });
            }
            other => self.violate(format!("unknown token {other:?}")),
        }
    }

    fn bond_symbol(&mut self, order: u8, token: &str) {
        match self.last {
            LastKind::Atom | LastKind::RingDigit | LastKind::CloseParen | LastKind::OpenParen => {}
            LastKind::Start => return self.violate("leading bond symbol"),
            LastKind::BondSymbol => return self.violate("bond symbol after bond symbol"),
        }
        let cur = self.cur.expect("bond position implies an atom");
        if self.atoms[cur].spare() < order {
            return self.violate(format!(
                "valence exceeded on atom {cur} by bond {token:?}"
            ));
        }
        self.pending_bond = Some(order);
        self.last = LastKind::BondSymbol;
    }

    fn open_branch(&mut self) {
        match self.last {
            LastKind::Atom | LastKind::RingDigit | LastKind::CloseParen => {}
            _ => return self.violate("branch must open after an atom or ring closure"),
        }
        let parent = self.cur.expect("branch position implies an atom");
        self.branches.push(BranchFrame { parent, saw_atom: false });
        self.last = LastKind::OpenParen;
    }

    fn close_branch(&mut self) {
        match self.last {
            LastKind::OpenParen => return self.violate("empty branch"),
            LastKind::BondSymbol => return self.violate("bond symbol before branch close"),
            LastKind::Atom | LastKind::RingDigit | LastKind::CloseParen => {}
            LastKind::Start => return self.violate("unmatched branch close"),
        }
        match self.branches.pop() {
            Some(frame) => {
                debug_assert!(frame.saw_atom);
                self.cur = Some(frame.parent);
                self.last = LastKind::CloseParen;
            }
            None => self.violate("unmatched branch close"),
        }
    }

    fn ring_digit(&mut self, digit: u8) {
        match self.last {
            LastKind::Atom | LastKind::RingDigit | LastKind::BondSymbol => {}
            _ => return self.violate("ring-bond digit must follow an atom"),
        }
        let cur = self.cur.expect("ring position implies an atom");
        let pending = self.pending_bond.take();
        if let Some(i) = self.rings.iter().position(|r| r.digit == digit) {
            let ring = self.rings[i].clone();
            if ring.opener == cur {
                return self.violate(format!("ring bond {digit} closes on its own atom"));
            }
            let order = match pending {
                Some(p) if ring.specified && p != ring.committed => {
                    return self.violate(format!("ring bond {digit} order mismatch"));
                }
                Some(p) => p,
                None => ring.committed,
            };
            let bump = order - ring.committed;
            if self.atoms[ring.opener].spare() < bump {
                return self.violate(format!("valence exceeded on atom {}", ring.opener));
            }
            if self.atoms[cur].spare() < order {
                return self.violate(format!("valence exceeded on atom {cur}"));
            }
            self.atoms[ring.opener].used += bump;
            self.atoms[cur].used += order;
            self.rings.remove(i);
        } else {
            let committed = pending.unwrap_or(1);
            if self.atoms[cur].spare() < committed {
                return self.violate(format!("valence exceeded on atom {cur}"));
            }
            self.atoms[cur].used += committed;
            self.rings.push(RingOpen {
                digit,
                opener: cur,
                committed,
                specified: pending.is_some(),
            });
        }
        self.last = LastKind::RingDigit;
    }

    fn open_bracket(&mut self) {
        // a bracket atom is legal wherever a plain atom is, which is any
        // position outside an existing bracket
        self.bracket = Some(BracketState {
            pos: BracketPos::ExpectSymbol,
            symbol: None,
            hcount: 0,
            charge: 0,
        });
    }

    fn step_bracket(&mut self, token: &str) {
        use BracketPos::*;
        let b = self.bracket.as_mut().expect("in bracket");
        match (b.pos.clone(), token) {
            (ExpectSymbol, a) if self.table.is_atom(a) => {
                b.symbol = Some(a.to_string());
                b.pos = AfterSymbol;
            }
            (AfterSymbol, "@") => b.pos = Chiral1,
            (Chiral1, "@") => b.pos = Chiral2,
            (AfterSymbol | Chiral1 | Chiral2, "H") => {
                b.hcount = 1;
                b.pos = AfterH;
            }
            (AfterH, d) if is_ring_digit(d) => {
                b.hcount = d.as_bytes()[0] - b'0';
                b.pos = AfterHCount;
            }
            (AfterSymbol | Chiral1 | Chiral2 | AfterH | AfterHCount, "+") => {
                b.charge = 1;
                b.pos = ChargeSign;
            }
            (AfterSymbol | Chiral1 | Chiral2 | AfterH | AfterHCount, "-") => {
                b.charge = -1;
                b.pos = ChargeSign;
            }
            (ChargeSign, d) if is_ring_digit(d) => {
                b.charge *= (d.as_bytes()[0] - b'0') as i8;
                b.pos = ChargeCount;
            }
            (AfterSymbol | Chiral1 | Chiral2 | AfterH | AfterHCount | ChargeSign | ChargeCount, "]") => {
                self.close_bracket();
            }
            (_, other) => self.violate(format!("unexpected {other:?} in bracket atom")),
        }
    }

    fn close_bracket(&mut self) {
        let b = self.bracket.take().expect("in bracket");
        let symbol = b.symbol.expect("bracket grammar places symbol first");
        let capacity = self
            .table
            .charged_capacity(&symbol, b.charge)
            .expect("bracket symbol is an atom");
        if b.hcount > capacity {
            return self.violate(format!("valence exceeded inside bracket atom [{symbol}...]"));
        }
        self.place_atom(AtomRecord { capacity, used: b.hcount });
    }

    /// Joins a new atom to the chain, consuming any pending bond.
    fn place_atom(&mut self, mut atom: AtomRecord) {
        let order = match self.cur {
            Some(_) => self.pending_bond.take().unwrap_or(1),
            None => 0,
        };
        if atom.used + order > atom.capacity {
            return self.violate("valence exceeded on new atom".to_string());
        }
        atom.used += order;
        if let Some(cur) = self.cur {
            // spare was checked when the bond symbol was read; an implicit
            // single bond still needs checking here
            if self.atoms[cur].spare() < order {
                return self.violate(format!("valence exceeded on atom {cur}"));
            }
            self.atoms[cur].used += order;
        }
        let id = self.atoms.len();
        self.atoms.push(atom);
        self.cur = Some(id);
        if let Some(frame) = self.branches.last_mut() {
            frame.saw_atom = true;
        }
        self.last = LastKind::Atom;
    }
}

pub(super) fn is_ring_digit(token: &str) -> bool {
    matches!(token, "1" | "2" | "3" | "4" | "5" | "6" | "7" | "8")
}
