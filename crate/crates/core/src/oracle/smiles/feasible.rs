//! Minimum-completion-cost search for SMILES prefixes.
//!
//! A prefix is feasible within `remaining` tokens iff no constraint is
//! violated yet and some completion needs at most `remaining` further real
//! tokens (any shortfall is PAD). The search runs over an abstract state:
//! concrete atom identities are dropped, keeping only the spare valence of
//! the current atom, the spare valences of branch parents still on the
//! stack, and the open ring bonds with the order they owe and whether their
//! opener is still reachable. Minimal completions never need bond symbols,
//! chirality, H counts, fresh ring opens or fresh branch opens — each of
//! those only costs tokens or valence — so the move set is: append an atom
//! (plain or bracket, best capacity per token cost), close a ring on the
//! current atom, or close the innermost branch.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Mutex;

use super::state::{BracketPos, PrefixState};
use super::valence::ValenceTable;
use crate::alphabet::Alphabet;

const INFINITE: u32 = u32::MAX;

/// Where an open ring's opener atom sits relative to the completion point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum OpenerRef {
    /// The opener is the current atom; the ring cannot close yet.
    Cur,
    /// The opener is the branch parent at this stack level.
    Level(u8),
    /// The opener is buried in the chain; any future atom may close the ring.
    Gone,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct CompletionState {
    cur_spare: Option<u8>,
    stack: Vec<u8>,
    innermost_empty: bool,
    /// open ring bonds as a sorted multiset of (order due, opener ref)
    rings: Vec<(u8, OpenerRef)>,
    has_atom: bool,
}

impl CompletionState {
    fn canonical(mut self) -> Self {
        self.rings.sort_unstable();
        self
    }

    fn is_goal(&self) -> bool {
        self.has_atom && self.stack.is_empty() && self.rings.is_empty()
    }
}

/// Completion resources available in a given alphabet.
#[derive(Debug, Clone)]
pub(super) struct CompletionOptions {
    /// Pareto set of (token cost, atom capacity), cost ascending.
    atom_options: Vec<(u32, u8)>,
    close_paren: bool,
    bracket_close: bool,
    plus: bool,
    /// available count digits, descending
    digits: Vec<u8>,
    /// best base capacity among available plain atom tokens
    best_plain: Option<u8>,
    /// atom symbols available for an unfinished bracket
    symbols: Vec<String>,
}

impl CompletionOptions {
    pub(super) fn from_alphabet(alphabet: &Alphabet, table: &ValenceTable) -> Self {
        let has = |t: &str| alphabet.index_of(t).is_some();
        let symbols: Vec<String> = alphabet
            .tokens()
            .filter(|t| table.is_atom(t))
            .map(str::to_string)
            .collect();
        let best_plain = symbols
            .iter()
            .filter_map(|s| table.max_capacity(s))
            .max();
        let mut digits: Vec<u8> = (1..=8u8).filter(|d| has(&d.to_string())).collect();
        digits.sort_unstable_by(|a, b| b.cmp(a));
        let plus = has("+");
        let bracket_open = has("[");
        let bracket_close = has("]");

        let mut atom_options = Vec::new();
        if let Some(cap) = best_plain {
            atom_options.push((1, cap));
        }
        if bracket_open && bracket_close && plus && !symbols.is_empty() {
            // positively charged bracket atoms can exceed any plain capacity
            let best_charged = |q: i8| {
                symbols
                    .iter()
                    .filter_map(|s| table.charged_capacity(s, q))
                    .max()
            };
            if let Some(cap) = best_charged(1) {
                atom_options.push((4, cap)); // [X+]
            }
            if let Some(&d) = digits.first() {
                if let Some(cap) = best_charged(d as i8) {
                    atom_options.push((5, cap)); // [X+d]
                }
            }
        }
        atom_options.sort_unstable();
        // keep only options that strictly raise capacity over cheaper ones
        let mut pareto: Vec<(u32, u8)> = Vec::new();
        for (cost, cap) in atom_options {
            if pareto.last().is_none_or(|&(_, c)| cap > c) {
                pareto.push((cost, cap));
            }
        }
        Self {
            atom_options: pareto,
            close_paren: has(")"),
            bracket_close,
            plus,
            digits,
            best_plain,
            symbols,
        }
    }
}

pub(super) struct MinCostSearch {
    options: CompletionOptions,
    memo: Mutex<HashMap<CompletionState, u32>>,
}

impl MinCostSearch {
    pub(super) fn new(options: CompletionOptions) -> Self {
        Self { options, memo: Mutex::new(HashMap::new()) }
    }

    /// Minimum number of further real tokens to finish the prefix, or
    /// `None` when no completion exists.
    pub(super) fn min_completion(&self, ps: &PrefixState) -> Option<u32> {
        if ps.violation().is_some() {
            return None;
        }
        if ps.padded {
            return if ps.is_complete_valid() { Some(0) } else { None };
        }
        let mut best = INFINITE;
        for (cost, state) in self.entry_states(ps) {
            let d = self.min_cost(state);
            if d != INFINITE {
                best = best.min(cost + d);
            }
        }
        (best != INFINITE).then_some(best)
    }

    /// All one-commitment resolutions of the open bracket / pending bond,
    /// using exact atom records from the parse state.
    fn entry_states(&self, ps: &PrefixState) -> Vec<(u32, CompletionState)> {
        let spare = |used: &HashMap<usize, u8>, idx: usize| {
            let a = ps.atoms[idx];
            a.capacity - a.used - used.get(&idx).copied().unwrap_or(0)
        };
        // `new_cur` is the spare valence of a freshly placed atom replacing
        // the old current atom
        let make_state = |extra_used: &HashMap<usize, u8>,
                          new_cur: Option<u8>|
         -> CompletionState {
            let cur_spare = match new_cur {
                Some(s) => Some(s),
                None => ps.cur.map(|c| spare(extra_used, c)),
            };
            let fresh = new_cur.is_some();
            let stack: Vec<u8> = ps
                .branches
                .iter()
                .map(|f| spare(extra_used, f.parent))
                .collect();
            let rings = ps
                .rings
                .iter()
                .map(|r| {
                    let opener = if !fresh && Some(r.opener) == ps.cur {
                        OpenerRef::Cur
                    } else if let Some(i) =
                        ps.branches.iter().position(|f| f.parent == r.opener)
                    {
                        OpenerRef::Level(i as u8)
                    } else {
                        OpenerRef::Gone
                    };
                    (r.committed, opener)
                })
                .collect();
            let innermost_empty = if fresh {
                false
            } else {
                ps.branches.last().map(|f| !f.saw_atom).unwrap_or(false)
            };
            CompletionState {
                cur_spare,
                stack,
                innermost_empty,
                rings,
                has_atom: !ps.atoms.is_empty() || fresh,
            }
            .canonical()
        };

        if let Some(bracket) = &ps.bracket {
            // the bracket atom will consume the pending (or implicit) bond
            let incoming = match ps.cur {
                Some(_) => ps.pending_bond.unwrap_or(1),
                None => 0,
            };
            let mut extra = HashMap::new();
            if let Some(c) = ps.cur {
                if spare(&extra, c) < incoming {
                    return Vec::new();
                }
                extra.insert(c, incoming);
            }
            let mut out = Vec::new();
            for (cost, capacity) in self.bracket_completions(bracket) {
                let used = bracket.hcount + incoming;
                if used <= capacity {
                    out.push((cost, make_state(&extra, Some(capacity - used))));
                }
            }
            return out;
        }

        if let Some(order) = ps.pending_bond {
            let cur = ps.cur.expect("pending bond implies an atom");
            let mut out = Vec::new();
            // consume with a new atom
            for &(cost, cap) in &self.options.atom_options {
                if cap >= order {
                    let mut extra = HashMap::new();
                    extra.insert(cur, order);
                    out.push((cost, make_state(&extra, Some(cap - order))));
                }
            }
            // or close an open ring with this order
            for ring in &ps.rings {
                if ring.opener == cur || (ring.specified && ring.committed != order) {
                    continue;
                }
                let bump = order - ring.committed;
                let mut extra = HashMap::new();
                extra.insert(cur, order);
                *extra.entry(ring.opener).or_insert(0) += bump;
                let a = ps.atoms[ring.opener];
                let c = ps.atoms[cur];
                if a.capacity < a.used + extra[&ring.opener] || c.capacity < c.used + extra[&cur] {
                    continue;
                }
                // rebuild without the closed ring, with both debits applied
                let mut st = make_state(&extra, None);
                let closed = (ring.committed, ref_of(ps, ring.opener));
                if let Some(pos) = st.rings.iter().position(|&r| r == closed) {
                    st.rings.remove(pos);
                }
                out.push((1, st.canonical()));
            }
            return out;
        }

        vec![(0, make_state(&HashMap::new(), None))]
    }

    /// Grammatical ways to finish an open bracket atom, as
    /// (token cost, resulting capacity). H additions and negative charges
    /// only reduce headroom, so they never appear in a minimal completion.
    fn bracket_completions(&self, b: &super::state::BracketState) -> Vec<(u32, u8)> {
        if !self.options.bracket_close {
            return Vec::new();
        }
        let table_best = |q: i8, fixed: Option<&str>| -> Option<u8> {
            let t = ValenceTable::default();
            match fixed {
                Some(sym) => t.charged_capacity(sym, q),
                None => self
                    .options
                    .symbols
                    .iter()
                    .filter_map(|s| t.charged_capacity(s, q))
                    .max(),
            }
        };
        let mut out = Vec::new();
        let sym = b.symbol.as_deref();
        match b.pos {
            BracketPos::ExpectSymbol => {
                if self.options.symbols.is_empty() {
                    return Vec::new();
                }
                if let Some(c) = table_best(0, None) {
                    out.push((2, c));
                }
                if self.options.plus {
                    if let Some(c) = table_best(1, None) {
                        out.push((3, c));
                    }
                    if let Some(&d) = self.options.digits.first() {
                        if let Some(c) = table_best(d as i8, None) {
                            out.push((4, c));
                        }
                    }
                }
            }
            BracketPos::AfterSymbol
            | BracketPos::Chiral1
            | BracketPos::Chiral2
            | BracketPos::AfterH
            | BracketPos::AfterHCount => {
                if let Some(c) = table_best(0, sym) {
                    out.push((1, c));
                }
                if self.options.plus {
                    if let Some(c) = table_best(1, sym) {
                        out.push((2, c));
                    }
                    if let Some(&d) = self.options.digits.first() {
                        if let Some(c) = table_best(d as i8, sym) {
                            out.push((3, c));
                        }
                    }
                }
            }
            BracketPos::ChargeSign => {
                if let Some(c) = table_best(b.charge, sym) {
                    out.push((1, c));
                }
                for &d in &self.options.digits {
                    if let Some(c) = table_best(b.charge * d as i8, sym) {
                        out.push((2, c));
                        break;
                    }
                }
            }
            BracketPos::ChargeCount => {
                if let Some(c) = table_best(b.charge, sym) {
                    out.push((1, c));
                }
            }
        }
        out
    }

    /// Dijkstra distance from `state` to any goal configuration. Move costs
    /// are small integers, so a bucket queue suffices.
    fn min_cost(&self, state: CompletionState) -> u32 {
        if let Some(&d) = self.memo.lock().unwrap().get(&state) {
            return d;
        }
        let max_move = self
            .options
            .atom_options
            .iter()
            .map(|&(c, _)| c)
            .max()
            .unwrap_or(1) as usize;
        let mut dist: HashMap<CompletionState, u32> = HashMap::new();
        let mut buckets: Vec<VecDeque<CompletionState>> = vec![VecDeque::new()];
        dist.insert(state.clone(), 0);
        buckets[0].push_back(state.clone());
        let mut answer = INFINITE;
        let mut cost = 0usize;
        'outer: while cost < buckets.len() {
            while let Some(s) = buckets[cost].pop_front() {
                if dist.get(&s) != Some(&(cost as u32)) {
                    continue; // stale queue entry
                }
                if s.is_goal() {
                    answer = cost as u32;
                    break 'outer;
                }
                for (mc, next) in self.moves(&s) {
                    let nd = cost as u32 + mc;
                    if dist.get(&next).is_none_or(|&d| d > nd) {
                        dist.insert(next.clone(), nd);
                        while buckets.len() <= cost + max_move {
                            buckets.push(VecDeque::new());
                        }
                        buckets[nd as usize].push_back(next);
                    }
                }
            }
            cost += 1;
        }
        self.memo.lock().unwrap().insert(state, answer);
        answer
    }

    fn moves(&self, s: &CompletionState) -> Vec<(u32, CompletionState)> {
        let mut out = Vec::new();
        // append an atom
        for &(cost, cap) in &self.options.atom_options {
            match s.cur_spare {
                None => {
                    let mut n = s.clone();
                    n.cur_spare = Some(cap);
                    n.has_atom = true;
                    out.push((cost, n.canonical()));
                }
                Some(spare) if spare >= 1 && cap >= 1 => {
                    let mut n = s.clone();
                    n.cur_spare = Some(cap - 1);
                    n.innermost_empty = false;
                    for r in &mut n.rings {
                        if r.1 == OpenerRef::Cur {
                            r.1 = OpenerRef::Gone;
                        }
                    }
                    out.push((cost, n.canonical()));
                }
                _ => {}
            }
        }
        // close the innermost branch
        if self.options.close_paren && !s.stack.is_empty() && !s.innermost_empty {
            let mut n = s.clone();
            let parent = n.stack.pop().unwrap();
            let level = n.stack.len() as u8;
            for r in &mut n.rings {
                match r.1 {
                    OpenerRef::Cur => r.1 = OpenerRef::Gone,
                    OpenerRef::Level(l) if l == level => r.1 = OpenerRef::Cur,
                    _ => {}
                }
            }
            n.cur_spare = Some(parent);
            n.innermost_empty = false;
            out.push((1, n.canonical()));
        }
        // close an open ring on the current atom
        if let Some(spare) = s.cur_spare {
            let mut seen = HashSet::new();
            for (i, &(order, opener)) in s.rings.iter().enumerate() {
                if opener == OpenerRef::Cur || spare < order || !seen.insert((order, opener)) {
                    continue;
                }
                let mut n = s.clone();
                n.rings.remove(i);
                n.cur_spare = Some(spare - order);
                out.push((1, n.canonical()));
            }
        }
        out
    }
}

fn ref_of(ps: &PrefixState, opener: usize) -> OpenerRef {
    if Some(opener) == ps.cur {
        OpenerRef::Cur
    } else if let Some(i) = ps.branches.iter().position(|f| f.parent == opener) {
        OpenerRef::Level(i as u8)
    } else {
        OpenerRef::Gone
    }
}
