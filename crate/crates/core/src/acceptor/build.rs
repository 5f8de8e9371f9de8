//! The γ-canonical word acceptor: a tree of lines with loops at the ends of unbounded lines.
//!
//! Starting from the start state, every newly added state classifies each letter other than
//! the label of its incoming arrow. A letter that may repeat without bound grows a line of
//! `γ` states ending in a loop; a letter allowed `k < γ` more times grows a line of `k`
//! states whose last state sends the letter to failure; any other letter goes to failure
//! directly. All states except failure accept.

use std::collections::VecDeque;

use serde::Serialize;

use super::relations::{LetterClass, NormalForm, ShortlexRules};
use crate::abelian::{Letter, OrderedAlphabet, Word};
use crate::error::{Error, Result};

const FAILURE: u32 = u32::MAX;
const UNSET: u32 = u32::MAX - 1;

/// Hard limit on the number of states built.
pub const MAX_STATES: usize = 20_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Target {
    State(usize),
    Failure,
}

#[derive(Clone, Debug, Serialize)]
pub struct AcceptorState {
    /// Source state and label of the unique incoming arrow; `None` for the start state.
    pub incoming: Option<(usize, Letter)>,
    pub depth: usize,
    pub loop_letter: Option<Letter>,
    /// Exponents of the prefix leading here, capped at γ.
    pub prefix: NormalForm,
}

#[derive(Clone, Debug)]
pub struct Acceptor {
    alphabet: OrderedAlphabet,
    gamma: usize,
    states: Vec<AcceptorState>,
    transitions: Vec<u32>,
}

/// Shape of the unique path from the start state to a state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StatePathProfile {
    pub state: usize,
    /// Length `l` of the path.
    pub path_length: usize,
    /// `k'`: one more than the number of looped states on the path.
    pub loop_count_plus_one: usize,
    /// Depths (distances from the start state) of looped states on the path.
    pub loop_positions: Vec<usize>,
}

impl StatePathProfile {
    pub fn loops(&self) -> usize {
        self.loop_count_plus_one - 1
    }
}

/// Sparse transition matrix over accept states: `(i, j)` counts arrows and loops `i → j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionMatrix {
    rows: Vec<Vec<(usize, u32)>>,
    failure_arrows: Vec<u32>,
}

impl TransitionMatrix {
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &[(usize, u32)] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.rows[i]
            .iter()
            .find(|(c, _)| *c == j)
            .map(|(_, v)| *v)
            .unwrap_or(0)
    }

    pub fn row_sum(&self, i: usize) -> u32 {
        self.rows[i].iter().map(|(_, v)| v).sum()
    }

    /// Arrows from accept state `i` into the failure state.
    pub fn failure_arrows(&self, i: usize) -> u32 {
        self.failure_arrows[i]
    }

    pub fn to_dense(&self) -> Vec<Vec<u32>> {
        let n = self.dim();
        let mut out = vec![vec![0; n]; n];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                out[i][j] = v;
            }
        }
        out
    }
}

impl Acceptor {
    /// Builds the γ-canonical acceptor. `gamma` must exceed `mu` and reach the rules'
    /// saturation exponent so that capped prefixes classify exactly.
    pub fn build(
        alphabet: &OrderedAlphabet,
        rules: &ShortlexRules,
        mu: usize,
        gamma: usize,
    ) -> Result<Self> {
        if gamma <= mu {
            return Err(Error::GammaTooSmall {
                gamma,
                reason: format!("must exceed mu = {mu}"),
            });
        }
        if (gamma as u64) < rules.saturation() as u64 {
            return Err(Error::GammaTooSmall {
                gamma,
                reason: format!(
                    "must be at least the largest relation exponent {}",
                    rules.saturation()
                ),
            });
        }
        let n = alphabet.len();
        let mut acc = Acceptor {
            alphabet: alphabet.clone(),
            gamma,
            states: Vec::new(),
            transitions: Vec::new(),
        };
        acc.push_state(AcceptorState {
            incoming: None,
            depth: 0,
            loop_letter: None,
            prefix: NormalForm::zero(n),
        })?;

        let mut queue = VecDeque::from([0usize]);
        while let Some(s) = queue.pop_front() {
            let alpha = acc.states[s].incoming.map(|(_, l)| l);
            for x in alphabet.letters() {
                if Some(x) == alpha {
                    continue;
                }
                let prefix = acc.states[s].prefix.clone();
                match rules.classify_letter(&prefix, x) {
                    LetterClass::Never => acc.set(s, x, FAILURE),
                    LetterClass::Infinite => {
                        let end = acc.grow_line(s, x, gamma, &mut queue)?;
                        acc.set(end, x, end as u32);
                        acc.states[end].loop_letter = Some(x);
                    }
                    LetterClass::Finite(k) => {
                        let end = acc.grow_line(s, x, k as usize, &mut queue)?;
                        acc.set(end, x, FAILURE);
                    }
                }
            }
        }
        debug_assert!(!acc.transitions.contains(&UNSET));
        Ok(acc)
    }

    fn push_state(&mut self, st: AcceptorState) -> Result<usize> {
        if self.states.len() >= MAX_STATES {
            return Err(Error::CapExceeded(format!(
                "acceptor exceeds {MAX_STATES} states"
            )));
        }
        self.states.push(st);
        self.transitions
            .extend(std::iter::repeat_n(UNSET, self.alphabet.len()));
        Ok(self.states.len() - 1)
    }

    fn set(&mut self, s: usize, x: Letter, t: u32) {
        let n = self.alphabet.len();
        debug_assert_eq!(self.transitions[s * n + x.index()], UNSET);
        self.transitions[s * n + x.index()] = t;
    }

    fn grow_line(
        &mut self,
        root: usize,
        x: Letter,
        length: usize,
        queue: &mut VecDeque<usize>,
    ) -> Result<usize> {
        let mut cur = root;
        for step in 1..=length {
            let st = AcceptorState {
                incoming: Some((cur, x)),
                depth: self.states[cur].depth + 1,
                loop_letter: None,
                prefix: self.states[root].prefix.with_added(x, step as u32),
            };
            let next = self.push_state(st)?;
            self.set(cur, x, next as u32);
            queue.push_back(next);
            cur = next;
        }
        Ok(cur)
    }

    pub fn alphabet(&self) -> &OrderedAlphabet {
        &self.alphabet
    }

    pub fn gamma(&self) -> usize {
        self.gamma
    }

    /// Number of accept states; the failure state is not counted.
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn start(&self) -> usize {
        0
    }

    pub fn state(&self, i: usize) -> &AcceptorState {
        &self.states[i]
    }

    pub fn states(&self) -> &[AcceptorState] {
        &self.states
    }

    pub fn step(&self, s: usize, x: Letter) -> Target {
        match self.transitions[s * self.alphabet.len() + x.index()] {
            FAILURE => Target::Failure,
            t => Target::State(t as usize),
        }
    }

    /// Final state of `w`, or `Failure` if the walk falls into the failure state.
    pub fn run(&self, w: &Word) -> Target {
        let mut s = self.start();
        for &x in w.letters() {
            match self.step(s, x) {
                Target::State(t) => s = t,
                Target::Failure => return Target::Failure,
            }
        }
        Target::State(s)
    }

    pub fn accepts(&self, w: &Word) -> bool {
        matches!(self.run(w), Target::State(_))
    }

    pub fn transition_matrix(&self) -> TransitionMatrix {
        let n = self.alphabet.len();
        let mut rows = Vec::with_capacity(self.states.len());
        let mut failure_arrows = Vec::with_capacity(self.states.len());
        for s in 0..self.states.len() {
            let mut row: Vec<(usize, u32)> = Vec::new();
            let mut fail = 0;
            for &t in &self.transitions[s * n..(s + 1) * n] {
                if t == FAILURE {
                    fail += 1;
                    continue;
                }
                match row.iter_mut().find(|(j, _)| *j == t as usize) {
                    Some((_, c)) => *c += 1,
                    None => row.push((t as usize, 1)),
                }
            }
            row.sort_unstable();
            rows.push(row);
            failure_arrows.push(fail);
        }
        TransitionMatrix {
            rows,
            failure_arrows,
        }
    }

    /// Labels along the unique tree path from the start state.
    pub fn path_word(&self, k: usize) -> Word {
        let mut rev = Vec::new();
        let mut cur = k;
        while let Some((p, l)) = self.states[cur].incoming {
            rev.push(l);
            cur = p;
        }
        rev.reverse();
        Word::from(rev)
    }

    pub fn path_profile(&self, k: usize) -> StatePathProfile {
        let mut loop_positions = Vec::new();
        let mut cur = k;
        loop {
            let st = &self.states[cur];
            if st.loop_letter.is_some() {
                loop_positions.push(st.depth);
            }
            match st.incoming {
                Some((p, _)) => cur = p,
                None => break,
            }
        }
        loop_positions.reverse();
        StatePathProfile {
            state: k,
            path_length: self.states[k].depth,
            loop_count_plus_one: loop_positions.len() + 1,
            loop_positions,
        }
    }

    /// A word ending in state `k` of length at least `min_len`: the tree path with its loops
    /// traversed extra times in turn. `None` when the path carries no loop and is too short.
    pub fn pumped_word(&self, k: usize, min_len: usize) -> Option<Word> {
        let path = self.path_word(k);
        let loops = self.path_profile(k).loop_positions;
        let extra = min_len.saturating_sub(path.len());
        if extra > 0 && loops.is_empty() {
            return None;
        }
        let mut reps = vec![0usize; loops.len()];
        for i in 0..extra {
            reps[i % loops.len()] += 1;
        }
        let mut out = Vec::with_capacity(path.len() + extra);
        let mut next_loop = 0;
        for (pos, &l) in path.letters().iter().enumerate() {
            out.push(l);
            if next_loop < loops.len() && loops[next_loop] == pos + 1 {
                out.extend(std::iter::repeat_n(l, reps[next_loop]));
                next_loop += 1;
            }
        }
        Some(Word::from(out))
    }

    /// Checks the structural invariants: one incoming arrow per non-start state, at most one
    /// loop, every letter covered exactly once at every state, loops only where recorded.
    pub fn check_structure(&self) -> Result<()> {
        let n = self.alphabet.len();
        let mut incoming = vec![0usize; self.states.len()];
        for s in 0..self.states.len() {
            let mut loops = 0;
            for x in self.alphabet.letters() {
                match self.transitions[s * n + x.index()] {
                    UNSET => {
                        return Err(Error::Inconsistent(format!(
                            "state {s} has no transition on `{}`",
                            self.alphabet.symbol(x)
                        )))
                    }
                    FAILURE => {}
                    t if t as usize == s => {
                        loops += 1;
                        if self.states[s].loop_letter != Some(x) {
                            return Err(Error::Inconsistent(format!("unexpected loop at state {s}")));
                        }
                    }
                    t => {
                        incoming[t as usize] += 1;
                        if self.states[t as usize].incoming != Some((s, x)) {
                            return Err(Error::Inconsistent(format!(
                                "arrow {s} -> {t} disagrees with the tree"
                            )));
                        }
                    }
                }
            }
            if loops > 1 {
                return Err(Error::Inconsistent(format!("state {s} has {loops} loops")));
            }
        }
        for (s, &c) in incoming.iter().enumerate() {
            let want = usize::from(s != 0);
            if c != want {
                return Err(Error::Inconsistent(format!(
                    "state {s} has {c} incoming arrows"
                )));
            }
        }
        Ok(())
    }

    /// Redirects one transition. Exists so verification tooling can be tested against a
    /// deliberately broken automaton.
    #[doc(hidden)]
    pub fn corrupt_transition(&mut self, s: usize, x: Letter, target: Target) {
        let n = self.alphabet.len();
        self.transitions[s * n + x.index()] = match target {
            Target::State(t) => t as u32,
            Target::Failure => FAILURE,
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::{AbelianStructure, GroupSpec};
    use crate::acceptor::relations::minimal_relations;

    fn build(text: &str, gamma: usize) -> (GroupSpec, Acceptor) {
        let spec = GroupSpec::parse(text).unwrap();
        let st = AbelianStructure::derive(&spec).unwrap();
        let rules = ShortlexRules::new(minimal_relations(&st, spec.mu() as u32 + 1).unwrap());
        let acc = Acceptor::build(&spec.alphabet, &rules, spec.mu(), gamma).unwrap();
        (spec, acc)
    }

    #[test]
    fn z_with_gamma_two() {
        let (spec, acc) = build("gens a\ninv a~A", 2);
        assert_eq!(acc.num_states(), 5);
        acc.check_structure().unwrap();
        let m = acc.transition_matrix();
        // 1-based: A[1,2] = A[1,4] = 1, loops at 3 and 5.
        assert_eq!(m.get(0, 1), 1);
        assert_eq!(m.get(0, 3), 1);
        assert_eq!(m.get(2, 2), 1);
        assert_eq!(m.get(4, 4), 1);
        for i in 0..m.dim() {
            assert_eq!(m.row_sum(i) + m.failure_arrows(i), 2);
        }
        let p = acc.path_profile(2);
        assert_eq!((p.path_length, p.loop_count_plus_one), (2, 2));
        let p = acc.path_profile(0);
        assert_eq!((p.path_length, p.loop_count_plus_one), (0, 1));
        let w = |s: &str| spec.alphabet.parse_word(s).unwrap();
        assert!(!acc.accepts(&w("aA")));
        assert_eq!(acc.run(&Word::empty()), Target::State(0));
        assert_eq!(acc.run(&w("aaaaa")), Target::State(2));
    }

    #[test]
    fn gamma_must_exceed_mu() {
        let spec = GroupSpec::parse("gens a,b\ninv a~A,b~B\nrel abAB").unwrap();
        let st = AbelianStructure::derive(&spec).unwrap();
        let rules = ShortlexRules::new(minimal_relations(&st, 5).unwrap());
        assert!(matches!(
            Acceptor::build(&spec.alphabet, &rules, 4, 4),
            Err(Error::GammaTooSmall { .. })
        ));
    }

    #[test]
    fn z2_runs() {
        let (spec, acc) = build("gens a,b\ninv a~A,b~B\nrel abAB", 5);
        acc.check_structure().unwrap();
        let w = |s: &str| spec.alphabet.parse_word(s).unwrap();
        let t = acc.run(&w("aab"));
        let Target::State(k) = t else { panic!("aab rejected") };
        assert_eq!(acc.path_word(k), w("aab"));
        assert_eq!(acc.run(&w("ba")), Target::Failure);
        assert_eq!(acc.run(&w("aA")), Target::Failure);
        for s in 0..acc.num_states() {
            assert!(acc.path_profile(s).loops() <= 2);
        }
    }

    #[test]
    fn line_and_plane_shape() {
        // a < A < b < B < c < C with a² = b: the a-line has one step, b and c lines are long.
        let (spec, acc) = build("gens a,b,c\ninv a~A,b~B,c~C\nrel aaB\nrel acAC", 8);
        acc.check_structure().unwrap();
        let w = |s: &str| spec.alphabet.parse_word(s).unwrap();
        assert!(acc.accepts(&w("a")));
        assert!(!acc.accepts(&w("aa")));
        assert!(acc.accepts(&w("bbbbbbbbbbbb")));
        assert!(acc.accepts(&w("accccccccccc")));
        assert!(acc.accepts(&w("abcc")));
        for s in 0..acc.num_states() {
            assert!(acc.path_profile(s).loops() <= 2);
        }
    }

    #[test]
    fn pumped_words_reach_their_state() {
        let (_, acc) = build("gens a,b\ninv a~A,b~B\nrel abAB", 5);
        for k in 0..acc.num_states() {
            let profile = acc.path_profile(k);
            match acc.pumped_word(k, 23) {
                Some(w) => {
                    assert!(profile.loops() > 0 || w.len() == profile.path_length);
                    assert!(w.len() >= 23 || profile.loops() == 0);
                    assert_eq!(acc.run(&w), Target::State(k));
                }
                None => assert_eq!(profile.loops(), 0),
            }
        }
    }
}
