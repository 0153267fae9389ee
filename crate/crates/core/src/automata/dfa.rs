use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{validate_gfa, Gfa, Label, RawGfa, StateId, Symbol, Transition, Word};

/// Name of the empty subset.
pub const SINK_ID: &str = "{}";

/// A complete deterministic automaton produced by the subset construction.
///
/// State `0` is initial. Only subsets reachable from the initial one are built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Vec<Symbol>,
    subsets: Vec<BTreeSet<StateId>>,
    delta: Vec<Vec<usize>>,
    accepting: Vec<bool>,
}

impl Dfa {
    pub fn alphabet(&self) -> &[Symbol] {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn subset(&self, i: usize) -> &BTreeSet<StateId> {
        &self.subsets[i]
    }

    /// `{a,b}` style name of state `i`.
    pub fn name(&self, i: usize) -> String {
        let parts: Vec<&str> = self.subsets[i].iter().map(String::as_str).collect();
        format!("{{{}}}", parts.join(","))
    }

    pub fn next(&self, i: usize, symbol: usize) -> usize {
        self.delta[i][symbol]
    }

    pub fn is_accepting(&self, i: usize) -> bool {
        self.accepting[i]
    }

    pub fn accepts(&self, w: &Word) -> bool {
        let mut q = 0;
        for s in w.symbols() {
            match self.alphabet.binary_search(s) {
                Ok(i) => q = self.delta[q][i],
                Err(_) => return false,
            }
        }
        self.accepting[q]
    }

    /// The same automaton as a GFA: states `d0, d1, ...` and an `eps` edge
    /// from each accepting state to a fresh final state `1`.
    pub fn to_gfa(&self) -> Gfa {
        let name = |i: usize| format!("d{i}");
        let mut transitions = Vec::new();
        for (i, row) in self.delta.iter().enumerate() {
            for (a, &j) in self.alphabet.iter().zip(row) {
                transitions.push(Transition::new(name(i), Label::Sym(a.clone()), name(j)));
            }
            if self.accepting[i] {
                transitions.push(Transition::new(name(i), Label::Eps, "1"));
            }
        }
        validate_gfa(RawGfa {
            states: (0..self.len()).map(name).collect(),
            final_state: self.accepting.iter().any(|&b| b).then(|| "1".to_string()),
            alphabet: self.alphabet.clone(),
            transitions,
            initial: name(0),
        })
        .expect("a DFA is a GFA")
    }
}

/// Subset construction over `alphabet` (symbols of `g` outside it are ignored).
///
/// Subsets are eps-closed: they contain the final state whenever a member has
/// an eps edge, so a subset accepts iff it contains the final state.
pub fn determinize(g: &Gfa, alphabet: &BTreeSet<Symbol>) -> Dfa {
    let alphabet: Vec<Symbol> = alphabet.iter().cloned().collect();
    let adj = g.adjacency();
    let close = |mut set: BTreeSet<StateId>| {
        if let Some(fin) = g.final_state() {
            if set.iter().any(|q| g.has_eps_edge(q)) {
                set.insert(fin.clone());
            }
        }
        set
    };
    let start = close(BTreeSet::from([g.initial().clone()]));
    let mut index: BTreeMap<BTreeSet<StateId>, usize> = BTreeMap::from([(start.clone(), 0)]);
    let mut subsets = vec![start];
    let mut delta: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < subsets.len() {
        let mut row = Vec::with_capacity(alphabet.len());
        for a in &alphabet {
            let succ: BTreeSet<StateId> = subsets[i]
                .iter()
                .flat_map(|q| adj.get(q.as_str()).into_iter().flatten())
                .filter(|t| t.label.symbol() == Some(a))
                .map(|t| t.target.clone())
                .collect();
            let succ = close(succ);
            let j = match index.get(&succ) {
                Some(&j) => j,
                None => {
                    index.insert(succ.clone(), subsets.len());
                    subsets.push(succ);
                    subsets.len() - 1
                }
            };
            row.push(j);
        }
        delta.push(row);
        i += 1;
    }
    let accepting = subsets.iter().map(|s| g.final_state().is_some_and(|f| s.contains(f))).collect();
    Dfa { alphabet, subsets, delta, accepting }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent,
    /// A shortest, then lexicographically least, word in exactly one language.
    Inequivalent(Word),
}

impl Equivalence {
    pub fn holds(&self) -> bool {
        matches!(self, Equivalence::Equivalent)
    }

    pub fn counterexample(&self) -> Option<&Word> {
        match self {
            Equivalence::Equivalent => None,
            Equivalence::Inequivalent(w) => Some(w),
        }
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

/// Decides `L[g1] = L[g2]` over the union of both alphabets.
pub fn lang_equiv(g1: &Gfa, g2: &Gfa) -> Equivalence {
    let alphabet: BTreeSet<Symbol> = g1.alphabet().union(g2.alphabet()).cloned().collect();
    let d1 = determinize(g1, &alphabet);
    let d2 = determinize(g2, &alphabet);
    if hopcroft_karp(&d1, &d2) {
        Equivalence::Equivalent
    } else {
        Equivalence::Inequivalent(shortest_difference(&d1, &d2).expect("inequivalent DFAs differ on some word"))
    }
}

/// Hopcroft–Karp union-find check on the disjoint union of two DFAs over the same alphabet.
fn hopcroft_karp(d1: &Dfa, d2: &Dfa) -> bool {
    let off = d1.len();
    let mut uf = UnionFind((0..off + d2.len()).collect());
    let mut stack = vec![(0usize, 0usize)];
    uf.union(0, off);
    while let Some((p, q)) = stack.pop() {
        if d1.accepting[p] != d2.accepting[q] {
            return false;
        }
        for s in 0..d1.alphabet.len() {
            let (p2, q2) = (d1.delta[p][s], d2.delta[q][s]);
            if uf.union(p2, off + q2) {
                stack.push((p2, q2));
            }
        }
    }
    true
}

/// BFS over the product with symbols tried in order, so the first mismatch
/// found is shortest and lexicographically least.
fn shortest_difference(d1: &Dfa, d2: &Dfa) -> Option<Word> {
    let mut parent: BTreeMap<(usize, usize), Option<((usize, usize), usize)>> = BTreeMap::new();
    parent.insert((0, 0), None);
    let mut queue = VecDeque::from([(0usize, 0usize)]);
    while let Some((p, q)) = queue.pop_front() {
        if d1.accepting[p] != d2.accepting[q] {
            let mut syms = Vec::new();
            let mut cur = (p, q);
            while let Some(Some((prev, s))) = parent.get(&cur) {
                syms.push(d1.alphabet[*s].clone());
                cur = *prev;
            }
            syms.reverse();
            return Some(Word(syms));
        }
        for s in 0..d1.alphabet.len() {
            let next = (d1.delta[p][s], d2.delta[q][s]);
            if !parent.contains_key(&next) {
                parent.insert(next, Some(((p, q), s)));
                queue.push_back(next);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn dfa_as_gfa_keeps_the_language() {
        for g in [a_plus_b_plus(), a_star_b_star(), a_plus()] {
            let d = determinize(&g, g.alphabet()).to_gfa();
            assert!(lang_equiv(&g, &d).holds());
            assert!(d.is_semi_deterministic(g.alphabet()));
        }
    }

    #[test]
    fn a_star_b_star_presentations_are_equivalent() {
        assert_eq!(lang_equiv(&a_star_b_star(), &a_star_b_star_det()), Equivalence::Equivalent);
        assert_eq!(lang_equiv(&a_plus_b_plus(), &a_plus_b_plus()), Equivalence::Equivalent);
    }

    #[test]
    fn a_star_and_a_plus_differ_on_the_empty_word() {
        assert_eq!(lang_equiv(&a_star(), &a_plus()), Equivalence::Inequivalent(Word::empty()));
    }

    #[test]
    fn counterexample_is_shortlex_least() {
        // a+b+ vs a*b*: ε is in only one of them
        assert_eq!(lang_equiv(&a_plus_b_plus(), &a_star_b_star()).counterexample(), Some(&Word::empty()));
        let ab = gfa(&["p", "q"], Some("1"), &["a", "b"], &[("p", "a", "q"), ("q", "b", "1")], "p");
        let ba = gfa(&["p", "q"], Some("1"), &["a", "b"], &[("p", "b", "q"), ("q", "a", "1")], "p");
        assert_eq!(lang_equiv(&ab, &ba).counterexample(), Some(&Word::from_chars("ab")));
    }

    #[test]
    fn subset_names_are_sorted_and_sink_is_empty_braces() {
        let ab: BTreeSet<Symbol> = ["a", "b"].into_iter().map(Symbol::new).collect();
        let d = determinize(&a_plus_b_plus(), &ab);
        let names: BTreeSet<String> = (0..d.len()).map(|i| d.name(i)).collect();
        assert!(names.contains("{A}"));
        assert!(names.contains("{A,B}"));
        assert!(names.contains(SINK_ID));
        for i in 0..d.len() {
            for s in 0..2 {
                assert!(d.next(i, s) < d.len());
            }
        }
    }
}
