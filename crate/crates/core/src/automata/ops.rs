use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{Gfa, GfaError, Label, StateId, Symbol, Transition, Word};

/// `reach(r)`: every state reachable from `r`, including `r`.
pub fn reach(g: &Gfa, r: &str) -> Result<BTreeSet<StateId>, GfaError> {
    if !g.contains_state(r) {
        return Err(GfaError::UnknownState(r.to_string()));
    }
    let adj = g.adjacency();
    let mut seen = BTreeSet::from([r.to_string()]);
    let mut queue = VecDeque::from([r]);
    while let Some(q) = queue.pop_front() {
        for t in adj.get(q).into_iter().flatten() {
            if seen.insert(t.target.clone()) {
                queue.push_back(&t.target);
            }
        }
    }
    Ok(seen)
}

/// Restricts `g` to the states reachable from its initial state.
pub fn reduce(g: &Gfa) -> Gfa {
    let keep = reach(g, g.initial()).expect("initial state exists");
    let mut raw = g.to_raw();
    raw.states.retain(|q| keep.contains(q));
    raw.final_state = raw.final_state.filter(|f| keep.contains(f));
    raw.transitions.retain(|t| keep.contains(&t.source));
    super::validate_gfa(raw).expect("restriction of a GFA is a GFA")
}

/// Pairs `(q, a)` with `q ⇒a 1` but no direct edge `q -a-> 1`.
pub(super) fn missing_saturation_edges(g: &Gfa) -> BTreeSet<(StateId, Symbol)> {
    let Some(fin) = g.final_state() else {
        return BTreeSet::new();
    };
    let with_eps: BTreeSet<&str> =
        g.transitions().iter().filter(|t| t.label.is_eps()).map(|t| t.source.as_str()).collect();
    let mut missing = BTreeSet::new();
    for t in g.transitions() {
        if let Label::Sym(a) = &t.label {
            if with_eps.contains(t.target.as_str()) {
                let direct = Transition::new(t.source.clone(), t.label.clone(), fin.clone());
                if !g.transitions().contains(&direct) {
                    missing.insert((t.source.clone(), a.clone()));
                }
            }
        }
    }
    missing
}

/// Adds `q -a-> 1` whenever `q -a-> q' -eps-> 1`. Identity without a final state.
pub fn saturate(g: &Gfa) -> Gfa {
    let missing = missing_saturation_edges(g);
    if missing.is_empty() {
        return g.clone();
    }
    let fin = g.final_state().expect("missing edges imply a final state").clone();
    let mut raw = g.to_raw();
    raw.transitions
        .extend(missing.into_iter().map(|(q, a)| Transition::new(q, Label::Sym(a), fin.clone())));
    super::validate_gfa(raw).expect("saturation keeps the GFA constraints")
}

/// Drops every `eps` edge not leaving the initial state. Requires a saturated input.
pub fn strip_epsilon(g: &Gfa) -> Result<Gfa, GfaError> {
    if let Some((q, a)) = missing_saturation_edges(g).into_iter().next() {
        return Err(GfaError::NotSaturated(q, a));
    }
    let mut raw = g.to_raw();
    let init = g.initial().clone();
    raw.transitions.retain(|t| !t.label.is_eps() || t.source == init);
    Ok(super::validate_gfa(raw).expect("removing edges keeps the GFA constraints"))
}

/// States reached from the initial state by reading `w` (no trailing eps step).
fn run<'a>(g: &'a Gfa, w: &Word) -> BTreeSet<&'a str> {
    let adj = g.adjacency();
    let mut current = BTreeSet::from([g.initial().as_str()]);
    for a in w.symbols() {
        let mut next = BTreeSet::new();
        for q in &current {
            for t in adj.get(q).into_iter().flatten() {
                if t.label.symbol() == Some(a) {
                    next.insert(t.target.as_str());
                }
            }
        }
        current = next;
    }
    current
}

/// `q0 ⇒w 1`.
pub fn accepts(g: &Gfa, w: &Word) -> bool {
    let Some(fin) = g.final_state() else {
        return false;
    };
    run(g, w).into_iter().any(|q| q == fin || g.has_eps_edge(q))
}

/// `L[g] ∩ A^{≤k}`, breadth first over sets of states.
pub fn language_up_to(g: &Gfa, k: usize) -> BTreeSet<Word> {
    words_reaching(g, k).remove(&Target::Final).unwrap_or_default()
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Target {
    Final,
    State(StateId),
}

/// For each state `r`, the words `w` with `|w| ≤ k` and `q0 ⇒w r`. The final
/// state is keyed as [`Target::Final`] and includes words ending in an eps step.
pub(crate) fn words_reaching(g: &Gfa, k: usize) -> BTreeMap<Target, BTreeSet<Word>> {
    let adj = g.adjacency();
    let mut out: BTreeMap<Target, BTreeSet<Word>> = BTreeMap::new();
    let mut frontier: BTreeMap<BTreeSet<&str>, Vec<Word>> = BTreeMap::new();
    frontier.insert(BTreeSet::from([g.initial().as_str()]), vec![Word::empty()]);
    let symbols: Vec<&Symbol> = g.alphabet().iter().collect();
    for len in 0..=k {
        let mut next: BTreeMap<BTreeSet<&str>, Vec<Word>> = BTreeMap::new();
        for (set, words) in &frontier {
            for q in set {
                let key = if g.is_final(q) { Target::Final } else { Target::State(q.to_string()) };
                out.entry(key).or_default().extend(words.iter().cloned());
                if g.has_eps_edge(q) {
                    out.entry(Target::Final).or_default().extend(words.iter().cloned());
                }
            }
            if len == k {
                continue;
            }
            for a in &symbols {
                let succ: BTreeSet<&str> = set
                    .iter()
                    .flat_map(|q| adj.get(q).into_iter().flatten())
                    .filter(|t| t.label.symbol() == Some(*a))
                    .map(|t| t.target.as_str())
                    .collect();
                if succ.is_empty() {
                    continue;
                }
                let entry = next.entry(succ).or_default();
                entry.extend(words.iter().map(|w| w.pushed(a)));
            }
        }
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    fn words(ws: &[&str]) -> BTreeSet<Word> {
        ws.iter().map(|w| Word::from_chars(w)).collect()
    }

    fn ids(xs: &[&str]) -> BTreeSet<StateId> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn reach_examples() {
        assert_eq!(reach(&a_plus_b_plus(), "A").unwrap(), ids(&["A", "B", "1"]));
        assert_eq!(reach(&a_plus_b_plus(), "1").unwrap(), ids(&["1"]));
        assert_eq!(reach(&a_star_b_star_det(), "q2").unwrap(), ids(&["q2", "q3", "q4", "r1"]));
        assert_eq!(reach(&a_plus_b_plus(), "Z"), Err(GfaError::UnknownState("Z".into())));
    }

    #[test]
    fn reduce_drops_an_unreachable_component() {
        let left = a_star_b_star().to_raw();
        let right = a_star_b_star_det().to_raw();
        let mut raw = left.clone();
        raw.states.extend(right.states.iter().cloned());
        raw.transitions.extend(
            right.transitions.iter().map(|t| {
                let tgt = if t.target == "r1" { "r0".to_string() } else { t.target.clone() };
                Transition::new(t.source.clone(), t.label.clone(), tgt)
            }),
        );
        let union = super::super::validate_gfa(raw).unwrap();
        assert!(!union.is_reduced());
        assert_eq!(reduce(&union), a_star_b_star());
        assert_eq!(reduce(&a_plus_b_plus()), a_plus_b_plus());
    }

    #[test]
    fn saturation_of_a_plus() {
        let s = saturate(&a_star());
        assert!(s.transitions().contains(&Transition::new("q0", Label::sym("a"), "1")));
        assert_eq!(s.transitions().len(), 3);
        assert!(s.is_saturated());

        let m = saturate(&a_plus());
        assert!(m.transitions().contains(&Transition::new("q1", Label::sym("a"), "1")));
        assert!(m.transitions().contains(&Transition::new("q2", Label::sym("a"), "1")));
        assert_eq!(m.transitions().len(), 5);

        assert_eq!(saturate(&a_plus_b_plus()), a_plus_b_plus());
    }

    #[test]
    fn strip_epsilon_of_a_plus() {
        let m = strip_epsilon(&saturate(&a_plus())).unwrap();
        assert!(!m.transitions().iter().any(|t| t.label.is_eps()));
        assert_eq!(m.transitions().len(), 4);
        assert!(m.is_epsilon_free());
        assert!(matches!(strip_epsilon(&a_plus()), Err(GfaError::NotSaturated(..))));
        let l = saturate(&a_star());
        assert_eq!(strip_epsilon(&l).unwrap(), l);
    }

    #[test]
    fn a_plus_b_plus_language() {
        let g = a_plus_b_plus();
        for w in ["ab", "aab", "abb"] {
            assert!(accepts(&g, &Word::from_chars(w)));
        }
        for w in ["", "a", "b", "ba"] {
            assert!(!accepts(&g, &Word::from_chars(w)));
        }
        assert_eq!(language_up_to(&g, 3), words(&["ab", "aab", "abb"]));
    }

    #[test]
    fn a_star_b_star_language() {
        assert_eq!(language_up_to(&a_star_b_star(), 2), words(&["", "a", "b", "aa", "ab", "bb"]));
        let dead = super::super::fixtures::gfa(&["q"], None, &["a"], &[("q", "a", "q")], "q");
        assert!(language_up_to(&dead, 5).is_empty());
    }
}
