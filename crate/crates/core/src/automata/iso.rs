use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{Gfa, Label, StateId};

struct View<'a> {
    order: Vec<&'a str>,
    /// labels on edges `i -> j`
    between: BTreeMap<(usize, usize), Vec<&'a Label>>,
    signature: Vec<(bool, bool, Vec<&'a Label>, Vec<&'a Label>)>,
}

impl<'a> View<'a> {
    fn new(g: &'a Gfa) -> Self {
        // BFS order from the initial state over undirected adjacency keeps
        // every state after one of its neighbours, which prunes early.
        let mut nbrs: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
        for t in g.transitions() {
            nbrs.entry(&t.source).or_default().insert(&t.target);
            nbrs.entry(&t.target).or_default().insert(&t.source);
        }
        let mut order: Vec<&str> = Vec::new();
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        let all: Vec<&str> = std::iter::once(g.initial().as_str())
            .chain(g.all_states().map(String::as_str))
            .collect();
        for root in all {
            if !seen.insert(root) {
                continue;
            }
            let mut queue = VecDeque::from([root]);
            while let Some(q) = queue.pop_front() {
                order.push(q);
                for n in nbrs.get(q).into_iter().flatten() {
                    if seen.insert(n) {
                        queue.push_back(n);
                    }
                }
            }
        }
        let pos: BTreeMap<&str, usize> = order.iter().enumerate().map(|(i, q)| (*q, i)).collect();
        let mut between: BTreeMap<(usize, usize), Vec<&Label>> = BTreeMap::new();
        let mut outs: Vec<Vec<&Label>> = vec![Vec::new(); order.len()];
        let mut ins: Vec<Vec<&Label>> = vec![Vec::new(); order.len()];
        for t in g.transitions() {
            let (s, d) = (pos[t.source.as_str()], pos[t.target.as_str()]);
            between.entry((s, d)).or_default().push(&t.label);
            outs[s].push(&t.label);
            ins[d].push(&t.label);
        }
        for v in between.values_mut() {
            v.sort();
        }
        let signature = order
            .iter()
            .enumerate()
            .map(|(i, q)| {
                let mut o = std::mem::take(&mut outs[i]);
                let mut n = std::mem::take(&mut ins[i]);
                o.sort();
                n.sort();
                (g.is_final(q), *q == g.initial(), o, n)
            })
            .collect();
        View { order, between, signature }
    }

    fn labels(&self, i: usize, j: usize) -> &[&'a Label] {
        self.between.get(&(i, j)).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// A type-, transition- and initial-preserving bijection from `g1` to `g2`, if one exists.
///
/// Alphabets are not compared: only the labelled transition structure matters.
pub fn isomorphic(g1: &Gfa, g2: &Gfa) -> Option<BTreeMap<StateId, StateId>> {
    let (v1, v2) = (View::new(g1), View::new(g2));
    if v1.order.len() != v2.order.len()
        || g1.transitions().len() != g2.transitions().len()
        || g1.final_state().is_some() != g2.final_state().is_some()
    {
        return None;
    }
    let mut sig1: Vec<_> = v1.signature.clone();
    let mut sig2: Vec<_> = v2.signature.clone();
    sig1.sort();
    sig2.sort();
    if sig1 != sig2 {
        return None;
    }
    let n = v1.order.len();
    let mut map: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    if search(&v1, &v2, &mut map, &mut used) {
        Some((0..n).map(|i| (v1.order[i].to_string(), v2.order[map[i]].to_string())).collect())
    } else {
        None
    }
}

fn search(v1: &View, v2: &View, map: &mut Vec<usize>, used: &mut [bool]) -> bool {
    let i = map.len();
    if i == v1.order.len() {
        return true;
    }
    for j in 0..v2.order.len() {
        if used[j] || v1.signature[i] != v2.signature[j] {
            continue;
        }
        if v1.labels(i, i) != v2.labels(j, j) {
            continue;
        }
        let consistent = (0..i).all(|k| {
            let m = map[k];
            v1.labels(i, k) == v2.labels(j, m) && v1.labels(k, i) == v2.labels(m, j)
        });
        if !consistent {
            continue;
        }
        map.push(j);
        used[j] = true;
        if search(v1, v2, map, used) {
            return true;
        }
        map.pop();
        used[j] = false;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn renaming_is_found() {
        let g = a_star_b_star_det();
        let h = g.rename_states(|q| format!("s{q}"));
        let f = isomorphic(&g, &h).unwrap();
        for (k, v) in &f {
            assert_eq!(*v, format!("s{k}"));
        }
    }

    #[test]
    fn a_star_b_star_presentations_are_not_isomorphic() {
        assert!(isomorphic(&a_star_b_star(), &a_star_b_star_det()).is_none());
    }

    #[test]
    fn initial_state_is_preserved() {
        let g = gfa(&["p", "q"], None, &["a"], &[("p", "a", "q"), ("q", "a", "p")], "p");
        let h = gfa(&["p", "q"], None, &["a"], &[("p", "a", "q"), ("q", "a", "p")], "q");
        let f = isomorphic(&g, &h).unwrap();
        assert_eq!(f["p"], "q");
    }
}
