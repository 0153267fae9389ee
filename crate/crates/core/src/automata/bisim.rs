use std::collections::{BTreeMap, BTreeSet};

use super::{Gfa, Label};

/// Decides `q01 ≃ q02` by partition refinement over the disjoint union.
///
/// `eps` is treated as an ordinary label; final and non-final states start in
/// separate blocks.
pub fn bisimilar(g1: &Gfa, g2: &Gfa) -> bool {
    let mut ids: Vec<(usize, &str)> = Vec::new();
    for (side, g) in [g1, g2].into_iter().enumerate() {
        ids.extend(g.all_states().map(|q| (side, q.as_str())));
    }
    let index: BTreeMap<(usize, &str), usize> = ids.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let mut edges: Vec<Vec<(&Label, usize)>> = vec![Vec::new(); ids.len()];
    for (side, g) in [g1, g2].into_iter().enumerate() {
        for t in g.transitions() {
            let s = index[&(side, t.source.as_str())];
            edges[s].push((&t.label, index[&(side, t.target.as_str())]));
        }
    }
    let is_final = |i: usize| {
        let (side, q) = ids[i];
        [g1, g2][side].is_final(q)
    };
    let mut block: Vec<usize> = (0..ids.len()).map(|i| usize::from(is_final(i))).collect();
    let mut count = block.iter().collect::<BTreeSet<_>>().len();
    loop {
        let mut sigs: BTreeMap<(usize, BTreeSet<(&Label, usize)>), usize> = BTreeMap::new();
        let next: Vec<usize> = (0..ids.len())
            .map(|i| {
                let sig: BTreeSet<(&Label, usize)> = edges[i].iter().map(|&(l, t)| (l, block[t])).collect();
                let n = sigs.len();
                *sigs.entry((block[i], sig)).or_insert(n)
            })
            .collect();
        let new_count = sigs.len();
        block = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }
    block[index[&(0, g1.initial().as_str())]] == block[index[&(1, g2.initial().as_str())]]
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::*;
    use super::*;

    #[test]
    fn q1_and_q3_are_not_bisimilar() {
        let l = a_star_b_star().with_initial("q1").unwrap();
        let r = a_star_b_star_det().with_initial("q3").unwrap();
        assert!(!bisimilar(&l, &r));
        assert!(!bisimilar(&a_star_b_star(), &a_star_b_star_det()));
    }

    #[test]
    fn renamed_copy_is_bisimilar() {
        let g = a_star_b_star_det();
        let h = g.rename_states(|q| format!("x_{q}"));
        assert!(bisimilar(&g, &h));
    }

    #[test]
    fn duplicated_branches_are_bisimilar() {
        let one = gfa(&["p"], Some("1"), &["a"], &[("p", "a", "1")], "p");
        let two = gfa(&["p", "q"], Some("1"), &["a"], &[("p", "a", "1"), ("p", "a", "q"), ("q", "eps", "1")], "p");
        assert!(!bisimilar(&one, &two));
        let three = gfa(&["p", "q", "r"], None, &["a"], &[("p", "a", "q"), ("p", "a", "r"), ("q", "a", "q"), ("r", "a", "r")], "p");
        let four = gfa(&["p"], None, &["a"], &[("p", "a", "p")], "p");
        assert!(bisimilar(&three, &four));
    }
}
