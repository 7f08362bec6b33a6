use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::spec::BStateSystem;

pub type Permutation = Vec<usize>;

/// The group generated by the permutations `σ_j = S^c(·, j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StateGroupInfo {
    pub order: usize,
    pub is_abelian: bool,
    pub generators: Vec<Permutation>,
    /// Sorted; the identity comes first.
    pub elements: Vec<Permutation>,
}

/// `(p ∘ q)(s) = p(q(s))`.
pub fn compose(p: &[usize], q: &[usize]) -> Permutation {
    q.iter().map(|&s| p[s]).collect()
}

/// Closure of the `σ_j` under composition, or `None` when some `σ_j` is not a bijection.
pub fn state_group(system: &BStateSystem) -> Option<StateGroupInfo> {
    if !system.is_invertible() {
        return None;
    }
    let n = system.state_count();
    let generators: Vec<Permutation> =
        (0..system.branching()).map(|j| (0..n).map(|s| system.child_state(s, j)).collect()).collect();
    let id: Permutation = (0..n).collect();
    let mut seen = BTreeSet::from([id.clone()]);
    let mut q = VecDeque::from([id]);
    while let Some(p) = q.pop_front() {
        for g in &generators {
            let c = compose(g, &p);
            if seen.insert(c.clone()) {
                q.push_back(c);
            }
        }
    }
    let elements: Vec<Permutation> = seen.into_iter().collect();
    let is_abelian = generators.iter().all(|a| generators.iter().all(|b| compose(a, b) == compose(b, a)));
    Some(StateGroupInfo { order: elements.len(), is_abelian, generators, elements })
}

/// Cycle notation such as `(HR)(AB)`; labels longer than one character are space separated.
pub fn cycle_notation(p: &[usize], labels: &[String]) -> String {
    let sep = if labels.iter().all(|l| l.chars().count() == 1) { "" } else { " " };
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cyc = Vec::new();
        let mut s = start;
        while !seen[s] {
            seen[s] = true;
            cyc.push(labels[s].as_str());
            s = p[s];
        }
        out.push('(');
        out.push_str(&cyc.join(sep));
        out.push(')');
    }
    if out.is_empty() {
        "id".into()
    } else {
        out
    }
}
