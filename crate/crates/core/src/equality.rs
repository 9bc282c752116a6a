//! Equality of regular threads by partition refinement.
//!
//! Two states are equivalent iff they have the same kind, the same action,
//! and pairwise equivalent targets. The coarsest such partition is the
//! fixpoint of refining by `(kind, action)` and then by target classes.

use std::collections::HashMap;

use crate::action::Action;
use crate::thread::{LinearSpec, Node};

/// Class index per state; states with equal indices denote equal threads.
pub fn partition(spec: &LinearSpec) -> Vec<usize> {
    #[derive(Hash, PartialEq, Eq)]
    enum Label<'a> {
        S,
        D,
        Post(&'a Action),
    }

    let nodes = spec.nodes();
    let mut ids: HashMap<Label<'_>, usize> = HashMap::new();
    let mut class: Vec<usize> = nodes
        .iter()
        .map(|n| {
            let label = match n {
                Node::S => Label::S,
                Node::D => Label::D,
                Node::Post { action, .. } => Label::Post(action),
            };
            let next = ids.len();
            *ids.entry(label).or_insert(next)
        })
        .collect();
    let mut count = ids.len();

    loop {
        let mut sigs: HashMap<(usize, usize, usize), usize> = HashMap::new();
        let refined: Vec<usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| {
                let sig = match n.targets() {
                    Some((t, f)) => (class[i], class[t], class[f]),
                    None => (class[i], usize::MAX, usize::MAX),
                };
                let next = sigs.len();
                *sigs.entry(sig).or_insert(next)
            })
            .collect();
        let refined_count = sigs.len();
        class = refined;
        if refined_count == count {
            return class;
        }
        count = refined_count;
    }
}

/// True iff the threads denoted by `p` and `q` are equal.
pub fn decide_equal(p: &LinearSpec, q: &LinearSpec) -> bool {
    let union = p.disjoint_union(q);
    let class = partition(&union);
    class[p.root()] == class[p.len() + q.root()]
}

/// True iff states `i` and `j` of the same spec denote equal threads.
pub fn states_equal(spec: &LinearSpec, i: usize, j: usize) -> bool {
    let class = partition(spec);
    class[i] == class[j]
}

/// The minimal specification of the root thread: reachable states only,
/// one state per equivalence class, root first.
pub fn minimize(spec: &LinearSpec) -> LinearSpec {
    let reach = spec.restrict_reachable();
    let class = partition(&reach);
    // Renumber classes in order of first occurrence in the BFS numbering.
    let mut renum: HashMap<usize, usize> = HashMap::new();
    for &c in &class {
        let next = renum.len();
        renum.entry(c).or_insert(next);
    }
    let mut nodes: Vec<Option<Node>> = vec![None; renum.len()];
    for (i, node) in reach.nodes().iter().enumerate() {
        let slot = &mut nodes[renum[&class[i]]];
        if slot.is_none() {
            *slot = Some(match node {
                Node::Post {
                    action,
                    on_true,
                    on_false,
                } => Node::Post {
                    action: action.clone(),
                    on_true: renum[&class[*on_true]],
                    on_false: renum[&class[*on_false]],
                },
                other => other.clone(),
            });
        }
    }
    LinearSpec::new(nodes.into_iter().map(Option::unwrap).collect(), 0)
        .expect("quotient of a valid spec is valid")
}
