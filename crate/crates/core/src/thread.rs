//! Threads: finite BTA terms and finite linear recursive specifications.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::action::Action;
use crate::error::{Error, Result};

/// A finite thread built from `S`, `D` and postconditional composition.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum FiniteThread {
    S,
    D,
    /// `Post(a, t, f)` is `t ◁ a ▷ f`.
    Post(Action, Box<FiniteThread>, Box<FiniteThread>),
}

impl FiniteThread {
    pub fn post(a: Action, t: FiniteThread, f: FiniteThread) -> Self {
        FiniteThread::Post(a, Box::new(t), Box::new(f))
    }

    /// `a ∘ t`, i.e. `t ◁ a ▷ t`.
    pub fn prefix(a: Action, t: FiniteThread) -> Self {
        FiniteThread::post(a, t.clone(), t)
    }

    /// `a^n ∘ t`
    pub fn prefix_n(a: &Action, n: usize, t: FiniteThread) -> Self {
        (0..n).fold(t, |acc, _| FiniteThread::prefix(a.clone(), acc))
    }

    pub fn depth(&self) -> usize {
        match self {
            FiniteThread::S | FiniteThread::D => 0,
            FiniteThread::Post(_, t, f) => 1 + t.depth().max(f.depth()),
        }
    }

    /// π_n on a finite thread.
    pub fn truncate(&self, n: usize) -> FiniteThread {
        if n == 0 {
            return FiniteThread::D;
        }
        match self {
            FiniteThread::S => FiniteThread::S,
            FiniteThread::D => FiniteThread::D,
            FiniteThread::Post(a, t, f) => {
                FiniteThread::post(a.clone(), t.truncate(n - 1), f.truncate(n - 1))
            }
        }
    }
}

impl fmt::Display for FiniteThread {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteThread::S => f.write_str("S"),
            FiniteThread::D => f.write_str("D"),
            FiniteThread::Post(a, t, e) if t == e => write!(f, "{a}∘{t}"),
            FiniteThread::Post(a, t, e) => write!(f, "({t} ◁ {a} ▷ {e})"),
        }
    }
}

impl fmt::Debug for FiniteThread {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Right-hand side of one equation in a linear specification.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    S,
    D,
    Post {
        action: Action,
        on_true: usize,
        on_false: usize,
    },
}

impl Node {
    /// `a ∘ x`
    pub fn prefix(action: Action, next: usize) -> Self {
        Node::Post {
            action,
            on_true: next,
            on_false: next,
        }
    }

    pub fn targets(&self) -> Option<(usize, usize)> {
        match self {
            Node::Post {
                on_true, on_false, ..
            } => Some((*on_true, *on_false)),
            _ => None,
        }
    }
}

/// A finite linear recursive specification with a designated root.
///
/// States are indexed `0..len`; every target refers to an existing state.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearSpec {
    nodes: Vec<Node>,
    root: usize,
}

impl LinearSpec {
    pub fn new(nodes: Vec<Node>, root: usize) -> Result<Self> {
        let n = nodes.len();
        if root >= n {
            return Err(Error::InvalidSpec(format!("root {root} does not exist")));
        }
        for (i, node) in nodes.iter().enumerate() {
            if let Some((t, f)) = node.targets() {
                if t >= n || f >= n {
                    return Err(Error::InvalidSpec(format!(
                        "state {i} refers to a missing state"
                    )));
                }
            }
        }
        Ok(LinearSpec { nodes, root })
    }

    pub fn terminated() -> Self {
        LinearSpec {
            nodes: vec![Node::S],
            root: 0,
        }
    }

    pub fn deadlock() -> Self {
        LinearSpec {
            nodes: vec![Node::D],
            root: 0,
        }
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Node {
        &self.nodes[i]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// The same equations with a different root.
    pub fn rooted_at(&self, root: usize) -> Result<Self> {
        LinearSpec::new(self.nodes.clone(), root)
    }

    pub fn actions(&self) -> BTreeSet<Action> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Post { action, .. } => Some(action.clone()),
                _ => None,
            })
            .collect()
    }

    /// π_n of the thread denoted by state `state`.
    pub fn pi_from(&self, n: usize, state: usize) -> FiniteThread {
        if n == 0 {
            return FiniteThread::D;
        }
        match &self.nodes[state] {
            Node::S => FiniteThread::S,
            Node::D => FiniteThread::D,
            Node::Post {
                action,
                on_true,
                on_false,
            } => FiniteThread::post(
                action.clone(),
                self.pi_from(n - 1, *on_true),
                self.pi_from(n - 1, *on_false),
            ),
        }
    }

    /// The depth-`n` approximation π_n of the root thread.
    pub fn pi(&self, n: usize) -> FiniteThread {
        self.pi_from(n, self.root)
    }

    /// States reachable from the root (including it), sorted.
    pub fn residual_states(&self) -> BTreeSet<usize> {
        self.bfs_order().into_iter().collect()
    }

    fn bfs_order(&self) -> Vec<usize> {
        let mut seen = vec![false; self.nodes.len()];
        let mut order = Vec::new();
        let mut queue = VecDeque::from([self.root]);
        seen[self.root] = true;
        while let Some(i) = queue.pop_front() {
            order.push(i);
            if let Some((t, f)) = self.nodes[i].targets() {
                for next in [t, f] {
                    if !seen[next] {
                        seen[next] = true;
                        queue.push_back(next);
                    }
                }
            }
        }
        order
    }

    /// Drops unreachable states and renumbers the rest in BFS order, so the
    /// root becomes state 0.
    pub fn restrict_reachable(&self) -> LinearSpec {
        let order = self.bfs_order();
        let mut index = vec![usize::MAX; self.nodes.len()];
        for (new, &old) in order.iter().enumerate() {
            index[old] = new;
        }
        let nodes = order
            .iter()
            .map(|&old| match &self.nodes[old] {
                Node::Post {
                    action,
                    on_true,
                    on_false,
                } => Node::Post {
                    action: action.clone(),
                    on_true: index[*on_true],
                    on_false: index[*on_false],
                },
                other => other.clone(),
            })
            .collect();
        LinearSpec { nodes, root: 0 }
    }

    /// Disjoint union: `other`'s states are shifted by `self.len()`. The root
    /// of the result is `self`'s root.
    pub fn disjoint_union(&self, other: &LinearSpec) -> LinearSpec {
        let offset = self.nodes.len();
        let mut nodes = self.nodes.clone();
        nodes.extend(other.nodes.iter().map(|node| match node {
            Node::Post {
                action,
                on_true,
                on_false,
            } => Node::Post {
                action: action.clone(),
                on_true: on_true + offset,
                on_false: on_false + offset,
            },
            other => other.clone(),
        }));
        LinearSpec {
            nodes,
            root: self.root,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&SpecJson::from(self)).expect("spec serialization")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SpecJson =
            serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        raw.try_into()
    }
}

#[derive(Serialize, Deserialize)]
struct SpecJson {
    root: u64,
    states: Vec<StateJson>,
}

#[derive(Serialize, Deserialize)]
struct StateJson {
    id: u64,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    action: Option<Action>,
    #[serde(rename = "true", skip_serializing_if = "Option::is_none", default)]
    on_true: Option<u64>,
    #[serde(rename = "false", skip_serializing_if = "Option::is_none", default)]
    on_false: Option<u64>,
}

impl From<&LinearSpec> for SpecJson {
    fn from(spec: &LinearSpec) -> Self {
        let states = spec
            .nodes
            .iter()
            .enumerate()
            .map(|(i, node)| match node {
                Node::S | Node::D => StateJson {
                    id: i as u64,
                    kind: if *node == Node::S { "S" } else { "D" }.to_string(),
                    action: None,
                    on_true: None,
                    on_false: None,
                },
                Node::Post {
                    action,
                    on_true,
                    on_false,
                } => StateJson {
                    id: i as u64,
                    kind: "post".to_string(),
                    action: Some(action.clone()),
                    on_true: Some(*on_true as u64),
                    on_false: Some(*on_false as u64),
                },
            })
            .collect();
        SpecJson {
            root: spec.root as u64,
            states,
        }
    }
}

impl TryFrom<SpecJson> for LinearSpec {
    type Error = Error;

    fn try_from(raw: SpecJson) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, s) in raw.states.iter().enumerate() {
            if index.insert(s.id, i).is_some() {
                return Err(Error::InvalidSpec(format!("duplicate state id {}", s.id)));
            }
        }
        let lookup = |id: Option<u64>, what: &str, owner: u64| -> Result<usize> {
            let id = id.ok_or_else(|| {
                Error::InvalidSpec(format!("state {owner}: missing `{what}` target"))
            })?;
            index
                .get(&id)
                .copied()
                .ok_or_else(|| Error::InvalidSpec(format!("state {owner}: unknown state {id}")))
        };
        let mut nodes = Vec::with_capacity(raw.states.len());
        for s in &raw.states {
            let node = match s.kind.as_str() {
                "S" | "D" => {
                    if s.action.is_some() || s.on_true.is_some() || s.on_false.is_some() {
                        return Err(Error::InvalidSpec(format!(
                            "state {}: kind {} takes no action or targets",
                            s.id, s.kind
                        )));
                    }
                    if s.kind == "S" {
                        Node::S
                    } else {
                        Node::D
                    }
                }
                "post" => Node::Post {
                    action: s.action.clone().ok_or_else(|| {
                        Error::InvalidSpec(format!("state {}: missing action", s.id))
                    })?,
                    on_true: lookup(s.on_true, "true", s.id)?,
                    on_false: lookup(s.on_false, "false", s.id)?,
                },
                other => {
                    return Err(Error::InvalidSpec(format!(
                        "state {}: unknown kind `{other}`",
                        s.id
                    )))
                }
            };
            nodes.push(node);
        }
        let root = *index
            .get(&raw.root)
            .ok_or_else(|| Error::InvalidSpec(format!("root {} does not exist", raw.root)))?;
        LinearSpec::new(nodes, root)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> Action {
        Action::new(s).unwrap()
    }

    #[test]
    fn pi_zero_is_deadlock() {
        assert_eq!(LinearSpec::terminated().pi(0), FiniteThread::D);
    }

    #[test]
    fn pi_unfolds_loop() {
        let spec = LinearSpec::new(vec![Node::prefix(a("a"), 0)], 0).unwrap();
        let expected = FiniteThread::prefix_n(&a("a"), 2, FiniteThread::D);
        assert_eq!(spec.pi(2), expected);
    }

    #[test]
    fn pi_of_finite_example() {
        // {x1 = a∘x2, x2 = a∘x3, x3 = D}
        let spec = LinearSpec::new(
            vec![Node::prefix(a("a"), 1), Node::prefix(a("a"), 2), Node::D],
            0,
        )
        .unwrap();
        assert_eq!(
            spec.pi(3),
            FiniteThread::prefix_n(&a("a"), 2, FiniteThread::D)
        );
    }

    #[test]
    fn residuals() {
        let spec = LinearSpec::new(vec![Node::prefix(a("a"), 1), Node::S, Node::D], 0).unwrap();
        assert_eq!(spec.residual_states(), BTreeSet::from([0, 1]));
        let lp = LinearSpec::new(vec![Node::prefix(a("a"), 0)], 0).unwrap();
        assert_eq!(lp.residual_states(), BTreeSet::from([0]));
    }

    #[test]
    fn rejects_dangling_targets() {
        assert!(LinearSpec::new(vec![Node::prefix(a("a"), 3)], 0).is_err());
        assert!(LinearSpec::new(vec![Node::S], 1).is_err());
    }

    #[test]
    fn json_roundtrip_and_errors() {
        let spec = LinearSpec::new(
            vec![
                Node::Post {
                    action: a("b"),
                    on_true: 1,
                    on_false: 2,
                },
                Node::S,
                Node::D,
            ],
            0,
        )
        .unwrap();
        let text = spec.to_json();
        assert_eq!(
            text,
            r#"{"root":0,"states":[{"id":0,"kind":"post","action":"b","true":1,"false":2},{"id":1,"kind":"S"},{"id":2,"kind":"D"}]}"#
        );
        assert_eq!(LinearSpec::from_json(&text).unwrap(), spec);

        let sparse = r#"{"root":7,"states":[{"id":7,"kind":"post","action":"a","true":9,"false":7},{"id":9,"kind":"S"}]}"#;
        let s = LinearSpec::from_json(sparse).unwrap();
        assert_eq!(s.root(), 0);
        assert_eq!(s.node(0).targets(), Some((1, 0)));

        for bad in [
            r#"{"root":1,"states":[{"id":0,"kind":"S"}]}"#,
            r#"{"root":0,"states":[{"id":0,"kind":"post","action":"a","true":0}]}"#,
            r#"{"root":0,"states":[{"id":0,"kind":"X"}]}"#,
            r#"{"root":0,"states":[{"id":0,"kind":"S"},{"id":0,"kind":"D"}]}"#,
            r#"{"root":0,"states":[{"id":0,"kind":"post","action":"1a","true":0,"false":0}]}"#,
        ] {
            assert!(LinearSpec::from_json(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn truncation_matches_pi() {
        let spec = LinearSpec::new(
            vec![
                Node::Post {
                    action: a("a"),
                    on_true: 1,
                    on_false: 0,
                },
                Node::prefix(a("b"), 0),
            ],
            0,
        )
        .unwrap();
        for n in 0..6 {
            assert_eq!(spec.pi(n + 1).truncate(n), spec.pi(n));
        }
    }
}
