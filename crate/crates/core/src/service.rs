//! Finite-state services and the use operator on regular threads.
//!
//! An action `c.m` whose focus `c` matches a service is consumed by it: the
//! service replies and changes state, and the thread continues on the chosen
//! branch. Other actions are kept. An undeclared method yields `D`.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::thread::{LinearSpec, Node};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reply<St> {
    Value(bool, St),
    Unknown,
}

pub trait Service {
    type State: Clone + Eq + Hash + Debug;

    fn focus(&self) -> &str;

    fn initial(&self) -> Self::State;

    /// Reply and successor state for `method` in `state`. Errors are reserved
    /// for capacity limits of the finite model.
    fn step(&self, state: &Self::State, method: &str) -> Result<Reply<Self::State>>;
}

/// Boolean register with methods `set:T`, `set:F` and `get`; initially false.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BooleanRegister {
    name: String,
}

impl BooleanRegister {
    pub fn new(name: impl Into<String>) -> Self {
        BooleanRegister { name: name.into() }
    }
}

impl Service for BooleanRegister {
    type State = bool;

    fn focus(&self) -> &str {
        &self.name
    }

    fn initial(&self) -> bool {
        false
    }

    fn step(&self, state: &bool, method: &str) -> Result<Reply<bool>> {
        Ok(match method {
            "set:T" => Reply::Value(true, true),
            "set:F" => Reply::Value(true, false),
            "get" => Reply::Value(*state, *state),
            _ => Reply::Unknown,
        })
    }
}

/// Stack over `1..=alphabet` holding at most `capacity` entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedStack {
    focus: String,
    capacity: usize,
    alphabet: u32,
}

impl BoundedStack {
    pub fn new(focus: impl Into<String>, capacity: usize, alphabet: u32) -> Self {
        BoundedStack {
            focus: focus.into(),
            capacity,
            alphabet,
        }
    }

    fn symbol(&self, arg: &str) -> Option<u32> {
        arg.parse::<u32>()
            .ok()
            .filter(|i| (1..=self.alphabet).contains(i))
    }
}

impl Service for BoundedStack {
    type State = Vec<u32>;

    fn focus(&self) -> &str {
        &self.focus
    }

    fn initial(&self) -> Vec<u32> {
        Vec::new()
    }

    fn step(&self, state: &Vec<u32>, method: &str) -> Result<Reply<Vec<u32>>> {
        if method == "pop" {
            let mut next = state.clone();
            return Ok(match next.pop() {
                Some(_) => Reply::Value(true, next),
                None => Reply::Value(false, next),
            });
        }
        if let Some(i) = method.strip_prefix("push:").and_then(|arg| self.symbol(arg)) {
            if state.len() >= self.capacity {
                return Err(Error::CapacityExceeded {
                    focus: self.focus.clone(),
                    capacity: self.capacity,
                    path: Vec::new(),
                });
            }
            let mut next = state.clone();
            next.push(i);
            return Ok(Reply::Value(true, next));
        }
        if let Some(i) = method.strip_prefix("topeq:").and_then(|arg| self.symbol(arg)) {
            return Ok(Reply::Value(state.last() == Some(&i), state.clone()));
        }
        Ok(Reply::Unknown)
    }
}

/// A service given by an explicit transition table over states `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableService {
    focus: String,
    initial: usize,
    table: BTreeMap<(usize, String), (bool, usize)>,
}

impl TableService {
    pub fn new(
        focus: impl Into<String>,
        initial: usize,
        table: BTreeMap<(usize, String), (bool, usize)>,
    ) -> Self {
        TableService {
            focus: focus.into(),
            initial,
            table,
        }
    }
}

impl Service for TableService {
    type State = usize;

    fn focus(&self) -> &str {
        &self.focus
    }

    fn initial(&self) -> usize {
        self.initial
    }

    fn step(&self, state: &usize, method: &str) -> Result<Reply<usize>> {
        Ok(match self.table.get(&(*state, method.to_string())) {
            Some(&(reply, next)) => Reply::Value(reply, next),
            None => Reply::Unknown,
        })
    }
}

/// A register or a stack, as named by `reg:NAME` or
/// `stack:NAME:capacity=K:alphabet=N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyService {
    Register(BooleanRegister),
    Stack(BoundedStack),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AnyState {
    Register(bool),
    Stack(Vec<u32>),
}

impl Service for AnyService {
    type State = AnyState;

    fn focus(&self) -> &str {
        match self {
            AnyService::Register(r) => r.focus(),
            AnyService::Stack(s) => s.focus(),
        }
    }

    fn initial(&self) -> AnyState {
        match self {
            AnyService::Register(r) => AnyState::Register(r.initial()),
            AnyService::Stack(s) => AnyState::Stack(s.initial()),
        }
    }

    fn step(&self, state: &AnyState, method: &str) -> Result<Reply<AnyState>> {
        let lift = |r: Reply<AnyState>| r;
        Ok(match (self, state) {
            (AnyService::Register(r), AnyState::Register(v)) => match r.step(v, method)? {
                Reply::Value(b, next) => lift(Reply::Value(b, AnyState::Register(next))),
                Reply::Unknown => Reply::Unknown,
            },
            (AnyService::Stack(s), AnyState::Stack(v)) => match s.step(v, method)? {
                Reply::Value(b, next) => Reply::Value(b, AnyState::Stack(next)),
                Reply::Unknown => Reply::Unknown,
            },
            _ => unreachable!("service state of the wrong shape"),
        })
    }
}

impl FromStr for AnyService {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidService(s.to_string());
        let valid_focus = |name: &str| {
            crate::action::Action::new(name).is_ok() && !name.contains('.')
        };
        let mut parts = s.split(':');
        match parts.next() {
            Some("reg") => {
                let name = parts.next().ok_or_else(bad)?;
                if parts.next().is_some() || !valid_focus(name) {
                    return Err(bad());
                }
                Ok(AnyService::Register(BooleanRegister::new(name)))
            }
            Some("stack") => {
                let name = parts.next().ok_or_else(bad)?;
                if !valid_focus(name) {
                    return Err(bad());
                }
                let (mut capacity, mut alphabet) = (None, None);
                for opt in parts {
                    match opt.split_once('=') {
                        Some(("capacity", v)) => capacity = Some(v.parse().map_err(|_| bad())?),
                        Some(("alphabet", v)) => alphabet = Some(v.parse().map_err(|_| bad())?),
                        _ => return Err(bad()),
                    }
                }
                Ok(AnyService::Stack(BoundedStack::new(
                    name,
                    capacity.ok_or_else(bad)?,
                    alphabet.ok_or_else(bad)?,
                )))
            }
            _ => Err(bad()),
        }
    }
}

enum Resolved<St> {
    S,
    D,
    Visible {
        action: crate::action::Action,
        on_true: (usize, St),
        on_false: (usize, St),
    },
}

/// `P /_c s`: the product of the thread's states with the service states
/// reachable from `(root, initial)`. Consumed actions are hidden; a cycle of
/// consumed actions denotes `D`.
pub fn use_service<Sv: Service>(spec: &LinearSpec, service: &Sv) -> Result<LinearSpec> {
    let focus = service.focus();

    // Follows consumed actions from `pair` until a visible step or a constant.
    let resolve = |pair: (usize, Sv::State), trace: &mut Vec<String>| -> Result<Resolved<Sv::State>> {
        let mut seen: Vec<(usize, Sv::State)> = Vec::new();
        let (mut x, mut st) = pair;
        loop {
            match spec.node(x) {
                Node::S => return Ok(Resolved::S),
                Node::D => return Ok(Resolved::D),
                Node::Post {
                    action,
                    on_true,
                    on_false,
                } => {
                    if action.focus() != Some(focus) {
                        return Ok(Resolved::Visible {
                            action: action.clone(),
                            on_true: (*on_true, st.clone()),
                            on_false: (*on_false, st),
                        });
                    }
                    let method = action.method().unwrap_or_default();
                    let reply = service.step(&st, method).map_err(|e| match e {
                        Error::CapacityExceeded {
                            focus, capacity, ..
                        } => {
                            let mut path = trace.clone();
                            path.push(action.to_string());
                            Error::CapacityExceeded {
                                focus,
                                capacity,
                                path,
                            }
                        }
                        other => other,
                    })?;
                    match reply {
                        Reply::Unknown => return Ok(Resolved::D),
                        Reply::Value(b, next) => {
                            trace.push(format!("{action}:{b}"));
                            seen.push((x, st));
                            x = if b { *on_true } else { *on_false };
                            st = next;
                            if seen.contains(&(x, st.clone())) {
                                return Ok(Resolved::D);
                            }
                        }
                    }
                }
            }
        }
    };

    let start = (spec.root(), service.initial());
    let mut index: HashMap<(usize, Sv::State), usize> = HashMap::new();
    let mut paths: Vec<Vec<String>> = vec![Vec::new()];
    let mut nodes: Vec<Option<Node>> = vec![None];
    index.insert(start.clone(), 0);
    let mut queue = VecDeque::from([start]);

    while let Some(pair) = queue.pop_front() {
        let me = index[&pair];
        let mut trace = paths[me].clone();
        let node = match resolve(pair, &mut trace)? {
            Resolved::S => Node::S,
            Resolved::D => Node::D,
            Resolved::Visible {
                action,
                on_true,
                on_false,
            } => {
                let mut target = |p: (usize, Sv::State), reply: bool| -> usize {
                    if let Some(&i) = index.get(&p) {
                        return i;
                    }
                    let i = nodes.len();
                    nodes.push(None);
                    let mut path = trace.clone();
                    path.push(format!("{action}:{reply}"));
                    paths.push(path);
                    index.insert(p.clone(), i);
                    queue.push_back(p);
                    i
                };
                let t = target(on_true, true);
                let f = target(on_false, false);
                Node::Post {
                    action,
                    on_true: t,
                    on_false: f,
                }
            }
        };
        nodes[me] = Some(node);
    }
    LinearSpec::new(nodes.into_iter().map(Option::unwrap).collect(), 0)
}

/// Applies each service in turn: `((P /_{c1} s1) …) /_{cn} sn`.
pub fn use_all<'a, Sv: Service + 'a>(
    spec: &LinearSpec,
    services: impl IntoIterator<Item = &'a Sv>,
) -> Result<LinearSpec> {
    services
        .into_iter()
        .try_fold(spec.clone(), |acc, s| use_service(&acc, s))
}
