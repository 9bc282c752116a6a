//! Structural bijections: an action permutation plus a true/false partition
//! of the actions, lifted to threads by relabeling and branch exchange.

use std::collections::{BTreeMap, BTreeSet};

use crate::action::Action;
use crate::error::{Error, Result};
use crate::thread::{FiniteThread, LinearSpec, Node};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StructuralBijection {
    permutation: BTreeMap<Action, Action>,
    false_set: BTreeSet<Action>,
}

impl StructuralBijection {
    /// `permutation` must be a bijection on its key set, and `false_set` a
    /// subset of that set.
    pub fn new(
        permutation: BTreeMap<Action, Action>,
        false_set: BTreeSet<Action>,
    ) -> Result<Self> {
        let image: BTreeSet<&Action> = permutation.values().collect();
        let domain: BTreeSet<&Action> = permutation.keys().collect();
        if image != domain {
            return Err(Error::InvalidSpec(
                "permutation is not a bijection on its domain".into(),
            ));
        }
        if let Some(c) = false_set.iter().find(|c| !permutation.contains_key(*c)) {
            return Err(Error::ActionOutsideDomain(c.to_string()));
        }
        Ok(StructuralBijection {
            permutation,
            false_set,
        })
    }

    pub fn identity(domain: impl IntoIterator<Item = Action>) -> Self {
        StructuralBijection {
            permutation: domain.into_iter().map(|a| (a.clone(), a)).collect(),
            false_set: BTreeSet::new(),
        }
    }

    /// `swap̄_{a,b}` over the domain `{a, b}`.
    pub fn swap(a: Action, b: Action) -> Self {
        let mut permutation = BTreeMap::new();
        permutation.insert(a.clone(), b.clone());
        permutation.insert(b, a);
        StructuralBijection {
            permutation,
            false_set: BTreeSet::new(),
        }
    }

    /// `flip̄_c` over the domain `{c}`.
    pub fn flip(c: Action) -> Self {
        StructuralBijection {
            permutation: BTreeMap::from([(c.clone(), c.clone())]),
            false_set: BTreeSet::from([c]),
        }
    }

    pub fn domain(&self) -> impl Iterator<Item = &Action> {
        self.permutation.keys()
    }

    pub fn permutation(&self) -> &BTreeMap<Action, Action> {
        &self.permutation
    }

    pub fn false_set(&self) -> &BTreeSet<Action> {
        &self.false_set
    }

    pub fn image(&self, a: &Action) -> Option<&Action> {
        self.permutation.get(a)
    }

    /// Adds every action of `alphabet` missing from the domain as a fixed
    /// point in A_true.
    pub fn extended_to<'a>(&self, alphabet: impl IntoIterator<Item = &'a Action>) -> Self {
        let mut out = self.clone();
        for a in alphabet {
            out.permutation
                .entry(a.clone())
                .or_insert_with(|| a.clone());
        }
        out
    }

    fn map_label(&self, a: &Action) -> Result<(Action, bool)> {
        let b = self
            .permutation
            .get(a)
            .ok_or_else(|| Error::ActionOutsideDomain(a.to_string()))?;
        Ok((b.clone(), self.false_set.contains(b)))
    }

    /// Applies the bijection equation-wise: `Post(a,t,f)` becomes
    /// `Post(φ(a),t,f)`, or `Post(φ(a),f,t)` when `φ(a)` is in A_false.
    pub fn apply(&self, spec: &LinearSpec) -> Result<LinearSpec> {
        let nodes = spec
            .nodes()
            .iter()
            .map(|node| {
                Ok(match node {
                    Node::Post {
                        action,
                        on_true,
                        on_false,
                    } => {
                        let (b, flipped) = self.map_label(action)?;
                        let (t, f) = if flipped {
                            (*on_false, *on_true)
                        } else {
                            (*on_true, *on_false)
                        };
                        Node::Post {
                            action: b,
                            on_true: t,
                            on_false: f,
                        }
                    }
                    other => other.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        LinearSpec::new(nodes, spec.root())
    }

    pub fn apply_finite(&self, t: &FiniteThread) -> Result<FiniteThread> {
        Ok(match t {
            FiniteThread::S => FiniteThread::S,
            FiniteThread::D => FiniteThread::D,
            FiniteThread::Post(a, p, q) => {
                let (b, flipped) = self.map_label(a)?;
                let (p, q) = (self.apply_finite(p)?, self.apply_finite(q)?);
                if flipped {
                    FiniteThread::post(b, q, p)
                } else {
                    FiniteThread::post(b, p, q)
                }
            }
        })
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &StructuralBijection) -> Result<Self> {
        if !self.permutation.keys().eq(other.permutation.keys()) {
            return Err(Error::DomainMismatch);
        }
        let permutation = other
            .permutation
            .iter()
            .map(|(a, b)| (a.clone(), self.permutation[b].clone()))
            .collect();
        // A branch is exchanged once per stage whose image lies in that
        // stage's false set; two exchanges cancel.
        let moved: BTreeSet<Action> = other
            .false_set
            .iter()
            .map(|c| self.permutation[c].clone())
            .collect();
        let false_set = self
            .false_set
            .symmetric_difference(&moved)
            .cloned()
            .collect();
        Ok(StructuralBijection {
            permutation,
            false_set,
        })
    }

    pub fn inverse(&self) -> Self {
        let permutation: BTreeMap<Action, Action> = self
            .permutation
            .iter()
            .map(|(a, b)| (b.clone(), a.clone()))
            .collect();
        let false_set = self
            .false_set
            .iter()
            .map(|c| permutation[c].clone())
            .collect();
        StructuralBijection {
            permutation,
            false_set,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.false_set.is_empty() && self.permutation.iter().all(|(a, b)| a == b)
    }
}

/// All `2^|A| · |A|!` structural bijections on the action set `actions`.
pub fn enumerate_bijections(actions: &BTreeSet<Action>) -> Vec<StructuralBijection> {
    let domain: Vec<Action> = actions.iter().cloned().collect();
    let mut perms = Vec::new();
    permutations(&mut domain.clone(), 0, &mut perms);
    let subsets = 1usize << domain.len();
    let mut out = Vec::with_capacity(perms.len() * subsets);
    for image in &perms {
        let permutation: BTreeMap<Action, Action> =
            domain.iter().cloned().zip(image.iter().cloned()).collect();
        for mask in 0..subsets {
            let false_set = domain
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, a)| a.clone())
                .collect();
            out.push(StructuralBijection {
                permutation: permutation.clone(),
                false_set,
            });
        }
    }
    out
}

fn permutations(items: &mut Vec<Action>, k: usize, out: &mut Vec<Vec<Action>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}
