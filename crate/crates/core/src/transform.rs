//! Behavior-preserving maps on code: the homomorphisms `h` and `h_pos`, the
//! anti-homomorphism `g`, the involution `rev`, and TEC-(anti-)automorphisms
//! generated by `swap` and `flip`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::action::Action;
use crate::bijection::StructuralBijection;
use crate::code::{CodeSeq, Direction, Instruction};

use Direction::{Backward as Bwd, Forward as Fwd};

fn fj(k: u32) -> Instruction {
    Instruction::fwd_jump(k)
}

fn bj(k: u32) -> Instruction {
    Instruction::bwd_jump(k)
}

const ABORT: Instruction = Instruction::Abort;

fn map_blocks(x: &CodeSeq, f: impl Fn(&Instruction) -> [Instruction; 3]) -> CodeSeq {
    let v: Vec<Instruction> = x.instructions().iter().flat_map(f).collect();
    CodeSeq::new(v).expect("image of non-empty code is non-empty")
}

fn h_block(i: &Instruction) -> [Instruction; 3] {
    match i {
        Instruction::Basic(Fwd, a) => [Instruction::Basic(Fwd, a.clone()), fj(2), ABORT],
        Instruction::PosTest(Fwd, a) => [Instruction::PosTest(Fwd, a.clone()), fj(2), fj(4)],
        Instruction::NegTest(Fwd, a) => [Instruction::NegTest(Fwd, a.clone()), fj(2), fj(4)],
        Instruction::Jump(Fwd, k) => [fj(3 * k), ABORT, ABORT],
        Instruction::Basic(Bwd, a) => [Instruction::Basic(Fwd, a.clone()), bj(4), ABORT],
        Instruction::PosTest(Bwd, a) => [Instruction::PosTest(Fwd, a.clone()), bj(4), bj(8)],
        Instruction::NegTest(Bwd, a) => [Instruction::NegTest(Fwd, a.clone()), bj(4), bj(8)],
        Instruction::Jump(Bwd, k) => [bj(3 * k), ABORT, ABORT],
        Instruction::Halt => [Instruction::Halt, ABORT, ABORT],
        Instruction::Abort => [ABORT, ABORT, ABORT],
    }
}

/// The monomorphism `h`: every instruction becomes a three-instruction block
/// using forward basic and test instructions only. `|X|_{j+1} = |h(X)|_{3j+1}`.
pub fn apply_h(x: &CodeSeq) -> CodeSeq {
    map_blocks(x, h_block)
}

/// Variant of `h` whose image uses only `{+/a, /#k, \#k, !, #}`.
pub fn apply_h_pos(x: &CodeSeq) -> CodeSeq {
    map_blocks(x, |i| match i {
        Instruction::Basic(Fwd, a) => [Instruction::PosTest(Fwd, a.clone()), fj(2), fj(1)],
        Instruction::NegTest(Fwd, a) => [Instruction::PosTest(Fwd, a.clone()), fj(5), fj(1)],
        Instruction::Basic(Bwd, a) => [Instruction::PosTest(Fwd, a.clone()), bj(4), bj(5)],
        // True must land on block j-2 (3j-5) and false on block j-1 (3j-2).
        Instruction::NegTest(Bwd, a) => [Instruction::PosTest(Fwd, a.clone()), bj(7), bj(5)],
        other => h_block(other),
    })
}

fn g_block(i: &Instruction) -> [Instruction; 3] {
    match i {
        Instruction::Basic(Fwd, a) => [ABORT, bj(2), Instruction::Basic(Bwd, a.clone())],
        Instruction::PosTest(Fwd, a) => [bj(4), bj(2), Instruction::PosTest(Bwd, a.clone())],
        Instruction::NegTest(Fwd, a) => [bj(4), bj(2), Instruction::NegTest(Bwd, a.clone())],
        Instruction::Jump(Fwd, k) => [ABORT, ABORT, bj(3 * k)],
        Instruction::Basic(Bwd, a) => [ABORT, fj(4), Instruction::Basic(Bwd, a.clone())],
        Instruction::PosTest(Bwd, a) => [fj(8), fj(4), Instruction::PosTest(Bwd, a.clone())],
        Instruction::NegTest(Bwd, a) => [fj(8), fj(4), Instruction::NegTest(Bwd, a.clone())],
        Instruction::Jump(Bwd, k) => [ABORT, ABORT, fj(3 * k)],
        Instruction::Halt => [ABORT, ABORT, Instruction::Halt],
        Instruction::Abort => [ABORT, ABORT, ABORT],
    }
}

/// The anti-homomorphism `g` with `⌊X⌋→ = ⌊g(X)⌋←`.
pub fn apply_g(x: &CodeSeq) -> CodeSeq {
    let v: Vec<Instruction> = x.instructions().iter().rev().flat_map(g_block).collect();
    CodeSeq::new(v).expect("non-empty")
}

fn rev_instruction(i: &Instruction) -> Instruction {
    match i {
        Instruction::Basic(d, a) => Instruction::Basic(d.reversed(), a.clone()),
        Instruction::PosTest(d, a) => Instruction::PosTest(d.reversed(), a.clone()),
        Instruction::NegTest(d, a) => Instruction::NegTest(d.reversed(), a.clone()),
        Instruction::Jump(d, k) => Instruction::Jump(d.reversed(), *k),
        other => other.clone(),
    }
}

/// Exchanges all orientations and reverses the sequence.
pub fn rev(x: &CodeSeq) -> CodeSeq {
    let v = x.instructions().iter().rev().map(rev_instruction).collect();
    CodeSeq::new(v).expect("non-empty")
}

pub fn swap(x: &CodeSeq, a: &Action, b: &Action) -> CodeSeq {
    TecAutomorphism::swap(a.clone(), b.clone()).apply(x)
}

pub fn flip(x: &CodeSeq, a: &Action) -> CodeSeq {
    TecAutomorphism::flip(a.clone()).apply(x)
}

/// A TEC-automorphism in normal form `flip_{c1}∘…∘flip_{cm}∘π`, where `π` is
/// a composition of swaps. Only non-fixed points of `π` are stored, so equal
/// automorphisms have equal representations.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TecAutomorphism {
    flips: BTreeSet<Action>,
    permutation: BTreeMap<Action, Action>,
}

impl TecAutomorphism {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn swap(a: Action, b: Action) -> Self {
        let mut permutation = BTreeMap::new();
        if a != b {
            permutation.insert(a.clone(), b.clone());
            permutation.insert(b, a);
        }
        TecAutomorphism {
            flips: BTreeSet::new(),
            permutation,
        }
    }

    pub fn flip(c: Action) -> Self {
        TecAutomorphism {
            flips: BTreeSet::from([c]),
            permutation: BTreeMap::new(),
        }
    }

    pub fn flips(&self) -> &BTreeSet<Action> {
        &self.flips
    }

    pub fn permutation(&self) -> &BTreeMap<Action, Action> {
        &self.permutation
    }

    pub fn image<'a>(&'a self, a: &'a Action) -> &'a Action {
        self.permutation.get(a).unwrap_or(a)
    }

    pub fn apply_instruction(&self, i: &Instruction) -> Instruction {
        match i {
            Instruction::Basic(d, a) => Instruction::Basic(*d, self.image(a).clone()),
            Instruction::PosTest(d, a) | Instruction::NegTest(d, a) => {
                let b = self.image(a).clone();
                let positive = matches!(i, Instruction::PosTest(..)) != self.flips.contains(&b);
                if positive {
                    Instruction::PosTest(*d, b)
                } else {
                    Instruction::NegTest(*d, b)
                }
            }
            other => other.clone(),
        }
    }

    /// Swaps first, then flips.
    pub fn apply(&self, x: &CodeSeq) -> CodeSeq {
        let v = x
            .instructions()
            .iter()
            .map(|i| self.apply_instruction(i))
            .collect();
        CodeSeq::new(v).expect("non-empty")
    }

    /// `self ∘ other`, renormalized. Moving `other`'s flips past `self`'s
    /// permutation renames them (`π∘flip_c = flip_{π(c)}∘π`), and repeated
    /// flips cancel.
    pub fn compose(&self, other: &TecAutomorphism) -> TecAutomorphism {
        let mut domain: BTreeSet<&Action> = self.permutation.keys().collect();
        domain.extend(other.permutation.keys());
        let permutation = domain
            .into_iter()
            .filter_map(|a| {
                let b = self.image(other.image(a));
                (a != b).then(|| (a.clone(), b.clone()))
            })
            .collect();
        let moved: BTreeSet<Action> = other
            .flips
            .iter()
            .map(|c| self.image(c).clone())
            .collect();
        let flips = self.flips.symmetric_difference(&moved).cloned().collect();
        TecAutomorphism { flips, permutation }
    }

    pub fn is_identity(&self) -> bool {
        self.flips.is_empty() && self.permutation.is_empty()
    }

    pub fn is_involution(&self) -> bool {
        self.compose(self).is_identity()
    }

    /// Every action this automorphism moves or flips.
    pub fn support(&self) -> BTreeSet<Action> {
        self.permutation
            .keys()
            .chain(self.flips.iter())
            .cloned()
            .collect()
    }
}

impl fmt::Display for TecAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return f.write_str("id");
        }
        let mut parts: Vec<String> = self.flips.iter().map(|c| format!("flip_{c}")).collect();
        let moved: Vec<String> = self
            .permutation
            .iter()
            .map(|(a, b)| format!("{a}->{b}"))
            .collect();
        if !moved.is_empty() {
            parts.push(format!("[{}]", moved.join(",")));
        }
        f.write_str(&parts.join("∘"))
    }
}

/// The structural bijection associated with `α`: same permutation, with the
/// flipped actions as A_false. Its domain is `α`'s support; use
/// [`StructuralBijection::extended_to`] for larger alphabets.
pub fn associated_bijection(alpha: &TecAutomorphism) -> StructuralBijection {
    let support = alpha.support();
    let permutation = support
        .iter()
        .map(|a| (a.clone(), alpha.image(a).clone()))
        .collect();
    StructuralBijection::new(permutation, alpha.flips.clone())
        .expect("normal form describes a valid bijection")
}

/// A TEC-anti-automorphism `rev ∘ α`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TecAntiAutomorphism {
    pub auto: TecAutomorphism,
}

impl TecAntiAutomorphism {
    pub fn new(auto: TecAutomorphism) -> Self {
        TecAntiAutomorphism { auto }
    }

    pub fn apply(&self, x: &CodeSeq) -> CodeSeq {
        rev(&self.auto.apply(x))
    }

    /// `(rev∘α)∘(rev∘β) = α∘β`, since `rev` commutes with every α and is an
    /// involution.
    pub fn compose(&self, other: &TecAntiAutomorphism) -> TecAutomorphism {
        self.auto.compose(&other.auto)
    }
}

pub fn apply_tec(alpha: &TecAutomorphism, x: &CodeSeq) -> CodeSeq {
    alpha.apply(x)
}

pub fn compose_tec(alpha: &TecAutomorphism, beta: &TecAutomorphism) -> TecAutomorphism {
    alpha.compose(beta)
}

pub fn apply_tec_anti(beta: &TecAntiAutomorphism, x: &CodeSeq) -> CodeSeq {
    beta.apply(x)
}
