//! Thread extraction `|X|_j` from an arbitrary start position.
//!
//! Every position gets one equation. Out-of-range successors denote `D`;
//! a chain of jumps that revisits a jump position is an action-free loop and
//! also denotes `D`. Remaining jumps are resolved by chasing to the first
//! non-jump instruction.

use crate::code::{CodeSeq, Direction, Instruction};
use crate::error::{Error, Result};
use crate::thread::{LinearSpec, Node};

const S_STATE: usize = 0;
const D_STATE: usize = 1;

/// Extraction of every position of a piece of code at once.
#[derive(Clone, Debug)]
pub struct ExtractionResult {
    spec: LinearSpec,
    position_of: Vec<usize>,
    out_of_range: bool,
}

impl ExtractionResult {
    pub fn new(x: &CodeSeq) -> Self {
        let n = x.len() as i64;
        // States 0 and 1 are the shared S and D; then one per basic/test.
        let mut own = vec![usize::MAX; x.len()];
        let mut next = 2;
        for (idx, ins) in x.instructions().iter().enumerate() {
            if ins.action().is_some() {
                own[idx] = next;
                next += 1;
            }
        }

        let mut out_of_range = false;
        let mut resolve = |start: i64| -> usize {
            let mut visited = Vec::new();
            let mut j = start;
            loop {
                if !(1..=n).contains(&j) {
                    out_of_range = true;
                    return D_STATE;
                }
                match x.at(j).unwrap() {
                    Instruction::Halt => return S_STATE,
                    Instruction::Abort => return D_STATE,
                    Instruction::Jump(d, k) => {
                        if visited.contains(&j) {
                            return D_STATE;
                        }
                        visited.push(j);
                        j += d.sign() * *k as i64;
                    }
                    _ => return own[j as usize - 1],
                }
            }
        };

        let mut nodes = vec![Node::S, Node::D];
        let mut position_of = Vec::with_capacity(x.len());
        for (idx, ins) in x.instructions().iter().enumerate() {
            let j = idx as i64 + 1;
            let state = match ins {
                Instruction::Basic(d, a) => {
                    nodes.push(Node::prefix(a.clone(), resolve(j + d.sign())));
                    own[idx]
                }
                Instruction::PosTest(d, a) => {
                    let t = resolve(j + d.sign());
                    let f = resolve(j + 2 * d.sign());
                    nodes.push(Node::Post {
                        action: a.clone(),
                        on_true: t,
                        on_false: f,
                    });
                    own[idx]
                }
                Instruction::NegTest(d, a) => {
                    let f = resolve(j + d.sign());
                    let t = resolve(j + 2 * d.sign());
                    nodes.push(Node::Post {
                        action: a.clone(),
                        on_true: t,
                        on_false: f,
                    });
                    own[idx]
                }
                Instruction::Jump(..) => resolve(j),
                Instruction::Halt => S_STATE,
                Instruction::Abort => D_STATE,
            };
            position_of.push(state);
        }
        let root = position_of[0];
        ExtractionResult {
            spec: LinearSpec::new(nodes, root).expect("extraction builds a closed spec"),
            position_of,
            out_of_range,
        }
    }

    /// The full specification (all positions), rooted at position 1.
    pub fn spec(&self) -> &LinearSpec {
        &self.spec
    }

    /// State for position `j`; out-of-range positions map to the D state.
    pub fn state_of(&self, j: i64) -> usize {
        if j >= 1 && (j as usize) <= self.position_of.len() {
            self.position_of[j as usize - 1]
        } else {
            D_STATE
        }
    }

    /// Whether any equation consulted an out-of-range position.
    pub fn used_out_of_range(&self) -> bool {
        self.out_of_range
    }

    /// `|X|_j`, restricted to states reachable from the root.
    pub fn at(&self, j: i64) -> LinearSpec {
        self.spec
            .rooted_at(self.state_of(j))
            .expect("state exists")
            .restrict_reachable()
    }
}

/// `|X|_j` for any integer `j`.
pub fn extract_at(x: &CodeSeq, j: i64) -> LinearSpec {
    if j < 1 || j as usize > x.len() {
        return LinearSpec::deadlock();
    }
    ExtractionResult::new(x).at(j)
}

/// Left-to-right extraction, `|X|_1`.
pub fn extract_ltr(x: &CodeSeq) -> LinearSpec {
    extract_at(x, 1)
}

/// Right-to-left extraction, `|X|_ℓ(X)`.
pub fn extract_rtl(x: &CodeSeq) -> LinearSpec {
    extract_at(x, x.len() as i64)
}

/// Prepends `left` and appends `right` abort instructions.
pub fn pad(x: &CodeSeq, left: usize, right: usize) -> CodeSeq {
    let mut v = vec![Instruction::Abort; left];
    v.extend_from_slice(x.instructions());
    v.extend(std::iter::repeat_n(Instruction::Abort, right));
    CodeSeq::new(v).expect("padding keeps the sequence non-empty")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Ltr,
    Rtl,
}

/// Code whose left-to-right (resp. right-to-left) extraction is `|X|_k`:
/// `/#k;X` or `X;\#(ℓ(X)+1−k)`. Requires `X` to be a C-program.
pub fn entry_normalize(x: &CodeSeq, k: i64, orientation: Orientation) -> Result<CodeSeq> {
    if !x.is_program() {
        return Err(Error::NotAProgram(x.to_string()));
    }
    if k < 1 || k as usize > x.len() {
        return Err(Error::PositionOutOfRange {
            position: k,
            len: x.len(),
        });
    }
    let k = k as u32;
    Ok(match orientation {
        Orientation::Ltr => {
            CodeSeq::single(Instruction::Jump(Direction::Forward, k))?.concat(x)
        }
        Orientation::Rtl => x.concat(&CodeSeq::single(Instruction::Jump(
            Direction::Backward,
            x.len() as u32 + 1 - k,
        ))?),
    })
}
