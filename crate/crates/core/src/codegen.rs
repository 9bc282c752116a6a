//! Encoders from regular threads to C-programs, and the P^F thread family.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::action::Action;
use crate::code::{CodeSeq, Instruction};
use crate::error::{Error, Result};
use crate::par::{count_distinct, map_range, Execution};
use crate::thread::{FiniteThread, LinearSpec, Node};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncoderOutput {
    pub code: CodeSeq,
    /// State index → 1-based position of its three-instruction block.
    pub block_of: BTreeMap<usize, usize>,
}

#[derive(Clone, Copy)]
enum Terminals {
    WithAbort,
    CMinus,
}

/// One three-instruction block per state, root first: `!;#;#` for S,
/// `#;#;#` for D and `+/a;jump(p);jump(q)` for `x_j ◁ a ▷ x_k`, with
/// `p = 3(j−i)−1` and `q = 3(k−i)−2` in the 1-based block order.
pub fn spec_to_code(spec: &LinearSpec) -> EncoderOutput {
    encode(spec, Terminals::WithAbort)
}

/// As [`spec_to_code`] but within C⁻: `!;/#1;\#1` for S and `/#1;/#1;\#1`
/// for D.
pub fn spec_to_code_cminus(spec: &LinearSpec) -> EncoderOutput {
    encode(spec, Terminals::CMinus)
}

fn encode(spec: &LinearSpec, terminals: Terminals) -> EncoderOutput {
    // Root moves to the front; the others keep their relative order.
    let mut order = vec![spec.root()];
    order.extend((0..spec.len()).filter(|&i| i != spec.root()));
    let mut rank = vec![0i64; spec.len()];
    for (r, &state) in order.iter().enumerate() {
        rank[state] = r as i64 + 1;
    }

    let mut code = Vec::with_capacity(3 * spec.len());
    let mut block_of = BTreeMap::new();
    for &state in &order {
        let i = rank[state];
        block_of.insert(state, (3 * (i - 1) + 1) as usize);
        match (spec.node(state), terminals) {
            (Node::S, Terminals::WithAbort) => {
                code.extend([Instruction::Halt, Instruction::Abort, Instruction::Abort])
            }
            (Node::D, Terminals::WithAbort) => {
                code.extend([Instruction::Abort, Instruction::Abort, Instruction::Abort])
            }
            (Node::S, Terminals::CMinus) => code.extend([
                Instruction::Halt,
                Instruction::fwd_jump(1),
                Instruction::bwd_jump(1),
            ]),
            (Node::D, Terminals::CMinus) => code.extend([
                Instruction::fwd_jump(1),
                Instruction::fwd_jump(1),
                Instruction::bwd_jump(1),
            ]),
            (
                Node::Post {
                    action,
                    on_true,
                    on_false,
                },
                _,
            ) => {
                let p = 3 * (rank[*on_true] - i) - 1;
                let q = 3 * (rank[*on_false] - i) - 2;
                code.extend([
                    Instruction::PosTest(crate::code::Direction::Forward, action.clone()),
                    Instruction::jump_by(p),
                    Instruction::jump_by(q),
                ]);
            }
        }
    }
    EncoderOutput {
        code: CodeSeq::new(code).expect("a spec has at least one state"),
        block_of,
    }
}

/// A linear specification with one state per distinct subtree of `t`.
pub fn spec_from_finite(t: &FiniteThread) -> LinearSpec {
    fn intern<'a>(
        t: &'a FiniteThread,
        ids: &mut HashMap<&'a FiniteThread, usize>,
        nodes: &mut Vec<Node>,
    ) -> usize {
        if let Some(&id) = ids.get(t) {
            return id;
        }
        let node = match t {
            FiniteThread::S => Node::S,
            FiniteThread::D => Node::D,
            FiniteThread::Post(a, p, q) => {
                let on_true = intern(p, ids, nodes);
                let on_false = intern(q, ids, nodes);
                Node::Post {
                    action: a.clone(),
                    on_true,
                    on_false,
                }
            }
        };
        nodes.push(node);
        ids.insert(t, nodes.len() - 1);
        nodes.len() - 1
    }

    let mut ids = HashMap::new();
    let mut nodes = Vec::new();
    let root = intern(t, &mut ids, &mut nodes);
    LinearSpec::new(nodes, root)
        .expect("interned subtrees are closed")
        .restrict_reachable()
}

/// `P^F_{n−1}` where `P^F_0 = S` and `P^F_{i+1} = P^F_{F(i+1)} ◁ a ▷ P^F_i`.
/// `f[i-1]` holds `F(i)` for `i` in `1..n`; state `i` is `P^F_i`.
pub fn pf_thread(n: usize, f: &[usize]) -> Result<LinearSpec> {
    if n == 0 || f.len() != n - 1 {
        return Err(Error::InvalidSpec(format!(
            "F must have exactly {} values",
            n.saturating_sub(1)
        )));
    }
    if let Some((i, &v)) = f.iter().enumerate().find(|(_, &v)| v >= n) {
        return Err(Error::FunctionOutOfRange {
            arg: i + 1,
            value: v,
            n,
        });
    }
    let a = Action::new("a").expect("valid name");
    let mut nodes = vec![Node::S];
    for i in 1..n {
        nodes.push(Node::Post {
            action: a.clone(),
            on_true: f[i - 1],
            on_false: i - 1,
        });
    }
    LinearSpec::new(nodes, n - 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiEntry {
    /// `F(1), …, F(n−1)`
    pub f: Vec<usize>,
    pub length: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiReport {
    pub k: usize,
    pub n: usize,
    pub entries: Vec<PsiEntry>,
    pub max_length: usize,
    pub distinct_count: usize,
    pub expected_distinct: u128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PsiSummary {
    pub n: usize,
    pub max_length: usize,
    pub distinct_count: usize,
    pub expected_distinct: u128,
}

impl PsiReport {
    pub fn summary(&self) -> PsiSummary {
        PsiSummary {
            n: self.n,
            max_length: self.max_length,
            distinct_count: self.distinct_count,
            expected_distinct: self.expected_distinct,
        }
    }
}

pub const DEFAULT_PSI_CAP: u128 = 100_000;

/// Encodes every `P^F_{n−1}` (one action, so any `k ≥ 1` admits them) and
/// counts the pairwise distinct threads among them.
pub fn psi_experiment(k: usize, n: usize, cap: u128) -> Result<PsiReport> {
    psi_experiment_with(k, n, cap, Execution::default())
}

pub fn psi_experiment_with(k: usize, n: usize, cap: u128, exec: Execution) -> Result<PsiReport> {
    if k == 0 || n == 0 {
        return Err(Error::InvalidSpec("k and n must be positive".into()));
    }
    let required = (n as u128)
        .checked_pow((n - 1) as u32)
        .unwrap_or(u128::MAX);
    if required > cap {
        return Err(Error::CapExceeded { required, cap });
    }
    let total = required as usize;
    let functions = map_range(total, exec, |idx| {
        // Base-n digits of idx, least significant first, are F(1), …, F(n−1).
        let mut rest = idx;
        (1..n)
            .map(|_| {
                let d = rest % n;
                rest /= n;
                d
            })
            .collect::<Vec<usize>>()
    });
    let specs = map_range(total, exec, |i| {
        pf_thread(n, &functions[i]).expect("digits are in range")
    });
    let lengths = map_range(total, exec, |i| spec_to_code(&specs[i]).code.len());
    let distinct_count = count_distinct(&specs, exec);
    let entries: Vec<PsiEntry> = functions
        .into_iter()
        .zip(lengths)
        .map(|(f, length)| PsiEntry { f, length })
        .collect();
    Ok(PsiReport {
        k,
        n,
        max_length: entries.iter().map(|e| e.length).max().unwrap_or(0),
        entries,
        distinct_count,
        expected_distinct: required,
    })
}
