#![allow(dead_code)]

use cseq::code::Direction;
use cseq::pga::{PgaInstruction, PgaProgram};
use cseq::transform::TecAutomorphism;
use cseq::{Action, CodeSeq, FiniteThread, Instruction, LinearSpec, Node};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ACTIONS: [&str; 4] = ["a", "b", "c", "d"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn act(s: &str) -> Action {
    Action::new(s).unwrap()
}

pub fn code(s: &str) -> CodeSeq {
    s.parse().unwrap()
}

fn pick_action(rng: &mut impl Rng, actions: usize) -> Action {
    act(ACTIONS[rng.gen_range(0..actions)])
}

pub fn random_spec(rng: &mut impl Rng, max_states: usize, actions: usize) -> LinearSpec {
    let n = rng.gen_range(1..=max_states);
    let nodes = (0..n)
        .map(|_| match rng.gen_range(0..6) {
            0 => Node::S,
            1 => Node::D,
            _ => Node::Post {
                action: pick_action(rng, actions),
                on_true: rng.gen_range(0..n),
                on_false: rng.gen_range(0..n),
            },
        })
        .collect();
    LinearSpec::new(nodes, rng.gen_range(0..n)).unwrap()
}

/// A C-program: every instruction is chosen among those whose successors stay
/// inside the sequence.
pub fn random_program(rng: &mut impl Rng, max_len: usize, actions: usize) -> CodeSeq {
    let len = rng.gen_range(1..=max_len);
    let fwd = Direction::Forward;
    let bwd = Direction::Backward;
    let ins = (1..=len)
        .map(|i| {
            let mut options: Vec<Instruction> = vec![Instruction::Halt, Instruction::Abort];
            let a = pick_action(rng, actions);
            if i < len {
                options.push(Instruction::Basic(fwd, a.clone()));
                options.push(Instruction::fwd_jump(rng.gen_range(1..=(len - i) as u32)));
            }
            if i + 1 < len {
                options.push(Instruction::PosTest(fwd, a.clone()));
                options.push(Instruction::NegTest(fwd, a.clone()));
            }
            if i > 1 {
                options.push(Instruction::Basic(bwd, a.clone()));
                options.push(Instruction::bwd_jump(rng.gen_range(1..i as u32)));
            }
            if i > 2 {
                options.push(Instruction::PosTest(bwd, a.clone()));
                options.push(Instruction::NegTest(bwd, a));
            }
            options.choose(rng).unwrap().clone()
        })
        .collect();
    let x = CodeSeq::new(ins).unwrap();
    assert!(x.is_program());
    x
}

/// Any C-expression, out-of-range successors included.
pub fn random_expression(rng: &mut impl Rng, max_len: usize, actions: usize) -> CodeSeq {
    let len = rng.gen_range(1..=max_len);
    let ins = (0..len)
        .map(|_| {
            let dir = if rng.gen_bool(0.5) {
                Direction::Forward
            } else {
                Direction::Backward
            };
            let a = pick_action(rng, actions);
            match rng.gen_range(0..6) {
                0 => Instruction::Basic(dir, a),
                1 => Instruction::PosTest(dir, a),
                2 => Instruction::NegTest(dir, a),
                3 => Instruction::Jump(dir, rng.gen_range(1..=len as u32 + 1)),
                4 => Instruction::Halt,
                _ => Instruction::Abort,
            }
        })
        .collect();
    CodeSeq::new(ins).unwrap()
}

pub fn random_pga_instruction(rng: &mut impl Rng, actions: usize) -> PgaInstruction {
    let a = pick_action(rng, actions);
    match rng.gen_range(0..6) {
        0 => PgaInstruction::Basic(a),
        1 => PgaInstruction::PosTest(a),
        2 => PgaInstruction::NegTest(a),
        3 => PgaInstruction::Jump(rng.gen_range(0..6)),
        4 => PgaInstruction::Halt,
        _ => PgaInstruction::Basic(a),
    }
}

pub fn random_pga_block(rng: &mut impl Rng, min: usize, max: usize) -> Vec<PgaInstruction> {
    let len = rng.gen_range(min..=max);
    (0..len).map(|_| random_pga_instruction(rng, 3)).collect()
}

pub fn random_pga(rng: &mut impl Rng) -> PgaProgram {
    loop {
        let prefix = random_pga_block(rng, 0, 5);
        let period = if rng.gen_bool(0.7) {
            random_pga_block(rng, 1, 5)
        } else {
            Vec::new()
        };
        if let Ok(p) = PgaProgram::new(prefix, period) {
            return p;
        }
    }
}

pub fn random_tec(rng: &mut impl Rng, actions: usize) -> TecAutomorphism {
    let steps = rng.gen_range(0..=5);
    (0..steps).fold(TecAutomorphism::identity(), |acc, _| {
        let g = if rng.gen_bool(0.5) {
            TecAutomorphism::flip(pick_action(rng, actions))
        } else {
            TecAutomorphism::swap(pick_action(rng, actions), pick_action(rng, actions))
        };
        acc.compose(&g)
    })
}

/// Equality by comparing depth-(n−1) approximations, `n` the total number of
/// states of both specifications.
pub fn pi_oracle_equal(p: &LinearSpec, q: &LinearSpec) -> bool {
    let depth = (p.len() + q.len()).saturating_sub(1);
    p.pi(depth) == q.pi(depth)
}

pub fn finite_chain(actions: &[&str], end: FiniteThread) -> FiniteThread {
    actions
        .iter()
        .rev()
        .fold(end, |t, a| FiniteThread::prefix(act(a), t))
}
