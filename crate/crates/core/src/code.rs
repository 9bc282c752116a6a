//! C-instructions, code sequences and their textual syntax.

use std::fmt;
use std::str::FromStr;

use crate::action::{scan_name, Action};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    pub fn reversed(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }

    /// +1 for forward, -1 for backward.
    pub fn sign(self) -> i64 {
        match self {
            Direction::Forward => 1,
            Direction::Backward => -1,
        }
    }
}

/// A single C-instruction. Jump counters are at least 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Instruction {
    Basic(Direction, Action),
    PosTest(Direction, Action),
    NegTest(Direction, Action),
    Jump(Direction, u32),
    Halt,
    Abort,
}

/// The ten instruction kinds, used for instruction-set restrictions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InstructionKind {
    FwdBasic,
    FwdPosTest,
    FwdNegTest,
    FwdJump,
    BwdBasic,
    BwdPosTest,
    BwdNegTest,
    BwdJump,
    Halt,
    Abort,
}

impl InstructionKind {
    pub const ALL: [InstructionKind; 10] = [
        InstructionKind::FwdBasic,
        InstructionKind::FwdPosTest,
        InstructionKind::FwdNegTest,
        InstructionKind::FwdJump,
        InstructionKind::BwdBasic,
        InstructionKind::BwdPosTest,
        InstructionKind::BwdNegTest,
        InstructionKind::BwdJump,
        InstructionKind::Halt,
        InstructionKind::Abort,
    ];

    /// `{+/a, /#k, \#k, !}`: the C⁻ instruction set.
    pub const C_MINUS: [InstructionKind; 4] = [
        InstructionKind::FwdPosTest,
        InstructionKind::FwdJump,
        InstructionKind::BwdJump,
        InstructionKind::Halt,
    ];

    /// `{+/a, /#k, \#k, !, #}`: the image of the positive-test homomorphism.
    pub const POSITIVE_FORWARD: [InstructionKind; 5] = [
        InstructionKind::FwdPosTest,
        InstructionKind::FwdJump,
        InstructionKind::BwdJump,
        InstructionKind::Halt,
        InstructionKind::Abort,
    ];
}

impl Instruction {
    pub fn kind(&self) -> InstructionKind {
        use Direction::*;
        match self {
            Instruction::Basic(Forward, _) => InstructionKind::FwdBasic,
            Instruction::PosTest(Forward, _) => InstructionKind::FwdPosTest,
            Instruction::NegTest(Forward, _) => InstructionKind::FwdNegTest,
            Instruction::Jump(Forward, _) => InstructionKind::FwdJump,
            Instruction::Basic(Backward, _) => InstructionKind::BwdBasic,
            Instruction::PosTest(Backward, _) => InstructionKind::BwdPosTest,
            Instruction::NegTest(Backward, _) => InstructionKind::BwdNegTest,
            Instruction::Jump(Backward, _) => InstructionKind::BwdJump,
            Instruction::Halt => InstructionKind::Halt,
            Instruction::Abort => InstructionKind::Abort,
        }
    }

    pub fn action(&self) -> Option<&Action> {
        match self {
            Instruction::Basic(_, a) | Instruction::PosTest(_, a) | Instruction::NegTest(_, a) => {
                Some(a)
            }
            _ => None,
        }
    }

    pub fn fwd_jump(k: u32) -> Self {
        Instruction::Jump(Direction::Forward, k)
    }

    pub fn bwd_jump(k: u32) -> Self {
        Instruction::Jump(Direction::Backward, k)
    }

    /// A jump by a signed displacement; zero is not a jump and yields `#`.
    pub fn jump_by(displacement: i64) -> Self {
        match displacement {
            0 => Instruction::Abort,
            d if d > 0 => Instruction::fwd_jump(d as u32),
            d => Instruction::bwd_jump((-d) as u32),
        }
    }

    /// Relative successor offsets this instruction may transfer control to.
    pub fn successor_offsets(&self) -> Vec<i64> {
        match self {
            Instruction::Basic(d, _) => vec![d.sign()],
            Instruction::PosTest(d, _) | Instruction::NegTest(d, _) => {
                vec![d.sign(), 2 * d.sign()]
            }
            Instruction::Jump(d, k) => vec![d.sign() * *k as i64],
            Instruction::Halt | Instruction::Abort => Vec::new(),
        }
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let slash = |d: &Direction| match d {
            Direction::Forward => "/",
            Direction::Backward => "\\",
        };
        match self {
            Instruction::Basic(d, a) => write!(f, "{}{}", slash(d), a),
            Instruction::PosTest(d, a) => write!(f, "+{}{}", slash(d), a),
            Instruction::NegTest(d, a) => write!(f, "-{}{}", slash(d), a),
            Instruction::Jump(d, k) => write!(f, "{}#{}", slash(d), k),
            Instruction::Halt => f.write_str("!"),
            Instruction::Abort => f.write_str("#"),
        }
    }
}

/// A non-empty finite sequence of C-instructions.
///
/// Concatenation is flat, so associativity holds by representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CodeSeq {
    instructions: Vec<Instruction>,
}

impl CodeSeq {
    pub fn new(instructions: Vec<Instruction>) -> Result<Self> {
        if instructions.is_empty() {
            return Err(Error::Empty);
        }
        if instructions
            .iter()
            .any(|i| matches!(i, Instruction::Jump(_, 0)))
        {
            return Err(Error::ZeroCounter { offset: 0 });
        }
        Ok(CodeSeq { instructions })
    }

    pub fn single(instruction: Instruction) -> Result<Self> {
        CodeSeq::new(vec![instruction])
    }

    /// ℓ(X)
    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn into_instructions(self) -> Vec<Instruction> {
        self.instructions
    }

    /// Instruction at 1-based position `j`, if in range.
    pub fn at(&self, j: i64) -> Option<&Instruction> {
        if j >= 1 {
            self.instructions.get(j as usize - 1)
        } else {
            None
        }
    }

    pub fn concat(&self, other: &CodeSeq) -> CodeSeq {
        let mut instructions = Vec::with_capacity(self.len() + other.len());
        instructions.extend_from_slice(&self.instructions);
        instructions.extend_from_slice(&other.instructions);
        CodeSeq { instructions }
    }

    /// All distinct actions, sorted.
    pub fn actions(&self) -> Vec<Action> {
        let mut out: Vec<Action> = self
            .instructions
            .iter()
            .filter_map(|i| i.action().cloned())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// True iff no position references a successor outside `1..=ℓ(X)`.
    pub fn is_program(&self) -> bool {
        let n = self.len() as i64;
        self.instructions.iter().enumerate().all(|(idx, ins)| {
            let j = idx as i64 + 1;
            ins.successor_offsets()
                .into_iter()
                .all(|off| (1..=n).contains(&(j + off)))
        })
    }

    /// Membership in C_k: every jump counter is at most `k`.
    pub fn is_in_ck(&self, k: u32) -> bool {
        self.instructions
            .iter()
            .all(|i| !matches!(i, Instruction::Jump(_, c) if *c > k))
    }

    pub fn max_jump_counter(&self) -> Option<u32> {
        self.instructions
            .iter()
            .filter_map(|i| match i {
                Instruction::Jump(_, k) => Some(*k),
                _ => None,
            })
            .max()
    }

    pub fn uses_only(&self, allowed: &[InstructionKind]) -> bool {
        self.instructions.iter().all(|i| allowed.contains(&i.kind()))
    }
}

impl fmt::Display for CodeSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, ins) in self.instructions.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{ins}")?;
        }
        Ok(())
    }
}

impl FromStr for CodeSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

pub fn parse(text: &str) -> Result<CodeSeq> {
    if text.trim().is_empty() {
        return Err(Error::Empty);
    }
    let mut instructions = Vec::new();
    let mut offset = 0;
    for piece in text.split(';') {
        let lead = piece.len() - piece.trim_start().len();
        instructions.push(parse_instruction(piece.trim(), offset + lead)?);
        offset += piece.len() + 1;
    }
    Ok(CodeSeq { instructions })
}

pub fn print(x: &CodeSeq) -> String {
    x.to_string()
}

fn parse_instruction(tok: &str, offset: usize) -> Result<Instruction> {
    let syntax = |reason: &str| Error::Syntax {
        offset,
        reason: reason.to_string(),
    };
    if tok.is_empty() {
        return Err(syntax("expected an instruction"));
    }
    match tok {
        "!" => return Ok(Instruction::Halt),
        "#" => return Ok(Instruction::Abort),
        _ => {}
    }
    // Optional sign, accepting U+2212 as a minus.
    let (sign, rest) = if let Some(r) = tok.strip_prefix('+') {
        (Some(true), r)
    } else if let Some(r) = tok.strip_prefix('-').or_else(|| tok.strip_prefix('\u{2212}')) {
        (Some(false), r)
    } else {
        (None, tok)
    };
    let (dir, rest) = if let Some(r) = rest.strip_prefix('/') {
        (Direction::Forward, r)
    } else if let Some(r) = rest.strip_prefix('\\') {
        (Direction::Backward, r)
    } else {
        return Err(syntax("expected `/` or `\\`"));
    };
    if let Some(digits) = rest.strip_prefix('#') {
        if sign.is_some() {
            return Err(syntax("jumps take no sign"));
        }
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(syntax("expected a decimal jump counter"));
        }
        let k: u32 = digits
            .parse()
            .map_err(|_| syntax("jump counter too large"))?;
        if k == 0 {
            return Err(Error::ZeroCounter { offset });
        }
        return Ok(Instruction::Jump(dir, k));
    }
    if scan_name(rest) != rest.len() || rest.is_empty() {
        return Err(syntax("invalid action name"));
    }
    let a = Action::new(rest)?;
    Ok(match sign {
        None => Instruction::Basic(dir, a),
        Some(true) => Instruction::PosTest(dir, a),
        Some(false) => Instruction::NegTest(dir, a),
    })
}
