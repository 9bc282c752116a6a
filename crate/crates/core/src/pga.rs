//! PGA programs in canonical `prefix;(period)^ω` form, their thread
//! extraction, the projection `p2pga = F∘h` and the embedding into C.

use std::fmt;
use std::str::FromStr;

use crate::action::{scan_name, Action};
use crate::code::{CodeSeq, Direction, Instruction};
use crate::error::{Error, Result};
use crate::thread::{LinearSpec, Node};
use crate::transform::apply_h;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PgaInstruction {
    Basic(Action),
    PosTest(Action),
    NegTest(Action),
    /// `#k`, `k ≥ 0`
    Jump(u32),
    Halt,
}

impl fmt::Display for PgaInstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PgaInstruction::Basic(a) => write!(f, "{a}"),
            PgaInstruction::PosTest(a) => write!(f, "+{a}"),
            PgaInstruction::NegTest(a) => write!(f, "-{a}"),
            PgaInstruction::Jump(k) => write!(f, "#{k}"),
            PgaInstruction::Halt => f.write_str("!"),
        }
    }
}

/// `prefix` alone when `period` is empty, else `prefix;(period)^ω`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PgaProgram {
    prefix: Vec<PgaInstruction>,
    period: Vec<PgaInstruction>,
}

impl PgaProgram {
    pub fn new(prefix: Vec<PgaInstruction>, period: Vec<PgaInstruction>) -> Result<Self> {
        if prefix.is_empty() && period.is_empty() {
            return Err(Error::Empty);
        }
        Ok(PgaProgram { prefix, period })
    }

    pub fn prefix(&self) -> &[PgaInstruction] {
        &self.prefix
    }

    pub fn period(&self) -> &[PgaInstruction] {
        &self.period
    }

    pub fn is_periodic(&self) -> bool {
        !self.period.is_empty()
    }

    fn window_len(&self) -> u64 {
        (self.prefix.len() + self.period.len()) as u64
    }

    /// Maps a 1-based position of the infinite unfolding into the window
    /// `1..=prefix+period`; `None` past the end of a finite program.
    fn reduce(&self, t: u64) -> Option<u64> {
        let (p, m) = (self.prefix.len() as u64, self.period.len() as u64);
        if t <= p + m {
            Some(t)
        } else if m == 0 {
            None
        } else {
            Some(p + (t - p - 1) % m + 1)
        }
    }

    fn at(&self, i: u64) -> &PgaInstruction {
        let i = i as usize - 1;
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.period[i - self.prefix.len()]
        }
    }

    fn instructions(&self) -> impl Iterator<Item = &PgaInstruction> {
        self.prefix.iter().chain(self.period.iter())
    }
}

impl fmt::Display for PgaProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[PgaInstruction]| {
            v.iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(";")
        };
        match (self.prefix.is_empty(), self.period.is_empty()) {
            (_, true) => f.write_str(&join(&self.prefix)),
            (true, false) => write!(f, "({})^w", join(&self.period)),
            (false, false) => write!(f, "{};({})^w", join(&self.prefix), join(&self.period)),
        }
    }
}

/// A PGA term with arbitrary nesting of concatenation and repetition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PgaTerm {
    Instr(PgaInstruction),
    Concat(Vec<PgaTerm>),
    Repeat(Box<PgaTerm>),
}

impl PgaTerm {
    /// Two-part normal form, using `X^ω;Y = X^ω` and `(X^ω)^ω = X^ω`.
    pub fn canonicalize(&self) -> Result<PgaProgram> {
        let (prefix, period) = self.canon();
        PgaProgram::new(prefix, period.unwrap_or_default())
    }

    fn canon(&self) -> (Vec<PgaInstruction>, Option<Vec<PgaInstruction>>) {
        match self {
            PgaTerm::Instr(i) => (vec![i.clone()], None),
            PgaTerm::Concat(parts) => {
                let mut prefix = Vec::new();
                for part in parts {
                    let (p, period) = part.canon();
                    prefix.extend(p);
                    if period.is_some() {
                        return (prefix, period);
                    }
                }
                (prefix, None)
            }
            PgaTerm::Repeat(inner) => match inner.canon() {
                (p, Some(period)) => (p, Some(period)),
                (p, None) if p.is_empty() => (p, None),
                (p, None) => (Vec::new(), Some(p)),
            },
        }
    }
}

pub fn parse_pga_term(text: &str) -> Result<PgaTerm> {
    let mut parser = Parser { s: text, pos: 0 };
    parser.skip_ws();
    if parser.pos == text.len() {
        return Err(Error::Empty);
    }
    let term = parser.sequence()?;
    parser.skip_ws();
    if parser.pos != text.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(term)
}

pub fn parse_pga(text: &str) -> Result<PgaProgram> {
    parse_pga_term(text)?.canonicalize()
}

pub fn print_pga(p: &PgaProgram) -> String {
    p.to_string()
}

impl FromStr for PgaProgram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_pga(s)
    }
}

struct Parser<'a> {
    s: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, reason: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            reason: reason.to_string(),
        }
    }

    fn rest(&self) -> &str {
        &self.s[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.s.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn sequence(&mut self) -> Result<PgaTerm> {
        let mut parts = vec![self.item()?];
        while self.eat(";") {
            parts.push(self.item()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            PgaTerm::Concat(parts)
        })
    }

    fn item(&mut self) -> Result<PgaTerm> {
        self.skip_ws();
        if self.eat("(") {
            let inner = self.sequence()?;
            if !self.eat(")") {
                return Err(self.error("expected `)`"));
            }
            if self.eat("^w") || self.eat("^ω") {
                return Ok(PgaTerm::Repeat(Box::new(inner)));
            }
            return Ok(inner);
        }
        self.instruction().map(PgaTerm::Instr)
    }

    fn instruction(&mut self) -> Result<PgaInstruction> {
        if self.eat("!") {
            return Ok(PgaInstruction::Halt);
        }
        if self.eat("#") {
            let digits: usize = self.rest().bytes().take_while(u8::is_ascii_digit).count();
            if digits == 0 {
                return Err(self.error("expected a jump counter"));
            }
            let k = self.rest()[..digits]
                .parse()
                .map_err(|_| self.error("jump counter too large"))?;
            self.pos += digits;
            return Ok(PgaInstruction::Jump(k));
        }
        let sign = if self.eat("+") {
            Some(true)
        } else if self.eat("-") || self.eat("\u{2212}") {
            Some(false)
        } else {
            None
        };
        let len = scan_name(self.rest());
        if len == 0 {
            return Err(self.error("expected an instruction"));
        }
        let a = Action::new(&self.rest()[..len])?;
        self.pos += len;
        Ok(match sign {
            None => PgaInstruction::Basic(a),
            Some(true) => PgaInstruction::PosTest(a),
            Some(false) => PgaInstruction::NegTest(a),
        })
    }
}

/// Thread extraction on the SPI denoted by `p`. Positions past the end of a
/// finite program denote `D`; positions past a period wrap into it; a jump
/// chain that never reaches a non-jump instruction denotes `D`.
pub fn pga_extract(p: &PgaProgram) -> LinearSpec {
    const S: usize = 0;
    const D: usize = 1;
    let len = p.window_len();
    let mut own = vec![usize::MAX; len as usize];
    let mut next = 2;
    for (i, ins) in p.instructions().enumerate() {
        if !matches!(ins, PgaInstruction::Jump(_) | PgaInstruction::Halt) {
            own[i] = next;
            next += 1;
        }
    }
    let resolve = |start: u64| -> usize {
        let mut visited = Vec::new();
        let mut t = start;
        loop {
            let Some(i) = p.reduce(t) else { return D };
            match p.at(i) {
                PgaInstruction::Halt => return S,
                PgaInstruction::Jump(0) => return D,
                PgaInstruction::Jump(k) => {
                    if visited.contains(&i) {
                        return D;
                    }
                    visited.push(i);
                    t = i + *k as u64;
                }
                _ => return own[i as usize - 1],
            }
        }
    };
    let mut nodes = vec![Node::S, Node::D];
    for (idx, ins) in p.instructions().enumerate() {
        let i = idx as u64 + 1;
        match ins {
            PgaInstruction::Basic(a) => nodes.push(Node::prefix(a.clone(), resolve(i + 1))),
            PgaInstruction::PosTest(a) => nodes.push(Node::Post {
                action: a.clone(),
                on_true: resolve(i + 1),
                on_false: resolve(i + 2),
            }),
            PgaInstruction::NegTest(a) => nodes.push(Node::Post {
                action: a.clone(),
                on_true: resolve(i + 2),
                on_false: resolve(i + 1),
            }),
            _ => {}
        }
    }
    let root = resolve(1);
    LinearSpec::new(nodes, root)
        .expect("extraction builds a closed spec")
        .restrict_reachable()
}

/// `F(h(X))`: the purely periodic PGA program for a C-program `X`.
pub fn p2pga(x: &CodeSeq) -> Result<PgaProgram> {
    if !x.is_program() {
        return Err(Error::NotAProgram(x.to_string()));
    }
    let y = apply_h(x);
    let n = y.len() as u32;
    let period = y
        .instructions()
        .iter()
        .map(|i| match i {
            Instruction::Basic(Direction::Forward, a) => PgaInstruction::Basic(a.clone()),
            Instruction::PosTest(Direction::Forward, a) => PgaInstruction::PosTest(a.clone()),
            Instruction::NegTest(Direction::Forward, a) => PgaInstruction::NegTest(a.clone()),
            Instruction::Jump(Direction::Forward, k) => PgaInstruction::Jump(*k),
            Instruction::Jump(Direction::Backward, k) => PgaInstruction::Jump(n - k),
            Instruction::Halt => PgaInstruction::Halt,
            Instruction::Abort => PgaInstruction::Jump(0),
            other => unreachable!("h leaves no backward basic or test instruction: {other}"),
        })
        .collect();
    PgaProgram::new(Vec::new(), period)
}

/// Embeds a PGA program into C. Jumps that leave the window are reduced into
/// the period; a reduced jump onto itself becomes `#`. When control can fall
/// through past the end of the period, up to two backward jumps are appended
/// to wrap it around.
pub fn pga2c(p: &PgaProgram) -> CodeSeq {
    let len = p.window_len();
    let mut out = Vec::new();
    let mut overflow = 0u64;
    for (idx, ins) in p.instructions().enumerate() {
        let i = idx as u64 + 1;
        let fwd = Direction::Forward;
        out.push(match ins {
            PgaInstruction::Basic(a) => {
                overflow = overflow.max((i + 1).saturating_sub(len));
                Instruction::Basic(fwd, a.clone())
            }
            PgaInstruction::PosTest(a) => {
                overflow = overflow.max((i + 2).saturating_sub(len));
                Instruction::PosTest(fwd, a.clone())
            }
            PgaInstruction::NegTest(a) => {
                overflow = overflow.max((i + 2).saturating_sub(len));
                Instruction::NegTest(fwd, a.clone())
            }
            PgaInstruction::Halt => Instruction::Halt,
            PgaInstruction::Jump(0) => Instruction::Abort,
            PgaInstruction::Jump(k) => match p.reduce(i + *k as u64) {
                Some(t) => Instruction::jump_by(t as i64 - i as i64),
                None => Instruction::fwd_jump(*k),
            },
        });
    }
    if p.is_periodic() {
        for t in 1..=overflow {
            let target = p.reduce(len + t).expect("periodic");
            out.push(Instruction::bwd_jump((len + t - target) as u32));
        }
    }
    CodeSeq::new(out).expect("program is non-empty")
}
