//! Instruction sequences without directional bias.
//!
//! The crate models the semigroup of C-expressions (forward and backward
//! basic, test and jump instructions plus `!` and `#`), extracts regular
//! threads from them, decides thread equality, and implements the family of
//! behavior-preserving transformations between code and threads:
//!
//! * [`code`]: instructions, sequences, textual syntax and syntactic predicates
//! * [`thread`]: finite threads, linear recursive specifications, approximation
//! * [`equality`]: partition-refinement equality and minimization
//! * [`bijection`]: structural bijections on threads
//! * [`extract`]: thread extraction from any position
//! * [`transform`]: homomorphisms, `rev`, swap/flip automorphisms
//! * [`codegen`]: encoders from threads back to code, the P^F family
//! * [`pga`]: the PGA projection and embedding
//! * [`service`]: Boolean registers, bounded stacks and the use operator
//! * [`anp`]: the a-n-property and the Z_n family

pub mod action;
pub mod anp;
pub mod bijection;
pub mod code;
pub mod codegen;
pub mod equality;
pub mod error;
pub mod extract;
pub mod par;
pub mod pga;
pub mod service;
pub mod thread;
pub mod transform;

pub use action::Action;
pub use code::{CodeSeq, Instruction, InstructionKind};
pub use equality::decide_equal;
pub use error::{Error, Result};
pub use extract::{extract_at, extract_ltr, extract_rtl};
pub use thread::{FiniteThread, LinearSpec, Node};
