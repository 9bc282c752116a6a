use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use cseq::anp::{code_has_a_n_property, zn_program};
use cseq::codegen::{psi_experiment, spec_to_code, spec_to_code_cminus, DEFAULT_PSI_CAP};
use cseq::pga::{p2pga, parse_pga, pga2c};
use cseq::service::{use_service, AnyService};
use cseq::transform::{apply_g, apply_h, apply_h_pos, flip, rev, swap};
use cseq::{decide_equal, extract_at, extract_ltr, extract_rtl};
use cseq::{Action, CodeSeq, Error, InstructionKind, LinearSpec};

/// Instruction sequences, thread extraction and code transformations.
///
/// Any CODE, SPEC or PGA argument written as `@path` is read from that file.
#[derive(Parser)]
#[command(name = "cseq", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse code and print its normal text form
    Parse { code: String },
    /// Extract the thread of CODE as a linear specification
    Extract {
        #[command(flatten)]
        from: Entry,
        code: String,
    },
    /// Decide thread equality; exit 0 if equal, 1 otherwise
    Equal {
        /// Compare left-to-right extractions of two pieces of code
        #[arg(long)]
        code: bool,
        left: String,
        right: String,
    },
    /// Apply a comma-separated pipeline of h, hpos, g, rev, swap:A,B, flip:A
    Transform {
        #[arg(long)]
        pipeline: String,
        code: String,
    },
    /// Encode a specification as a C-program
    Encode {
        /// Restrict the output to +/a, /#k, \#k and !
        #[arg(long)]
        cminus: bool,
        spec: String,
    },
    /// Project a C-program to PGA
    Project { code: String },
    /// Embed a PGA program into C
    Embed { pga: String },
    /// Report syntactic predicates of CODE
    Validate {
        /// Also test membership in C_k
        #[arg(long)]
        k: Option<u32>,
        code: String,
    },
    /// Print the program Z_N
    Zn { n: usize },
    /// Least position with the a-n-property; exit 1 if there is none
    CheckAnp {
        #[arg(long)]
        action: String,
        #[arg(long)]
        n: usize,
        code: String,
    },
    /// Encode every P^F thread for functions F on 1..N and count distinct threads
    Psi {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_PSI_CAP)]
        cap: u128,
        /// Include one entry per function
        #[arg(long)]
        entries: bool,
    },
    /// Compose the extracted thread of CODE with services, left to right
    Use {
        /// Comma-separated, e.g. reg:b1,stack:s:capacity=4:alphabet=2
        #[arg(long)]
        services: String,
        code: String,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Entry {
    /// Start at position J
    #[arg(long, allow_hyphen_values = true)]
    at: Option<i64>,
    /// Start at the first position
    #[arg(long)]
    ltr: bool,
    /// Start at the last position
    #[arg(long)]
    rtl: bool,
}

enum Failure {
    Usage(String),
    Precondition(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Syntax { .. }
            | Error::ZeroCounter { .. }
            | Error::Empty
            | Error::InvalidAction(_)
            | Error::InvalidSpec(_)
            | Error::InvalidService(_) => Failure::Usage(e.to_string()),
            _ => Failure::Precondition(e.to_string()),
        }
    }
}

type Outcome = Result<ExitCode, Failure>;

fn input(arg: &str) -> Result<String, Failure> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map(|s| s.trim_end_matches(['\n', '\r']).to_string())
            .map_err(|e| Failure::Usage(format!("{path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn code(arg: &str) -> Result<CodeSeq, Failure> {
    Ok(input(arg)?.parse::<CodeSeq>()?)
}

fn spec(arg: &str) -> Result<LinearSpec, Failure> {
    Ok(LinearSpec::from_json(&input(arg)?)?)
}

fn action(name: &str) -> Result<Action, Failure> {
    Ok(Action::new(name)?)
}

fn emit_json(value: &impl Serialize) {
    println!("{}", serde_json::to_string(value).expect("serializable"));
}

fn transform(pipeline: &str, mut x: CodeSeq) -> Result<CodeSeq, Failure> {
    let mut steps = pipeline.split(',').map(str::trim);
    while let Some(step) = steps.next() {
        x = match step.split_once(':') {
            None => match step {
                "h" => apply_h(&x),
                "hpos" => apply_h_pos(&x),
                "g" => apply_g(&x),
                "rev" => rev(&x),
                _ => return Err(Failure::Usage(format!("unknown transformation `{step}`"))),
            },
            Some(("swap", a)) => {
                let b = steps
                    .next()
                    .ok_or_else(|| Failure::Usage(format!("`{step}` needs a second action")))?;
                swap(&x, &action(a)?, &action(b)?)
            }
            Some(("flip", a)) => flip(&x, &action(a)?),
            Some(_) => return Err(Failure::Usage(format!("unknown transformation `{step}`"))),
        };
    }
    Ok(x)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Parsed {
    code: String,
    length: usize,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Validation {
    is_program: bool,
    length: usize,
    max_jump_counter: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    is_in_ck: Option<bool>,
    uses_only_c_minus: bool,
    uses_only_positive_forward: bool,
}

#[derive(Serialize)]
struct Position {
    position: Option<usize>,
}

#[derive(Serialize)]
struct Equality {
    equal: bool,
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Parse { code: c } => {
            let x = code(&c)?;
            emit_json(&Parsed {
                code: x.to_string(),
                length: x.len(),
            });
        }
        Command::Extract { from, code: c } => {
            let x = code(&c)?;
            let spec = match (from.at, from.rtl) {
                (Some(j), _) => extract_at(&x, j),
                (None, true) => extract_rtl(&x),
                (None, false) => extract_ltr(&x),
            };
            println!("{}", spec.to_json());
        }
        Command::Equal {
            code: as_code,
            left,
            right,
        } => {
            let (p, q) = if as_code {
                (extract_ltr(&code(&left)?), extract_ltr(&code(&right)?))
            } else {
                (spec(&left)?, spec(&right)?)
            };
            let equal = decide_equal(&p, &q);
            emit_json(&Equality { equal });
            return Ok(if equal { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
        Command::Transform { pipeline, code: c } => {
            println!("{}", transform(&pipeline, code(&c)?)?);
        }
        Command::Encode { cminus, spec: s } => {
            let p = spec(&s)?;
            let out = if cminus {
                spec_to_code_cminus(&p)
            } else {
                spec_to_code(&p)
            };
            println!("{}", out.code);
        }
        Command::Project { code: c } => println!("{}", p2pga(&code(&c)?)?),
        Command::Embed { pga } => println!("{}", pga2c(&parse_pga(&input(&pga)?)?)),
        Command::Validate { k, code: c } => {
            let x = code(&c)?;
            emit_json(&Validation {
                is_program: x.is_program(),
                length: x.len(),
                max_jump_counter: x.max_jump_counter(),
                is_in_ck: k.map(|k| x.is_in_ck(k)),
                uses_only_c_minus: x.uses_only(&InstructionKind::C_MINUS),
                uses_only_positive_forward: x.uses_only(&InstructionKind::POSITIVE_FORWARD),
            });
        }
        Command::Zn { n } => {
            if n == 0 {
                return Err(Failure::Usage("N must be at least 1".into()));
            }
            println!("{}", zn_program(n));
        }
        Command::CheckAnp {
            action: a,
            n,
            code: c,
        } => {
            let position = code_has_a_n_property(&code(&c)?, &action(&a)?, n);
            emit_json(&Position { position });
            if position.is_none() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Psi { n, k, cap, entries } => {
            let report = psi_experiment(k, n, cap)?;
            if entries {
                #[derive(Serialize)]
                struct Full<'a> {
                    #[serde(flatten)]
                    summary: cseq::codegen::PsiSummary,
                    entries: &'a [cseq::codegen::PsiEntry],
                }
                emit_json(&Full {
                    summary: report.summary(),
                    entries: &report.entries,
                });
            } else {
                emit_json(&report.summary());
            }
        }
        Command::Use { services, code: c } => {
            let services = services
                .split(',')
                .map(|s| s.trim().parse::<AnyService>())
                .collect::<Result<Vec<_>, _>>()?;
            let mut p = extract_ltr(&code(&c)?);
            for s in &services {
                p = use_service(&p, s)?;
            }
            println!("{}", p.to_json());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Precondition(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
