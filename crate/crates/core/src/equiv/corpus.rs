//! The stream library the law suites draw their instances from.

use crate::domain::Env;
use crate::semantics::{program_env, Fuel};
use crate::syntax::{parse_process_in, parse_program, parse_type_in, Process, Program, SessionType};
use crate::typecheck::{check_program, check_process, decl_type, FuncContext, LinearContext, TypeError};

use super::Interface;

/// Bit-stream transducers `b : bits ⊢ f : bits`.
pub const LIBRARY_SOURCE: &str = "\
type bits = rec b. +{0: b, 1: b}

proc flip : (b : bits |- f : bits) =
  fix F . case b { 0 => f.1; f <- F <- b | 1 => f.0; f <- F <- b }

proc same : (b : bits |- f : bits) =
  fix F . case b { 0 => f.0; f <- F <- b | 1 => f.1; f <- F <- b }

proc zeroes : (b : bits |- f : bits) =
  fix F . case b { 0 => f.0; f <- F <- b | 1 => f.0; f <- F <- b }

proc ones : (b : bits |- f : bits) =
  fix F . case b { 0 => f.1; f <- F <- b | 1 => f.1; f <- F <- b }

proc double : (b : bits |- f : bits) =
  fix F . case b { 0 => f.0; send f unfold; f.0; f <- F <- b
                 | 1 => f.1; send f unfold; f.1; f <- F <- b }

proc copy : (b : bits |- f : bits) = fwd f b

proc lead0 : (b : bits |- f : bits) = send f unfold; f.0; fwd f b
";

/// Names of the library's stream transducers `b : bits ⊢ f : bits`.
pub const TRANSDUCERS: &[&str] = &["flip", "same", "zeroes", "ones", "double", "copy", "lead0"];

/// The checked library together with its typing context.
#[derive(Debug, Clone)]
pub struct Library {
    pub program: Program,
    pub psi: FuncContext,
    pub bits: SessionType,
}

pub fn library() -> Library {
    let program = parse_program(LIBRARY_SOURCE).expect("library parses");
    let program = check_program(&program).expect("library checks");
    let psi = program
        .decls
        .iter()
        .filter_map(|d| decl_type(&d.kind).map(|t| (d.name.clone(), t)))
        .collect();
    let bits = program.type_named("bits").expect("bits").clone();
    Library { program, psi, bits }
}

impl Library {
    pub fn env(&self, fuel: &Fuel) -> Env {
        program_env(&self.program, fuel)
    }

    pub fn ty(&self, src: &str) -> SessionType {
        parse_type_in(&self.program, src).unwrap_or_else(|e| panic!("type `{src}`: {e}"))
    }

    pub fn process(&self, src: &str) -> Process {
        parse_process_in(&self.program, src).unwrap_or_else(|e| panic!("process `{src}`: {e}"))
    }

    /// Checks `P` at the interface under the library's context, returning
    /// the annotated process.
    pub fn check(&self, iface: &Interface, p: &Process) -> Result<Process, TypeError> {
        self.check_in(&self.psi, iface, p)
    }

    pub fn check_in(&self, psi: &FuncContext, iface: &Interface, p: &Process) -> Result<Process, TypeError> {
        let delta: LinearContext = iface.used.iter().cloned().collect();
        check_process(psi, &delta, p, &iface.provided.0, &iface.provided.1)
    }

    /// `d : bits ⊢ c : bits` and the like.
    pub fn stream_iface(&self, used: &[&str], provided: &str) -> Interface {
        Interface::new(
            used.iter().map(|d| (*d, self.bits.clone())).collect(),
            (provided, self.bits.clone()),
        )
    }
}
