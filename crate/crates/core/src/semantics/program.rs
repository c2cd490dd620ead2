use crate::domain::{Env, FuncValue};
use crate::syntax::{DeclKind, Name, Program};

use super::process::denote_process;
use super::term::eval_term;
use super::{Denotation, Fuel};

/// Values of the program's terms and processes, each evaluated in the
/// environment of the declarations before it.
pub fn program_env(program: &Program, fuel: &Fuel) -> Env {
    let mut env = Env::new();
    for decl in &program.decls {
        match &decl.kind {
            DeclKind::Type(_) => {}
            DeclKind::Term(_, m) => {
                let (v, _) = eval_term(m, &env, fuel);
                env.insert(&decl.name, v);
            }
            DeclKind::Proc { used, provided, body } => {
                let used: Vec<Name> = used.iter().map(|(d, _)| d.clone()).collect();
                let d = denote_process(body, &provided.0, &used, &env, fuel);
                env.insert(&decl.name, FuncValue::QProc(d));
            }
        }
    }
    env
}

/// The denotation of process declaration `name`, or `None` if there is no
/// such process.
pub fn proc_denotation(program: &Program, name: &str, fuel: &Fuel) -> Option<Denotation> {
    let idx = program.decls.iter().position(|d| d.name == name)?;
    let DeclKind::Proc { used, provided, body } = &program.decls[idx].kind else {
        return None;
    };
    let before = Program {
        decls: program.decls[..idx].to_vec(),
    };
    let env = program_env(&before, fuel);
    let used: Vec<Name> = used.iter().map(|(d, _)| d.clone()).collect();
    Some(denote_process(body, &provided.0, &used, &env, fuel))
}
