//! ASTs, concrete grammar and substitution.

pub mod ast;
mod lexer;
mod parser;
mod pretty;
pub mod subst;

pub use ast::*;
pub use parser::{
    desugar_recursive_proc, is_keyword, parse_func_type, parse_process, parse_process_in, parse_program, parse_term,
    parse_type, parse_type_in,
};
pub use pretty::{func_type_to_string, process_to_string, term_to_string, type_to_string};
pub use subst::{
    free_channels, free_term_vars, free_term_vars_process, free_type_vars, fresh_name,
    func_type_alpha_eq, process_alpha_eq, rename_channels, subst_process, subst_term, subst_type,
    term_alpha_eq, type_alpha_eq, unfold_type,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, serde::Serialize)]
#[error("syntax error at {line}:{col}: expected {}, found {found}", expected.join(" or "))]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub expected: Vec<String>,
    pub found: String,
}

/// Polarity read off the outermost constructor, looking through `rec`.
/// Returns `None` for a bare variable.
pub fn top_polarity(a: &SessionType) -> Option<Polarity> {
    use SessionType::*;
    match a {
        Unit | Down(_) | Plus(_) | Tensor(..) | AndVal(..) => Some(Polarity::Positive),
        Up(_) | With(_) | Lolly(..) | ImpVal(..) => Some(Polarity::Negative),
        Rec(_, b) => top_polarity(b),
        Var(_) => None,
    }
}
