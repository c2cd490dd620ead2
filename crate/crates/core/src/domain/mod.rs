//! Finite approximants of communication domains.

mod enumerate;
mod notation;
mod order;
mod value;

pub use enumerate::{
    bottom, chain_height, conforms, enumerate, enumerate_with, func_values, lift_shaped,
    ValueRegistry,
};
pub use notation::{parse_record, parse_value, render_record, render_value, NotationError};
pub use order::{
    down, fold, glb2, height, leq, lub2, record_leq, truncate, truncate_record, unfold, up,
};
pub use value::{equal, get, records_equal, Closure, CommValue, Env, FuncValue, Port, Record};

use crate::semantics::{Denotation, Evaluated};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DomainError {
    #[error("values of functional type {0} cannot be enumerated; register sample values")]
    NotEnumerable(String),
    #[error("type variable {0} is free")]
    OpenType(String),
    #[error("no upper bound for {0}")]
    Incompatible(String),
}

/// `f` made strict in input `port`: bottom there yields the bottom output.
pub fn strictify(f: &Denotation, port: Port) -> Denotation {
    let g = f.clone();
    Denotation::new(f.provided(), f.used(), move |input| {
        if get(input, &port).is_bot() {
            Evaluated::bottom()
        } else {
            g.apply(input)
        }
    })
}
