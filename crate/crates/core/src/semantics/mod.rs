//! Denotations of terms and processes.

mod denotation;
mod process;
mod program;
mod term;
mod trace;

pub use denotation::{set, Denotation, Diagnostics, Evaluated};
pub use process::denote_process;
pub use program::{proc_denotation, program_env};
pub use term::{apply_value, denote_term, eval_term};
pub use trace::{knaster_tarski_at, meet_records, sfix, trace_at, TraceOutcome};

/// Evaluation budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Fuel {
    /// Observation depth: outputs are compared up to this many messages.
    pub depth: usize,
    /// Unrollings of a recursion whose iterates cannot be compared.
    pub iterations: usize,
    /// Depth at which feedback on a cut channel is truncated.
    pub feedback_depth: usize,
}

impl Fuel {
    pub fn new(depth: usize) -> Self {
        Fuel {
            depth,
            iterations: 2 * depth + 4,
            feedback_depth: 2 * depth + 4,
        }
    }
}
