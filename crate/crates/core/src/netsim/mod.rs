//! Exact multiset simulator for networks of groudits and dits.

mod ops;
mod program;
mod state;

pub use ops::{tick, untick, Network, Op, SystemKind};
pub use program::{run_program, Program, Step, Trace, TraceEntry};
pub use state::{states_equal_up_to_scalar, Configuration, MultisetState, Value};
