//! ω-automata: Boolean LTL to nondeterministic Büchi automata, Büchi to
//! deterministic parity automata, products, lasso runs and emptiness.

mod bits;
mod dpw;
mod nbw;
mod product;
mod safra;
mod tableau;

pub use dpw::{Dpw, PreAutomaton};
pub use nbw::Nbw;
pub use product::{product, product_pre, Product};
pub use safra::determinize;
pub use tableau::ltl_to_nbw;

use crate::boolean::{booleanize, ValuePredicate};
use crate::error::Result;
use crate::fltl::{Alphabet, Formula};

/// Default bound on the number of states any single construction may build.
pub const DEFAULT_STATE_CEILING: usize = 1_000_000;

/// The active state ceiling: `HQSYNTH_STATE_CEILING` when set, else the default.
pub fn state_ceiling() -> usize {
    std::env::var("HQSYNTH_STATE_CEILING")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_STATE_CEILING)
}

/// DPW accepting exactly the computations whose value of `f` satisfies `theta`.
pub fn dpw_for(f: &Formula, theta: &ValuePredicate, alphabet: &Alphabet) -> Result<Dpw> {
    let beta = booleanize(f, theta);
    let nbw = ltl_to_nbw(&beta, alphabet);
    Ok(determinize(&nbw)?.minimized())
}
