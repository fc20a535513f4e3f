//! State-complexity laboratory for the plus-complement-plus and
//! star-complement-star operations on regular languages.
//!
//! * [`dfa`], [`nfa`], [`minimize`], [`format`], [`dot`]: automaton types,
//!   subset construction, minimization, equivalence, text and DOT formats.
//! * [`pipeline`]: the double subset construction with antichain pruning,
//!   the canonical-form check and the closure orbit.
//! * [`witness`]: parametric witness automata with their reachability and
//!   separating words.
//! * [`bounds`]: exact counts and asymptotics.
//! * [`oracle`]: unpruned reference pipeline and exhaustive search.
//! * [`verify`]: batch verification suites.

pub mod bounds;
pub mod dfa;
pub mod dot;
pub mod error;
pub mod format;
pub mod minimize;
pub mod nfa;
pub mod oracle;
pub mod pipeline;
pub mod stateset;
pub mod verify;
pub mod witness;

pub use dfa::{equivalent, Alphabet, Dfa, StateId};
pub use error::{Error, Result};
pub use minimize::minimize;
pub use nfa::{determinize, EpsNfa};
pub use stateset::StateSet;
