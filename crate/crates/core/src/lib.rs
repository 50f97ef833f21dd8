//! Workbench for first-order spectra.
//!
//! Compiles nondeterministic Turing machines into bounded-variable
//! first-order sentences, normalizes and grounds k-variable sentences into
//! conjunctions of DNF blocks, and decides whether a sentence has a model of
//! a given cardinality.

pub mod compiler;
pub mod error;
pub mod eval;
pub mod formula;
pub mod ground;
pub mod model_eval;
pub mod normalize;
pub mod structure;
pub mod text;
pub mod turing;

pub use error::{CompileError, LogicError, ModelError, NormalizeError, ParseError, TmError};
pub use eval::{evaluate, evaluate_sentence, CompiledFormula};
pub use formula::{distinct_variable_count, free_variables, to_negation_normal_form};
pub use formula::{Formula, RelName, Var, Vocabulary};
pub use ground::{ground, ground_pinned, measure_size, satisfiable, GroundAtom, GroundFormula};
pub use model_eval::{
    enumerate_structures, has_model_of_size, spectrum_up_to, Method, SpectrumReport,
};
pub use normalize::{normalize, verify_shape, Clause, NormalizedSentence, Shape};
pub use structure::{Assignment, Element, FiniteStructure};
pub use turing::{accepts_binary, binary_of, simulate, BoundKind, Machine, RunVerdict};
