//! Text formats. Every format starts with a `format 1` line.

pub mod dimacs;
pub mod kv;
pub mod sentence;
pub mod structure_file;
pub mod tm;

pub use dimacs::{atom_labels, parse_dimacs, print_dimacs};
pub use kv::{KvTree, KvValue};
pub use sentence::{
    parse_formula, parse_sentence, print_formula, print_sentence, SentenceDocument,
};
pub use structure_file::{parse_structure, print_structure};
pub use tm::{parse_tm, print_tm, TmParseError};
