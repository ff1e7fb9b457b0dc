//! Streaming string transducers, first-order string transducers and the
//! algebra connecting them: flow matrices, transition monoids, output graphs,
//! Ehrenfeucht–Fraïssé games and lookahead elimination.

pub mod alphabet;
pub mod dfa;
pub mod equiv;
pub mod error;
pub mod flow;
pub mod fot;
pub mod graph;
pub mod logic;
pub mod lookahead;
pub mod monoid;
mod parse;
pub mod sst;
pub mod subst;

pub use alphabet::{Alphabet, Word};
pub use dfa::Dfa;
pub use equiv::{equiv_bounded, EquivVerdict, Transducer};
pub use error::{Error, Result};
pub use flow::{FlowValue, MatrixIndex, TransitionMatrix};
pub use fot::{parse_fot, FoTransducer, HeadTailReport, Node, OutputStructure};
pub use graph::{build_graph, path_characterization_check, SstOutputGraph};
pub use logic::{equiv_k, eval, is_string_check, parse_formula, Formula, StringModel};
pub use lookahead::{parse_sstla, Config, SstLa};
pub use monoid::{
    check_aperiodic, check_one_bounded, dfa_aperiodic, enumerate_monoid, nontrivial_cycle_check, MonoidTable,
};
pub use sst::{parse_sst, Run, Sst};
pub use subst::{Substitution, Token};
