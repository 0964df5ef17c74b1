//! First-order logic over finite p-algebras and over finite graphs.

mod eval;
mod graph;
mod library;
mod parser;
mod syntax;

pub use eval::{eval, eval_with_library, eval_with_witness, satisfiers, Compiled, Env, Evaluation};
pub use graph::{eval_graph, fo_recover_graph, graph_battery, translate_graph_sentence};
pub use library::{library_formulas, Definition, Library};
pub use parser::{parse_formula, parse_term};
pub use syntax::{Formula, Quantifier, Term};
