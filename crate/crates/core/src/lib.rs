//! A workbench for the linear substitution calculus, the value substitution
//! kernel, and their encodings into a fragment of the π-calculus.
//!
//! The simulation game in [`bisim`] checks that each encoding is a strong
//! bisimulation with respect to reduction, relating processes by
//! structural congruence only.

pub mod bisim;
pub mod cbn;
pub mod cbv;
pub mod congruence;
pub mod context;
pub mod encode;
pub mod experiment;
pub mod gen;
pub mod name;
pub mod oracle;
pub mod par;
pub mod parse;
pub mod process;
pub mod reduction;
pub mod suite;
pub mod term;
pub mod trace;

pub use bisim::{bisim_game_cbn, bisim_game_cbv, BisimReport, GameOptions};
pub use cbn::{cbn_step, cbn_trace};
pub use cbv::{cbv_step, cbv_successors, cbv_trace};
pub use congruence::{canonical_key, canonicalize, congruent};
pub use encode::{encode_cbn, encode_cbv};
pub use name::{Fresh, Name};
pub use parse::{parse_process, parse_term, parse_vterm};
pub use process::Process;
pub use reduction::{pi_successors, PiOptions};
pub use term::{Term, VTerm, Value};
pub use trace::Label;
