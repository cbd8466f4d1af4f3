//! A sequential-strategy model of PCF with a window-bounded base type,
//! together with the syntactic side: parsing, typing, evaluation, and the
//! bridges between the two (denotation, decomposition, evaluation trees,
//! definable-term extraction, and observational comparison).

pub mod arena;
pub mod axioms;
pub mod compose;
pub mod decompose;
pub mod denote;
pub mod error;
pub mod evaltree;
pub mod fullabs;
pub mod generate;
pub mod eval;
pub mod parse;
pub mod reduce;
pub mod serialize;
pub mod stlc;
pub mod strategy;
pub mod structural;
pub mod syntax;
