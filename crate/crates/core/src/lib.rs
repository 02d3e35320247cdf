//! A workbench for propositional logics over finite partial orders.
//!
//! The crate has three interlocking engines plus the plumbing they
//! share:
//!
//! - **Kripke semantics** ([`kripke`]): finite partially ordered
//!   frames, persistent models, a forcing evaluator, and the frame
//!   operations on upward-closed sets that mirror each connective.
//!   [`catalog`] enumerates every frame in a fixed, reproducible
//!   order so that "frame number 8" means the same thing everywhere.
//! - **Sequence semantics** ([`values`]): a countable truth-value
//!   space whose values are finitely-supported sequences of upsets,
//!   one component per catalog frame, with componentwise operations
//!   and a single designated value. [`bridge`] converts between the
//!   two semantics in both directions and cross-checks that forcing
//!   and component evaluation never disagree.
//! - **Decision procedures** ([`validity`], [`clone`]): bounded
//!   validity and equivalence search over frame classes (classical =
//!   one world, every poset, or the connected posets), with canonical
//!   first counterexamples; and exact connective-definability
//!   certificates via clone closure on a fixed model.
//!
//! [`formula`] and [`parse`] supply the shared formula type, a
//! canonical renderer, and a parser for the concrete syntax
//! (`~ & | -> T`, plus the usual Unicode aliases).

pub mod bridge;
pub mod catalog;
pub mod clone;
pub mod formula;
pub mod kripke;
pub mod parse;
pub mod validity;
pub mod values;

pub use bridge::{
    bounded_kripke_valid, check_lemma3, designated_under_all_induced, forcing_component_mismatch,
    induced_model, induced_valuation, BridgeError, Lemma3Direction, Lemma3Options, Lemma3Report,
    Lemma3Violation,
};
pub use catalog::{FrameCatalog, MAX_CATALOG_WORLDS};
pub use clone::{
    check_definable, check_separation, clone_closure, default_generators, CloneCertificate,
    CloneError, CloneProblem, ClosureMember,
};
pub use formula::{Connective, Formula, Fragment};
pub use kripke::{
    model_from_text, parse_model, render_model, Frame, FrameError, FrameOp, Model, ModelError,
    ModelSpec, Upset, WorldSet, MAX_WORLDS,
};
pub use parse::{parse, ParseError};
pub use validity::{
    check_equivalence, check_validity, godel_fan, pigeonhole_formula, Direction,
    EquivalenceVerdict, LogicClass, SearchError, SearchLimits, ValidityVerdict,
};
pub use values::{
    extend_valuation, parse_valuation, render_valuation, render_value, EvalError, Tail, Valuation,
    ValueError, ValueSeq, MAX_COMPONENT_INDEX,
};
