//! Decision procedures for max-plus automata.
//!
//! Starting from a finitely ambiguous max-plus automaton, the crate
//! decomposes it into a union of unambiguous automata with the same
//! support ([`covering`]), decides whether the recognized series is
//! unambiguous through the dominance property of their product
//! ([`dominance`]), builds an equivalent unambiguous automaton when it is
//! ([`unambiguizer`]), and finally decides sequentiality through the twin
//! property and weighted determinization ([`sequentiality`]).
//! [`pipeline::decide`] chains all of it.
//!
//! All algorithms are generic over an exact [`Scalar`]; the aliases below
//! fix it to arbitrary-precision rationals, which is what the file format
//! and the command-line tool use.

pub mod ambiguity;
pub mod automaton;
pub mod covering;
pub mod document;
pub mod dominance;
pub mod dot;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod matrix;
pub mod pipeline;
pub mod scalar;
pub mod sequentiality;
pub mod unambiguizer;
pub mod weight;

pub use automaton::{heap_automaton, AutomatonBuilder, Letter, Transition, WeightedAutomaton, Word};
pub use error::{Error, Result};
pub use scalar::Scalar;
pub use weight::{MaxPlus, MaxPlusTuple};

/// Exact rational scalar.
pub type Rational = num::BigRational;

/// An element of R_max over exact rationals.
pub type Weight = weight::MaxPlus<Rational>;
/// An element of R_max^I over exact rationals.
pub type TupleWeight = weight::MaxPlusTuple<Rational>;
pub type WeightMatrix = matrix::MaxPlusMatrix<Rational>;
pub type Automaton = automaton::WeightedAutomaton<Rational>;
pub type SeriesSample = automaton::SeriesSample<Rational>;
pub type ProductAutomaton = dominance::ProductAutomaton<Rational>;
pub type SccReport = dominance::SccReport<Rational>;
pub type Covering = covering::Covering<Rational>;
pub type TwinReport = sequentiality::TwinReport<Rational>;
pub type PipelineReport = pipeline::PipelineReport<Rational>;
