//! Word and tree automata over semirings and quantales, represented as
//! Kleisli matrices.
//!
//! Transitions are [`KMatrix`] values; internal moves and saturation are
//! Kleene stars; languages are matrix pipelines `entry ; α* ; exit`. For
//! boolean branching, [`theory`] decides membership through a finite set of
//! state-set functions, the algebraic side of recognizability.
//!
//! The algebra is a runtime value implementing [`Semiring`]; numeric
//! instances are generic over their scalar, and the aliases below fix the
//! common choices.
//!
//! ```
//! use kleisli_automata::{generate_theory, Alphabet, Boolean, Tree, TreeAutomatonBuilder};
//!
//! let a = TreeAutomatonBuilder::new(Boolean, Alphabet::new(["a", "b"])?, 2)
//!     .edge(1, "a", 1, 1, true)
//!     .edge(1, "b", 0, 0, true)
//!     .final_weight(0, 0, true)
//!     .build()?;
//! let t: Tree = "(b x0 x0)".parse()?;
//! assert!(a.accepts(1, &t)?);
//! assert_eq!(generate_theory(&a, 1000)?.len(), 5);
//! # Ok::<(), kleisli_automata::Error>(())
//! ```

pub mod algebra;
pub mod alphabet;
pub mod error;
pub mod kleisli;
pub mod random;
pub mod regex;
pub mod report;
pub mod theory;
pub mod tree;
pub mod word;

pub use algebra::{
    ascending_sup, ascending_sup_with, check_algebra_laws, check_quantale_laws, Boolean,
    ChainProduct, ChainQuantale, ExtNonnegReal, Flags, NaturalSat, Quantale, Semiring,
    TropicalMinPlus, UnitIntervalProduct,
};
pub use alphabet::{parse_word, Alphabet, Word};
pub use error::{Error, Result};
pub use kleisli::KMatrix;
pub use regex::{compile, denote_slice, parse_regex, RegExpr};
pub use report::{LawCheck, LawReport};
pub use theory::{
    generate_theory, recognize_membership, recognizing_subset, theory_morphism, FiniteTheory,
    Recognizer, StateSetFunction,
};
pub use tree::{Tree, TreeAutomaton, TreeAutomatonBuilder};
pub use word::{RegularWordMap, WordAutomaton, WordAutomatonBuilder};

/// Saturating naturals over `u64`.
pub type Natural = NaturalSat<u64>;
/// Min-plus over `u64` with `u64::MAX` as `∞`.
pub type Tropical = TropicalMinPlus<u64>;
/// `[0, +∞]` in double precision.
pub type Real = ExtNonnegReal<f64>;
/// `[0, +∞]` in single precision.
pub type Real32 = ExtNonnegReal<f32>;
/// The product quantale on `[0, 1]` in double precision.
pub type UnitInterval = UnitIntervalProduct<f64>;

pub type BoolMatrix = KMatrix<Boolean>;
pub type NaturalMatrix = KMatrix<Natural>;
pub type TropicalMatrix = KMatrix<Tropical>;
pub type RealMatrix = KMatrix<Real>;
pub type FuzzyMatrix = KMatrix<UnitInterval>;
pub type ChainMatrix = KMatrix<ChainQuantale>;

pub type BoolAutomaton = WordAutomaton<Boolean>;
pub type BoolTreeAutomaton = TreeAutomaton<Boolean>;
