//! Finite algebras, their syntactic congruences, and the finite windows
//! they open onto profinite limits.
//!
//! The center of the crate is the syntactic congruence of a subset `L` of a
//! finite algebra: the largest congruence whose classes never straddle the
//! boundary of `L`. It is computed twice, by independent routes — partition
//! refinement against the elementary translations, and fingerprinting
//! through the translation monoid — and the two answers are compared every
//! time; a disagreement is reported as an internal invariant violation,
//! never silently resolved.
//!
//! Around that center sit:
//!
//! * terms, their evaluation, and the splitting of a term into self-maps
//!   linear in one variable ([`term`], [`translations`]);
//! * determining sets of self-maps, lifted from the quotient's translation
//!   monoid, with minimization and the `2^|F|` index bound ([`syntactic`]);
//! * pullbacks of syntactic congruences along surjective homomorphisms
//!   ([`syntactic`]);
//! * finite inverse systems — towers of algebras with connecting maps — and
//!   the recognition of cylinder sets through finite quotients, including
//!   idempotent powers `a^ω` and a ten-condition recognizability report
//!   ([`profinite`]);
//! * deterministic automata, their minimal forms, transition monoids, and
//!   syntactic monoids, sharing the same refinement and closure engines
//!   ([`languages`]).
//!
//! File formats for algebras, inverse systems, and automata are plain text,
//! line oriented, and round-trip byte for byte in canonical form.

pub mod algebra;
pub mod congruence;
pub mod error;
pub mod homomorphism;
pub mod languages;
pub mod partition;
pub mod profinite;
pub mod samples;
pub mod signature;
pub mod subset;
pub mod suites;
pub mod syntactic;
pub mod term;
pub mod translations;
pub mod truncated;

pub use algebra::{carrier_tuples, parse_algebra, serialize_algebra, AlgFile, Assignment, FiniteAlgebra};
pub use congruence::{
    enumerate_congruences, is_congruence, largest_congruence_saturating, Congruence,
};
pub use error::{Error, InternalError, Result};
pub use homomorphism::Homomorphism;
pub use languages::{
    minimal_dfa, parse_dfa, serialize_dfa, syntactic_monoid, transition_monoid, Dfa,
    SyntacticMonoid, TransitionMonoid,
};
pub use profinite::{
    cylinder_syntactic, determination_report, omega_power, parse_system, partition_meet_congruence,
    quotient_system, recognize_clopen, separate_points, serialize_system, CylinderSet,
    DeterminationReport, InverseSystem, OmegaExponent, QuotientSystem, Thread,
};
pub use partition::{all_partitions, coarsest_stable_refinement, Partition};
pub use signature::{OpSymbol, Signature};
pub use subset::SubsetL;
pub use syntactic::{
    classical_term_set, determining_set_from_quotient, index_bound_check, is_s_determined,
    is_term_determined, minimal_determining_subset, pullback_syntactic_check, syntactic_congruence,
    term_instance_set, DeterminingSet, SyntacticAnalysis,
};
pub use term::{eval_term, linearize, Linearization, Term};
pub use truncated::{
    one_point_product_sweep, separation_sweep, OnePointProductReport, SeparationReport, SparseSet,
};
pub use translations::{
    elementary_translations, transformation_of_linear_term, translation_monoid, Provenance,
    Transformation, TransformationMonoid,
};
