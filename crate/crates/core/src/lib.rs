//! Filters, semilattice congruences and counterexample search for finite
//! ordered Γ-semigroups.
//!
//! The crate models a finite ordered Γ-semigroup (or, with associativity
//! dropped, a Γ-groupoid) as dense integer tables, and computes:
//!
//! * up-sets `[a)` and elementary laws ([`structure`]),
//! * filters and principal filters `N(a)` ([`filters`]),
//! * the relation `N`, semilattice congruences, the class order `≼` and
//!   quotients `M/σ` ([`congruence`]),
//! * exhaustive and random corpora of small structures ([`enumerate`]),
//! * a catalog of claims checked structure by structure ([`claims`]).
//!
//! ```
//! use gamma_lab::{principal_filter, relation_n, samples, up_set};
//!
//! let chain = samples::chain_min(3, 2);
//! assert_eq!(principal_filter(&chain, 1)?.to_vec(), vec![1, 2]);
//! assert_eq!(up_set(&chain, 1)?.to_vec(), vec![1, 2]);
//! assert!(relation_n(&chain)?.is_discrete());
//! # Ok::<(), gamma_lab::Error>(())
//! ```
//!
//! The guide in `book/` walks through each part; its code blocks are compiled
//! and run as doctests of this crate.

pub mod claims;
pub mod congruence;
pub mod enumerate;
mod error;
pub mod filters;
pub mod format;
mod set;
pub mod structure;

pub use claims::{
    check_claim, search_counterexamples, search_structures, ClaimId, ClaimKind, ClaimVerdict, Corpus, SearchReport,
    Status,
};
pub use congruence::{
    check_congruence, class_order, enumerate_semilattice_congruences, quotient, quotient_upset_t, relation_n,
    smallest_semilattice_congruence, ClassOrder, CongruenceCheck, Partition, QuotientStructure,
};
pub use enumerate::{
    canonical_key, enumerate_corpus, enumerate_structures, gamma_from_semigroup, random_structure, CanonicalKey,
    EnumConfig, OrderMode,
};
pub use error::{Error, Result};
pub use filters::{
    all_filters, filter_closure, four_sets, is_filter, principal_filter, principal_filter_oracle, FilterCheck, FourSets,
};
pub use format::{hasse_dot, parse_structure, serialize_structure, ParseError};
pub use set::ElementSet;
pub use structure::{
    samples, structural_profile, up_set, validate, Kind, PoGammaStructure, StructuralProfile, ValidationReport,
    Violation,
};

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/structures.md")]
    mod structures {}
    #[doc = include_str!("../../../book/src/filters.md")]
    mod filters {}
    #[doc = include_str!("../../../book/src/congruences.md")]
    mod congruences {}
    #[doc = include_str!("../../../book/src/enumeration.md")]
    mod enumeration {}
    #[doc = include_str!("../../../book/src/claims.md")]
    mod claims {}
}
