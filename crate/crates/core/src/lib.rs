//! Symbolic calculator for meadow-enriched ACP process algebras with
//! binding terms: sorted terms with comprehension binders, two
//! binder-elimination strategies, normal-form process semantics over
//! concrete signed meadows, and randomized soundness sweeps of the axioms.
//!
//! The crate is `no_std` (with `alloc`); IO, a CLI and experiment drivers
//! live in the companion `mepcalc` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod eliminate;
pub mod extensions;
pub mod meadow;
pub mod semantics;
pub mod syntax;
pub mod terms;
