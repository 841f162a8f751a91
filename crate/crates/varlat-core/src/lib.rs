//! Decision procedures for the equational theory of commutative periodic
//! semigroup varieties and for special elements of finite lattices.
//!
//! The crate is organised around a small set of symbolic domains:
//!
//! * [`syntax`] — words, multiplicity vectors, identities and bases,
//!   together with the purely combinatorial predicates on them
//!   (balance, letter renamings, stability, forced periodicity).
//! * [`parse`] — the text syntax for words, identities and basis files.
//! * [`known`] — exact word-problem deciders for a fixed list of small
//!   varieties (trivial, semilattices, left/right zero bands, the
//!   stabilisation varieties and Abelian group varieties).
//! * [`zerored`] — deduction for systems of zero identities `w = 0`
//!   under commutativity.
//! * [`relfree`] — finite relatively free objects of commutative
//!   periodic varieties, and every decision procedure that reduces to
//!   evaluating identities on them.
//! * [`classify`] — verdicts on whether a finitely based commutative
//!   variety is a modular, lower-modular, upper-modular or neutral
//!   element of the lattice of commutative varieties.
//! * [`lattice`] — exhaustive special-element checks on explicit finite
//!   lattices.
//! * [`fic`] — fully invariant congruence lattices of finite semigroups.
//! * [`prooflab`] — constructions of word families and partitions used
//!   as reusable building blocks in non-modularity arguments.
//!
//! The crate is `no_std` (it allocates, but performs no IO); all file
//! formats and caching live in the companion CLI crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod classify;
pub mod fic;
pub mod known;
pub mod lattice;
pub mod parse;
pub mod prooflab;
pub mod relfree;
pub mod syntax;
pub mod zerored;

pub(crate) mod uf;
