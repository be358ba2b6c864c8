//! Exact symbolic calculus on augmented directed complexes.
//!
//! The crate models free abelian groups with a graded, interned basis and
//! builds the cell calculus on top of them: iterated source and target
//! operators, coherent chains as cells, two-column tables as an
//! equivalent presentation, levelwise composition, and an algorithm that
//! factors a cell into a composite of generators. Dedicated modules
//! construct the complexes of simplicial sets (including the standard
//! simplices, their boundaries and horns), globes and a one-equation
//! complex, morphisms between complexes, and the horn factorization
//! machinery with its support properties.
//!
//! All arithmetic is exact (arbitrary-precision integers) and every
//! user-facing construction is deterministic: bases are interned in a
//! canonical order, JSON output has stable key order, and randomized
//! checks take explicit seeds.

pub mod adc;
pub mod algebra;
pub mod chain_calculus;
pub mod decomposition;
pub mod horns;
pub mod morphisms;
pub mod omega;
pub mod simplicial;
pub mod verify;

pub use adc::{Adc, AdcError, RawAdc, validate_adc};
pub use algebra::{Basis, BasisElement, BasisId, Chain, Coeff, GroupElement, Sign};
pub use omega::{Cell, SteinerTable};
