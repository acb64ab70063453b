//! Exact-arithmetic computations in homological algebra: Hochschild homology
//! of finite-dimensional and graded algebras, local cohomology with monomial
//! supports and Cousin boundary maps, Kähler differentials, operator algebras
//! on iterated Laurent bases, and residue symbols computed three independent
//! ways (coefficient extraction, Tate's commutator trace, and the iterated
//! boundary of the cubical-algebra formalism).
//!
//! Everything is over ℚ and exact; results are integers and fractions, never
//! floats.

pub mod exactlin;
pub mod hochschild;
pub mod kforms;
pub mod laurent;
pub mod localcoh;
pub mod ressym;
pub mod tateop;
