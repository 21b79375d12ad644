//! Flavored probability values, finite distributive lattices, measures on
//! them, Stone pairings of first-order formulas, limit detection and a small
//! probability logic.

pub mod fo;
pub mod gamma;
pub mod lattice;
pub mod limits;
pub mod measure;
pub mod plogic;

pub use gamma::{BasicClopen, Flavor, GammaError, GammaValue, Grid, UnitRational};
pub use lattice::{FinDistLattice, FinPoset, LatticeError, LatticeHom};
pub use measure::{ClassicalMeasure, GammaMeasure, MeasureError, Verdict, Violation};
