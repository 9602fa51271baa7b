//! Exact finite coalgebras and comodules over Z/n.

pub mod alpha;
pub mod annihilator;
pub mod check;
pub mod clean;
pub mod coalgebra;
pub mod comodule;
pub mod continuity;
pub mod error;
pub mod fuzz;
pub mod howell;
pub mod instance;
pub mod lattice;
pub mod matrix;
pub mod presented;
pub mod report;
pub mod ring;
pub mod shift;
pub mod theorems;

pub use coalgebra::{dual_algebra, validate_coalgebra, AxiomReport, Coalgebra, CoalgebraData, DualAlgebra};
pub use comodule::{cstar_end, end_ring, hom_space, validate_comodule, Comodule, ComoduleData, EndRing, MorphismSpace};
pub use error::{Caps, Error, Result};
pub use howell::{howell, intersect_rowspans, is_unit_matrix, kernel, solve, HowellForm};
pub use lattice::{comodule_iso, generated_subcomodule, quotient, subcomodule_lattice, Lattice, Subcomodule};
pub use matrix::RMatrix;
pub use presented::PresentedModule;
pub use ring::RingSpec;
