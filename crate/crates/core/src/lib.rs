//! Exact computations with differential operators on bimodules over
//! finite-dimensional algebras: the competing definitions of order, derivations,
//! Chevalley–Eilenberg and universal calculi, Cartan pairs and jet modules.

pub mod algebra;
pub mod cartan;
pub mod ce;
pub mod derivations;
pub mod diffops;
pub mod error;
pub mod hom;
pub mod jets;
pub mod lab;
pub mod linalg;
pub mod module;
pub mod scalar;
pub mod universal;

pub use algebra::{catalog, FiniteAlgebra};
pub use cartan::{CartanPair, PairCalculus, PairSide};
pub use ce::CeCalculus;
pub use derivations::{DerivationSpace, SplitKind};
pub use diffops::{Definition, DiffSpace, Filtration, Relation, Side};
pub use error::{Error, Result};
pub use hom::{ActionKind, Flavor, HomSpace, LinMap};
pub use jets::JetModule;
pub use lab::{run_scenario, Report, Scenario};
pub use linalg::{AffineSolution, Matrix, Subspace};
pub use module::Bimodule;
pub use scalar::{Field, Scalar};
pub use universal::{DifferentialCalculus, UniversalCalculus};
