//! Verification engine for categorical predicates on finite categories and
//! on windows of small concrete algebras.

pub mod axioms;
pub mod backend;
pub mod budget;
pub mod engine;
pub mod error;
pub mod fincat;
pub mod functor;
pub mod regress;
pub mod report;

pub use budget::{Budget, Meter};
pub use engine::{Ambient, Engine, Lookup, Outside};
pub use error::{Error, Result};
pub use fincat::solver::{Cone, Construction, Diagram, Search, Universal};
pub use fincat::{FinCategory, MorId, ObjId};
