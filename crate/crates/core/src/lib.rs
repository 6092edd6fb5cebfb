//! Donaldson-Thomas transformations of finite-type cluster varieties:
//! root data, mutation, the DT maps as friezes, their fixed points, the
//! linearization spectrum, and the type-A tridiagonal model.

pub mod bruhat;
pub mod dd;
pub mod dtmap;
pub mod error;
pub mod fixpoint;
pub mod instrument;
pub mod mutation;
pub mod poly;
pub mod report;
pub mod roots;
pub mod spectrum;
pub mod suite;

pub use error::{Error, Result};
pub use roots::{cartan_matrix, spec, CartanSpec, CartanType, Family};
