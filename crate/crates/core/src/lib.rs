pub mod error;
pub mod field;
pub mod folding;
pub mod formulas;
pub mod invariant;
pub mod torus;
pub mod value_set;
pub mod weyl;

pub use error::{Error, Result};
pub use field::{field_of_order, make_field, FqElem, FqField};
pub use folding::{compose, folding_poly, folding_poly_by_reduction, numeric_check, PolyMap};
pub use weyl::{AlgebraId, ExponentVector, OrbitGroup, TorusPoint};
