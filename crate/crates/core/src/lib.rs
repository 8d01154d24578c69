//! Exact construction of g2 representations as polynomial solutions of hypergeometric
//! systems in the 254 minor variables A_X, with Gelfand-Tsetlin bases for g2 > sl3.

pub mod algebra_g2;
pub mod indexsets;
pub mod linalg;
pub mod lattice;
pub mod polyengine;
pub mod series;
pub mod relations;
pub mod representation;
pub mod verify;
