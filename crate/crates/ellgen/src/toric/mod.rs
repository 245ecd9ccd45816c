//! Lattices, fans, reflexive polytopes and boxes.

pub mod boxes;
pub mod fan;
pub mod linalg;
pub mod polytope;

pub use boxes::{box_elements, BoxData};
pub use fan::{load_fan, Face, Fan, FanFile};
pub use polytope::{dual_polytope, subdivide_simplicial, InsertionOrder, Polytope, PolytopeFile, ReflexivePair};
