//! Finite 2-groups as multiplication tables, with a census of bicyclic
//! 2-groups and detection of essential-subgroup candidates.

pub mod census;
pub mod cohomology;
pub mod families;
pub mod fusion;
pub mod gf2;
pub mod group;
pub mod invariants;
pub mod morphisms;
pub mod numtheory;
pub mod product;
pub mod subgroups;

pub use families::FamilySpec;
pub use group::{ElemSet, GroupError, GroupTable, Subgroup};
