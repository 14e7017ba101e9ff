//! Finitely generated subgroups of free groups through their core graphs.

mod dsu;
pub mod graph;
pub mod matrix;
pub mod product;
pub mod subgroup;
pub mod verify;
pub mod word;
