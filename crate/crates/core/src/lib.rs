//! Coxeter-Chein loops `M(W,2)`: construction from Coxeter diagrams,
//! exhaustive identity and automorphism checks, GF(2) cohomology of the
//! edge complex, and classification of the amalgams it parametrizes.

pub mod amalgams;
pub mod check;
pub mod cli;
pub mod cohomology;
pub mod coxeter;
pub mod groups;
pub mod loop_core;
pub mod morphisms;
pub mod table;
