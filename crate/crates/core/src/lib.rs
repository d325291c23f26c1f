//! Finite approximations of the end space of countable digraphs.

pub mod endspace;
pub mod graph;
pub mod quotient;
pub mod sources;
pub mod tours;
