pub mod cli;
pub mod families;
pub mod jsr;
pub mod lift;
pub mod linalg;
pub mod precision;
pub mod suite;
pub mod words;
