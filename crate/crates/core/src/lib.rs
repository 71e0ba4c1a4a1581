pub mod syntax;
pub mod curryhoward;
pub mod equational;
pub mod gen;
pub mod semantics;
pub mod kripke;
pub mod syncat;
pub mod sexpr;
pub mod surface;
pub mod cli;
