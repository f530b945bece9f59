pub mod graph;
pub mod patterns;
pub mod kexpr;
pub mod decomp;
pub mod pipelines;
pub mod gen;
pub mod classify;
