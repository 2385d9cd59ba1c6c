pub mod scalar;
pub mod rmatrix;
pub mod ncalgebra;
pub mod calculus;
pub mod frame;
pub mod geometry;
pub mod suite;
