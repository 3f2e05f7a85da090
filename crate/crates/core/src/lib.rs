pub mod error;
pub mod matrix;
pub mod radius;
pub mod linalg;
pub mod exact;
pub mod bounds;
pub mod special;
pub mod finiteness;
pub mod tridiagonal;
pub mod lp;
pub mod orthant;
pub mod bench;
pub mod solve;
