pub mod bigfloat;
pub mod error;
pub mod exact;
pub mod golden;
pub mod green;
pub mod identities;
pub mod scalar;
pub mod summation;
pub mod special;
