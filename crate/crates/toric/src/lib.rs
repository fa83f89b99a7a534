pub mod catalog;
pub mod chern;
pub mod fan;
pub mod intersect;
pub mod json;
pub mod linalg;
pub mod verify;
