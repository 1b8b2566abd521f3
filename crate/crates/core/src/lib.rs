pub mod color;
pub mod model;
pub mod operator;
pub mod scalar;
pub mod verify;
