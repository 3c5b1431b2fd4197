pub mod braiding;
pub mod cartan;
pub mod error;
pub mod expr;
pub mod freealg;
pub mod groupoid;
pub mod rank2;
pub mod scalars;

pub use error::{Error, Result};
pub use scalars::{Order, Scalar, Unit};
