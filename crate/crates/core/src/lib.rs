pub mod bounds;
pub mod cache;
pub mod cert;
pub mod coloring;
pub mod error;
pub mod fans;
pub mod fin;
pub mod pipeline;
pub mod pyramid;
pub mod search;
pub mod types;
pub mod verify;

pub use error::{Error, Result};
