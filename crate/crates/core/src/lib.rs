pub mod abelian;
pub mod acceptor;
pub mod context;
pub mod error;
pub mod oracle;
pub mod series;
pub mod subgraph;
pub mod verify;

pub use error::{Error, Result};
