//! Interactive BOAP sessions over HTTP: a human expert supplies the
//! measurements and pairwise property judgements the simulated expert
//! provides in batch runs.

pub mod api;
pub mod routes;
pub mod session;
pub mod store;

pub use routes::{router, CONTRACT};
pub use session::{Event, SessionCore, SessionError};
pub use store::Store;
