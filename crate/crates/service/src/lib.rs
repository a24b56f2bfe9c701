//! Hosts quizboard sessions behind a newline-delimited JSON protocol, over
//! WebSocket text frames or raw TCP lines.

pub mod hub;
pub mod protocol;
pub mod server;

pub use hub::{ConnId, Hub, Outgoing};
pub use server::{load_checked_bank, ServeConfig, ServeError, Service};
