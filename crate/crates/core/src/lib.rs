//! Decision procedures for star-free closures `SF(C)` of classes of regular
//! languages: membership, separation and covering, together with the
//! automata, monoid and semiring machinery they run on.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, configuration
//! files and the command-line front end live in the `sfc` crate.

#![no_std]

extern crate alloc;

pub mod automata;
pub mod config;
pub mod covering;
pub mod error;
pub mod ltl;
pub mod membership;
pub mod monoid;
pub mod oracles;
pub mod sd;
pub mod semiring;

mod lattice;

pub use config::Config;
pub use error::{Error, Result};
