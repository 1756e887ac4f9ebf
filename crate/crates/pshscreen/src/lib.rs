//! File formats, command-line tool and HTTP service around
//! [`pshscreen_core`].
//!
//! * [`catalog_io`] reads and writes the canonical reservoir catalog CSV.
//! * [`export`] writes assessment reports and pair dumps as CSV.
//! * [`cli`] is the `pshscreen` command.
//! * [`service`] is the read-only JSON API the web UI talks to.
//! * [`synthetic`] generates the desk-scale demo catalogs shipped in `data/`.

pub mod catalog_io;
pub mod cli;
pub mod export;
pub mod service;
pub mod synthetic;

pub use pshscreen_core as core;
