//! Library surface of the `qpart` command-line tool: job parsing,
//! validation and dispatch, shared between the binary and its tests.

pub mod job;
