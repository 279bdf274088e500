//! Library surface of the relhom command-line tool: the spec-file format
//! and its loader, shared with the integration tests.

pub mod specdoc;
