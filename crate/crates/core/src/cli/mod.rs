//! Library side of the `obf` command line tool: instance generation, documents
//! and trace audit.

pub mod commands;
pub mod doc;
pub mod generate;
