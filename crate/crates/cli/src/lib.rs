//! Library side of the `farey` command-line tool: the document format,
//! the subcommands and the SVG renderer.

pub mod commands;
pub mod document;
pub mod render;

pub use commands::{cmd_batch, cmd_gamma0, cmd_order, cmd_verify, parse_document, Algorithm, CliError};
pub use document::SequenceDocument;
pub use render::render_svg;
