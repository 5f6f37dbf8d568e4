//! Config files, images, summary tables and TPTP export.

mod config;
mod render;
mod summary;
mod tptp;

pub use config::{emit_config, load_config, parse_config, ConfigError};
pub use render::{cell_color, render_incidence, render_panels, RenderError, RenderSpec, GREY, WHITE};
pub use summary::{audit_report, summarize, HEADER};
pub use tptp::{export_tptp, formula_to_tptp, read_tptp, TptpError};
