//! Output artifacts: chart-IR JSON, HTML, and the authoring preview.

mod html;
mod ir;
mod preview;

pub use html::to_html;
pub use ir::{to_ir_string, IR_SCHEMA, IR_VERSION};
pub use preview::{preview, CellSkeleton, PreviewSkeleton, SectionSkeleton};
