//! Self-contained HTML rendering of the IR.

use crate::layout::DashboardDoc;

use super::ir::to_ir_string;

const TEMPLATE: &str = include_str!("dashboard.html");

fn escape_text(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders a dashboard as one HTML file with the IR and a small SVG renderer inlined.
pub fn to_html(doc: &DashboardDoc) -> String {
    let (head, rest) = TEMPLATE.split_once("__TITLE__").expect("template has a title slot");
    let (middle, tail) = rest.split_once("__IR__").expect("template has an IR slot");
    // `<` only occurs inside JSON strings, where < is equivalent and
    // cannot close the script element.
    let ir = to_ir_string(doc).replace('<', "\\u003c");
    let mut html = String::with_capacity(TEMPLATE.len() + ir.len());
    html.push_str(head);
    html.push_str(&escape_text(&doc.title));
    html.push_str(middle);
    html.push_str(ir.trim_end());
    html.push_str(tail);
    html
}
