//! Sectioned grid layout.
//!
//! Sections stack vertically in spec order. Inside a section each metric
//! (Repeat) gets a row and each dimension group gets a column, so charts in
//! one column share a breakdown and can be compared down the column.

use crate::model::{DashboardSpec, MetricLayout, MetricRef, Section};
use crate::recommend::{ChartSpec, Mark};

pub const CONTAINER_WIDTH: u32 = 1200;
pub const CHART_HEIGHT: u32 = 320;
pub const KPI_HEIGHT: u32 = CHART_HEIGHT / 2;
pub const DEFAULT_DASHBOARD_TITLE: &str = "Dashboard";

#[derive(Debug, Clone, PartialEq)]
pub struct SectionGrid {
    pub title: String,
    pub rows: usize,
    pub cols: usize,
    /// `cells[row][col]` is an index into [`DashboardDoc::charts`].
    pub cells: Vec<Vec<Option<usize>>>,
    pub cell_width: u32,
    pub cell_height: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DashboardDoc {
    pub title: String,
    pub sections: Vec<SectionGrid>,
    pub charts: Vec<ChartSpec>,
    /// The normalized spec the dashboard was compiled from.
    pub provenance: DashboardSpec,
}

impl DashboardDoc {
    /// Chart index at a grid position.
    pub fn chart_at(&self, section: usize, row: usize, col: usize) -> Option<usize> {
        *self.sections.get(section)?.cells.get(row)?.get(col)?
    }

    /// `(section, row, col, chart index)` for every occupied cell.
    pub fn cellmap(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> + '_ {
        self.sections.iter().enumerate().flat_map(|(s, grid)| {
            grid.cells.iter().enumerate().flat_map(move |(r, row)| {
                row.iter()
                    .enumerate()
                    .filter_map(move |(c, cell)| cell.map(|chart| (s, r, c, chart)))
            })
        })
    }
}

/// Header used when a section has no authored title:
/// `Metrics: Sales (SUM), Shipping Cost (SUM) — by Ship Date | Region`.
pub fn section_title(section: &Section) -> String {
    if let Some(title) = &section.title {
        return title.clone();
    }
    let metrics = if section.metrics.is_empty() {
        vec![MetricRef::count_star().label()]
    } else {
        section.metrics.iter().map(MetricRef::label).collect()
    };
    let mut title = format!("Metrics: {}", metrics.join(", "));
    if !section.dimension_groups.is_empty() {
        let groups: Vec<String> = section.dimension_groups.iter().map(|g| g.label()).collect();
        title.push_str(" \u{2014} by ");
        title.push_str(&groups.join(" | "));
    }
    title
}

/// Grid shape `(rows, cols)` of a section.
pub fn grid_shape(section: &Section) -> (usize, usize) {
    let cols = section.dimension_groups.len().max(1);
    let rows = match section.layout() {
        MetricLayout::Layer => 1,
        MetricLayout::Repeat => section.metrics.len().max(1),
    };
    (rows, cols)
}

/// Places charts by their `(section_index, row, col)` hints.
///
/// Panics if two charts claim the same cell or a hint falls outside its
/// section's grid; both mean the charts did not come from expanding `spec`.
pub fn layout(spec: &DashboardSpec, charts: Vec<ChartSpec>) -> DashboardDoc {
    let mut sections: Vec<SectionGrid> = spec
        .sections
        .iter()
        .map(|section| {
            let (rows, cols) = grid_shape(section);
            SectionGrid {
                title: section_title(section),
                rows,
                cols,
                cells: vec![vec![None; cols]; rows],
                cell_width: CONTAINER_WIDTH / cols as u32,
                cell_height: CHART_HEIGHT,
            }
        })
        .collect();

    for (index, chart) in charts.iter().enumerate() {
        let grid = &mut sections[chart.section_index];
        let cell = &mut grid.cells[chart.row][chart.col];
        assert!(cell.is_none(), "two charts placed at the same cell");
        *cell = Some(index);
    }
    for (s, grid) in sections.iter_mut().enumerate() {
        let all_kpi = charts
            .iter()
            .filter(|c| c.section_index == s)
            .all(|c| c.mark == Mark::KpiCard);
        if all_kpi {
            grid.cell_height = KPI_HEIGHT;
        }
    }

    DashboardDoc {
        title: spec
            .title
            .clone()
            .unwrap_or_else(|| DEFAULT_DASHBOARD_TITLE.to_string()),
        sections,
        charts,
        provenance: spec.clone(),
    }
}
