//! Result tables: one row per method, six fixed task/metric columns.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Column {
    SickRPearson,
    SickRSpearman,
    SickEAccuracy,
    AfsPearson,
    AfsSpearman,
    MrpcAccuracy,
}

impl Column {
    pub const ALL: [Column; 6] = [
        Column::SickRPearson,
        Column::SickRSpearman,
        Column::SickEAccuracy,
        Column::AfsPearson,
        Column::AfsSpearman,
        Column::MrpcAccuracy,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Column::SickRPearson => "SICK-R Pearson",
            Column::SickRSpearman => "SICK-R Spearman",
            Column::SickEAccuracy => "SICK-E Accuracy",
            Column::AfsPearson => "AFS Pearson",
            Column::AfsSpearman => "AFS Spearman",
            Column::MrpcAccuracy => "MRPC Accuracy",
        }
    }

    fn index(self) -> usize {
        Column::ALL.iter().position(|&c| c == self).expect("listed")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Cell {
    /// A fraction; rendered as a percentage.
    Value(f64),
    #[default]
    NotApplicable,
}

impl Cell {
    pub fn value(self) -> Option<f64> {
        match self {
            Cell::Value(v) => Some(v),
            Cell::NotApplicable => None,
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Value(v) => write!(f, "{:.3}%", v * 100.0),
            Cell::NotApplicable => f.write_str("N/A"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub method: String,
    pub cells: [Cell; 6],
}

impl ReportRow {
    pub fn new(method: impl Into<String>) -> Self {
        ReportRow { method: method.into(), cells: [Cell::NotApplicable; 6] }
    }

    pub fn get(&self, col: Column) -> Cell {
        self.cells[col.index()]
    }

    pub fn set(&mut self, col: Column, cell: Cell) {
        self.cells[col.index()] = cell;
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReportTable {
    pub rows: Vec<ReportRow>,
}

impl ReportTable {
    pub fn row(&self, method: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.method == method)
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::from("| Method |");
        for c in Column::ALL {
            out.push_str(&format!(" {} |", c.label()));
        }
        out.push_str("\n|---|");
        out.push_str(&"---:|".repeat(Column::ALL.len()));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&format!("| {} |", row.method.replace('|', "\\|")));
            for cell in &row.cells {
                out.push_str(&format!(" {cell} |"));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header = std::iter::once("Method").chain(Column::ALL.iter().map(|c| c.label()));
        w.write_record(header).expect("in-memory write");
        for row in &self.rows {
            let cells = row.cells.iter().map(|c| c.to_string());
            w.write_record(std::iter::once(row.method.clone()).chain(cells)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }
}
