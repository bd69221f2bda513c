//! Plain-text report documents with CSV attachments.

use std::fmt::Write as _;

/// A table rendered with left-aligned, space-padded columns.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row<S: Into<String>>(&mut self, cells: impl IntoIterator<Item = S>) {
        self.rows.push(cells.into_iter().map(Into::into).collect());
    }

    fn render(&self, out: &mut String) {
        let cols = self
            .rows
            .iter()
            .map(Vec::len)
            .chain([self.header.len()])
            .max()
            .unwrap_or(0);
        let mut widths = vec![0; cols];
        for row in std::iter::once(&self.header).chain(&self.rows) {
            for (i, cell) in row.iter().enumerate() {
                widths[i] = widths[i].max(cell.chars().count());
            }
        }
        let line = |out: &mut String, cells: &[String]| {
            let mut text = String::new();
            for (i, cell) in cells.iter().enumerate() {
                if i > 0 {
                    text.push_str("  ");
                }
                let _ = write!(text, "{:<width$}", cell, width = widths[i]);
            }
            out.push_str("  ");
            out.push_str(text.trim_end());
            out.push('\n');
        };
        line(out, &self.header);
        let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
        line(out, &rule);
        for row in &self.rows {
            line(out, row);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Item {
    Text(String),
    Table(Table),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    pub title: String,
    pub items: Vec<Item>,
}

impl Section {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: title.into(),
            items: Vec::new(),
        }
    }

    pub fn text(&mut self, line: impl Into<String>) -> &mut Self {
        self.items.push(Item::Text(line.into()));
        self
    }

    pub fn table(&mut self, table: Table) -> &mut Self {
        self.items.push(Item::Table(table));
        self
    }
}

/// A CSV payload written next to the report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvAttachment {
    pub name: String,
    pub content: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReportDocument {
    pub sections: Vec<Section>,
    pub csv_attachments: Vec<CsvAttachment>,
}

impl ReportDocument {
    pub fn push(&mut self, section: Section) {
        self.sections.push(section);
    }

    pub fn extend(&mut self, other: ReportDocument) {
        self.sections.extend(other.sections);
        self.csv_attachments.extend(other.csv_attachments);
    }

    /// `PASS`/`FAIL` lines found anywhere in the report.
    pub fn checks(&self) -> Vec<(bool, String)> {
        self.sections
            .iter()
            .flat_map(|s| &s.items)
            .filter_map(|item| match item {
                Item::Text(t) if t.starts_with("PASS ") => Some((true, t[5..].to_string())),
                Item::Text(t) if t.starts_with("FAIL ") => Some((false, t[5..].to_string())),
                _ => None,
            })
            .collect()
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks().iter().all(|(ok, _)| *ok)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, section) in self.sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push_str("== ");
            out.push_str(&section.title);
            out.push_str(" ==\n");
            for item in &section.items {
                match item {
                    Item::Text(t) => {
                        out.push_str(t);
                        out.push('\n');
                    }
                    Item::Table(table) => table.render(&mut out),
                }
            }
        }
        out
    }
}

/// A `PASS <what>` / `FAIL <what>` line.
pub fn check_line(ok: bool, what: impl AsRef<str>) -> String {
    format!("{} {}", if ok { "PASS" } else { "FAIL" }, what.as_ref())
}

/// Quotes a CSV field when it needs it.
pub fn csv_field(value: &str) -> String {
    if value.contains([',', '"', '\n']) {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_aligned_tables() {
        let mut t = Table::new(["x", "value"]);
        t.row(["1", "1/2"]);
        t.row(["10", "3/14"]);
        let mut doc = ReportDocument::default();
        let mut s = Section::new("demo");
        s.text("intro").table(t).text(check_line(true, "thing"));
        doc.push(s);
        assert_eq!(
            doc.render(),
            "== demo ==\nintro\n  x   value\n  --  -----\n  1   1/2\n  10  3/14\nPASS thing\n"
        );
        assert_eq!(doc.checks(), vec![(true, "thing".to_string())]);
        assert!(doc.all_checks_pass());
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("1/2"), "1/2");
        assert_eq!(csv_field("1,2"), "\"1,2\"");
        assert_eq!(csv_field("a\"b"), "\"a\"\"b\"");
    }
}
