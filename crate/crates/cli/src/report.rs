use serde::Serialize;
use serde_json::Value;

use crate::args::Format;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool) -> Self {
        Check { name: name.into(), passed, detail: None }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

/// Flat rendering of the main result, used for CSV and pretty output.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Table { headers: headers.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push<S: ToString>(&mut self, row: impl IntoIterator<Item = S>) {
        self.rows.push(row.into_iter().map(|s| s.to_string()).collect());
    }

    /// Square matrix with row and column labels.
    pub fn gram<T: ToString>(labels: &[String], m: &[Vec<T>]) -> Self {
        let mut t = Table::new(std::iter::once(String::new()).chain(labels.iter().cloned()));
        for (l, row) in labels.iter().zip(m) {
            t.push(std::iter::once(l.clone()).chain(row.iter().map(ToString::to_string)));
        }
        t
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub table: Table,
}

impl Report {
    pub fn new(command: impl Into<String>, inputs: Value) -> Self {
        Report {
            tool: "dirac-pairings",
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            inputs,
            results: Value::Null,
            checks: Vec::new(),
            table: Table::default(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => render_csv(&self.table),
            Format::Pretty => self.render_pretty(),
        }
    }

    fn render_pretty(&self) -> String {
        let mut out = format!("{} {} :: {}\n", self.tool, self.version, self.command);
        if !self.table.headers.is_empty() {
            out.push('\n');
            out.push_str(&render_aligned(&self.table));
        }
        if !self.checks.is_empty() {
            out.push('\n');
            for c in &self.checks {
                let mark = if c.passed { "PASS" } else { "FAIL" };
                match &c.detail {
                    Some(d) => out.push_str(&format!("[{mark}] {}: {d}\n", c.name)),
                    None => out.push_str(&format!("[{mark}] {}\n", c.name)),
                }
            }
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render_csv(t: &Table) -> String {
    std::iter::once(&t.headers)
        .chain(&t.rows)
        .map(|r| r.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(",") + "\n")
        .collect()
}

fn render_aligned(t: &Table) -> String {
    let cols = t.headers.len();
    let width: Vec<usize> = (0..cols)
        .map(|c| std::iter::once(&t.headers).chain(&t.rows).map(|r| r.get(c).map_or(0, |s| s.chars().count())).max().unwrap_or(0))
        .collect();
    std::iter::once(&t.headers)
        .chain(&t.rows)
        .map(|r| {
            let cells: Vec<String> =
                r.iter().enumerate().map(|(c, s)| format!("{s:>w$}", w = width.get(c).copied().unwrap_or(0))).collect();
            cells.join("  ").trim_end().to_string() + "\n"
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quoting() {
        let mut t = Table::new(["a", "b"]);
        t.push(["1", "x,y"]);
        assert_eq!(render_csv(&t), "a,b\n1,\"x,y\"\n");
    }

    #[test]
    fn gram_table_and_pretty() {
        let labels = vec!["p".to_string(), "q".to_string()];
        let t = Table::gram(&labels, &[vec![1, 0], vec![0, 1]]);
        assert_eq!(render_csv(&t), ",p,q\np,1,0\nq,0,1\n");
        let mut r = Report::new("demo", Value::Null);
        r.table = t;
        r.checks.push(Check::new("ok", true));
        let s = r.render(Format::Pretty);
        assert!(s.contains("[PASS] ok") && s.contains("p  1  0"));
        assert!(r.passed());
    }
}
