use std::fmt::Write as _;

use crate::error::{CliError, CliResult};

/// Named numeric columns with free-form notes, written as CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesTable {
    pub title: String,
    pub notes: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl SeriesTable {
    pub fn new(title: impl Into<String>, columns: Vec<String>) -> Self {
        SeriesTable { title: title.into(), notes: Vec::new(), columns, rows: Vec::new() }
    }

    /// Builds rows from an abscissa and one vector per curve.
    pub fn from_columns(title: impl Into<String>, x_name: &str, x: &[f64], curves: Vec<(String, Vec<f64>)>) -> Self {
        let mut columns = vec![x_name.to_string()];
        columns.extend(curves.iter().map(|(n, _)| n.clone()));
        let rows = x
            .iter()
            .enumerate()
            .map(|(i, &xi)| {
                let mut row = vec![xi];
                row.extend(curves.iter().map(|(_, c)| c[i]));
                row
            })
            .collect();
        SeriesTable { title: title.into(), notes: Vec::new(), columns, rows }
    }

    pub fn note(mut self, text: impl Into<String>) -> Self {
        self.notes.push(text.into());
        self
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    /// Rectangular with finite entries only.
    pub fn check(&self) -> CliResult<()> {
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.columns.len() {
                return Err(CliError::Degenerate(format!(
                    "{}: row {i} has {} entries for {} columns",
                    self.title,
                    row.len(),
                    self.columns.len()
                )));
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(CliError::Degenerate(format!("{}: non-finite value in column `{}` at row {i}", self.title, self.columns[j])));
            }
        }
        Ok(())
    }

    /// `#` lines (title, notes, then `provenance`), a header row and the data
    /// with 17 significant digits.
    pub fn to_csv(&self, provenance: &str) -> CliResult<String> {
        self.check()?;
        let mut out = String::new();
        let _ = writeln!(out, "# {}", self.title);
        for n in &self.notes {
            let _ = writeln!(out, "# note: {n}");
        }
        for line in provenance.lines() {
            let _ = writeln!(out, "# {line}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let t = SeriesTable::from_columns("demo", "x", &[0.0, 1.0], vec![("y".into(), vec![0.1, 2.0 / 3.0])]).note("hello");
        let csv = t.to_csv("seed = 1").unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# demo");
        assert_eq!(lines[1], "# note: hello");
        assert_eq!(lines[2], "# seed = 1");
        assert_eq!(lines[3], "x,y");
        assert_eq!(lines[5], "1.0000000000000000e0,6.6666666666666663e-1");
        let back: f64 = lines[5].split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(back, 2.0 / 3.0);
        assert_eq!(t.column("y").unwrap(), vec![0.1, 2.0 / 3.0]);
    }

    #[test]
    fn rejects_non_finite() {
        let t = SeriesTable::from_columns("bad", "x", &[0.0], vec![("y".into(), vec![f64::NAN])]);
        assert!(matches!(t.to_csv(""), Err(CliError::Degenerate(_))));
        let mut ragged = SeriesTable::new("ragged", vec!["a".into(), "b".into()]);
        ragged.rows.push(vec![1.0]);
        assert!(ragged.check().is_err());
    }
}
