//! Result tables and their CSV form: comma-delimited, LF line endings, one
//! header row of `name [unit]`, values in `{:.16e}` scientific notation so
//! every f64 survives a write/read roundtrip exactly.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq)]
pub struct Column {
    pub name: String,
    pub unit: String,
    pub values: Vec<f64>,
}

impl Column {
    pub fn new(name: impl Into<String>, unit: impl Into<String>, values: Vec<f64>) -> Self {
        Self { name: name.into(), unit: unit.into(), values }
    }

    pub fn header(&self) -> String {
        format!("{} [{}]", self.name, self.unit)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub label: String,
    pub columns: Vec<Column>,
}

impl Table {
    pub fn new(label: impl Into<String>) -> Self {
        Self { label: label.into(), columns: Vec::new() }
    }

    pub fn with(mut self, name: &str, unit: &str, values: Vec<f64>) -> Self {
        self.columns.push(Column::new(name, unit, values));
        self
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.values.len())
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().find(|c| c.name == name)
    }

    fn check(&self) -> CliResult<()> {
        let rows = self.rows();
        if let Some(c) = self.columns.iter().find(|c| c.values.len() != rows) {
            return Err(CliError::Csv(format!("table {}: column {} has {} rows, expected {rows}", self.label, c.name, c.values.len())));
        }
        if let Some(c) = self.columns.iter().find(|c| c.unit.is_empty() || c.name.contains(['[', ']', ','])) {
            return Err(CliError::Csv(format!("table {}: column `{}` needs a plain name and a unit", self.label, c.name)));
        }
        Ok(())
    }

    pub fn to_csv(&self) -> CliResult<String> {
        self.check()?;
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(self.columns.iter().map(Column::header))?;
        for i in 0..self.rows() {
            w.write_record(self.columns.iter().map(|c| format!("{:.16e}", c.values[i])))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Csv(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Csv(e.to_string()))
    }

    pub fn from_csv(label: &str, text: &str) -> CliResult<Self> {
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let mut columns = Vec::new();
        for h in r.headers()?.iter() {
            let (name, unit) = h
                .strip_suffix(']')
                .and_then(|s| s.split_once(" ["))
                .ok_or_else(|| CliError::Csv(format!("header `{h}` lacks a [unit]")))?;
            columns.push(Column::new(name, unit, Vec::new()));
        }
        for (line, record) in r.records().enumerate() {
            let record = record?;
            for (col, field) in columns.iter_mut().zip(record.iter()) {
                let v = field
                    .parse::<f64>()
                    .map_err(|e| CliError::Csv(format!("row {}, column {}: {e}", line + 1, col.name)))?;
                col.values.push(v);
            }
        }
        Ok(Self { label: label.into(), columns })
    }
}

/// Everything one experiment run produces.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultBundle {
    pub experiment: String,
    /// Ordered key/value metadata: tool version, wall time, config echo.
    pub meta: Vec<(String, String)>,
    /// The first table is the primary output.
    pub tables: Vec<Table>,
}

impl ResultBundle {
    pub fn primary(&self) -> Option<&Table> {
        self.tables.first()
    }

    fn file_stem(&self, index: usize) -> String {
        if index == 0 {
            self.experiment.clone()
        } else {
            format!("{}_{}", self.experiment, self.tables[index].label)
        }
    }

    /// Writes `<experiment>.csv` (plus `<experiment>_<label>.csv` for extra
    /// tables) and `<experiment>.meta`. Returns the paths written.
    pub fn write(&self, dir: &Path) -> CliResult<Vec<PathBuf>> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let mut written = Vec::new();
        for (i, table) in self.tables.iter().enumerate() {
            let path = dir.join(format!("{}.csv", self.file_stem(i)));
            fs::write(&path, table.to_csv()?).map_err(|e| CliError::io(&path, e))?;
            written.push(path);
        }
        let path = dir.join(format!("{}.meta", self.experiment));
        fs::write(&path, self.meta_text()).map_err(|e| CliError::io(&path, e))?;
        written.push(path);
        Ok(written)
    }

    pub fn meta_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            if v.contains('\n') {
                out.push_str(&format!("{k}:\n"));
                for line in v.lines() {
                    out.push_str(&format!("    {line}\n"));
                }
            } else {
                out.push_str(&format!("{k}: {v}\n"));
            }
        }
        for (i, table) in self.tables.iter().enumerate() {
            out.push_str(&format!("table {}.csv ({} rows):\n", self.file_stem(i), table.rows()));
            for c in &table.columns {
                out.push_str(&format!("    {} [{}]\n", c.name, c.unit));
            }
        }
        out
    }
}

pub fn read_table(path: &Path) -> CliResult<Table> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let label = path.file_stem().and_then(|s| s.to_str()).unwrap_or("table");
    Table::from_csv(label, &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_roundtrip_is_exact() {
        let values = vec![0.1, -1.0 / 3.0, 1e-300, f64::MAX, 5e-324, -0.0, 2.5];
        let t = Table::new("x").with("a", "1", values.clone()).with("time_ns", "ns", (0..7).map(f64::from).collect());
        let text = t.to_csv().unwrap();
        assert!(text.starts_with("a [1],time_ns [ns]\n"));
        assert!(!text.contains('\r'));
        let back = Table::from_csv("x", &text).unwrap();
        assert_eq!(back.columns[0].values.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
                   values.iter().map(|v| v.to_bits()).collect::<Vec<_>>());
        assert_eq!(back, t);
    }

    #[test]
    fn rejects_ragged_or_unitless_columns() {
        assert!(Table::new("x").with("a", "1", vec![1.0]).with("b", "1", vec![]).to_csv().is_err());
        assert!(Table::new("x").with("a", "", vec![1.0]).to_csv().is_err());
        assert!(Table::from_csv("x", "a,b\n1,2\n").is_err());
    }
}
