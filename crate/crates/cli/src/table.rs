//! CSV result tables with `#` header comments.

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// File stem; the table is written to `<name>.csv`.
    pub name: String,
    pub comments: Vec<String>,
    pub columns: Vec<(&'static str, &'static str)>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    /// `columns` pairs each column name with a one-line description.
    pub fn new(name: &str, title: &str, columns: &[(&'static str, &'static str)]) -> Self {
        Table {
            name: name.to_string(),
            comments: vec![title.to_string()],
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn note(&mut self, line: impl Into<String>) -> &mut Self {
        self.comments.push(line.into());
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width of table {}", self.name);
        self.rows.push(row);
    }

    pub fn file_name(&self) -> String {
        format!("{}.csv", self.name)
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|(c, _)| *c == name)
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut out = Vec::new();
        for c in &self.comments {
            out.extend_from_slice(format!("# {c}\n").as_bytes());
        }
        for (name, doc) in &self.columns {
            out.extend_from_slice(format!("# {name}: {doc}\n").as_bytes());
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(self.columns.iter().map(|(c, _)| *c)).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }
}

/// Shortest round-trip decimal; scientific notation for very small or
/// very large magnitudes.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && a.is_finite() && !(1e-5..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

pub fn flag(b: bool) -> String {
    b.to_string()
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.0, -2.203125, 1e-300, 0.1, 123456.789, 3e20, -4.5e-7] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(-2.203125), "-2.203125");
        assert_eq!(num(1e-7), "1e-7");
    }

    #[test]
    fn layout() {
        let mut t = Table::new("demo", "demo table", &[("a", "first"), ("b", "second")]);
        t.push(vec!["1".into(), "x,y".into()]);
        let text = String::from_utf8(t.to_csv().unwrap()).unwrap();
        assert_eq!(text, "# demo table\n# a: first\n# b: second\na,b\n1,\"x,y\"\n");
    }
}
