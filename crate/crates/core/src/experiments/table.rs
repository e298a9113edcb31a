use super::ExperimentError;

/// Schema version written to every manifest.
pub const CSV_SCHEMA_VERSION: u32 = 1;

/// A CSV file held in memory: header plus string cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    pub file: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// Shortest round-trip decimal form, so equal floats print equal bytes.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

impl Table {
    pub fn new(file: impl Into<String>, header: &[&str]) -> Self {
        Table { file: file.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width for {}", self.file);
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        w.into_inner().expect("in-memory flush")
    }

    pub fn parse(file: impl Into<String>, text: &str) -> Result<Self, ExperimentError> {
        let mut r = csv::ReaderBuilder::new().from_reader(text.as_bytes());
        let header = r.headers().map_err(|e| ExperimentError::Schema(e.to_string()))?.iter().map(String::from).collect();
        let rows = r
            .records()
            .map(|rec| rec.map(|rec| rec.iter().map(String::from).collect()))
            .collect::<Result<_, _>>()
            .map_err(|e| ExperimentError::Schema(e.to_string()))?;
        Ok(Table { file: file.into(), header, rows })
    }

    pub fn index(&self, name: &str) -> Result<usize, ExperimentError> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| ExperimentError::Schema(format!("{}: no column `{name}`", self.file)))
    }

    pub fn column(&self, name: &str) -> Result<Vec<String>, ExperimentError> {
        let i = self.index(name)?;
        Ok(self.rows.iter().map(|r| r[i].clone()).collect())
    }

    pub fn numbers(&self, name: &str) -> Result<Vec<f64>, ExperimentError> {
        self.column(name)?
            .iter()
            .map(|s| s.parse().map_err(|_| ExperimentError::Schema(format!("{}: `{s}` in `{name}`", self.file))))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut t = Table::new("x.csv", &["n", "v"]);
        t.push(vec!["1".into(), num(0.1)]);
        t.push(vec!["2".into(), num(1e-300)]);
        let back = Table::parse("x.csv", std::str::from_utf8(&t.to_csv()).unwrap()).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.numbers("v").unwrap(), vec![0.1, 1e-300]);
        assert!(back.numbers("w").is_err());
    }
}
