//! Tabular observables and their CSV form.

use std::io::Write;

use num_complex::Complex64 as C64;

#[derive(Clone, Debug, PartialEq)]
pub enum Column {
    Real(Vec<f64>),
    Complex(Vec<C64>),
}

impl Column {
    pub fn len(&self) -> usize {
        match self {
            Column::Real(v) => v.len(),
            Column::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Key {
    Real(Vec<f64>),
    Label(Vec<String>),
}

impl Key {
    fn len(&self) -> usize {
        match self {
            Key::Real(v) => v.len(),
            Key::Label(v) => v.len(),
        }
    }

    fn cell(&self, row: usize) -> String {
        match self {
            Key::Real(v) => fmt_real(v[row]),
            Key::Label(v) => v[row].clone(),
        }
    }
}

/// Named columns sharing one key column (time, amplitude, γ, or a label).
#[derive(Clone, Debug, PartialEq)]
pub struct ObservableSeries {
    key_name: String,
    key: Key,
    columns: Vec<(String, Column)>,
}

fn fmt_real(x: f64) -> String {
    // Shortest round-trip representation; identical across runs.
    format!("{x}")
}

impl ObservableSeries {
    pub fn new(key_name: impl Into<String>, key: Key) -> Self {
        Self { key_name: key_name.into(), key, columns: vec![] }
    }

    pub fn len(&self) -> usize {
        self.key.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn key(&self) -> &Key {
        &self.key
    }

    /// Adds a column; panics if its length differs from the key column.
    pub fn push(&mut self, name: impl Into<String>, column: Column) {
        let name = name.into();
        assert_eq!(column.len(), self.len(), "column '{name}' does not match the key length");
        assert!(self.column(&name).is_none(), "duplicate column '{name}'");
        self.columns.push((name, column));
    }

    pub fn push_real(&mut self, name: impl Into<String>, values: Vec<f64>) {
        self.push(name, Column::Real(values));
    }

    pub fn push_complex(&mut self, name: impl Into<String>, values: Vec<C64>) {
        self.push(name, Column::Complex(values));
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }

    pub fn real(&self, name: &str) -> Option<&[f64]> {
        match self.column(name)? {
            Column::Real(v) => Some(v),
            Column::Complex(_) => None,
        }
    }

    pub fn column_names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|(n, _)| n.as_str())
    }

    /// Header with complex columns split into `<name>_re`, `<name>_im`.
    pub fn header(&self) -> Vec<String> {
        let mut h = vec![self.key_name.clone()];
        for (name, col) in &self.columns {
            match col {
                Column::Real(_) => h.push(name.clone()),
                Column::Complex(_) => {
                    h.push(format!("{name}_re"));
                    h.push(format!("{name}_im"));
                }
            }
        }
        h
    }

    fn row(&self, i: usize) -> Vec<String> {
        let mut r = vec![self.key.cell(i)];
        for (_, col) in &self.columns {
            match col {
                Column::Real(v) => r.push(fmt_real(v[i])),
                Column::Complex(v) => {
                    r.push(fmt_real(v[i].re));
                    r.push(fmt_real(v[i].im));
                }
            }
        }
        r
    }

    /// `# resolved-config: <stamp>` followed by the CSV table.
    pub fn write_csv<W: Write>(&self, mut out: W, stamp: &str) -> Result<(), csv::Error> {
        writeln!(out, "# resolved-config: {stamp}")?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.header())?;
        for i in 0..self.len() {
            w.write_record(self.row(i))?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_columns_are_split() {
        let mut s = ObservableSeries::new("t", Key::Real(vec![0.0, 0.5]));
        s.push_real("x", vec![1.0, 2.5]);
        s.push_complex("z", vec![C64::new(1.0, -1.0), C64::new(0.0, 0.25)]);
        assert_eq!(s.header(), ["t", "x", "z_re", "z_im"]);
        let mut buf = vec![];
        s.write_csv(&mut buf, "a = 1").unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "# resolved-config: a = 1\nt,x,z_re,z_im\n0,1,1,-1\n0.5,2.5,0,0.25\n");
    }

    #[test]
    #[should_panic(expected = "does not match")]
    fn mismatched_column_rejected() {
        let mut s = ObservableSeries::new("t", Key::Real(vec![0.0, 0.5]));
        s.push_real("x", vec![1.0]);
    }

    #[test]
    fn label_keys() {
        let mut s = ObservableSeries::new("series", Key::Label(vec!["cat".into()]));
        s.push_real("slope", vec![4.0]);
        let mut buf = vec![];
        s.write_csv(&mut buf, "x").unwrap();
        assert!(String::from_utf8(buf).unwrap().ends_with("series,slope\ncat,4\n"));
    }
}
