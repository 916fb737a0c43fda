//! Reading signals from disk.
//!
//! A signal file is either plain text with one number per line (blank lines
//! ignored), or a CSV file from which a single column is taken.

use std::fs;
use std::path::Path;

use volterra::{Error, Result, Signal};

/// Which CSV column holds the signal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Column {
    /// 0-based position.
    Index(usize),
    /// Header name; the file must have a header row.
    Name(String),
}

impl Column {
    pub fn parse(spec: &str) -> Column {
        spec.parse().map(Column::Index).unwrap_or_else(|_| Column::Name(spec.to_string()))
    }
}

pub fn read_signal(path: &Path, column: Option<&Column>, has_header: bool) -> Result<Signal> {
    let values = match column {
        None => parse_lines(&fs::read_to_string(path)?, path)?,
        Some(col) => read_column(path, col, has_header)?,
    };
    if values.is_empty() {
        return Err(Error::EmptySignal);
    }
    Signal::new(values)
}

fn parse_lines(text: &str, path: &Path) -> Result<Vec<f64>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_value(l.trim(), path, i + 1))
        .collect()
}

fn read_column(path: &Path, col: &Column, has_header: bool) -> Result<Vec<f64>> {
    let named = matches!(col, Column::Name(_));
    let mut reader = csv::ReaderBuilder::new().has_headers(has_header || named).trim(csv::Trim::All).from_path(path)?;
    let index = match col {
        Column::Index(i) => *i,
        Column::Name(name) => reader
            .headers()?
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Config(format!("{}: no column named {name:?}", path.display())))?,
    };
    let first_line = if has_header || named { 2 } else { 1 };
    let mut values = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let field = record
            .get(index)
            .ok_or_else(|| Error::Config(format!("{}:{}: no column {index}", path.display(), i + first_line)))?;
        values.push(parse_value(field, path, i + first_line)?);
    }
    Ok(values)
}

fn parse_value(field: &str, path: &Path, line: usize) -> Result<f64> {
    let v: f64 = field
        .parse()
        .map_err(|_| Error::Config(format!("{}:{line}: cannot parse {field:?} as a number", path.display())))?;
    if !v.is_finite() {
        return Err(Error::Config(format!("{}:{line}: value {field} is not finite", path.display())));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn file(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn plain_lines() {
        let f = file("1\n 2.5 \n\n-3e-1\n");
        assert_eq!(read_signal(f.path(), None, false).unwrap().values(), &[1.0, 2.5, -0.3]);
    }

    #[test]
    fn bad_plain_input() {
        assert!(read_signal(file("").path(), None, false).is_err());
        assert!(read_signal(file("1\nx\n").path(), None, false).is_err());
        assert!(read_signal(file("1\nNaN\n").path(), None, false).is_err());
    }

    #[test]
    fn csv_columns() {
        let f = file("a,b\n1,10\n2,20\n");
        let by_name = read_signal(f.path(), Some(&Column::parse("b")), false).unwrap();
        assert_eq!(by_name.values(), &[10.0, 20.0]);
        let by_index = read_signal(f.path(), Some(&Column::parse("0")), true).unwrap();
        assert_eq!(by_index.values(), &[1.0, 2.0]);
        // Without a header the first row is data, and "a" does not parse.
        assert!(read_signal(f.path(), Some(&Column::parse("0")), false).is_err());
        assert!(read_signal(f.path(), Some(&Column::parse("c")), false).is_err());
        assert!(read_signal(f.path(), Some(&Column::parse("5")), true).is_err());
    }
}
