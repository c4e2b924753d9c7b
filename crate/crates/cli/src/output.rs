//! CSV output: 17 significant digits, `.` decimal point, LF line endings.

use std::path::{Path, PathBuf};

use crate::error::CliError;

pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// One output file held in memory until written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvFile {
    pub name: String,
    pub contents: Vec<u8>,
}

pub struct CsvBuilder {
    name: String,
    writer: csv::Writer<Vec<u8>>,
}

impl CsvBuilder {
    pub fn new(name: impl Into<String>, header: &[&str]) -> Self {
        let mut writer =
            csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        writer.write_record(header).expect("writing to memory");
        Self { name: name.into(), writer }
    }

    pub fn numbers(&mut self, row: &[f64]) -> &mut Self {
        self.writer.write_record(row.iter().map(|&v| num(v))).expect("writing to memory");
        self
    }

    pub fn record<I, S>(&mut self, row: I) -> &mut Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(row).expect("writing to memory");
        self
    }

    pub fn finish(self) -> CsvFile {
        let contents = self.writer.into_inner().expect("in-memory writer never fails to flush");
        CsvFile { name: self.name, contents }
    }
}

pub fn write_all(dir: &Path, files: &[CsvFile]) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
    let mut written = Vec::with_capacity(files.len());
    for f in files {
        let path = dir.join(&f.name);
        std::fs::write(&path, &f.contents).map_err(|source| CliError::Io { path: path.clone(), source })?;
        log::info!("wrote {}", path.display());
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(4.0), "4.0000000000000000e0");
        let back: f64 = num(std::f64::consts::PI).parse().unwrap();
        assert_eq!(back, std::f64::consts::PI);
    }

    #[test]
    fn lf_line_endings() {
        let mut b = CsvBuilder::new("t.csv", &["x", "value"]);
        b.numbers(&[1.0, 2.0]);
        let f = b.finish();
        let text = String::from_utf8(f.contents).unwrap();
        assert_eq!(text, "x,value\n1.0000000000000000e0,2.0000000000000000e0\n");
    }
}
