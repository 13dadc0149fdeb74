//! Human-readable and CSV rendering.

use csv::{Terminator, WriterBuilder};

/// A command's result: free text for humans and a table for `--csv`.
pub struct Output {
    pub text: String,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Output {
    pub fn new(header: Vec<&'static str>) -> Self {
        Output { text: String::new(), header, rows: Vec::new() }
    }

    pub fn line(&mut self, line: impl AsRef<str>) {
        self.text.push_str(line.as_ref());
        self.text.push('\n');
    }

    pub fn row(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn render(&self, csv: bool) -> String {
        if !csv {
            return self.text.clone();
        }
        let mut w = WriterBuilder::new().terminator(Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header).expect("write to memory");
        for row in &self.rows {
            w.write_record(row).expect("write to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 fields")
    }
}

pub fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map_or_else(|| "none".to_string(), ToString::to_string)
}
