//! CSV emission: header row, comma separated, LF line endings, numbers with
//! 15 significant digits.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use crate::error::CliResult;

/// `printf("%.15g", x)`.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    const P: i32 = 15;
    // The exponent after rounding to P digits decides the notation.
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..P).contains(&exp) {
        let m = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        trim_fraction(&format!("{:.*}", (P - 1 - exp) as usize, x)).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A CSV table written to a file or to stdout.
pub struct Table {
    writer: csv::Writer<Box<dyn Write>>,
}

impl Table {
    pub fn create(path: Option<&Path>, header: &[&str]) -> CliResult<Self> {
        let sink: Box<dyn Write> = match path {
            Some(p) => Box::new(io::BufWriter::new(File::create(p)?)),
            None => Box::new(io::BufWriter::new(io::stdout().lock())),
        };
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(sink);
        writer.write_record(header)?;
        Ok(Table { writer })
    }

    pub fn row(&mut self, cells: &[Cell]) -> CliResult<()> {
        self.writer.write_record(cells.iter().map(Cell::render))?;
        Ok(())
    }

    pub fn finish(mut self) -> CliResult<()> {
        self.writer.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Cell {
    Num(f64),
    Bool(bool),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match *self {
            Cell::Num(x) => fmt_num(x),
            Cell::Bool(b) => (if b { "1" } else { "0" }).into(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}
