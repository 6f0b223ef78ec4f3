//! Text formats: matrix files and the trial/aggregate tables.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::AdjacencyMatrix;
use crate::metrics::{AggregateRecord, TrialRecord};

pub const TRIAL_HEADER: &str = "model,method,prune,noise_sd,rep,seed,f1,mse,iterations,converged";
pub const AGGREGATE_HEADER: &str =
    "model,method,prune,noise_sd,n,mean_f1,sem_f1,mean_mse,sem_mse";

/// Significant digits for table values.
const TABLE_DIGITS: usize = 9;

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// C-style `%.<sig>g`: fixed notation for moderate exponents, scientific
/// otherwise, trailing zeros removed.
pub fn format_g(v: f64, sig: usize) -> String {
    assert!(sig >= 1);
    if v == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.*e}", sig - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= sig as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    } else {
        let decimals = (sig as i32 - 1 - exp) as usize;
        trim_fraction(&format!("{v:.decimals$}")).to_string()
    }
}

pub fn format_table_value(v: f64) -> String {
    format_g(v, TABLE_DIGITS)
}

/// `n <rows> <cols>` followed by one line per row, values at 17
/// significant digits.
pub fn write_matrix<W: Write>(mut w: W, x: &AdjacencyMatrix) -> Result<()> {
    writeln!(w, "n {} {}", x.n(), x.n())?;
    for row in x.rows() {
        let line: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}

fn parse_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::invalid(format!("matrix file line {line}: {msg}"))
}

pub fn read_matrix<R: BufRead>(r: R) -> Result<AdjacencyMatrix> {
    let mut lines = r.lines().enumerate().filter_map(|(i, l)| match l {
        Ok(s) if s.trim().is_empty() => None,
        other => Some((i + 1, other)),
    });
    let (lineno, header) = lines.next().ok_or_else(|| Error::invalid("empty matrix file"))?;
    let header = header?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (rows, cols) = match fields.as_slice() {
        ["n", r, c] => (
            r.parse::<usize>().map_err(|e| parse_err(lineno, e))?,
            c.parse::<usize>().map_err(|e| parse_err(lineno, e))?,
        ),
        _ => return Err(parse_err(lineno, "expected header `n <rows> <cols>`")),
    };
    if rows != cols {
        return Err(parse_err(lineno, format!("adjacency matrix must be square, got {rows}x{cols}")));
    }
    let mut values = Vec::with_capacity(rows * cols);
    for (lineno, line) in lines {
        let line = line?;
        let before = values.len();
        for tok in line.split_whitespace() {
            values.push(tok.parse::<f64>().map_err(|e| parse_err(lineno, format!("`{tok}`: {e}")))?);
        }
        if values.len() - before != cols {
            return Err(parse_err(lineno, format!("expected {cols} values, got {}", values.len() - before)));
        }
    }
    if values.len() != rows * cols {
        return Err(Error::invalid(format!(
            "matrix file holds {} rows, header says {rows}",
            values.len() / cols.max(1)
        )));
    }
    AdjacencyMatrix::new(rows, values)
}

pub fn save_matrix(path: &Path, x: &AdjacencyMatrix) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_matrix(&mut w, x)?;
    w.flush()?;
    Ok(())
}

pub fn load_matrix(path: &Path) -> Result<AdjacencyMatrix> {
    read_matrix(BufReader::new(File::open(path)?))
}

pub fn write_trials<W: Write>(mut w: W, records: &[TrialRecord]) -> Result<()> {
    writeln!(w, "{TRIAL_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            r.model,
            r.method,
            format_table_value(r.prune),
            format_table_value(r.noise_sd),
            r.rep,
            r.seed,
            format_table_value(r.f1),
            format_table_value(r.mse),
            r.iterations,
            r.converged
        )?;
    }
    Ok(())
}

pub fn write_aggregates<W: Write>(mut w: W, records: &[AggregateRecord]) -> Result<()> {
    writeln!(w, "{AGGREGATE_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            r.model,
            r.method,
            format_table_value(r.prune),
            format_table_value(r.noise_sd),
            r.n,
            format_table_value(r.mean_f1),
            format_table_value(r.sem_f1),
            format_table_value(r.mean_mse),
            format_table_value(r.sem_mse)
        )?;
    }
    Ok(())
}

fn field<T: std::str::FromStr>(tok: &str, name: &str, line: usize) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    tok.parse::<T>()
        .map_err(|e| Error::invalid(format!("line {line}: bad {name} `{tok}`: {e}")))
}

/// Parse a table written by [`write_aggregates`].
pub fn read_aggregates<R: BufRead>(r: R) -> Result<Vec<AggregateRecord>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if i == 0 {
            if line.trim() != AGGREGATE_HEADER {
                return Err(Error::invalid(format!("unexpected aggregate header `{line}`")));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let t: Vec<&str> = line.split(',').collect();
        if t.len() != 9 {
            return Err(Error::invalid(format!("line {lineno}: expected 9 fields, got {}", t.len())));
        }
        out.push(AggregateRecord {
            model: t[0].parse()?,
            method: t[1].parse()?,
            prune: field(t[2], "prune", lineno)?,
            noise_sd: field(t[3], "noise_sd", lineno)?,
            n: field(t[4], "n", lineno)?,
            mean_f1: field(t[5], "mean_f1", lineno)?,
            sem_f1: field(t[6], "sem_f1", lineno)?,
            mean_mse: field(t[7], "mean_mse", lineno)?,
            sem_mse: field(t[8], "sem_mse", lineno)?,
        });
    }
    Ok(out)
}
