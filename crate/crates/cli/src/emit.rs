//! CSV writers.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use slitwave::model::Grid1D;
use slitwave::phase_space::PhaseSpaceMap;

use crate::config::CsvFormat;
use crate::error::CliError;

/// A file written by a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmittedFile {
    pub path: PathBuf,
    /// Data rows, header excluded.
    pub rows: usize,
    pub sha256: String,
}

/// Writes through to `inner` while hashing every byte.
struct HashingWriter<W> {
    inner: W,
    hasher: Sha256,
}

impl<W: Write> Write for HashingWriter<W> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        let n = self.inner.write(buf)?;
        self.hasher.update(&buf[..n]);
        Ok(n)
    }

    fn flush(&mut self) -> io::Result<()> {
        self.inner.flush()
    }
}

/// `value` with `precision` significant digits in scientific notation.
pub fn format_value(value: f64, precision: usize) -> String {
    format!("{:.*e}", precision.saturating_sub(1), value)
}

fn write_table(
    path: &Path,
    format: &CsvFormat,
    header: &[&str],
    rows: usize,
    mut row: impl FnMut(usize, &mut Vec<f64>),
) -> Result<EmittedFile, CliError> {
    let file = File::create(path).map_err(|e| CliError::io(format!("cannot create {}", path.display()), e))?;
    let mut out = HashingWriter { inner: BufWriter::new(file), hasher: Sha256::new() };
    let delim = format.delimiter.to_string();
    let mut cells = Vec::with_capacity(header.len());
    let mut line = String::new();
    let result = (|| -> io::Result<()> {
        writeln!(out, "{}", header.join(&delim))?;
        for r in 0..rows {
            cells.clear();
            row(r, &mut cells);
            line.clear();
            for (i, v) in cells.iter().enumerate() {
                if i > 0 {
                    line.push(format.delimiter);
                }
                line.push_str(&format_value(*v, format.precision));
            }
            line.push('\n');
            out.write_all(line.as_bytes())?;
        }
        out.flush()
    })();
    result.map_err(|e| CliError::io(format!("cannot write {}", path.display()), e))?;
    Ok(EmittedFile { path: path.to_path_buf(), rows, sha256: hex::encode(out.hasher.finalize()) })
}

/// Long-format map: `x_m,kx_per_m,value`, rows over x then kₓ.
pub fn emit_phase_space_csv(map: &PhaseSpaceMap, path: &Path, format: &CsvFormat) -> Result<EmittedFile, CliError> {
    let (nx, nk) = map.dims();
    let mut current = usize::MAX;
    let mut row_values = Vec::new();
    write_table(path, format, &["x_m", "kx_per_m", "value"], nx * nk, |r, cells| {
        let (i, j) = (r / nk, r % nk);
        if i != current {
            row_values = map.row(i);
            current = i;
        }
        cells.extend([map.xgrid().at(i), map.kgrid().at(j), row_values[j]]);
    })
}

/// One density on a grid: `coord,value`.
pub fn emit_density_csv(
    grid: &Grid1D,
    values: &[f64],
    path: &Path,
    format: &CsvFormat,
) -> Result<EmittedFile, CliError> {
    write_table(path, format, &["coord", "value"], grid.len(), |i, cells| cells.extend([grid.at(i), values[i]]))
}

/// Momentum density beside its closed-form counterpart: `kx_per_m,spectrum,fraunhofer`.
pub fn emit_spectrum_csv(
    grid: &Grid1D,
    spectrum: &[f64],
    fraunhofer: &[f64],
    path: &Path,
    format: &CsvFormat,
) -> Result<EmittedFile, CliError> {
    write_table(path, format, &["kx_per_m", "spectrum", "fraunhofer"], grid.len(), |i, cells| {
        cells.extend([grid.at(i), spectrum[i], fraunhofer[i]])
    })
}
