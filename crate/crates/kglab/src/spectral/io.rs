//! Field file format: one JSON header line carrying the grid metadata,
//! followed by raw little-endian `f64` pairs `(re, im)` in row-major
//! lattice order. Trivially portable across languages.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::field::ComplexField;
use super::grid::{Grid, GridError};

const FORMAT_TAG: &str = "kglab-field";
const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct FieldHeader {
    format: String,
    version: u32,
    dim: usize,
    half_length: f64,
    points: usize,
    kind: String,
}

#[derive(Debug, Error)]
pub enum FieldFileError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("header declares an invalid grid: {0}")]
    InvalidGrid(#[from] GridError),
    #[error("payload has {got} samples but the header grid needs {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("truncated payload: expected {expected} bytes, found {got}")]
    TruncatedPayload { expected: usize, got: usize },
}

pub fn write_field(f: &ComplexField, path: impl AsRef<Path>) -> Result<(), FieldFileError> {
    let grid = f.grid();
    let header = FieldHeader {
        format: FORMAT_TAG.to_string(),
        version: FORMAT_VERSION,
        dim: grid.dim(),
        half_length: grid.half_length(),
        points: grid.points(),
        kind: "complex".to_string(),
    };
    let mut w = BufWriter::new(File::create(path)?);
    let header_line = serde_json::to_string(&header)
        .map_err(|e| FieldFileError::MalformedHeader(e.to_string()))?;
    w.write_all(header_line.as_bytes())?;
    w.write_all(b"\n")?;
    for v in f.values() {
        w.write_all(&v.re.to_le_bytes())?;
        w.write_all(&v.im.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_field(path: impl AsRef<Path>) -> Result<ComplexField, FieldFileError> {
    let mut r = BufReader::new(File::open(path)?);
    let mut raw = Vec::new();
    r.read_to_end(&mut raw)?;

    let newline = raw
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| FieldFileError::MalformedHeader("no header line".to_string()))?;
    let header: FieldHeader = serde_json::from_slice(&raw[..newline])
        .map_err(|e| FieldFileError::MalformedHeader(e.to_string()))?;
    if header.format != FORMAT_TAG {
        return Err(FieldFileError::MalformedHeader(format!(
            "unknown format tag {:?}",
            header.format
        )));
    }
    if header.version != FORMAT_VERSION {
        return Err(FieldFileError::MalformedHeader(format!(
            "unsupported version {}",
            header.version
        )));
    }
    if header.kind != "complex" {
        return Err(FieldFileError::MalformedHeader(format!(
            "unknown field kind {:?}",
            header.kind
        )));
    }
    let grid = Grid::new(header.dim, header.half_length, header.points)?;

    let payload = &raw[newline + 1..];
    let expected_bytes = grid.site_count() * 16;
    if payload.len() < expected_bytes {
        return Err(FieldFileError::TruncatedPayload {
            expected: expected_bytes,
            got: payload.len(),
        });
    }
    if payload.len() != expected_bytes {
        return Err(FieldFileError::SizeMismatch {
            expected: grid.site_count(),
            got: payload.len() / 16,
        });
    }
    let values: Vec<Complex64> = payload
        .chunks_exact(16)
        .map(|c| {
            let re = f64::from_le_bytes(c[0..8].try_into().unwrap());
            let im = f64::from_le_bytes(c[8..16].try_into().unwrap());
            Complex64::new(re, im)
        })
        .collect();
    ComplexField::new(grid, values).map_err(|e| FieldFileError::MalformedHeader(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::fs;

    fn random_field(grid: Grid, seed: u64) -> ComplexField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..grid.site_count())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        ComplexField::new(grid, values).unwrap()
    }

    #[test]
    fn round_trip_is_bit_identical() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.field");
        let f = random_field(Grid::new(3, 16.0, 8).unwrap(), 1);
        write_field(&f, &path).unwrap();
        let g = read_field(&path).unwrap();
        assert_eq!(f.grid(), g.grid());
        assert_eq!(f.values(), g.values());
    }

    #[test]
    fn preserves_grid_metadata_in_two_dimensions() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f2.field");
        let grid = Grid::new(2, 5.0, 16).unwrap();
        write_field(&random_field(grid, 2), &path).unwrap();
        let g = read_field(&path).unwrap();
        assert_eq!(*g.grid(), grid);
    }

    #[test]
    fn detects_size_mismatch_and_truncation() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.field");
        let f = random_field(Grid::new(2, 4.0, 8).unwrap(), 3);
        write_field(&f, &path).unwrap();
        let raw = fs::read(&path).unwrap();
        let newline = raw.iter().position(|&b| b == b'\n').unwrap();

        // header claims a larger grid than the payload holds
        let bigger = path.with_file_name("bigger.field");
        let mut edited = String::from_utf8(raw[..newline].to_vec()).unwrap();
        edited = edited.replace("\"points\":8", "\"points\":16");
        let mut bytes = edited.into_bytes();
        bytes.push(b'\n');
        bytes.extend_from_slice(&raw[newline + 1..]);
        fs::write(&bigger, &bytes).unwrap();
        assert!(matches!(
            read_field(&bigger).unwrap_err(),
            FieldFileError::TruncatedPayload { .. }
        ));

        // header claims a smaller grid: payload too long
        let smaller = path.with_file_name("smaller.field");
        let mut edited = String::from_utf8(raw[..newline].to_vec()).unwrap();
        edited = edited.replace("\"points\":8", "\"points\":4");
        let mut bytes = edited.into_bytes();
        bytes.push(b'\n');
        bytes.extend_from_slice(&raw[newline + 1..]);
        fs::write(&smaller, &bytes).unwrap();
        assert!(matches!(
            read_field(&smaller).unwrap_err(),
            FieldFileError::SizeMismatch { .. }
        ));

        // payload physically cut short
        let cut = path.with_file_name("cut.field");
        fs::write(&cut, &raw[..raw.len() - 5]).unwrap();
        assert!(matches!(
            read_field(&cut).unwrap_err(),
            FieldFileError::TruncatedPayload { .. }
        ));

        // garbage header
        let bad = path.with_file_name("bad.field");
        fs::write(&bad, b"{not json\n").unwrap();
        assert!(matches!(
            read_field(&bad).unwrap_err(),
            FieldFileError::MalformedHeader(_)
        ));
    }
}
