//! Newline-delimited JSON checkpoints: one header record with the scan
//! parameters, then one batch record per merged group of chunks.
//!
//! A final line without its terminating newline is the remnant of an
//! interrupted write and is dropped; any other unreadable line makes the
//! whole file corrupt.

use std::fs::{File, OpenOptions};
use std::io::{BufWriter, ErrorKind, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::{merge_witness, ChunkResult, ScanParams, ScanSource, SpectrumScan, Witness};
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum Record {
    Header {
        version: u32,
        r: usize,
        c: usize,
        bound: i64,
        max_value: Option<String>,
        source: String,
        chunk_size: u64,
        total: u64,
    },
    Batch {
        chunks: Vec<u64>,
        tuples: u64,
        infinite: u64,
        found: Vec<Found>,
    },
}

#[derive(Debug, Serialize, Deserialize)]
struct Found {
    value: String,
    tuple: u64,
    coeffs: Vec<String>,
}

fn header(params: &ScanParams) -> Result<Record> {
    Ok(Record::Header {
        version: FORMAT_VERSION,
        r: params.r,
        c: params.c,
        bound: params.bound,
        max_value: params.max_value.as_ref().map(ToString::to_string),
        source: params.source.to_string(),
        chunk_size: params.chunk_size,
        total: params.total_tuples()?,
    })
}

fn batch<'a>(
    chunks: Vec<u64>,
    tuples: u64,
    infinite: u64,
    found: impl Iterator<Item = (&'a BigInt, &'a Witness)>,
) -> Record {
    Record::Batch {
        chunks,
        tuples,
        infinite,
        found: found
            .map(|(v, w)| Found {
                value: v.to_string(),
                tuple: w.tuple,
                coeffs: w.poly.coeffs().iter().map(ToString::to_string).collect(),
            })
            .collect(),
    }
}

fn write_record(out: &mut impl Write, record: &Record) -> Result<()> {
    let line = serde_json::to_string(record)
        .map_err(|e| Error::domain(format!("cannot encode checkpoint record: {e}")))?;
    out.write_all(line.as_bytes())?;
    out.write_all(b"\n")?;
    Ok(())
}

/// Single writer appending chunk results to a checkpoint file.
pub struct CheckpointWriter {
    out: BufWriter<File>,
}

impl CheckpointWriter {
    pub fn create(path: &Path, params: &ScanParams) -> Result<Self> {
        let mut out = BufWriter::new(File::create(path)?);
        write_record(&mut out, &header(params)?)?;
        out.flush()?;
        Ok(CheckpointWriter { out })
    }

    /// Opens an existing checkpoint for appending, cutting off a trailing
    /// partial line first.
    pub fn open_append(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path)?;
        let keep = bytes.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
        let file = OpenOptions::new().write(true).open(path)?;
        file.set_len(keep as u64)?;
        drop(file);
        let file = OpenOptions::new().append(true).open(path)?;
        Ok(CheckpointWriter {
            out: BufWriter::new(file),
        })
    }

    pub(crate) fn append(&mut self, chunk: &ChunkResult) -> Result<()> {
        let record = batch(
            vec![chunk.index],
            chunk.tuples,
            chunk.infinite,
            chunk.found.iter(),
        );
        write_record(&mut self.out, &record)?;
        self.out.flush()?;
        Ok(())
    }
}

/// Writes a complete snapshot of `scan` to `path`, replacing any file there.
pub fn persist_scan(scan: &SpectrumScan, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_record(&mut out, &header(&scan.params)?)?;
    let record = batch(
        scan.completed_chunks.iter().copied().collect(),
        scan.enumerated,
        scan.infinite,
        scan.values.iter(),
    );
    write_record(&mut out, &record)?;
    out.flush()?;
    Ok(())
}

/// Rebuilds a scan from a checkpoint. A missing file gives
/// [`Error::NoCheckpoint`]; an unreadable one [`Error::CorruptCheckpoint`].
pub fn resume_scan(path: &Path) -> Result<SpectrumScan> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == ErrorKind::NotFound => {
            return Err(Error::NoCheckpoint(path.to_path_buf()))
        }
        Err(e) if e.kind() == ErrorKind::InvalidData => {
            return Err(corrupt(path, "file is not valid UTF-8"))
        }
        Err(e) => return Err(e.into()),
    };
    let complete_tail = text.ends_with('\n');
    let lines: Vec<&str> = text.lines().collect();
    let Some((first, rest)) = lines.split_first() else {
        return Err(corrupt(path, "missing header record"));
    };
    let params = match serde_json::from_str::<Record>(first) {
        Ok(Record::Header {
            version,
            r,
            c,
            bound,
            max_value,
            source,
            chunk_size,
            total,
        }) => {
            if version != FORMAT_VERSION {
                return Err(corrupt(
                    path,
                    &format!("unsupported format version {version}"),
                ));
            }
            let max_value = max_value
                .map(|m| m.parse::<BigInt>())
                .transpose()
                .map_err(|_| corrupt(path, "bad max_value"))?;
            let source: ScanSource = source.parse().map_err(|_| corrupt(path, "bad source"))?;
            let params = ScanParams {
                r,
                c,
                bound,
                max_value,
                source,
                chunk_size,
            };
            if params.validate().is_err() || params.total_tuples().ok() != Some(total) {
                return Err(corrupt(path, "inconsistent header parameters"));
            }
            params
        }
        Ok(_) | Err(_) if rest.is_empty() && !complete_tail => {
            return Err(corrupt(path, "truncated header record"))
        }
        _ => return Err(corrupt(path, "first record is not a header")),
    };

    let chunk_count = params.chunk_count()?;
    let mut scan = SpectrumScan::empty(params);
    for (i, line) in rest.iter().enumerate() {
        let is_last = i + 1 == rest.len();
        let record = match serde_json::from_str::<Record>(line) {
            Ok(record) => record,
            Err(_) if is_last && !complete_tail => break,
            Err(e) => return Err(corrupt(path, &format!("line {}: {e}", i + 2))),
        };
        let Record::Batch {
            chunks,
            tuples,
            infinite,
            found,
        } = record
        else {
            return Err(corrupt(path, &format!("line {}: unexpected header", i + 2)));
        };
        for chunk in chunks {
            if chunk >= chunk_count || !scan.completed_chunks.insert(chunk) {
                return Err(corrupt(
                    path,
                    &format!("line {}: bad chunk index {chunk}", i + 2),
                ));
            }
        }
        scan.enumerated += tuples;
        scan.infinite += infinite;
        for f in found {
            let value: BigInt = f
                .value
                .parse()
                .map_err(|_| corrupt(path, &format!("line {}: bad value", i + 2)))?;
            let coeffs = f
                .coeffs
                .iter()
                .map(|c| c.parse::<BigInt>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| corrupt(path, &format!("line {}: bad coefficient", i + 2)))?;
            let poly = IntPolynomial::new(coeffs)
                .map_err(|_| corrupt(path, &format!("line {}: bad witness", i + 2)))?;
            merge_witness(
                &mut scan.values,
                value,
                Witness {
                    tuple: f.tuple,
                    poly,
                },
            );
        }
    }
    Ok(scan)
}

fn corrupt(path: &Path, reason: &str) -> Error {
    Error::CorruptCheckpoint {
        path: PathBuf::from(path),
        reason: reason.to_string(),
    }
}
