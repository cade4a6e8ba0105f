//! Bench CSV: one header row, then one row per record, columns in
//! [`TimingRecord`] field order.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use super::TimingRecord;
use crate::error::{Error, Result};

pub const HEADER: &str = "mode,blocks,layers,filter_width,dilation_base,channels,steps,repeats,\
                          mean_s_per_sample,std_s_per_sample,macs_per_step,node_evals_per_step";

pub fn write_records<W: Write>(records: &[TimingRecord], writer: W) -> Result<()> {
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    let mut csv = csv::Writer::from_writer(writer);
    for record in records {
        csv.serialize(record)?;
    }
    csv.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(reader: R) -> Result<Vec<TimingRecord>> {
    csv::Reader::from_reader(reader)
        .deserialize()
        .map(|row| row.map_err(Error::from))
        .collect()
}

/// Writes `records` to `path` as CSV.
pub fn emit_records(records: &[TimingRecord], path: impl AsRef<Path>) -> Result<()> {
    let mut buf = Vec::new();
    write_records(records, &mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}
