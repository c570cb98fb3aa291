use std::fs::{self, File};
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use serde::Serialize;

use super::{Criterion, ExperimentConfig, ExperimentOutput, ReportRow};
use crate::error::Result;

pub const CSV_HEADER: &str = "experiment,n,m,statistic,value,mc_se,replicas,seed";

pub fn write_rows<W: Write>(rows: &[ReportRow], w: W) -> Result<()> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    out.write_record(CSV_HEADER.split(','))?;
    for row in rows {
        out.serialize(row)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_rows<R: Read>(r: R) -> Result<Vec<ReportRow>> {
    let mut rd = csv::Reader::from_reader(r);
    rd.deserialize().map(|row| Ok(row?)).collect()
}

/// Contents of `summary.json`.
#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub experiment: String,
    pub config: ExperimentConfig,
    pub criteria: Vec<Criterion>,
    pub all_passed: bool,
    pub rows: usize,
    pub notes: Vec<String>,
    pub wall_clock_seconds: f64,
}

impl Summary {
    pub fn new(cfg: &ExperimentConfig, out: &ExperimentOutput, wall_clock_seconds: f64) -> Self {
        Self {
            experiment: cfg.experiment.clone(),
            config: cfg.clone(),
            criteria: out.criteria.clone(),
            all_passed: out.all_passed(),
            rows: out.rows.len(),
            notes: out.notes.clone(),
            wall_clock_seconds,
        }
    }
}

/// Writes `<experiment>.csv`, `summary.json` and any dumped paths under `dir`.
pub(super) fn write_outputs(dir: &Path, cfg: &ExperimentConfig, out: &ExperimentOutput, seconds: f64) -> Result<()> {
    fs::create_dir_all(dir)?;
    let csv_path = dir.join(format!("{}.csv", cfg.experiment));
    write_rows(&out.rows, BufWriter::new(File::create(csv_path)?))?;
    if !out.paths.is_empty() {
        let paths_dir = dir.join("paths");
        fs::create_dir_all(&paths_dir)?;
        for (stem, path) in &out.paths {
            path.write_csv(BufWriter::new(File::create(paths_dir.join(format!("{stem}.csv")))?))?;
        }
    }
    let mut f = BufWriter::new(File::create(dir.join("summary.json"))?);
    serde_json::to_writer_pretty(&mut f, &Summary::new(cfg, out, seconds))?;
    writeln!(f)?;
    f.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_round_trip_with_header() {
        let rows = vec![ReportRow {
            experiment: "e".into(),
            n: 10,
            m: -1,
            statistic: "exceed_prob[delta=0.1]".into(),
            value: 0.125,
            mc_se: 1e-3,
            replicas: 7,
            seed: 3,
        }];
        let mut buf = Vec::new();
        write_rows(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
        assert_eq!(read_rows(&buf[..]).unwrap(), rows);
    }
}
