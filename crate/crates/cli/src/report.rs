//! Report emission: flat CSV tables with a JSON sidecar carrying the
//! run configuration, or a single self-describing JSON document.
//!
//! The sidecar deliberately omits anything that cannot change the results
//! (worker count, partition seed), so identical configurations produce
//! byte-identical files no matter how the work was scheduled.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;

use polyatlas_core::cgsearch::PolytopeRecord;
use polyatlas_core::engine::FiniteGroup;

/// One output row of an enumeration report.
#[derive(Debug, Serialize)]
pub struct EnumRow {
    pub group: String,
    pub q: u64,
    pub rank: u32,
    pub schlafli: String,
    pub self_dual: bool,
    pub degenerate: bool,
    pub orbit_size: u64,
    /// Generators as point-image lists: `[i0 i1 ...]` per generator,
    /// joined with `;`.
    pub generators: String,
}

pub fn enum_row(
    group: &str,
    q: u64,
    rank: u32,
    g: &FiniteGroup,
    record: &PolytopeRecord,
) -> EnumRow {
    let generators = record
        .tuple
        .ids()
        .iter()
        .map(|&id| {
            let images: Vec<String> = g.perm(id).images().iter().map(|x| x.to_string()).collect();
            format!("[{}]", images.join(" "))
        })
        .collect::<Vec<_>>()
        .join(";");
    EnumRow {
        group: group.to_string(),
        q,
        rank,
        schlafli: record.schlafli.to_string(),
        self_dual: record.self_dual,
        degenerate: record.degenerate,
        orbit_size: record.orbit_size,
        generators,
    }
}

/// One output row of a census report.
#[derive(Debug, Serialize)]
pub struct CensusCsvRow {
    pub group: String,
    pub q: u64,
    pub family: String,
    pub scope: &'static str,
    pub rule: String,
    pub predicted: String,
    pub observed: u64,
    pub predicted_classes: String,
    pub observed_classes: u64,
    pub matched: String,
    pub note: String,
}

/// Result-relevant configuration recorded next to each CSV report.
#[derive(Debug, Serialize)]
pub struct RunMeta {
    pub command: String,
    pub group: Option<String>,
    pub q: Option<u64>,
    pub rank: Option<u32>,
    pub dedup: Option<String>,
    pub closure_cap: Option<u64>,
    pub census_cap: Option<u64>,
    pub characteristic_two: bool,
    pub counts: serde_json::Value,
    pub version: String,
}

impl RunMeta {
    pub fn new(command: &str) -> RunMeta {
        RunMeta {
            command: command.to_string(),
            group: None,
            q: None,
            rank: None,
            dedup: None,
            closure_cap: None,
            census_cap: None,
            characteristic_two: false,
            counts: serde_json::Value::Null,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".meta.json");
    out.with_file_name(name)
}

/// Writes rows as CSV to `out` (or stdout) plus the JSON sidecar.
pub fn write_csv<T: Serialize>(
    out: Option<&Path>,
    rows: &[T],
    meta: &RunMeta,
) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            let file =
                File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_csv_to(BufWriter::new(file), rows)?;
            let side = File::create(sidecar_path(path))?;
            let mut side = BufWriter::new(side);
            serde_json::to_writer_pretty(&mut side, meta)?;
            side.write_all(b"\n")?;
        }
        None => {
            let stdout = std::io::stdout();
            write_csv_to(stdout.lock(), rows)?;
        }
    }
    Ok(())
}

fn write_csv_to<W: Write, T: Serialize>(w: W, rows: &[T]) -> anyhow::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for row in rows {
        wtr.serialize(row)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Writes a single JSON document with the configuration and the rows.
pub fn write_json<T: Serialize>(
    out: Option<&Path>,
    rows: &[T],
    meta: &RunMeta,
) -> anyhow::Result<()> {
    #[derive(Serialize)]
    struct Document<'a, T> {
        config: &'a RunMeta,
        rows: &'a [T],
    }
    let doc = Document { config: meta, rows };
    match out {
        Some(path) => {
            let file =
                File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            serde_json::to_writer_pretty(&mut w, &doc)?;
            w.write_all(b"\n")?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            serde_json::to_writer_pretty(&mut w, &doc)?;
            w.write_all(b"\n")?;
        }
    }
    Ok(())
}
