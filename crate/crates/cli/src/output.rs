use std::fs::File;
use std::io::{self, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};

use crate::Usage;

/// Writes a CSV table with a header row. Unless `deterministic`, a
/// `# generated <unix seconds>` line comes first.
pub fn write_csv(
    path: &Path,
    deterministic: bool,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut sink = io::BufWriter::new(file);
    if !deterministic {
        let secs = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        writeln!(sink, "# generated {secs}")?;
    }
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Shortest round-trip decimal form.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

/// Reads points, one per row with `d` columns. `#` lines are skipped, and a
/// first row that does not parse as numbers is taken as a header.
pub fn read_points(path: &Path, d: usize) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let mut points = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let parsed: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(p) if p.len() == d => points.push(p),
            Ok(p) => {
                return Err(Usage(format!(
                    "row {} has {} columns, expected {d}",
                    i + 1,
                    p.len()
                ))
                .into())
            }
            Err(_) if i == 0 => continue,
            Err(e) => return Err(Usage(format!("row {}: {e}", i + 1)).into()),
        }
    }
    Ok(points)
}
