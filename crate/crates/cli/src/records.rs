//! Plain-text count tables: `# flux:` and `# seed:` header lines, then
//! `setting_label,count` rows.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use thermal_cluster_core::tomography::{CountRecord, ProjectorSetting};

use crate::{Error, Result};

pub const HEADER: &str = "setting_label,count";

pub fn render(rec: &CountRecord) -> String {
    let mut out = String::new();
    writeln!(out, "# flux: {}", rec.flux()).unwrap();
    writeln!(out, "# seed: {}", rec.seed()).unwrap();
    out.push_str(HEADER);
    out.push('\n');
    for (s, n) in rec.settings().iter().zip(rec.counts()) {
        writeln!(out, "{s},{n}").unwrap();
    }
    out
}

/// Parses a table; failures carry a 1-based line number (0 for the table
/// as a whole).
pub fn parse(text: &str) -> std::result::Result<CountRecord, (usize, String)> {
    let mut flux = None;
    let mut seed = None;
    let mut header_seen = false;
    let mut settings = Vec::new();
    let mut counts = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once(':') {
                let value = value.trim();
                match key.trim() {
                    "flux" => flux = Some(value.parse::<f64>().map_err(|e| (lineno, format!("flux: {e}")))?),
                    "seed" => seed = Some(value.parse::<u64>().map_err(|e| (lineno, format!("seed: {e}")))?),
                    _ => {}
                }
            }
            continue;
        }
        if !header_seen {
            if line != HEADER {
                return Err((lineno, format!("expected header {HEADER:?}")));
            }
            header_seen = true;
            continue;
        }
        let (label, count) = line
            .split_once(',')
            .ok_or_else(|| (lineno, "expected `setting_label,count`".to_string()))?;
        let setting: ProjectorSetting = label.trim().parse().map_err(|e| (lineno, format!("{e}")))?;
        let count: u64 = count
            .trim()
            .parse()
            .map_err(|_| (lineno, format!("count {:?} is not a non-negative integer", count.trim())))?;
        settings.push(setting);
        counts.push(count);
    }
    if !header_seen {
        return Err((0, format!("missing header {HEADER:?}")));
    }
    let flux = flux.ok_or((0, "missing `# flux:` line".to_string()))?;
    let seed = seed.ok_or((0, "missing `# seed:` line".to_string()))?;
    CountRecord::new(settings, counts, flux, seed).map_err(|e| (0, e.to_string()))
}

pub fn write(rec: &CountRecord, path: &Path) -> Result<()> {
    fs::write(path, render(rec)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read(path: &Path) -> Result<CountRecord> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse(&text).map_err(|(line, message)| Error::Format {
        path: path.to_path_buf(),
        line,
        message,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use thermal_cluster_core::tomography::{simulate_counts, standard_settings};
    use thermal_cluster_core::DensityMatrix;

    #[test]
    fn round_trip() {
        let rho = DensityMatrix::maximally_mixed(3);
        let rec = simulate_counts(&rho, &standard_settings(3), 123.5, 9).unwrap();
        let text = render(&rec);
        assert!(text.starts_with("# flux: 123.5\n# seed: 9\nsetting_label,count\nz0z0z0,"));
        assert_eq!(parse(&text).unwrap(), rec);
    }

    #[test]
    fn malformed_tables() {
        let ok = "# flux: 10\n# seed: 1\nsetting_label,count\nz0,3\nz1,4\nx+,1\ny+,0\n";
        assert!(parse(ok).is_ok());
        assert_eq!(parse(&ok.replace("x+,1", "x+,-1")).unwrap_err().0, 6);
        assert_eq!(parse(&ok.replace("y+,0", "q+,0")).unwrap_err().0, 7);
        assert_eq!(parse(&ok.replace("# flux: 10\n", "")).unwrap_err().0, 0);
        assert!(parse(&ok.replace("setting_label,count\n", "")).is_err());
        assert!(parse(&ok.replace("z1,4\n", "z1z0,4\n")).is_err());
    }
}
