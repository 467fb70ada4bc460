//! CSV and JSON tables of sweep rows, each carrying a provenance header.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thermal_cluster_core::entanglement::EntanglementClass;

use crate::config::{ConfigError, SweepConfig};
use crate::sweep::SweepPoint;
use crate::{Error, Result, TOOL, VERSION};

pub const CSV_HEADER: &str =
    "p,t_over_delta,neg_Ap,err_Ap,neg_Bp,err_Bp,neg_Bs,err_Bs,class,avg_fidelity,fid_error,state_fidelity_vs_ideal";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = ConfigError;

    fn from_str(s: &str) -> std::result::Result<Self, ConfigError> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(ConfigError::new("format", format!("expected csv or json, got {s:?}"))),
        }
    }
}

impl Format {
    /// Guesses from a file extension; anything but `.json` is CSV.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub config_sha256: String,
    pub seed: u64,
}

impl Provenance {
    pub fn of(cfg: &SweepConfig) -> Self {
        Self {
            tool: TOOL.to_string(),
            version: VERSION.to_string(),
            config_sha256: cfg.hash(),
            seed: cfg.seed,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct JsonTable {
    provenance: Provenance,
    points: Vec<SweepPoint>,
}

pub fn render_csv(points: &[SweepPoint], prov: &Provenance) -> String {
    let mut out = String::new();
    writeln!(out, "# tool: {} {}", prov.tool, prov.version).unwrap();
    writeln!(out, "# config_sha256: {}", prov.config_sha256).unwrap();
    writeln!(out, "# seed: {}", prov.seed).unwrap();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for pt in points {
        // f64 Display is the shortest round-tripping form and prints inf as "inf".
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            pt.p,
            pt.t_over_delta,
            pt.neg_Ap,
            pt.err_Ap,
            pt.neg_Bp,
            pt.err_Bp,
            pt.neg_Bs,
            pt.err_Bs,
            pt.class.label(),
            pt.avg_fidelity,
            pt.fid_error,
            pt.state_fidelity_vs_ideal
        )
        .unwrap();
    }
    out
}

pub fn render_json(points: &[SweepPoint], prov: &Provenance) -> String {
    let table = JsonTable {
        provenance: prov.clone(),
        points: points.to_vec(),
    };
    let mut text = serde_json::to_string_pretty(&table).expect("sweep rows serialize");
    text.push('\n');
    text
}

pub fn render(points: &[SweepPoint], format: Format, prov: &Provenance) -> String {
    match format {
        Format::Csv => render_csv(points, prov),
        Format::Json => render_json(points, prov),
    }
}

/// Writes the table to `path`.
pub fn emit(points: &[SweepPoint], format: Format, path: &Path, prov: &Provenance) -> Result<()> {
    if points.is_empty() {
        return Err(ConfigError::new("points", "nothing to emit").into());
    }
    fs::write(path, render(points, format, prov)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses a table written by [`render_csv`]. Returns the provenance when
/// all of its header lines are present.
pub fn parse_csv(text: &str) -> std::result::Result<(Option<Provenance>, Vec<SweepPoint>), (usize, String)> {
    let mut tool = None;
    let mut hash = None;
    let mut seed = None;
    let mut points = Vec::new();
    let mut header_seen = false;
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once(':') {
                let value = value.trim();
                match key.trim() {
                    "tool" => tool = value.split_once(' ').map(|(t, v)| (t.to_string(), v.to_string())),
                    "config_sha256" => hash = Some(value.to_string()),
                    "seed" => seed = Some(value.parse::<u64>().map_err(|e| (lineno, format!("seed: {e}")))?),
                    _ => {}
                }
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        if !header_seen {
            if line != CSV_HEADER {
                return Err((lineno, format!("expected header {CSV_HEADER:?}")));
            }
            header_seen = true;
            continue;
        }
        points.push(parse_row(line).map_err(|m| (lineno, m))?);
    }
    if !header_seen {
        return Err((0, "missing header".into()));
    }
    let prov = match (tool, hash, seed) {
        (Some((tool, version)), Some(config_sha256), Some(seed)) => Some(Provenance {
            tool,
            version,
            config_sha256,
            seed,
        }),
        _ => None,
    };
    Ok((prov, points))
}

fn parse_row(line: &str) -> std::result::Result<SweepPoint, String> {
    let cells: Vec<&str> = line.split(',').collect();
    if cells.len() != 12 {
        return Err(format!("expected 12 columns, found {}", cells.len()));
    }
    let num = |k: usize| -> std::result::Result<f64, String> {
        cells[k]
            .parse::<f64>()
            .map_err(|_| format!("column {k}: not a number: {:?}", cells[k]))
    };
    Ok(SweepPoint {
        p: num(0)?,
        t_over_delta: num(1)?,
        neg_Ap: num(2)?,
        err_Ap: num(3)?,
        neg_Bp: num(4)?,
        err_Bp: num(5)?,
        neg_Bs: num(6)?,
        err_Bs: num(7)?,
        class: EntanglementClass::from_label(cells[8]).ok_or_else(|| format!("unknown class {:?}", cells[8]))?,
        avg_fidelity: num(9)?,
        fid_error: num(10)?,
        state_fidelity_vs_ideal: num(11)?,
    })
}

pub fn parse_json(text: &str) -> serde_json::Result<(Provenance, Vec<SweepPoint>)> {
    let table: JsonTable = serde_json::from_str(text)?;
    Ok((table.provenance, table.points))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<SweepPoint> {
        vec![
            SweepPoint {
                p: 0.0,
                t_over_delta: 0.0,
                neg_Ap: 0.5,
                err_Ap: 0.0,
                neg_Bp: 0.5,
                err_Bp: 0.0,
                neg_Bs: 0.5000000000000001,
                err_Bs: 0.0,
                class: EntanglementClass::Free,
                avg_fidelity: 1.0,
                fid_error: 0.0,
                state_fidelity_vs_ideal: 0.9999999999999998,
            },
            SweepPoint {
                p: 1.0,
                t_over_delta: f64::INFINITY,
                neg_Ap: 1e-17,
                err_Ap: 0.012,
                neg_Bp: 0.0,
                err_Bp: 0.013,
                neg_Bs: 0.1 + 0.2,
                err_Bs: 0.02,
                class: EntanglementClass::Bound,
                avg_fidelity: 0.5,
                fid_error: 0.003,
                state_fidelity_vs_ideal: 0.7,
            },
        ]
    }

    fn prov() -> Provenance {
        Provenance {
            tool: TOOL.into(),
            version: VERSION.into(),
            config_sha256: "ab".repeat(32),
            seed: 42,
        }
    }

    #[test]
    fn csv_layout() {
        let text = render_csv(&sample()[..1], &prov());
        let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(data.len(), 2);
        assert_eq!(data[0], CSV_HEADER);
        assert!(data[1].contains(",FREE,"));
        assert!(render_csv(&sample(), &prov()).contains(",inf,"));
    }

    #[test]
    fn csv_round_trip() {
        let (p, points) = parse_csv(&render_csv(&sample(), &prov())).unwrap();
        assert_eq!(p, Some(prov()));
        assert_eq!(points, sample());
    }

    #[test]
    fn json_round_trip_and_inf() {
        let text = render_json(&sample(), &prov());
        assert!(text.contains("\"t_over_delta\": \"inf\""));
        assert!(text.contains("\"class\": \"BOUND\""));
        let (p, points) = parse_json(&text).unwrap();
        assert_eq!(p, prov());
        assert_eq!(points, sample());
        for (a, b) in points.iter().zip(sample()) {
            assert_eq!(a.neg_Bs.to_bits(), b.neg_Bs.to_bits());
        }
    }

    #[test]
    fn bad_rows_are_reported_with_line_numbers() {
        let text = format!("{CSV_HEADER}\n0,0,0.5\n");
        assert_eq!(parse_csv(&text).unwrap_err().0, 2);
        assert!(parse_csv("p,t\n").is_err());
    }

    #[test]
    fn format_names() {
        assert_eq!("JSON".parse::<Format>().unwrap(), Format::Json);
        assert!("xml".parse::<Format>().is_err());
        assert_eq!(Format::from_path(Path::new("out.json")), Format::Json);
        assert_eq!(Format::from_path(Path::new("out.csv")), Format::Csv);
    }
}
