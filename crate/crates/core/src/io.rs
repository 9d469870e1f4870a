//! Config parsing and CSV/JSON emission of time series.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::record::TimeSeriesRecord;
use crate::scenario::ScenarioConfig;

pub const CSV_HEADER: &str = "t_over_T,E_f,E_av,E_h,S_rho,I_SE";

const CSV_DECIMALS: usize = 12;

/// Output format selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Parses and validates a JSON scenario document. Errors carry the path of
/// the offending key.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: ScenarioConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let key = if path == "." {
            "config".to_string()
        } else {
            path
        };
        Error::validation(key, e.into_inner().to_string())
    })?;
    cfg.validate()?;
    Ok(cfg)
}

fn fixed(x: f64) -> String {
    let s = format!("{x:.CSV_DECIMALS$}");
    // never print a negative zero
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

fn require_records(records: &[TimeSeriesRecord]) -> Result<()> {
    if records.is_empty() {
        return Err(Error::validation("records", "nothing to write"));
    }
    if let Some(r) = records.iter().find(|r| {
        ![r.t_over_T, r.E_f, r.E_av, r.E_h, r.S_rho, r.I_SE]
            .iter()
            .all(|x| x.is_finite())
    }) {
        return Err(Error::Numerical(format!(
            "non-finite value in record at t/T = {}",
            r.t_over_T
        )));
    }
    Ok(())
}

/// CSV text: fixed header, one row per record, 12 decimals, LF endings.
pub fn render_csv(records: &[TimeSeriesRecord]) -> Result<String> {
    require_records(records)?;
    let mut out = String::with_capacity(records.len() * 96);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let fields = [r.t_over_T, r.E_f, r.E_av, r.E_h, r.S_rho, r.I_SE].map(fixed);
        writeln!(out, "{}", fields.join(",")).expect("writing to a String");
    }
    Ok(out)
}

/// JSON array of objects keyed like the CSV header.
pub fn render_json(records: &[TimeSeriesRecord]) -> Result<String> {
    require_records(records)?;
    let mut s = serde_json::to_string_pretty(records)
        .map_err(|e| Error::Numerical(format!("serializing records: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn render(records: &[TimeSeriesRecord], format: Format) -> Result<String> {
    match format {
        Format::Csv => render_csv(records),
        Format::Json => render_json(records),
    }
}

/// Writes CSV to `path`. Nothing is created when `records` is empty.
pub fn write_csv(records: &[TimeSeriesRecord], path: &Path) -> Result<()> {
    fs::write(path, render_csv(records)?)?;
    Ok(())
}

/// Writes JSON to `path`. Nothing is created when `records` is empty.
pub fn write_json(records: &[TimeSeriesRecord], path: &Path) -> Result<()> {
    fs::write(path, render_json(records)?)?;
    Ok(())
}

pub fn parse_records_json(text: &str) -> Result<Vec<TimeSeriesRecord>> {
    serde_json::from_str(text).map_err(|e| Error::validation("records", e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{run_scenario, scenario_fig1, scenario_fig2};

    const FIG1_DOC: &str = r#"{"initial_state":{"type":"bell","which":"phi_plus"},"branches":[{"p":0.5,"qubit":"A","axis":"x"},{"p":0.5,"qubit":"A","axis":"z"}]}"#;

    fn key_of(text: &str) -> String {
        match parse_config(text).unwrap_err() {
            Error::Validation { key, .. } => key,
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn fig1_document_uses_defaults() {
        assert_eq!(parse_config(FIG1_DOC).unwrap(), scenario_fig1());
    }

    #[test]
    fn eta_document() {
        let doc = r#"{"initial_state":{"type":"eta_mixture","eta":0.5},
            "branches":[{"p":0.5,"qubit":"A","axis":"x"},{"p":0.5,"qubit":"A","axis":"z"}]}"#;
        assert_eq!(parse_config(doc).unwrap(), scenario_fig2(0.5).unwrap());
    }

    #[test]
    fn probability_sum_names_branches() {
        let doc = r#"{"initial_state":{"type":"bell","which":"phi_plus"},
            "branches":[{"p":0.5,"axis":"x"},{"p":0.4,"axis":"z"}]}"#;
        assert_eq!(key_of(doc), "branches");
    }

    #[test]
    fn syntax_and_schema_errors() {
        assert!(matches!(parse_config("{"), Err(Error::Validation { .. })));
        let unknown = r#"{"omega":1.0,"colour":"red","initial_state":{"type":"bell","which":"phi_plus"},"branches":[{"p":1,"axis":"x"}]}"#;
        let err = parse_config(unknown).unwrap_err().to_string();
        assert!(err.contains("colour"), "{err}");
        let bad_axis = r#"{"initial_state":{"type":"bell","which":"phi_plus"},"branches":[{"p":1,"axis":"w"}]}"#;
        assert_eq!(key_of(bad_axis), "branches[0].axis");
        let bad_eta =
            r#"{"initial_state":{"type":"eta_mixture","eta":1.5},"branches":[{"p":1,"axis":"x"}]}"#;
        assert_eq!(key_of(bad_eta), "initial_state.eta");
        let few = r#"{"points":2,"initial_state":{"type":"bell","which":"phi_plus"},"branches":[{"p":1,"axis":"x"}]}"#;
        assert_eq!(key_of(few), "points");
        let missing = r#"{"initial_state":{"type":"bell","which":"phi_plus"}}"#;
        assert!(parse_config(missing)
            .unwrap_err()
            .to_string()
            .contains("branches"));
    }

    #[test]
    fn explicit_matrices() {
        let doc = r#"{"initial_state":{"type":"explicit","matrix":[[0.5,0,0,0.5],[0,0,0,0],[0,0,0,0],[0.5,0,0,0.5]]},
            "branches":[{"p":0.5,"axis":"x"},{"p":0.5,"unitary":[[[0,0],[0,-1]],[[0,1],[0,0]]]}]}"#;
        let cfg = parse_config(doc).unwrap();
        assert_eq!(cfg.branches.len(), 2);
        let non_unitary = r#"{"initial_state":{"type":"bell","which":"phi_plus"},
            "branches":[{"p":1,"unitary":[[1,1],[0,1]]}]}"#;
        assert_eq!(key_of(non_unitary), "branches[0].unitary");
    }

    #[test]
    fn first_csv_row() {
        let recs = run_scenario(&scenario_fig1().with_points(5)).unwrap();
        let csv = render_csv(&recs).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        assert_eq!(
            lines.next().unwrap(),
            "0.000000000000,1.000000000000,1.000000000000,0.000000000000,0.000000000000,0.000000000000"
        );
        assert_eq!(csv.lines().count(), 6);
        assert!(!csv.contains('\r'));
        assert!(csv.ends_with('\n'));
        assert!(csv.lines().all(|l| !l.ends_with(',')));
    }

    #[test]
    fn negative_zero_is_printed_as_zero() {
        assert_eq!(fixed(-1e-16), "0.000000000000");
        assert_eq!(fixed(-0.5), "-0.500000000000");
    }

    #[test]
    fn empty_records_create_no_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        assert!(write_csv(&[], &path).is_err());
        assert!(!path.exists());
        let path = dir.path().join("out.json");
        assert!(write_json(&[], &path).is_err());
        assert!(!path.exists());
    }

    #[test]
    fn unwritable_destination() {
        let recs = run_scenario(&scenario_fig1().with_points(3)).unwrap();
        let err = write_csv(&recs, Path::new("/nonexistent-dir/out.csv")).unwrap_err();
        assert!(matches!(err, Error::Io(_)));
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn json_round_trip() {
        let recs = run_scenario(&scenario_fig2(0.5).unwrap().with_points(11)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.json");
        write_json(&recs, &path).unwrap();
        let back = parse_records_json(&fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(back.len(), recs.len());
        for (a, b) in recs.iter().zip(&back) {
            assert!((a.E_f - b.E_f).abs() < 1e-12);
            assert!((a.I_SE - b.I_SE).abs() < 1e-12);
            assert!((a.t_over_T - b.t_over_T).abs() < 1e-12);
        }
        let keys: Vec<String> = serde_json::from_str::<
            Vec<serde_json::Map<String, serde_json::Value>>,
        >(&render_json(&recs).unwrap())
        .unwrap()[0]
            .keys()
            .cloned()
            .collect();
        let mut expected: Vec<String> = CSV_HEADER.split(',').map(String::from).collect();
        expected.sort();
        let mut keys = keys;
        keys.sort();
        assert_eq!(keys, expected);
    }
}
