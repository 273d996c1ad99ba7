//! CSV and JSON emission.
//!
//! Every file starts with a header naming the tool version and echoing the
//! full configuration. Floats in CSV are written with 17 significant digits
//! so they round-trip exactly; JSON uses the shortest round-trip form.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::bifurcation::Branch;
use crate::evolution::FlowTrajectory;
use crate::stability::SpectrumReport;
use crate::torus::{grid_points, ProfileFunction};
use crate::{Result, VERSION};

/// Tool version plus the configuration that produced a file.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Header {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: BTreeMap<String, String>,
}

impl Header {
    pub fn new(command: &str, config: BTreeMap<String, String>) -> Self {
        Self {
            tool: "amcf".into(),
            version: VERSION.into(),
            command: command.into(),
            config,
        }
    }

    /// `# amcf <version> <command> key=value ...`
    pub fn comment_line(&self) -> String {
        let mut line = format!("# {} {} {}", self.tool, self.version, self.command);
        for (k, v) in &self.config {
            let _ = write!(line, " {k}={v}");
        }
        line
    }
}

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Renders a CSV document: header comment, column names, one line per row.
pub fn csv_string(header: &Header, columns: &[String], rows: &[Vec<f64>]) -> String {
    let mut out = header.comment_line();
    out.push('\n');
    out.push_str(&columns.join(","));
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn write_csv(path: &Path, header: &Header, columns: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    let cols: Vec<String> = columns.iter().map(|s| s.to_string()).collect();
    fs::write(path, csv_string(header, &cols, rows))?;
    Ok(())
}

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    header: &'a Header,
    report: &'a T,
}

pub fn json_string<T: Serialize>(header: &Header, report: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&Document { header, report })?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, header: &Header, report: &T) -> Result<()> {
    fs::write(path, json_string(header, report)?)?;
    Ok(())
}

pub fn trajectory_rows(traj: &FlowTrajectory) -> Vec<Vec<f64>> {
    traj.diagnostics
        .iter()
        .map(|d| vec![d.t, d.min_r, d.volume, d.area, d.h_avg, d.g_inf])
        .collect()
}

pub fn write_trajectory(path: &Path, header: &Header, traj: &FlowTrajectory) -> Result<()> {
    write_csv(path, header, &["t", "min_r", "volume", "area", "h_avg", "g_inf"], &trajectory_rows(traj))
}

pub fn profile_rows(r: &ProfileFunction) -> Vec<Vec<f64>> {
    grid_points(r.n()).into_iter().zip(r.values()).map(|(x, &v)| vec![x, v]).collect()
}

/// Samples `x,r` of a profile.
pub fn write_profile(path: &Path, header: &Header, r: &ProfileFunction) -> Result<()> {
    write_csv(path, header, &["x", "r"], &profile_rows(r))
}

/// Long-format `B,x,r` table of an undulary family.
pub fn write_family(path: &Path, header: &Header, family: &[(f64, ProfileFunction)]) -> Result<()> {
    let rows: Vec<Vec<f64>> = family
        .iter()
        .flat_map(|(b, r)| profile_rows(r).into_iter().map(move |row| vec![*b, row[0], row[1]]))
        .collect();
    write_csv(path, header, &["B", "x", "r"], &rows)
}

/// `r_star,k,eigenvalue` rows from closed-form spectra.
pub fn spectrum_table_rows(reports: &[(f64, SpectrumReport)]) -> Vec<Vec<f64>> {
    let mut rows = Vec::new();
    for (rs, rep) in reports {
        let labels = rep.mode_labels.clone().unwrap_or_default();
        for (i, z) in rep.eigenvalues.iter().enumerate() {
            let k = labels.get(i).map(|&k| k as f64).unwrap_or(f64::NAN);
            rows.push(vec![*rs, k, z.re]);
        }
    }
    rows
}

pub fn branch_rows(branch: &Branch) -> Vec<Vec<f64>> {
    branch
        .points
        .iter()
        .map(|p| {
            let mut row = vec![p.s, p.state.lambda, p.leading_eigenvalue.re, p.leading_eigenvalue.im];
            row.extend_from_slice(&p.state.cos_coeffs);
            row
        })
        .collect()
}

pub fn write_branch(path: &Path, header: &Header, branch: &Branch) -> Result<()> {
    let m = branch.points.first().map(|p| p.state.m()).unwrap_or(0);
    let mut cols: Vec<String> = ["s", "lambda", "leading_eig_re", "leading_eig_im"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    cols.extend((1..=m).map(|k| format!("a_{k}")));
    fs::write(path, csv_string(header, &cols, &branch_rows(branch)))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header() -> Header {
        let mut cfg = BTreeMap::new();
        cfg.insert("n".to_string(), "64".to_string());
        cfg.insert("dt".to_string(), "0.001".to_string());
        Header::new("simulate", cfg)
    }

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, std::f64::consts::PI, 1e300] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn header_echoes_config_sorted() {
        assert_eq!(header().comment_line(), format!("# amcf {VERSION} simulate dt=0.001 n=64"));
    }

    #[test]
    fn csv_layout() {
        let s = csv_string(&header(), &["a".into(), "b".into()], &[vec![1.0, 2.0]]);
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("# amcf"));
        assert_eq!(lines[1], "a,b");
        assert_eq!(lines[2], "1.0000000000000000e0,2.0000000000000000e0");
        assert!(s.ends_with('\n') && !s.contains('\r'));
    }

    #[test]
    fn json_has_header() {
        let s = json_string(&header(), &vec![1.5, 2.0]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["header"]["version"], VERSION);
        assert_eq!(v["header"]["config"]["n"], "64");
        assert_eq!(v["report"][0], 1.5);
    }

    #[test]
    fn files_are_written() {
        let dir = tempfile::tempdir().unwrap();
        let r = ProfileFunction::constant(8, 1.0).unwrap();
        let p = dir.path().join("r.csv");
        write_profile(&p, &header(), &r).unwrap();
        let text = fs::read_to_string(&p).unwrap();
        assert_eq!(text.lines().count(), 10);
    }
}
