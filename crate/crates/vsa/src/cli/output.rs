use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Result, VsaError};

/// Everything needed to re-run an experiment bit-identically, plus the list
/// of files it produced.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub experiment: String,
    pub config: BTreeMap<String, String>,
    pub seed: u64,
    pub version: String,
    pub started_unix: u64,
    pub finished_unix: u64,
    pub outputs: Vec<String>,
}

fn now_unix() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// Collects experiment outputs in one directory and writes the manifest
/// last, so a manifest on disk implies a complete run.
pub struct OutputDir {
    dir: PathBuf,
    experiment: String,
    seed: u64,
    config: BTreeMap<String, String>,
    started_unix: u64,
    outputs: Vec<String>,
}

impl OutputDir {
    pub fn create(
        dir: &Path,
        experiment: &str,
        seed: u64,
        config: BTreeMap<String, String>,
    ) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            experiment: experiment.to_string(),
            seed,
            config,
            started_unix: now_unix(),
            outputs: Vec::new(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn write_csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> Result<PathBuf> {
        let path = self.path(name);
        let mut writer = csv::Writer::from_path(&path)?;
        writer.write_record(header)?;
        for row in rows {
            if row.len() != header.len() {
                return Err(VsaError::InvalidParameter(format!(
                    "csv row width {} != header width {}",
                    row.len(),
                    header.len()
                )));
            }
            writer.write_record(row)?;
        }
        writer.flush()?;
        self.outputs.push(name.to_string());
        Ok(path)
    }

    /// Minimal multi-series line/scatter plot. The CSV is the source of
    /// truth; this is a visual aid with the config embedded as a comment.
    pub fn write_svg(
        &mut self,
        name: &str,
        title: &str,
        series: &[(String, Vec<(f64, f64)>)],
    ) -> Result<PathBuf> {
        const W: f64 = 640.0;
        const H: f64 = 420.0;
        const MARGIN: f64 = 50.0;
        const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

        let points: Vec<(f64, f64)> = series.iter().flat_map(|(_, pts)| pts.iter().copied()).collect();
        if points.is_empty() {
            return Err(VsaError::EmptyInput("nothing to plot".into()));
        }
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for &(x, y) in &points {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if x1 <= x0 {
            x1 = x0 + 1.0;
        }
        if y1 <= y0 {
            y1 = y0 + 1.0;
        }
        let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (W - 2.0 * MARGIN);
        let py = |y: f64| H - MARGIN - (y - y0) / (y1 - y0) * (H - 2.0 * MARGIN);

        let mut svg = String::new();
        svg.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
        ));
        svg.push_str(&format!(
            "<!-- experiment: {} seed: {} config: {:?} -->\n",
            self.experiment, self.seed, self.config
        ));
        svg.push_str(&format!(
            "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>\n<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{title}</text>\n",
            W / 2.0
        ));
        // Axes with end labels.
        svg.push_str(&format!(
            "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n<line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>\n",
            m = MARGIN,
            b = H - MARGIN,
            r = W - MARGIN,
            t = MARGIN
        ));
        for (txt, x, y, anchor) in [
            (format!("{x0:.3}"), MARGIN, H - MARGIN + 16.0, "middle"),
            (format!("{x1:.3}"), W - MARGIN, H - MARGIN + 16.0, "middle"),
            (format!("{y0:.3}"), MARGIN - 6.0, H - MARGIN, "end"),
            (format!("{y1:.3}"), MARGIN - 6.0, MARGIN, "end"),
        ] {
            svg.push_str(&format!(
                "<text x=\"{x}\" y=\"{y}\" text-anchor=\"{anchor}\" font-size=\"11\">{txt}</text>\n"
            ));
        }
        for (si, (label, pts)) in series.iter().enumerate() {
            let color = PALETTE[si % PALETTE.len()];
            let coords: Vec<String> =
                pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
            svg.push_str(&format!(
                "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
                coords.join(" ")
            ));
            for &(x, y) in pts {
                svg.push_str(&format!(
                    "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"{color}\"/>\n",
                    px(x),
                    py(y)
                ));
            }
            svg.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"{color}\">{label}</text>\n",
                W - MARGIN + 4.0 - 90.0,
                MARGIN + 14.0 * si as f64 + 10.0
            ));
        }
        svg.push_str("</svg>\n");
        let path = self.path(name);
        std::fs::write(&path, svg)?;
        self.outputs.push(name.to_string());
        Ok(path)
    }

    /// Write the manifest and return it.
    pub fn finish(mut self) -> Result<RunManifest> {
        let manifest = RunManifest {
            experiment: self.experiment.clone(),
            config: self.config.clone(),
            seed: self.seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix: self.started_unix,
            finished_unix: now_unix(),
            outputs: {
                self.outputs.push("manifest.json".to_string());
                self.outputs.clone()
            },
        };
        let path = self.dir.join("manifest.json");
        std::fs::write(&path, serde_json::to_string_pretty(&manifest)?)?;
        Ok(manifest)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_svg_and_manifest_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let mut out = OutputDir::create(dir.path(), "demo", 7, BTreeMap::new()).unwrap();
        out.write_csv("t.csv", &["x", "y"], &[vec!["1".into(), "2".into()]]).unwrap();
        out.write_svg("t.svg", "demo", &[("s".into(), vec![(0.0, 0.0), (1.0, 1.0)])]).unwrap();
        let manifest = out.finish().unwrap();
        assert_eq!(manifest.outputs, vec!["t.csv", "t.svg", "manifest.json"]);
        let text = std::fs::read_to_string(dir.path().join("manifest.json")).unwrap();
        let parsed: RunManifest = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed.experiment, "demo");
        assert_eq!(parsed.seed, 7);
        let svg = std::fs::read_to_string(dir.path().join("t.svg")).unwrap();
        assert!(svg.contains("polyline"));
    }

    #[test]
    fn mismatched_csv_rows_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let mut out = OutputDir::create(dir.path(), "demo", 7, BTreeMap::new()).unwrap();
        assert!(out.write_csv("t.csv", &["x", "y"], &[vec!["1".into()]]).is_err());
    }
}
