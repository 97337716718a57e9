//! Labeled polyline sets and their JSON / CSV / SVG serializations.
//!
//! JSON is the canonical format; output is deterministic: curves are sorted
//! by role then label, metadata keys are ordered, and identical inputs
//! produce byte-identical files.

use std::collections::BTreeMap;
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Role of a curve inside a set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveRole {
    BoundaryEdge,
    MeshLine,
    LevelCurve,
}

impl CurveRole {
    pub fn as_str(&self) -> &'static str {
        match self {
            CurveRole::BoundaryEdge => "boundary-edge",
            CurveRole::MeshLine => "mesh-line",
            CurveRole::LevelCurve => "level-curve",
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Curve {
    pub label: String,
    pub role: CurveRole,
    pub points: Vec<[f64; 2]>,
}

/// Run configuration recorded into output metadata.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunConfig {
    pub ode_tol: f64,
    pub spps_tail_tol: f64,
    pub root_tol: f64,
    pub spps_order_cap: usize,
    pub grid_w: usize,
    pub grid_h: usize,
    pub samples_per_edge: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            ode_tol: 1e-10,
            spps_tail_tol: 1e-14,
            root_tol: 1e-9,
            spps_order_cap: 400,
            grid_w: 17,
            grid_h: 9,
            samples_per_edge: 120,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Meta {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub config: RunConfig,
}

/// A deterministic, labeled set of polylines with provenance metadata.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurveSet {
    pub meta: Meta,
    pub curves: Vec<Curve>,
}

impl CurveSet {
    pub fn new(command: &str, params: BTreeMap<String, String>, config: RunConfig) -> Self {
        CurveSet {
            meta: Meta {
                schema_version: 1,
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                command: command.to_string(),
                params,
                config,
            },
            curves: Vec::new(),
        }
    }

    pub fn push_complex(
        &mut self,
        label: impl Into<String>,
        role: CurveRole,
        points: &[Complex64],
    ) -> Result<()> {
        let label = label.into();
        let mut pts = Vec::with_capacity(points.len());
        for p in points {
            if !p.is_finite() {
                return Err(Error::InvalidInput {
                    detail: format!("non-finite point in curve '{label}'"),
                });
            }
            pts.push([p.re, p.im]);
        }
        self.curves.push(Curve {
            label,
            role,
            points: pts,
        });
        Ok(())
    }

    pub fn push_xy(
        &mut self,
        label: impl Into<String>,
        role: CurveRole,
        points: &[(f64, f64)],
    ) -> Result<()> {
        let label = label.into();
        for &(x, y) in points {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::InvalidInput {
                    detail: format!("non-finite point in curve '{label}'"),
                });
            }
        }
        self.curves.push(Curve {
            label,
            role,
            points: points.iter().map(|&(x, y)| [x, y]).collect(),
        });
        Ok(())
    }

    /// Deterministic ordering: by role, then label, point order untouched.
    pub fn finalize(&mut self) {
        self.curves
            .sort_by(|a, b| (a.role, &a.label).cmp(&(b.role, &b.label)));
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("curve set serializes") + "\n"
    }

    pub fn write_json(&self, w: &mut dyn Write) -> std::io::Result<()> {
        w.write_all(self.to_json().as_bytes())
    }

    /// One CSV file per curve: returns (file name suffix, contents) pairs.
    pub fn to_csv_files(&self) -> Vec<(String, String)> {
        let slug = |s: &str| -> String {
            s.chars()
                .map(|c| if c.is_alphanumeric() { c } else { '-' })
                .collect()
        };
        self.curves
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut body = String::from("x,y\n");
                for p in &c.points {
                    body.push_str(&format!("{},{}\n", p[0], p[1]));
                }
                (format!("{:03}.{}.csv", i, slug(&c.label)), body)
            })
            .collect()
    }

    /// Courtesy SVG rendering: polylines only, auto-fit viewBox.
    pub fn to_svg(&self) -> String {
        let mut min_x = f64::INFINITY;
        let mut max_x = f64::NEG_INFINITY;
        let mut min_y = f64::INFINITY;
        let mut max_y = f64::NEG_INFINITY;
        for c in &self.curves {
            for p in &c.points {
                min_x = min_x.min(p[0]);
                max_x = max_x.max(p[0]);
                min_y = min_y.min(p[1]);
                max_y = max_y.max(p[1]);
            }
        }
        if !min_x.is_finite() {
            min_x = 0.0;
            max_x = 1.0;
            min_y = 0.0;
            max_y = 1.0;
        }
        let w = (max_x - min_x).max(1e-9);
        let h = (max_y - min_y).max(1e-9);
        let margin = 0.05 * w.max(h);
        let stroke_width = 0.004 * w.max(h);
        let mut svg = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
            min_x - margin,
            -(max_y + margin),
            w + 2.0 * margin,
            h + 2.0 * margin
        );
        for c in &self.curves {
            let color = match c.role {
                CurveRole::BoundaryEdge => "#1a1a1a",
                CurveRole::MeshLine => "#4477aa",
                CurveRole::LevelCurve => "#aa3377",
            };
            let mut d = String::new();
            for (i, p) in c.points.iter().enumerate() {
                let cmd = if i == 0 { 'M' } else { 'L' };
                d.push_str(&format!("{}{} {} ", cmd, p[0], -p[1]));
            }
            svg.push_str(&format!(
                "  <path fill=\"none\" stroke=\"{color}\" stroke-width=\"{stroke_width}\" d=\"{}\"><title>{}</title></path>\n",
                d.trim_end(),
                c.label
            ));
        }
        svg.push_str("</svg>\n");
        svg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_set() -> CurveSet {
        let mut params = BTreeMap::new();
        params.insert("t".to_string(), "0.7853981633974483".to_string());
        let mut set = CurveSet::new("map-disk", params, RunConfig::default());
        set.push_xy("zz-last", CurveRole::MeshLine, &[(0.0, 0.0), (1.0, 2.0)])
            .unwrap();
        set.push_xy("aa-first", CurveRole::BoundaryEdge, &[(1.0, 1.0)])
            .unwrap();
        set.finalize();
        set
    }

    #[test]
    fn deterministic_ordering_and_bytes() {
        let a = sample_set().to_json();
        let b = sample_set().to_json();
        assert_eq!(a, b);
        let set = sample_set();
        assert_eq!(set.curves[0].label, "aa-first");
        assert_eq!(set.curves[0].role, CurveRole::BoundaryEdge);
    }

    #[test]
    fn json_schema_fields() {
        let set = sample_set();
        let v: serde_json::Value = serde_json::from_str(&set.to_json()).unwrap();
        assert_eq!(v["meta"]["schema_version"], 1);
        assert_eq!(v["curves"][0]["role"], "boundary-edge");
        assert!(v["curves"][0]["points"].as_array().unwrap()[0].is_array());
    }

    #[test]
    fn rejects_non_finite_points() {
        let mut set = sample_set();
        assert!(set
            .push_xy("bad", CurveRole::MeshLine, &[(f64::NAN, 0.0)])
            .is_err());
    }

    #[test]
    fn svg_and_csv_render() {
        let set = sample_set();
        let svg = set.to_svg();
        assert!(svg.contains("<svg") && svg.contains("viewBox"));
        let files = set.to_csv_files();
        assert_eq!(files.len(), 2);
        assert!(files[0].1.starts_with("x,y\n"));
    }
}
