//! CSV tables, SVG line charts, and atomic file writes.

use std::io::Write;
use std::path::{Path, PathBuf};

use tempfile::NamedTempFile;

use super::config::fmt_num;
use crate::error::{Error, Result};

/// A CSV table with a fixed header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Vec<f64> {
        let Some(j) = self.header.iter().position(|h| *h == name) else {
            return Vec::new();
        };
        self.rows
            .iter()
            .filter_map(|r| match &r[j] {
                Cell::Num(v) => Some(*v),
                Cell::Text(_) => None,
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(v) => fmt_num(*v),
                    Cell::Text(s) => s.clone(),
                })
                .collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// File-name stem of a datum id: `step:0,1` becomes `step_0_1`.
pub fn sanitize(id: &str) -> String {
    id.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '.' || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut tmp = NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(contents).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

fn axis_map(vals: impl Iterator<Item = f64>, log: bool) -> Option<(f64, f64)> {
    let (lo, hi) = vals
        .map(|v| if log { v.log10() } else { v })
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            (a.min(v), b.max(v))
        });
    if !lo.is_finite() {
        return None;
    }
    if hi - lo < 1e-12 {
        Some((lo - 0.5, hi + 0.5))
    } else {
        Some((lo, hi))
    }
}

/// A minimal SVG line chart. Log axes are used only when requested and every
/// value on that axis is positive; otherwise the axis falls back to linear.
pub fn line_chart(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[Series],
    log_x: bool,
    log_y: bool,
) -> String {
    let all = || series.iter().flat_map(|s| s.points.iter().copied());
    let log_x = log_x && all().all(|p| p.0 > 0.0);
    let log_y = log_y && all().all(|p| p.1 > 0.0);
    let xr = axis_map(all().map(|p| p.0), log_x).unwrap_or((0.0, 1.0));
    let yr = axis_map(all().map(|p| p.1), log_y).unwrap_or((0.0, 1.0));
    let px = |x: f64| {
        let v = if log_x { x.log10() } else { x };
        MARGIN + (v - xr.0) / (xr.1 - xr.0) * (WIDTH - 2.0 * MARGIN)
    };
    let py = |y: f64| {
        let v = if log_y { y.log10() } else { y };
        HEIGHT - MARGIN - (v - yr.0) / (yr.1 - yr.0) * (HEIGHT - 2.0 * MARGIN)
    };
    let tick = |v: f64, log: bool| {
        if log {
            format!("1e{v:.1}")
        } else {
            format!("{v:.4}")
        }
    };

    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    ));
    s.push_str(&format!(
        "<text x=\"{}\" y=\"20\" text-anchor=\"middle\">{}</text>\n",
        WIDTH / 2.0,
        escape(title)
    ));
    s.push_str(&format!(
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n<line x1=\"{m}\" y1=\"{m}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>\n",
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    ));
    s.push_str(&format!(
        "<text x=\"{m}\" y=\"{y}\">{}</text>\n<text x=\"{r}\" y=\"{y}\" text-anchor=\"end\">{}</text>\n",
        tick(xr.0, log_x),
        tick(xr.1, log_x),
        m = MARGIN,
        r = WIDTH - MARGIN,
        y = HEIGHT - MARGIN + 16.0
    ));
    s.push_str(&format!(
        "<text x=\"{x}\" y=\"{b}\" text-anchor=\"end\">{}</text>\n<text x=\"{x}\" y=\"{t}\" text-anchor=\"end\">{}</text>\n",
        tick(yr.0, log_y),
        tick(yr.1, log_y),
        x = MARGIN - 4.0,
        b = HEIGHT - MARGIN,
        t = MARGIN + 4.0
    ));
    s.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}{}</text>\n",
        WIDTH / 2.0,
        HEIGHT - 20.0,
        escape(x_label),
        if log_x { " (log)" } else { "" }
    ));
    s.push_str(&format!(
        "<text x=\"16\" y=\"{}\" transform=\"rotate(-90 16 {})\" text-anchor=\"middle\">{}{}</text>\n",
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(y_label),
        if log_y { " (log)" } else { "" }
    ));
    for (k, ser) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let pts: Vec<String> = ser
            .points
            .iter()
            .filter(|p| p.0.is_finite() && p.1.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        s.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            pts.join(" ")
        ));
        s.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" fill=\"{color}\">{}</text>\n",
            WIDTH - MARGIN + 4.0,
            MARGIN + 14.0 * k as f64,
            escape(&ser.name)
        ));
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// `<out_dir>/<kind>_<datum><suffix>`.
pub fn output_path(out_dir: &Path, kind: &str, datum: &str, suffix: &str) -> PathBuf {
    out_dir.join(format!("{kind}_{}{suffix}", sanitize(datum)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["t", "gap"]);
        t.push(vec![1.0.into(), 1e-5.into()]);
        t.push(vec![100.0.into(), 0.25.into()]);
        assert_eq!(t.to_csv(), "t,gap\n1,1e-5\n100,0.25\n");
        assert_eq!(t.column("gap"), vec![1e-5, 0.25]);
    }

    #[test]
    fn names_are_file_safe() {
        assert_eq!(sanitize("step:0,1"), "step_0_1");
        assert_eq!(sanitize("sub_log:0.5"), "sub_log_0.5");
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a/b.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(std::fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }

    #[test]
    fn chart_is_well_formed() {
        let svg = line_chart(
            "t",
            "x",
            "y",
            &[Series {
                name: "a<b".into(),
                points: vec![(1.0, 1.0), (10.0, 0.1)],
            }],
            true,
            true,
        );
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert!(svg.contains("a&lt;b"));
        assert!(svg.contains("<polyline"));
    }
}
