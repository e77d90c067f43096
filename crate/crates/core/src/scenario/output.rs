use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::geometry::Point;

/// Writes `contents` to `path` through a sibling temporary file and a rename,
/// so readers never observe a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "path has no file name"))?;
    let tmp: PathBuf = dir.join(format!(
        ".{}.{}.tmp",
        name.to_string_lossy(),
        std::process::id()
    ));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

/// Shortest decimal string that reads back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// CSV table with a mandatory header and `\n` line endings.
#[derive(Debug, Clone)]
pub struct Csv {
    text: String,
    columns: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self {
            text: header.join(",") + "\n",
            columns: header.len(),
        }
    }

    pub fn row(&mut self, values: &[f64]) {
        debug_assert_eq!(values.len(), self.columns);
        let cells: Vec<String> = values.iter().map(|v| fmt_f64(*v)).collect();
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

/// Pretty JSON with object keys in sorted order.
pub fn to_sorted_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    // `serde_json::Map` is ordered by key unless `preserve_order` is enabled
    let v = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

/// One outline in an SVG drawing.
#[derive(Debug, Clone)]
pub struct Outline {
    pub points: Vec<Point>,
    pub stroke: &'static str,
    pub dashed: bool,
    pub label: String,
}

/// Static SVG 1.1 drawing of closed outlines, with a view box fitted to the
/// bounding box of all of them.
pub fn render_svg(outlines: &[Outline]) -> String {
    let (mut x0, mut y0, mut x1, mut y1) = (
        f64::INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::NEG_INFINITY,
    );
    for p in outlines.iter().flat_map(|o| &o.points) {
        x0 = x0.min(p[0]);
        x1 = x1.max(p[0]);
        // SVG's y axis points down
        y0 = y0.min(-p[1]);
        y1 = y1.max(-p[1]);
    }
    if !x0.is_finite() {
        (x0, y0, x1, y1) = (-1.0, -1.0, 1.0, 1.0);
    }
    let pad = 0.05 * (x1 - x0).max(y1 - y0).max(1e-9);
    let (vx, vy, vw, vh) = (x0 - pad, y0 - pad, x1 - x0 + 2.0 * pad, y1 - y0 + 2.0 * pad);
    let stroke_width = 0.004 * vw.max(vh);
    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"600\" height=\"{:.0}\" viewBox=\"{vx:.6} {vy:.6} {vw:.6} {vh:.6}\">",
        600.0 * vh / vw
    );
    for o in outlines {
        let pts: Vec<String> = o
            .points
            .iter()
            .chain(o.points.first())
            .map(|p| format!("{:.6},{:.6}", p[0], -p[1]))
            .collect();
        let dash = if o.dashed {
            format!(" stroke-dasharray=\"{:.6}\"", 3.0 * stroke_width)
        } else {
            String::new()
        };
        let _ = writeln!(
            svg,
            "  <polyline fill=\"none\" stroke=\"{}\" stroke-width=\"{stroke_width:.6}\"{dash} points=\"{}\"><title>{}</title></polyline>",
            o.stroke,
            pts.join(" "),
            o.label
        );
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, -2.5e17, std::f64::consts::PI] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(0.5), "0.5");
    }

    #[test]
    fn csv_has_header_and_newlines() {
        let mut c = Csv::new(&["t", "r"]);
        c.row(&[0.0, 1.5]);
        assert_eq!(c.as_str(), "t,r\n0.0,1.5\n");
    }

    #[test]
    fn json_keys_are_sorted() {
        #[derive(Serialize)]
        struct S {
            zeta: u8,
            alpha: u8,
        }
        let s = to_sorted_json(&S { zeta: 1, alpha: 2 }).unwrap();
        assert!(s.find("alpha").unwrap() < s.find("zeta").unwrap());
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn svg_view_box_covers_outlines() {
        let svg = render_svg(&[Outline {
            points: vec![[0.0, 0.0], [2.0, 0.0], [2.0, 1.0]],
            stroke: "black",
            dashed: false,
            label: "t=0".into(),
        }]);
        assert!(svg.contains("viewBox=\"-0.100000 -1.100000 2.200000 1.200000\""));
        assert!(svg.contains("version=\"1.1\""));
    }
}
