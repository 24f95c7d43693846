//! Built-in rectifiable test curves and a plain-text point file reader.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use super::AnalysisError;

#[derive(Clone, Debug, PartialEq)]
pub enum CurveSpec {
    /// Unit circle in the plane `z = 0`.
    Circle,
    /// Boundary of `[0,1]²` in the plane `z = 0`.
    Square,
    /// One turn of radius 1 rising by 1.
    Helix,
    /// `(0,1,0) → (0,0,0) → (1,0,0)`.
    LPolyline,
    /// Whitespace- or comma-separated `x y z` rows; `#` starts a comment.
    File(PathBuf),
}

impl FromStr for CurveSpec {
    type Err = AnalysisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "circle" => Ok(CurveSpec::Circle),
            "square" => Ok(CurveSpec::Square),
            "helix" => Ok(CurveSpec::Helix),
            "l-polyline" | "l" => Ok(CurveSpec::LPolyline),
            _ => match s.strip_prefix("file:") {
                Some(p) if !p.is_empty() => Ok(CurveSpec::File(PathBuf::from(p))),
                _ => Err(AnalysisError::UnknownCurve(s.to_string())),
            },
        }
    }
}

impl fmt::Display for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveSpec::Circle => f.write_str("circle"),
            CurveSpec::Square => f.write_str("square"),
            CurveSpec::Helix => f.write_str("helix"),
            CurveSpec::LPolyline => f.write_str("l-polyline"),
            CurveSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

/// A sampled curve. For closed curves the first point is not repeated.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledCurve {
    pub points: Vec<[f64; 3]>,
    pub closed: bool,
}

fn along(pts: &[[f64; 3]], closed: bool, n: usize) -> Vec<[f64; 3]> {
    let mut verts = pts.to_vec();
    if closed {
        verts.push(pts[0]);
    }
    let seg: Vec<f64> = verts
        .windows(2)
        .map(|w| ((w[1][0] - w[0][0]).powi(2) + (w[1][1] - w[0][1]).powi(2) + (w[1][2] - w[0][2]).powi(2)).sqrt())
        .collect();
    let total: f64 = seg.iter().sum();
    let steps = if closed { n } else { n.saturating_sub(1).max(1) };
    let mut out = Vec::with_capacity(n);
    let mut i = 0;
    let mut base = 0.0;
    for k in 0..n {
        let s = total * k as f64 / steps as f64;
        while i + 1 < seg.len() && base + seg[i] < s {
            base += seg[i];
            i += 1;
        }
        let u = if seg[i] > 0.0 { ((s - base) / seg[i]).clamp(0.0, 1.0) } else { 0.0 };
        out.push([0, 1, 2].map(|c| verts[i][c] + u * (verts[i + 1][c] - verts[i][c])));
    }
    out
}

impl CurveSpec {
    /// `n` points spaced evenly by arc length. File curves return their
    /// rows unchanged.
    pub fn sample(&self, n: usize) -> Result<SampledCurve, AnalysisError> {
        if n < 2 && !matches!(self, CurveSpec::File(_)) {
            return Err(AnalysisError::EmptyInput);
        }
        let nf = n as f64;
        Ok(match self {
            CurveSpec::Circle => SampledCurve {
                points: (0..n)
                    .map(|k| {
                        let a = 2.0 * PI * k as f64 / nf;
                        [a.cos(), a.sin(), 0.0]
                    })
                    .collect(),
                closed: true,
            },
            CurveSpec::Square => {
                let corners = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]];
                SampledCurve { points: along(&corners, true, n), closed: true }
            }
            CurveSpec::Helix => SampledCurve {
                points: (0..n)
                    .map(|k| {
                        let u = k as f64 / (nf - 1.0);
                        let a = 2.0 * PI * u;
                        [a.cos(), a.sin(), u]
                    })
                    .collect(),
                closed: false,
            },
            CurveSpec::LPolyline => {
                let corners = [[0.0, 1.0, 0.0], [0.0, 0.0, 0.0], [1.0, 0.0, 0.0]];
                SampledCurve { points: along(&corners, false, n), closed: false }
            }
            CurveSpec::File(p) => {
                let text =
                    std::fs::read_to_string(p).map_err(|e| AnalysisError::Io(format!("{}: {e}", p.display())))?;
                SampledCurve { points: parse_points(&text)?, closed: false }
            }
        })
    }
}

pub fn parse_points(text: &str) -> Result<Vec<[f64; 3]>, AnalysisError> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let vals: Vec<f64> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| AnalysisError::Parse(format!("line {}: {e}", no + 1)))?;
        match vals[..] {
            [x, y, z] if x.is_finite() && y.is_finite() && z.is_finite() => out.push([x, y, z]),
            _ => return Err(AnalysisError::Parse(format!("line {}: expected three finite numbers", no + 1))),
        }
    }
    if out.is_empty() {
        return Err(AnalysisError::EmptyInput);
    }
    Ok(out)
}
