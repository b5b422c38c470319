//! Minimal SVG line charts of history and sweep CSVs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

const HISTORY_HEADER: [&str; 3] = ["epoch", "loss", "accuracy"];
const SWEEP_HEADER: [&str; 4] = ["model_id", "scale", "loss", "accuracy"];
const COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsvKind {
    History,
    Sweep,
}

/// One curve: `loss` and `accuracy` share x values.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub x: Vec<f64>,
    pub loss: Vec<f64>,
    pub accuracy: Vec<f64>,
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

fn number(path: &Path, line: usize, field: &str, raw: &str) -> Result<f64> {
    let v: f64 = raw
        .trim()
        .parse()
        .map_err(|_| parse_err(path, line, format!("{field}: not a number: {raw:?}")))?;
    if !v.is_finite() {
        return Err(parse_err(path, line, format!("{field}: not finite")));
    }
    Ok(v)
}

fn read_rows(path: &Path) -> Result<(CsvKind, Vec<Vec<String>>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            other => parse_err(path, 1, format!("{other:?}")),
        })?;
    let mut records = rdr.records();
    let header = match records.next() {
        None => return Err(parse_err(path, 1, "empty file")),
        Some(r) => r.map_err(|e| parse_err(path, 1, e.to_string()))?,
    };
    let fields: Vec<&str> = header.iter().map(str::trim).collect();
    let kind = if fields == HISTORY_HEADER {
        CsvKind::History
    } else if fields == SWEEP_HEADER {
        CsvKind::Sweep
    } else {
        return Err(parse_err(
            path,
            1,
            format!("unrecognized header {:?}", header.iter().collect::<Vec<_>>()),
        ));
    };
    let mut rows = Vec::new();
    for (i, rec) in records.enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| parse_err(path, line, e.to_string()))?;
        rows.push(rec.iter().map(str::to_string).collect());
    }
    if rows.is_empty() {
        return Err(parse_err(path, 2, "no data rows"));
    }
    Ok((kind, rows))
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn history_series(path: &Path, rows: &[Vec<String>]) -> Result<Series> {
    let mut s = Series {
        name: stem(path),
        x: vec![],
        loss: vec![],
        accuracy: vec![],
    };
    for (i, r) in rows.iter().enumerate() {
        let line = i + 2;
        s.x.push(number(path, line, "epoch", &r[0])?);
        s.loss.push(number(path, line, "loss", &r[1])?);
        s.accuracy.push(number(path, line, "accuracy", &r[2])?);
    }
    Ok(s)
}

fn architecture_group(model_id: &str) -> &str {
    if model_id.contains("deepqmlp") {
        "DeepQMLP"
    } else if model_id.contains("qmlp") {
        "QMLP"
    } else {
        model_id
    }
}

/// (scale, loss_sum, acc_sum, count)
type ScaleAccumulator = (f64, f64, f64, usize);

/// Mean loss/accuracy per (architecture, scale).
fn sweep_series(path: &Path, rows: &[Vec<String>], prefix: Option<&str>) -> Result<Vec<Series>> {
    let mut groups: Vec<(String, Vec<ScaleAccumulator>)> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let line = i + 2;
        let group = architecture_group(r[0].trim()).to_string();
        let scale = number(path, line, "scale", &r[1])?;
        let loss = number(path, line, "loss", &r[2])?;
        let acc = number(path, line, "accuracy", &r[3])?;
        let gi = match groups.iter().position(|(g, _)| *g == group) {
            Some(gi) => gi,
            None => {
                groups.push((group, Vec::new()));
                groups.len() - 1
            }
        };
        let pts = &mut groups[gi].1;
        match pts.iter_mut().find(|p| p.0 == scale) {
            Some(p) => {
                p.1 += loss;
                p.2 += acc;
                p.3 += 1;
            }
            None => pts.push((scale, loss, acc, 1)),
        }
    }
    groups.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(groups
        .into_iter()
        .map(|(g, mut pts)| {
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            Series {
                name: match prefix {
                    Some(p) => format!("{p}: {g}"),
                    None => g,
                },
                x: pts.iter().map(|p| p.0).collect(),
                loss: pts.iter().map(|p| p.1 / p.3 as f64).collect(),
                accuracy: pts.iter().map(|p| p.2 / p.3 as f64).collect(),
            }
        })
        .collect())
}

/// Reads history CSVs (one series per file) or sweep CSVs (one series per
/// architecture) and renders them. Mixing the two kinds is an error.
pub fn plot_csvs(inputs: &[PathBuf]) -> Result<String> {
    if inputs.is_empty() {
        return Err(Error::Config("no CSV files to plot".into()));
    }
    let mut kind = None;
    let mut series = Vec::new();
    for path in inputs {
        let (k, rows) = read_rows(path)?;
        if kind.is_some_and(|prev| prev != k) {
            return Err(parse_err(path, 1, "cannot mix history and sweep CSVs"));
        }
        kind = Some(k);
        match k {
            CsvKind::History => series.push(history_series(path, &rows)?),
            CsvKind::Sweep => {
                let prefix = (inputs.len() > 1).then(|| stem(path));
                series.extend(sweep_series(path, &rows, prefix.as_deref())?);
            }
        }
    }
    let x_label = match kind {
        Some(CsvKind::Sweep) => "noise scale",
        _ => "epoch",
    };
    Ok(render_svg(&series, x_label))
}

struct Panel {
    left: f64,
    top: f64,
    width: f64,
    height: f64,
    x_range: (f64, f64),
    y_range: (f64, f64),
}

impl Panel {
    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        let fx = (x - self.x_range.0) / (self.x_range.1 - self.x_range.0);
        let fy = (y - self.y_range.0) / (self.y_range.1 - self.y_range.0);
        (self.left + fx * self.width, self.top + (1.0 - fy) * self.height)
    }
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

fn draw_panel(svg: &mut String, p: &Panel, title: &str, x_label: &str, series: &[Series], pick: fn(&Series) -> &[f64]) {
    let _ = writeln!(
        svg,
        r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#333"/>"##,
        p.left, p.top, p.width, p.height
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="14">{title}</text>"#,
        p.left + p.width / 2.0,
        p.top - 10.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="12">{x_label}</text>"#,
        p.left + p.width / 2.0,
        p.top + p.height + 34.0
    );
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let xv = p.x_range.0 + f * (p.x_range.1 - p.x_range.0);
        let yv = p.y_range.0 + f * (p.y_range.1 - p.y_range.0);
        let (x, _) = p.map(xv, p.y_range.0);
        let (_, y) = p.map(p.x_range.0, yv);
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle" font-size="10">{xv:.3}</text>"#,
            p.top + p.height + 16.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end" font-size="10">{yv:.3}</text>"#,
            p.left - 6.0,
            y + 3.0
        );
    }
    for (i, s) in series.iter().enumerate() {
        let pts: Vec<String> = s
            .x
            .iter()
            .zip(pick(s))
            .map(|(&x, &y)| {
                let (px, py) = p.map(x, y);
                format!("{px:.2},{py:.2}")
            })
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
            COLORS[i % COLORS.len()],
            pts.join(" ")
        );
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Two panels (loss, accuracy) with one polyline per series.
pub fn render_svg(series: &[Series], x_label: &str) -> String {
    let xs = series.iter().flat_map(|s| s.x.iter().copied());
    let (x_lo, x_hi) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    let x_range = if x_lo.is_finite() { padded(x_lo, x_hi) } else { (0.0, 1.0) };
    let loss_hi = series
        .iter()
        .flat_map(|s| s.loss.iter().copied())
        .fold(0.0, f64::max);
    let loss_range = padded(0.0, loss_hi * 1.05);

    let legend_h = 18.0 * series.len() as f64;
    let height = 420.0 + legend_h;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="960" height="{height:.0}" viewBox="0 0 960 {height:.0}" font-family="sans-serif">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let loss = Panel {
        left: 70.0,
        top: 40.0,
        width: 380.0,
        height: 300.0,
        x_range,
        y_range: loss_range,
    };
    let acc = Panel {
        left: 550.0,
        y_range: (0.0, 1.0),
        ..loss
    };
    draw_panel(&mut svg, &loss, "loss", x_label, series, |s| &s.loss);
    draw_panel(&mut svg, &acc, "accuracy", x_label, series, |s| &s.accuracy);
    for (i, s) in series.iter().enumerate() {
        let y = 400.0 + 18.0 * i as f64;
        let color = COLORS[i % COLORS.len()];
        let _ = writeln!(
            svg,
            r#"<line x1="70" y1="{y:.0}" x2="100" y2="{y:.0}" stroke="{color}" stroke-width="2"/>"#
        );
        let _ = writeln!(
            svg,
            r#"<text x="108" y="{:.0}" font-size="12">{}</text>"#,
            y + 4.0,
            escape(&s.name)
        );
    }
    svg.push_str("</svg>\n");
    svg
}
