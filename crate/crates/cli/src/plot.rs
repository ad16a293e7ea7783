//! Deterministic SVG rendering of runner CSVs.

use std::collections::BTreeMap;
use std::fmt::Write as _;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 450.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"];

/// Axis and series selection. Unset fields are inferred from the CSV schema.
#[derive(Debug, Clone, Default)]
pub struct PlotSpec {
    pub x: Option<String>,
    pub y: Option<String>,
    pub series: Option<String>,
    /// Row filter on the `x_var` column of bound-sweep CSVs.
    pub x_var: Option<String>,
    pub log_x: Option<bool>,
    pub log_y: Option<bool>,
    pub title: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind {
    Lines,
    Bars,
}

struct Layout {
    kind: Kind,
    x: String,
    ys: Vec<String>,
    series: Option<String>,
    log_x: bool,
    log_y: bool,
    title: String,
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn parse(text: &str) -> Result<Table, String> {
        let mut rd = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let header: Vec<String> = rd.headers().map_err(|e| e.to_string())?.iter().map(str::to_string).collect();
        if header.iter().all(|h| h.is_empty()) {
            return Err("empty CSV".into());
        }
        let mut rows = Vec::new();
        for rec in rd.records() {
            rows.push(rec.map_err(|e| e.to_string())?.iter().map(str::to_string).collect());
        }
        if rows.is_empty() {
            return Err("CSV has no data rows".into());
        }
        Ok(Table { header, rows })
    }

    fn col(&self, name: &str) -> Result<usize, String> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| format!("schema mismatch: no column '{name}'"))
    }

    fn has(&self, names: &[&str]) -> bool {
        names.iter().all(|n| self.header.iter().any(|h| h == n))
    }
}

fn infer(t: &Table, spec: &PlotSpec) -> Result<Layout, String> {
    let (kind, x, ys, series, log_x, log_y, title) = if t.has(&["curve", "x_var", "x", "value"]) {
        (Kind::Lines, "x", vec!["value"], Some("curve"), true, true, "Complexity bounds")
    } else if t.has(&["dataset", "algorithm", "mean_ratio"]) {
        (Kind::Bars, "dataset", vec!["mean_ratio"], Some("algorithm"), false, false, "Operation ratio to classical")
    } else if t.has(&["M", "p_estimate"]) {
        let series = if t.has(&["noise_kind"]) { Some("noise_kind") } else { None };
        (Kind::Lines, "M", vec!["p_estimate"], series, false, false, "Success probability P(M)")
    } else if t.has(&["gamma", "empirical", "lemma_bound"]) {
        (Kind::Lines, "gamma", vec!["empirical", "wedge_exact", "lemma_bound", "first_order"], None, true, true, "Separation probability")
    } else if t.has(&["trial", "loo_error"]) {
        (Kind::Lines, "trial", vec!["loo_error"], None, false, false, "Leave-one-out error")
    } else {
        match (&spec.x, &spec.y) {
            (Some(_), Some(_)) => (Kind::Lines, "", vec![], None, false, false, ""),
            _ => return Err("schema mismatch: unrecognised CSV; pass --x and --y".into()),
        }
    };
    let ys = match &spec.y {
        Some(y) => y.split(',').map(|s| s.trim().to_string()).collect(),
        None => ys.into_iter().map(String::from).collect(),
    };
    Ok(Layout {
        kind,
        x: spec.x.clone().unwrap_or_else(|| x.to_string()),
        ys,
        series: spec.series.clone().or(series.map(String::from)),
        log_x: spec.log_x.unwrap_or(log_x),
        log_y: spec.log_y.unwrap_or(log_y),
        title: spec.title.clone().unwrap_or_else(|| title.to_string()),
    })
}

/// One named sequence of (x, y) points, or (category, y) for bars.
struct Series {
    name: String,
    points: Vec<(String, f64)>,
}

fn collect(t: &Table, l: &Layout, x_var: Option<&str>) -> Result<Vec<Series>, String> {
    let xi = t.col(&l.x)?;
    let si = l.series.as_deref().map(|s| t.col(s)).transpose()?;
    let yis = l.ys.iter().map(|y| t.col(y)).collect::<Result<Vec<_>, _>>()?;
    let filter = match (x_var, t.col("x_var")) {
        (Some(v), Ok(i)) => Some((i, v.to_string())),
        (None, Ok(i)) => Some((i, t.rows[0][i].clone())),
        _ => None,
    };
    let mut order: Vec<String> = Vec::new();
    let mut map: BTreeMap<String, Vec<(String, f64)>> = BTreeMap::new();
    for row in &t.rows {
        if let Some((i, v)) = &filter {
            if row.get(*i) != Some(v) {
                continue;
            }
        }
        let get = |i: usize| row.get(i).cloned().ok_or_else(|| "schema mismatch: short row".to_string());
        for (yi, yname) in yis.iter().zip(&l.ys) {
            let name = match si {
                Some(s) if yis.len() > 1 => format!("{} {}", get(s)?, yname),
                Some(s) => get(s)?,
                None => yname.clone(),
            };
            let y: f64 = get(*yi)?.parse().map_err(|_| format!("schema mismatch: non-numeric '{}'", yname))?;
            if !map.contains_key(&name) {
                order.push(name.clone());
            }
            map.entry(name).or_default().push((get(xi)?, y));
        }
    }
    if map.is_empty() {
        return Err("no rows to plot".into());
    }
    Ok(order
        .into_iter()
        .map(|name| {
            let points = map.remove(&name).unwrap();
            Series { name, points }
        })
        .collect())
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if !(1e-3..1e5).contains(&a) {
        let e = a.log10().floor() as i32;
        let m = v / 10f64.powi(e);
        if (m.round() - m).abs() < 1e-9 {
            format!("{}e{}", m.round(), e)
        } else {
            format!("{m:.1}e{e}")
        }
    } else {
        let s = format!("{v:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    }
}

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn new(values: impl Iterator<Item = f64>, log: bool, zero: bool) -> Result<Axis, String> {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for v in values {
            if !v.is_finite() || (log && v <= 0.0) {
                continue;
            }
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() {
            return Err("no plottable values".into());
        }
        if zero && !log {
            lo = lo.min(0.0);
        }
        if log {
            lo = 10f64.powf(lo.log10().floor());
            hi = 10f64.powf(hi.log10().ceil());
            if lo == hi {
                hi = lo * 10.0;
            }
        } else if lo == hi {
            lo -= 0.5;
            hi += 0.5;
        } else {
            let step = nice_step(hi - lo);
            lo = (lo / step).floor() * step;
            hi = (hi / step).ceil() * step;
        }
        Ok(Axis { lo, hi, log })
    }

    fn frac(&self, v: f64) -> f64 {
        if self.log {
            (v.log10() - self.lo.log10()) / (self.hi.log10() - self.lo.log10())
        } else {
            (v - self.lo) / (self.hi - self.lo)
        }
    }

    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let (a, b) = (self.lo.log10().round() as i32, self.hi.log10().round() as i32);
            (a..=b).map(|e| 10f64.powi(e)).collect()
        } else {
            let step = nice_step(self.hi - self.lo);
            let n = ((self.hi - self.lo) / step).round() as i64;
            (0..=n).map(|i| self.lo + i as f64 * step).collect()
        }
    }
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let m = raw / mag;
    let nice = if m <= 1.0 {
        1.0
    } else if m <= 2.0 {
        2.0
    } else if m <= 5.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

/// Renders `csv_text` as a standalone SVG 1.1 document.
///
/// Errors on an empty CSV, a CSV with no data rows, or columns that do not
/// match the selected axes.
pub fn render_svg(csv_text: &str, spec: &PlotSpec) -> Result<String, String> {
    let table = Table::parse(csv_text)?;
    let layout = infer(&table, spec)?;
    let series = collect(&table, &layout, spec.x_var.as_deref())?;
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;

    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(s, r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#, LEFT + pw / 2.0, esc(&layout.title)).unwrap();

    let yaxis = Axis::new(series.iter().flat_map(|se| se.points.iter().map(|p| p.1)), layout.log_y, layout.kind == Kind::Bars)?;
    let py = |v: f64| TOP + ph * (1.0 - yaxis.frac(v));

    // Frame and y ticks.
    writeln!(s, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#).unwrap();
    for t in yaxis.ticks() {
        let y = py(t);
        writeln!(s, r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/>"##, LEFT + pw).unwrap();
        writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#, LEFT - 6.0, y + 4.0, fmt_tick(t)).unwrap();
    }

    match layout.kind {
        Kind::Lines => {
            let xs = series
                .iter()
                .flat_map(|se| se.points.iter())
                .map(|(x, _)| x.parse::<f64>().map_err(|_| format!("schema mismatch: non-numeric x '{x}'")))
                .collect::<Result<Vec<_>, _>>()?;
            let xaxis = Axis::new(xs.into_iter(), layout.log_x, false)?;
            let px = |v: f64| LEFT + pw * xaxis.frac(v);
            for t in xaxis.ticks() {
                let x = px(t);
                writeln!(s, r##"<line x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{:.2}" stroke="#dddddd"/>"##, TOP + ph).unwrap();
                writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, TOP + ph + 18.0, fmt_tick(t)).unwrap();
            }
            for (i, se) in series.iter().enumerate() {
                let pts: Vec<String> = se
                    .points
                    .iter()
                    .filter_map(|(x, y)| {
                        let x: f64 = x.parse().ok()?;
                        let ok = y.is_finite() && (!layout.log_y || *y > 0.0) && (!layout.log_x || x > 0.0);
                        ok.then(|| format!("{:.2},{:.2}", px(x), py(*y)))
                    })
                    .collect();
                writeln!(
                    s,
                    r#"<polyline fill="none" stroke="{}" stroke-width="2" points="{}"/>"#,
                    PALETTE[i % PALETTE.len()],
                    pts.join(" ")
                )
                .unwrap();
            }
        }
        Kind::Bars => {
            let mut cats: Vec<String> = Vec::new();
            for se in &series {
                for (c, _) in &se.points {
                    if !cats.contains(c) {
                        cats.push(c.clone());
                    }
                }
            }
            let slot = pw / cats.len() as f64;
            let bw = slot * 0.8 / series.len() as f64;
            let base = py(if yaxis.log { yaxis.lo } else { 0f64.max(yaxis.lo) });
            for (ci, c) in cats.iter().enumerate() {
                let cx = LEFT + slot * (ci as f64 + 0.5);
                writeln!(s, r#"<text x="{cx:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, TOP + ph + 18.0, esc(c)).unwrap();
                for (si, se) in series.iter().enumerate() {
                    if let Some((_, v)) = se.points.iter().find(|(k, _)| k == c) {
                        let x = LEFT + slot * ci as f64 + slot * 0.1 + bw * si as f64;
                        let top = py(*v);
                        writeln!(
                            s,
                            r#"<rect x="{x:.2}" y="{:.2}" width="{bw:.2}" height="{:.2}" fill="{}"/>"#,
                            top.min(base),
                            (base - top).abs(),
                            PALETTE[si % PALETTE.len()]
                        )
                        .unwrap();
                    }
                }
            }
        }
    }

    writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, LEFT + pw / 2.0, HEIGHT - 18.0, esc(&layout.x)).unwrap();
    writeln!(
        s,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        esc(&layout.ys.join(", "))
    )
    .unwrap();

    // Legend.
    let lx = LEFT + pw + 16.0;
    for (i, se) in series.iter().enumerate() {
        let ly = TOP + 10.0 + 20.0 * i as f64;
        let color = PALETTE[i % PALETTE.len()];
        writeln!(s, r#"<rect x="{lx:.2}" y="{:.2}" width="14" height="10" fill="{color}"/>"#, ly - 9.0).unwrap();
        writeln!(s, r#"<text x="{:.2}" y="{ly:.2}">{}</text>"#, lx + 20.0, esc(&se.name)).unwrap();
    }
    s.push_str("</svg>\n");
    Ok(s)
}
