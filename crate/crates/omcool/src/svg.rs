//! Minimal SVG plots of result tables: heatmaps for two-axis sweeps and
//! line charts otherwise.

use std::fmt::Write;

use crate::table::{Cell, ResultTable};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SvgError {
    #[error("table has no rows")]
    Empty,
    #[error("column `{0}` not found")]
    MissingColumn(String),
    #[error("table does not say which columns are axes")]
    NoAxes,
}

const W: f64 = 640.0;
const H: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 110.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;

// Dark blue through teal to yellow.
const STOPS: [(f64, [u8; 3]); 5] = [
    (0.0, [68, 1, 84]),
    (0.25, [59, 82, 139]),
    (0.5, [33, 145, 140]),
    (0.75, [94, 201, 98]),
    (1.0, [253, 231, 37]),
];

const LINE_COLORS: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

fn color(t: f64) -> String {
    let t = if t.is_finite() {
        t.clamp(0.0, 1.0)
    } else {
        0.0
    };
    let k = STOPS.iter().position(|(s, _)| *s >= t).unwrap_or(4).max(1);
    let (s0, c0) = STOPS[k - 1];
    let (s1, c1) = STOPS[k];
    let u = (t - s0) / (s1 - s0);
    let mix = |i: usize| (c0[i] as f64 + u * (c1[i] as f64 - c0[i] as f64)).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(0), mix(1), mix(2))
}

fn axis_names(table: &ResultTable) -> Result<Vec<String>, SvgError> {
    let axes = table.meta("axes").ok_or(SvgError::NoAxes)?;
    Ok(axes
        .split_whitespace()
        .map(|a| a.split(':').next().unwrap_or(a).to_string())
        .map(|a| {
            if table.column_index(&a).is_some() {
                a
            } else if table.column_index("kappa").is_some() {
                "kappa".to_string()
            } else {
                a
            }
        })
        .collect())
}

fn col(table: &ResultTable, name: &str) -> Result<usize, SvgError> {
    table
        .column_index(name)
        .ok_or_else(|| SvgError::MissingColumn(name.to_string()))
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn frame(out: &mut String, xlabel: &str, ylabel: &str, x: (f64, f64), y: (f64, f64)) {
    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let _ = writeln!(
        out,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let px = LEFT + t * pw;
        let py = TOP + ph - t * ph;
        let _ = writeln!(
            out,
            r#"<text x="{px:.1}" y="{:.1}" font-size="11" text-anchor="middle">{}</text>"#,
            TOP + ph + 16.0,
            tick(x.0 + t * (x.1 - x.0))
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-size="11" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            py + 4.0,
            tick(y.0 + t * (y.1 - y.0))
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-size="13" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        H - 20.0,
        escape(xlabel)
    );
    let _ = writeln!(
        out,
        r#"<text x="20" y="{:.1}" font-size="13" text-anchor="middle" transform="rotate(-90 20 {:.1})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(ylabel)
    );
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-2 || v.abs() >= 1e4) {
        format!("{v:.1e}")
    } else {
        format!("{:.3}", v)
            .trim_end_matches('0')
            .trim_end_matches('.')
            .to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn open() -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
}

/// Renders `value` (default: the table's `plot` metadata, else `n_f_1`).
pub fn render(table: &ResultTable, value: Option<&str>) -> Result<String, SvgError> {
    if table.is_empty() {
        return Err(SvgError::Empty);
    }
    let axes = axis_names(table)?;
    let value = value.or(table.meta("plot")).unwrap_or("n_f_1").to_string();
    match axes.len() {
        2 => heatmap(table, &axes[0], &axes[1], &value),
        1 => lines(table, &axes[0], Some(&value)),
        _ => Err(SvgError::NoAxes),
    }
}

/// Line chart of every `n_f_*` column (or `p_e_*` for atomic tables).
pub fn render_all(table: &ResultTable) -> Result<String, SvgError> {
    if table.is_empty() {
        return Err(SvgError::Empty);
    }
    let axes = axis_names(table)?;
    match axes.len() {
        1 => lines(table, &axes[0], None),
        2 => heatmap(table, &axes[0], &axes[1], "n_f_1"),
        _ => Err(SvgError::NoAxes),
    }
}

fn heatmap(table: &ResultTable, xa: &str, ya: &str, value: &str) -> Result<String, SvgError> {
    let (xi, yi, vi) = (col(table, xa)?, col(table, ya)?, col(table, value)?);
    // First case only when the sweep has several.
    let case_col = table
        .meta("case_column")
        .and_then(|c| table.column_index(c));
    let first_case = case_col.map(|c| table.rows[0][c].clone());
    let rows: Vec<&Vec<Cell>> = table
        .rows
        .iter()
        .filter(|r| case_col.is_none_or(|c| Some(&r[c]) == first_case.as_ref()))
        .collect();
    let mut xs: Vec<f64> = rows.iter().filter_map(|r| r[xi].as_f64()).collect();
    let mut ys: Vec<f64> = rows.iter().filter_map(|r| r[yi].as_f64()).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    let (vlo, vhi) = range(rows.iter().filter_map(|r| r[vi].as_f64()));
    let (xr, yr) = (range(xs.iter().copied()), range(ys.iter().copied()));

    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let cw = pw / xs.len() as f64;
    let ch = ph / ys.len() as f64;
    let mut out = open();
    for r in &rows {
        let (Some(x), Some(y)) = (r[xi].as_f64(), r[yi].as_f64()) else {
            continue;
        };
        let ix = xs.partition_point(|v| *v < x);
        let iy = ys.partition_point(|v| *v < y);
        let fill = match r[vi].as_f64() {
            Some(v) => color((v - vlo) / (vhi - vlo)),
            None => "#bbbbbb".to_string(),
        };
        let _ = writeln!(
            out,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{fill}"/>"#,
            LEFT + ix as f64 * cw,
            TOP + ph - (iy + 1) as f64 * ch,
            cw + 0.05,
            ch + 0.05
        );
    }
    frame(&mut out, xa, ya, xr, yr);
    // Color bar.
    let bx = W - RIGHT + 20.0;
    for i in 0..50 {
        let t = i as f64 / 49.0;
        let _ = writeln!(
            out,
            r#"<rect x="{bx}" y="{:.2}" width="18" height="{:.2}" fill="{}"/>"#,
            TOP + ph - (i + 1) as f64 * ph / 50.0,
            ph / 50.0 + 0.05,
            color(t)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-size="11">{}</text>"#,
        bx + 22.0,
        TOP + ph,
        tick(vlo)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-size="11">{}</text>"#,
        bx + 22.0,
        TOP + 10.0,
        tick(vhi)
    );
    let _ = writeln!(
        out,
        r#"<text x="{bx}" y="{:.1}" font-size="12">{}</text>"#,
        TOP - 10.0,
        escape(value)
    );
    out.push_str("</svg>\n");
    Ok(out)
}

fn lines(table: &ResultTable, xa: &str, value: Option<&str>) -> Result<String, SvgError> {
    let xi = col(table, xa)?;
    let values: Vec<String> = match value {
        Some(v) => {
            col(table, v)?;
            vec![v.to_string()]
        }
        None => table
            .columns
            .iter()
            .filter(|c| c.starts_with("n_f_") || c.starts_with("p_e_"))
            .cloned()
            .collect(),
    };
    let case_col = table
        .meta("case_column")
        .and_then(|c| table.column_index(c));
    let mut cases: Vec<String> = Vec::new();
    for r in &table.rows {
        let label = case_col.map(|c| r[c].to_string()).unwrap_or_default();
        if !cases.contains(&label) {
            cases.push(label);
        }
    }
    let vis: Vec<usize> = values
        .iter()
        .map(|v| col(table, v))
        .collect::<Result<_, _>>()?;
    let xr = range(table.rows.iter().filter_map(|r| r[xi].as_f64()));
    let yr = range(
        table
            .rows
            .iter()
            .flat_map(|r| vis.iter().filter_map(move |i| r[*i].as_f64())),
    );
    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    let px = |x: f64| LEFT + (x - xr.0) / (xr.1 - xr.0) * pw;
    let py = |y: f64| TOP + ph - (y - yr.0) / (yr.1 - yr.0) * ph;

    let mut out = open();
    frame(&mut out, xa, value.unwrap_or("value"), xr, yr);
    let mut k = 0;
    for case in &cases {
        for (name, &vi) in values.iter().zip(&vis) {
            let pts: Vec<String> = table
                .rows
                .iter()
                .filter(|r| case_col.is_none_or(|c| r[c].to_string() == *case))
                .filter_map(|r| Some((r[xi].as_f64()?, r[vi].as_f64()?)))
                .map(|(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
                .collect();
            let stroke = LINE_COLORS[k % LINE_COLORS.len()];
            let _ = writeln!(
                out,
                r#"<polyline fill="none" stroke="{stroke}" stroke-width="1.5" points="{}"/>"#,
                pts.join(" ")
            );
            let label = if case.is_empty() {
                name.clone()
            } else {
                format!("{case} {name}")
            };
            let _ = writeln!(
                out,
                r#"<text x="{:.1}" y="{:.1}" font-size="10" fill="{stroke}">{}</text>"#,
                W - RIGHT + 6.0,
                TOP + 12.0 + 13.0 * k as f64,
                escape(&label)
            );
            k += 1;
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}
