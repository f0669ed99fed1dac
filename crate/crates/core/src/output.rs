//! CSV and SVG writers for sweep records.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::measurement::CanonicalParams;
use crate::sweep::SweepRecord;

/// Exact CSV header.
pub const CSV_HEADER: [&str; 13] = [
    "a",
    "b",
    "c",
    "d",
    "u",
    "v",
    "x",
    "y",
    "entropy_bound",
    "best_CL",
    "delta",
    "positive",
    "evaluations",
];

/// Shortest decimal text that parses back to the same `f64`.
fn float(v: f64) -> String {
    format!("{v:?}")
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Csv(format!("{}: {other:?}", path.display())),
    }
}

/// Writes records as CSV with [`CSV_HEADER`].
pub fn write_csv(records: &[SweepRecord], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(CSV_HEADER).map_err(|e| csv_err(path, e))?;
    for r in records {
        let mut row: Vec<String> = r
            .measurement_params
            .as_array()
            .iter()
            .map(|&v| float(v))
            .collect();
        row.extend([
            float(r.entropy_bound),
            float(r.best_cl),
            float(r.delta),
            r.positive.to_string(),
            r.evaluations.to_string(),
        ]);
        w.write_record(&row).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reads a CSV produced by [`write_csv`].
pub fn read_csv(path: &Path) -> Result<Vec<SweepRecord>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let header = rdr.headers().map_err(|e| csv_err(path, e))?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Csv(format!("unexpected header {:?}", header)));
    }
    let mut out = Vec::new();
    for (line, row) in rdr.records().enumerate() {
        let row = row.map_err(|e| csv_err(path, e))?;
        let bad = |what: &str| Error::Csv(format!("row {}: bad {what}", line + 2));
        let num =
            |i: usize| -> Result<f64> { row[i].trim().parse().map_err(|_| bad(CSV_HEADER[i])) };
        let mut params = [0.0; 8];
        for (k, slot) in params.iter_mut().enumerate() {
            *slot = num(k)?;
        }
        out.push(SweepRecord {
            measurement_params: CanonicalParams::from_array(params)?,
            entropy_bound: num(8)?,
            best_cl: num(9)?,
            delta: num(10)?,
            positive: row[11].trim().parse().map_err(|_| bad("positive"))?,
            evaluations: row[12].trim().parse().map_err(|_| bad("evaluations"))?,
        });
    }
    Ok(out)
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 70.0;

/// Renders best bound against entropy bound as a scatter plot with the
/// line `y = x` where the two coincide.
pub fn scatter_svg(records: &[SweepRecord]) -> Result<String> {
    if records.is_empty() {
        return Err(Error::Csv("no records to plot".into()));
    }
    let y_max = 1.05 * records.iter().map(|r| r.best_cl).fold(0.0, f64::max);
    let y_max = if y_max > 0.0 { y_max } else { 1.0 };
    let y_min = records.iter().map(|r| r.best_cl).fold(0.0, f64::min);
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + x * plot_w;
    let sy = |y: f64| MARGIN_TOP + (y_max - y) / (y_max - y_min) * plot_h;

    let mut s = String::new();
    let w = &mut s;
    let _ = writeln!(
        w,
        r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#
    );
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        w,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    // axes box
    let _ = writeln!(
        w,
        r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black" stroke-width="1"/>"#,
        MARGIN_LEFT, MARGIN_TOP, plot_w, plot_h
    );
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let _ = writeln!(
            w,
            r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{y1:.2}" stroke="black"/><text x="{x:.2}" y="{ty:.2}" font-size="14" text-anchor="middle">{t}</text>"#,
            x = sx(t),
            y0 = MARGIN_TOP + plot_h,
            y1 = MARGIN_TOP + plot_h + 6.0,
            ty = MARGIN_TOP + plot_h + 24.0,
        );
        let yv = y_min + t * (y_max - y_min);
        let _ = writeln!(
            w,
            r#"<line x1="{x0:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke="black"/><text x="{tx:.2}" y="{ty:.2}" font-size="14" text-anchor="end">{yv:.3}</text>"#,
            x0 = MARGIN_LEFT - 6.0,
            x1 = MARGIN_LEFT,
            y = sy(yv),
            tx = MARGIN_LEFT - 10.0,
            ty = sy(yv) + 5.0,
        );
    }
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="{:.2}" font-size="16" text-anchor="middle">entropy bound (ebits)</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 20.0
    );
    let _ = writeln!(
        w,
        r#"<text x="20" y="{:.2}" font-size="16" text-anchor="middle" transform="rotate(-90 20 {:.2})">lower bound C_L (ebits)</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    );
    // y = x, clipped to the vertical range
    let x_end = y_max.min(1.0);
    let x_start = y_min.max(0.0);
    let _ = writeln!(
        w,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="red" stroke-width="1.5"/>"#,
        sx(x_start),
        sy(x_start),
        sx(x_end),
        sy(x_end)
    );
    let _ = writeln!(w, r#"<g fill="blue">"#);
    for r in records {
        let _ = writeln!(
            w,
            r#"<circle cx="{:.2}" cy="{:.2}" r="2"/>"#,
            sx(r.entropy_bound.clamp(0.0, 1.0)),
            sy(r.best_cl)
        );
    }
    let _ = writeln!(w, "</g>");
    let _ = writeln!(w, "</svg>");
    Ok(s)
}

pub fn write_scatter_svg(records: &[SweepRecord], path: &Path) -> Result<()> {
    let svg = scatter_svg(records)?;
    fs::write(path, svg).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(params: CanonicalParams, eb: f64, cl: f64) -> SweepRecord {
        SweepRecord {
            measurement_params: params,
            entropy_bound: eb,
            best_cl: cl,
            delta: cl - eb,
            positive: cl - eb > 1e-6,
            evaluations: 31104,
        }
    }

    #[test]
    fn single_record_csv() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("one.csv");
        write_csv(&[record(CanonicalParams::zero(), 0.0, 0.0)], &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(
            lines[0],
            "a,b,c,d,u,v,x,y,entropy_bound,best_CL,delta,positive,evaluations"
        );
        assert_eq!(
            lines[1],
            "0.0,0.0,0.0,0.0,0.0,0.0,0.0,0.0,0.0,0.0,0.0,false,31104"
        );
    }

    #[test]
    fn csv_round_trips_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        let p = CanonicalParams::new(0.1, 6.2, 1.5, 0.3, 0.01, 1e-9, 0.7, 3.3).unwrap();
        let recs = vec![
            record(p, 0.123456789012345, 0.2 + 1e-17),
            record(CanonicalParams::zero(), 1e-300, 0.5),
        ];
        write_csv(&recs, &path).unwrap();
        assert_eq!(read_csv(&path).unwrap(), recs);
    }

    #[test]
    fn reader_rejects_foreign_csv() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        fs::write(&path, "x,y\n1,2\n").unwrap();
        assert!(matches!(read_csv(&path), Err(Error::Csv(_))));
        assert!(matches!(
            read_csv(&dir.path().join("missing.csv")),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn svg_places_dots_on_the_diagonal() {
        let recs = [
            record(CanonicalParams::zero(), 0.0, 0.0),
            record(CanonicalParams::zero(), 1.0, 1.0),
        ];
        let svg = scatter_svg(&recs).unwrap();
        assert!(svg.contains(r#"width="800" height="600""#));
        assert!(svg.contains(r#"stroke="red""#));
        // plot area is x ∈ [80, 770], y ∈ [30, 530] with y_max = 1.05
        assert!(
            svg.contains(r#"<circle cx="80.00" cy="530.00" r="2"/>"#),
            "{svg}"
        );
        let top = 30.0 + 0.05 / 1.05 * 500.0;
        assert!(svg.contains(&format!(r#"<circle cx="770.00" cy="{top:.2}" r="2"/>"#)));
        // the y = x line runs through both dots
        assert!(svg.contains(&format!(
            r#"x1="80.00" y1="530.00" x2="770.00" y2="{top:.2}""#
        )));
        assert!(scatter_svg(&[]).is_err());
    }
}
