use std::path::Path;

use plotters::prelude::*;

use crate::error::{CliError, CliResult};
use crate::output::{Axis, Table};

const PALETTE: [RGBColor; 8] = [
    RGBColor(31, 119, 180),
    RGBColor(214, 39, 40),
    RGBColor(44, 160, 44),
    RGBColor(255, 127, 14),
    RGBColor(148, 103, 189),
    RGBColor(140, 86, 75),
    RGBColor(227, 119, 194),
    RGBColor(23, 190, 207),
];

fn to_plot(axis: &Axis, v: f64) -> Option<f64> {
    let p = if axis.log {
        if v > 0.0 {
            v.log10()
        } else {
            return None;
        }
    } else {
        v
    };
    p.is_finite().then_some(p)
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        (0.0, 1.0)
    } else if hi - lo < 1e-12 * lo.abs().max(1.0) {
        (lo - 0.5, hi + 0.5)
    } else {
        let pad = 0.03 * (hi - lo);
        (lo - pad, hi + pad)
    }
}

fn tick_label(axis: &Axis, v: f64) -> String {
    if axis.log {
        format!("1e{v:.1}")
    } else {
        format!("{v:.3e}")
    }
}

/// Line plot, one series per curve. Log axes plot log10 of the data;
/// non-positive or non-finite points are skipped.
pub fn write_svg(table: &Table, path: &Path) -> CliResult<()> {
    let curves = table.curves();
    let series: Vec<(String, Vec<(f64, f64)>)> = curves
        .iter()
        .map(|c| {
            let pts = table
                .rows
                .iter()
                .filter(|r| r.label("curve") == Some(c.as_str()))
                .filter_map(|r| {
                    let x = to_plot(&table.x, r.get(table.x.column)?)?;
                    let y = to_plot(&table.y, r.get(table.y.column)?)?;
                    Some((x, y))
                })
                .collect();
            (c.clone(), pts)
        })
        .collect();
    let (x0, x1) = span(series.iter().flat_map(|(_, p)| p.iter().map(|q| q.0)));
    let (y0, y1) = span(series.iter().flat_map(|(_, p)| p.iter().map(|q| q.1)));

    let plot_err = |e: &dyn std::fmt::Display| CliError::Plot(e.to_string());
    let root = SVGBackend::new(path, (900, 600)).into_drawing_area();
    root.fill(&WHITE).map_err(|e| plot_err(&e))?;
    let mut chart = ChartBuilder::on(&root)
        .caption(&table.title, ("sans-serif", 18))
        .margin(12)
        .x_label_area_size(40)
        .y_label_area_size(80)
        .build_cartesian_2d(x0..x1, y0..y1)
        .map_err(|e| plot_err(&e))?;
    chart
        .configure_mesh()
        .x_desc(table.x.column)
        .y_desc(table.y.column)
        .x_label_formatter(&|v| tick_label(&table.x, *v))
        .y_label_formatter(&|v| tick_label(&table.y, *v))
        .draw()
        .map_err(|e| plot_err(&e))?;
    let legend = series.len() <= 12;
    for (i, (name, pts)) in series.into_iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let drawn = chart.draw_series(LineSeries::new(pts, color.stroke_width(2))).map_err(|e| plot_err(&e))?;
        if legend {
            drawn.label(name).legend(move |(x, y)| PathElement::new(vec![(x, y), (x + 18, y)], color));
        }
    }
    if legend {
        chart
            .configure_series_labels()
            .background_style(WHITE.mix(0.8))
            .border_style(BLACK)
            .draw()
            .map_err(|e| plot_err(&e))?;
    }
    root.present().map_err(|e| plot_err(&e))?;
    Ok(())
}
