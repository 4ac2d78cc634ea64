//! Data behind each reproduced figure, one long-format table per id.

use probe_core::bounds::{bright_squeezed_probe, shift_for_overlap, sweep_altitude, BoundQuery, RayleighLink};
use probe_core::channel::{optimize_squeezing_fraction, qfi_squeezed_coherent_deficit};
use probe_core::optimize::{linspace, logspace};
use probe_core::overlap::{overlap, overlap_deficit, redshift_delta, tanh_profile};
use probe_core::parallel::map_ordered;
use probe_core::{ChannelConfig, GaussianProbe, GeoConfig, ProfileFamily, ProfileSpec};

use crate::commands::{bound_row, query_row};
use crate::error::{CliError, CliResult};
use crate::output::{format_num, Axis, Row, Table};

pub const FIGURES: &[(u32, &str)] = &[
    (2, "QFI versus squeezing fraction at t = 1 for n = 1, 10, 100, 1000"),
    (3, "QFI versus squeezing fraction for n = 1, t from 0 to 1, with the maximum per t"),
    (4, "as figure 3 with n = 10"),
    (5, "as figure 3 with n = 100"),
    (6, "Gaussian profile bound versus squeezing fraction at a 1 Hz shift, n = 2"),
    (7, "Gaussian profile bound at the coherent optimum x = 1/2, n = 2"),
    (8, "Gaussian profile bound with the detuning optimized per (y, t), n = 2"),
    (9, "rectangular profile bound at a sigma/2 shift, n = 2"),
    (10, "rectangular profile bound at a 1 Hz shift, n = 2"),
    (12, "squared tanh profile for smoothing 0.01 and 0.1"),
    (13, "tanh overlap versus redshift around a fixed detector"),
    (14, "tanh bound versus overlap deficit on both sides of the detector, fully squeezed n = 2"),
    (15, "tanh profile bound with the detuning optimized per (y, t), n = 2"),
    (16, "Gaussian profile at x = 1/2, 1000-photon pulse plus squeezing, several t"),
    (17, "tanh profile at overlap 0.999, 1000-photon pulse plus squeezing, several t"),
    (18, "bound versus Alice-Bob separation with Rayleigh loss, both profiles, 0 and 10 dB"),
];

pub const NOT_REPRODUCED: &[(u32, &str)] = &[
    (1, "channel schematic, no data"),
    (11, "optimized detuning for the ideal rectangle; its t = 1 curve collapses to zero, see figure 15"),
];

const FIG2_THETA_DEFICIT: f64 = 1e-3;

fn curve(row: Row, id: u32, label: String) -> Row {
    row.text("figure", format!("fig{id}")).text("curve", label)
}

/// `k/50` for `k` in `from..=50`.
fn t_steps(from: u32) -> Vec<f64> {
    (from..=50).map(|k| k as f64 / 50.0).collect()
}

fn label(name: &str, v: f64) -> String {
    format!("{name}={}", format_num(v))
}

fn qfi_row(t: f64, deficit: f64, probe: &GaussianProbe) -> CliResult<Row> {
    let qfi = qfi_squeezed_coherent_deficit(t, deficit, probe)?;
    Ok(Row::default()
        .num("n_bar", probe.mean_photons())
        .num("squeeze_fraction", probe.squeezing_fraction())
        .num("alpha", probe.alpha_mag)
        .num("r", probe.r)
        .num("t", t)
        .num("theta", 1.0 - deficit)
        .num("one_minus_theta", deficit)
        .num("qfi", qfi))
}

fn fig2() -> CliResult<Table> {
    let mut table =
        Table::new("fig2", "QFI versus squeezing fraction, t = 1", Axis::linear("squeeze_fraction"), Axis::log("qfi"))
            .meta("theta", "1 - 1e-3");
    let ys = linspace(0.0, 1.0, 101);
    for n in [1.0, 10.0, 100.0, 1000.0] {
        for &y in &ys {
            let probe = GaussianProbe::from_photons(n, y)?;
            table.rows.push(curve(qfi_row(1.0, FIG2_THETA_DEFICIT, &probe)?, 2, label("n", n)));
        }
    }
    Ok(table)
}

fn fig_qfi_versus_t(id: u32, n: f64) -> CliResult<Table> {
    let mut table = Table::new(
        format!("fig{id}"),
        format!("QFI versus squeezing fraction, n = {n}"),
        Axis::linear("squeeze_fraction"),
        Axis::linear("qfi"),
    )
    .meta("theta", "1 - 1e-3")
    .meta("curve max", "maximum over y for each t");
    let ys = linspace(0.0, 1.0, 101);
    let ts = t_steps(0);
    let curves: CliResult<Vec<Vec<Row>>> = map_ordered(&ts, |&t| {
        ys.iter()
            .map(|&y| {
                Ok(curve(qfi_row(t, FIG2_THETA_DEFICIT, &GaussianProbe::from_photons(n, y)?)?, id, label("t", t)))
            })
            .collect()
    })
    .into_iter()
    .collect();
    table.rows.extend(curves?.into_iter().flatten());
    for &t in &ts {
        let cfg = ChannelConfig::lossy(t, 1.0 - FIG2_THETA_DEFICIT)?;
        let best = optimize_squeezing_fraction(n, &cfg)?;
        let probe = GaussianProbe::from_photons(n, best.squeeze_fraction)?;
        table.rows.push(curve(qfi_row(t, FIG2_THETA_DEFICIT, &probe)?, id, "max".into()));
    }
    Ok(table)
}

fn baseline(family: ProfileFamily, smooth: f64, probe: GaussianProbe, t: f64) -> BoundQuery {
    let mut q = BoundQuery::baseline(family, probe);
    q.spec.delta_smooth = smooth;
    q.channel_t = t;
    q
}

/// Bound over a `(t, y)` grid at `n = 2`; `shift = None` optimizes the detector.
fn fig_bound_grid(
    id: u32,
    title: &str,
    family: ProfileFamily,
    smooth: f64,
    shift: Option<f64>,
    ts: &[f64],
    points: usize,
) -> CliResult<Table> {
    let mut table = Table::new(format!("fig{id}"), title, Axis::linear("squeeze_fraction"), Axis::log("bound"))
        .meta("n_bar", "2")
        .meta("detector", shift.map_or("optimized per point".to_string(), |s| format!("shift {} Hz", format_num(s))));
    let ys = linspace(0.0, 1.0, points);
    let cells: Vec<(f64, f64)> = ts.iter().flat_map(|&t| ys.iter().map(move |&y| (t, y))).collect();
    let rows: CliResult<Vec<Row>> = map_ordered(&cells, |&(t, y)| {
        let q = baseline(family, smooth, GaussianProbe::from_photons(2.0, y)?, t);
        let row = match shift {
            Some(s) => bound_row(&q.with_shift(s), false)?,
            None => bound_row(&q, true)?,
        };
        Ok(curve(row, id, label("t", t)))
    })
    .into_iter()
    .collect();
    table.rows = rows?;
    Ok(table)
}

fn fig12() -> CliResult<Table> {
    let spec = ProfileSpec::baseline(ProfileFamily::TanhRect);
    let mut table = Table::new("fig12", "squared tanh profile", Axis::linear("offset_hz"), Axis::linear("profile_sq"));
    for smooth in [0.01, 0.1] {
        for u in linspace(-1.5 * spec.sigma, 1.5 * spec.sigma, 601) {
            let f = tanh_profile(u, spec.sigma, smooth);
            let row = Row::default()
                .text("profile", spec.family.name())
                .num("delta_smooth", smooth)
                .num("sigma", spec.sigma)
                .num("omega0", spec.omega0)
                .num("offset_hz", u)
                .num("profile_sq", f * f);
            table.rows.push(curve(row, 12, label("smooth", smooth)));
        }
    }
    Ok(table)
}

fn fig13() -> CliResult<Table> {
    let geo = GeoConfig::earth_geostationary();
    let delta0 = redshift_delta(&geo);
    let mut table = Table::new(
        "fig13",
        "tanh overlap versus redshift, detector fixed at the nominal redshift",
        Axis::linear("shift_hz"),
        Axis::linear("theta"),
    )
    .meta("eps", format_num(delta0));
    for smooth in [0.01, 0.1] {
        let spec =
            ProfileSpec { delta_smooth: smooth, ..ProfileSpec::baseline(ProfileFamily::TanhRect) }.with_eps(delta0);
        let shifts = linspace(-1.5 * spec.sigma, 1.5 * spec.sigma, 241);
        let rows: CliResult<Vec<Row>> = map_ordered(&shifts, |&s| {
            let delta = delta0 + s / spec.omega0;
            let row = Row::default()
                .text("profile", spec.family.name())
                .num("delta_smooth", smooth)
                .num("sigma", spec.sigma)
                .num("omega0", spec.omega0)
                .num("r_a", geo.r_a)
                .num("r_b", geo.r_b)
                .num("r_s", geo.r_s)
                .num("delta", delta)
                .num("eps", spec.eps)
                .num("shift_hz", spec.shift(delta))
                .num("theta", overlap(delta, &spec)?)
                .num("one_minus_theta", overlap_deficit(delta, &spec)?);
            Ok(curve(row, 13, label("smooth", smooth)))
        })
        .into_iter()
        .collect();
        table.rows.extend(rows?);
    }
    Ok(table)
}

fn fig14() -> CliResult<Table> {
    let mut table = Table::new(
        "fig14",
        "tanh bound versus overlap deficit, fully squeezed n = 2, t = 1",
        Axis::log("one_minus_theta"),
        Axis::log("bound"),
    )
    .meta("curve delta-", "redshift below the detector setting")
    .meta("curve delta+", "redshift above the detector setting");
    let probe = GaussianProbe::from_photons(2.0, 1.0)?;
    let magnitudes = logspace(1e-2, 3e3, 61);
    for smooth in [0.01, 0.1] {
        let q = baseline(ProfileFamily::TanhRect, smooth, probe, 1.0);
        for (branch, sign) in [("delta-", -1.0), ("delta+", 1.0)] {
            let rows: CliResult<Vec<Row>> = map_ordered(&magnitudes, |&m| {
                Ok(curve(
                    bound_row(&q.with_shift(sign * m), false)?,
                    14,
                    format!("{branch} smooth={}", format_num(smooth)),
                ))
            })
            .into_iter()
            .collect();
            table.rows.extend(rows?);
        }
    }
    Ok(table)
}

fn squeeze_grid() -> Vec<f64> {
    let mut dbs = linspace(0.0, 20.0, 41);
    dbs.push(17.4);
    dbs.sort_by(f64::total_cmp);
    dbs
}

fn fig_bright_squeezing(id: u32, title: &str, family: ProfileFamily, shift: f64) -> CliResult<Table> {
    let mut table = Table::new(format!("fig{id}"), title, Axis::linear("squeeze_db"), Axis::log("bound"))
        .meta("coherent photons", "1000")
        .meta("shift_hz", format_num(shift));
    let dbs = squeeze_grid();
    let ts = [0.1, 0.3, 0.5, 0.7, 0.9, 1.0];
    let cells: Vec<(f64, f64)> = ts.iter().flat_map(|&t| dbs.iter().map(move |&d| (t, d))).collect();
    let rows: CliResult<Vec<Row>> = map_ordered(&cells, |&(t, db)| {
        let q = baseline(family, 0.01, bright_squeezed_probe(1000.0, db)?, t).with_shift(shift);
        Ok(curve(bound_row(&q, false)?.num("squeeze_db", db), id, label("t", t)))
    })
    .into_iter()
    .collect();
    table.rows = rows?;
    Ok(table)
}

/// `z_R` to 1e8 m, three points per decade.
pub fn fig18_distances(z_r: f64) -> Vec<f64> {
    let decades = (1e8 / z_r).log10();
    logspace(z_r, 1e8, (3.0 * decades).round() as usize + 1)
}

fn fig18() -> CliResult<Table> {
    let mut table =
        Table::new("fig18", "bound versus separation with Rayleigh loss", Axis::log("distance_m"), Axis::log("bound"))
            .meta("coherent photons", "1000")
            .meta("detector", "re-optimized at every distance")
            .meta("t0", "1");
    for z_r in [100.0, 1000.0] {
        let link = RayleighLink::new(z_r, 1.0)?;
        let grid = fig18_distances(z_r);
        for (family, smooth) in [(ProfileFamily::Gaussian, 0.01), (ProfileFamily::TanhRect, 0.001)] {
            for db in [0.0, 10.0] {
                let q = baseline(family, smooth, bright_squeezed_probe(1000.0, db)?, 1.0);
                let name = format!("{} z_r={} db={}", family.name(), format_num(z_r), format_num(db));
                for p in sweep_altitude(&link, &q, &grid)? {
                    let local =
                        BoundQuery { geo: q.geo.with_separation(p.distance)?, channel_t: p.t, ..q }.with_eps(p.eps);
                    let row = query_row(&local)
                        .num("z_r", z_r)
                        .num("distance_m", p.distance)
                        .num("squeeze_db", db)
                        .num("theta", p.theta)
                        .num("bound", p.bound);
                    table.rows.push(curve(row, 18, name.clone()));
                }
            }
        }
    }
    Ok(table)
}

pub fn build(id: u32) -> CliResult<Table> {
    let sigma = ProfileSpec::baseline(ProfileFamily::Gaussian).sigma;
    match id {
        2 => fig2(),
        3 => fig_qfi_versus_t(3, 1.0),
        4 => fig_qfi_versus_t(4, 10.0),
        5 => fig_qfi_versus_t(5, 100.0),
        6 => {
            fig_bound_grid(6, "Gaussian profile, 1 Hz shift", ProfileFamily::Gaussian, 0.01, Some(1.0), &t_steps(1), 51)
        }
        7 => fig_bound_grid(
            7,
            "Gaussian profile, x = 1/2",
            ProfileFamily::Gaussian,
            0.01,
            Some(2.0 * sigma),
            &t_steps(1),
            51,
        ),
        8 => fig_bound_grid(
            8,
            "Gaussian profile, optimized detuning",
            ProfileFamily::Gaussian,
            0.01,
            None,
            &t_steps(1),
            51,
        ),
        9 => fig_bound_grid(
            9,
            "rectangular profile, sigma/2 shift",
            ProfileFamily::Rect,
            0.01,
            Some(0.5 * sigma),
            &t_steps(1),
            51,
        ),
        10 => {
            fig_bound_grid(10, "rectangular profile, 1 Hz shift", ProfileFamily::Rect, 0.01, Some(1.0), &t_steps(1), 51)
        }
        12 => fig12(),
        13 => fig13(),
        14 => fig14(),
        15 => fig_bound_grid(
            15,
            "tanh profile, optimized detuning",
            ProfileFamily::TanhRect,
            0.01,
            None,
            &[0.25, 0.5, 0.75, 1.0],
            11,
        ),
        16 => fig_bright_squeezing(
            16,
            "Gaussian profile at x = 1/2 with added squeezing",
            ProfileFamily::Gaussian,
            2.0 * sigma,
        ),
        17 => {
            let spec = ProfileSpec::baseline(ProfileFamily::TanhRect);
            let shift = shift_for_overlap(&spec, redshift_delta(&GeoConfig::earth_geostationary()), 0.999)?;
            fig_bright_squeezing(
                17,
                "tanh profile at overlap 0.999 with added squeezing",
                ProfileFamily::TanhRect,
                shift,
            )
        }
        18 => fig18(),
        _ => Err(CliError::usage(format!("unknown figure id {id}; see `probe list-figures`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_ids_are_unique_and_disjoint() {
        for (id, _) in FIGURES {
            assert!(!NOT_REPRODUCED.iter().any(|(n, _)| n == id));
            assert_eq!(FIGURES.iter().filter(|(j, _)| j == id).count(), 1);
        }
        assert!(build(1).is_err());
        assert!(build(11).is_err());
    }

    #[test]
    fn fig18_grid_starts_at_the_rayleigh_length() {
        let g = fig18_distances(100.0);
        assert_eq!(g.len(), 19);
        assert_eq!(g[0], 100.0);
        assert_eq!(*g.last().unwrap(), 1e8);
        assert_eq!(fig18_distances(1000.0).len(), 16);
    }

    #[test]
    fn fig2_echoes_parameters() {
        let t = fig2().unwrap();
        assert_eq!(t.rows.len(), 404);
        let r = &t.rows[0];
        assert_eq!(r.get("t"), Some(1.0));
        assert_eq!(r.get("n_bar"), Some(1.0));
        assert_eq!(r.get("one_minus_theta"), Some(1e-3));
        assert_eq!(r.label("curve"), Some("n=1"));
    }
}
