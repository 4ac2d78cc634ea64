use probe_core::bounds::{
    bright_squeezed_probe, evaluate_bound, gaussian_coherent_optimum, measurements_from_sigma,
    optimize_operating_point, rayleigh_transmission, shift_for_overlap, BoundReport, QfiConvention,
};
use probe_core::channel::{output_family, qfi_closed_form};
use probe_core::gaussian::{qfi_numeric, QfiOptions, Stencil};
use probe_core::optimize::{linspace, logspace};
use probe_core::overlap::{
    dtheta_ddelta, dtheta_drs, operating_exponent, overlap, overlap_deficit, redshift_delta, redshift_delta_exact,
    redshift_delta_geodesic,
};
use probe_core::parallel::map_ordered;
use probe_core::{
    BoundQuery, ChannelConfig, GaussianProbe, GeoConfig, ProbeError, ProfileFamily, ProfileSpec, RayleighLink,
};

use crate::args::*;
use crate::error::{CliError, CliResult};
use crate::output::{format_num, Axis, Row, Table};

pub fn print_table(entries: &[(&str, String)]) {
    use std::io::Write;
    let width = entries.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = std::io::stdout().lock();
    for (k, v) in entries {
        if writeln!(out, "{k:<width$}  {v}").is_err() {
            return;
        }
    }
}

pub fn resolve_probe(p: &ProbeArgs, default_coherent: f64) -> CliResult<GaussianProbe> {
    let explicit = p.alpha.is_some() || p.r.is_some() || p.phase.is_some();
    let photons = p.nbar.is_some() || p.y.is_some();
    let bright = p.coherent.is_some() || p.db.is_some();
    if [explicit, photons, bright].iter().filter(|&&b| b).count() > 1 {
        return Err(CliError::usage("give the probe as one of --alpha/--r/--phase, --nbar/--y or --coherent/--db"));
    }
    let probe = if explicit {
        GaussianProbe::new(p.alpha.unwrap_or(0.0), p.phase.unwrap_or(0.0), p.r.unwrap_or(0.0))?
    } else if photons {
        let n = p.nbar.ok_or_else(|| CliError::usage("--y needs --nbar"))?;
        GaussianProbe::from_photons(n, p.y.unwrap_or(0.0))?
    } else {
        bright_squeezed_probe(p.coherent.unwrap_or(default_coherent), p.db.unwrap_or(0.0))?
    };
    Ok(probe)
}

/// Detector detuning from at most one of `--eps`, `--shift`, `--theta-target`.
pub fn resolve_eps(d: &DetectorArgs, spec: &ProfileSpec, delta: f64) -> CliResult<Option<f64>> {
    let given = [d.eps.is_some(), d.shift.is_some(), d.theta_target.is_some()];
    if given.iter().filter(|&&b| b).count() > 1 {
        return Err(CliError::usage("give at most one of --eps, --shift, --theta-target"));
    }
    if let Some(eps) = d.eps {
        return Ok(Some(eps));
    }
    if let Some(shift) = d.shift {
        return Ok(Some(spec.eps_for_shift(delta, shift)));
    }
    if let Some(target) = d.theta_target {
        let shift = shift_for_overlap(spec, delta, target)?;
        return Ok(Some(spec.eps_for_shift(delta, shift)));
    }
    Ok(None)
}

fn geo_of(g: &GeoArgs) -> CliResult<GeoConfig> {
    Ok(GeoConfig::new(g.r_a, g.r_b, g.r_s)?)
}

fn spec_of(p: &ProfileArgs) -> CliResult<ProfileSpec> {
    Ok(ProfileSpec::new(p.profile, p.omega0, p.sigma, p.delta_smooth, 0.0)?)
}

/// Parameters of a query, echoed into every output row.
pub fn query_row(q: &BoundQuery) -> Row {
    let delta = q.delta();
    let mut row = Row::default()
        .text("profile", q.spec.family.name())
        .num("sigma", q.spec.sigma)
        .num("omega0", q.spec.omega0)
        .num("r_a", q.geo.r_a)
        .num("r_b", q.geo.r_b)
        .num("r_s", q.geo.r_s)
        .num("n_meas", q.n_meas as f64)
        .num("n_bar", q.probe.mean_photons())
        .num("squeeze_fraction", q.probe.squeezing_fraction())
        .num("alpha", q.probe.alpha_mag)
        .num("r", q.probe.r)
        .num("t", q.channel_t)
        .num("delta", delta)
        .num("eps", q.spec.eps)
        .num("shift_hz", q.spec.shift(delta));
    if q.spec.family == ProfileFamily::TanhRect {
        row = row.num("delta_smooth", q.spec.delta_smooth);
    }
    row
}

pub fn report_row(q: &BoundQuery, r: &BoundReport) -> Row {
    query_row(&q.with_eps(r.eps))
        .num("theta", r.theta)
        .num("one_minus_theta", r.deficit)
        .num("dtheta_drs", r.dtheta_drs)
        .num("qfi", r.qfi)
        .num("bound", r.bound)
}

fn divergent(e: &ProbeError) -> bool {
    matches!(e, ProbeError::Divergent(_) | ProbeError::Kink)
}

/// Bound row; a diverging bound is recorded as `inf`.
pub fn bound_row(q: &BoundQuery, optimal: bool) -> CliResult<Row> {
    let report = if optimal { optimize_operating_point(q) } else { evaluate_bound(q) };
    match report {
        Ok(r) => Ok(report_row(q, &r)),
        Err(e) if divergent(&e) => Ok(query_row(q).num("bound", f64::INFINITY)),
        Err(e) => Err(e.into()),
    }
}

pub fn cmd_qfi(a: &QfiArgs) -> CliResult<()> {
    let probe = resolve_probe(&a.probe, 1.0)?;
    let cfg = ChannelConfig::new(a.t, a.theta, a.nth)?;
    let closed = qfi_closed_form(&cfg, &probe)?;
    let opts = QfiOptions {
        step: a.step,
        max_halvings: a.halvings,
        stencil: match a.stencil {
            StencilArg::Central => Stencil::Central,
            StencilArg::Forward => Stencil::Forward,
        },
        ..QfiOptions::default()
    };
    let numeric = qfi_numeric(output_family(probe, a.t, a.nth), a.theta, opts)?;
    let rel = if closed == numeric { 0.0 } else { (closed - numeric).abs() / closed.abs().max(numeric.abs()) };
    print_table(&[
        ("t", format_num(a.t)),
        ("theta", format_num(a.theta)),
        ("nth", format_num(a.nth)),
        ("alpha", format_num(probe.alpha_mag)),
        ("r", format_num(probe.r)),
        ("n_bar", format_num(probe.mean_photons())),
        ("qfi_closed", format_num(closed)),
        ("qfi_numeric", format_num(numeric)),
        ("rel_diff", format_num(rel)),
    ]);
    Ok(())
}

pub fn cmd_overlap(a: &OverlapArgs) -> CliResult<()> {
    let geo = geo_of(&a.geo)?;
    let spec = spec_of(&a.profile)?;
    let delta = redshift_delta(&geo);
    let spec = spec.with_eps(resolve_eps(&a.detector, &spec, delta)?.unwrap_or(0.0));
    let theta = overlap(delta, &spec)?;
    let deficit = overlap_deficit(delta, &spec)?;
    let mut out = vec![
        ("profile", spec.family.name().to_string()),
        ("delta", format_num(delta)),
        ("delta_geodesic", format_num(redshift_delta_geodesic(&geo))),
        ("delta_exact", format_num(redshift_delta_exact(&geo))),
        ("eps", format_num(spec.eps)),
        ("shift_hz", format_num(spec.shift(delta))),
        ("x", format_num(operating_exponent(delta, &spec))),
        ("theta", format_num(theta)),
        ("one_minus_theta", format_num(deficit)),
    ];
    let slope = dtheta_ddelta(delta, &spec);
    let per_rs = dtheta_drs(&geo, &spec);
    match (slope, per_rs) {
        (Ok(s), Ok(r)) => {
            out.push(("dtheta_ddelta", format_num(s)));
            out.push(("dtheta_drs", format_num(r)));
            print_table(&out);
            Ok(())
        }
        (Err(e), _) | (_, Err(e)) => {
            print_table(&out);
            Err(e.into())
        }
    }
}

fn bound_query(a: &BoundArgs, default_coherent: f64) -> CliResult<BoundQuery> {
    let geo = geo_of(&a.geo)?;
    let spec = spec_of(&a.profile)?;
    let probe = resolve_probe(&a.probe, default_coherent)?;
    let n_meas = a.n_meas.unwrap_or_else(|| measurements_from_sigma(spec.sigma));
    Ok(BoundQuery::new(geo, spec, probe, a.t, n_meas)?)
}

/// `Some(eps)` for a fixed detector, `None` for an optimized one.
fn detector_setting(a: &BoundArgs, q: &BoundQuery) -> CliResult<Option<f64>> {
    let eps = resolve_eps(&a.detector, &q.spec, q.delta())?;
    match (a.eps_mode, eps) {
        (Some(EpsMode::Optimal), Some(_)) => Err(CliError::usage("--eps-mode optimal conflicts with a detuning flag")),
        (Some(EpsMode::Optimal), None) | (None, None) => Ok(None),
        (Some(EpsMode::Fixed), e) => Ok(Some(e.unwrap_or(0.0))),
        (None, Some(e)) => Ok(Some(e)),
    }
}

pub fn cmd_bound(a: &BoundArgs) -> CliResult<()> {
    let q = bound_query(a, 2.0)?;
    let setting = detector_setting(a, &q)?;
    let r = match setting {
        Some(eps) => evaluate_bound(&q.with_eps(eps))?,
        None => optimize_operating_point(&q)?,
    };
    let mut out = vec![
        ("profile", q.spec.family.name().to_string()),
        ("eps_mode", if setting.is_some() { "fixed" } else { "optimal" }.to_string()),
        ("delta", format_num(r.delta)),
        ("eps", format_num(r.eps)),
        ("shift_hz", format_num(r.shift)),
        ("x", format_num(r.operating_x)),
        ("theta", format_num(r.theta)),
        ("one_minus_theta", format_num(r.deficit)),
        ("dtheta_drs", format_num(r.dtheta_drs)),
        ("qfi", format_num(r.qfi)),
        ("n_meas", q.n_meas.to_string()),
        ("bound", format_num(r.bound)),
        ("constant_bures", format_num(QfiConvention::Bures.gaussian_coherent_constant())),
        ("constant_unscaled", format_num(QfiConvention::Unscaled.gaussian_coherent_constant())),
    ];
    if q.spec.family == ProfileFamily::Gaussian && q.probe.alpha_mag > 0.0 && q.channel_t > 0.0 {
        let convention = match a.convention {
            ConventionArg::Bures => QfiConvention::Bures,
            ConventionArg::Unscaled => QfiConvention::Unscaled,
        };
        out.push(("coherent_optimum", format_num(gaussian_coherent_optimum(&q, convention))));
    }
    print_table(&out);
    Ok(())
}

fn axis_column(var: SweepVar) -> &'static str {
    match var {
        SweepVar::T => "t",
        SweepVar::Y => "squeeze_fraction",
        SweepVar::Nbar => "n_bar",
        SweepVar::Db => "squeeze_db",
        SweepVar::Shift => "shift_hz",
        SweepVar::Theta => "theta",
        SweepVar::Distance => "distance_m",
    }
}

fn sweep_point(a: &SweepArgs, base: &BoundQuery, setting: Option<f64>, v: f64) -> CliResult<Row> {
    let mut q = match setting {
        Some(eps) => base.with_eps(eps),
        None => *base,
    };
    let mut optimal = setting.is_none();
    let mut theta = a.theta;
    let mut z_r = None;
    match a.var {
        SweepVar::T => q.channel_t = v,
        SweepVar::Y => q.probe = GaussianProbe::from_photons(base.probe.mean_photons(), v)?,
        SweepVar::Nbar => q.probe = GaussianProbe::from_photons(v, base.probe.squeezing_fraction())?,
        SweepVar::Db => {
            let n = a.bound.probe.coherent.unwrap_or(base.probe.alpha_mag * base.probe.alpha_mag);
            q.probe = bright_squeezed_probe(n, v)?;
        }
        SweepVar::Shift => {
            q = q.with_shift(v);
            optimal = false;
        }
        SweepVar::Theta => {
            theta = v;
            if a.quantity != Quantity::Qfi {
                q = q.with_shift(shift_for_overlap(&q.spec, q.delta(), v)?);
                optimal = false;
            }
        }
        SweepVar::Distance => {
            let link = RayleighLink::new(a.z_r, a.t0)?;
            q.geo = q.geo.with_separation(v)?;
            q.channel_t = rayleigh_transmission(&link, v)?;
            z_r = Some(a.z_r);
        }
    }
    let row = match a.quantity {
        Quantity::Bound => bound_row(&q, optimal)?,
        Quantity::Qfi => {
            let cfg = ChannelConfig::lossy(q.channel_t, theta)?;
            query_row(&q).num("theta", theta).num("qfi", qfi_closed_form(&cfg, &q.probe)?)
        }
        Quantity::Overlap => {
            let delta = q.delta();
            query_row(&q)
                .num("theta", overlap(delta, &q.spec)?)
                .num("one_minus_theta", overlap_deficit(delta, &q.spec)?)
        }
    };
    let mut row = row.text("curve", a.name.as_str()).text("figure", a.name.as_str()).num(axis_column(a.var), v);
    if let Some(z) = z_r {
        row = row.num("z_r", z);
    }
    if let (Some(db), false) = (a.bound.probe.db, a.var == SweepVar::Db) {
        row = row.num("squeeze_db", db);
    }
    Ok(row)
}

pub fn cmd_sweep(a: &SweepArgs, outdir: &std::path::Path, scenario: &str) -> CliResult<()> {
    if a.points == 0 {
        return Err(CliError::usage("--points must be at least 1"));
    }
    let grid = match a.scale {
        Scale::Linear => linspace(a.min, a.max, a.points),
        Scale::Log => {
            if !(a.min > 0.0 && a.max > 0.0) {
                return Err(CliError::usage("a log sweep needs positive --min and --max"));
            }
            logspace(a.min, a.max, a.points)
        }
    };
    let base = bound_query(&a.bound, 2.0)?;
    let setting = detector_setting(&a.bound, &base)?;
    let rows: CliResult<Vec<Row>> = map_ordered(&grid, |&v| sweep_point(a, &base, setting, v)).into_iter().collect();
    let y = match a.quantity {
        Quantity::Bound => Axis::log("bound"),
        Quantity::Qfi => Axis::linear("qfi"),
        Quantity::Overlap => Axis::linear("theta"),
    };
    let x = Axis { column: axis_column(a.var), log: a.scale == Scale::Log };
    let mut table = Table::new(a.name.clone(), format!("{} sweep", a.name), x, y)
        .meta("eps_mode", if setting.is_some() { "fixed" } else { "optimal" });
    table.rows = rows?;
    let (csv, svg) = table.save(outdir, scenario)?;
    println!("wrote {}", csv.display());
    println!("wrote {}", svg.display());
    Ok(())
}
