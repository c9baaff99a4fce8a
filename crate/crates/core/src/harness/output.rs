//! CSV tables, SVG charts and metadata files. Every writer is a pure
//! function of its input, so repeated runs produce identical bytes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::assembly::{assembly_degree, error_degree};
use crate::error::{Error, Result};
use crate::harness::config::RunConfig;
use crate::harness::run::{log_energy, EnergySeries, RunReport, SweepKind, SweepResult};

pub const SWEEP_HEADER: &str = "case,k,h,delta,t_end,error_l2,pairwise_rate";
pub const ENERGY_HEADER: &str = "case,t,energy,log_energy";
pub const GUARD_HEADER: &str = "step,t,coefficient,status";
pub const SNAPSHOT_HEADER: &str = "case,t,x,y,u_h,u_exact";

/// 17 significant digits; `inf`, `-inf` and `nan` for the special values.
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

pub fn sweep_csv(result: &SweepResult) -> String {
    let mut out = format!("{SWEEP_HEADER}\n");
    for (row, rate) in result.rows.iter().zip(&result.rates) {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            row.case,
            row.k,
            fmt_float(row.h),
            fmt_float(row.delta),
            fmt_float(row.t_end),
            row.error_l2.map(fmt_float).unwrap_or_default(),
            rate.map(fmt_float).unwrap_or_default(),
        );
    }
    out
}

pub fn energy_csv(series: &[EnergySeries]) -> String {
    let mut out = format!("{ENERGY_HEADER}\n");
    for s in series {
        for &(t, e) in &s.points {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                s.case,
                fmt_float(t),
                fmt_float(e),
                fmt_float(log_energy(e))
            );
        }
    }
    out
}

pub fn guard_csv(report: &RunReport) -> String {
    let mut out = format!("{GUARD_HEADER}\n");
    for r in &report.coefficient_history {
        let _ = writeln!(out, "{},{},{},{}", r.step, fmt_float(r.t), fmt_float(r.value), r.status);
    }
    out
}

pub fn snapshot_csv(report: &RunReport) -> String {
    let case = report.config.case;
    let mut out = format!("{SNAPSHOT_HEADER}\n");
    let exact = crate::manufactured::make_case(case).ok();
    for snap in &report.snapshots {
        let space = snap.field.space();
        for (p, u) in space.nodes().iter().zip(snap.field.coefficients()) {
            let ue = exact.as_ref().map(|c| c.u(*p, snap.t)).unwrap_or(f64::NAN);
            let _ = writeln!(
                out,
                "{case},{},{},{},{},{}",
                fmt_float(snap.t),
                fmt_float(p[0]),
                fmt_float(p[1]),
                fmt_float(*u),
                fmt_float(ue)
            );
        }
    }
    out
}

/// `key = value` lines describing how a table was produced.
pub fn metadata(config: &RunConfig, extra: &[(&str, String)]) -> String {
    let mut out = config.to_text();
    let _ = writeln!(out, "assembly_quadrature_degree = {}", assembly_degree(config.k));
    let _ = writeln!(out, "error_quadrature_degree = {}", error_degree(config.k));
    for (k, v) in extra {
        let _ = writeln!(out, "{k} = {v}");
    }
    out
}

pub fn sweep_metadata(config: &RunConfig, result: &SweepResult) -> String {
    let ladder = |f: &dyn Fn(&crate::harness::run::SweepRow) -> f64| {
        result
            .rows
            .iter()
            .map(|r| format!("{}", f(r)))
            .collect::<Vec<_>>()
            .join(",")
    };
    let kind = match result.kind {
        SweepKind::Space => "space",
        SweepKind::Time => "time",
    };
    let mut extra = vec![
        ("sweep", kind.to_string()),
        ("h_ladder", ladder(&|r| r.h)),
        ("delta_ladder", ladder(&|r| r.delta)),
        ("fitted_slope", result.slope.map(fmt_float).unwrap_or_default()),
    ];
    for r in result.failures() {
        extra.push((
            "failed_run",
            format!("h={} delta={}: {}", r.h, r.delta, r.failure.as_deref().unwrap_or("")),
        ));
    }
    metadata(config, &extra)
}

#[derive(Debug, Clone)]
pub struct ChartSeries {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// A line chart with a logarithmic y axis and optionally a logarithmic x axis.
#[derive(Debug, Clone)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub series: Vec<ChartSeries>,
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const MAX_POINTS: usize = 400;

impl Chart {
    fn x_of(&self, x: f64) -> Option<f64> {
        if self.log_x {
            (x > 0.0 && x.is_finite()).then(|| x.log10())
        } else {
            x.is_finite().then_some(x)
        }
    }

    /// Points in axis coordinates, with unplottable ones dropped and long
    /// series thinned to a fixed stride.
    fn plotted(&self, s: &ChartSeries) -> Vec<(f64, f64)> {
        let pts: Vec<(f64, f64)> = s
            .points
            .iter()
            .filter_map(|&(x, y)| Some((self.x_of(x)?, (y > 0.0 && y.is_finite()).then(|| y.log10())?)))
            .collect();
        let stride = pts.len().div_ceil(MAX_POINTS).max(1);
        let mut thinned: Vec<_> = pts.iter().copied().step_by(stride).collect();
        if let Some(&last) = pts.last() {
            if thinned.last() != Some(&last) {
                thinned.push(last);
            }
        }
        thinned
    }

    pub fn render(&self) -> String {
        let all: Vec<Vec<(f64, f64)>> = self.series.iter().map(|s| self.plotted(s)).collect();
        let flat = all.iter().flatten();
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in flat {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if !x0.is_finite() {
            (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
        }
        if self.log_x {
            x0 = x0.floor();
            x1 = x1.ceil();
        }
        y0 = y0.floor();
        y1 = y1.ceil();
        if x1 <= x0 {
            x1 = x0 + 1.0;
        }
        if y1 <= y0 {
            y1 = y0 + 1.0;
        }
        let pw = WIDTH - LEFT - RIGHT;
        let ph = HEIGHT - TOP - BOTTOM;
        let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
        let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * ph;

        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
            LEFT + pw / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            svg,
            r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
        );

        // y decades
        let step = ((y1 - y0) / 8.0).ceil().max(1.0);
        let mut d = y0;
        while d <= y1 + 1e-9 {
            let y = sy(d);
            let _ = writeln!(
                svg,
                r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd"/><text x="{:.1}" y="{:.2}" text-anchor="end">1e{}</text>"##,
                LEFT + pw,
                LEFT - 6.0,
                y + 4.0,
                d as i64
            );
            d += step;
        }
        // x ticks
        let ticks: Vec<(f64, String)> = if self.log_x {
            let mut v = Vec::new();
            let mut d = x0;
            while d <= x1 + 1e-9 {
                v.push((d, format!("1e{}", d as i64)));
                d += 1.0;
            }
            v
        } else {
            (0..=5)
                .map(|i| {
                    let x = x0 + (x1 - x0) * i as f64 / 5.0;
                    (x, format!("{}", (x * 1000.0).round() / 1000.0))
                })
                .collect()
        };
        for (x, label) in ticks {
            let px = sx(x);
            let _ = writeln!(
                svg,
                r##"<line x1="{px:.2}" y1="{TOP}" x2="{px:.2}" y2="{:.2}" stroke="#dddddd"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{label}</text>"##,
                TOP + ph,
                TOP + ph + 18.0
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            LEFT + pw / 2.0,
            HEIGHT - 15.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            svg,
            r#"<text x="18" y="{:.1}" text-anchor="middle" transform="rotate(-90 18 {:.1})">{}</text>"#,
            TOP + ph / 2.0,
            TOP + ph / 2.0,
            escape(&self.y_label)
        );

        for (i, (s, pts)) in self.series.iter().zip(&all).enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
            if !coords.is_empty() {
                let _ = writeln!(
                    svg,
                    r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
                    coords.join(" ")
                );
            }
            if pts.len() <= 20 {
                for &(x, y) in pts {
                    let _ = writeln!(
                        svg,
                        r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                        sx(x),
                        sy(y)
                    );
                }
            }
            let ly = TOP + 10.0 + 18.0 * i as f64;
            let lx = LEFT + pw + 12.0;
            let _ = writeln!(
                svg,
                r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/><text x="{:.1}" y="{:.1}">{}</text>"#,
                lx + 20.0,
                lx + 26.0,
                ly + 4.0,
                escape(&s.label)
            );
        }
        svg.push_str("</svg>\n");
        svg
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Error-versus-parameter chart for one or more sweeps.
pub fn sweep_chart(title: &str, sweeps: &[SweepResult]) -> Chart {
    let kind = sweeps.first().map(|s| s.kind).unwrap_or(SweepKind::Space);
    Chart {
        title: title.to_string(),
        x_label: match kind {
            SweepKind::Space => "h".into(),
            SweepKind::Time => "delta".into(),
        },
        y_label: "L2 error at t_end".into(),
        log_x: true,
        series: sweeps
            .iter()
            .map(|s| {
                let k = s.rows.first().map(|r| r.k).unwrap_or(0);
                let slope = s.slope.map(|v| format!(" ({v:.2})")).unwrap_or_default();
                ChartSeries {
                    label: format!("k = {k}{slope}"),
                    points: s
                        .rows
                        .iter()
                        .filter_map(|r| r.error_l2.map(|e| (r.parameter(s.kind), e)))
                        .collect(),
                }
            })
            .collect(),
    }
}

pub fn energy_chart(series: &[EnergySeries]) -> Chart {
    Chart {
        title: "Discrete energy ||U_n||^2".into(),
        x_label: "t".into(),
        y_label: "energy".into(),
        log_x: false,
        series: series
            .iter()
            .map(|s| ChartSeries {
                label: s.case.to_string(),
                points: s.points.clone(),
            })
            .collect(),
    }
}

/// Writes `contents` to `dir/name`, creating `dir` if needed.
pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| Error::Io { path, source }
    };
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(io(&path))?;
    Ok(path)
}

/// Sweep table, chart and metadata; returns the written paths.
pub fn emit_sweep(config: &RunConfig, result: &SweepResult) -> Result<Vec<PathBuf>> {
    let stem = match result.kind {
        SweepKind::Space => format!("sweep_h_{}_k{}", config.case, config.k),
        SweepKind::Time => format!("sweep_dt_{}_k{}", config.case, config.k),
    };
    let title = format!("{} k = {}", config.case, config.k);
    let dir = &config.out_dir;
    Ok(vec![
        write_file(dir, &format!("{stem}.csv"), &sweep_csv(result))?,
        write_file(
            dir,
            &format!("{stem}.svg"),
            &sweep_chart(&title, std::slice::from_ref(result)).render(),
        )?,
        write_file(dir, &format!("{stem}.meta"), &sweep_metadata(config, result))?,
    ])
}

pub fn emit_energy(dir: &Path, configs: &[RunConfig], series: &[EnergySeries]) -> Result<Vec<PathBuf>> {
    let mut meta = String::new();
    for cfg in configs {
        let _ = writeln!(meta, "[{}]", cfg.case);
        meta += &metadata(cfg, &[]);
    }
    Ok(vec![
        write_file(dir, "energy.csv", &energy_csv(series))?,
        write_file(dir, "energy.svg", &energy_chart(series).render())?,
        write_file(dir, "energy.meta", &meta)?,
    ])
}

/// Energy, guard log, snapshots and metadata of a single solve.
pub fn emit_solve(report: &RunReport) -> Result<Vec<PathBuf>> {
    let cfg = &report.config;
    let case = cfg.case;
    let series = [EnergySeries {
        case,
        points: report.energy_history.iter().map(|r| (r.t, r.energy)).collect(),
    }];
    let trip = report
        .first_guard_trip()
        .map(|r| format!("step {} t = {} ({})", r.step, r.t, r.status))
        .unwrap_or_else(|| "none".into());
    let meta = metadata(
        cfg,
        &[
            ("h", format!("{}", report.h)),
            ("delta_used", format!("{}", report.delta)),
            ("n_steps", report.n_steps.to_string()),
            ("final_error_l2", fmt_float(report.final_error)),
            ("first_guard_trip", trip),
        ],
    );
    let dir = &cfg.out_dir;
    Ok(vec![
        write_file(dir, &format!("solve_{case}_energy.csv"), &energy_csv(&series))?,
        write_file(
            dir,
            &format!("solve_{case}_energy.svg"),
            &energy_chart(&series).render(),
        )?,
        write_file(dir, &format!("solve_{case}_guard.csv"), &guard_csv(report))?,
        write_file(dir, &format!("solve_{case}_snapshots.csv"), &snapshot_csv(report))?,
        write_file(dir, &format!("solve_{case}.meta"), &meta)?,
    ])
}
