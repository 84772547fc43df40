use std::f64::consts::{PI, TAU};
use std::io::Write as _;
use std::path::PathBuf;

use chirp_af::ambiguity::af_field;
use chirp_af::circular::alias_fronts;
use chirp_af::geometry::separation;
use chirp_af::specfun::QuadratureConfig;
use chirp_af::spectrum::{
    band_limit_chirp, band_limit_measured, band_limit_measured_auto, critical_step, no_alias, spectrum_numeric,
    DEFAULT_SEARCH_POINTS,
};
use chirp_af::ula::{band_limit_ula, mismatch, ula_aliasing};
use chirp_af::validation::{run_criterion, ValidationConfig, CRITERIA};
use chirp_af::{
    AfMode, ArrayCurve, CircularScenario, FieldAxes, PolarPosition, Position, SamplingGrid, Scenario,
    SpectrumGrid, UlaScenario,
};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::output::{f32_le, Csv, Run};
use crate::{
    AfGridArgs, AliasLocusArgs, AxesKind, BandlimitArgs, CaAnalyzeArgs, Cli, Command, Failure, SpectrumArgs,
    UlaAnalyzeArgs, ValidateArgs,
};

type CmdResult = Result<(), Failure>;

pub fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::AfGrid(a) => af_grid(cli, a),
        Command::Spectrum(a) => spectrum(cli, a),
        Command::Bandlimit(a) => bandlimit(cli, a),
        Command::AliasLocus(a) => alias_locus(cli, a),
        Command::CaAnalyze(a) => ca_analyze(cli, a),
        Command::UlaAnalyze(a) => ula_analyze(cli, a),
        Command::Validate(a) => validate(cli, a),
    }
}

fn load_scenario(cli: &Cli) -> Result<Scenario, Failure> {
    let path = cli
        .scenario
        .as_ref()
        .ok_or_else(|| Failure::Input("this command needs --scenario <file>".into()))?;
    let mut s = Scenario::from_path(path)?;
    if let Some(p) = cli.placement {
        s = s.with_placement(p);
    }
    Ok(s)
}

fn antennas(s: &Scenario, flag: Option<usize>) -> Result<Option<usize>, Failure> {
    match flag.or(s.antennas) {
        Some(0) => Err(Failure::Input("N must be at least 1".into())),
        n => Ok(n),
    }
}

fn params<T: Serialize>(cli: &Cli, args: &T) -> Value {
    json!({
        "args": args,
        "scenario": cli.scenario,
        "seed": cli.seed,
        "format": cli.format,
        "placement": cli.placement,
    })
}

fn prefix(cli: &Cli, default: &str) -> PathBuf {
    cli.out.clone().unwrap_or_else(|| PathBuf::from(default))
}

fn scenario_value(s: &Scenario) -> Value {
    serde_json::to_value(s.to_file_spec()).expect("scenario serializes")
}

/// Prints a JSON result and, with `--out`, also stores it with a manifest.
fn emit_json(cli: &Cli, command: &'static str, params: Value, s: Option<&Scenario>, doc: Value) -> CmdResult {
    let text = serde_json::to_string_pretty(&doc)?;
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(Failure::Other(e.into())),
        _ => {}
    }
    if let Some(p) = &cli.out {
        let mut run = Run::new(p, command, params, s);
        run.write("json", (text + "\n").as_bytes())?;
        run.finish(Value::Null)?;
    }
    Ok(())
}

fn af_grid(cli: &Cli, a: &AfGridArgs) -> CmdResult {
    let s = load_scenario(cli)?;
    let n = if a.continuous { None } else { antennas(&s, a.discrete)? };
    let (mode, mode_meta) = match n {
        Some(n) => {
            let g = SamplingGrid::new(&s.curve, n, s.placement)?;
            let meta = json!({"kind": "discrete", "N": n, "delta": g.step(), "placement": s.placement});
            (AfMode::Discrete(g), meta)
        }
        None => (AfMode::Continuous(QuadratureConfig::default()), json!({"kind": "continuous"})),
    };
    let missing = |flag: &str| Failure::Input(format!("--axes {:?} needs --{flag}", a.axes).to_lowercase());
    let axes = match a.axes {
        AxesKind::Cartesian => FieldAxes::Cartesian {
            x: a.x.ok_or_else(|| missing("x"))?,
            y: a.y.ok_or_else(|| missing("y"))?,
        },
        AxesKind::Polar => FieldAxes::Polar {
            radius: a.radius.ok_or_else(|| missing("radius"))?,
            angle: a.angle.ok_or_else(|| missing("angle"))?,
            center: a.center.unwrap_or(s.source),
        },
    };
    let field = af_field(&s, &mode, axes)?;
    let (cols, rows) = axes.shape();
    let names: [&str; 2] = match a.axes {
        AxesKind::Cartesian => ["x", "y"],
        AxesKind::Polar => ["r", "theta"],
    };

    let mut run = Run::new(&prefix(cli, "af-grid"), "af-grid", params(cli, a), Some(&s));
    if cli.format.csv() {
        let mut csv = Csv::new(&[names[0], names[1], "re", "im", "abs", "abs_sqrt"]);
        for (idx, v) in field.values.iter().enumerate() {
            let (u, w) = axes.coordinates(idx);
            let m = v.norm();
            csv.row(&[u, w, v.re, v.im, m, m.sqrt()]);
        }
        run.write("csv", &csv.into_bytes())?;
    }
    if cli.format.f32() {
        run.write("f32", &f32_le(field.values.iter().map(|v| v.norm())))?;
    }
    run.finish(json!({
        "scenario": scenario_value(&s),
        "mode": mode_meta,
        "axes": axes,
        "matched": field.matched,
        "singular_nodes": field.singular_nodes,
        "unconverged_nodes": field.unconverged_nodes,
        "f32": cli.format.f32().then(|| json!({
            "rows": rows,
            "cols": cols,
            "row_axis": names[1],
            "col_axis": names[0],
            "dtype": "f32le",
            "order": "row-major",
            "value": "abs",
        })),
    }))?;
    if field.singular_nodes > 0 {
        eprintln!("warning: {} nodes lie on the array and are NaN", field.singular_nodes);
    }
    if field.unconverged_nodes > 0 {
        return Err(Failure::Numeric(format!(
            "{} of {} nodes did not converge ({} singular); NaN entries written",
            field.unconverged_nodes,
            field.values.len(),
            field.singular_nodes
        )));
    }
    Ok(())
}

fn verdicts(s: &Scenario, n: Option<usize>, limits: &[(&str, Option<f64>)]) -> Result<Value, Failure> {
    let Some(n) = n else { return Ok(Value::Null) };
    let delta = SamplingGrid::new(&s.curve, n, s.placement)?.step();
    let mut doc = json!({"N": n, "delta": delta});
    for (name, k) in limits {
        doc[*name] = json!(k.map(|k| no_alias(delta, k)));
    }
    Ok(doc)
}

fn spectrum(cli: &Cli, a: &SpectrumArgs) -> CmdResult {
    let s = load_scenario(cli)?;
    let n = antennas(&s, a.discrete)?;
    let cfg = QuadratureConfig::default();
    let chirp = band_limit_chirp(&s, a.tentative, DEFAULT_SEARCH_POINTS)?.value;
    let (spec, measured): (SpectrumGrid, Result<f64, Failure>) = match a.k_max {
        Some(k_max) => {
            let spec = spectrum_numeric(&s, a.tentative, k_max, a.bins, &cfg)?;
            let measured = band_limit_measured(&spec, a.eps).map(|b| b.value).map_err(Failure::from);
            (spec, measured)
        }
        None => {
            let (b, spec) = band_limit_measured_auto(&s, a.tentative, a.eps, a.bins, &cfg)?;
            (spec, Ok(b.value))
        }
    };
    let measured_k = measured.as_ref().ok().copied();

    let mut run = Run::new(&prefix(cli, "spectrum"), "spectrum", params(cli, a), Some(&s));
    if cli.format.csv() {
        let mut csv = Csv::new(&["k_tau", "re", "im", "abs"]);
        for (k, g) in spec.k_tau.iter().zip(&spec.values) {
            csv.row(&[*k, g.re, g.im, g.norm()]);
        }
        run.write("csv", &csv.into_bytes())?;
    }
    if cli.format.f32() {
        run.write("f32", &f32_le(spec.values.iter().map(|g| g.norm())))?;
    }
    run.finish(json!({
        "scenario": scenario_value(&s),
        "tentative": a.tentative,
        "eps_rel": a.eps,
        "k_max": spec.k_max(),
        "bins": spec.len(),
        "measured_K": measured_k,
        "chirp_K": chirp,
        "no_alias": verdicts(&s, n, &[("measured", measured_k), ("chirp", Some(chirp))])?,
        "error_estimate": spec.error_estimate,
        "nodes_used": spec.nodes_used,
    }))?;
    measured.map(|_| ())
}

/// Closed-form band limit of the scenario's array family.
fn closed_form(s: &Scenario, t: Position) -> Result<Value, Failure> {
    Ok(match s.curve {
        ArrayCurve::CircularArc { half_aperture, .. } => {
            let sep = separation(s.source, t);
            let ca = CircularScenario::from_scenario(s)?;
            json!({
                "kind": "circular",
                "R": sep.radius,
                "theta": sep.angle,
                "Omega": ca.visual_aperture(sep.angle),
                "K_ca": chirp_af::circular::band_limit_ca(sep.radius, sep.angle, half_aperture, s.wavenumber).value,
            })
        }
        ArrayCurve::LineSegment { length } => {
            let m = mismatch(PolarPosition::from(s.source), PolarPosition::from(t))?;
            json!({
                "kind": "ula",
                "Delta": m.delta,
                "Omega": m.omega,
                "K_ula": band_limit_ula(m, length, s.wavenumber).value,
            })
        }
    })
}

fn bandlimit(cli: &Cli, a: &BandlimitArgs) -> CmdResult {
    let s = load_scenario(cli)?;
    let n = antennas(&s, a.discrete)?;
    let chirp = band_limit_chirp(&s, a.tentative, a.search_points)?.value;
    let measured = if a.no_measured {
        None
    } else {
        Some(band_limit_measured_auto(&s, a.tentative, a.eps, a.bins, &QuadratureConfig::default())?.0.value)
    };
    let doc = json!({
        "tentative": a.tentative,
        "chirp_K": chirp,
        "measured_K": measured,
        "eps_rel": a.eps,
        "closed_form": closed_form(&s, a.tentative)?,
        "critical_step": critical_step(chirp),
        "no_alias": verdicts(&s, n, &[("measured", measured), ("chirp", Some(chirp))])?,
    });
    emit_json(cli, "bandlimit", params(cli, a), Some(&s), doc)
}

fn directions(count: usize) -> Vec<f64> {
    (0..count).map(|i| -PI + TAU * i as f64 / count as f64).collect()
}

/// Radii along `dir` from `source` where the folding test changes value.
fn ula_crossings(s: &Scenario, length: f64, n: usize, dir: f64, window: f64, steps: usize) -> Vec<f64> {
    let src = PolarPosition::from(s.source);
    let at = |rho: f64| s.source + Position::from_polar(rho, dir);
    let aliased = |rho: f64| -> Option<bool> {
        let m = mismatch(src, PolarPosition::from(at(rho))).ok()?;
        Some(ula_aliasing(m, length, n, s.wavenumber))
    };
    let mut out = Vec::new();
    let h = window / steps as f64;
    let mut prev = (h, aliased(h));
    for i in 2..=steps {
        let rho = h * i as f64;
        let cur = aliased(rho);
        if let (Some(p), Some(c)) = (prev.1, cur) {
            if p != c {
                let (mut lo, mut hi) = (prev.0, rho);
                while hi - lo > 1e-10 * hi {
                    let mid = 0.5 * (lo + hi);
                    if aliased(mid) == Some(p) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                out.push(0.5 * (lo + hi));
            }
        }
        prev = (rho, cur);
    }
    out
}

fn alias_locus(cli: &Cli, a: &AliasLocusArgs) -> CmdResult {
    let s = load_scenario(cli)?;
    let n = antennas(&s, a.discrete)?.ok_or_else(|| Failure::Input("alias-locus needs N".into()))?;
    if a.angles == 0 || a.steps < 2 {
        return Err(Failure::Input("--angles must be positive and --steps at least 2".into()));
    }
    let mut csv = Csv::new(&["index", "angle", "x", "y"]);
    let meta = match s.curve {
        ArrayCurve::CircularArc { radius, half_aperture } => {
            let window = a.window.unwrap_or(radius / chirp_af::circular::DEFAULT_GUARD);
            let delta = SamplingGrid::new(&s.curve, n, s.placement)?.step();
            // θ is the direction of x_s − x̃_s, so the front lies at x_s − r(cos θ, sin θ)
            for theta in directions(a.angles) {
                for (m, r) in alias_fronts(delta, theta, half_aperture, s.wavelength(), window).iter().enumerate() {
                    let p = s.source - Position::from_polar(*r, theta);
                    csv.row(&[(m + 1) as f64, theta, p.x, p.y]);
                }
            }
            json!({"kind": "circular", "index": "front multiple m", "angle": "theta_ss~", "window": window, "delta": delta})
        }
        ArrayCurve::LineSegment { length } => {
            let window = a.window.unwrap_or(3.0 * s.source.norm());
            for dir in directions(a.angles) {
                for (i, rho) in ula_crossings(&s, length, n, dir, window, a.steps).iter().enumerate() {
                    let p = s.source + Position::from_polar(*rho, dir);
                    csv.row(&[(i + 1) as f64, dir, p.x, p.y]);
                }
            }
            json!({"kind": "ula", "index": "threshold crossing along the ray", "angle": "direction from x_s", "window": window})
        }
    };
    let mut run = Run::new(&prefix(cli, "alias-locus"), "alias-locus", params(cli, a), Some(&s));
    run.write("csv", &csv.into_bytes())?;
    run.finish(json!({"scenario": scenario_value(&s), "N": n, "locus": meta}))?;
    Ok(())
}

fn ca_analyze(cli: &Cli, a: &CaAnalyzeArgs) -> CmdResult {
    let s = load_scenario(cli)?;
    let n = antennas(&s, a.discrete)?;
    let mut ca = CircularScenario::from_scenario(&s)?.with_guard(a.guard)?;
    if let Some(n) = n {
        ca = ca.with_antennas(n);
    }
    let r_max = match n {
        Some(_) => Some(ca.alias_radius(a.theta)?),
        None => None,
    };
    let limit = 2.0 * ca.radius / ca.guard;
    let window = a
        .window
        .unwrap_or_else(|| r_max.filter(|r| r.is_finite()).map_or(20.0, |r| 2.5 * r).min(limit));
    if a.samples < 2 || !(window > 0.0) {
        return Err(Failure::Input("--samples must be at least 2 and --window positive".into()));
    }
    let multiples = match (ca.step(), r_max) {
        (Some(delta), Some(_)) => alias_fronts(delta, a.theta, ca.half_aperture, s.wavelength(), window),
        _ => Vec::new(),
    };
    let radius = a.radius.unwrap_or(window);
    let series = |r: f64| match n {
        Some(_) => ca.series_discrete(r, a.theta, s.placement),
        None => ca.series_continuous(r, a.theta),
    };
    let matched = series(0.0)?.value.re;
    let mut samples = Vec::with_capacity(a.samples);
    for i in 0..a.samples {
        let r = window * i as f64 / (a.samples - 1) as f64;
        let v = series(r)?;
        let z: Complex64 = v.value;
        samples.push(json!({
            "R": r,
            "re": z.re,
            "im": z.im,
            "abs": z.norm(),
            "normalized": z.norm() / matched,
            "n_max": v.n_max,
            "tail_bound": v.tail_bound,
            "truncation_warning": v.truncation_warning,
        }));
    }
    let doc = json!({
        "theta": a.theta,
        "Omega": ca.visual_aperture(a.theta),
        "K_ca": ca.band_limit(radius, a.theta).value,
        "K_ca_radius": radius,
        "N": n,
        "R_max": r_max,
        "window": window,
        "multiples": multiples,
        "series": {
            "kind": if n.is_some() { "discrete" } else { "continuous" },
            "matched": matched,
            "samples": samples,
        },
    });
    emit_json(cli, "ca-analyze", params(cli, a), Some(&s), doc)
}

fn ula_analyze(cli: &Cli, a: &UlaAnalyzeArgs) -> CmdResult {
    let s = load_scenario(cli)?;
    let mut ula = UlaScenario::from_scenario(&s)?.with_guard(a.guard)?;
    if let Some(n) = antennas(&s, a.discrete)? {
        ula = ula.with_antennas(n);
    }
    let r = ula.analyze(s.source, a.tentative)?;
    let doc = json!({
        "Delta": r.mismatch.delta,
        "Omega": r.mismatch.omega,
        "K_ula": r.band_limit,
        "aliasing": r.aliasing,
        "radial_bounds": r.radial_bounds.map(|b| json!([b.lower, b.upper])),
        "fresnel_warning": r.fresnel_warning,
    });
    emit_json(cli, "ula-analyze", params(cli, a), Some(&s), doc)
}

fn validate(cli: &Cli, a: &ValidateArgs) -> CmdResult {
    let cfg = ValidationConfig {
        seed: cli.seed,
        quick: a.quick,
    };
    let ids: Vec<u8> = if a.criteria.is_empty() {
        CRITERIA.iter().map(|(id, _)| *id).collect()
    } else {
        a.criteria.clone()
    };
    let mut reports = Vec::with_capacity(ids.len());
    for id in ids {
        let r = run_criterion(id, &cfg)?;
        eprintln!("{}", r.summary_line());
        reports.push(r);
    }
    let passed = reports.iter().all(|r| r.passed);
    let doc = json!({"seed": cfg.seed, "quick": cfg.quick, "passed": passed, "criteria": reports});
    emit_json(cli, "validate", params(cli, a), None, doc)?;
    if passed {
        Ok(())
    } else {
        Err(Failure::Rejected)
    }
}
