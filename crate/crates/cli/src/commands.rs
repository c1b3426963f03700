use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use ballmaps_core::maps::{
    lipschitz_boundary_constant, radial_deviation_sweep, sweep_directions, sweep_times, CatalogMap, SweepRow,
};
use ballmaps_core::metric::{dist_from_origin, estimate_morse_constant, hausdorff_pseudo_distance};
use ballmaps_core::rescaling::{
    cartan_sequence, rescale as run_pipeline, BuildOptions, RescaleOptions, SequencePair, TraceDocument,
};
use ballmaps_core::{
    Automorphism, BallMap, BallPoint, Complex64, ComposedMap, ProperMapSpec, RadialBoundConstants, SampledCurve,
};
use serde::Serialize;

use crate::error::CliError;
use crate::output::{cell, emit, read, short, short_complex, sig, to_json};
use crate::{Format, MapArgs};

/// A resolved map together with the name it was given on the command line.
#[derive(Debug)]
struct LoadedMap {
    label: String,
    map: ComposedMap,
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn resolve_catalog(name: &str, m: Option<usize>, big_m: Option<usize>) -> Result<CatalogMap, CliError> {
    let name = name.trim();
    let spelled = if name.contains([':', '(']) {
        name.to_string()
    } else {
        match name.to_ascii_lowercase().as_str() {
            "linear" => match (m, big_m) {
                (Some(m), Some(big_m)) => format!("linear:{m},{big_m}"),
                _ => return Err(CliError::Usage("`linear` needs --m and --M".into())),
            },
            "whitney" => format!("whitney:{}", m.unwrap_or(2)),
            "power" => return Err(CliError::Usage("`power` needs a degree: power:m,d".into())),
            _ => name.to_string(),
        }
    };
    Ok(spelled.parse::<CatalogMap>()?)
}

fn load_map(args: &MapArgs) -> Result<LoadedMap, CliError> {
    let (label, spec) = match (&args.map, &args.spec_file) {
        (Some(name), None) => {
            let entry = resolve_catalog(name, args.m, args.big_m)?;
            (entry.to_string(), entry.spec()?)
        }
        (None, Some(path)) => (path.display().to_string(), parse_json::<ProperMapSpec>(path)?),
        _ => return Err(CliError::Usage("give exactly one of --map or --spec-file".into())),
    };
    if args.m.is_some_and(|m| m != spec.domain_dim()) || args.big_m.is_some_and(|n| n != spec.target_dim()) {
        return Err(CliError::Usage(format!(
            "{label} maps C^{} -> C^{}, which disagrees with --m/--M",
            spec.domain_dim(),
            spec.target_dim()
        )));
    }
    Ok(LoadedMap {
        label,
        map: ComposedMap::new(spec),
    })
}

fn parse_point(s: &str) -> Result<Vec<Complex64>, CliError> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<Complex64>()
                .map_err(|_| CliError::Usage(format!("cannot parse `{p}` as a complex number")))
        })
        .collect()
}

pub fn dist(z: &str, w: &str, m: Option<usize>) -> Result<(), CliError> {
    let (z, w) = (parse_point(z)?, parse_point(w)?);
    if z.len() != w.len() || m.is_some_and(|m| m != z.len()) {
        return Err(CliError::Usage(format!(
            "dimension mismatch: |z| has {} coordinates, |w| has {}",
            z.len(),
            w.len()
        )));
    }
    let d = ballmaps_core::dist_ball(&BallPoint::new(z)?, &BallPoint::new(w)?)?;
    println!("{}", sig(d, 15));
    Ok(())
}

pub struct SweepConfig {
    pub map: MapArgs,
    pub directions: usize,
    pub t_grid: Option<String>,
    pub density: usize,
    pub trials: usize,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct SweepDocument<'a> {
    format: &'static str,
    version: u32,
    map: &'a str,
    directions: &'a [Vec<Complex64>],
    t_values: &'a [f64],
    rows: &'a [SweepRow],
    sup: f64,
    constants: RadialBoundConstants,
    beta: f64,
    bound: f64,
    within_bound: bool,
}

fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("cannot parse `{p}` as a time")))
        })
        .collect()
}

pub fn radial_sweep(cfg: &SweepConfig) -> Result<(), CliError> {
    let LoadedMap { label, map } = load_map(&cfg.map)?;
    if cfg.directions == 0 {
        return Err(CliError::Usage("--directions must be positive".into()));
    }
    let t_values = match &cfg.t_grid {
        Some(s) => parse_grid(s)?,
        None => sweep_times(),
    };
    let dirs = sweep_directions(map.domain_dim(), cfg.directions);
    let sweep = radial_deviation_sweep(&map, &dirs, &t_values)?;

    let c = lipschitz_boundary_constant(&map, cfg.density)?.c;
    let base_offset = dist_from_origin(&map.eval(&BallPoint::origin(map.domain_dim()))?)?;
    let mut constants = RadialBoundConstants { c, d: 0.0, base_offset };
    let beta = constants.beta();
    constants.d = estimate_morse_constant(map.target_dim(), 1.0, beta, base_offset, cfg.trials, cfg.seed)?.d;
    let bound = constants.radial_bound();
    let within_bound = sweep.sup <= bound;

    let text = match cfg.format {
        Format::Json => to_json(&SweepDocument {
            format: "ballmaps-radial-sweep",
            version: 1,
            map: &label,
            directions: &sweep.directions,
            t_values: &sweep.t_values,
            rows: &sweep.rows,
            sup: sweep.sup,
            constants,
            beta,
            bound,
            within_bound,
        })?,
        Format::Csv => {
            let mut s = String::from("# ballmaps radial-sweep v1\n");
            let _ = writeln!(s, "# map={label} directions={} t_points={}", dirs.len(), t_values.len());
            s.push_str("direction,t,deviation\n");
            for r in &sweep.rows {
                let _ = writeln!(s, "{},{},{}", r.direction, cell(r.t), cell(r.deviation));
            }
            for (k, v) in [
                ("sup", sweep.sup),
                ("C", c),
                ("beta", beta),
                ("D", constants.d),
                ("base_offset", base_offset),
                ("bound", bound),
            ] {
                let _ = writeln!(s, "# {k}={}", cell(v));
            }
            let _ = writeln!(s, "# within_bound={within_bound}");
            s
        }
    };
    emit(cfg.out.as_deref(), &text)?;
    if !within_bound {
        eprintln!(
            "warning: sup deviation {} exceeds the bound {} (empirical D = {})",
            short(sweep.sup),
            short(bound),
            short(constants.d)
        );
    }
    Ok(())
}

pub struct RescaleConfig {
    pub map: MapArgs,
    pub seq: String,
    pub n_start: u32,
    pub n_end: u32,
    pub tail: usize,
    pub tol: f64,
    pub seed: u64,
    pub allow_non_escaping: bool,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

pub fn rescale(cfg: &RescaleConfig) -> Result<(), CliError> {
    let LoadedMap { label, map } = load_map(&cfg.map)?;
    let pairs: Vec<SequencePair> = if cfg.seq == "cartan" {
        cartan_sequence(map.domain_dim(), map.target_dim(), cfg.n_start, cfg.n_end)?
    } else {
        parse_json(Path::new(&cfg.seq))?
    };
    let opts = RescaleOptions {
        build: BuildOptions {
            seed: cfg.seed,
            allow_non_escaping: cfg.allow_non_escaping,
            ..BuildOptions::default()
        },
        tail: cfg.tail,
        tol_pattern: cfg.tol,
        seed: cfg.seed,
        ..RescaleOptions::default()
    };
    let outcome = run_pipeline(&map, &pairs, &opts)?;
    let doc = TraceDocument::new(map, outcome);
    if let Some(out) = &cfg.out {
        emit(Some(out), &(doc.to_json()? + "\n"))?;
    }
    match cfg.format {
        Some(Format::Json) if cfg.out.is_none() => emit(None, &(doc.to_json()? + "\n")),
        Some(Format::Csv) => emit(None, &trace_csv(&doc)),
        _ => emit(None, &summary(&label, &doc)),
    }
}

fn trace_csv(doc: &TraceDocument) -> String {
    let mut s = String::from("# ballmaps rescale-trace v1\n");
    s.push_str("n,t,siegel_time,route,symmetry_residual,conjugation_residual,compactness_distance,phi_gap,psi_gap,jet_error\n");
    for e in &doc.outcome.trace.entries {
        let conj = e.conjugation_residual.map(cell).unwrap_or_default();
        let _ = writeln!(
            s,
            "{},{},{},{:?},{},{},{},{},{},{}",
            e.n,
            cell(e.t),
            cell(e.siegel_time),
            e.route,
            cell(e.symmetry_residual),
            conj,
            cell(e.compactness_distance),
            cell(e.phi_gap),
            cell(e.psi_gap),
            cell(e.jet_g.error_norm)
        );
    }
    s
}

fn matrix_lines(s: &mut String, name: &str, rows: &[Vec<Complex64>]) {
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|&c| short_complex(c)).collect();
        let head = if i == 0 { name } else { "" };
        let _ = writeln!(s, "  {head:<3}[{}]", cells.join(", "));
    }
}

/// Human-readable account of a finished pipeline run.
pub fn summary(label: &str, doc: &TraceDocument) -> String {
    let o = &doc.outcome;
    let entries = &o.trace.entries;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "map: {label} (C^{} -> C^{})",
        o.trace.domain_dim(),
        o.trace.target_dim()
    );
    if let (Some(first), Some(last)) = (entries.first(), entries.last()) {
        let _ = writeln!(
            s,
            "sequence: n = {}..{} ({} entries), t_max = {}",
            first.n,
            last.n,
            entries.len(),
            short(last.t)
        );
    }
    let sym = entries.iter().map(|e| e.symmetry_residual).fold(0.0, f64::max);
    let _ = writeln!(s, "symmetry residual: {}", short(sym));
    let _ = writeln!(
        s,
        "escape: {}",
        if o.trace.escape.escaping { "escaping" } else { "NOT escaping, limit claims unsupported" }
    );
    if let Some(c) = &o.trace.compactness {
        let _ = writeln!(
            s,
            "compactness: max dist(h_n(0), 0) = {} against bound {}{}",
            short(c.max_distance),
            short(c.bound),
            if c.exceeded { "  [FLAG: empirical D too small]" } else { "" }
        );
    }
    let _ = writeln!(s, "scaling law: max relative error {}", short(o.scaling.max_relative_error));
    let _ = writeln!(
        s,
        "limit: tail {} max difference {}, decay slope {}",
        o.limit.cauchy.tail,
        short(o.limit.cauchy.max_difference),
        o.limit.decay.slope.map(short).unwrap_or_else(|| "n/a".into())
    );
    let nf = &o.normal_form;
    let _ = writeln!(s, "lambda: {} (phase {})", short(nf.lambda), short(nf.lambda_phase));
    let r = &nf.residuals;
    let _ = writeln!(
        s,
        "normal form: pattern {}, |U*U - lambda I| {}, |L| {}",
        short(r.vanishing_pattern),
        short(r.unitarity),
        short(r.l_norm)
    );
    matrix_lines(&mut s, "U", &nf.u);
    let _ = writeln!(
        s,
        "boundary identity: quadratic {}, isometry {} ({} samples)",
        short(o.boundary.quadratic),
        short(o.boundary.isometry),
        o.boundary.samples
    );
    let _ = writeln!(
        s,
        "flattening: residual {} ({} samples), completion {}",
        short(o.flattening.flatten_residual),
        o.flattening.samples,
        short(o.flattening.completion_residual)
    );
    s
}

#[derive(Serialize)]
struct HausdorffRow {
    value: f64,
    slack: f64,
}

pub fn hausdorff(a: &Path, b: &Path, format: Format) -> Result<(), CliError> {
    let c1: SampledCurve = parse_json(a)?;
    let c2: SampledCurve = parse_json(b)?;
    let est = hausdorff_pseudo_distance(&c1, &c2)?;
    let text = match format {
        Format::Json => to_json(&HausdorffRow {
            value: est.value,
            slack: est.slack,
        })?,
        Format::Csv => format!("value,slack\n{},{}\n", cell(est.value), cell(est.slack)),
    };
    emit(None, &text)
}

pub fn morse(
    m: usize,
    alpha: f64,
    beta: f64,
    radius: f64,
    trials: usize,
    seed: u64,
    format: Option<Format>,
) -> Result<(), CliError> {
    let est = estimate_morse_constant(m, alpha, beta, radius, trials, seed)?;
    match format {
        Some(Format::Json) => emit(None, &to_json(&est)?),
        Some(Format::Csv) => emit(
            None,
            &format!(
                "d,slack,accepted,rejected\n{},{},{},{}\n",
                cell(est.d),
                cell(est.slack),
                est.accepted,
                est.rejected
            ),
        ),
        None => {
            println!("{}", sig(est.d, 17));
            Ok(())
        }
    }
}

pub fn verify_group(path: &Path, tol: f64) -> Result<(), CliError> {
    let g: Automorphism = parse_json(path)?;
    let residual = g.verify_membership();
    println!("dimension: {}", g.dim());
    println!("membership residual: {}", cell(residual));
    if residual <= tol {
        println!("member: yes");
        Ok(())
    } else {
        println!("member: no");
        Err(CliError::Rejected(format!(
            "matrix is not in PU({},1): residual {} exceeds {}",
            g.dim(),
            short(residual),
            short(tol)
        )))
    }
}

const CATALOG: [(&str, &str); 3] = [
    ("linear:m,M", "z -> (z, 0), C^m -> C^M"),
    ("whitney:m", "(z_1, ..., z_{m-1}, z_m z_1, ..., z_m z_m), C^m -> C^{2m-1}"),
    ("power:m,d", "all degree-d monomials with multinomial weights"),
];

pub fn catalog(args: &MapArgs) -> Result<(), CliError> {
    if args.map.is_none() && args.spec_file.is_none() {
        for (name, what) in CATALOG {
            println!("{name:<12} {what}");
        }
        return Ok(());
    }
    let LoadedMap { label, map } = load_map(args)?;
    let residual = map.spec.properness_residual()?;
    eprintln!("{label}: properness residual {}", short(residual));
    emit(None, &to_json(&map.spec)?)
}

pub fn report(path: &Path) -> Result<(), CliError> {
    let doc = TraceDocument::from_json(&read(path)?)?;
    emit(None, &summary(&path.display().to_string(), &doc))
}
