mod args;
mod suites;

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::Parser;
use localizer::hemisphere::{self, CurveOptions, CurveStatus};
use localizer::output::{self, CheckReport, HeatmapOptions, RunInfo};
use localizer::par::ExecPolicy;
use localizer::pseudospectra::{Evaluator, HermitianTuple, PseudospectrumSample, Which, Window};
use localizer::scan::{
    bisect_zero, grid_scan_with, BisectOptions, Embedding, Ray, Region, ScanGrid,
};
use localizer::zoo::{universal_pair_pseudospectra, z_grid_with_spacing, ZooSpec};

use crate::args::{
    parse_list, parse_region, parse_t_range, Cli, Command, CommonArgs, CurveArgs, Formats, ReportArgs, ScanArgs,
    SliceArgs, SuiteArgs, ZooArgs,
};

/// Exit status for a check suite that ran but did not pass.
const EXIT_SUITE_FAILED: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    if cli.schema {
        println!("{}", output::SCHEMA);
        return Ok(ExitCode::SUCCESS);
    }
    let common = &cli.common;
    let Some(command) = cli.command else {
        bail!("no command given; run with --help for the list");
    };
    let passed = match command {
        Command::Scan(a) => cmd_scan(common, &a, &common.out).map(|_| true)?,
        Command::Slice(a) => cmd_slice(common, &a).map(|_| true)?,
        Command::Curve(a) => cmd_curve(common, &a, &common.out).map(|_| true)?,
        Command::OracleCheck(a) => cmd_suite(common, &a, SuiteKind::Oracle, &common.out)?,
        Command::PropertySuite(a) => cmd_suite(common, &a, SuiteKind::Property, &common.out)?,
        Command::Report(a) => cmd_report(common, &a)?,
    };
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_SUITE_FAILED)
    })
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create output directory {}", dir.display()))
}

fn write_file(path: &Path, body: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
    let file = File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
    let mut w = BufWriter::new(file);
    body(&mut w)?;
    w.flush()?;
    Ok(())
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    write_file(path, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        writeln!(w)?;
        Ok(())
    })
}

/// Evaluates probes either through an explicit tuple or, for the universal
/// pair, by minimizing the closed fiber formulas.
enum Sampler<'a> {
    Tuple(Evaluator<'a>),
    Fibers(Vec<f64>),
}

impl Sampler<'_> {
    fn sample(&self, lambda: &[f64], which: Which) -> localizer::Result<PseudospectrumSample> {
        match self {
            Sampler::Tuple(ev) => ev.sample(lambda, which, Window::default()),
            Sampler::Fibers(z_grid) => {
                let v = universal_pair_pseudospectra(lambda[0], lambda[1], z_grid)?;
                Ok(PseudospectrumSample {
                    lambda: lambda.to_vec(),
                    mu_c: which.clifford.then_some(v.mu_c),
                    mu_q: which.quadratic.then_some(v.mu_q),
                    mu_w: None,
                })
            }
        }
    }

    fn d(&self) -> usize {
        match self {
            Sampler::Tuple(ev) => ev.tuple().d(),
            Sampler::Fibers(_) => 2,
        }
    }
}

/// Builds the tuple for every zoo entry except the universal pair, which is
/// handled by fiber minimization.
fn build_tuple(spec: &ZooSpec) -> Result<Option<HermitianTuple>> {
    match spec {
        ZooSpec::UniversalPair { .. } => Ok(None),
        other => Ok(Some(other.build()?)),
    }
}

fn make_sampler<'a>(spec: &ZooSpec, zoo: &ZooArgs, tuple: Option<&'a HermitianTuple>, which: Which) -> Result<Sampler<'a>> {
    match tuple {
        Some(t) => Ok(Sampler::Tuple(Evaluator::new(t)?)),
        None => {
            if which.windowed {
                bail!("the windowed pseudospectrum needs an explicit tuple; drop 'w' from --which for {}", spec.name());
            }
            Ok(Sampler::Fibers(z_grid_with_spacing(zoo.h_z)?))
        }
    }
}

fn run_info(spec: &ZooSpec) -> Result<RunInfo> {
    let mut notes = Vec::new();
    if let ZooSpec::Hemisphere { b, .. } = spec {
        if hemisphere::b_out_of_validity_range(*b) {
            let note = format!(
                "b = {b} exceeds {}: outside the range where the surface description is claimed",
                hemisphere::B_VALIDITY_LIMIT
            );
            eprintln!("warning: {note}");
            notes.push(note);
        }
    }
    if let ZooSpec::UniversalPair { fibers } = spec {
        notes.push(format!("evaluated by minimizing over {fibers} fibers in [-1, 1]"));
    }
    Ok(RunInfo {
        zoo: Some(serde_json::to_value(spec)?),
        notes,
    })
}

fn parse_plane(plane: Option<&str>, region_d: usize, tuple_d: usize) -> Result<Embedding> {
    let Some(text) = plane else {
        if region_d != tuple_d {
            bail!(
                "region has {region_d} axes but the tuple has {tuple_d} operators; pass --plane to choose probe axes"
            );
        }
        return Ok(Embedding::identity(tuple_d));
    };
    let axes: Vec<usize> = text
        .split(',')
        .map(|p| p.trim().parse::<usize>().with_context(|| format!("--plane: '{p}' is not an axis index")))
        .collect::<Result<_>>()?;
    if axes.len() != region_d {
        bail!("--plane lists {} axes for a {region_d}-dimensional region", axes.len());
    }
    if let Some(&bad) = axes.iter().find(|&&a| a >= tuple_d) {
        bail!("--plane axis {bad} is out of range for a tuple of {tuple_d} operators");
    }
    Ok(Embedding {
        origin: vec![0.0; tuple_d],
        axes: axes
            .iter()
            .map(|&a| (0..tuple_d).map(|k| if k == a { 1.0 } else { 0.0 }).collect())
            .collect(),
    })
}

fn write_grid(dir: &Path, grid: &ScanGrid, info: &RunInfo, formats: Formats) -> Result<()> {
    create_dir(dir)?;
    if formats.csv {
        write_file(&dir.join("grid.csv"), |w| Ok(output::write_grid_csv(grid, w)?))?;
    }
    if formats.json {
        write_json(&dir.join("grid.json"), &output::grid_json(grid, info))?;
    }
    if formats.svg {
        let opts = HeatmapOptions {
            measure: grid.default_measure(),
            overlay_epsilon: Some(grid.epsilon),
            ..HeatmapOptions::default()
        };
        let svg = output::heatmap_svg(grid, &opts)?;
        fs::write(dir.join("heatmap.svg"), svg)?;
    }
    Ok(())
}

fn scan_grid(
    sampler: &Sampler<'_>,
    region: &Region,
    embedding: &Embedding,
    which: Which,
    policy: ExecPolicy,
    epsilon: Option<f64>,
) -> Result<ScanGrid> {
    Ok(grid_scan_with(region, which, policy, epsilon, |p| {
        sampler.sample(&embedding.apply(p), which)
    })?)
}

fn cmd_scan(common: &CommonArgs, args: &ScanArgs, dir: &Path) -> Result<()> {
    let formats = common.formats()?;
    let which = common.which()?;
    let spec = args.zoo.spec()?;
    let region = parse_region(&args.region, &args.res)?;
    let tuple = build_tuple(&spec)?;
    let sampler = make_sampler(&spec, &args.zoo, tuple.as_ref(), which)?;
    let embedding = parse_plane(args.plane.as_deref(), region.d(), sampler.d())?;
    let info = run_info(&spec)?;
    let grid = scan_grid(&sampler, &region, &embedding, which, common.policy(), common.epsilon()?)?;
    write_grid(dir, &grid, &info, formats)?;
    let zeros = grid.zero_flags().iter().filter(|&&f| f).count();
    println!(
        "scanned {} points of {} (epsilon {:e}): {zeros} in the zero set; wrote {}",
        region.len(),
        spec.name(),
        grid.epsilon,
        dir.display()
    );
    Ok(())
}

fn cmd_slice(common: &CommonArgs, args: &SliceArgs) -> Result<()> {
    let formats = common.formats()?;
    let which = common.which()?;
    let spec = args.zoo.spec()?;
    let tuple = build_tuple(&spec)?;
    let sampler = make_sampler(&spec, &args.zoo, tuple.as_ref(), which)?;
    let d = sampler.d();
    let direction = parse_list(&args.direction, "--direction")?;
    let origin = match &args.origin {
        Some(o) => parse_list(o, "--origin")?,
        None => vec![0.0; d],
    };
    if direction.len() != d || origin.len() != d {
        bail!("--origin and --direction need {d} coordinates for {}", spec.name());
    }
    let len = direction.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !(len > 0.0 && len.is_finite()) {
        bail!("--direction must be a nonzero vector");
    }
    let ray = Ray::new(origin, direction.iter().map(|x| x / len).collect())?;
    let (t_lo, t_hi) = parse_t_range(&args.t)?;
    if args.samples < 2 {
        bail!("--samples must be at least 2");
    }
    let ts: Vec<f64> = (0..args.samples)
        .map(|k| t_lo + (t_hi - t_lo) * k as f64 / (args.samples - 1) as f64)
        .collect();
    let samples = localizer::par::map_indexed(common.policy(), ts.len(), |i| sampler.sample(&ray.at(ts[i]), which))
        .into_iter()
        .collect::<localizer::Result<Vec<_>>>()?;

    let mut info = run_info(&spec)?;
    let crossing = if args.bisect {
        let Sampler::Tuple(ev) = &sampler else {
            bail!("--bisect needs an explicit tuple, not {}", spec.name());
        };
        let opts = BisectOptions {
            epsilon: common.epsilon()?.unwrap_or(BisectOptions::default().epsilon),
            ..BisectOptions::default()
        };
        match bisect_zero(ev, &ray, t_lo, t_hi, &opts) {
            Ok(r) => {
                println!("crossing at t = {:.12} (mu_c {:.3e}, {:?})", r.t, r.mu_c, r.method);
                Some(r)
            }
            Err(localizer::Error::NoDip { min_seen, .. }) => {
                let note = format!("no crossing on [{t_lo}, {t_hi}]; smallest mu_c seen {min_seen:e}");
                println!("{note}");
                info.notes.push(note);
                None
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };

    let dir = &common.out;
    create_dir(dir)?;
    if formats.csv {
        write_file(&dir.join("slice.csv"), |w| Ok(output::write_slice_csv(&ts, &samples, w)?))?;
    }
    if formats.json {
        write_json(&dir.join("slice.json"), &output::slice_json(&ray, &ts, &samples, crossing.as_ref(), &info))?;
    }
    println!("sampled {} points along the ray; wrote {}", ts.len(), dir.display());
    Ok(())
}

/// `(x, z, admissible)` on a lattice covering `extent`: the points satisfying
/// the sign condition on `f_b` inside `0 ≤ z ≤ b`, `x ≤ 1`.
fn sign_shading(b: f64, extent: [f64; 4], res: usize) -> Vec<(f64, f64, bool)> {
    let [x0, x1, z0, z1] = extent;
    let mut out = Vec::with_capacity(res * res);
    for i in 0..res {
        for j in 0..res {
            let x = x0 + (x1 - x0) * i as f64 / (res - 1) as f64;
            let z = z0 + (z1 - z0) * j as f64 / (res - 1) as f64;
            let f = hemisphere::f_poly_b(b, x, z);
            let sign_ok = if z < b { f >= 0.0 } else { f <= 0.0 };
            out.push((x, z, sign_ok && (0.0..=b).contains(&z) && x <= 1.0));
        }
    }
    out
}

fn cmd_curve(common: &CommonArgs, args: &CurveArgs, dir: &Path) -> Result<()> {
    let formats = common.formats()?;
    let bs = parse_list(&args.b, "--b")?;
    if args.z_samples < 2 {
        bail!("--z-samples must be at least 2");
    }
    create_dir(dir)?;
    for b in bs {
        if !(b.is_finite() && b >= 0.0) {
            bail!("--b values must be >= 0, got {b}");
        }
        let mut notes = Vec::new();
        if hemisphere::b_out_of_validity_range(b) {
            let note = format!("b = {b} exceeds {}: results are outside the claimed range", hemisphere::B_VALIDITY_LIMIT);
            eprintln!("warning: {note}");
            notes.push(note);
        }
        let experimental = b != 1.0;
        if experimental && b != 0.0 {
            notes.push("general b: the surface polynomial is taken as given and membership is numeric".into());
        }
        let z_top = b.max(1.0) + 0.25;
        let zs: Vec<f64> = (0..args.z_samples)
            .map(|k| -0.25 + (z_top + 0.25) * k as f64 / (args.z_samples - 1) as f64)
            .collect();
        let opts = CurveOptions {
            residual_n: (args.n_trunc > 0).then_some(args.n_trunc),
            policy: common.policy(),
            ..CurveOptions::default()
        };
        let points = hemisphere::curve_trace(b, &zs, &opts)?;
        let info = RunInfo {
            zoo: Some(serde_json::to_value(ZooSpec::Hemisphere { b, n: args.n_trunc.max(4) })?),
            notes,
        };
        let stem = format!("curve_b{b:.2}");
        if formats.csv {
            write_file(&dir.join(format!("{stem}.csv")), |w| Ok(output::write_curve_csv(&points, w)?))?;
        }
        if formats.json {
            write_json(&dir.join(format!("{stem}.json")), &output::curve_json(b, &points, experimental, &info))?;
        }
        if formats.svg {
            let extent = [0.0, 1.2, -0.25, z_top];
            let svg = output::curve_svg(b, &points, &sign_shading(b, extent, 97), extent);
            fs::write(dir.join(format!("{stem}.svg")), svg)?;
        }
        let accepted = points.iter().filter(|p| p.is_accepted()).count();
        let degenerate = points.iter().any(|p| p.status == CurveStatus::Degenerate);
        println!(
            "b = {b}: {accepted} accepted of {} candidates{}",
            points.len(),
            if degenerate { " (degenerate disk r <= 1 at z = 0)" } else { "" }
        );
    }
    println!("wrote curves to {}", dir.display());
    Ok(())
}

#[derive(Clone, Copy)]
enum SuiteKind {
    Oracle,
    Property,
}

fn cmd_suite(common: &CommonArgs, args: &SuiteArgs, kind: SuiteKind, dir: &Path) -> Result<bool> {
    if args.cases == 0 {
        bail!("--cases must be positive");
    }
    let report = match kind {
        SuiteKind::Oracle => suites::oracle_check(common.seed, args.cases, common.policy())?,
        SuiteKind::Property => suites::property_suite(common.seed, args.cases)?,
    };
    emit_report(&report, dir, common.formats()?)?;
    Ok(report.passed())
}

fn emit_report(report: &CheckReport, dir: &Path, formats: Formats) -> Result<()> {
    print!("{}", report.to_text());
    if formats.json {
        create_dir(dir)?;
        write_json(&dir.join(format!("{}.json", report.suite)), &report.to_json())?;
    }
    Ok(())
}

fn cmd_report(common: &CommonArgs, args: &ReportArgs) -> Result<bool> {
    if args.res < 2 {
        bail!("--res must be at least 2");
    }
    let out = &common.out;
    let res = args.res.to_string();
    let zoo = |name: &str| ZooArgs {
        zoo: name.into(),
        b: 1.0,
        z: 0.5,
        n_trunc: 256,
        half_width: 12.0,
        points: None,
        h_z: 1e-3,
    };
    let mut scans = vec![
        (
            "pauli".to_string(),
            ScanArgs {
                zoo: zoo("pauli"),
                region: "-1.5:1.5^3".into(),
                res: res.clone(),
                plane: None,
            },
        ),
        (
            "universal_pair".to_string(),
            ScanArgs {
                zoo: zoo("universal_pair"),
                region: "-2:2^2".into(),
                res: res.clone(),
                plane: None,
            },
        ),
        (
            "hemisphere_b1".to_string(),
            ScanArgs {
                zoo: zoo("hemisphere"),
                region: "0:1.2,-0.4:1.2".into(),
                res: res.clone(),
                plane: Some("0,2".into()),
            },
        ),
    ];
    for z in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        let mut a = zoo("two_projection");
        a.z = z;
        scans.push((
            format!("two_projection_z{z:.2}"),
            ScanArgs {
                zoo: a,
                region: "-2:2^2".into(),
                res: res.clone(),
                plane: None,
            },
        ));
    }
    for (name, a) in &scans {
        cmd_scan(common, a, &out.join(name))?;
    }
    let curves = CurveArgs {
        b: "0,1,2,2.05".into(),
        z_samples: 401,
        n_trunc: 200,
    };
    cmd_curve(common, &curves, &out.join("curves"))?;
    let suite = SuiteArgs { cases: args.cases };
    let checks = out.join("checks");
    let oracle = cmd_suite(common, &suite, SuiteKind::Oracle, &checks)?;
    let property = cmd_suite(common, &suite, SuiteKind::Property, &checks)?;
    println!("report written to {}", out.display());
    Ok(oracle && property)
}
