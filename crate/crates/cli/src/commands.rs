use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use whitext::curves::{curve_condition_scan, weighted_geodesic, CurveContext, PathSide};
use whitext::extension::{extend_set, ExtensionGeometry, ExtensionParams, ExtensionResult, InequalityReport};
use whitext::geometry::cantor::pt_f64;
use whitext::geometry::domain::{build_domain, VoxelDomain};
use whitext::geometry::{build_cantor_tube, read_voxd, write_voxd};
use whitext::perimeter::VoxelSet;
use whitext::whitney::{audit, export, whitney_decompose};

use crate::config::{DomainSpec, ExperimentConfig, RunSpec, SampleSpec, SetSpec};
use crate::error::CliError;
use crate::figures::{self, Canvas};
use crate::manifest::{Run, RunManifest, CONFIG, MANIFEST};
use crate::{Cli, Command, DomainArgs};

struct Ctx {
    base: Option<ExperimentConfig>,
    seed: Option<u64>,
    out: Option<PathBuf>,
}

impl Ctx {
    fn out(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Internal(e.to_string()))?;
    }
    let base = match &cli.config {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
            Some(ExperimentConfig::parse(&text)?)
        }
        None => None,
    };
    let ctx = Ctx { base, seed: cli.seed, out: cli.out };
    match cli.command {
        Command::Gen { dom } => gen(&ctx, &dom),
        Command::Whitney { file, dom, lmax } => whitney(&ctx, file.as_deref(), &dom, lmax),
        Command::Extend { file, dom, set, density, p, refine, lmax } => {
            let (mut cfg, d) = resolve(&ctx, file.as_deref(), &dom)?;
            if let Some(s) = set {
                cfg.set.kind = s;
            }
            if density.is_some() {
                cfg.set.density = density;
            }
            if let Some(p) = p {
                cfg.run.p = p;
            }
            if let Some(r) = refine {
                cfg.run.refine = r;
            }
            if lmax.is_some() {
                cfg.run.lmax = lmax;
            }
            extend(&ctx, cfg, d)
        }
        Command::Curvescan { file, dom, p, pairs } => {
            let (mut cfg, d) = resolve(&ctx, file.as_deref(), &dom)?;
            if let Some(p) = p {
                cfg.run.p = p;
            }
            if let Some(n) = pairs {
                cfg.samples.pairs = n;
            }
            curvescan(&ctx, cfg, d)
        }
        Command::Geodesic { file, dom, from, to, p, side } => {
            let (mut cfg, d) = resolve(&ctx, file.as_deref(), &dom)?;
            if let Some(p) = p {
                cfg.run.p = vec![p];
            }
            geodesic(&ctx, cfg, d, &from, &to, &side)
        }
        Command::Cantor { depth, lambda } => cantor(&ctx, depth, lambda),
        Command::Report { dir } => report(&ctx, &dir),
    }
}

fn apply(args: &DomainArgs, s: &mut DomainSpec) {
    if let Some(k) = args.k {
        s.k = k;
    }
    macro_rules! over {
        ($($f:ident),*) => {
            $(if args.$f.is_some() {
                s.$f = args.$f.clone();
            })*
        };
    }
    over!(dim, radius, slit_len, alpha, iterations, depth, lambda);
}

fn read_domain(path: &Path) -> Result<VoxelDomain, CliError> {
    let data = fs::read(path).map_err(|e| CliError::Precondition(format!("{}: {e}", path.display())))?;
    Ok(read_voxd(&data)?)
}

/// Effective config and domain: a domain file, then `--domain` flags, then the config file.
fn resolve(ctx: &Ctx, file: Option<&Path>, args: &DomainArgs) -> Result<(ExperimentConfig, VoxelDomain), CliError> {
    let (spec, dom) = if let Some(f) = file {
        let dom = read_domain(f)?;
        let k = dom.grid().level();
        let mut s = DomainSpec::from_tag(dom.name(), k).unwrap_or_else(|| DomainSpec::new("file", k));
        s.file = Some(f.display().to_string());
        (s, Some(dom))
    } else if let Some(g) = &args.generator {
        let k = args
            .k
            .or(ctx.base.as_ref().map(|b| b.domain.k))
            .ok_or_else(|| CliError::Usage("--K is required".into()))?;
        let mut s = DomainSpec::new(g, k);
        apply(args, &mut s);
        (s, None)
    } else if let Some(b) = &ctx.base {
        let mut s = b.domain.clone();
        apply(args, &mut s);
        (s, None)
    } else {
        return Err(CliError::Usage("no domain: give a VOXD file, --domain or --config".into()));
    };
    let dom = match (dom, &spec.file) {
        (Some(d), _) => d,
        (None, Some(f)) => read_domain(Path::new(f))?,
        (None, None) => build_domain(&spec.generator()?, spec.k)?,
    };
    let base = ctx.base.clone();
    let cfg = ExperimentConfig {
        seed: ctx.seed.or(base.as_ref().map(|b| b.seed)).unwrap_or(0),
        domain: spec,
        run: base.as_ref().map(|b| b.run.clone()).unwrap_or_default(),
        set: base.as_ref().map(|b| b.set.clone()).unwrap_or_default(),
        samples: base.as_ref().map(|b| b.samples.clone()).unwrap_or_default(),
    };
    Ok((cfg, dom))
}

// a closed stdout (say `| head`) is not an error
fn print_lines(lines: &[String]) {
    let mut out = io::stdout().lock();
    for l in lines {
        if writeln!(out, "{l}").is_err() {
            return;
        }
    }
}

fn emit_lines(run: &mut Run, lines: &[String]) -> Result<(), CliError> {
    print_lines(lines);
    run.write("result.txt", lines.join("\n") + "\n")
}

fn gen(ctx: &Ctx, args: &DomainArgs) -> Result<(), CliError> {
    if args.generator.is_none() && ctx.base.is_none() {
        return Err(CliError::Usage("gen needs --domain or --config".into()));
    }
    let (cfg, dom) = resolve(ctx, None, args)?;
    cfg.validate()?;
    let mut run = Run::new(&ctx.out(), "gen")?;
    run.mark("build");
    run.write("domain.voxd", write_voxd(&dom))?;
    run.write("domain.ppm", figures::domain_ppm(&dom))?;
    if dom.dim() == 2 {
        let mut c = Canvas::for_grid(dom.grid(), 512.0);
        c.boundary(&dom, "black");
        run.write("domain.svg", c.finish())?;
    }
    let line = format!(
        "domain {} K={} cells={} measure={:?} connected={}",
        dom.name(),
        dom.grid().level(),
        dom.cell_count(),
        dom.measure(),
        dom.is_connected()
    );
    emit_lines(&mut run, &[line])?;
    run.finish(&cfg.emit())?;
    Ok(())
}

fn whitney(ctx: &Ctx, file: Option<&Path>, args: &DomainArgs, lmax: Option<i32>) -> Result<(), CliError> {
    let (mut cfg, dom) = resolve(ctx, file, args)?;
    if lmax.is_some() {
        cfg.run.lmax = lmax;
    }
    cfg.validate()?;
    let l = cfg.run.lmax.unwrap_or(dom.grid().level() as i32);
    let mut run = Run::new(&ctx.out(), "whitney")?;
    let dec = whitney_decompose(&dom, l)?;
    run.mark("decompose");
    let rep = audit(&dec);
    run.mark("audit");
    run.write("whitney.txt", export::to_text(&dec))?;
    if dom.dim() == 2 {
        run.write("whitney.svg", export::to_svg(&dec, 768.0))?;
    }
    let line = rep.summary_line();
    emit_lines(&mut run, &[line.clone(), format!("cubes={} truncated={} lmax={l}", rep.cubes, rep.truncated)])?;
    run.finish(&cfg.emit())?;
    if !rep.ok() {
        return Err(CliError::Internal(format!("audit failed: {line}")));
    }
    Ok(())
}

fn extension_figures(run: &mut Run, geom: &ExtensionGeometry, res: &ExtensionResult) -> Result<(), CliError> {
    let w = geom.working();
    let wg = w.grid();
    let tilde = res.a_tilde.mask();
    let a0 = res.a0.mask();
    run.write(
        "extend.ppm",
        figures::ppm(wg, |i| match (w.contains_cell(i), tilde[i], a0[i]) {
            (_, _, true) => [214, 39, 40],
            (true, true, _) => [31, 119, 180],
            (true, false, _) => [210, 210, 210],
            _ => [255, 255, 255],
        }),
    )?;
    if w.dim() == 2 {
        let mut c = Canvas::for_grid(wg, 768.0);
        for &i in &res.a_prime_cubes {
            let q = geom.interior().cubes()[i].cube;
            let lo = q.lower();
            c.rect([lo[0], lo[1]], q.side(), "#9ecae1", "#3182bd");
        }
        for &i in &res.a0_cubes {
            let q = geom.exterior().cubes()[i].cube;
            let lo = q.lower();
            c.rect([lo[0], lo[1]], q.side(), "#fcae91", "#de2d26");
        }
        c.boundary(geom.domain(), "black");
        run.write("extend.svg", c.finish())?;
    }
    Ok(())
}

fn extend(ctx: &Ctx, cfg: ExperimentConfig, dom0: VoxelDomain) -> Result<(), CliError> {
    cfg.validate()?;
    let gen = if cfg.run.refine > 0 {
        Some(cfg.domain.generator().map_err(|_| CliError::Usage("refinement needs a named generator domain".into()))?)
    } else {
        None
    };
    let mut run = Run::new(&ctx.out(), "extend")?;
    let mut doms = vec![dom0];
    for step in 1..=cfg.run.refine {
        doms.push(build_domain(gen.as_ref().expect("generator"), cfg.domain.k + step)?);
    }
    run.mark("domains");
    let mut rows = vec![InequalityReport::CSV_HEADER.to_string()];
    let mut lines = Vec::new();
    for (step, dom) in doms.iter().enumerate() {
        let k = dom.grid().level();
        let l_max = cfg.run.lmax.map(|l| l + step as i32).unwrap_or(k as i32);
        let geom = ExtensionGeometry::new(dom, l_max)?;
        let a = VoxelSet::in_domain(dom, cfg.set.mask(dom, cfg.seed)?)?;
        let results: Vec<whitext::Result<ExtensionResult>> =
            cfg.run.p.par_iter().map(|&p| extend_set(&geom, &a, &ExtensionParams::new(dom.dim(), p))).collect();
        for (j, r) in results.into_iter().enumerate() {
            let res = r?;
            if !res.restriction_matches(&geom) {
                return Err(CliError::Internal(format!("extension does not restrict to A at K={k}")));
            }
            let rep = &res.report;
            rows.push(rep.csv_row());
            lines.push(format!(
                "K={k} p={} ratio={:?} flag={:?} touching={:?} a_prime_cubes={} a0_cubes={}",
                rep.p,
                rep.ratio.value(),
                rep.ratio.flag(),
                rep.lhs_touching,
                res.a_prime_cubes.len(),
                res.a0_cubes.len()
            ));
            if step == 0 && j == 0 {
                extension_figures(&mut run, &geom, &res)?;
            }
        }
        run.mark(&format!("extend K={k}"));
    }
    run.write("extend.csv", rows.join("\n") + "\n")?;
    emit_lines(&mut run, &lines)?;
    run.finish(&cfg.emit())?;
    Ok(())
}

fn curvescan(ctx: &Ctx, cfg: ExperimentConfig, dom: VoxelDomain) -> Result<(), CliError> {
    cfg.validate()?;
    if dom.dim() != 2 {
        return Err(CliError::Precondition("curve scans need a planar domain".into()));
    }
    let mut run = Run::new(&ctx.out(), "curvescan")?;
    let mut lines = Vec::new();
    let mut series = Vec::new();
    for &p in &cfg.run.p {
        let r = curve_condition_scan(&dom, p, cfg.samples.pairs, cfg.seed)?;
        let mut csv = vec![whitext::curves::CurveConditionReport::CSV_HEADER.to_string()];
        csv.extend(r.csv_rows());
        run.write(&format!("curvescan_p{p}.csv"), csv.join("\n") + "\n")?;
        lines.push(format!(
            "p={p} seed={} pairs={} sup_ratio={:?} scale_spread={:?}",
            cfg.seed,
            r.pairs.len(),
            r.sup,
            r.scale_spread()
        ));
        series.push((format!("p={p}"), r.scales.iter().copied().zip(r.scale_sup.iter().copied()).collect()));
        run.mark(&format!("scan p={p}"));
    }
    run.write(
        "curvescan.svg",
        figures::loglog_chart(&format!("{} K={}", dom.name(), dom.grid().level()), "separation", "sup ratio", &series),
    )?;
    emit_lines(&mut run, &lines)?;
    run.finish(&cfg.emit())?;
    Ok(())
}

fn point(v: &[f64], dim: usize) -> Result<[f64; 3], CliError> {
    if v.len() != dim {
        return Err(CliError::Usage(format!("point needs {dim} coordinates, got {}", v.len())));
    }
    let mut p = [0.0; 3];
    p[..dim].copy_from_slice(v);
    Ok(p)
}

fn geodesic(ctx: &Ctx, cfg: ExperimentConfig, dom: VoxelDomain, from: &[f64], to: &[f64], side: &str) -> Result<(), CliError> {
    cfg.validate()?;
    let (z1, z2) = (point(from, dom.dim())?, point(to, dom.dim())?);
    let (side, cc) = match side {
        "complement" => (PathSide::Complement, CurveContext::complement(&dom)?),
        "interior" => (PathSide::Interior, CurveContext::interior(&dom)),
        other => return Err(CliError::Usage(format!("unknown side `{other}`"))),
    };
    let p = cfg.run.p[0];
    let mut run = Run::new(&ctx.out(), "geodesic")?;
    let path = weighted_geodesic(&cc, z1, z2, p, side)?;
    run.mark("dijkstra");
    let mut csv = vec!["i,x,y,z,dist".to_string()];
    for (i, (q, d)) in path.points.iter().zip(&path.dists).enumerate() {
        csv.push(format!("{i},{:?},{:?},{:?},{:?}", q[0], q[1], q[2], d));
    }
    run.write("geodesic.csv", csv.join("\n") + "\n")?;
    if dom.dim() == 2 {
        let mut c = Canvas::for_grid(cc.grid(), 768.0);
        c.boundary(&dom, "black");
        let pts: Vec<[f64; 2]> = path.points.iter().map(|q| [q[0], q[1]]).collect();
        c.polyline(&pts, figures::color(1), 1.5);
        c.dot([z1[0], z1[1]], figures::color(0));
        c.dot([z2[0], z2[1]], figures::color(0));
        run.write("geodesic.svg", c.finish())?;
    }
    let line = format!("p={p} cost={:?} length={:?} edges={}", path.cost, path.length, path.edge_count());
    emit_lines(&mut run, &[line])?;
    run.finish(&cfg.emit())?;
    Ok(())
}

fn cantor(ctx: &Ctx, depth: usize, lambda: Option<Vec<f64>>) -> Result<(), CliError> {
    let spec = build_cantor_tube(depth, lambda.clone())?;
    spec.certify()?;
    let mut run = Run::new(&ctx.out(), "cantor")?;
    run.mark("build");
    run.write("cantor.txt", spec.to_text())?;
    let mut csv = vec!["n,l,e,c".to_string()];
    for n in 0..=depth {
        csv.push(format!("{n},{:?},{:?},{:?}", spec.l_f64(n), spec.e_f64(n), spec.c_f64(n)));
    }
    run.write("cantor.csv", csv.join("\n") + "\n")?;
    let mut c = Canvas::new([0.0, 0.0], [1.0, 1.0], 768.0);
    for n in 1..=depth {
        for q in spec.cubes(n) {
            let lo = q.lo_f64();
            c.rect([lo[0], lo[2]], q.side_f64(), "none", figures::color(n - 1));
        }
        for cv in spec.curves(n) {
            let pts: Vec<[f64; 2]> = cv.vertices_f64().iter().map(|v| [v[0], v[2]]).collect();
            c.polyline(&pts, figures::color(n + 2), 0.6);
        }
    }
    run.write("cantor.svg", c.finish())?;
    let m = spec.cubes(depth).len() as f64 * spec.l_f64(depth).powi(3);
    let ends: Vec<[f64; 3]> = spec.curves(depth).iter().take(1).map(|cv| pt_f64(cv.y())).collect();
    let line = format!(
        "certified depth={depth} cubes={} measure={m:?} exact_product={} c_{depth}={:?} first_tube_end={:?}",
        spec.cubes(depth).len(),
        spec.measure(depth) == spec.product_measure(depth),
        spec.c_f64(depth),
        ends.first().copied().unwrap_or_default()
    );
    emit_lines(&mut run, &[line])?;
    let mut d = DomainSpec::new("cantor_tube", 0);
    d.depth = Some(depth);
    d.lambda = lambda;
    let cfg = ExperimentConfig {
        seed: ctx.seed.unwrap_or(0),
        domain: d,
        run: RunSpec::default(),
        set: SetSpec::default(),
        samples: SampleSpec::default(),
    };
    run.finish(&cfg.emit())?;
    Ok(())
}

fn csv_rows(path: &Path) -> Result<Vec<Vec<f64>>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Precondition(format!("{}: {e}", path.display())))?;
    Ok(text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse::<f64>().unwrap_or(f64::NAN)).collect())
        .collect())
}

fn run_dirs(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    if !dir.is_dir() {
        return Err(CliError::Precondition(format!("{} is not a directory", dir.display())));
    }
    let mut out = Vec::new();
    if dir.join(MANIFEST).is_file() {
        out.push(dir.to_path_buf());
    }
    let mut subs: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir() && p.join(MANIFEST).is_file())
        .collect();
    subs.sort();
    out.extend(subs);
    Ok(out)
}

fn report(ctx: &Ctx, dir: &Path) -> Result<(), CliError> {
    let mut runs = Vec::new();
    for d in run_dirs(dir)? {
        let m = RunManifest::read(&d)?;
        if m.command != "report" {
            runs.push((d, m));
        }
    }
    if runs.is_empty() {
        return Err(CliError::Precondition(format!("no runs in {}", dir.display())));
    }
    let out = ctx.out.clone().unwrap_or_else(|| dir.join("report"));
    let mut rep = Run::new(&out, "report")?;
    let mut lines = Vec::new();
    for (d, m) in &runs {
        let name = d.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let name = if d == dir { ".".to_string() } else { name };
        let cfg = fs::read_to_string(d.join(CONFIG)).ok().and_then(|t| ExperimentConfig::parse(&t).ok());
        lines.push(format!(
            "run {name} command={} version={} config={} files={}",
            m.command,
            m.version,
            &m.config_sha256[..12.min(m.config_sha256.len())],
            m.artifacts.len()
        ));
        if let Ok(t) = fs::read_to_string(d.join("result.txt")) {
            lines.extend(t.lines().map(|l| format!("  {name}: {l}")));
        }
        let tag = name.replace(['/', '.'], "_");
        match m.command.as_str() {
            "extend" => {
                let rows = csv_rows(&d.join("extend.csv"))?;
                let mut ps: Vec<f64> = rows.iter().map(|r| r[1]).collect();
                ps.sort_by(f64::total_cmp);
                ps.dedup();
                let mut series = Vec::new();
                for p in ps {
                    let sel: Vec<&Vec<f64>> = rows.iter().filter(|r| r[1] == p).collect();
                    let max = sel.iter().map(|r| r[6]).filter(|v| v.is_finite()).fold(f64::NAN, f64::max);
                    let ks: Vec<String> = sel.iter().map(|r| (r[0] as u32).to_string()).collect();
                    lines.push(format!("  {name}: extend p={p} max_ratio={max:?} K={}", ks.join(",")));
                    series.push((format!("p={p}"), sel.iter().map(|r| ((-r[0]).exp2(), r[6])).collect()));
                }
                rep.write(&format!("report_{tag}.svg"), figures::loglog_chart("extension ratio", "h", "ratio", &series))?;
            }
            "curvescan" => {
                let seed = cfg.as_ref().map(|c| c.seed).unwrap_or(0);
                let mut series = Vec::new();
                for a in &m.artifacts {
                    if let Some(p) = a.file.strip_prefix("curvescan_p").and_then(|f| f.strip_suffix(".csv")) {
                        let rows = csv_rows(&d.join(&a.file))?;
                        let sup = rows.iter().map(|r| r[7]).fold(0.0, f64::max);
                        lines.push(format!("  {name}: curvescan seed={seed} p={p} pairs={} sup_ratio={sup:?}", rows.len()));
                        series.push((format!("p={p}"), rows.iter().map(|r| (r[5], r[7])).collect()));
                    }
                }
                rep.write(&format!("report_{tag}.svg"), figures::loglog_chart("curve cost ratio", "separation", "ratio", &series))?;
            }
            _ => {}
        }
    }
    rep.write("summary.txt", lines.join("\n") + "\n")?;
    print_lines(&lines);
    rep.finish("")?;
    Ok(())
}
