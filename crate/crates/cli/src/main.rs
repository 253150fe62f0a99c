use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use holonomy_core::arrangement::{build_arrangement, EdgeWord, PlanarGraph};
use holonomy_core::field::{build_context, extension_bound_check, invariance_audit, master_trace};
use holonomy_core::geometry::{parse_loop, parse_loops, Loop};
use holonomy_core::lasso::{decompose_loop, facial_lasso_basis, spanning_tree};
use holonomy_core::levy::{moments, Atom, CharTriplet};
use holonomy_core::sim::{mc_compare_many, spectral_support_check, SimConfig, DEFAULT_DT};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser, Debug, Serialize)]
#[command(name = "holonomy", version, about = "Exact and simulated traces of free planar holonomy fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(clap::Args, Debug, Clone, Serialize)]
struct Opts {
    /// File with one loop per line, e.g. "(0,0) (1,0) (1,1) (0,1)".
    #[arg(long, global = true)]
    loops: Option<PathBuf>,
    /// Graph JSON written by `arrange`.
    #[arg(long, global = true)]
    graph: Option<PathBuf>,
    /// Triplet JSON file or inline JSON: {"alpha":0,"b":1,"atoms":[{"angle":3.14,"weight":0.5}]}.
    #[arg(long, global = true)]
    triplet: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, global = true)]
    b: Option<f64>,
    /// Atoms as "phi:w,phi:w" (angles in radians, "pi" allowed as a factor, e.g. "0.5pi:0.3").
    #[arg(long, global = true, allow_hyphen_values = true)]
    atoms: Option<String>,
    #[arg(long, global = true)]
    t: Option<f64>,
    #[arg(long, global = true)]
    order: Option<usize>,
    /// Matrix sizes, comma separated.
    #[arg(long = "N", global = true, value_delimiter = ',')]
    n: Vec<usize>,
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    dt: Option<f64>,
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Dyadic levels for `bound`, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    level: Vec<u32>,
    /// Constant K for `bound`.
    #[arg(long, global = true)]
    k: Option<f64>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "lowercase")]
enum Command {
    /// Planar graph of a loop family.
    Arrange,
    /// Spanning tree, facial lasso basis and loop words.
    Basis,
    /// Edge and free-group words of each loop.
    Decompose,
    /// Moments of a free unitary Lévy process at time t.
    Moments,
    /// Exact master traces.
    Trace,
    /// Monte-Carlo traces of the U(N) model.
    Simulate,
    /// Monte-Carlo against exact traces (deterministic output, no timing).
    Compare,
    /// Dyadic extension bound.
    Bound,
    /// Invariance under trees, enumerations, start points and refinement.
    Audit,
    /// Eigenvalue support of the simulated process against the FUBM arc.
    Support,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

enum Failure {
    Usage(String),
    Domain(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<holonomy_core::Error> for Failure {
    fn from(e: holonomy_core::Error) -> Self {
        Failure::Domain(e.into())
    }
}

type Res<T> = std::result::Result<T, Failure>;

struct Output {
    result: Value,
    csv: Option<(Vec<&'static str>, Vec<Vec<String>>)>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Res<()> {
    let o = &cli.opts;
    let start = Instant::now();
    let out = match cli.command {
        Command::Arrange => arrange(o)?,
        Command::Basis => basis(o)?,
        Command::Decompose => decompose(o)?,
        Command::Moments => moments_cmd(o)?,
        Command::Trace => trace(o)?,
        Command::Simulate => simulate(o, true)?,
        Command::Compare => simulate(o, false)?,
        Command::Bound => bound(o)?,
        Command::Audit => audit(o)?,
        Command::Support => support(o)?,
    };
    let timed = !matches!(cli.command, Command::Compare);
    let manifest = json!({
        "command": cli.command,
        "config": o,
        "resolved": {
            "triplet": read_triplet(o).ok(),
            "dt": o.dt.unwrap_or(DEFAULT_DT),
            "loops": read_loops(o, None).ok().map(|ls| ls.iter().map(|l| l.to_string()).collect::<Vec<_>>()),
        },
        "seed": o.seed.unwrap_or(0),
        "versions": {"holonomy-core": holonomy_core::VERSION, "holonomy-cli": env!("CARGO_PKG_VERSION")},
        "timing": if timed { json!({"wall_ms": start.elapsed().as_millis() as u64}) } else { Value::Null },
    });
    let default = if out.csv.is_some() && matches!(cli.command, Command::Simulate | Command::Compare) { Format::Csv } else { Format::Json };
    let text = match o.format.unwrap_or(default) {
        Format::Json => serde_json::to_string_pretty(&json!({"manifest": manifest, "result": out.result})).map_err(anyhow::Error::from)? + "\n",
        Format::Csv => {
            let (header, rows) = out.csv.ok_or_else(|| Failure::Usage(format!("{:?} has no CSV form; use --format json", cli.command).to_lowercase()))?;
            let mut s = format!("# manifest: {manifest}\n{}\n", header.join(","));
            for r in rows {
                s += &r.join(",");
                s.push('\n');
            }
            s
        }
    };
    match &o.out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn read_loops(o: &Opts, default: Option<&str>) -> Res<Vec<Loop>> {
    match (&o.loops, default) {
        (Some(p), _) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            Ok(parse_loops(&text)?)
        }
        (None, Some(d)) => Ok(vec![parse_loop(d)?]),
        (None, None) => Err(Failure::Usage("--loops FILE is required".into())),
    }
}

fn read_graph(o: &Opts) -> Res<(PlanarGraph, Vec<EdgeWord>)> {
    if let Some(p) = &o.graph {
        let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
        let v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?;
        let v = v.get("result").cloned().unwrap_or(v);
        let (g, mut words) = PlanarGraph::from_json(&v)?;
        if o.loops.is_some() {
            words = read_loops(o, None)?.iter().map(|l| g.trace_loop(l)).collect::<holonomy_core::Result<_>>()?;
        }
        return Ok((g, words));
    }
    Ok(build_arrangement(&read_loops(o, None)?)?)
}

fn parse_angle(s: &str) -> Option<f64> {
    let s = s.trim();
    match s.strip_suffix("pi") {
        Some("") => Some(PI),
        Some("-") => Some(-PI),
        Some(f) => f.trim_end_matches('*').parse::<f64>().ok().map(|x| x * PI),
        None => s.parse().ok(),
    }
}

fn read_triplet(o: &Opts) -> Res<CharTriplet> {
    let mut tr = match &o.triplet {
        Some(s) => {
            let text = if s.trim_start().starts_with('{') { s.clone() } else { std::fs::read_to_string(s).with_context(|| format!("reading triplet {s}"))? };
            serde_json::from_str::<CharTriplet>(&text).map_err(|e| Failure::Usage(format!("bad triplet JSON: {e}")))?
        }
        None => CharTriplet { alpha: 0.0, b: 1.0, atoms: Vec::new() },
    };
    if let Some(a) = o.alpha {
        tr.alpha = a;
    }
    if let Some(b) = o.b {
        tr.b = b;
    }
    if let Some(atoms) = &o.atoms {
        tr.atoms = atoms
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|item| {
                let (phi, w) = item.split_once(':').ok_or_else(|| Failure::Usage(format!("atom '{item}' is not phi:w")))?;
                let angle = parse_angle(phi).ok_or_else(|| Failure::Usage(format!("bad atom angle '{phi}'")))?;
                let weight = w.trim().parse().map_err(|_| Failure::Usage(format!("bad atom weight '{w}'")))?;
                Ok(Atom { angle, weight })
            })
            .collect::<Res<_>>()?;
    }
    tr.validate()?;
    Ok(tr)
}

fn sim_config(o: &Opts, n: usize, default_samples: usize) -> Res<SimConfig> {
    let mut cfg = SimConfig::new(n, read_triplet(o)?);
    cfg.samples = o.samples.unwrap_or(default_samples);
    cfg.seed = o.seed.unwrap_or(0);
    cfg.dt = o.dt.unwrap_or(DEFAULT_DT);
    cfg.validate()?;
    Ok(cfg)
}

fn cplx(c: num_complex::Complex64) -> Value {
    json!([c.re, c.im])
}

fn arrange(o: &Opts) -> Res<Output> {
    let loops = read_loops(o, None)?;
    let (g, words) = build_arrangement(&loops)?;
    Ok(Output { result: g.to_json(&words), csv: None })
}

fn basis(o: &Opts) -> Res<Output> {
    let (g, words) = read_graph(o)?;
    let tree = spanning_tree(&g)?;
    let b = facial_lasso_basis(&g, &tree)?;
    let free: Vec<String> = words.iter().map(|w| decompose_loop(&g, w, &b, &tree).map(|f| f.to_string())).collect::<holonomy_core::Result<_>>()?;
    let rows: Vec<Vec<String>> = b.lassos().iter().enumerate().map(|(i, l)| vec![(i + 1).to_string(), b.enumeration()[i].to_string(), g.faces()[b.enumeration()[i] - 1].area_f64().to_string(), format!("\"{l}\"")]).collect();
    Ok(Output {
        result: json!({
            "tree_edges": tree.tree_edges(),
            "lassos": b.lassos().iter().enumerate().map(|(i, l)| json!({
                "generator": i + 1,
                "face": b.enumeration()[i],
                "area": g.faces()[b.enumeration()[i] - 1].area_f64(),
                "word": l.to_string(),
                "signed_ids": l.signed_ids(),
            })).collect::<Vec<_>>(),
            "loop_words": free,
        }),
        csv: Some((vec!["generator", "face", "area", "lasso"], rows)),
    })
}

fn decompose(o: &Opts) -> Res<Output> {
    let (g, words) = read_graph(o)?;
    let tree = spanning_tree(&g)?;
    let b = facial_lasso_basis(&g, &tree)?;
    let mut result = Vec::new();
    let mut rows = Vec::new();
    for (i, w) in words.iter().enumerate() {
        let f = decompose_loop(&g, w, &b, &tree)?;
        result.push(json!({"loop_id": i, "edge_word": w.to_string(), "free_word": f.to_string()}));
        rows.push(vec![i.to_string(), format!("\"{w}\""), format!("\"{f}\"")]);
    }
    Ok(Output { result: Value::Array(result), csv: Some((vec!["loop_id", "edge_word", "free_word"], rows)) })
}

fn moments_cmd(o: &Opts) -> Res<Output> {
    let tr = read_triplet(o)?;
    let t = o.t.unwrap_or(1.0);
    if t.is_nan() || t < 0.0 {
        return Err(Failure::Domain(anyhow!("t must be >= 0")));
    }
    let m = moments(&tr, t, o.order.unwrap_or(8));
    let rows = m.moments.iter().enumerate().map(|(n, c)| vec![n.to_string(), c.re.to_string(), c.im.to_string()]).collect();
    Ok(Output {
        result: json!({"t": t, "triplet": tr, "moments": m.moments.iter().copied().map(cplx).collect::<Vec<_>>()}),
        csv: Some((vec!["n", "re", "im"], rows)),
    })
}

fn trace(o: &Opts) -> Res<Output> {
    let loops = read_loops(o, None)?;
    let tr = read_triplet(o)?;
    let ctx = build_context(&loops, &tr)?;
    let mut result = Vec::new();
    let mut rows = Vec::new();
    for (i, l) in loops.iter().enumerate() {
        let v = master_trace(&ctx, l)?;
        let w = ctx.word(l)?;
        result.push(json!({"loop": i, "trace": cplx(v), "word": w.to_string(), "areas": ctx.areas()}));
        rows.push(vec![i.to_string(), v.re.to_string(), v.im.to_string(), format!("\"{w}\"")]);
    }
    Ok(Output { result: Value::Array(result), csv: Some((vec!["loop", "re", "im", "word"], rows)) })
}

fn simulate(o: &Opts, timed: bool) -> Res<Output> {
    let loops = read_loops(o, if timed { None } else { Some("(0,0) (1,0) (1,1) (0,1)") })?;
    let tr = read_triplet(o)?;
    let ctx = build_context(&loops, &tr)?;
    let ns = if o.n.is_empty() { vec![32] } else { o.n.clone() };
    let mut result = Vec::new();
    let mut rows = Vec::new();
    for &n in &ns {
        let cfg = sim_config(o, n, 200)?;
        let start = Instant::now();
        let stats = mc_compare_many(&ctx, &loops, &cfg)?;
        let ms = start.elapsed().as_millis() as u64;
        for (i, s) in stats.iter().enumerate() {
            let mut row = vec![i.to_string(), n.to_string(), s.samples.to_string()];
            row.extend([s.mean[0], s.mean[1], s.stderr, s.exact[0], s.exact[1], s.sigmas].iter().map(|x| x.to_string()));
            let mut rec = json!({"loop_id": i, "N": n, "stats": s});
            if timed {
                row.push(ms.to_string());
                rec["wall_ms"] = json!(ms);
            }
            rows.push(row);
            result.push(rec);
        }
    }
    let mut header = vec!["loop_id", "N", "samples", "mean_re", "mean_im", "stderr", "exact_re", "exact_im", "sigmas"];
    if timed {
        header.push("wall_ms");
    }
    Ok(Output { result: Value::Array(result), csv: Some((header, rows)) })
}

fn bound(o: &Opts) -> Res<Output> {
    let loops = read_loops(o, None)?;
    let tr = read_triplet(o)?;
    let levels = if o.level.is_empty() { vec![2, 3, 4, 5, 6] } else { o.level.clone() };
    let k = o.k.unwrap_or(1.0);
    let mut result = Vec::new();
    let mut rows = Vec::new();
    for (i, l) in loops.iter().enumerate() {
        for &n in &levels {
            let r = extension_bound_check(l, n, &tr, k)?;
            rows.push(vec![i.to_string(), n.to_string(), r.lhs.to_string(), r.rhs.to_string(), r.length.to_string(), r.approx_length.to_string(), r.satisfied.to_string()]);
            result.push(json!({"loop_id": i, "report": r}));
        }
    }
    Ok(Output { result: Value::Array(result), csv: Some((vec!["loop_id", "n", "lhs", "rhs", "length", "approx_length", "satisfied"], rows)) })
}

fn audit(o: &Opts) -> Res<Output> {
    let loops = read_loops(o, None)?;
    let tr = read_triplet(o)?;
    let r = invariance_audit(&loops, &tr, o.trials.unwrap_or(5), o.seed.unwrap_or(0))?;
    let row = vec![r.trials.to_string(), r.tree_deviation.to_string(), r.enumeration_deviation.to_string(), r.start_deviation.to_string(), r.refinement_deviation.to_string(), r.max_deviation.to_string()];
    Ok(Output {
        result: serde_json::to_value(&r).map_err(anyhow::Error::from)?,
        csv: Some((vec!["trials", "tree_deviation", "enumeration_deviation", "start_deviation", "refinement_deviation", "max_deviation"], vec![row])),
    })
}

fn support(o: &Opts) -> Res<Output> {
    let t = o.t.unwrap_or(1.0);
    let ns = if o.n.is_empty() { vec![256] } else { o.n.clone() };
    let mut result = Vec::new();
    let mut rows = Vec::new();
    for &n in &ns {
        let cfg = sim_config(o, n, 20)?;
        let r = spectral_support_check(&cfg, t)?;
        rows.push(vec![n.to_string(), r.t.to_string(), r.theta.to_string(), r.seminorm_dist.to_string(), r.angles.to_string(), r.outside.to_string(), r.fraction_outside.to_string(), r.max_offset.to_string()]);
        result.push(json!({"N": n, "report": r}));
    }
    Ok(Output { result: Value::Array(result), csv: Some((vec!["N", "t", "theta", "seminorm_dist", "angles", "outside", "fraction_outside", "max_offset"], rows)) })
}
