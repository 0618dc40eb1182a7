//! `escolor` command-line tool.
//!
//! Problem parameters use the `key=value` form (`n=13 nc1=0 tr2=0 sb=off`);
//! run options share that syntax (`engine=`, `budget=`, `xgrid=`, ...).
//! Exit status: 0 for sat / valid / found, 1 for unsat / invalid / not
//! found, 2 for errors.

use std::collections::HashMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use escolor::cnf::{emit_dimacs, parse_dimacs};
use escolor::driver::{
    decide, emit_svg, find_threshold, run_decomposed, verify_points, Engine, RunManifest, SvgOptions, ThresholdOptions,
    Verdict,
};
use escolor::encoder::{build_cnf, decompose, emit_smt2, AbscissaGrid, Counted, RunRule};
use escolor::io::PointFile;
use escolor::localsearch::{search, Acceptance, ColoringPolicy, MoveKind, SearchParams, Symmetry};
use escolor::minimize::{compare_minimizers, grid_census, minimize_count};
use escolor::realize::{subreduce, Budget, SearchMode, SubreduceOutcome};
use escolor::satcore::{SolverConfig, Status};
use escolor::spec::ProblemSpec;

/// `println!` that reports a closed stdout instead of panicking.
macro_rules! out {
    ($($arg:tt)*) => {
        writeln!(std::io::stdout(), $($arg)*)?
    };
}

#[derive(Parser)]
#[command(name = "escolor", version, about = "Colored Erdős–Szekeres problems via signotope SAT search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a configuration of n points exists (abstract level).
    Decide { params: Vec<String> },
    /// Scan n upwards from `from=` to `to=` for the first unsatisfiable size.
    Threshold { params: Vec<String> },
    /// Search for an integer realization on an abscissa grid (`xgrid=`).
    Realize { params: Vec<String> },
    /// Split on the colors of the first `prefix=` points and solve the parts.
    Decompose { params: Vec<String> },
    /// Minimal number of empty triangles (`kind=p3`), 4-gons or 5-gons.
    Minimize { params: Vec<String> },
    /// Count minimizing signotopes realizable on a grid (`xgrid=0`: all).
    Census { params: Vec<String> },
    /// Compare the minimizer sets of two kinds (`a=p3 b=p4`).
    Compare { params: Vec<String> },
    /// Check a JSON point file against a problem.
    Verify { file: PathBuf, params: Vec<String> },
    /// Stochastic coordinate search.
    Search { params: Vec<String> },
    /// Render a point file as SVG.
    Svg { file: PathBuf, params: Vec<String> },
    /// Write the CNF in DIMACS format.
    EmitDimacs { params: Vec<String> },
    /// Write the linear-mode problem as an SMT-LIB script.
    EmitSmt2 { params: Vec<String> },
    /// Solve a DIMACS file with the embedded solver.
    SolveDimacs { file: PathBuf, params: Vec<String> },
}

/// Run options left over after the problem parameters.
struct Opts(HashMap<String, String>);

impl Opts {
    fn get(&self, k: &str) -> Option<&str> {
        self.0.get(k).map(String::as_str)
    }

    fn num<T: std::str::FromStr>(&self, k: &str, default: T) -> Result<T> {
        match self.get(k) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| anyhow!("bad value for {k}: '{v}'")),
        }
    }

    fn allow(&self, keys: &[&str]) -> Result<()> {
        match self.0.keys().find(|k| !keys.contains(&k.as_str())) {
            Some(k) => bail!("unknown option '{k}' (expected one of: {})", keys.join(", ")),
            None => Ok(()),
        }
    }

    fn budget(&self) -> Result<Option<Duration>> {
        Ok(match self.get("budget") {
            None => None,
            Some(v) => Some(Duration::from_secs_f64(v.parse().map_err(|_| anyhow!("budget is in seconds"))?)),
        })
    }

    fn engine(&self) -> Result<Engine> {
        let timeout = self.budget()?;
        Ok(match self.get("engine") {
            None | Some("embedded") => Engine::Embedded(SolverConfig {
                seed: self.num("seed", 0)?,
                max_time: timeout,
                ..SolverConfig::default()
            }),
            Some(cmd) => Engine::External { command: cmd.split_whitespace().map(str::to_string).collect(), timeout },
        })
    }

    fn output(&self, text: &str) -> Result<()> {
        match self.get("out") {
            Some(path) => std::fs::write(path, text).with_context(|| format!("writing {path}")),
            None => {
                write!(std::io::stdout(), "{text}")?;
                Ok(())
            }
        }
    }
}

fn split_opts(params: &[String]) -> Opts {
    Opts(
        params
            .iter()
            .filter_map(|p| p.split_once('='))
            .map(|(k, v)| (k.trim_start_matches('-').to_string(), v.to_string()))
            .collect(),
    )
}

/// Problem spec plus remaining options. `n` may be supplied by the caller.
fn parse_problem(params: &[String], default_n: Option<usize>) -> Result<(ProblemSpec, Opts)> {
    let mut args: Vec<String> = params.to_vec();
    if let Some(n) = default_n {
        if !args.iter().any(|a| a.starts_with("n=")) {
            args.push(format!("n={n}"));
        }
    }
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    let (spec, rest) = ProblemSpec::parse_params(&refs)?;
    let opts = Opts(rest.into_iter().map(|(k, v)| (k.to_string(), v.to_string())).collect());
    Ok((spec, opts))
}

fn counted(name: &str) -> Result<Counted> {
    Ok(match name {
        "p3" | "3" => Counted::EmptyTriangle,
        "p4" | "4" => Counted::EmptyConvex4,
        "p5" | "5" => Counted::EmptyConvex5,
        _ => bail!("unknown kind '{name}' (p3, p4 or p5)"),
    })
}

fn status_code(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Decide { params } => {
            let (spec, opts) = parse_problem(&params, None)?;
            opts.allow(&["engine", "budget", "seed"])?;
            let d = decide(&spec, &opts.engine()?)?;
            match &d.witness {
                Some(w) => {
                    out!("SATISFIABLE n={} ({:.2}s)", d.n, d.wall.as_secs_f64());
                    out!("signotope {}", w.signotope);
                    if let Some(c) = &w.coloring {
                        out!("colors {}", c.0.iter().map(|c| (c + 1).to_string()).collect::<String>());
                    }
                }
                None => out!("UNSATISFIABLE n={} ({:.2}s)", d.n, d.wall.as_secs_f64()),
            }
            Ok(status_code(d.status == Status::Sat))
        }
        Command::Threshold { params } => {
            let pre = split_opts(&params);
            let from: usize = pre.num("from", 3)?;
            let to: usize = pre.num("to", 40)?;
            let stripped: Vec<String> =
                params.iter().filter(|p| !p.starts_with("from=") && !p.starts_with("to=")).cloned().collect();
            let (spec, opts) = parse_problem(&stripped, Some(from))?;
            opts.allow(&["engine", "budget", "seed", "grids", "realize_budget", "out"])?;
            let mut topts = ThresholdOptions { engine: opts.engine()?, ..ThresholdOptions::default() };
            if let Some(g) = opts.get("grids") {
                topts.grids = g.split(',').filter(|s| !s.is_empty()).map(str::parse).collect::<Result<_, _>>()?;
            }
            topts.realize_budget.max_time = Some(Duration::from_secs(opts.num("realize_budget", 600)?));
            let r = find_threshold(&spec, from..=to, &topts)?;
            for (n, st, t) in &r.scan {
                out!("n={n} {st:?} {:.2}s", t.as_secs_f64());
            }
            out!("tilde={}", r.tilde_value);
            match &r.verdict {
                Verdict::Exact => {
                    out!("exact: value = {} (realization with {} points)", r.tilde_value, r.tilde_value - 1)
                }
                Verdict::Interval { lower, upper } => match lower {
                    Some(l) => out!("interval: {l} <= value <= {upper}"),
                    None => out!("interval: value <= {upper} (no realization found)"),
                },
            }
            if let Some(c) = &r.realization {
                if let Some(path) = opts.get("out") {
                    std::fs::write(path, serde_json::to_string_pretty(c)?)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Realize { params } => {
            let (spec, opts) = parse_problem(&params, None)?;
            opts.allow(&["xgrid", "mode", "budget", "seed", "out"])?;
            let grid = AbscissaGrid::new(spec.n, opts.num("xgrid", 1)?)?;
            let mode = match opts.get("mode").unwrap_or("integrated") {
                "integrated" => SearchMode::Integrated,
                "block" | "full" => SearchMode::BlockFull,
                "core" | "iis" => SearchMode::BlockCore,
                m => bail!("unknown mode '{m}'"),
            };
            let budget = Budget { max_time: opts.budget()?, max_proposals: None, seed: opts.num("seed", 0)? };
            let (out, stats) = subreduce(&spec, &grid, mode, &budget)?;
            eprintln!("{}", serde_json::to_string(&stats)?);
            match out {
                SubreduceOutcome::Realized(cert) => {
                    let mut file = PointFile::new(cert.points.clone());
                    file.edges = cert.edge_coloring.clone();
                    opts.output(&(file.to_json() + "\n"))?;
                    Ok(ExitCode::SUCCESS)
                }
                SubreduceOutcome::ExhaustedUnrealizable => {
                    out!("no model is realizable on this grid (other abscissae may still work)");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Decompose { params } => {
            let (spec, opts) = parse_problem(&params, None)?;
            opts.allow(&["prefix", "run", "dry", "resume", "workers", "engine", "budget", "seed", "out"])?;
            let prefix: usize = opts.num("prefix", 1)?;
            let mut rules = RunRule::defaults(&spec);
            if let Some(r) = opts.get("run") {
                let run: usize = r.parse()?;
                rules = (0..spec.colors).map(|color| RunRule { color, run }).collect();
            }
            if opts.get("dry") == Some("on") {
                let subs = decompose(&spec, prefix, &rules)?;
                out!("{} subproblems", subs.len());
                return Ok(ExitCode::SUCCESS);
            }
            let resume = match opts.get("resume") {
                Some(p) => Some(RunManifest::parse(&std::fs::read_to_string(p)?)?),
                None => None,
            };
            let m = run_decomposed(
                &spec,
                prefix,
                &rules,
                opts.num("workers", 1)?,
                &opts.engine()?,
                resume.as_ref(),
                false,
            )?;
            opts.output(&(m.to_json() + "\n"))?;
            eprintln!("aggregate: {:?}", m.aggregate);
            Ok(status_code(m.aggregate == escolor::driver::Aggregate::Sat))
        }
        Command::Minimize { params } => {
            let o = split_opts(&params);
            let n: usize = o.num("n", 0)?;
            let kind = counted(o.get("kind").unwrap_or("p3"))?;
            out!("{}({n}) = {}", kind.tag(), minimize_count(n, kind)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Census { params } => {
            let o = split_opts(&params);
            let n: usize = o.num("n", 0)?;
            let kind = counted(o.get("kind").unwrap_or("p4"))?;
            let base: u32 = o.num("xgrid", 0)?;
            let grid = if base == 0 { None } else { Some(AbscissaGrid::new(n, base)?) };
            let (ok, total) = grid_census(n, kind, grid.as_ref())?;
            out!("{ok} of {total} minimizers realizable");
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare { params } => {
            let o = split_opts(&params);
            let n: usize = o.num("n", 0)?;
            let (a, b) = (counted(o.get("a").unwrap_or("p3"))?, counted(o.get("b").unwrap_or("p4"))?);
            let limit = o.get("limit").map(str::parse).transpose()?;
            let c = compare_minimizers(n, a, b, limit)?;
            out!(
                "{0}\\{1}: {2}  {1}\\{0}: {3}{4}",
                a.tag(),
                b.tag(),
                c.a_minus_b,
                c.b_minus_a,
                if c.truncated { " (truncated)" } else { "" }
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { file, params } => {
            let pf = PointFile::load(&file)?;
            let (spec, opts) = parse_problem(&params, Some(pf.points.len()))?;
            opts.allow(&[])?;
            let report = verify_points(&pf, &spec)?;
            out!("{}", serde_json::to_string_pretty(&report)?);
            Ok(status_code(report.valid))
        }
        Command::Search { params } => {
            let (spec, opts) = parse_problem(&params, None)?;
            opts.allow(&[
                "sym", "t0", "cooling", "steps", "sigma", "box", "seed", "iters", "snapshot", "resume", "out",
            ])?;
            let symmetry = match opts.get("sym") {
                None | Some("none") | Some("1") => Symmetry::None,
                Some("axial") => Symmetry::Axial,
                Some(m) => Symmetry::Rotational(m.parse()?),
            };
            let acceptance = match opts.get("t0") {
                None => Acceptance::Monotone,
                Some(t) => Acceptance::Anneal {
                    t0: t.parse()?,
                    cooling: opts.num("cooling", 0.95)?,
                    steps_per_level: opts.num("steps", 1000)?,
                },
            };
            let moves = match opts.get("sigma") {
                None => MoveKind::Uniform,
                Some(s) => MoveKind::Gaussian { sigma: s.parse()? },
            };
            let params = SearchParams {
                half_width: opts.num("box", 1000)?,
                moves,
                acceptance,
                symmetry,
                seed: opts.num("seed", 0)?,
                max_iters: opts.num("iters", 100_000)?,
                snapshot_every: opts.get("snapshot").map(|_| 10_000),
            };
            let initial = match opts.get("resume") {
                Some(p) => Some(PointFile::load(std::path::Path::new(p))?.points),
                None => None,
            };
            let snapshot_path = opts.get("snapshot").map(str::to_string);
            let outcome = search(&spec, spec.n, &ColoringPolicy::Free, &params, initial.as_ref(), |s| {
                if let Some(p) = &snapshot_path {
                    let _ = PointFile::new(s.points.clone()).save(std::path::Path::new(p));
                }
            })?;
            match outcome.found {
                Some(ps) => {
                    opts.output(&(PointFile::new(ps).to_json() + "\n"))?;
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    out!("best energy {} after {} iterations", outcome.best.energy, outcome.iterations);
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Svg { file, params } => {
            let o = split_opts(&params);
            let pf = PointFile::load(&file)?;
            let svg = emit_svg(&pf, &SvgOptions { size: o.num("size", 600)?, hull: o.get("hull") != Some("off") })?;
            o.output(&svg)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::EmitDimacs { params } => {
            let (spec, opts) = parse_problem(&params, None)?;
            opts.allow(&["out"])?;
            opts.output(&emit_dimacs(&build_cnf(&spec)?.formula))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::EmitSmt2 { params } => {
            let (spec, opts) = parse_problem(&params, None)?;
            opts.allow(&["xgrid", "out"])?;
            let grid = AbscissaGrid::new(spec.n, opts.num("xgrid", 1)?)?;
            opts.output(&emit_smt2(&spec, &grid)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::SolveDimacs { file, params } => {
            let o = split_opts(&params);
            let f = parse_dimacs(&std::fs::read_to_string(&file)?)?;
            let r = o.engine()?.solve(&f, &[])?;
            match &r.model {
                Some(m) => {
                    out!("s SATISFIABLE");
                    let lits: Vec<String> =
                        (1..m.len()).map(|v| if m[v] { v.to_string() } else { format!("-{v}") }).collect();
                    out!("v {} 0", lits.join(" "));
                }
                None => out!("s UNSATISFIABLE"),
            }
            Ok(status_code(r.status == Status::Sat))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
