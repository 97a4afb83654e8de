use std::fs;
use std::path::{Path, PathBuf};

use mlbcast::analytic1d::{line_solution, sweep};
use mlbcast::generate;
use mlbcast::heuristic::{compare_equal_energy, solve_heuristic, WeightMethod};
use mlbcast::io::{
    network_from_json, network_to_json, plan_from_json, plan_to_json, report_to_json, to_pretty,
    PlanDocument,
};
use mlbcast::oracle::solve_exact;
use mlbcast::wma::{wma_bidirectional_solution, wma_directional_solution, WmaSolution};
use mlbcast::{CostModel, CostTerm, EnergyReport, Error, Network, NodeId};
use serde_json::json;

use crate::format::{plan_to_dot, sig15};
use crate::{
    Cli, Command, CompareArgs, CostArgs, ExportDotArgs, GenKind, Method, SolveArgs, SourceArg,
    SweepArgs, Weights,
};

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or unreadable input.
    Usage(String),
    /// The method cannot handle this network or source.
    Incompatible(String),
    Solver(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) => 2,
            Self::Incompatible(_) => 3,
            Self::Solver(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Usage(m) | Self::Incompatible(m) | Self::Solver(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::NotRegularLine
            | Error::AboveCap { .. }
            | Error::Unsupported(_)
            | Error::BorderNode { .. }
            | Error::NotBorderNode { .. } => Self::Incompatible(msg),
            Error::InvalidCostModel(_)
            | Error::InvalidNetwork(_)
            | Error::NodeOutOfRange { .. }
            | Error::InvalidArgument(_)
            | Error::Json(_) => Self::Usage(msg),
            _ => Self::Solver(msg),
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

pub fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Gen(args) => gen(args.kind),
        Command::Solve(args) => solve(&args),
        Command::Compare(args) => compare(&args),
        Command::Sweep(args) => run_sweep(&args),
        Command::ExportDot(args) => export_dot(&args),
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn emit(path: Option<&Path>, text: &str) -> CliResult {
    match path {
        Some(p) => fs::write(p, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_network(path: &Path) -> CliResult<Network> {
    network_from_json(&read(path)?).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn cost_model(args: &CostArgs) -> CliResult<CostModel> {
    let model = match &args.terms {
        None => CostModel::new(
            vec![CostTerm {
                lambda: 1.0,
                a: args.a,
            }],
            args.normalized,
        ),
        Some(spec) => {
            let terms = spec
                .split(',')
                .map(|pair| {
                    let (lambda, a) = pair.split_once(':').ok_or_else(|| {
                        CliError::Usage(format!("cost term {pair:?} is not `lambda:a`"))
                    })?;
                    let parse = |s: &str| {
                        s.trim().parse::<f64>().map_err(|_| {
                            CliError::Usage(format!("cost term {pair:?} is not numeric"))
                        })
                    };
                    Ok(CostTerm {
                        lambda: parse(lambda)?,
                        a: parse(a)?,
                    })
                })
                .collect::<CliResult<Vec<_>>>()?;
            CostModel::new(terms, args.normalized)
        }
    };
    Ok(model?)
}

fn gen(kind: GenKind) -> CliResult {
    let (net, output) = match kind {
        GenKind::Line { n, cost, output } => (generate::line(n, cost_model(&cost)?)?, output),
        GenKind::Grid {
            rows,
            cols,
            cost,
            output,
        } => (generate::grid(rows, cols, cost_model(&cost)?)?, output),
        GenKind::Random {
            n,
            seed,
            side,
            dim,
            cost,
            output,
        } => (
            generate::random(n, dim, side, seed, cost_model(&cost)?)?,
            output,
        ),
    };
    emit(output.as_deref(), &network_to_json(&net))
}

fn sources(arg: SourceArg, net: &Network) -> CliResult<Vec<NodeId>> {
    match arg {
        SourceArg::All => Ok((0..net.len()).collect()),
        SourceArg::One(k) if k <= net.len() => Ok(vec![k - 1]),
        SourceArg::One(k) => Err(CliError::Usage(format!(
            "source {k} out of range for a network of {} nodes",
            net.len()
        ))),
    }
}

struct Outcome {
    doc: PlanDocument,
    report: EnergyReport,
    stats: serde_json::Value,
    warnings: Vec<String>,
}

fn require_line(net: &Network) -> Result<(), Error> {
    if net.is_regular_line() {
        Ok(())
    } else {
        Err(Error::NotRegularLine)
    }
}

fn solve_one(
    net: &Network,
    method: Method,
    source: NodeId,
    demand: f64,
    cap: usize,
    weights: Weights,
) -> Result<Outcome, Error> {
    let model = net.cost_model();
    let wma = |s: WmaSolution| Outcome {
        stats: json!({ "method": "wma", "antenna": s.antenna }),
        doc: PlanDocument::with_antenna(s.plan, s.antenna),
        report: s.report,
        warnings: Vec::new(),
    };
    Ok(match method {
        Method::Analytic => {
            require_line(net)?;
            let s = line_solution(net.len(), source, demand, model)?;
            Outcome {
                doc: PlanDocument::new(s.plan()),
                stats: json!({ "method": "analytic", "weights": s.weights }),
                report: s.report,
                warnings: Vec::new(),
            }
        }
        Method::Oracle => {
            let s = solve_exact(net, source, demand, cap)?;
            Outcome {
                doc: PlanDocument::new(s.plan),
                stats: json!({ "method": "oracle", "stats": s.stats }),
                report: s.report,
                warnings: Vec::new(),
            }
        }
        Method::Heuristic => {
            let method = match weights {
                Weights::Lp => WeightMethod::Lp,
                Weights::EqualEnergy => WeightMethod::EqualEnergy,
            };
            let s = solve_heuristic(net, source, demand, method)?;
            let mut warnings = s.warnings;
            if method == WeightMethod::EqualEnergy && !s.stats.early_exit {
                let cmp = compare_equal_energy(net, &s.graphs.graphs, demand)?;
                if cmp.mismatch() {
                    warnings.push(format!(
                        "equal-energy objective {} differs from the LP optimum {}",
                        s.report.objective, cmp.lp_objective
                    ));
                }
            }
            Outcome {
                doc: PlanDocument::new(s.plan),
                stats: json!({ "method": "heuristic", "weights": s.weights, "stats": s.stats, "warnings": warnings }),
                report: s.report,
                warnings,
            }
        }
        Method::WmaBidirectional => {
            require_line(net)?;
            wma(wma_bidirectional_solution(
                net.len(),
                source,
                demand,
                model,
            )?)
        }
        Method::WmaDirectional => {
            require_line(net)?;
            wma(wma_directional_solution(net.len(), source, demand, model)?)
        }
    })
}

/// `dir/name.ext` becomes `dir/name_k3.ext`.
fn per_source_path(path: &Path, k: usize) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_k{k}.{}", ext.to_string_lossy()),
        None => format!("{stem}_k{k}"),
    };
    path.with_file_name(name)
}

fn solve(args: &SolveArgs) -> CliResult {
    let net = load_network(&args.input)?;
    let list = sources(args.k, &net)?;
    let many = args.k == SourceArg::All;
    for (idx, &source) in list.iter().enumerate() {
        let k = source + 1;
        let mut out = solve_one(
            &net,
            args.method,
            source,
            args.demand,
            args.cap,
            args.weights,
        )?;
        if let Some(b) = args.battery {
            out.report = out.report.with_battery(b)?;
        }
        let target = |p: &Option<PathBuf>| {
            p.as_ref().map(|p| {
                if many {
                    per_source_path(p, k)
                } else {
                    p.clone()
                }
            })
        };
        if let Some(p) = target(&args.output) {
            emit(Some(&p), &plan_to_json(&out.doc))?;
        }
        if let Some(p) = target(&args.report) {
            emit(Some(&p), &report_to_json(&out.report))?;
        }
        if let Some(p) = target(&args.stats) {
            emit(Some(&p), &to_pretty(&out.stats))?;
        }
        for w in &out.warnings {
            eprintln!("warning: source {k}: {w}");
        }
        if idx > 0 {
            println!();
        }
        println!("source: {k}");
        println!("objective: {}", sig15(out.report.objective));
        println!("bottleneck: {}", out.report.bottleneck + 1);
        if let Some(c) = out.report.cycles {
            println!("cycles: {c}");
        }
    }
    Ok(())
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Analytic => "analytic",
        Method::Oracle => "oracle",
        Method::Heuristic => "heuristic",
        Method::WmaBidirectional => "wma-bidirectional",
        Method::WmaDirectional => "wma-directional",
    }
}

fn compare(args: &CompareArgs) -> CliResult {
    let net = load_network(&args.input)?;
    let name = args
        .input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut csv = String::from("network,k,method,objective,ratio_to_oracle\n");
    for source in sources(args.k, &net)? {
        let k = source + 1;
        let mut results = Vec::new();
        for &method in &args.methods {
            match solve_one(&net, method, source, args.demand, args.cap, Weights::Lp) {
                Ok(out) => results.push((method, out.report.objective)),
                Err(e @ (Error::AboveCap { .. } | Error::BorderNode { .. })) => {
                    eprintln!("note: source {k}: {} skipped: {e}", method_name(method));
                }
                Err(e) => return Err(e.into()),
            }
        }
        let oracle = results
            .iter()
            .find(|(m, _)| *m == Method::Oracle)
            .map(|&(_, o)| o);
        for (method, objective) in results {
            let ratio = oracle.map(|o| sig15(objective / o)).unwrap_or_default();
            csv.push_str(&format!(
                "{name},{k},{},{},{ratio}\n",
                method_name(method),
                sig15(objective)
            ));
        }
    }
    emit(args.output.as_deref(), &csv)
}

fn run_sweep(args: &SweepArgs) -> CliResult {
    if args.k < 2 {
        return Err(CliError::Usage(
            "sweep needs an internal source, k >= 2".into(),
        ));
    }
    if args.n_min > args.n_max {
        return Err(CliError::Usage(format!(
            "empty size range {}..={}",
            args.n_min, args.n_max
        )));
    }
    let rows = sweep(args.k - 1, args.a, args.n_min..=args.n_max)?;
    let mut csv = String::from("N,k,a,objective_per_Q,limit_consistent,limit_as_printed,gap\n");
    for r in rows {
        csv.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.n,
            r.k,
            sig15(r.a),
            sig15(r.objective_per_q),
            sig15(r.limit_consistent),
            sig15(r.limit_as_printed),
            sig15(r.gap)
        ));
    }
    emit(args.output.as_deref(), &csv)
}

fn export_dot(args: &ExportDotArgs) -> CliResult {
    let text = read(&args.input)?;
    let doc = plan_from_json(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", args.input.display())))?;
    emit(args.output.as_deref(), &plan_to_dot(&doc.plan))
}
