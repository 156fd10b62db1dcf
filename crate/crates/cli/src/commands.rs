use std::fs;
use std::path::Path;
use std::process::ExitCode;

use btlab::adversary::{
    default_alpha, default_capacity, default_slack, parse_ratio, play_game, refute_capped_solver, solver_by_name,
    witness_all_q, AdversaryParams, GameState,
};
use btlab::bounds::{bound_table, format_sig, optimal_base, optimal_gamma, render_csv, BoundQuery};
use btlab::bt::{best_feasible, build_tree_with_budget, extract_solutions, tree_width, ItemOrder, ReferenceAlgorithm};
use btlab::format::{
    certificate_json, params_json, provenance, provenance_designated, read_instance, report_json, selector_json,
    to_pretty, write_instance, Origin,
};
use btlab::knapsack::{optimum_bruteforce, Limits, Selector};
use btlab::{Error, Result};
use num_bigint::BigInt;
use serde_json::json;

use super::{BudgetArgs, Command, ParamArgs, SolverArgs};

pub const EXIT_NEGATIVE: u8 = 1;
pub const EXIT_INFEASIBLE: u8 = 2;
pub const EXIT_BUDGET: u8 = 3;
pub const EXIT_INPUT: u8 = 4;

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Infeasible(_) => EXIT_INFEASIBLE,
        Error::Budget { .. } => EXIT_BUDGET,
        Error::Input(_) | Error::Domain(_) | Error::OrderingTie { .. } => EXIT_INPUT,
        Error::Illegal(_) | Error::Internal(_) => EXIT_NEGATIVE,
    }
}

fn status(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_NEGATIVE)
    }
}

pub fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Optimize { json, check } => optimize(json, check),
        Command::Params(p) => params(&p),
        Command::Generate { params, solver, budget, out } => generate(&params, &solver, budget, &out),
        Command::Verify { path, designated, budget } => verify(&path, designated.as_deref(), budget),
        Command::Game { params, solver, budget, refute, out } => game(&params, &solver, budget, refute, out.as_deref()),
        Command::Width { path, algorithm, cap, order, max_nodes, budget } => {
            width(&path, &algorithm, cap, &order, max_nodes, budget)
        }
        Command::Table { points, sizes, optimal } => table(&points, sizes.as_deref(), optimal),
    }
}

fn limits(b: BudgetArgs) -> Limits {
    Limits { enumeration_cap: b.enum_cap, sum_budget: b.sum_budget, work_budget: b.work_budget }
}

fn parse_big(s: &str, what: &str) -> Result<BigInt> {
    s.parse().map_err(|_| Error::Input(format!("{what} {s:?} is not an integer")))
}

fn build_params(a: &ParamArgs) -> Result<AdversaryParams> {
    let beta = parse_ratio(&a.beta)?;
    let gamma = parse_ratio(&a.gamma)?;
    let alpha = match &a.alpha {
        Some(s) => parse_ratio(s)?,
        None => {
            default_alpha(&beta, &gamma).ok_or_else(|| Error::Infeasible("beta < 1 and gamma > 0 violated".into()))?
        }
    };
    let capacity = match a.capacity.as_str() {
        "auto" => default_capacity(a.n),
        s => parse_big(s, "N")?,
    };
    let slack = match a.slack.as_str() {
        "auto" => default_slack(a.n),
        s => parse_big(s, "U")?,
    };
    Ok(AdversaryParams { n: a.n, beta, gamma, alpha, capacity, slack })
}

fn optimize(as_json: bool, check: bool) -> Result<ExitCode> {
    let gamma = optimal_gamma()?.closed_form;
    let base = optimal_base()?;
    let log2 = base.log2();
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let passed = (base - golden).abs() < 1e-9;
    if as_json {
        let mut v = json!({
            "gamma": format_sig(gamma, 12),
            "base": format_sig(base, 12),
            "log2": format_sig(log2, 12),
        });
        if check {
            v["golden_ratio"] = json!(format_sig(golden, 12));
            v["check"] = json!(passed);
        }
        print!("{}", to_pretty(&v));
    } else {
        println!("gamma {}", format_sig(gamma, 12));
        println!("base {}", format_sig(base, 12));
        println!("log2 {}", format_sig(log2, 12));
        if check {
            println!("golden ratio {} {}", format_sig(golden, 12), if passed { "pass" } else { "FAIL" });
        }
    }
    Ok(status(!check || passed))
}

fn params(a: &ParamArgs) -> Result<ExitCode> {
    let p = build_params(a)?;
    p.check()?;
    let mut v = params_json(&p);
    v["picks"] = json!(p.picks());
    v["subset_size"] = json!(p.subset_size());
    v["completion_size"] = json!(p.completion_size());
    v["max_item"] = json!(p.max_item().to_string());
    v["feasible"] = json!(true);
    print!("{}", to_pretty(&v));
    Ok(ExitCode::SUCCESS)
}

fn play(a: &ParamArgs, s: &SolverArgs, lim: &Limits) -> Result<(GameState, Origin)> {
    let p = build_params(a)?;
    p.check()?;
    let mut solver = solver_by_name(&s.solver, s.seed.unwrap_or(0))?;
    let state = play_game(solver.as_mut(), &p, lim)?;
    Ok((state, Origin { solver: solver.name().to_string(), seed: s.seed }))
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Input(format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| io_err(path, e))
}

fn generate(a: &ParamArgs, s: &SolverArgs, b: BudgetArgs, out: &Path) -> Result<ExitCode> {
    let lim = limits(b);
    let (state, origin) = play(a, s, &lim)?;
    let report = witness_all_q(&state)?;
    fs::create_dir_all(out).map_err(|e| io_err(out, e))?;
    let width = report.entries.len().to_string().len().max(3);
    let mut written = 0;
    for (i, entry) in report.entries.iter().enumerate() {
        if let Some(cert) = &entry.certificate {
            let prov = provenance(state.params(), &origin, &entry.q, &cert.designated);
            let path = out.join(format!("instance_{i:0width$}.json"));
            write_file(&path, &write_instance(&cert.instance, Some(prov)))?;
            written += 1;
        }
    }
    write_file(&out.join("report.json"), &to_pretty(&report_json(&report, state.params(), &origin)))?;
    println!("picks {}", report.picks.len());
    println!("instances {written}");
    println!("verified {} of {}", report.successes, report.entries.len());
    println!("bound {}", report.bound);
    println!("complete {}", report.complete);
    if let Some(f) = report.first_failure() {
        eprintln!("first failure at Q = {}: {}", f.q, f.failure.as_deref().unwrap_or("not verified"));
    }
    Ok(status(report.complete))
}

fn parse_selector(s: &str) -> Result<Selector> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| Error::Input(format!("selector entry {t:?} is not an index"))))
        .collect::<Result<Vec<_>>>()
        .map(Selector::new)
}

fn verify(path: &Path, designated: Option<&str>, b: BudgetArgs) -> Result<ExitCode> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let (instance, prov) = read_instance(&text)?;
    let sel = match designated {
        Some(s) => parse_selector(s)?,
        None => provenance_designated(prov.as_ref())
            .ok_or_else(|| Error::Input("no --designated and no provenance.designated".into()))??,
    };
    let cert = btlab::adversary::certify(&instance, &sel, &limits(b))?;
    print!("{}", to_pretty(&certificate_json(&cert)));
    if !cert.verified {
        match cert.found.iter().find(|s| **s != sel) {
            Some(other) => eprintln!("not unique: {other} also sums to {}", instance.capacity()),
            None => eprintln!("designated {sel} does not sum to {}", instance.capacity()),
        }
    }
    Ok(status(cert.verified))
}

fn game(a: &ParamArgs, s: &SolverArgs, b: BudgetArgs, refute: Option<usize>, out: Option<&Path>) -> Result<ExitCode> {
    let lim = limits(b);
    let (state, origin) = play(a, s, &lim)?;
    let picks: Vec<String> = state.picks().iter().map(ToString::to_string).collect();
    let mut v = json!({
        "params": params_json(state.params()),
        "solver": origin.solver,
        "seed": origin.seed,
        "picks": picks,
        "subset_sums_distinct": state.subset_sums().all_distinct(),
        "signed_sums": state.signed_sums().len(),
    });
    let Some(cap) = refute else {
        print!("{}", to_pretty(&v));
        return Ok(ExitCode::SUCCESS);
    };
    let r = refute_capped_solver(&state, cap)?;
    let designated = r.construction.designated(state.picks().len());
    v["refutation"] = json!({
        "cap": r.cap,
        "surviving": r.surviving,
        "excluded_q": selector_json(&r.excluded_q),
        "designated": selector_json(&designated),
        "capped_best": r.capped_best.as_ref().map(ToString::to_string),
        "capped_width": r.capped_width,
        "optimum": r.optimum.to_string(),
        "certified": r.certificate.verified,
        "refuted": r.refuted(),
    });
    if let Some(path) = out {
        let prov = provenance(state.params(), &origin, &r.excluded_q, &designated);
        write_file(path, &write_instance(&r.instance, Some(prov)))?;
    }
    print!("{}", to_pretty(&v));
    Ok(status(r.refuted()))
}

fn width(
    path: &Path,
    name: &str,
    cap: Option<usize>,
    order: &str,
    max_nodes: usize,
    b: BudgetArgs,
) -> Result<ExitCode> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let (instance, _) = read_instance(&text)?;
    let order = match order {
        "listed" => ItemOrder::Listed(instance.items().to_vec()),
        "ascending" => ItemOrder::Ascending,
        "descending" => ItemOrder::Descending,
        other => return Err(Error::Input(format!("unknown order {other:?}"))),
    };
    let alg = ReferenceAlgorithm::by_name(name, cap, order)?;
    let optimum = optimum_bruteforce(&instance, &limits(b))?.value;
    let tree = build_tree_with_budget(&alg, &instance, max_nodes)?;
    let best = best_feasible(&extract_solutions(&tree, &instance), instance.capacity());
    println!("algorithm {name}");
    println!("width {}", tree_width(&tree));
    println!("best {}", best.as_ref().map_or_else(|| "none".to_string(), ToString::to_string));
    println!("optimum {optimum}");
    println!("matched {}", best.as_ref() == Some(&optimum));
    Ok(ExitCode::SUCCESS)
}

fn parse_real(s: &str) -> Result<f64> {
    let bad = || Error::Input(format!("{s:?} is not a number"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            Ok(p / q)
        }
        None => s.trim().parse().map_err(|_| bad()),
    }
}

fn table(points: &[String], sizes: Option<&str>, optimal: bool) -> Result<ExitCode> {
    let sizes: Vec<Option<u64>> = match sizes {
        Some(list) => list
            .split(',')
            .map(|t| {
                t.trim().parse::<u64>().map(Some).map_err(|_| Error::Input(format!("size {t:?} is not an integer")))
            })
            .collect::<Result<_>>()?,
        None => vec![None],
    };
    let mut queries = Vec::new();
    for point in points {
        let (b, g) = point.split_once(',').ok_or_else(|| Error::Input(format!("point {point:?} is not beta,gamma")))?;
        let (beta, gamma) = (parse_real(b)?, parse_real(g)?);
        queries.extend(sizes.iter().map(|&n| BoundQuery { beta, gamma, n }));
    }
    if optimal {
        let gamma = optimal_gamma()?.closed_form;
        queries.push(BoundQuery { beta: 1.0 - gamma, gamma, n: None });
    }
    print!("{}", render_csv(&bound_table(&queries), &queries));
    Ok(ExitCode::SUCCESS)
}
