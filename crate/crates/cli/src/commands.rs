use std::fmt::Display;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use maxent_core::eval::{self, ChungLu, Heuristic, LpConfig, LpMethod, LpResult, Statistic};
use maxent_core::features::{self, FeatureError, FeatureSpec, DEFAULT_EXACT_LIMIT};
use maxent_core::generate;
use maxent_core::graph::{self, GraphError, SparseGraph};
use maxent_core::model::{self, EdgeModel, FeatureMode, FeatureRequest, FittedModel, Grouping, ModelError, ModelSpec, PhaseTimes};
use maxent_core::modelfile::{FeatureRecord, ModelFile};
use maxent_core::optimizer::{Method, OptimizerOpts};
use maxent_core::spectral::{EigOptions, KMeansOptions};

use crate::args::{BenchArgs, FeatureArg, FitArgs, GofArgs, LinkpredArgs, MethodArg, ModelArgs, OptimizerArg, PredictArgs, SampleArgs};

pub const CONFIG: u8 = 2;
pub const NOT_CONVERGED: u8 = 3;
pub const PRECONDITION: u8 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

fn config(msg: impl Display) -> CliError {
    CliError { code: CONFIG, message: msg.to_string() }
}

fn precondition(msg: impl Display) -> CliError {
    CliError { code: PRECONDITION, message: msg.to_string() }
}

fn io_error(path: &Path, e: impl Display) -> CliError {
    config(format!("{}: {e}", path.display()))
}

fn graph_error(e: GraphError) -> CliError {
    match e {
        GraphError::Disconnected { .. } | GraphError::InfeasibleFraction { .. } | GraphError::TooManyNonEdges { .. } => {
            precondition(e)
        }
        _ => config(e),
    }
}

fn model_error(e: ModelError) -> CliError {
    match e {
        ModelError::NoConstraints
        | ModelError::Feature(FeatureError::InvalidSpec(_))
        | ModelError::Feature(FeatureError::BadRank { .. }) => config(e),
        _ => precondition(e),
    }
}

fn eval_error(e: eval::EvalError) -> CliError {
    match e {
        eval::EvalError::Graph(g) => graph_error(g),
        eval::EvalError::Model(m) => model_error(m),
        other => precondition(other),
    }
}

fn read_graph(path: &Path) -> Result<SparseGraph, CliError> {
    let file = File::open(path).map_err(|e| io_error(path, e))?;
    graph::parse_edge_list(BufReader::new(file)).map_err(|e| config(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| io_error(path, e))
}

fn feature_requests(m: &ModelArgs) -> Result<Vec<FeatureRequest>, CliError> {
    if m.d == 0 || m.k == 0 {
        return Err(config("--d and --k must be positive"));
    }
    let has_poly = m.features.contains(&FeatureArg::Poly);
    if !m.coeffs.is_empty() && !has_poly {
        return Err(config("--coeffs only applies to --feature poly"));
    }
    let mode = if m.exact { FeatureMode::Exact } else { FeatureMode::Block { d: m.d, k: m.k } };
    m.features
        .iter()
        .map(|f| {
            let spec = match f {
                FeatureArg::Cn => FeatureSpec::cn(),
                FeatureArg::Aa => FeatureSpec::aa(),
                FeatureArg::Rai => FeatureSpec::rai(),
                FeatureArg::Pa => FeatureSpec::pa(),
                FeatureArg::Poly => FeatureSpec::poly(m.coeffs.clone()).map_err(config)?,
            };
            Ok(FeatureRequest { spec, mode })
        })
        .collect()
}

fn optimizer_opts(m: &ModelArgs) -> Result<OptimizerOpts, CliError> {
    let opts = OptimizerOpts {
        method: method(m.optimizer),
        grad_tol: m.grad_tol,
        max_iters: m.max_iters,
        ..Default::default()
    };
    opts.validate().map_err(config)?;
    Ok(opts)
}

fn method(o: OptimizerArg) -> Method {
    match o {
        OptimizerArg::Lbfgs => Method::Lbfgs,
        OptimizerArg::Newton => Method::Newton,
        OptimizerArg::Diag => Method::DiagQn,
    }
}

fn eig_opts(m: &ModelArgs) -> Result<EigOptions, CliError> {
    if !(m.eig_tol > 0.0) {
        return Err(config("--eig-tol must be positive"));
    }
    Ok(EigOptions { tol: m.eig_tol, seed: m.seed, ..Default::default() })
}

struct Fitted {
    records: Vec<FeatureRecord>,
    model: FittedModel,
    times: PhaseTimes,
}

fn fit_graph(g: &SparseGraph, m: &ModelArgs) -> Result<Fitted, CliError> {
    let requests = feature_requests(m)?;
    if m.no_degrees && requests.is_empty() {
        return Err(config("nothing to fit: give --feature or drop --no-degrees"));
    }
    let opts = optimizer_opts(m)?;
    let (feats, mut times) =
        model::build_features(g, &requests, &eig_opts(m)?, &KMeansOptions::default(), DEFAULT_EXACT_LIMIT, m.seed)
            .map_err(model_error)?;
    let spec = ModelSpec { use_degrees: !m.no_degrees, features: feats.clone(), targets: None };
    let start = Instant::now();
    let model = model::fit(g, &spec, Grouping::Reduced, &opts).map_err(model_error)?;
    times.optimize = start.elapsed().as_secs_f64();
    let records = requests.into_iter().zip(feats).map(|(request, feature)| FeatureRecord { request, feature }).collect();
    Ok(Fitted { records, model, times })
}

pub fn fit(a: FitArgs) -> Result<u8, CliError> {
    let g = read_graph(&a.input)?;
    let fitted = fit_graph(&g, &a.model)?;
    let rp = &fitted.model.reduced;
    println!("nodes {} edges {}", g.n(), g.m());
    println!("groups {} (bound {:.1})", rp.group_count(), rp.group_bound());
    println!("iterations {}", fitted.model.iters);
    println!("grad_norm {:.3e}", fitted.model.grad_norm);
    println!("converged {}", fitted.model.converged);
    let t = fitted.times;
    println!("seconds eigen {:.3} kmeans {:.3} exact {:.3} optimize {:.3}", t.eigen, t.kmeans, t.exact, t.optimize);
    let converged = fitted.model.converged;
    let file = ModelFile::new(g.labels().to_vec(), fitted.records, fitted.model, fitted.times);
    file.save(&a.output).map_err(|e| io_error(&a.output, e))?;
    Ok(if converged { 0 } else { NOT_CONVERGED })
}

fn load_model(path: &Path) -> Result<ModelFile, CliError> {
    ModelFile::load(path).map_err(|e| io_error(path, e))
}

pub fn predict(a: PredictArgs) -> Result<u8, CliError> {
    let file = load_model(&a.model)?;
    let index = file.label_index();
    let reader = BufReader::new(File::open(&a.pairs).map_err(|e| io_error(&a.pairs, e))?);
    let mut out = String::from("src,dst,probability\n");
    let mut bad = 0usize;
    for line in reader.lines() {
        let line = line.map_err(|e| io_error(&a.pairs, e))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let (Some(s), Some(t)) = (tokens.next(), tokens.next()) else {
            bad += 1;
            out.push_str(&format!("{},,error:malformed\n", line.replace(',', " ")));
            continue;
        };
        let parsed = (s.parse::<u64>(), t.parse::<u64>());
        let row = match parsed {
            (Ok(src), Ok(dst)) => match (index.get(&src), index.get(&dst)) {
                _ if src == dst => Err("self-pair"),
                (Some(&i), Some(&j)) => Ok(file.model.probability(i, j)),
                _ => Err("unknown-node"),
            },
            _ => Err("malformed"),
        };
        match row {
            Ok(p) => out.push_str(&format!("{s},{t},{p}\n")),
            Err(reason) => {
                bad += 1;
                out.push_str(&format!("{s},{t},error:{reason}\n"));
            }
        }
    }
    match &a.output {
        Some(path) => write_file(path, &out)?,
        None => print!("{out}"),
    }
    if bad > 0 {
        eprintln!("error: {bad} invalid pair rows");
        return Ok(PRECONDITION);
    }
    Ok(0)
}

fn labeled_edge_list(g: &SparseGraph, labels: &[u64]) -> String {
    let mut out = format!("# nodes {} edges {}\n", g.n(), g.m());
    for (i, j) in g.edges() {
        out.push_str(&format!("{} {}\n", labels[i as usize], labels[j as usize]));
    }
    out
}

pub fn sample(a: SampleArgs) -> Result<u8, CliError> {
    let file = load_model(&a.model)?;
    fs::create_dir_all(&a.output).map_err(|e| io_error(&a.output, e))?;
    for s in 0..a.samples {
        let g = file.model.sample(a.seed.wrapping_add(s as u64));
        let path = a.output.join(format!("sample_{s}.edges"));
        write_file(&path, &labeled_edge_list(&g, &file.labels))?;
    }
    println!("wrote {} graphs to {}", a.samples, a.output.display());
    Ok(0)
}

fn variant(name: &str, d: usize) -> Result<Option<LpMethod>, CliError> {
    match name {
        "none" => Ok(None),
        "full" => Ok(Some(LpMethod::maxent_full())),
        other => other
            .strip_prefix("k=")
            .and_then(|k| k.parse::<usize>().ok())
            .filter(|&k| k > 0)
            .map(|k| Some(LpMethod::maxent_blocked(d, k)))
            .ok_or_else(|| config(format!("unknown variant {other:?}; use full, k=<bins> or none"))),
    }
}

fn mean_rows(results: &[LpResult]) -> String {
    let mut names: Vec<&str> = Vec::new();
    for r in results {
        if !names.contains(&r.method.as_str()) {
            names.push(&r.method);
        }
    }
    let mut out = String::new();
    for name in names {
        let rows: Vec<&LpResult> = results.iter().filter(|r| r.method == name).collect();
        let k = rows.len() as f64;
        let auc = rows.iter().map(|r| r.auc).sum::<f64>() / k;
        let secs = rows.iter().map(|r| r.seconds).sum::<f64>() / k;
        out.push_str(&format!("{name},mean,{auc},{secs}\n"));
    }
    out
}

pub fn linkpred(a: LinkpredArgs) -> Result<u8, CliError> {
    let g = read_graph(&a.input)?;
    if !g.is_connected() {
        let (_, count) = g.components();
        return Err(precondition(format!(
            "input graph has {count} connected components; extract the largest component first"
        )));
    }
    if a.repeats == 0 {
        return Err(config("--repeats must be positive"));
    }
    let mut methods: Vec<LpMethod> = a
        .methods
        .iter()
        .map(|m| match m {
            MethodArg::Cn => LpMethod::Heuristic(Heuristic::Cn),
            MethodArg::Jc => LpMethod::Heuristic(Heuristic::Jc),
            MethodArg::Aa => LpMethod::Heuristic(Heuristic::Aa),
            MethodArg::Pa => LpMethod::Heuristic(Heuristic::Pa),
            MethodArg::Rai => LpMethod::Heuristic(Heuristic::Rai),
            MethodArg::Oracle => LpMethod::Oracle,
            MethodArg::Random => LpMethod::Random,
        })
        .collect();
    for v in &a.variants {
        methods.extend(variant(v, a.model.d)?);
    }
    let custom = feature_requests(&a.model)?;
    if !custom.is_empty() {
        methods.push(LpMethod::MaxEnt { name: "MaxEnt (custom)".into(), use_degrees: !a.model.no_degrees, features: custom });
    }
    let config_ = LpConfig {
        test_fraction: a.test_fraction,
        validation_fraction: a.validation_fraction,
        eig: eig_opts(&a.model)?,
        kmeans: KMeansOptions::default(),
        optimizer: optimizer_opts(&a.model)?,
        exact_limit: DEFAULT_EXACT_LIMIT,
    };
    let mut results = Vec::new();
    for r in 0..a.repeats {
        let seed = a.model.seed.wrapping_add(r as u64);
        results.extend(eval::lp_pipeline(&g, &methods, &config_, seed).map_err(eval_error)?);
    }
    let mut csv = eval::lp_csv(&results);
    csv.push_str(&mean_rows(&results));
    match &a.output {
        Some(path) => write_file(path, &csv)?,
        None => print!("{csv}"),
    }
    if results.iter().any(|r| !r.converged) {
        eprintln!("warning: at least one MaxEnt fit did not converge");
        return Ok(NOT_CONVERGED);
    }
    Ok(0)
}

pub fn gof(a: GofArgs) -> Result<u8, CliError> {
    let g = read_graph(&a.input)?;
    let fitted = fit_graph(&g, &a.model)?;
    fs::create_dir_all(&a.output).map_err(|e| io_error(&a.output, e))?;
    let chung_lu = ChungLu::new(&g).map_err(eval_error)?;
    let stats = Statistic::ALL;
    let seed = a.model.seed;
    let runs: [(&str, &dyn EdgeModel); 2] = [("maxent", &fitted.model), ("chunglu", &chung_lu)];
    for (name, m) in runs {
        let reports = eval::gof_run(m, &g, &stats, a.samples, seed).map_err(eval_error)?;
        write_file(&a.output.join(format!("{name}_gof.csv")), &eval::gof_csv(&reports))?;
        for r in &reports {
            println!("{name} {} inside {:.3}", r.statistic.name(), r.inside_fraction());
        }
    }
    Ok(if fitted.model.converged { 0 } else { NOT_CONVERGED })
}

struct CsvFile {
    out: BufWriter<File>,
}

impl CsvFile {
    fn create(path: &Path, header: &str) -> Result<Self, CliError> {
        let mut out = BufWriter::new(File::create(path).map_err(|e| io_error(path, e))?);
        writeln!(out, "{header}").map_err(|e| io_error(path, e))?;
        Ok(CsvFile { out })
    }

    fn row(&mut self, row: String) -> Result<(), CliError> {
        // flush every row so an aborted run leaves partial results
        writeln!(self.out, "{row}").and_then(|_| self.out.flush()).map_err(|e| config(format!("write failed: {e}")))
    }
}

/// Rough peak memory of one benchmark size in bytes.
fn bench_memory(n: usize, edges_per_node: f64, d: usize) -> f64 {
    let l = 2 * d;
    let krylov = (3 * l).max(l + 40) + l;
    let adjacency = 2.0 * edges_per_node * 4.0 + 16.0;
    n as f64 * (8.0 * (krylov + 2 * d) as f64 + adjacency)
}

pub fn bench(a: BenchArgs) -> Result<u8, CliError> {
    fs::create_dir_all(&a.output).map_err(|e| io_error(&a.output, e))?;
    if a.optimizers.is_empty() {
        return Err(config("give at least one --optimizer"));
    }
    let mut times = CsvFile::create(
        &a.output.join("bench_times.csv"),
        "n,m,groups,group_bound,method,eigen_s,kmeans_s,optimize_s,total_s,iters,converged,final_value",
    )?;
    let eig = EigOptions { seed: a.seed, ..Default::default() };
    let km = KMeansOptions::default();
    let mut code = 0;
    for &n in &a.sizes {
        let need = bench_memory(n, a.edges_per_node, a.d) / 1e9;
        if need > a.mem_limit_gb {
            eprintln!("error: n = {n} needs about {need:.1} GB (limit {} GB); stopping with partial results", a.mem_limit_gb);
            return Ok(PRECONDITION);
        }
        let g = generate::erdos_renyi_edges_per_node(n, a.edges_per_node, a.seed.wrapping_add(n as u64));
        let request = [FeatureRequest { spec: FeatureSpec::cn(), mode: FeatureMode::Block { d: a.d, k: a.k } }];
        let (feats, phase) = model::build_features(&g, &request, &eig, &km, DEFAULT_EXACT_LIMIT, a.seed).map_err(model_error)?;
        let spec = ModelSpec { use_degrees: true, features: feats, targets: None };
        let rp = model::build_reduced(&g, &spec, Grouping::Reduced).map_err(model_error)?;
        for &o in &a.optimizers {
            let opts = OptimizerOpts { method: method(o), grad_tol: a.grad_tol, ..Default::default() };
            let start = Instant::now();
            let fitted = model::fit_reduced(rp.clone(), &opts).map_err(model_error)?;
            let opt = start.elapsed().as_secs_f64();
            let name = format!("{o:?}").to_lowercase();
            let last = fitted.trace.last().map_or(f64::NAN, |t| t.value);
            times.row(format!(
                "{n},{},{},{:.1},{name},{:.4},{:.4},{:.4},{:.4},{},{},{last}",
                g.m(),
                rp.group_count(),
                rp.group_bound(),
                phase.eigen,
                phase.kmeans,
                opt,
                phase.eigen + phase.kmeans + opt,
                fitted.iters,
                fitted.converged
            ))?;
            let mut trace = CsvFile::create(&a.output.join(format!("trace_{name}_{n}.csv")), "iter,value,grad_norm,seconds")?;
            for t in &fitted.trace {
                trace.row(format!("{},{},{},{}", t.iter, t.value, t.grad_norm, t.seconds))?;
            }
            if !fitted.converged {
                code = NOT_CONVERGED;
            }
            println!("n {n} {name} groups {} total {:.2}s", rp.group_count(), phase.eigen + phase.kmeans + opt);
        }
    }
    if a.sweep {
        bin_sweep(&a, &eig)?;
    }
    Ok(code)
}

/// Group counts for k = 200..2000. Clustering uses a single restart and 20
/// Lloyd iterations per k to keep the sweep tractable.
fn bin_sweep(a: &BenchArgs, eig: &EigOptions) -> Result<(), CliError> {
    let n = a.sweep_n;
    let g = generate::erdos_renyi_edges_per_node(n, a.edges_per_node, a.seed.wrapping_add(n as u64));
    let lr = features::lowrank_feature(&g, &FeatureSpec::cn(), a.d, eig).map_err(precondition)?;
    let km = KMeansOptions { restarts: 1, iters: 20 };
    let mut csv = CsvFile::create(&a.output.join("bin_sweep.csv"), "k,groups,group_bound,kmeans_s")?;
    for k in (200..=2000).step_by(200) {
        let start = Instant::now();
        let bf = features::block_feature(&lr, k, &km, a.seed).map_err(precondition)?;
        let secs = start.elapsed().as_secs_f64();
        let spec = ModelSpec { use_degrees: true, features: vec![model::GlobalFeature::Block(bf)], targets: None };
        let rp = model::build_reduced(&g, &spec, Grouping::Reduced).map_err(model_error)?;
        csv.row(format!("{k},{},{:.1},{secs:.3}", rp.group_count(), rp.group_bound()))?;
        println!("k {k} groups {}", rp.group_count());
    }
    Ok(())
}
