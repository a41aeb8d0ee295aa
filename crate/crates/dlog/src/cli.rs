//! Command-line surface: instance solving, bound analysis, model-vs-attack
//! simulation, and benchmarking, all seeded and byte-reproducible.
//!
//! Exit codes: 0 success, 2 algorithmic failure (budget exhausted, key not
//! found), 3 usage or configuration errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::derive_seed;
use crate::attack::{
    self, choose_n, default_strategy, pohlig_hellman_birthday, read_instance, run_attack,
    AttackError, AttackParams, AttackReport, Strategy, DEFAULT_SEED,
};
use crate::baselines;
use crate::collision::{
    build_omega, collisions_to_congruences, dump_omega, find_collisions, sample_exponents,
    ExponentMode,
};
use crate::group::{CyclicGroup, TargetKey};
use crate::modlinalg::{Factorization, RankTracker};
use crate::probability::{
    eq22_bound, full_width, monte_carlo_collision_prob, multiset_model_pk, prop1_bound,
    reduced_width, BoundInput,
};

#[derive(Parser)]
#[command(
    name = "dlog",
    version,
    about = "Multi-target birthday attack on discrete logarithms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Recover private keys from an instance file
    Solve(SolveArgs),
    /// Evaluate collision-probability bounds over a parameter grid
    Analyze(AnalyzeArgs),
    /// Compare bounds, the exact model, iid sampling, and real attack tables
    Simulate(SimulateArgs),
    /// Cost counters for the attack vs per-key baselines
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Birthday,
    Bsgs,
    Brute,
    PhBirthday,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Full,
    Reduced,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Full => Strategy::Full,
            StrategyArg::Reduced => Strategy::Reduced,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args)]
struct SolveArgs {
    /// Group spec `p=<dec>,N=<dec>,g=<dec>[,factors=q1^e1*q2^e2*...]`
    #[arg(long)]
    group: String,
    /// Instance file, one `target <index> <residue>` per line
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "birthday")]
    algo: AlgoArg,
    /// Width strategy (default: full for m < 4, reduced otherwise)
    #[arg(long, value_enum)]
    strategy: Option<StrategyArg>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Retry budget for the birthday rounds
    #[arg(long, default_value_t = 8)]
    rounds: u32,
    /// Restrict exponents to residues coprime to the order
    #[arg(long)]
    coprime: bool,
    /// Explicit table width override
    #[arg(long)]
    width: Option<usize>,
    /// Report file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format (solve reports are JSON)
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Debug: dump the round-1 union table as CSV to this path
    #[arg(long)]
    dump_omega: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Group orders N (comma separated)
    #[arg(long = "order", value_delimiter = ',', required = true)]
    orders: Vec<u128>,
    /// Target counts m (comma separated)
    #[arg(long = "m", value_delimiter = ',', required = true)]
    targets: Vec<usize>,
    /// Collision thresholds k (comma separated)
    #[arg(long = "k", value_delimiter = ',', required = true)]
    thresholds: Vec<usize>,
    /// Monte Carlo trials per grid point (at least 100)
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    group: String,
    #[arg(long = "m", value_delimiter = ',', required = true)]
    targets: Vec<usize>,
    /// Collision thresholds k (default: k = m; reduced strategy always
    /// uses k = m, the regime of its bound)
    #[arg(long = "k", value_delimiter = ',')]
    thresholds: Option<Vec<usize>>,
    #[arg(long, value_enum)]
    strategy: Option<StrategyArg>,
    /// Structured and Monte Carlo trials per row (at least 100)
    #[arg(long, required = true)]
    trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    group: String,
    #[arg(long = "m", value_delimiter = ',', required = true)]
    targets: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

/// Usage/configuration failure; always exits with code 3. Algorithmic
/// failures (exit 2) are handled inline so partial reports still get
/// written.
struct CliError(String);

impl CliError {
    fn exit_code(&self) -> i32 {
        3
    }

    fn message(&self) -> &str {
        &self.0
    }
}

fn config<E: std::fmt::Display>(e: E) -> CliError {
    CliError(e.to_string())
}

/// Parses and executes a command line, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

fn write_output(path: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(config),
        None => {
            print!("{content}");
            std::io::stdout().flush().map_err(config)
        }
    }
}

fn require_format(got: FormatArg, want: FormatArg, command: &str) -> Result<(), CliError> {
    match (got, want) {
        (FormatArg::Json, FormatArg::Json) | (FormatArg::Csv, FormatArg::Csv) => Ok(()),
        (FormatArg::Csv, FormatArg::Json) => Err(CliError(format!(
            "{command} reports are JSON; use --format json"
        ))),
        (FormatArg::Json, FormatArg::Csv) => {
            Err(CliError(format!("{command} emits CSV; use --format csv")))
        }
    }
}

fn parse_group(spec: &str) -> Result<CyclicGroup, CliError> {
    CyclicGroup::parse_spec(spec).map_err(config)
}

fn attack_params(
    strategy: Option<StrategyArg>,
    m: usize,
    seed: u64,
    rounds: u32,
    coprime: bool,
    width: Option<usize>,
) -> AttackParams {
    AttackParams {
        strategy: strategy
            .map(Strategy::from)
            .unwrap_or_else(|| default_strategy(m)),
        n_override: width,
        max_rounds: rounds,
        seed,
        coprime_exponents: coprime,
        ..AttackParams::default()
    }
}

fn cmd_solve(args: SolveArgs) -> Result<i32, CliError> {
    require_format(args.format, FormatArg::Json, "solve")?;
    let group = parse_group(&args.group)?;
    let file =
        File::open(&args.input).map_err(|e| CliError(format!("{}: {e}", args.input.display())))?;
    let targets = read_instance(&group, BufReader::new(file)).map_err(config)?;
    let m = targets.len();
    let params = attack_params(
        args.strategy,
        m,
        args.seed,
        args.rounds,
        args.coprime,
        args.width,
    );

    if let Some(dump_path) = &args.dump_omega {
        dump_round1_table(&group, &targets, &params, dump_path)?;
    }

    let outcome = match args.algo {
        AlgoArg::Birthday => run_attack(&group, &targets, &params),
        AlgoArg::PhBirthday => pohlig_hellman_birthday(&group, &targets, &params),
        AlgoArg::Bsgs => Ok(solve_per_key(&group, &targets, baselines::bsgs).map_err(config)?),
        AlgoArg::Brute => {
            Ok(solve_per_key(&group, &targets, baselines::brute_force_dlog).map_err(config)?)
        }
    };
    let (report, code) = match outcome {
        Ok(report) => (report, 0),
        Err(AttackError::Exhausted { partial }) => {
            eprintln!(
                "error: {}",
                AttackError::Exhausted {
                    partial: partial.clone()
                }
            );
            (*partial, 2)
        }
        Err(e) => return Err(config(e)),
    };
    let code = if code == 0 && !report.verified {
        2
    } else {
        code
    };
    write_output(&args.out, &(report.to_json() + "\n"))?;
    Ok(code)
}

fn solve_per_key(
    group: &CyclicGroup,
    targets: &[TargetKey],
    solver: fn(
        &CyclicGroup,
        crate::group::GroupElement,
    ) -> Result<baselines::DlogResult, baselines::BaselineError>,
) -> Result<AttackReport, baselines::BaselineError> {
    let mut recovered = std::collections::BTreeMap::new();
    let mut mults = 0;
    let mut comparisons = 0;
    for t in targets {
        let r = solver(group, t.value)?;
        mults += r.multiplications;
        comparisons += r.comparisons;
        if let Some(x) = r.exponent {
            recovered.insert(t.index, x);
        }
    }
    let full = recovered.len() == targets.len();
    let verified = full && {
        let candidate: Vec<u128> = targets.iter().map(|t| recovered[&t.index]).collect();
        attack::verify_solution(group, targets, &candidate)
    };
    Ok(AttackReport {
        recovered,
        target_count: targets.len(),
        rounds_used: 1,
        collisions_per_round: Vec::new(),
        congruences_used: 0,
        group_multiplications: mults,
        comparisons,
        verified,
    })
}

/// Debug dump: the round-1 table exactly as the first attack round would
/// sample it for this instance (before identity/duplicate pre-filtering).
fn dump_round1_table(
    group: &CyclicGroup,
    targets: &[TargetKey],
    params: &AttackParams,
    path: &PathBuf,
) -> Result<(), CliError> {
    let n = params
        .n_override
        .unwrap_or_else(|| choose_n(group.order(), targets.len(), params.strategy));
    if n == 0 || n as u128 > group.order() - 1 {
        return Err(CliError(format!(
            "width {n} outside [1, {}]",
            group.order() - 1
        )));
    }
    let mode = if params.coprime_exponents {
        ExponentMode::CoprimeToOrder
    } else {
        ExponentMode::NonZero
    };
    let exponents = sample_exponents(
        group.order(),
        targets.len(),
        n,
        derive_seed(params.seed, 1),
        mode,
    )
    .map_err(config)?;
    let omega = build_omega(group, targets, &exponents).map_err(config)?;
    let mut buf = Vec::new();
    dump_omega(&omega, &exponents, &mut buf).map_err(config)?;
    std::fs::write(path, buf).map_err(config)
}

const ANALYZE_HEADER: &str =
    "N,m,n,k,T,eq21_bound,eq21_bound_eps0,multiset_exact,iid_mc,iid_mc_stderr";

fn cmd_analyze(args: AnalyzeArgs) -> Result<i32, CliError> {
    require_format(args.format, FormatArg::Csv, "analyze")?;
    if args.orders.is_empty() || args.targets.is_empty() || args.thresholds.is_empty() {
        return Err(CliError("empty parameter grid".into()));
    }
    if args.trials < 100 {
        return Err(CliError("at least 100 Monte Carlo trials required".into()));
    }
    let mut csv = String::from(ANALYZE_HEADER);
    csv.push('\n');
    let mut row_idx = 0u64;
    for &order in &args.orders {
        if order < 2 {
            return Err(CliError(format!("order {order} too small")));
        }
        let width = full_width(order);
        for &m in &args.targets {
            for &k in &args.thresholds {
                let input = BoundInput {
                    order,
                    targets: m,
                    width,
                    threshold: k,
                };
                let report = prop1_bound(&input).map_err(config)?;
                let table_size = (m + 1) * width;
                let multiset = multiset_exact_cell(order, table_size, k);
                let mc = monte_carlo_collision_prob(
                    order,
                    table_size,
                    k,
                    args.trials,
                    derive_seed(args.seed, row_idx),
                );
                csv.push_str(&format!(
                    "{order},{m},{width},{k},{table_size},{:.8},{:.8},{multiset},{:.8},{:.8}\n",
                    report.bound, report.bound_eps_zero, mc.estimate, mc.std_error
                ));
                row_idx += 1;
            }
        }
    }
    write_output(&args.out, &csv)?;
    Ok(0)
}

fn multiset_exact_cell(order: u128, table_size: usize, k: usize) -> String {
    if order > 10_000 || table_size > 1_000 {
        return String::new();
    }
    match multiset_model_pk(order as u64, table_size as u64, k as u64) {
        Ok(pk) => {
            let f = crate::bigfloat::BigFloat::from_ratio(pk.numer(), pk.denom()).to_f64();
            format!("{f:.8}")
        }
        Err(_) => String::new(),
    }
}

const SIMULATE_HEADER: &str = "N,m,n,k,T,strategy,trials,bound,bound_eps0,multiset_exact,iid_mc,iid_mc_stderr,structured_freq,rank_contrib_freq";

fn cmd_simulate(args: SimulateArgs) -> Result<i32, CliError> {
    require_format(args.format, FormatArg::Csv, "simulate")?;
    if args.trials == 0 {
        return Err(CliError("trials must be positive".into()));
    }
    if args.trials < 100 {
        return Err(CliError("at least 100 trials required".into()));
    }
    let group = parse_group(&args.group)?;
    let order = group.order();
    let factorization =
        Factorization::from_parts(group.order_factorization().to_vec()).map_err(config)?;
    let mut csv = String::from(SIMULATE_HEADER);
    csv.push('\n');
    let mut row_idx = 0u64;
    for &m in &args.targets {
        if m == 0 {
            return Err(CliError("m must be at least 1".into()));
        }
        let strategy = args
            .strategy
            .map(Strategy::from)
            .unwrap_or_else(|| default_strategy(m));
        let (width, strategy_name) = match strategy {
            Strategy::Full => (full_width(order), "full"),
            Strategy::Reduced => (reduced_width(order, m), "reduced"),
        };
        let width = width.min((order - 1) as usize);
        let table_size = (m + 1) * width;
        let thresholds: Vec<usize> = match (strategy, &args.thresholds) {
            (Strategy::Reduced, _) => vec![m],
            (Strategy::Full, Some(ks)) => ks.clone(),
            (Strategy::Full, None) => vec![m],
        };
        for k in thresholds {
            let (bound, bound_eps0) = match strategy {
                Strategy::Full => {
                    let r = prop1_bound(&BoundInput {
                        order,
                        targets: m,
                        width,
                        threshold: k,
                    })
                    .map_err(config)?;
                    (r.bound, r.bound_eps_zero)
                }
                Strategy::Reduced => {
                    let r = eq22_bound(m, order).map_err(config)?;
                    (r.bound, r.bound_eps_zero)
                }
            };
            let row_seed = derive_seed(args.seed, 0xA11A + row_idx);
            let stats = structured_trials(&group, &factorization, m, width, args.trials, row_seed)
                .map_err(config)?;
            let structured_freq = stats.iter().filter(|s| s.collisions as usize >= k).count()
                as f64
                / args.trials as f64;
            let rank_freq = stats.iter().filter(|s| s.rank_contributing >= m).count() as f64
                / args.trials as f64;
            let multiset = multiset_exact_cell(order, table_size, k);
            let mc = monte_carlo_collision_prob(
                order,
                table_size,
                k,
                args.trials,
                derive_seed(args.seed, 0xB22B + row_idx),
            );
            csv.push_str(&format!(
                "{order},{m},{width},{k},{table_size},{strategy_name},{},{bound:.8},{bound_eps0:.8},{multiset},{:.8},{:.8},{structured_freq:.8},{rank_freq:.8}\n",
                args.trials, mc.estimate, mc.std_error
            ));
            row_idx += 1;
        }
    }
    write_output(&args.out, &csv)?;
    Ok(0)
}

struct TrialStats {
    collisions: u64,
    rank_contributing: usize,
}

/// One structured trial per seed stream: plant random distinct keys, build a
/// real table round, and count collisions plus rank-contributing
/// congruences.
fn structured_trials(
    group: &CyclicGroup,
    factorization: &Factorization,
    m: usize,
    width: usize,
    trials: u64,
    seed: u64,
) -> Result<Vec<TrialStats>, AttackError> {
    let order = group.order();
    let mut out = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let trial_seed = derive_seed(seed, trial);
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
        let mut keys: Vec<u128> = Vec::with_capacity(m);
        while keys.len() < m {
            let x = rng.gen_range(1..order);
            if !keys.contains(&x) {
                keys.push(x);
            }
        }
        let targets: Vec<TargetKey> = keys
            .iter()
            .enumerate()
            .map(|(i, &x)| TargetKey {
                index: i + 1,
                value: group.pow(group.generator(), x),
            })
            .collect();
        let exponents = sample_exponents(
            order,
            m,
            width,
            derive_seed(trial_seed, 1),
            ExponentMode::NonZero,
        )?;
        let omega = build_omega(group, &targets, &exponents)?;
        let scan = find_collisions(&omega);
        let congruences = collisions_to_congruences(&scan.collisions, &exponents, order)?;
        let mut tracker = RankTracker::new(m, order, factorization);
        let mut contributing = 0usize;
        for c in congruences {
            if tracker.add_row(c)? {
                contributing += 1;
            }
        }
        out.push(TrialStats {
            collisions: scan.collisions.len() as u64,
            rank_contributing: contributing,
        });
    }
    Ok(out)
}

const BENCH_HEADER: &str =
    "algo,p,N,m,n,rounds,verified,mults,comparisons,mults_per_key,comparisons_per_key";

fn cmd_bench(args: BenchArgs) -> Result<i32, CliError> {
    require_format(args.format, FormatArg::Csv, "bench")?;
    let group = parse_group(&args.group)?;
    let order = group.order();
    let mut csv = String::from(BENCH_HEADER);
    csv.push('\n');
    for &m in &args.targets {
        if m == 0 {
            return Err(CliError("m must be at least 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(args.seed, m as u64));
        let mut keys: Vec<u128> = Vec::with_capacity(m);
        while keys.len() < m {
            let x = rng.gen_range(1..order);
            if !keys.contains(&x) {
                keys.push(x);
            }
        }
        let targets: Vec<TargetKey> = keys
            .iter()
            .enumerate()
            .map(|(i, &x)| TargetKey {
                index: i + 1,
                value: group.pow(group.generator(), x),
            })
            .collect();
        for (algo, strategy) in [
            ("birthday-full", Some(Strategy::Full)),
            ("birthday-reduced", Some(Strategy::Reduced)),
            ("bsgs", None),
        ] {
            let start = Instant::now();
            let (report, n) = match strategy {
                Some(strategy) => {
                    let params = AttackParams {
                        strategy,
                        seed: derive_seed(args.seed, 0xBE4C + m as u64),
                        ..AttackParams::default()
                    };
                    let report = match run_attack(&group, &targets, &params) {
                        Ok(r) => r,
                        Err(AttackError::Exhausted { partial }) => *partial,
                        Err(e) => return Err(config(e)),
                    };
                    (report, choose_n(order, m, strategy))
                }
                None => {
                    let report =
                        solve_per_key(&group, &targets, baselines::bsgs).map_err(config)?;
                    (report, crate::arith::ceil_sqrt(order) as usize)
                }
            };
            let elapsed = start.elapsed();
            eprintln!("bench: {algo} m={m} wall={elapsed:?}");
            csv.push_str(&format!(
                "{algo},{},{order},{m},{n},{},{},{},{},{:.2},{:.2}\n",
                group.modulus(),
                report.rounds_used,
                report.verified,
                report.group_multiplications,
                report.comparisons,
                report.group_multiplications as f64 / m as f64,
                report.comparisons as f64 / m as f64,
            ));
        }
    }
    write_output(&args.out, &csv)?;
    Ok(0)
}
