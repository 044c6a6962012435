//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when a theorem check or a reproduction
//! fails, 2 on invalid input or configuration.

mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use entropic_energy::energy::{additive_energy, doubling, mult_energy, self_energy, self_mult_energy, EnergyReport};
use entropic_energy::entropy::entropy;
use entropic_energy::explorer::{
    cs_search, gk_scan, real_line_family, real_line_probe, reproduce_hegarty, reproduce_sidon012, subfield_example,
    sumproduct_scan, ScanMode, DEFAULT_BUDGET,
};
use entropic_energy::laws::{run_suite, LawId, SuiteConfig};
use entropic_energy::{algebra::independent_join, Bits, Dist, Joint, LogBase, DEFAULT_TOL};

use report::{Format, Table};

const BUDGET_ENV: &str = "ENTROPIC_ENERGY_BUDGET";

#[derive(Parser, Debug)]
#[command(name = "entropic-energy", version, about = "Entropic additive and multiplicative energy toolkit")]
struct Cli {
    /// Comparison tolerance in bits.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Unit for printed information quantities.
    #[arg(long, global = true, value_enum, default_value_t = Base::Bits)]
    base: Base,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Base {
    Bits,
    Nats,
}

impl From<Base> for LogBase {
    fn from(b: Base) -> LogBase {
        match b {
            Base::Bits => LogBase::Bits,
            Base::Nats => LogBase::Nats,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Entropy of a distribution or joint file.
    Entropy { file: PathBuf },
    /// Entropic energies and doubling.
    #[command(subcommand)]
    Energy(EnergyCmd),
    /// Run the law suite on random and reference instances.
    Verify(VerifyArgs),
    /// Recompute the worked examples and check their values.
    #[command(subcommand)]
    Reproduce(ReproduceCmd),
    /// Exploratory scans; these report data and never fail.
    #[command(subcommand)]
    Scan(ScanCmd),
}

#[derive(Args, Debug)]
struct PairInput {
    /// Distribution files for independent X and Y.
    files: Vec<PathBuf>,
    /// A joint file over (X, Y) instead of two independent files.
    #[arg(long, conflicts_with = "files")]
    joint: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum EnergyCmd {
    /// A(X,Y) = 2H(X,Y) - H(X+Y).
    Add(PairInput),
    /// M(X,Y) = 2H(X,Y) - H(XY).
    Mul(PairInput),
    /// A(X), M(X) (on rings) and s(X) for a single distribution.
    #[command(name = "self")]
    SelfEnergy { file: PathBuf },
    /// s(X) = H(X+X') - H(X).
    Doubling { file: PathBuf },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// `all` or a comma-separated list of law ids.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Skip the fixed reference instances.
    #[arg(long)]
    no_battery: bool,
}

#[derive(Subcommand, Debug)]
enum ReproduceCmd {
    /// The Hegarty set and its Cauchy-Schwarz violation.
    Hegarty,
    /// Uniform on {0,1,2}: a Sidon variable on a non-Sidon set.
    Sidon012,
    /// X uniform on F_q^*: sum entropy against its closed form.
    Subfield {
        #[arg(long)]
        q: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Random,
}

#[derive(Subcommand, Debug)]
enum ScanCmd {
    /// H, A, M over distributions on F_p^*.
    Sumproduct {
        #[arg(long)]
        p: u64,
        /// Defaults to p - 1.
        #[arg(long)]
        max_support: Option<usize>,
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,
        /// Random mode only.
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
    },
    /// H(X1X1' + ... + XkXk') against min(2H(X), log p) - 1.
    Gk {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: usize,
        /// Distribution over the field F_p.
        #[arg(long)]
        dist: PathBuf,
    },
    /// Search for sets A with A(U_A, U_-A) > A(U_A)/2 + A(U_-A)/2.
    Cs {
        #[arg(long, default_value_t = -7, allow_negative_numbers = true)]
        lo: i64,
        #[arg(long, default_value_t = 7, allow_negative_numbers = true)]
        hi: i64,
        #[arg(long, default_value_t = 8)]
        size: usize,
    },
    /// max(A(X), M(X)) / H(X) over a family of integer distributions.
    Real {
        #[arg(long, default_value = "intervals")]
        family: String,
        #[arg(long, default_value_t = 8)]
        max_size: usize,
    },
}

/// What a command produced: the rendered report and whether a check failed.
struct Outcome {
    text: String,
    failed: bool,
}

impl Outcome {
    fn ok(text: String) -> Outcome {
        Outcome { text, failed: false }
    }
}

fn budget() -> anyhow::Result<u128> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v.trim().parse().with_context(|| format!("{BUDGET_ENV} must be a non-negative integer, got {v:?}")),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn read_joint(path: &Path) -> anyhow::Result<Joint> {
    let s = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Joint::from_json_str(&s).with_context(|| format!("{}", path.display()))
}

fn read_dist(path: &Path) -> anyhow::Result<Dist> {
    read_joint(path)?.into_dist().with_context(|| format!("{} must hold a single-coordinate distribution", path.display()))
}

fn pair_joint(input: &PairInput) -> anyhow::Result<Joint> {
    if let Some(j) = &input.joint {
        return read_joint(j);
    }
    match input.files.as_slice() {
        [x, y] => Ok(independent_join(&[read_dist(x)?, read_dist(y)?])?),
        _ => bail!("expected two distribution files or --joint"),
    }
}

fn energy_table(title: &str, name: &str, r: &EnergyReport, base: LogBase) -> Table {
    let mut t = Table::new(title, base);
    t.quantity(name, r.value);
    t.quantity("via formula", r.via_formula);
    t.quantity("via construction", r.via_construction);
    t.text("inputs digest", &r.inputs_digest);
    t
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let base: LogBase = cli.base.into();
    if !(cli.tol > 0.0) {
        bail!("--tol must be positive");
    }
    match &cli.command {
        Command::Entropy { file } => {
            let j = read_joint(file)?;
            let mut t = Table::new("entropy", base);
            t.quantity("H", entropy(&j));
            Ok(Outcome::ok(t.render(cli.format.unwrap_or(Format::Text))?))
        }
        Command::Energy(cmd) => {
            let t = match cmd {
                EnergyCmd::Add(input) => energy_table("additive energy", "A", &additive_energy(pair_joint(input)?)?, base),
                EnergyCmd::Mul(input) => energy_table("multiplicative energy", "M", &mult_energy(pair_joint(input)?)?, base),
                EnergyCmd::SelfEnergy { file } => {
                    let d = read_dist(file)?;
                    let mut t = energy_table("self energy", "A", &self_energy(&d)?, base);
                    t.quantity("H", entropy(&d));
                    t.quantity("s", doubling(&d)?);
                    if d.carrier().is_ring() {
                        t.quantity("M", self_mult_energy(&d)?.value);
                    }
                    t
                }
                EnergyCmd::Doubling { file } => {
                    let d = read_dist(file)?;
                    let mut t = Table::new("doubling", base);
                    t.quantity("s", doubling(&d)?);
                    t.quantity("H", entropy(&d));
                    t
                }
            };
            Ok(Outcome::ok(t.render(cli.format.unwrap_or(Format::Text))?))
        }
        Command::Verify(args) => verify(cli, args),
        Command::Reproduce(cmd) => reproduce(cli, cmd, base),
        Command::Scan(cmd) => scan(cli, cmd, base),
    }
}

fn verify(cli: &Cli, args: &VerifyArgs) -> anyhow::Result<Outcome> {
    let laws: Vec<LawId> = if args.suite.trim().eq_ignore_ascii_case("all") {
        Vec::new()
    } else {
        args.suite.split(',').map(str::parse).collect::<Result<_, _>>()?
    };
    let config = SuiteConfig {
        seed: cli.seed,
        trials: args.trials,
        laws,
        tol: cli.tol,
        battery: !args.no_battery,
        ..Default::default()
    };
    let report = run_suite(&config)?;
    let failed = !report.passed();
    let text = match cli.format.unwrap_or(Format::Json) {
        Format::Json => serde_json::to_string_pretty(&report)? + "\n",
        Format::Text => {
            let mut s = format!("seed {} trials {}\n", report.seed, report.trials);
            for l in &report.laws {
                let status = match (l.failures, l.theorem) {
                    (0, _) => "pass",
                    (_, true) => "FAIL",
                    (_, false) => "expected-fail",
                };
                let min = l.min_slack.map_or("-".to_string(), |m| format!("{m:.3e}"));
                s += &format!("{:<14} {:<13} failures {:>4}  min slack {min}\n", l.id.name(), status, l.failures);
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("id,theorem,trials,battery,failures,min_slack\n");
            for l in &report.laws {
                let min = l.min_slack.map_or(String::new(), |m| format!("{m:.12e}"));
                s += &format!("{},{},{},{},{},{min}\n", l.id.name(), l.theorem, l.trials, l.battery, l.failures);
            }
            s
        }
    };
    Ok(Outcome { text, failed })
}

fn close(a: Bits, b: f64, tol: f64) -> bool {
    (a.0 - b).abs() <= tol
}

fn reproduce(cli: &Cli, cmd: &ReproduceCmd, base: LogBase) -> anyhow::Result<Outcome> {
    let format = cli.format.unwrap_or(Format::Text);
    let (t, ok) = match cmd {
        ReproduceCmd::Hegarty => {
            let r = reproduce_hegarty()?;
            let mut t = Table::new("hegarty", base);
            t.text("set", &format!("{:?}", r.set));
            t.quantity("H(X)", r.h_x);
            t.quantity("H(Y)", r.h_y);
            t.quantity("H(X+Y)", r.h_x_plus_y);
            t.quantity("H(X+X')", r.h_x_plus_x);
            t.quantity("A(X,Y)", r.energy_xy);
            t.quantity("A(X)", r.energy_x);
            t.quantity("A(Y)", r.energy_y);
            t.quantity("margin", r.margin);
            t.flag("A(X,Y) > A(X)/2 + A(Y)/2", r.violation);
            let ok = r.h_x.0 == 3.0
                && r.h_y.0 == 3.0
                && close(r.h_x_plus_y, 4.507, 1e-3)
                && close(r.h_x_plus_x, 4.513, 1e-3)
                && close(r.energy_xy, 7.493, 1e-3)
                && close(r.energy_x, 7.487, 1e-3)
                && r.violation;
            (t, ok)
        }
        ReproduceCmd::Sidon012 => {
            let r = reproduce_sidon012()?;
            let mut t = Table::new("sidon {0,1,2}", base);
            t.quantity("H(X)", r.h_x);
            t.quantity("H(X+X')", r.h_x_plus_x);
            t.quantity("s(X)", r.doubling);
            t.quantity("Sidon slack", r.sidon_slack);
            t.number("s(X) in nats", r.doubling_nats);
            t.flag("Sidon random variable", r.sidon_rv);
            t.flag("Sidon set", r.sidon_set);
            let ok = r.sidon_rv && !r.sidon_set && (r.doubling_nats - 0.4244).abs() <= 5e-4;
            (t, ok)
        }
        ReproduceCmd::Subfield { q } => {
            let r = subfield_example(*q)?;
            let mut t = Table::new(&format!("subfield q = {q}"), base);
            t.quantity("H(X)", r.h_x);
            t.quantity("H(X+X') convolution", r.h_x_plus_x);
            t.quantity("H(X+X') closed form", r.closed_form);
            t.number("deviation (bits)", r.deviation);
            t.quantity("M(X)", r.mult_energy);
            t.quantity("3 log(q-1)", r.mult_expected);
            t.quantity("A(X)", r.add_energy);
            t.quantity("2 log(q-1) - log(q-2)", r.add_leading);
            let ok = r.deviation <= cli.tol.max(1e-9) && close(r.mult_energy, r.mult_expected.0, 1e-9);
            (t, ok)
        }
    };
    let mut t = t;
    t.flag("values reproduced", ok);
    Ok(Outcome { text: t.render(format)?, failed: !ok })
}

fn scan(cli: &Cli, cmd: &ScanCmd, base: LogBase) -> anyhow::Result<Outcome> {
    let budget = budget()?;
    let format = cli.format.unwrap_or(Format::Csv);
    match cmd {
        ScanCmd::Sumproduct { p, max_support, mode, trials, delta } => {
            let mode = match mode {
                ModeArg::Exhaustive => ScanMode::Exhaustive,
                ModeArg::Random => ScanMode::Random { seed: cli.seed, trials: *trials },
            };
            let max_support = max_support.unwrap_or(p.saturating_sub(1) as usize);
            let mut s = sumproduct_scan(*p, max_support, mode, *delta, budget)?;
            report::scale_records(&mut s.records, base);
            report::render_records(&s.records, &s, format)
        }
        ScanCmd::Gk { p, k, dist } => {
            let r = gk_scan(*p, *k, &read_dist(dist)?, budget)?;
            let mut t = Table::new("sums of products", base);
            for (j, h) in r.lhs_by_k.iter().enumerate() {
                t.quantity(&format!("H(sum of {} products)", j + 1), *h);
            }
            t.quantity("rhs", r.rhs);
            t.quantity("slack", r.slack);
            Ok(Outcome::ok(t.render(if format == Format::Csv { Format::Text } else { format })?))
        }
        ScanCmd::Cs { lo, hi, size } => {
            let r = cs_search((*lo, *hi), *size, budget)?;
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&r)? + "\n",
                _ => {
                    let mut s = String::from("set,margin,A(X,Y),A(X)\n");
                    for v in &r.violations {
                        let set: Vec<String> = v.set.iter().map(i64::to_string).collect();
                        s += &format!(
                            "\"{{{}}}\",{:.12},{:.12},{:.12}\n",
                            set.join(","),
                            v.margin.in_base(base),
                            v.energy_xy.in_base(base),
                            v.energy_x.in_base(base)
                        );
                    }
                    s
                }
            };
            Ok(Outcome::ok(text))
        }
        ScanCmd::Real { family, max_size } => {
            let fam = real_line_family(family, *max_size, cli.seed)?;
            let mut r = real_line_probe(&fam, budget)?;
            report::scale_records(&mut r.records, base);
            report::render_records(&r.records, &json!({ "note": r.note, "max_ratio": r.max_ratio }), format)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &outcome.text).with_context(|| format!("cannot write {}", path.display())),
                None => {
                    let mut stdout = std::io::stdout().lock();
                    match stdout.write_all(outcome.text.as_bytes()).and_then(|_| stdout.flush()) {
                        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
                        _ => Ok(()),
                    }
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            if outcome.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
