//! Command-line front end.
//!
//! Exit codes: 0 secure, 1 insecure, 2 unknown (including timeouts),
//! 3 bad flags or configuration, 4 parse or I/O errors, 5 dimension
//! mismatch, 6 analysis failure (overflow).

use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use crate::engine::report::RunReport;
use crate::engine::{enumerate, verify, Config, SampleStrategy, Status, SubStatus};
use crate::error::Error;
use crate::interval::{Interval, IntervalBox};
use crate::network::Network;
use crate::propagation::{naive_forward, symbolic_forward, Mode};
use crate::property::{parse_property, Property};
use crate::rounding::RoundingPolicy;

#[derive(Parser, Debug)]
#[command(name = "nnverify", version, about = "Interval verification of ReLU networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Prove or refute a property.
    Verify(RunArgs),
    /// Split the input region into secure, insecure and unknown boxes.
    Enumerate(RunArgs),
    /// Run the network on one input.
    Eval {
        #[arg(long)]
        network: PathBuf,
        /// Comma-separated input values.
        #[arg(long, allow_hyphen_values = true)]
        input: String,
    },
    /// Print a network summary.
    Info {
        #[arg(long)]
        network: PathBuf,
    },
    /// Compare naive and symbolic output widths.
    Bench {
        #[arg(long)]
        network: PathBuf,
        /// Input box as `lo:hi,lo:hi,...`; repeat for several boxes.
        #[arg(long = "box", allow_hyphen_values = true)]
        boxes: Vec<String>,
        /// Use the regions of a property file as boxes.
        #[arg(long)]
        property: Option<PathBuf>,
        #[arg(long)]
        fp32: bool,
    },
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long)]
    network: PathBuf,
    #[arg(long)]
    property: PathBuf,
    #[arg(long, default_value = "symbolic")]
    mode: Mode,
    #[arg(long, default_value_t = 1e-6)]
    precision: f64,
    /// Seconds.
    #[arg(long, default_value_t = 300.0)]
    timeout: f64,
    #[arg(long)]
    max_depth: Option<usize>,
    /// Defaults to the number of logical cores.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, default_value = "midpoint")]
    samples: SampleStrategy,
    /// Write a JSON run report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Round all bounds outward onto the f32 grid.
    #[arg(long)]
    fp32: bool,
    /// Disable endpoint substitution for monotone inputs.
    #[arg(long)]
    no_monotonicity: bool,
}

impl RunArgs {
    fn config(&self) -> Result<Config, Error> {
        if !(self.timeout.is_finite() && self.timeout >= 0.0) {
            return Err(Error::InvalidConfig(format!("bad timeout {}", self.timeout)));
        }
        let cfg = Config {
            precision: self.precision,
            timeout: Duration::from_secs_f64(self.timeout),
            max_depth: self.max_depth,
            workers: self.workers.unwrap_or(Config::default().workers),
            mode: self.mode,
            sample_strategy: self.samples,
            rounding: policy(self.fp32),
            monotonicity: !self.no_monotonicity,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn policy(fp32: bool) -> RoundingPolicy {
    if fp32 {
        RoundingPolicy::OUTWARD_32
    } else {
        RoundingPolicy::OUTWARD_64
    }
}

/// Exit code for an error.
pub fn error_code(e: &Error) -> i32 {
    match e {
        Error::InvalidConfig(_) => 3,
        Error::DimensionMismatch { .. } => 5,
        Error::IntervalOverflow | Error::Exhausted | Error::Unsplittable(_) => 6,
        _ => 4,
    }
}

/// Exit code for a verdict.
pub fn status_code(s: Status) -> i32 {
    match s {
        Status::Secure => 0,
        Status::Insecure => 1,
        Status::Unknown => 2,
    }
}

/// Parse `argv` (including the program name) and run the command.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            error_code(&e)
        }
    }
}

fn load_property(path: &PathBuf) -> Result<Property, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_property(&text)
}

fn load_network(path: &PathBuf) -> Result<Network, Error> {
    Network::load_path(path).map_err(|e| match e {
        Error::Io(m) => Error::Io(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn fmt_point(x: &[f64]) -> String {
    x.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
}

fn dispatch(cmd: Command) -> Result<i32, Error> {
    match cmd {
        Command::Verify(a) => {
            let cfg = a.config()?;
            let net = load_network(&a.network)?;
            let prop = load_property(&a.property)?;
            let v = verify(&net, &prop, &cfg)?;
            match &v.counterexample {
                Some(x) => println!("{} cex=({})", v.status, fmt_point(x)),
                None => println!("{}", v.status),
            }
            eprintln!(
                "nodes={} max_depth={} avg_depth={:.2} time={:.3}s{}",
                v.stats.nodes_explored,
                v.stats.max_depth,
                v.stats.avg_depth,
                v.stats.wall_time,
                if v.stats.timed_out { " (timed out)" } else { "" }
            );
            if let Some(path) = &a.report {
                RunReport::from_verdict(&v, &cfg)
                    .with_sources(a.network.display().to_string(), a.property.display().to_string())
                    .write(path)?;
            }
            Ok(status_code(v.status))
        }
        Command::Enumerate(a) => {
            let cfg = a.config()?;
            let net = load_network(&a.network)?;
            let prop = load_property(&a.property)?;
            let r = enumerate(&net, &prop, &cfg)?;
            let total: f64 = r.entries.iter().map(|e| e.bx.volume()).sum();
            println!("{}", r.status());
            for (label, s) in [
                ("secure", SubStatus::SecureSub),
                ("insecure", SubStatus::InsecureSub),
                ("unknown", SubStatus::UnknownSub),
            ] {
                let vol = r.volume(s);
                let share = if total > 0.0 { 100.0 * vol / total } else { 0.0 };
                println!("{label:>8}: {:>6} boxes  {share:6.2}% of volume", r.count(s));
            }
            eprintln!(
                "nodes={} max_depth={} time={:.3}s",
                r.stats.nodes_explored, r.stats.max_depth, r.stats.wall_time
            );
            if let Some(path) = &a.report {
                RunReport::from_partition(&r, &cfg)
                    .with_sources(a.network.display().to_string(), a.property.display().to_string())
                    .write(path)?;
            }
            Ok(status_code(r.status()))
        }
        Command::Eval { network, input } => {
            let net = load_network(&network)?;
            let x = parse_values(&input)?;
            let y = net.eval(&x)?;
            println!("{}", fmt_point(&y));
            Ok(0)
        }
        Command::Info { network } => {
            let net = load_network(&network)?;
            println!("inputs:     {}", net.input_dim());
            println!("outputs:    {}", net.output_dim());
            let hidden = net.hidden_sizes();
            println!(
                "hidden:     {} layers [{}]",
                hidden.len(),
                hidden.iter().map(|h| h.to_string()).collect::<Vec<_>>().join(", ")
            );
            println!("neurons:    {}", hidden.iter().sum::<usize>());
            println!("parameters: {}", net.parameter_count());
            match net.normalization() {
                Some(n) => println!("normalized: mean [{}] range [{}]", fmt_point(&n.mean), fmt_point(&n.range)),
                None => println!("normalized: no"),
            }
            Ok(0)
        }
        Command::Bench {
            network,
            boxes,
            property,
            fp32,
        } => {
            let net = load_network(&network)?;
            let list: Vec<IntervalBox> = boxes.iter().map(|b| parse_box(b)).collect::<Result<_, _>>()?;
            if let Some(p) = property {
                let prop = load_property(&p)?;
                let net = prop.bind(&net)?;
                return bench(&net, &prop.input.regions, policy(fp32));
            }
            if list.is_empty() {
                return Err(Error::InvalidConfig("bench needs --box or --property".into()));
            }
            bench(&net, &list, policy(fp32))
        }
    }
}

fn bench(net: &Network, boxes: &[IntervalBox], policy: RoundingPolicy) -> Result<i32, Error> {
    println!("{:>4}  {:>14}  {:>14}  {:>9}", "box", "naive", "symbolic", "reduction");
    let (mut tn, mut ts) = (0.0, 0.0);
    for (k, b) in boxes.iter().enumerate() {
        let n = naive_forward(net, b, policy)?.total_width();
        let s = symbolic_forward(net, b, policy)?.total_width();
        tn += n;
        ts += s;
        println!("{k:>4}  {n:>14.6e}  {s:>14.6e}  {:>8.2}%", reduction(n, s));
    }
    println!("{:>4}  {tn:>14.6e}  {ts:>14.6e}  {:>8.2}%", "all", reduction(tn, ts));
    Ok(0)
}

fn reduction(naive: f64, symbolic: f64) -> f64 {
    if naive > 0.0 {
        100.0 * (naive - symbolic) / naive
    } else {
        0.0
    }
}

fn parse_values(s: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::parse(0, format!("bad input value `{t}`")))
        })
        .collect()
}

fn parse_box(s: &str) -> Result<IntervalBox, Error> {
    let dims = s
        .split(',')
        .map(|d| {
            let (lo, hi) = d.split_once(':').unwrap_or((d, d));
            let v = parse_values(&format!("{lo},{hi}"))?;
            Interval::new(v[0], v[1])
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IntervalBox::new(dims))
}
