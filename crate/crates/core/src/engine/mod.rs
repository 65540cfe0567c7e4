//! Branch-and-bound driver: bisection tree, counterexample sampling,
//! monotonicity reduction, verdicts and sub-box enumeration.

mod monotone;
pub mod report;
mod scheduler;

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gradient::{backward_gradient, smear_split_choice};
use crate::interval::{Interval, IntervalBox};
use crate::network::Network;
use crate::propagation::{forward, ForwardResult, Mode};
use crate::property::{assess, check_concrete, Constraint, Property, Truth};
use crate::rounding::RoundingPolicy;

use monotone::Faces;

/// Concrete points tried on every unresolved box.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleStrategy {
    /// The box midpoint only.
    #[default]
    Midpoint,
    /// The midpoint plus the corners over the first `min(d, 10)` inputs,
    /// with the remaining inputs at their midpoint.
    MidpointPlusCorners,
}

impl std::str::FromStr for SampleStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "midpoint" => Ok(SampleStrategy::Midpoint),
            "corners" | "midpoint+corners" => Ok(SampleStrategy::MidpointPlusCorners),
            other => Err(Error::InvalidConfig(format!("unknown sample strategy `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    /// Inputs narrower than this are never bisected.
    pub precision: f64,
    pub timeout: Duration,
    /// Depth bound of the bisection tree; derived from the region when unset.
    pub max_depth: Option<usize>,
    pub workers: usize,
    pub mode: Mode,
    pub sample_strategy: SampleStrategy,
    pub rounding: RoundingPolicy,
    /// Replace boxes by faces along inputs the violation is monotone in
    /// (verify in symbolic mode only).
    pub monotonicity: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            precision: 1e-6,
            timeout: Duration::from_secs(300),
            max_depth: None,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            mode: Mode::Symbolic,
            sample_strategy: SampleStrategy::Midpoint,
            rounding: RoundingPolicy::OUTWARD_64,
            monotonicity: true,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        if !(self.precision > 0.0 && self.precision.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "precision must be positive, got {}",
                self.precision
            )));
        }
        if self.workers == 0 {
            return Err(Error::InvalidConfig("workers must be at least 1".into()));
        }
        Ok(())
    }

    /// Depth bound for one region: enough halvings to bring every input
    /// below `precision`, plus one endpoint substitution per input.
    pub fn depth_limit(&self, region: &IntervalBox) -> usize {
        if let Some(d) = self.max_depth {
            return d;
        }
        let d = region.len();
        let (w, _) = region.max_width();
        let halvings = if w > self.precision {
            (w / self.precision).log2().ceil().max(0.0) as usize
        } else {
            0
        };
        halvings.saturating_mul(d).saturating_add(d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    Secure,
    Insecure,
    Unknown,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Secure => "Secure",
            Status::Insecure => "Insecure",
            Status::Unknown => "Unknown",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    /// Boxes that went through a forward analysis.
    pub nodes_explored: u64,
    /// Deepest job seen.
    pub max_depth: usize,
    /// Mean depth over leaves.
    pub avg_depth: f64,
    /// Seconds.
    pub wall_time: f64,
    pub leaves: u64,
    pub timed_out: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<f64>>,
    pub stats: Stats,
}

/// How a job box was derived from its parent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// Lower half of a bisection.
    Lower,
    /// Upper half of a bisection.
    Upper,
    /// Input fixed at its lower endpoint.
    LowEndpoint,
    /// Input fixed at its upper endpoint.
    HighEndpoint,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Job {
    pub region: usize,
    pub bx: IntervalBox,
    pub depth: usize,
    pub lineage: Vec<(usize, Side)>,
}

impl Job {
    fn root(region: usize, bx: IntervalBox) -> Job {
        Job {
            region,
            bx,
            depth: 0,
            lineage: Vec::new(),
        }
    }

    fn child(&self, bx: IntervalBox, steps: &[(usize, Side)]) -> Job {
        let mut lineage = self.lineage.clone();
        lineage.extend_from_slice(steps);
        Job {
            region: self.region,
            bx,
            depth: self.depth + steps.len(),
            lineage,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SubStatus {
    SecureSub,
    InsecureSub,
    UnknownSub,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionEntry {
    pub region: usize,
    #[serde(rename = "box")]
    pub bx: IntervalBox,
    pub status: SubStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<f64>>,
    pub depth: usize,
    pub lineage: Vec<(usize, Side)>,
}

/// Leaves of the enumeration tree, sorted by region and split history.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub entries: Vec<PartitionEntry>,
    pub stats: Stats,
}

impl PartitionReport {
    pub fn count(&self, s: SubStatus) -> usize {
        self.entries.iter().filter(|e| e.status == s).count()
    }

    /// Total volume of the leaves with the given status.
    pub fn volume(&self, s: SubStatus) -> f64 {
        self.entries.iter().filter(|e| e.status == s).map(|e| e.bx.volume()).sum()
    }

    /// Roll the leaves up into a single status.
    pub fn status(&self) -> Status {
        if self.count(SubStatus::InsecureSub) > 0 {
            Status::Insecure
        } else if self.count(SubStatus::UnknownSub) > 0 {
            Status::Unknown
        } else {
            Status::Secure
        }
    }
}

struct Shared<'a> {
    net: &'a Network,
    constraint: &'a Constraint,
    cfg: &'a Config,
    limits: Vec<usize>,
    deadline: Option<Instant>,
}

impl Shared<'_> {
    fn timed_out(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    fn analyse(&self, bx: &IntervalBox) -> Option<ForwardResult> {
        forward(self.net, bx, self.cfg.mode, self.cfg.rounding).ok()
    }

    fn truth(&self, fr: Option<&ForwardResult>) -> Truth {
        fr.map_or(Truth::Unknown, |fr| assess(fr, self.constraint, self.cfg.rounding))
    }

    /// First sampled point that violates the constraint.
    fn sample(&self, bx: &IntervalBox) -> Option<Vec<f64>> {
        sample_points(bx, self.cfg.sample_strategy)
            .into_iter()
            .find(|x| self.violates(x))
    }

    fn violates(&self, x: &[f64]) -> bool {
        self.net.eval(x).is_ok_and(|y| !check_concrete(&y, self.constraint))
    }

    /// Bisection of the input chosen by smear (symbolic) or width (naive).
    fn split(&self, job: &Job, fr: Option<&ForwardResult>) -> Option<Vec<Job>> {
        let j = self.split_dim(&job.bx, fr)?;
        let (lo, hi) = job.bx.bisect(j).ok()?;
        Some(vec![
            job.child(lo, &[(j, Side::Lower)]),
            job.child(hi, &[(j, Side::Upper)]),
        ])
    }

    fn split_dim(&self, bx: &IntervalBox, fr: Option<&ForwardResult>) -> Option<usize> {
        if let Some(masks) = fr.and_then(|f| f.masks.as_ref()) {
            let policy = self.cfg.rounding;
            let smeared = backward_gradient(self.net, masks, policy)
                .and_then(|jac| jac.to_raw_inputs(self.net, policy))
                .map(|jac| {
                    let rows = self.constraint.referenced_outputs();
                    if rows.is_empty() {
                        jac
                    } else {
                        jac.select_rows(&rows)
                    }
                });
            match smeared.map(|jac| smear_split_choice(&jac, bx, self.cfg.precision)) {
                Ok(Ok(j)) => return Some(j),
                Ok(Err(_)) => return None,
                Err(_) => {}
            }
        }
        widest(bx, self.cfg.precision)
    }

    /// Face children for the inputs the violation is monotone in.
    fn reduce(&self, job: &Job, fr: &ForwardResult, budget: usize) -> Option<Vec<Job>> {
        let faces = monotone::reducible_faces(self.net, fr, self.constraint, self.cfg.rounding).ok()?;
        let mut singles = Vec::new();
        let mut doubles = Vec::new();
        for (j, f) in faces.iter().enumerate() {
            match f {
                Some(Faces::Both) => doubles.push(j),
                Some(f) => singles.push((j, *f)),
                None => {}
            }
        }
        // each doubled input multiplies the job count by two
        doubles.truncate(2);
        let mut chosen: Vec<(usize, Faces)> = singles;
        chosen.extend(doubles.into_iter().map(|j| (j, Faces::Both)));
        chosen.sort_by_key(|c| c.0);
        chosen.truncate(budget);
        if chosen.is_empty() {
            return None;
        }
        let mut out: Vec<(IntervalBox, Vec<(usize, Side)>)> = vec![(job.bx.clone(), Vec::new())];
        for (j, f) in chosen {
            let iv = job.bx.get(j);
            let sides: &[Side] = match f {
                Faces::Low => &[Side::LowEndpoint],
                Faces::High => &[Side::HighEndpoint],
                Faces::Both => &[Side::LowEndpoint, Side::HighEndpoint],
            };
            out = out
                .into_iter()
                .flat_map(|(bx, steps)| {
                    sides.iter().map(move |&s| {
                        let v = if s == Side::LowEndpoint { iv.lo() } else { iv.hi() };
                        let mut bx = bx.clone();
                        bx.set(j, Interval::point(v).expect("finite endpoint"));
                        let mut steps = steps.clone();
                        steps.push((j, s));
                        (bx, steps)
                    })
                })
                .collect();
        }
        Some(out.into_iter().map(|(bx, steps)| job.child(bx, &steps)).collect())
    }
}

fn widest(bx: &IntervalBox, precision: f64) -> Option<usize> {
    let (w, j) = bx.max_width();
    (w > precision).then_some(j)
}

/// Midpoint first, then the corner points of the chosen strategy.
pub fn sample_points(bx: &IntervalBox, strategy: SampleStrategy) -> Vec<Vec<f64>> {
    let mid = bx.midpoint();
    let mut pts = vec![mid.clone()];
    if strategy == SampleStrategy::MidpointPlusCorners {
        let k = bx.len().min(10);
        for mask in 0u32..(1 << k) {
            let mut p = mid.clone();
            for (j, v) in p.iter_mut().enumerate().take(k) {
                let d = bx.get(j);
                *v = if mask >> j & 1 == 1 { d.hi() } else { d.lo() };
            }
            pts.push(p);
        }
    }
    pts
}

#[derive(Default)]
struct Tally {
    nodes: u64,
    max_depth: usize,
    leaves: u64,
    depth_sum: u64,
    timed_out: bool,
}

impl Tally {
    fn leaf(&mut self, depth: usize) {
        self.leaves += 1;
        self.depth_sum += depth as u64;
    }

    fn stats(tallies: &[Tally], start: Instant) -> Stats {
        let leaves: u64 = tallies.iter().map(|t| t.leaves).sum();
        let depth_sum: u64 = tallies.iter().map(|t| t.depth_sum).sum();
        Stats {
            nodes_explored: tallies.iter().map(|t| t.nodes).sum(),
            max_depth: tallies.iter().map(|t| t.max_depth).max().unwrap_or(0),
            avg_depth: if leaves == 0 { 0.0 } else { depth_sum as f64 / leaves as f64 },
            wall_time: start.elapsed().as_secs_f64(),
            leaves,
            timed_out: tallies.iter().any(|t| t.timed_out),
        }
    }
}

fn prepare(net: &Network, prop: &Property, cfg: &Config) -> Result<(Network, Vec<Job>)> {
    cfg.validate()?;
    let bound = prop.bind(net)?;
    let roots = prop
        .input
        .regions
        .iter()
        .enumerate()
        .map(|(k, r)| Job::root(k, r.clone()))
        .collect();
    Ok((bound, roots))
}

/// Decide whether the constraint holds on every input region.
///
/// Returns `Insecure` with a concrete counterexample as soon as any worker
/// finds one, `Secure` once every leaf is proven, and `Unknown` when some
/// leaf ran out of depth, width or time.
pub fn verify(net: &Network, prop: &Property, cfg: &Config) -> Result<Verdict> {
    let start = Instant::now();
    let (net, roots) = prepare(net, prop, cfg)?;
    let sh = Shared {
        net: &net,
        constraint: &prop.constraint,
        cfg,
        limits: prop.input.regions.iter().map(|r| cfg.depth_limit(r)).collect(),
        deadline: start.checked_add(cfg.timeout),
    };
    let reduce = cfg.monotonicity && cfg.mode == Mode::Symbolic;
    let cancel = AtomicBool::new(false);
    let cex: Mutex<Option<Vec<f64>>> = Mutex::new(None);
    let unresolved = AtomicBool::new(false);

    let tallies = scheduler::run(roots, cfg.workers, &cancel, Tally::default, |t: &mut Tally, job: Job, out| {
        t.max_depth = t.max_depth.max(job.depth);
        if sh.timed_out() {
            t.timed_out = true;
            t.leaf(job.depth);
            unresolved.store(true, Ordering::Release);
            return;
        }
        t.nodes += 1;
        let fr = sh.analyse(&job.bx);
        if sh.truth(fr.as_ref()) == Truth::True {
            t.leaf(job.depth);
            return;
        }
        if let Some(x) = sh.sample(&job.bx) {
            t.leaf(job.depth);
            cex.lock().expect("cex lock").get_or_insert(x);
            cancel.store(true, Ordering::Release);
            return;
        }
        let limit = sh.limits[job.region];
        if job.depth >= limit {
            t.leaf(job.depth);
            unresolved.store(true, Ordering::Release);
            return;
        }
        if reduce {
            if let Some(kids) = fr.as_ref().and_then(|fr| sh.reduce(&job, fr, limit - job.depth)) {
                out.extend(kids);
                return;
            }
        }
        match sh.split(&job, fr.as_ref()) {
            Some(kids) => out.extend(kids),
            None => {
                t.leaf(job.depth);
                unresolved.store(true, Ordering::Release);
            }
        }
    });

    let stats = Tally::stats(&tallies, start);
    let counterexample = cex.into_inner().expect("cex lock");
    let status = if counterexample.is_some() {
        Status::Insecure
    } else if unresolved.load(Ordering::Acquire) {
        Status::Unknown
    } else {
        Status::Secure
    };
    Ok(Verdict {
        status,
        counterexample,
        stats,
    })
}

/// Split every input region into sub-boxes labelled secure, insecure or
/// unknown. Never stops early; the leaves partition the regions.
pub fn enumerate(net: &Network, prop: &Property, cfg: &Config) -> Result<PartitionReport> {
    let start = Instant::now();
    let (net, roots) = prepare(net, prop, cfg)?;
    let sh = Shared {
        net: &net,
        constraint: &prop.constraint,
        cfg,
        limits: prop.input.regions.iter().map(|r| cfg.depth_limit(r)).collect(),
        deadline: start.checked_add(cfg.timeout),
    };
    let cancel = AtomicBool::new(false);

    #[derive(Default)]
    struct Local {
        tally: Tally,
        leaves: Vec<PartitionEntry>,
    }

    let leaf = |l: &mut Local, job: Job, status: SubStatus, cex: Option<Vec<f64>>| {
        l.tally.leaf(job.depth);
        l.leaves.push(PartitionEntry {
            region: job.region,
            bx: job.bx,
            status,
            counterexample: cex,
            depth: job.depth,
            lineage: job.lineage,
        });
    };

    let locals = scheduler::run(roots, cfg.workers, &cancel, Local::default, |l: &mut Local, job: Job, out| {
        l.tally.max_depth = l.tally.max_depth.max(job.depth);
        if sh.timed_out() {
            l.tally.timed_out = true;
            return leaf(l, job, SubStatus::UnknownSub, None);
        }
        l.tally.nodes += 1;
        let fr = sh.analyse(&job.bx);
        match sh.truth(fr.as_ref()) {
            Truth::True => return leaf(l, job, SubStatus::SecureSub, None),
            Truth::False => {
                let mid = job.bx.midpoint();
                if sh.violates(&mid) {
                    return leaf(l, job, SubStatus::InsecureSub, Some(mid));
                }
            }
            Truth::Unknown => {}
        }
        let split = if job.depth < sh.limits[job.region] {
            sh.split(&job, fr.as_ref())
        } else {
            None
        };
        match split {
            Some(kids) => out.extend(kids),
            None => match sh.sample(&job.bx) {
                Some(x) => leaf(l, job, SubStatus::InsecureSub, Some(x)),
                None => leaf(l, job, SubStatus::UnknownSub, None),
            },
        }
    });

    let mut tallies = Vec::with_capacity(locals.len());
    let mut entries = Vec::new();
    for l in locals {
        tallies.push(l.tally);
        entries.extend(l.leaves);
    }
    entries.sort_by(|a, b| (a.region, &a.lineage).cmp(&(b.region, &b.lineage)));
    Ok(PartitionReport {
        entries,
        stats: Tally::stats(&tallies, start),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{Activation, Layer};
    use crate::property::{Atom, InputSpec, Units};
    use ndarray::array;

    fn two_neuron_net() -> Network {
        Network::new(
            vec![
                Layer::new(array![[2.0, 3.0], [1.0, 1.0]], array![0.0, 0.0], Activation::Relu).unwrap(),
                Layer::new(array![[1.0, -1.0]], array![0.0], Activation::Identity).unwrap(),
            ],
            None,
        )
        .unwrap()
    }

    fn prop(regions: &[&[(f64, f64)]], c: Atom) -> Property {
        let input = InputSpec {
            regions: regions.iter().map(|r| IntervalBox::from_bounds(r).unwrap()).collect(),
            units: Units::Raw,
        };
        Property::new(input, Constraint::Atom(c), 1).unwrap()
    }

    fn cfg(mode: Mode) -> Config {
        Config {
            mode,
            workers: 2,
            ..Config::default()
        }
    }

    const REGION: &[(f64, f64)] = &[(4.0, 6.0), (1.0, 5.0)];

    #[test]
    fn symbolic_proves_at_root() {
        let v = verify(&two_neuron_net(), &prop(&[REGION], Atom::OutLe(0, 20.0)), &cfg(Mode::Symbolic)).unwrap();
        assert_eq!(v.status, Status::Secure);
        assert_eq!(v.counterexample, None);
        assert_eq!(v.stats.nodes_explored, 1);
        assert_eq!(v.stats.max_depth, 0);
    }

    #[test]
    fn naive_needs_one_split_on_y() {
        let v = verify(&two_neuron_net(), &prop(&[REGION], Atom::OutLe(0, 20.0)), &cfg(Mode::Naive)).unwrap();
        assert_eq!(v.status, Status::Secure);
        assert_eq!(v.stats.nodes_explored, 3);
        assert_eq!(v.stats.max_depth, 1);
    }

    #[test]
    fn finds_counterexample() {
        for mode in [Mode::Symbolic, Mode::Naive] {
            let p = prop(&[REGION], Atom::OutLe(0, 15.0));
            let v = verify(&two_neuron_net(), &p, &cfg(mode)).unwrap();
            assert_eq!(v.status, Status::Insecure);
            let x = v.counterexample.unwrap();
            assert!(p.input.regions[0].contains_point(&x));
            assert!(two_neuron_net().eval(&x).unwrap()[0] > 15.0);
        }
    }

    #[test]
    fn monotone_reduction_agrees() {
        for c in [15.0, 16.0, 15.999] {
            let p = prop(&[REGION], Atom::OutLe(0, c));
            let on = verify(&two_neuron_net(), &p, &cfg(Mode::Symbolic)).unwrap();
            let off = verify(
                &two_neuron_net(),
                &p,
                &Config {
                    monotonicity: false,
                    precision: 1e-4,
                    ..cfg(Mode::Symbolic)
                },
            )
            .unwrap();
            assert_eq!(on.status, off.status, "threshold {c}");
        }
    }

    #[test]
    fn unknown_when_depth_runs_out() {
        // the maximum 16 is only reached at a corner, never by a midpoint
        let p = prop(&[REGION], Atom::OutLe(0, 15.999));
        let c = Config {
            max_depth: Some(2),
            monotonicity: false,
            ..cfg(Mode::Naive)
        };
        let v = verify(&two_neuron_net(), &p, &c).unwrap();
        assert_eq!(v.status, Status::Unknown);
        assert!(v.stats.max_depth <= 2);
        let c = Config {
            sample_strategy: SampleStrategy::MidpointPlusCorners,
            ..c
        };
        assert_eq!(verify(&two_neuron_net(), &p, &c).unwrap().status, Status::Insecure);
    }

    #[test]
    fn regions_conjoin() {
        let far: &[(f64, f64)] = &[(0.0, 1.0), (0.0, 1.0)];
        let p = prop(&[far, REGION], Atom::OutLe(0, 15.0));
        assert_eq!(verify(&two_neuron_net(), &p, &cfg(Mode::Symbolic)).unwrap().status, Status::Insecure);
        let p = prop(&[far, REGION], Atom::OutLe(0, 20.0));
        assert_eq!(verify(&two_neuron_net(), &p, &cfg(Mode::Symbolic)).unwrap().status, Status::Secure);
    }

    #[test]
    fn enumerate_partitions_region() {
        let p = prop(&[REGION], Atom::OutLe(0, 15.0));
        let c = Config {
            precision: 0.5,
            ..cfg(Mode::Symbolic)
        };
        let r = enumerate(&two_neuron_net(), &p, &c).unwrap();
        let total: f64 = r.entries.iter().map(|e| e.bx.volume()).sum();
        assert!((total - 8.0).abs() < 1e-12);
        assert!(r.count(SubStatus::SecureSub) > 0);
        assert!(r.count(SubStatus::InsecureSub) > 0);
        for e in &r.entries {
            if let Some(x) = &e.counterexample {
                assert!(e.bx.contains_point(x));
                assert!(two_neuron_net().eval(x).unwrap()[0] > 15.0);
            }
        }
    }

    #[test]
    fn enumerate_trivial_cases() {
        let r = enumerate(&two_neuron_net(), &prop(&[REGION], Atom::OutLe(0, 20.0)), &cfg(Mode::Symbolic)).unwrap();
        assert_eq!(r.entries.len(), 1);
        assert_eq!(r.entries[0].status, SubStatus::SecureSub);
        assert_eq!(r.entries[0].bx, IntervalBox::from_bounds(REGION).unwrap());

        let point: &[(f64, f64)] = &[(6.0, 6.0), (5.0, 5.0)];
        let r = enumerate(&two_neuron_net(), &prop(&[point], Atom::OutLe(0, 15.0)), &cfg(Mode::Symbolic)).unwrap();
        assert_eq!(r.entries.len(), 1);
        assert_eq!(r.entries[0].status, SubStatus::InsecureSub);
    }

    #[test]
    fn config_validation() {
        let p = prop(&[REGION], Atom::OutLe(0, 20.0));
        for bad in [
            Config { precision: 0.0, ..Config::default() },
            Config { precision: f64::NAN, ..Config::default() },
            Config { workers: 0, ..Config::default() },
        ] {
            assert!(matches!(verify(&two_neuron_net(), &p, &bad), Err(Error::InvalidConfig(_))));
        }
    }

    #[test]
    fn default_depth_limit() {
        let c = Config {
            precision: 0.5,
            ..Config::default()
        };
        // widest input 4 -> 3 halvings per input, plus one endpoint each
        assert_eq!(c.depth_limit(&IntervalBox::from_bounds(REGION).unwrap()), 8);
    }

    #[test]
    fn corner_samples() {
        let b = IntervalBox::from_bounds(REGION).unwrap();
        let pts = sample_points(&b, SampleStrategy::MidpointPlusCorners);
        assert_eq!(pts.len(), 5);
        assert_eq!(pts[0], vec![5.0, 3.0]);
        assert!(pts.contains(&vec![6.0, 5.0]));
        assert_eq!(sample_points(&b, SampleStrategy::Midpoint).len(), 1);
    }
}
