//! Workload generation and the plain-text instance format.
//!
//! The on-disk format is line oriented:
//!
//! ```text
//! no of consumers: 2
//! no of producers: 2
//! edge distances
//! 47
//! 17
//! 11
//! 2
//! producer capacities
//! 26
//! 839
//! consumer demands
//! 97
//! 78
//! Number of edge failures: 1
//! 1
//! 3
//! ```
//!
//! Distances are row-major by consumer. Consumer `i` demands at step `i`.
//! Each failure is two lines: the demand ordinal it follows, then the
//! 1-based flat edge number. Anything after `<-` on a line is a comment.

use std::fmt::Write;

use rand_core::RngCore;
use thiserror::Error;

use crate::model::{EdgeId, FailureEvent, ModelError, ProblemInstance, ServiceTrace};
use crate::rng::{seeded, uniform_inclusive, SplitMix64};

/// The Mersenne prime 2^61 − 1.
pub const HASH_PRIME: u64 = (1 << 61) - 1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{section}: header says {declared}, found {found}")]
    InconsistentCounts {
        section: &'static str,
        declared: usize,
        found: usize,
    },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("trace cannot be written: {0}")]
    NotRepresentable(&'static str),
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid generator spec: {0}")]
pub struct InvalidSpec(pub String);

/// Parameters of `h(x) = ((a·x + b) mod p) mod m` with `p = 2^61 − 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HashParams {
    a: u64,
    b: u64,
    m: u64,
}

impl HashParams {
    pub fn new(a: u64, b: u64, m: u64) -> Result<Self, InvalidSpec> {
        if a == 0 || a >= HASH_PRIME {
            return Err(InvalidSpec(format!("hash multiplier {a} outside [1, p)")));
        }
        if b >= HASH_PRIME {
            return Err(InvalidSpec(format!("hash offset {b} outside [0, p)")));
        }
        if m == 0 {
            return Err(InvalidSpec("hash modulus must be >= 1".into()));
        }
        Ok(Self { a, b, m })
    }

    /// Draws `a` and `b` uniformly from their ranges.
    pub fn random<R: RngCore + ?Sized>(rng: &mut R, m: u64) -> Result<Self, InvalidSpec> {
        let a = uniform_inclusive(rng, 1, HASH_PRIME - 1);
        let b = uniform_inclusive(rng, 0, HASH_PRIME - 1);
        Self::new(a, b, m)
    }

    pub fn with_modulus(self, m: u64) -> Result<Self, InvalidSpec> {
        Self::new(self.a, self.b, m)
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn m(&self) -> u64 {
        self.m
    }
}

pub fn pairwise_hash(params: &HashParams, x: u64) -> u64 {
    let p = u128::from(HASH_PRIME);
    let v = (u128::from(params.a) * u128::from(x) + u128::from(params.b)) % p;
    (v % u128::from(params.m)) as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DemandOrder {
    /// Every value drawn independently from the seeded stream.
    Uniform,
    /// Uniform draws, demands sorted non-decreasing.
    Ascending,
    /// Every value derived from one pairwise-independent hash function.
    HashStream,
}

impl DemandOrder {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "uniform" => Some(DemandOrder::Uniform),
            "ascending" => Some(DemandOrder::Ascending),
            "hash" | "hash_stream" | "hash-stream" => Some(DemandOrder::HashStream),
            _ => None,
        }
    }
}

/// Inclusive integer range.
pub type IntRange = (u64, u64);

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub num_consumers: usize,
    pub num_producers: usize,
    pub distance_range: IntRange,
    pub capacity_range: IntRange,
    pub demand_range: IntRange,
    pub demand_order: DemandOrder,
    pub failure_count: usize,
    pub seed: u64,
}

impl Default for GenSpec {
    fn default() -> Self {
        Self {
            num_consumers: 4,
            num_producers: 4,
            distance_range: (1, 50),
            capacity_range: (10, 1000),
            demand_range: (1, 100),
            demand_order: DemandOrder::Uniform,
            failure_count: 0,
            seed: 0,
        }
    }
}

impl GenSpec {
    pub fn validate(&self) -> Result<(), InvalidSpec> {
        if self.num_consumers == 0 || self.num_producers == 0 {
            return Err(InvalidSpec("consumer and producer counts must be positive".into()));
        }
        for (name, (lo, hi)) in [
            ("distance", self.distance_range),
            ("capacity", self.capacity_range),
            ("demand", self.demand_range),
        ] {
            if lo > hi {
                return Err(InvalidSpec(format!("{name} range {lo}..={hi} is empty")));
            }
        }
        if self.distance_range.0 == 0 {
            return Err(InvalidSpec("distances must be at least 1".into()));
        }
        let edges = self.num_consumers * self.num_producers;
        if self.failure_count > edges {
            return Err(InvalidSpec(format!(
                "{} failures requested but only {edges} edges exist",
                self.failure_count
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy)]
enum Field {
    Distance = 1,
    Capacity = 2,
    Demand = 3,
    FailureStep = 4,
    FailureEdge = 5,
}

/// Where generated integers come from.
enum Source {
    Stream(SplitMix64),
    Hash(HashParams),
}

impl Source {
    fn draw(&mut self, field: Field, index: u64, lo: u64, hi: u64) -> u64 {
        match self {
            Source::Stream(rng) => uniform_inclusive(rng, lo, hi),
            Source::Hash(params) => {
                // distinct input per (field, index); spans fit in u64 here
                let x = ((field as u64) << 40) | index;
                let span = (hi - lo).saturating_add(1);
                let h = params.with_modulus(span).expect("span >= 1");
                lo + pairwise_hash(&h, x)
            }
        }
    }
}

/// Generates an instance and trace, deterministically from `spec.seed`.
/// Capacities are scaled up by `ceil(ΣR / ΣM)` when the total demand would
/// not fit, so the full demand set is always feasible before failures.
pub fn generate(spec: &GenSpec) -> Result<(ProblemInstance, ServiceTrace), InvalidSpec> {
    spec.validate()?;
    let n = spec.num_consumers;
    let m = spec.num_producers;
    let mut rng = seeded(spec.seed);
    let mut source = match spec.demand_order {
        DemandOrder::HashStream => Source::Hash(HashParams::random(&mut rng, 1)?),
        _ => Source::Stream(rng),
    };

    let distances: Vec<f64> = (0..n * m)
        .map(|i| source.draw(Field::Distance, i as u64, spec.distance_range.0, spec.distance_range.1) as f64)
        .collect();
    let mut capacities: Vec<u64> = (0..m)
        .map(|j| source.draw(Field::Capacity, j as u64, spec.capacity_range.0, spec.capacity_range.1))
        .collect();
    let mut demands: Vec<u64> = (0..n)
        .map(|i| source.draw(Field::Demand, i as u64, spec.demand_range.0, spec.demand_range.1))
        .collect();
    if spec.demand_order == DemandOrder::Ascending {
        demands.sort_unstable();
    }

    let total_demand: u64 = demands.iter().sum();
    let mut total_capacity: u64 = capacities.iter().sum();
    if total_demand > 0 && total_capacity == 0 {
        capacities.iter_mut().for_each(|c| *c = 1);
        total_capacity = m as u64;
    }
    if total_demand > total_capacity {
        let factor = total_demand.div_ceil(total_capacity);
        capacities.iter_mut().for_each(|c| *c *= factor);
    }

    let mut pool: Vec<usize> = (1..=n * m).collect();
    let mut failures = Vec::with_capacity(spec.failure_count);
    for f in 0..spec.failure_count {
        let after_demand = source.draw(Field::FailureStep, f as u64, 1, n as u64) as usize;
        let pick = source.draw(Field::FailureEdge, f as u64, 0, pool.len() as u64 - 1) as usize;
        let flat = pool.remove(pick);
        failures.push(FailureEvent {
            after_demand,
            edge: EdgeId::from_flat(flat, n, m).expect("flat index in range"),
        });
    }

    let instance = ProblemInstance::new(n, m, distances, capacities.into_iter().map(|c| c as f64).collect())
        .map_err(|e| InvalidSpec(e.to_string()))?;
    let amounts: Vec<f64> = demands.into_iter().map(|d| d as f64).collect();
    let trace =
        ServiceTrace::in_consumer_order(&instance, &amounts, failures).map_err(|e| InvalidSpec(e.to_string()))?;
    Ok((instance, trace))
}

struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)> + 'a> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.split("<-").next().unwrap_or("").trim()))
                .filter(|(_, l)| !l.is_empty()),
        );
        Self { inner: it.peekable() }
    }

    fn next(&mut self, expected: &str) -> Result<(usize, &'a str), FormatError> {
        self.inner.next().ok_or_else(|| FormatError::Syntax {
            line: 0,
            message: format!("unexpected end of input, expected {expected}"),
        })
    }

    fn header(&mut self, label: &str) -> Result<(), FormatError> {
        let (line, text) = self.next(label)?;
        if text.eq_ignore_ascii_case(label) {
            Ok(())
        } else {
            Err(FormatError::Syntax {
                line,
                message: format!("expected \"{label}\", found \"{text}\""),
            })
        }
    }

    fn counted(&mut self, label: &str) -> Result<usize, FormatError> {
        let (line, text) = self.next(label)?;
        let value = text
            .split_once(':')
            .filter(|(k, _)| k.trim().eq_ignore_ascii_case(label))
            .map(|(_, v)| v.trim())
            .ok_or_else(|| FormatError::Syntax {
                line,
                message: format!("expected \"{label}: <count>\", found \"{text}\""),
            })?;
        value.parse().map_err(|_| FormatError::Syntax {
            line,
            message: format!("bad count \"{value}\""),
        })
    }

    /// Numbers up to (not including) the next non-numeric line.
    fn numbers(&mut self) -> Vec<(usize, f64)> {
        let mut out = Vec::new();
        while let Some(&(line, text)) = self.inner.peek() {
            match text.parse::<f64>() {
                Ok(v) => {
                    out.push((line, v));
                    self.inner.next();
                }
                Err(_) => break,
            }
        }
        out
    }
}

fn expect_count(section: &'static str, declared: usize, found: usize) -> Result<(), FormatError> {
    if declared == found {
        Ok(())
    } else {
        Err(FormatError::InconsistentCounts {
            section,
            declared,
            found,
        })
    }
}

fn as_index(line: usize, v: f64) -> Result<usize, FormatError> {
    if v.fract() == 0.0 && (1.0..1e15).contains(&v) {
        Ok(v as usize)
    } else {
        Err(FormatError::Syntax {
            line,
            message: format!("expected a positive integer, found {v}"),
        })
    }
}

/// Reads the text format. The demand section holds either one line per
/// consumer or none at all (an instance with no demands yet).
pub fn parse_instance(text: &str) -> Result<(ProblemInstance, ServiceTrace), FormatError> {
    let mut lines = Lines::new(text);
    let n = lines.counted("no of consumers")?;
    let m = lines.counted("no of producers")?;

    lines.header("edge distances")?;
    let distances = lines.numbers();
    expect_count("edge distances", n * m, distances.len())?;
    lines.header("producer capacities")?;
    let capacities = lines.numbers();
    expect_count("producer capacities", m, capacities.len())?;
    lines.header("consumer demands")?;
    let demands = lines.numbers();
    if !demands.is_empty() {
        expect_count("consumer demands", n, demands.len())?;
    }
    let f = lines.counted("number of edge failures")?;
    let pairs = lines.numbers();
    expect_count("edge failures", 2 * f, pairs.len())?;
    if let Some((line, text)) = lines.inner.next() {
        return Err(FormatError::Syntax {
            line,
            message: format!("unexpected trailing content \"{text}\""),
        });
    }

    let instance = ProblemInstance::new(
        n,
        m,
        distances.into_iter().map(|(_, v)| v).collect(),
        capacities.into_iter().map(|(_, v)| v).collect(),
    )?;
    let failures = pairs
        .chunks(2)
        .map(|pair| {
            let after_demand = as_index(pair[0].0, pair[0].1)?;
            let flat = as_index(pair[1].0, pair[1].1)?;
            Ok(FailureEvent {
                after_demand,
                edge: instance.edge_from_flat(flat)?,
            })
        })
        .collect::<Result<Vec<_>, FormatError>>()?;
    let amounts: Vec<f64> = demands.into_iter().map(|(_, v)| v).collect();
    let trace = ServiceTrace::in_consumer_order(&instance, &amounts, failures)?;
    Ok((instance, trace))
}

/// Writes the canonical text. Requires the trace to be empty or to list
/// every consumer in index order, since the format has no other way to
/// express arrival order.
pub fn write_instance(instance: &ProblemInstance, trace: &ServiceTrace) -> Result<String, FormatError> {
    let in_order = trace.demands().iter().enumerate().all(|(i, d)| d.consumer == i);
    if !trace.is_empty() && !(in_order && trace.len() == instance.num_consumers()) {
        return Err(FormatError::NotRepresentable(
            "demands must cover every consumer in index order",
        ));
    }
    let mut out = String::new();
    writeln!(out, "no of consumers: {}", instance.num_consumers()).unwrap();
    writeln!(out, "no of producers: {}", instance.num_producers()).unwrap();
    out.push_str("edge distances\n");
    for d in instance.distances() {
        writeln!(out, "{d}").unwrap();
    }
    out.push_str("producer capacities\n");
    for c in instance.capacities() {
        writeln!(out, "{c}").unwrap();
    }
    out.push_str("consumer demands\n");
    for d in trace.demands() {
        writeln!(out, "{}", d.amount).unwrap();
    }
    writeln!(out, "Number of edge failures: {}", trace.failures().len()).unwrap();
    for f in trace.failures() {
        writeln!(out, "{}", f.after_demand).unwrap();
        writeln!(out, "{}", f.edge.flat(instance.num_producers())).unwrap();
    }
    Ok(out)
}
