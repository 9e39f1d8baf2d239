//! Reports and their JSON and table forms.

use std::collections::BTreeMap;
use std::fmt::Write;
use std::time::Duration;

use serde::Serialize;
use sha2::{Digest, Sha256};
use skein_core::fgoracle::LensReport;
use skein_core::heegaard;

use crate::expr::ManifoldExpr;
use crate::{Engine, RunConfig};

/// Larger bases are left out of reports.
pub const BASIS_LIMIT: usize = 1000;

/// Result of one engine, or of their agreement, on one manifold.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub dimension: u64,
    pub stabilized: bool,
    pub stabilization_degree: usize,
    pub safe_degree: usize,
    /// `None` when too large to list.
    pub basis: Option<Vec<String>>,
    pub strategy: String,
    pub timings: Vec<(String, Duration)>,
}

impl Outcome {
    pub fn from_heegaard(r: heegaard::Report, engine: &str) -> Self {
        Outcome {
            dimension: r.dimension,
            stabilized: r.stabilized,
            stabilization_degree: r.stabilization_degree,
            safe_degree: r.safe_degree,
            basis: Some(r.basis.iter().map(|w| w.to_string()).collect()),
            strategy: r.strategy,
            timings: r.timings.into_iter().map(|(k, v)| (format!("{engine}.{k}"), v)).collect(),
        }
    }

    pub fn from_lens(r: LensReport) -> Self {
        Outcome {
            dimension: r.dimension,
            stabilized: r.stabilized,
            stabilization_degree: r.stabilization_degree,
            safe_degree: r.safe_degree,
            basis: Some(r.basis.iter().map(|(i, j)| format!("z^{i} (x) z^{j}")).collect()),
            strategy: r.strategy,
            timings: r.timings.into_iter().map(|(k, v)| (format!("fg.{k}"), v)).collect(),
        }
    }

    /// Both engines on one manifold; the basis is the internal one.
    pub fn agreed(internal: Outcome, fg: Outcome) -> Self {
        Outcome {
            stabilized: internal.stabilized && fg.stabilized,
            strategy: format!("internal: {}; fg: {}", internal.strategy, fg.strategy),
            timings: internal.timings.into_iter().chain(fg.timings).collect(),
            ..internal
        }
    }

    /// Dimensions multiply over summands.
    pub fn connected_sum(parts: &[Outcome]) -> Self {
        let size: Option<usize> = parts.iter().try_fold(1usize, |n, p| n.checked_mul(p.basis.as_ref()?.len()));
        let basis = match size {
            Some(n) if n <= BASIS_LIMIT => Some(parts.iter().fold(vec![String::new()], |acc, p| {
                let b = p.basis.as_ref().expect("sized");
                acc.iter().flat_map(|x| b.iter().map(move |y| if x.is_empty() { y.clone() } else { format!("{x} # {y}") })).collect()
            })),
            _ => None,
        };
        Outcome {
            dimension: parts.iter().map(|p| p.dimension).product(),
            stabilized: parts.iter().all(|p| p.stabilized),
            stabilization_degree: parts.iter().map(|p| p.stabilization_degree).max().unwrap_or(0),
            safe_degree: parts.iter().map(|p| p.safe_degree).min().unwrap_or(0),
            basis,
            strategy: parts.iter().map(|p| p.strategy.as_str()).collect::<Vec<_>>().join(" # "),
            timings: parts.iter().enumerate().flat_map(|(i, p)| p.timings.iter().map(move |(k, v)| (format!("{i}.{k}"), *v))).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub manifold: String,
    pub dimension: u64,
    pub stabilized: bool,
    pub stabilization_degree: usize,
    pub safe_degree: usize,
    pub engine: Engine,
    pub strategy: String,
    pub seed: u64,
    pub samples: usize,
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    pub basis_omitted: bool,
    /// Seconds.
    pub timings: BTreeMap<String, f64>,
    pub config_hash: String,
}

/// Everything that determines a report apart from timings.
#[derive(Serialize)]
struct HashInput {
    manifold: String,
    engine: Engine,
    max_degree: Option<usize>,
    samples: usize,
    seed: u64,
    window: usize,
    exact: bool,
    emit_basis: bool,
}

pub fn config_hash(m: &ManifoldExpr, c: &RunConfig) -> String {
    let input = HashInput {
        manifold: m.to_string(),
        engine: c.engine,
        max_degree: c.max_degree,
        samples: c.samples,
        seed: c.seed,
        window: c.window,
        exact: c.exact,
        emit_basis: c.emit_basis,
    };
    hex::encode(Sha256::digest(serde_json::to_vec(&input).expect("plain data serializes")))
}

impl Report {
    pub fn new(m: &ManifoldExpr, c: &RunConfig, o: Outcome) -> Self {
        let (basis, basis_omitted) = match (c.emit_basis, o.basis) {
            (false, _) => (None, false),
            (true, Some(b)) if b.len() <= BASIS_LIMIT => (Some(b), false),
            (true, _) => (None, true),
        };
        Report {
            manifold: m.to_string(),
            dimension: o.dimension,
            stabilized: o.stabilized,
            stabilization_degree: o.stabilization_degree,
            safe_degree: o.safe_degree,
            engine: c.engine,
            strategy: o.strategy,
            seed: c.seed,
            samples: c.samples,
            exact: c.exact,
            basis,
            basis_omitted,
            timings: o.timings.into_iter().map(|(k, v)| (k, v.as_secs_f64())).collect(),
            config_hash: config_hash(m, c),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let rows: [(&str, String); 10] = [
            ("manifold", self.manifold.clone()),
            ("dimension", self.dimension.to_string()),
            ("stabilized", self.stabilized.to_string()),
            ("stabilization_degree", self.stabilization_degree.to_string()),
            ("safe_degree", self.safe_degree.to_string()),
            ("engine", self.engine.to_string()),
            ("strategy", self.strategy.clone()),
            ("seed", self.seed.to_string()),
            ("samples", self.samples.to_string()),
            ("config_hash", self.config_hash.clone()),
        ];
        for (k, v) in rows {
            writeln!(s, "{k:<21} {v}").expect("writing to a string");
        }
        for (k, v) in &self.timings {
            writeln!(s, "{:<21} {v:.3}s", format!("time {k}")).expect("writing to a string");
        }
        if self.basis_omitted {
            writeln!(s, "{:<21} omitted (over {BASIS_LIMIT} entries)", "basis").expect("writing to a string");
        }
        for (i, b) in self.basis.iter().flatten().enumerate() {
            writeln!(s, "{:<21} {b}", if i == 0 { "basis" } else { "" }).expect("writing to a string");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn outcome(dimension: u64, basis: usize) -> Outcome {
        Outcome {
            dimension,
            stabilized: true,
            stabilization_degree: 2,
            safe_degree: 5,
            basis: Some((0..basis).map(|i| format!("w{i}")).collect()),
            strategy: "test".into(),
            timings: vec![("x.step".into(), Duration::from_millis(5))],
        }
    }

    #[test]
    fn sums_multiply() {
        let s = Outcome::connected_sum(&[outcome(2, 2), outcome(3, 3)]);
        assert_eq!(s.dimension, 6);
        assert_eq!(s.basis.as_ref().unwrap().len(), 6);
        assert_eq!(s.basis.as_ref().unwrap()[1], "w0 # w1");
        assert_eq!(s.timings.len(), 2);
        let big = Outcome::connected_sum(&[outcome(40, 40), outcome(40, 40)]);
        assert_eq!(big.dimension, 1600);
        assert!(big.basis.is_none());
    }

    #[test]
    fn large_bases_are_omitted() {
        let m: ManifoldExpr = "s3".parse().unwrap();
        let c = RunConfig { emit_basis: true, ..RunConfig::default() };
        let r = Report::new(&m, &c, outcome(1001, 1001));
        assert!(r.basis.is_none() && r.basis_omitted);
        assert!(r.to_json().contains("\"basis_omitted\": true"));
        assert!(r.to_table().contains("omitted"));
        let r = Report::new(&m, &c, outcome(3, 3));
        assert_eq!(r.basis.as_ref().unwrap().len(), 3);
        let r = Report::new(&m, &RunConfig::default(), outcome(3, 3));
        assert!(r.basis.is_none() && !r.basis_omitted);
        assert!(!r.to_json().contains("\"basis\""));
    }

    #[test]
    fn table_shows_the_flag() {
        let m: ManifoldExpr = "lens(2,1)".parse().unwrap();
        let mut o = outcome(2, 2);
        o.stabilized = false;
        let t = Report::new(&m, &RunConfig::default(), o).to_table();
        assert!(t.lines().any(|l| l.starts_with("stabilized") && l.ends_with("false")));
    }

    #[test]
    fn hash_ignores_timings_and_threads() {
        let m: ManifoldExpr = "lens(2,1)".parse().unwrap();
        let c = RunConfig::default();
        let a = Report::new(&m, &c, outcome(2, 2));
        let mut o = outcome(2, 2);
        o.timings[0].1 = Duration::from_secs(9);
        let b = Report::new(&m, &RunConfig { threads: Some(3), ..c.clone() }, o);
        assert_eq!(a.config_hash, b.config_hash);
        assert_ne!(a.config_hash, Report::new(&m, &RunConfig { seed: 1, ..c }, outcome(2, 2)).config_hash);
    }
}
