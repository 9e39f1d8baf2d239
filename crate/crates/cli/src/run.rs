//! Dispatch of manifold expressions to the engines.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use skein_core::fgoracle::{lens_dimension, FgError, FgOptions};
use skein_core::heegaard::{certify, lens_word, splice_dimension, Automorphism, DimensionOptions, GenusOneEngine, HeegaardError, MapWord};
use skein_core::ncalg::{load_cached, store_cached, GenId, NcError, RewriteSystem};
use skein_core::presentations::{certified_completion, dq_presentation};
use thiserror::Error;

use crate::expr::{Gluing, ManifoldExpr};
use crate::report::{Outcome, Report};
use crate::{Engine, RunConfig};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Heegaard(#[from] HeegaardError),
    #[error(transparent)]
    Fg(#[from] FgError),
    #[error(transparent)]
    Nc(#[from] NcError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Unsupported(String),
    #[error("engines disagree on {manifold}: internal {} vs fg {}", internal.dimension, fg.dimension)]
    Disagreement { manifold: String, internal: Box<Outcome>, fg: Box<Outcome> },
}

/// Holds the genus-one engine once built, so that sums reuse it.
pub struct Runner<'a> {
    config: &'a RunConfig,
    genus_one: Option<GenusOneEngine>,
}

impl<'a> Runner<'a> {
    pub fn new(config: &'a RunConfig) -> Self {
        Runner { config, genus_one: None }
    }

    pub fn run(&mut self, m: &ManifoldExpr) -> Result<Report, RunError> {
        let outcome = self.outcome(m)?;
        Ok(Report::new(m, self.config, outcome))
    }

    fn outcome(&mut self, m: &ManifoldExpr) -> Result<Outcome, RunError> {
        if let ManifoldExpr::ConnectedSum(parts) = m {
            let outcomes = parts.iter().map(|p| self.outcome(p)).collect::<Result<Vec<_>, _>>()?;
            return Ok(Outcome::connected_sum(&outcomes));
        }
        match self.config.engine {
            Engine::Internal => self.internal(m),
            Engine::Fg => self.fg(m),
            Engine::Both => {
                let internal = self.internal(m)?;
                let fg = self.fg(m)?;
                if internal.dimension != fg.dimension {
                    return Err(RunError::Disagreement { manifold: m.to_string(), internal: Box::new(internal), fg: Box::new(fg) });
                }
                Ok(Outcome::agreed(internal, fg))
            }
        }
    }

    fn dimension_options(&self) -> DimensionOptions {
        let c = self.config;
        DimensionOptions { max_degree: c.max_degree, window: c.window, samples: c.samples, seed: c.seed, exact: c.exact }
    }

    fn internal(&mut self, m: &ManifoldExpr) -> Result<Outcome, RunError> {
        let word = match m {
            ManifoldExpr::S3 => "S".parse()?,
            ManifoldExpr::S2xS1 => MapWord::default(),
            ManifoldExpr::Lens(p, q) => lens_word(*p as u64, *q)?,
            ManifoldExpr::Splice(1, Gluing::Word(w)) => w.clone(),
            ManifoldExpr::Splice(g, Gluing::Word(w)) if w.0.is_empty() => return self.splice(*g, Automorphism::identity()),
            ManifoldExpr::Splice(_, Gluing::Word(_)) => {
                return Err(RunError::Unsupported("gluing words act on genus one; give higher genus gluings as @file".into()))
            }
            ManifoldExpr::Splice(g, Gluing::File(path)) => {
                let text = fs::read_to_string(path).map_err(|source| RunError::Io { path: path.clone(), source })?;
                return self.splice(*g, text.parse()?);
            }
            ManifoldExpr::ConnectedSum(_) => unreachable!("sums are split before dispatch"),
        };
        let opts = self.dimension_options();
        let engine = self.genus_one()?;
        Ok(Outcome::from_heegaard(engine.dimension(&word, &opts)?, "internal"))
    }

    fn genus_one(&mut self) -> Result<&GenusOneEngine, RunError> {
        if self.genus_one.is_none() {
            let sys = self.completed(1, GenusOneEngine::DEGREE)?;
            self.genus_one = Some(GenusOneEngine::from_system(sys)?);
        }
        Ok(self.genus_one.as_ref().expect("just built"))
    }

    /// A flat completion of the genus `g` presentation, through the cache
    /// when one is configured.
    fn completed(&self, genus: usize, degree: usize) -> Result<RewriteSystem, RunError> {
        let p = dq_presentation(genus);
        let hash = p.hash();
        if let Some(dir) = &self.config.cache {
            if let Some(sys) = load_cached(dir, &hash, degree)? {
                return Ok(sys);
            }
        }
        let (report, sys) = certified_completion(&p, degree)?;
        if !report.flat {
            return Err(HeegaardError::Degree { degree, safe: report.safe_degree }.into());
        }
        if let Some(dir) = &self.config.cache {
            store_cached(dir, &hash, &sys)?;
        }
        Ok(sys)
    }

    fn splice(&mut self, genus: usize, phi: Automorphism) -> Result<Outcome, RunError> {
        let top = (1..=genus)
            .flat_map(|f| [(1, 1), (1, 2), (2, 1), (2, 2)].map(|(i, j)| GenId::b(f, i, j)))
            .map(|g| phi.image(g).degree().unwrap_or(0))
            .max()
            .unwrap_or(1);
        let degree = self.config.max_degree.unwrap_or(top + self.config.window + 1);
        let start = Instant::now();
        let sys = self.completed(genus, degree)?;
        let completion = start.elapsed();
        let phi = certify(phi, &sys, &dq_presentation(genus), degree)?;
        let mut r = splice_dimension(&sys, genus, &phi, degree, &self.dimension_options())?;
        r.timings.insert(0, ("completion".into(), completion));
        Ok(Outcome::from_heegaard(r, "internal"))
    }

    fn fg(&mut self, m: &ManifoldExpr) -> Result<Outcome, RunError> {
        let (p, q) = match m {
            ManifoldExpr::S3 => (1, 0),
            ManifoldExpr::S2xS1 => (0, 1),
            ManifoldExpr::Lens(p, q) => (*p, *q),
            ManifoldExpr::Splice(1, Gluing::Word(w)) => {
                let (p, q) = w.lens_parameters();
                if p < 0 {
                    (-p, -q)
                } else {
                    (p, q)
                }
            }
            ManifoldExpr::Splice(..) => return Err(RunError::Unsupported("the fg engine handles genus one gluing words only".into())),
            ManifoldExpr::ConnectedSum(_) => unreachable!("sums are split before dispatch"),
        };
        let c = self.config;
        let opts = FgOptions { max_degree: c.max_degree, window: c.window, samples: c.samples, seed: c.seed, exact: c.exact, ..FgOptions::default() };
        Ok(Outcome::from_lens(lens_dimension(p, q, &opts)?))
    }
}

/// Whether a cached completion for genus `g` through `degree` is present.
pub fn is_cached(dir: &Path, genus: usize, degree: usize) -> bool {
    load_cached(dir, &dq_presentation(genus).hash(), degree).ok().flatten().is_some()
}
