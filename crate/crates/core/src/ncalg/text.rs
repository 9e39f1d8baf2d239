//! Text form of polynomials and completed systems, and the on-disk cache.
//!
//! A cache file is
//!
//! ```text
//! skein-rewrite-system 1
//! hash <hex digest of the presentation text>
//! degree <D>
//! safe <safe degree>
//! generators a1_11 a1_12 ...
//! rules <n>
//! <lhs word> -> <rhs polynomial>
//! ```

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::{GenId, NCPoly, NcError, RewriteSystem, Rule, Word};
use crate::coeff::Scalar;

const MAGIC: &str = "skein-rewrite-system 1";

impl FromStr for NCPoly<Scalar> {
    type Err = NcError;

    /// Parses the `Display` form: `[c] w + [c] w + ...` or `0`.
    fn from_str(s: &str) -> Result<Self, NcError> {
        let s = s.trim();
        if s == "0" {
            return Ok(NCPoly::zero());
        }
        let bad = |m: &str| NcError::Parse(format!("{m} in polynomial {s:?}"));
        let mut out = NCPoly::zero();
        let mut rest = s;
        loop {
            rest = rest.trim_start();
            let body = rest.strip_prefix('[').ok_or_else(|| bad("expected '['"))?;
            let close = body.find(']').ok_or_else(|| bad("unclosed '['"))?;
            let c: Scalar = body[..close].parse().map_err(|e| bad(&format!("{e}")))?;
            let after = &body[close + 1..];
            let (word, tail) = match after.find(" + [") {
                Some(i) => (&after[..i], Some(&after[i + 3..])),
                None => (after, None),
            };
            out.add_term(word.parse()?, c);
            match tail {
                Some(t) => rest = t,
                None => break,
            }
        }
        Ok(out)
    }
}

impl RewriteSystem<Scalar> {
    pub fn to_text(&self, hash: &str) -> String {
        let gens: Vec<String> = self.generators().iter().map(|g| g.to_string()).collect();
        let mut s = format!(
            "{MAGIC}\nhash {hash}\ndegree {}\nsafe {}\ngenerators {}\nrules {}\n",
            self.confluent_degree(),
            self.safe_degree(),
            gens.join(" "),
            self.rules().len()
        );
        for r in self.rules() {
            s.push_str(&format!("{} -> {}\n", r.lhs, r.rhs));
        }
        s
    }

    /// Parse a cache text, returning it with its recorded hash.
    pub fn from_text(text: &str) -> Result<(String, Self), NcError> {
        let bad = |m: String| NcError::Cache(m);
        let mut lines = text.lines();
        if lines.next() != Some(MAGIC) {
            return Err(bad("missing header".into()));
        }
        let mut field = |name: &str| -> Result<String, NcError> {
            let line = lines.next().ok_or_else(|| bad(format!("missing {name}")))?;
            line.strip_prefix(name).map(|r| r.trim().to_string()).ok_or_else(|| bad(format!("expected {name}, found {line:?}")))
        };
        let hash = field("hash")?;
        let degree: usize = field("degree")?.parse().map_err(|_| bad("bad degree".into()))?;
        let safe: usize = field("safe")?.parse().map_err(|_| bad("bad safe degree".into()))?;
        let gens = field("generators")?.split_whitespace().map(GenId::from_str).collect::<Result<Vec<_>, _>>()?;
        let n: usize = field("rules")?.parse().map_err(|_| bad("bad rule count".into()))?;
        let mut rules = Vec::with_capacity(n);
        for line in lines.by_ref().take(n) {
            let (l, r) = line.split_once(" -> ").ok_or_else(|| bad(format!("bad rule {line:?}")))?;
            rules.push(Rule { lhs: Word::from_str(l)?, rhs: r.parse()? });
        }
        if rules.len() != n {
            return Err(bad(format!("expected {n} rules, found {}", rules.len())));
        }
        Ok((hash, RewriteSystem::new(gens, rules, degree, safe)))
    }
}

fn cache_path(dir: &Path, hash: &str, degree: usize) -> PathBuf {
    dir.join(format!("rws-{}-d{degree}.txt", &hash[..hash.len().min(16)]))
}

/// Look up a completed system; a hit needs an exact hash match and the
/// requested degree. Readers take a shared lock on the file.
pub fn load_cached(dir: &Path, hash: &str, degree: usize) -> Result<Option<RewriteSystem>, NcError> {
    let path = cache_path(dir, hash, degree);
    let file = match File::open(&path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    file.lock_shared()?;
    let mut text = String::new();
    for line in BufReader::new(&file).lines() {
        text.push_str(&line?);
        text.push('\n');
    }
    file.unlock()?;
    let (h, sys) = RewriteSystem::from_text(&text)?;
    if h != hash || sys.confluent_degree() != degree {
        return Ok(None);
    }
    Ok(Some(sys))
}

/// Write a completed system under an exclusive lock.
pub fn store_cached(dir: &Path, hash: &str, sys: &RewriteSystem) -> Result<PathBuf, NcError> {
    fs::create_dir_all(dir)?;
    let path = cache_path(dir, hash, sys.confluent_degree());
    let mut file = OpenOptions::new().create(true).write(true).truncate(false).open(&path)?;
    file.lock()?;
    file.set_len(0)?;
    file.write_all(sys.to_text(hash).as_bytes())?;
    file.flush()?;
    file.unlock()?;
    Ok(path)
}
