//! Manifold expressions.
//!
//! ```text
//! manifold := atom ("#" atom)*
//! atom     := "s3" | "s2xs1" | "lens(" int "," int ")" | "splice(" int "," gluing ")"
//! gluing   := ("S" | "T" | "T'" | "Tb")+ | "id" | "@" path
//! ```

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_integer::Integer;
use skein_core::heegaard::MapWord;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gluing {
    Word(MapWord),
    /// Images of the generators, one `generator = polynomial` per line.
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ManifoldExpr {
    S3,
    S2xS1,
    Lens(i64, i64),
    Splice(usize, Gluing),
    ConnectedSum(Vec<ManifoldExpr>),
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("at {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

/// Lens parameters the engines accept: coprime with `p >= 0`, or
/// `L(0, +-1)` and `L(1, q)`.
pub fn valid_lens(p: i64, q: i64) -> bool {
    p >= 0 && (p == 1 || p.gcd(&q) == 1)
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos, msg: msg.into() })
    }

    fn rest(&self) -> &str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let rest = self.rest();
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            self.fail(format!("expected {token:?}"))
        }
    }

    fn int(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let rest = self.rest();
        let len = rest.char_indices().find(|&(i, c)| !(c.is_ascii_digit() || (i == 0 && c == '-'))).map_or(rest.len(), |(i, _)| i);
        match rest[..len].parse() {
            Ok(v) => {
                self.pos += len;
                Ok(v)
            }
            Err(_) => self.fail("expected an integer"),
        }
    }

    fn gluing(&mut self) -> Result<Gluing, ParseError> {
        self.skip_ws();
        let len = self.rest().find(')').unwrap_or(self.rest().len());
        let body = self.rest()[..len].trim().to_string();
        if let Some(path) = body.strip_prefix('@') {
            if path.is_empty() {
                return self.fail("empty gluing file name");
            }
            self.pos += len;
            return Ok(Gluing::File(PathBuf::from(path)));
        }
        match body.parse::<MapWord>() {
            Ok(w) => {
                self.pos += len;
                Ok(Gluing::Word(w))
            }
            Err(e) => self.fail(e.to_string()),
        }
    }

    fn atom(&mut self) -> Result<ManifoldExpr, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.eat("s3") {
            return Ok(ManifoldExpr::S3);
        }
        if self.eat("s2xs1") {
            return Ok(ManifoldExpr::S2xS1);
        }
        if self.eat("lens") {
            self.expect("(")?;
            let p = self.int()?;
            self.expect(",")?;
            let q = self.int()?;
            self.expect(")")?;
            if !valid_lens(p, q) {
                return Err(ParseError { pos: start, msg: format!("lens({p},{q}) needs p >= 0 and gcd(p, q) = 1") });
            }
            return Ok(ManifoldExpr::Lens(p, q));
        }
        if self.eat("splice") {
            self.expect("(")?;
            let g = self.int()?;
            if g < 1 {
                return Err(ParseError { pos: start, msg: "genus must be positive".into() });
            }
            self.expect(",")?;
            let gluing = self.gluing()?;
            self.expect(")")?;
            return Ok(ManifoldExpr::Splice(g as usize, gluing));
        }
        self.fail("expected s3, s2xs1, lens(p,q) or splice(g,gluing)")
    }
}

impl FromStr for ManifoldExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let mut p = Parser { text: s, pos: 0 };
        let mut parts = vec![p.atom()?];
        while p.eat("#") {
            parts.push(p.atom()?);
        }
        p.skip_ws();
        if !p.rest().is_empty() {
            return p.fail("unexpected trailing input");
        }
        Ok(if parts.len() == 1 { parts.pop().expect("one part") } else { ManifoldExpr::ConnectedSum(parts) })
    }
}

impl fmt::Display for ManifoldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ManifoldExpr::S3 => f.write_str("s3"),
            ManifoldExpr::S2xS1 => f.write_str("s2xs1"),
            ManifoldExpr::Lens(p, q) => write!(f, "lens({p},{q})"),
            ManifoldExpr::Splice(g, Gluing::Word(w)) => write!(f, "splice({g},{w})"),
            ManifoldExpr::Splice(g, Gluing::File(path)) => write!(f, "splice({g},@{})", path.display()),
            ManifoldExpr::ConnectedSum(parts) => {
                for (i, m) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str("#")?;
                    }
                    write!(f, "{m}")?;
                }
                Ok(())
            }
        }
    }
}
