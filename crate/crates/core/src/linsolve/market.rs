//! Matrix-market style text dump. Scalar entries use the field tag
//! `rational-function` and are written in the coefficient text syntax.

use std::fmt::Display;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use num_rational::BigRational;

use super::SparseMatrix;
use crate::coeff::{Field, Fp, Scalar};

pub trait MarketEntry: Field + Display {
    const TAG: &'static str;
    fn parse_entry(s: &str) -> Option<Self>;
}

impl MarketEntry for Scalar {
    const TAG: &'static str = "rational-function";
    fn parse_entry(s: &str) -> Option<Self> {
        Scalar::from_str(s).ok()
    }
}

impl MarketEntry for BigRational {
    const TAG: &'static str = "rational";
    fn parse_entry(s: &str) -> Option<Self> {
        BigRational::from_str(s).ok()
    }
}

impl MarketEntry for Fp {
    const TAG: &'static str = "integer";
    fn parse_entry(s: &str) -> Option<Self> {
        s.parse::<u64>().ok().map(Fp::new)
    }
}

impl<F: MarketEntry> SparseMatrix<F> {
    pub fn write_matrix_market<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "%%MatrixMarket matrix coordinate {} general", F::TAG)?;
        writeln!(w, "{} {} {}", self.nrows(), self.ncols(), self.nnz())?;
        for (i, row) in self.rows().iter().enumerate() {
            for (c, v) in row {
                writeln!(w, "{} {} {}", i + 1, c + 1, v)?;
            }
        }
        Ok(())
    }

    pub fn to_matrix_market(&self) -> String {
        let mut buf = Vec::new();
        self.write_matrix_market(&mut buf).expect("write to Vec");
        String::from_utf8(buf).expect("utf8")
    }
}

pub fn read_matrix_market<F: MarketEntry, R: BufRead>(r: R) -> io::Result<SparseMatrix<F>> {
    let bad = |msg: String| io::Error::new(io::ErrorKind::InvalidData, msg);
    let mut lines = r.lines();
    let header = lines.next().ok_or_else(|| bad("empty input".into()))??;
    let tag = header.split_whitespace().nth(3).unwrap_or("");
    if !header.starts_with("%%MatrixMarket") || tag != F::TAG {
        return Err(bad(format!("unexpected header {header:?}")));
    }
    let mut dims = None;
    let mut entries: Vec<Vec<(usize, F)>> = Vec::new();
    let mut ncols = 0;
    for line in lines {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let mut parts = line.splitn(3, ' ');
        let mut num = || -> io::Result<usize> { parts.next().and_then(|p| p.parse().ok()).ok_or_else(|| bad(format!("bad line {line:?}"))) };
        if dims.is_none() {
            let (r, c) = (num()?, num()?);
            dims = Some(());
            ncols = c;
            entries = vec![Vec::new(); r];
            continue;
        }
        let (i, j) = (num()?, num()?);
        let v = parts.next().and_then(F::parse_entry).ok_or_else(|| bad(format!("bad entry in {line:?}")))?;
        if i == 0 || i > entries.len() || j == 0 || j > ncols {
            return Err(bad(format!("index out of range in {line:?}")));
        }
        entries[i - 1].push((j - 1, v));
    }
    let mut m = SparseMatrix::new(0, ncols);
    for row in entries {
        m.push_row(row);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_round_trip() {
        let mut m = SparseMatrix::<Scalar>::new(2, 3);
        m.set(0, 1, "q - q^-1".parse().unwrap());
        m.set(1, 2, "1/(1 + q)".parse().unwrap());
        let text = m.to_matrix_market();
        assert!(text.starts_with("%%MatrixMarket matrix coordinate rational-function general\n2 3 2\n"));
        let back: SparseMatrix<Scalar> = read_matrix_market(text.as_bytes()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn wrong_field_is_rejected() {
        let m = SparseMatrix::<Fp>::identity(2);
        let text = m.to_matrix_market();
        assert!(read_matrix_market::<Scalar, _>(text.as_bytes()).is_err());
        assert_eq!(read_matrix_market::<Fp, _>(text.as_bytes()).unwrap(), m);
    }
}
