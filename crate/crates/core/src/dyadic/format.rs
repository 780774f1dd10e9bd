//! Text format for cell sets:
//!
//! ```text
//! dyadic1 k=<int>          dyadic2 k=<int>
//! <i>                      <i> <j>
//! ...                      ...
//! ```
//!
//! Cells are written sorted, one per line, with a trailing newline.

use std::fmt::{self, Write};
use std::str::FromStr;

use super::{DyadicSet1D, DyadicSet2D};
use crate::error::{Error, Result};

fn header(line: Option<&str>, tag: &str) -> Result<u32> {
    let line = line.ok_or_else(|| Error::Parse("missing header".into()))?;
    let rest = line
        .trim()
        .strip_prefix(tag)
        .and_then(|r| r.trim().strip_prefix("k="))
        .ok_or_else(|| Error::Parse(format!("expected `{tag} k=<int>`, got `{line}`")))?;
    rest.trim().parse().map_err(|_| Error::Parse(format!("bad scale in `{line}`")))
}

impl fmt::Display for DyadicSet1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dyadic1 k={}", self.scale_k)?;
        let mut buf = String::with_capacity(self.cells.len() * 8);
        for c in &self.cells {
            writeln!(buf, "{c}")?;
        }
        f.write_str(&buf)
    }
}

impl fmt::Display for DyadicSet2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dyadic2 k={}", self.scale_k)?;
        let mut buf = String::with_capacity(self.cells.len() * 12);
        for (i, j) in &self.cells {
            writeln!(buf, "{i} {j}")?;
        }
        f.write_str(&buf)
    }
}

impl FromStr for DyadicSet1D {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines();
        let k = header(lines.next(), "dyadic1")?;
        let mut cells = Vec::new();
        for (n, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let v = line
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad cell `{line}`", n + 2)))?;
            cells.push(v);
        }
        DyadicSet1D::new(k, cells)
    }
}

impl FromStr for DyadicSet2D {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines();
        let k = header(lines.next(), "dyadic2")?;
        let mut cells = Vec::new();
        for (n, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let bad = || Error::Parse(format!("line {}: bad cell `{line}`", n + 2));
            let mut it = line.split_whitespace();
            let i = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let j = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            if it.next().is_some() {
                return Err(bad());
            }
            cells.push((i, j));
        }
        DyadicSet2D::new(k, cells)
    }
}

/// Either kind of set, dispatched on the header line.
#[derive(Debug, Clone, PartialEq)]
pub enum AnySet {
    One(DyadicSet1D),
    Two(DyadicSet2D),
}

impl FromStr for AnySet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.split_whitespace().next() {
            Some("dyadic1") => Ok(AnySet::One(s.parse()?)),
            Some("dyadic2") => Ok(AnySet::Two(s.parse()?)),
            _ => Err(Error::Parse("expected a `dyadic1` or `dyadic2` header".into())),
        }
    }
}

impl fmt::Display for AnySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnySet::One(s) => s.fmt(f),
            AnySet::Two(s) => s.fmt(f),
        }
    }
}

