//! Line-oriented group description files.
//!
//! ```text
//! # comment
//! name S3
//! degree 3
//! prime 3
//! gen (1,2,3)
//! gen (1,2)
//! ```
//!
//! or a Frobenius block, where `prime` defaults to `p`:
//!
//! ```text
//! frobenius
//! p 3
//! rank 2
//! matrix 0 1 1 2
//! ```

use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::frobenius::{frobenius_group, FrobeniusGroup};
use crate::group::PermGroup;
use crate::perm::{parse_cycle_list, Permutation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupForm {
    Generators {
        degree: usize,
        /// One entry per `gen` line, as 1-based cycles; empty means the identity.
        generators: Vec<Vec<Vec<usize>>>,
    },
    Frobenius {
        p: u64,
        rank: usize,
        /// Row-major, `rank * rank` entries.
        matrix: Vec<i64>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpecFile {
    pub name: Option<String>,
    pub prime: Option<u64>,
    pub form: GroupForm,
}

/// A parsed file turned into a group.
#[derive(Clone, Debug)]
pub struct LoadedGroup {
    pub name: String,
    pub prime: u64,
    pub group: Arc<PermGroup>,
    pub frobenius: Option<FrobeniusGroup>,
}

#[derive(Default)]
struct Seen {
    name: Option<(usize, String)>,
    degree: Option<(usize, usize, usize)>,
    prime: Option<(usize, u64)>,
    frobenius: Option<usize>,
    p: Option<(usize, u64)>,
    rank: Option<(usize, usize)>,
    matrix: Option<(usize, usize, Vec<i64>)>,
    gens: Vec<(usize, usize, Vec<Vec<usize>>)>,
}

fn number<T: std::str::FromStr>(tok: &str, line: usize, col: usize) -> Result<T> {
    tok.parse()
        .map_err(|_| Error::parse(line, col, format!("expected an integer, found '{}'", tok)))
}

/// Splits a line into (1-based column, token) pairs.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((line[..s].chars().count() + 1, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((line[..s].chars().count() + 1, &line[s..]));
    }
    out
}

fn once<T>(slot: &mut Option<T>, value: T, key: &str, line: usize, col: usize) -> Result<()> {
    if slot.is_some() {
        return Err(Error::parse(line, col, format!("duplicate key '{}'", key)));
    }
    *slot = Some(value);
    Ok(())
}

/// Parses a group description.
pub fn parse_group_file(text: &str) -> Result<GroupSpecFile> {
    let mut seen = Seen::default();
    let mut last_line = 0;
    for (ln, raw) in text.lines().enumerate() {
        let line_no = ln + 1;
        last_line = line_no;
        let toks = tokens(raw);
        let Some(&(kcol, key)) = toks.first() else {
            continue;
        };
        if key.starts_with('#') {
            continue;
        }
        let args = &toks[1..];
        let single = |what: &str| -> Result<(usize, &str)> {
            match args {
                [one] => Ok(*one),
                [] => Err(Error::parse(line_no, kcol + key.len(), format!("'{}' needs {}", key, what))),
                [_, (c, extra), ..] => Err(Error::parse(line_no, *c, format!("unexpected '{}'", extra))),
            }
        };
        let frob_only = |seen: &Seen| -> Result<()> {
            if seen.frobenius.is_none() {
                return Err(Error::parse(
                    line_no,
                    kcol,
                    format!("'{}' is only valid after 'frobenius'", key),
                ));
            }
            Ok(())
        };
        let gen_only = |seen: &Seen| -> Result<()> {
            if seen.frobenius.is_some() {
                return Err(Error::parse(
                    line_no,
                    kcol,
                    format!("'{}' cannot be combined with a frobenius block", key),
                ));
            }
            Ok(())
        };
        match key {
            "name" => {
                let (_, v) = single("a value")?;
                once(&mut seen.name, (line_no, v.to_string()), key, line_no, kcol)?;
            }
            "degree" => {
                gen_only(&seen)?;
                let (c, v) = single("an integer")?;
                let d: usize = number(v, line_no, c)?;
                if d == 0 {
                    return Err(Error::parse(line_no, c, "degree must be positive"));
                }
                once(&mut seen.degree, (line_no, c, d), key, line_no, kcol)?;
            }
            "prime" => {
                let (c, v) = single("an integer")?;
                once(&mut seen.prime, (line_no, number(v, line_no, c)?), key, line_no, kcol)?;
            }
            "gen" => {
                gen_only(&seen)?;
                let Some(&(c, _)) = args.first() else {
                    return Err(Error::parse(line_no, kcol + 3, "'gen' needs cycles, e.g. gen (1,2)"));
                };
                let rest: String = raw.chars().skip(c - 1).collect();
                let cycles = parse_cycle_list(&rest)
                    .map_err(|(col, msg)| Error::parse(line_no, c - 1 + col, msg))?;
                seen.gens.push((line_no, c, cycles));
            }
            "frobenius" => {
                if let Some(&(c, extra)) = args.first() {
                    return Err(Error::parse(line_no, c, format!("unexpected '{}'", extra)));
                }
                if let Some(&(l, _, _)) = seen.gens.first() {
                    return Err(Error::parse(
                        line_no,
                        kcol,
                        format!("frobenius block cannot follow 'gen' on line {}", l),
                    ));
                }
                if seen.degree.is_some() {
                    return Err(Error::parse(line_no, kcol, "frobenius block cannot be combined with 'degree'"));
                }
                once(&mut seen.frobenius, line_no, key, line_no, kcol)?;
            }
            "p" => {
                frob_only(&seen)?;
                let (c, v) = single("an integer")?;
                once(&mut seen.p, (line_no, number(v, line_no, c)?), key, line_no, kcol)?;
            }
            "rank" => {
                frob_only(&seen)?;
                let (c, v) = single("an integer")?;
                let r: usize = number(v, line_no, c)?;
                if r == 0 {
                    return Err(Error::parse(line_no, c, "rank must be positive"));
                }
                once(&mut seen.rank, (line_no, r), key, line_no, kcol)?;
            }
            "matrix" => {
                frob_only(&seen)?;
                if args.is_empty() {
                    return Err(Error::parse(line_no, kcol + 6, "'matrix' needs entries"));
                }
                let entries = args
                    .iter()
                    .map(|&(c, t)| number::<i64>(t, line_no, c))
                    .collect::<Result<Vec<_>>>()?;
                once(&mut seen.matrix, (line_no, kcol, entries), key, line_no, kcol)?;
            }
            other => {
                return Err(Error::parse(line_no, kcol, format!("unknown key '{}'", other)));
            }
        }
    }
    let end = last_line + 1;
    let name = seen.name.map(|(_, n)| n);
    let prime = seen.prime.map(|(_, p)| p);
    let form = if seen.frobenius.is_some() {
        let (_, p) = seen.p.ok_or_else(|| Error::parse(end, 1, "frobenius block is missing 'p'"))?;
        let (_, rank) = seen
            .rank
            .ok_or_else(|| Error::parse(end, 1, "frobenius block is missing 'rank'"))?;
        let (ml, mc, matrix) = seen
            .matrix
            .ok_or_else(|| Error::parse(end, 1, "frobenius block is missing 'matrix'"))?;
        if matrix.len() != rank * rank {
            return Err(Error::parse(
                ml,
                mc,
                format!("matrix has {} entries, rank {} needs {}", matrix.len(), rank, rank * rank),
            ));
        }
        GroupForm::Frobenius { p, rank, matrix }
    } else {
        let (_, _, degree) = seen.degree.ok_or_else(|| Error::parse(end, 1, "missing 'degree'"))?;
        if seen.gens.is_empty() {
            return Err(Error::parse(end, 1, "missing 'gen' lines"));
        }
        if prime.is_none() {
            return Err(Error::parse(end, 1, "missing 'prime'"));
        }
        for (l, c, cycles) in &seen.gens {
            if let Some(pt) = cycles.iter().flatten().find(|&&x| x > degree) {
                return Err(Error::parse(*l, *c, format!("point {} exceeds degree {}", pt, degree)));
            }
        }
        GroupForm::Generators {
            degree,
            generators: seen.gens.into_iter().map(|(_, _, g)| g).collect(),
        }
    };
    Ok(GroupSpecFile { name, prime, form })
}

impl GroupSpecFile {
    /// Canonical text; reparsing it yields an equal value.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if let Some(n) = &self.name {
            let _ = writeln!(s, "name {}", n);
        }
        match &self.form {
            GroupForm::Generators { degree, generators } => {
                let _ = writeln!(s, "degree {}", degree);
                if let Some(p) = self.prime {
                    let _ = writeln!(s, "prime {}", p);
                }
                for g in generators {
                    s.push_str("gen ");
                    if g.is_empty() {
                        s.push_str("()");
                    }
                    for c in g {
                        let pts: Vec<String> = c.iter().map(usize::to_string).collect();
                        let _ = write!(s, "({})", pts.join(","));
                    }
                    s.push('\n');
                }
            }
            GroupForm::Frobenius { p, rank, matrix } => {
                if let Some(q) = self.prime {
                    let _ = writeln!(s, "prime {}", q);
                }
                let entries: Vec<String> = matrix.iter().map(i64::to_string).collect();
                let _ = write!(s, "frobenius\np {}\nrank {}\nmatrix {}\n", p, rank, entries.join(" "));
            }
        }
        s
    }

    /// Builds the group. Names default to the form of the input.
    pub fn load(&self) -> Result<LoadedGroup> {
        match &self.form {
            GroupForm::Generators { degree, generators } => {
                let gens = generators
                    .iter()
                    .map(|c| Permutation::from_cycles(*degree, c))
                    .collect::<Result<Vec<_>>>()?;
                let group = Arc::new(PermGroup::new(*degree, gens)?);
                Ok(LoadedGroup {
                    name: self
                        .name
                        .clone()
                        .unwrap_or_else(|| format!("group(degree {})", degree)),
                    prime: self.prime.expect("generator form has a prime"),
                    group,
                    frobenius: None,
                })
            }
            GroupForm::Frobenius { p, rank, matrix } => {
                let rows: Vec<Vec<i64>> = matrix.chunks(*rank).map(<[i64]>::to_vec).collect();
                let f = frobenius_group(*p, *rank, &rows)?;
                Ok(LoadedGroup {
                    name: self.name.clone().unwrap_or_else(|| {
                        format!("C{}^{}:C{}", p, rank, f.complement_order)
                    }),
                    prime: self.prime.unwrap_or(*p),
                    group: Arc::new(f.group.clone()),
                    frobenius: Some(f),
                })
            }
        }
    }
}
