//! Permutations of `{1..n}`.
//!
//! Points are stored 0-based; everything user-facing (cycle notation, file
//! format) is 1-based. Products are written in "first then second" order:
//! `a * b` applies `a` and then `b`, so `(a * b).image(x) == b.image(a.image(x))`.

use std::fmt;
use std::ops::Mul;

use crate::arith::{gcd, is_prime, lcm, mod_inv_general, p_split};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from 0-based images.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation(format!(
                    "images {:?} are not a bijection of 0..{}",
                    images, n
                )));
            }
            seen[i] = true;
        }
        Ok(Permutation {
            images: images.into_iter().map(|i| i as u32).collect(),
        })
    }

    /// Builds a permutation from 1-based images (entry `i` is the image of point `i + 1`).
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidPermutation("point 0 in 1-based images".into()));
        }
        Self::from_images(images.iter().map(|&i| i - 1).collect())
    }

    /// Builds a permutation from disjoint 1-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        if degree == 0 {
            return Err(Error::EmptyDegree);
        }
        let mut images: Vec<usize> = (0..degree).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for (k, &pt) in cycle.iter().enumerate() {
                if pt == 0 || pt > degree {
                    return Err(Error::InvalidPermutation(format!(
                        "point {} outside 1..{}",
                        pt, degree
                    )));
                }
                if used[pt - 1] {
                    return Err(Error::InvalidPermutation(format!(
                        "point {} repeated",
                        pt
                    )));
                }
                used[pt - 1] = true;
                let next = cycle[(k + 1) % cycle.len()];
                images[pt - 1] = next - 1;
            }
        }
        Self::from_images(images)
    }

    /// Parses cycle notation such as `(1,2,3)(4,5)`; `()` is the identity.
    pub fn parse(degree: usize, text: &str) -> Result<Self> {
        let cycles = parse_cycle_list(text).map_err(|(col, msg)| {
            Error::InvalidPermutation(format!("column {}: {}", col, msg))
        })?;
        Self::from_cycles(degree, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// 0-based image of a 0-based point.
    #[inline]
    pub fn image(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().map(|&i| i as usize)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self
                .images
                .iter()
                .map(|&i| other.images[i as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, exp: i64) -> Permutation {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Permutation::identity(self.degree());
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&sq);
            }
            sq = sq.then(&sq);
            e >>= 1;
        }
        acc
    }

    /// The conjugate `g x g^-1` of `self = x`, written `^g x`.
    pub fn conjugated_by(&self, g: &Permutation) -> Permutation {
        g.then(self).then(&g.inverse())
    }

    pub fn commutes_with(&self, other: &Permutation) -> bool {
        self.then(other) == other.then(self)
    }

    /// Disjoint cycles of length at least 2, 0-based, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.image(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.image(x);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1, |acc, c| lcm(acc, c.len() as u64))
    }

    /// Splits `self` into commuting parts `(g_p, g_p')` with `g = g_p * g_p'`.
    ///
    /// With `n = n_p * n_p'` the order of `g` and `a*n_p + b*n_p' = 1 (mod n)`,
    /// the parts are `g_p = g^(b*n_p')` and `g_p' = g^(a*n_p)`.
    pub fn p_part_decomposition(&self, p: u64) -> Result<(Permutation, Permutation)> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let n = self.order();
        let (np, npp) = p_split(n, p);
        debug_assert_eq!(gcd(np, npp), 1);
        // b = n_p'^-1 mod n_p, a chosen so that a*n_p + b*n_p' = 1 mod n.
        let b = if np == 1 {
            0
        } else {
            mod_inv_general(npp as i64, np as i64).expect("coprime parts")
        };
        let a = if npp == 1 {
            0
        } else {
            mod_inv_general(np as i64, npp as i64).expect("coprime parts")
        };
        let e_p = (b * npp as i64).rem_euclid(n as i64);
        let e_pp = (a * np as i64).rem_euclid(n as i64);
        Ok((self.pow(e_p), self.pow(e_pp)))
    }

    pub fn is_p_element(&self, p: u64) -> bool {
        p_split(self.order(), p).1 == 1
    }

    pub fn is_p_regular(&self, p: u64) -> bool {
        self.order() % p != 0
    }
}

impl Mul for &Permutation {
    type Output = Permutation;

    fn mul(self, rhs: &Permutation) -> Permutation {
        self.then(rhs)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", x + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Parses `(a,b,...)(c,...)` into 1-based cycles. Errors carry a 1-based column.
///
/// Points must be distinct across the whole list; whitespace between tokens is allowed.
pub fn parse_cycle_list(text: &str) -> std::result::Result<Vec<Vec<usize>>, (usize, String)> {
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let mut cycles = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    let skip_ws = |pos: &mut usize| {
        while *pos < chars.len() && chars[*pos].is_whitespace() {
            *pos += 1;
        }
    };
    skip_ws(&mut pos);
    if pos == chars.len() {
        return Err((1, "expected '('".into()));
    }
    while pos < chars.len() {
        if chars[pos] != '(' {
            return Err((pos + 1, format!("expected '(', found '{}'", chars[pos])));
        }
        pos += 1;
        skip_ws(&mut pos);
        let mut cycle = Vec::new();
        if pos < chars.len() && chars[pos] == ')' {
            pos += 1;
            skip_ws(&mut pos);
            if !cycles.is_empty() || pos < chars.len() {
                return Err((pos.max(1), "empty cycle '()' must stand alone".into()));
            }
            return Ok(Vec::new());
        }
        loop {
            skip_ws(&mut pos);
            let start = pos;
            while pos < chars.len() && chars[pos].is_ascii_digit() {
                pos += 1;
            }
            if start == pos {
                return Err((pos + 1, "expected a point".into()));
            }
            let s: String = chars[start..pos].iter().collect();
            let pt: usize = s
                .parse()
                .map_err(|_| (start + 1, format!("bad point '{}'", s)))?;
            if pt == 0 {
                return Err((start + 1, "points are 1-based".into()));
            }
            if !seen.insert(pt) {
                return Err((start + 1, format!("repeated point {}", pt)));
            }
            cycle.push(pt);
            skip_ws(&mut pos);
            match chars.get(pos) {
                Some(',') => pos += 1,
                Some(')') => {
                    pos += 1;
                    break;
                }
                Some(c) => return Err((pos + 1, format!("expected ',' or ')', found '{}'", c))),
                None => return Err((pos + 1, "unterminated cycle".into())),
            }
        }
        cycles.push(cycle);
        skip_ws(&mut pos);
    }
    Ok(cycles)
}
