//! Character tables over a prime field.
//!
//! Characters are stored as residues modulo a prime `q` with
//! `q = 1 (mod exp(G))` and `q > 2|G|`, so every rational integer the engine
//! needs from them (degrees, fixed-point dimensions) is recovered by lifting a
//! residue from a range of width below `q`.
//!
//! The table is computed from the class multiplication coefficients: the central
//! characters are the common eigenvectors of the class matrices, found by splitting
//! eigenspaces one class matrix at a time until all are one-dimensional.

use crate::arith::{is_prime, mod_inv};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;

/// Upper limit for the modulus search.
pub const DEFAULT_PRIME_CAP: u64 = 1 << 24;

#[derive(Clone, Debug)]
pub struct CharacterTable {
    group: PermGroup,
    class_reps: Vec<Permutation>,
    class_sizes: Vec<usize>,
    modulus: u64,
    degrees: Vec<u64>,
    values: Vec<Vec<u64>>,
}

/// Smallest prime `q = 1 (mod exponent)` with `q > lower`, if one is at most `cap`.
pub fn choose_modulus(exponent: u64, lower: u64, cap: u64) -> Result<u64> {
    let mut q = lower + 1;
    let r = (q - 1) % exponent;
    if r != 0 {
        q += exponent - r;
    }
    while q <= cap {
        if is_prime(q) {
            return Ok(q);
        }
        q += exponent;
    }
    Err(Error::NoPrime {
        exponent,
        lower,
        cap,
    })
}

/// Null space basis of a `rows x cols` matrix over `F_q`.
fn kernel(mat: &[Vec<u64>], cols: usize, q: u64) -> Vec<Vec<u64>> {
    let mut m: Vec<Vec<u64>> = mat.to_vec();
    let rows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = mod_inv(m[r][c], q);
        for x in m[r].iter_mut() {
            *x = *x * inv % q;
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] + q - f * m[r][j] % q) % q;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = (q - m[row][f]) % q;
            }
            v
        })
        .collect()
}

/// Class matrices `M_j[k][l] = #{x in C_j : x^-1 z_l in C_k}` with `z_l` the class representatives.
fn class_matrices(g: &PermGroup) -> Result<Vec<Vec<Vec<u64>>>> {
    let classes = g.conjugacy_classes()?;
    let r = classes.len();
    let elems = g.elements()?;
    let mut class_of = Vec::with_capacity(elems.len());
    for x in elems {
        class_of.push(g.class_index_of(x)?.expect("member"));
    }
    let mut mats = vec![vec![vec![0u64; r]; r]; r];
    for (l, cl) in classes.iter().enumerate() {
        for (xi, x) in elems.iter().enumerate() {
            let y = x.inverse().then(&cl.representative);
            let k = g.class_index_of(&y)?.expect("member");
            mats[class_of[xi]][k][l] += 1;
        }
    }
    Ok(mats)
}

/// Character table with the default modulus cap.
pub fn character_table(g: &PermGroup) -> Result<CharacterTable> {
    character_table_with_cap(g, DEFAULT_PRIME_CAP)
}

pub fn character_table_with_cap(g: &PermGroup, prime_cap: u64) -> Result<CharacterTable> {
    let order = g.size()? as u64;
    let classes = g.conjugacy_classes()?;
    let r = classes.len();
    let q = choose_modulus(g.exponent()?, 2 * order, prime_cap)?;
    let mats = class_matrices(g)?;

    let mut spaces: Vec<Vec<Vec<u64>>> = vec![(0..r)
        .map(|i| (0..r).map(|j| u64::from(i == j)).collect())
        .collect()];
    for mat in mats.iter().skip(1) {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for basis in spaces {
            if basis.len() == 1 {
                next.push(basis);
                continue;
            }
            let d = basis.len();
            let images: Vec<Vec<u64>> = basis
                .iter()
                .map(|b| {
                    (0..r)
                        .map(|k| (0..r).map(|l| mat[k][l] * b[l] % q).sum::<u64>() % q)
                        .collect()
                })
                .collect();
            let mut found = 0;
            for lambda in 0..q {
                // columns: M b_i - lambda b_i
                let sys: Vec<Vec<u64>> = (0..r)
                    .map(|k| {
                        (0..d)
                            .map(|i| (images[i][k] + q - lambda * basis[i][k] % q) % q)
                            .collect()
                    })
                    .collect();
                let ker = kernel(&sys, d, q);
                if ker.is_empty() {
                    continue;
                }
                found += ker.len();
                next.push(
                    ker.iter()
                        .map(|x| {
                            (0..r)
                                .map(|k| (0..d).map(|i| x[i] * basis[i][k] % q).sum::<u64>() % q)
                                .collect()
                        })
                        .collect(),
                );
                if found == d {
                    break;
                }
            }
            if found != d {
                return Err(Error::Internal(format!(
                    "class matrix does not split over F_{}",
                    q
                )));
            }
        }
        spaces = next;
    }
    if spaces.len() != r {
        return Err(Error::Internal(
            "common eigenspaces of the class matrices are not one-dimensional".into(),
        ));
    }

    let inverse_class: Vec<usize> = classes
        .iter()
        .map(|c| g.class_index_of(&c.representative.inverse()).map(|o| o.expect("member")))
        .collect::<Result<_>>()?;
    let sizes: Vec<u64> = classes.iter().map(|c| c.size as u64).collect();
    let mut rows: Vec<(u64, Vec<u64>)> = Vec::with_capacity(r);
    for space in spaces {
        let w = &space[0];
        if w[0] == 0 {
            return Err(Error::Internal("central character vanishes on the identity".into()));
        }
        let s = mod_inv(w[0], q);
        let w: Vec<u64> = w.iter().map(|x| x * s % q).collect();
        let norm = (0..r).fold(0u64, |acc, j| {
            (acc + w[j] * w[inverse_class[j]] % q * mod_inv(sizes[j], q)) % q
        });
        if norm == 0 {
            return Err(Error::Internal("degenerate central character".into()));
        }
        let deg_sq = order % q * mod_inv(norm, q) % q;
        let degree = (1..=q / 2)
            .find(|d| d * d % q == deg_sq)
            .ok_or_else(|| Error::Internal("character degree has no square root".into()))?;
        let values = (0..r)
            .map(|j| w[j] * degree % q * mod_inv(sizes[j], q) % q)
            .collect();
        rows.push((degree, values));
    }
    rows.sort();
    let degree_sq_sum: u64 = rows.iter().map(|(d, _)| d * d).sum();
    if degree_sq_sum != order {
        return Err(Error::Internal(format!(
            "squared degrees sum to {} instead of {}",
            degree_sq_sum, order
        )));
    }
    Ok(CharacterTable {
        group: g.clone(),
        class_reps: classes.iter().map(|c| c.representative.clone()).collect(),
        class_sizes: classes.iter().map(|c| c.size).collect(),
        modulus: q,
        degrees: rows.iter().map(|(d, _)| *d).collect(),
        values: rows.into_iter().map(|(_, v)| v).collect(),
    })
}

impl CharacterTable {
    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    /// Residue matrix, rows = irreducible characters, columns = classes.
    pub fn values(&self) -> &[Vec<u64>] {
        &self.values
    }

    pub fn class_representatives(&self) -> &[Permutation] {
        &self.class_reps
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// `chi(g)` as a residue.
    pub fn value(&self, chi: usize, g: &Permutation) -> Result<u64> {
        let c = self
            .group
            .class_index_of(g)?
            .ok_or_else(|| Error::NotMember(g.to_string()))?;
        Ok(self.values[chi][c])
    }

    /// `dim V^H = (1/|H|) sum_{h in H} chi(h)`, lifted to `[0, chi(1)]`.
    pub fn fixed_point_dim(&self, chi: usize, h: &PermGroup) -> Result<u64> {
        if chi >= self.len() {
            return Err(Error::Hypothesis(format!(
                "character index {} out of range (table has {})",
                chi,
                self.len()
            )));
        }
        if !h.is_subgroup_of(&self.group) {
            return Err(Error::NotSubgroup(
                "subgroup is not contained in the table's group".into(),
            ));
        }
        let q = self.modulus;
        let mut sum = 0u64;
        for x in h.elements()? {
            sum = (sum + self.value(chi, x)?) % q;
        }
        let dim = sum * mod_inv(h.size()? as u64 % q, q) % q;
        if dim > self.degrees[chi] {
            return Err(Error::Internal(format!(
                "fixed-point residue {} exceeds the degree {}",
                dim, self.degrees[chi]
            )));
        }
        Ok(dim)
    }

    /// `(1/|G|) sum_c |c| chi_i(c) chi_j(c^-1)` as a residue; 1 or 0 for irreducibles.
    pub fn inner_product(&self, i: usize, j: usize) -> Result<u64> {
        let q = self.modulus;
        let mut acc = 0u64;
        for (c, rep) in self.class_reps.iter().enumerate() {
            let inv = self
                .group
                .class_index_of(&rep.inverse())?
                .expect("member");
            acc = (acc
                + self.class_sizes[c] as u64 % q * self.values[i][c] % q * self.values[j][inv] % q)
                % q;
        }
        Ok(acc * mod_inv(self.group.size()? as u64 % q, q) % q)
    }
}
