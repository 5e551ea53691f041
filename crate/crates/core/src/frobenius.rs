//! Affine Frobenius groups `(C_p)^r ⋊ <M>` acting on `F_p^r`.

use crate::arith::{is_prime, mod_inv};
use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::perm::Permutation;

type Matrix = Vec<Vec<u64>>;

/// A Frobenius group together with its kernel `D` (translations) and complement `E = <M>`.
#[derive(Clone, Debug)]
pub struct FrobeniusGroup {
    pub group: PermGroup,
    pub kernel: PermGroup,
    pub complement: PermGroup,
    pub p: u64,
    pub rank: usize,
    pub matrix: Matrix,
    /// Multiplicative order of the matrix.
    pub complement_order: u64,
}

fn mat_mul(a: &Matrix, b: &Matrix, p: u64) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j] % p).sum::<u64>() % p)
                .collect()
        })
        .collect()
}

fn mat_vec(a: &Matrix, v: &[u64], p: u64) -> Vec<u64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y % p).sum::<u64>() % p)
        .collect()
}

fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
        .collect()
}

fn rank_mod_p(a: &Matrix, p: u64) -> usize {
    let mut m = a.clone();
    let (rows, cols) = (m.len(), m.first().map_or(0, Vec::len));
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = mod_inv(m[r][c], p);
        for j in 0..cols {
            m[r][j] = m[r][j] * inv % p;
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] + p * p - f * m[r][j] % p) % p;
                }
            }
        }
        r += 1;
    }
    r
}

fn decode(mut idx: usize, p: u64, rank: usize) -> Vec<u64> {
    (0..rank)
        .map(|_| {
            let d = idx as u64 % p;
            idx /= p as usize;
            d
        })
        .collect()
}

fn encode(v: &[u64], p: u64) -> usize {
    v.iter().rev().fold(0usize, |acc, &d| acc * p as usize + d as usize)
}

fn vector_string(v: &[u64]) -> String {
    let parts: Vec<String> = v.iter().map(u64::to_string).collect();
    format!("({})", parts.join(","))
}

/// Builds `(C_p)^rank ⋊ <matrix>` on the `p^rank` vectors of `F_p^rank`.
///
/// Vector `v` is point `1 + sum v_i p^i`. The matrix acts on column vectors.
/// Rejects singular matrices, matrices whose order is divisible by `p`, and
/// matrices with a power `M^j != 1` fixing a nonzero vector.
pub fn frobenius_group(p: u64, rank: usize, matrix: &[Vec<i64>]) -> Result<FrobeniusGroup> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if rank == 0 {
        return Err(Error::Hypothesis("rank must be positive".into()));
    }
    if matrix.len() != rank || matrix.iter().any(|r| r.len() != rank) {
        return Err(Error::Hypothesis(format!("matrix is not {}x{}", rank, rank)));
    }
    let m: Matrix = matrix
        .iter()
        .map(|r| r.iter().map(|&x| x.rem_euclid(p as i64) as u64).collect())
        .collect();
    if rank_mod_p(&m, p) < rank {
        return Err(Error::Hypothesis(format!("matrix is not invertible mod {}", p)));
    }
    let id = identity(rank);
    let mut powers = vec![id.clone()];
    let mut cur = m.clone();
    while cur != id {
        powers.push(cur.clone());
        cur = mat_mul(&cur, &m, p);
    }
    let order = powers.len() as u64;
    if order % p == 0 {
        return Err(Error::Hypothesis(format!(
            "matrix order {} is divisible by p = {}",
            order, p
        )));
    }
    let npts = (p as usize).pow(rank as u32);
    for (j, pw) in powers.iter().enumerate().skip(1) {
        for idx in 1..npts {
            let v = decode(idx, p, rank);
            if mat_vec(pw, &v, p) == v {
                return Err(Error::Hypothesis(format!(
                    "action is not free: M^{} fixes the nonzero vector {}",
                    j,
                    vector_string(&v)
                )));
            }
        }
    }

    let translations: Vec<Permutation> = (0..rank)
        .map(|i| {
            let imgs = (0..npts)
                .map(|idx| {
                    let mut v = decode(idx, p, rank);
                    v[i] = (v[i] + 1) % p;
                    encode(&v, p)
                })
                .collect();
            Permutation::from_images(imgs)
        })
        .collect::<Result<_>>()?;
    let mat_perm = Permutation::from_images(
        (0..npts)
            .map(|idx| encode(&mat_vec(&m, &decode(idx, p, rank), p), p))
            .collect(),
    )?;
    let mut gens = translations.clone();
    gens.push(mat_perm.clone());
    let group = PermGroup::new(npts, gens)?;
    let kernel = PermGroup::new(npts, translations)?;
    let complement = PermGroup::new(npts, vec![mat_perm])?;
    Ok(FrobeniusGroup {
        group,
        kernel,
        complement,
        p,
        rank,
        matrix: m,
        complement_order: order,
    })
}
