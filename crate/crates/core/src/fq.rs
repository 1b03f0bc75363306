//! Dense matrices over a prime field `F_q`, stored row-major as residues.

use crate::error::{Error, Result};
use crate::groups::is_prime;

fn check_prime(q: u32) -> Result<()> {
    if is_prime(q) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("q = {q} is not prime")))
    }
}

/// Inverse of `a` modulo the prime `q`.
pub fn inv_mod(a: u32, q: u32) -> Option<u32> {
    let a = a % q;
    if a == 0 {
        return None;
    }
    // Fermat: a^(q-2)
    let (mut base, mut exp, mut acc) = (a as u64, q as u64 - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % q as u64;
        }
        base = base * base % q as u64;
        exp >>= 1;
    }
    Some(acc as u32)
}

/// Row-reduces in place and returns the rank.
fn row_reduce(rows: usize, cols: usize, m: &mut [u32], q: u32) -> usize {
    let q64 = q as u64;
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| m[r * cols + c] != 0) else { continue };
        for k in 0..cols {
            m.swap(p * cols + k, rank * cols + k);
        }
        let inv = inv_mod(m[rank * cols + c], q).expect("pivot is nonzero") as u64;
        for k in 0..cols {
            m[rank * cols + k] = (m[rank * cols + k] as u64 * inv % q64) as u32;
        }
        for r in 0..rows {
            let f = m[r * cols + c] as u64;
            if r != rank && f != 0 {
                for k in 0..cols {
                    let sub = f * m[rank * cols + k] as u64 % q64;
                    m[r * cols + k] = ((m[r * cols + k] as u64 + q64 - sub) % q64) as u32;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank over `F_q` of a `rows × cols` matrix.
pub fn rank_fq(rows: usize, cols: usize, entries: &[u32], q: u32) -> Result<usize> {
    check_prime(q)?;
    if entries.len() != rows * cols {
        return Err(Error::LengthMismatch { expected: rows * cols, found: entries.len() });
    }
    let mut m: Vec<u32> = entries.iter().map(|x| x % q).collect();
    Ok(row_reduce(rows, cols, &mut m, q))
}

pub fn mat_mul(a: &[u32], b: &[u32], rows: usize, inner: usize, cols: usize, q: u32) -> Vec<u32> {
    let q = q as u64;
    let mut out = vec![0u32; rows * cols];
    for r in 0..rows {
        for c in 0..cols {
            let s: u64 = (0..inner).map(|k| a[r * inner + k] as u64 * b[k * cols + c] as u64).sum();
            out[r * cols + c] = (s % q) as u32;
        }
    }
    out
}

pub fn transpose(a: &[u32], rows: usize, cols: usize) -> Vec<u32> {
    let mut out = vec![0u32; rows * cols];
    for r in 0..rows {
        for c in 0..cols {
            out[c * rows + r] = a[r * cols + c];
        }
    }
    out
}

/// Inverse of a square matrix over `F_q`, or `None` if singular.
pub fn mat_inverse(a: &[u32], n: usize, q: u32) -> Option<Vec<u32>> {
    let w = 2 * n;
    let mut aug = vec![0u32; n * w];
    for r in 0..n {
        for c in 0..n {
            aug[r * w + c] = a[r * n + c] % q;
        }
        aug[r * w + n + r] = 1;
    }
    // Pivot only in the left block.
    let q64 = q as u64;
    for c in 0..n {
        let p = (c..n).find(|&r| aug[r * w + c] != 0)?;
        for k in 0..w {
            aug.swap(p * w + k, c * w + k);
        }
        let inv = inv_mod(aug[c * w + c], q)? as u64;
        for k in 0..w {
            aug[c * w + k] = (aug[c * w + k] as u64 * inv % q64) as u32;
        }
        for r in 0..n {
            let f = aug[r * w + c] as u64;
            if r != c && f != 0 {
                for k in 0..w {
                    let sub = f * aug[c * w + k] as u64 % q64;
                    aug[r * w + k] = ((aug[r * w + k] as u64 + q64 - sub) % q64) as u32;
                }
            }
        }
    }
    Some((0..n).flat_map(|r| aug[r * w + n..r * w + w].to_vec()).collect())
}

pub fn identity(n: usize) -> Vec<u32> {
    let mut m = vec![0u32; n * n];
    for k in 0..n {
        m[k * n + k] = 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        assert_eq!(rank_fq(2, 3, &[0; 6], 2).unwrap(), 0);
        assert_eq!(rank_fq(2, 2, &identity(2), 2).unwrap(), 2);
        assert_eq!(rank_fq(2, 2, &[1, 1, 1, 1], 2).unwrap(), 1);
        assert_eq!(rank_fq(2, 2, &[1, 2, 2, 1], 3).unwrap(), 1);
        assert_eq!(rank_fq(2, 2, &[1, 2, 2, 1], 5).unwrap(), 2);
        assert!(rank_fq(2, 2, &[1, 0, 0, 1], 4).is_err());
    }

    #[test]
    fn inverses() {
        for q in [2u32, 3, 5, 7] {
            for a in 1..q {
                assert_eq!(a * inv_mod(a, q).unwrap() % q, 1);
            }
            assert_eq!(inv_mod(0, q), None);
        }
        let a = [1, 2, 0, 1];
        let ai = mat_inverse(&a, 2, 3).unwrap();
        assert_eq!(mat_mul(&a, &ai, 2, 2, 2, 3), identity(2));
        assert_eq!(mat_inverse(&[1, 1, 1, 1], 2, 2), None);
    }

    #[test]
    fn transpose_shape() {
        assert_eq!(transpose(&[1, 2, 3, 4, 5, 6], 2, 3), vec![1, 4, 2, 5, 3, 6]);
    }
}
