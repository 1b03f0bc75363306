//! Exact Gaussian elimination over a cyclotomic field.
//!
//! Pivots are the first nonzero entry in each column; no ranking is needed
//! because the arithmetic is exact.

use crate::cyclotomic::Cyclotomic;

/// Reduces `m` to reduced row echelon form in place; returns the pivot columns.
fn rref(m: &mut [Vec<Cyclotomic>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&k| !m[k][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("pivot is nonzero");
        let row: Vec<Cyclotomic> = m[r].iter().map(|x| x * &inv).collect();
        m[r] = row;
        for k in 0..m.len() {
            if k != r && !m[k][c].is_zero() {
                let f = m[k][c].clone();
                let updated: Vec<Cyclotomic> =
                    m[k].iter().zip(&m[r]).map(|(x, y)| x - &(&f * y)).collect();
                m[k] = updated;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a matrix given as rows of equal length.
pub fn rank(rows: &[Vec<Cyclotomic>]) -> usize {
    let Some(first) = rows.first() else { return 0 };
    let cols = first.len();
    let mut m = rows.to_vec();
    rref(&mut m, cols).len()
}

/// One solution of `A x = b` (free variables set to zero), or `None` if inconsistent.
pub fn solve(a: &[Vec<Cyclotomic>], b: &[Cyclotomic], order: u32) -> Option<Vec<Cyclotomic>> {
    assert_eq!(a.len(), b.len(), "one right-hand side per row");
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Cyclotomic>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m, cols + 1);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Cyclotomic::zero(order); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][cols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(k: i64) -> Cyclotomic {
        Cyclotomic::from_integer(3, k)
    }

    #[test]
    fn rank_and_solve() {
        let a = vec![vec![z(1), z(2)], vec![z(2), z(4)]];
        assert_eq!(rank(&a), 1);
        assert!(solve(&a, &[z(1), z(3)], 3).is_none());
        let x = solve(&a, &[z(1), z(2)], 3).unwrap();
        assert_eq!(x, vec![z(1), z(0)]);
        let w = Cyclotomic::root_power(3, 1);
        let b = vec![vec![w.clone(), z(0)], vec![z(0), z(2)]];
        let x = solve(&b, &[z(1), z(1)], 3).unwrap();
        assert!((&x[0] * &w).is_one());
        assert_eq!(x[1], Cyclotomic::from_rational(3, &crate::Rational::new(1.into(), 2.into())));
    }
}
