//! Exact integer and rational linear algebra.
//!
//! Ranks are computed with fraction-free (Bareiss) elimination over
//! arbitrary-precision integers, so intermediate minors never overflow.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Rank of an integer matrix given as rows, by fraction-free elimination.
///
/// Rows may have any common length; an empty matrix has rank 0.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let nrows = rows.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = rows[0].len();
    assert!(
        rows.iter().all(|r| r.len() == ncols),
        "ragged matrix passed to exact::rank"
    );
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();

    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in (r + 1)..nrows {
            for j in (c + 1)..ncols {
                let v = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                // exact: every entry is a minor of the original matrix
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// Solves `a x = b` for square nonsingular `a` over the rationals.
///
/// Returns `None` when `a` is singular.
pub fn solve(a: &[Vec<i64>], b: &[i64]) -> Option<Vec<BigRational>> {
    let n = a.len();
    assert_eq!(b.len(), n);
    let q = |x: i64| BigRational::from_integer(BigInt::from(x));
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            assert_eq!(row.len(), n);
            row.iter().map(|&x| q(x)).chain(std::iter::once(q(rhs))).collect()
        })
        .collect();

    for c in 0..n {
        let p = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let pivot = m[c][c].clone();
        for x in m[c].iter_mut() {
            *x = &*x / &pivot;
        }
        for i in 0..n {
            if i == c || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..=n {
                let v = &m[c][j] * &f;
                m[i][j] -= v;
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}
