//! Row reduction over Q(u).

use crate::arith::RatFn;

/// Rank of a list of equal-length row vectors.
#[allow(clippy::needless_range_loop)]
pub fn rank(rows: &[Vec<RatFn>]) -> usize {
    let mut m: Vec<Vec<RatFn>> = rows.to_vec();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for i in 0..m.len() {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for j in c..ncols {
                let d = &f * &m[r][j];
                m[i][j] = &m[i][j] - &d;
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Determinant of a square matrix.
#[allow(clippy::needless_range_loop)]
pub fn det(rows: &[Vec<RatFn>]) -> RatFn {
    let n = rows.len();
    let mut m: Vec<Vec<RatFn>> = rows.to_vec();
    let mut d = RatFn::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else { return RatFn::zero() };
        if p != c {
            m.swap(c, p);
            d = -d;
        }
        d = &d * &m[c][c];
        let inv = m[c][c].inv().expect("nonzero pivot");
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for j in c..n {
                let t = &f * &m[c][j];
                m[i][j] = &m[i][j] - &t;
            }
        }
    }
    d
}
