//! Small integer-matrix utilities: products, Smith normal form, integer
//! kernels and solvability tests. Matrices are dense, row-major `Vec<Vec<i64>>`
//! at the tiny sizes (rank ≤ 8) this crate works with.

use crate::exactnum::Rat;
use num_traits::Zero;

pub type IMat = Vec<Vec<i64>>;
pub type IVec = Vec<i64>;
pub type QVec = Vec<Rat>;

pub fn identity(n: usize) -> IMat {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1 } else { 0 }).collect())
        .collect()
}

pub fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    let mut out = vec![vec![0i64; m]; n];
    for i in 0..n {
        for l in 0..k {
            let ail = a[i][l];
            if ail != 0 {
                for j in 0..m {
                    out[i][j] += ail * b[l][j];
                }
            }
        }
    }
    out
}

pub fn mat_vec(a: &IMat, v: &IVec) -> IVec {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

pub fn mat_vec_q(a: &IMat, v: &QVec) -> QVec {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(Rat::zero(), |acc, (x, y)| acc + Rat::from_integer(*x) * *y)
        })
        .collect()
}

pub fn dot_ii(a: &IVec, b: &IVec) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_qi(a: &QVec, b: &IVec) -> Rat {
    a.iter()
        .zip(b)
        .fold(Rat::zero(), |acc, (x, y)| acc + *x * Rat::from_integer(*y))
}

pub fn dot_qq(a: &QVec, b: &QVec) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + *x * *y)
}

pub fn add_vec(a: &IVec, b: &IVec) -> IVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec(a: &IVec, b: &IVec) -> IVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg_vec(a: &IVec) -> IVec {
    a.iter().map(|x| -x).collect()
}

pub fn scale_vec(c: i64, a: &IVec) -> IVec {
    a.iter().map(|x| c * x).collect()
}

pub fn add_qvec(a: &QVec, b: &QVec) -> QVec {
    a.iter().zip(b).map(|(x, y)| *x + *y).collect()
}

pub fn sub_qvec(a: &QVec, b: &QVec) -> QVec {
    a.iter().zip(b).map(|(x, y)| *x - *y).collect()
}

pub fn ivec_to_q(a: &IVec) -> QVec {
    a.iter().map(|x| Rat::from_integer(*x)).collect()
}

pub fn transpose(a: &IMat) -> IMat {
    let n = a.len();
    let m = a[0].len();
    (0..m).map(|j| (0..n).map(|i| a[i][j]).collect()).collect()
}

/// Result of a Smith normal form computation: `u * a * v = s` with `u`, `v`
/// unimodular and `s` diagonal with each entry dividing the next.
pub struct Smith {
    pub u: IMat,
    pub s: IMat,
    pub v: IMat,
    pub rank: usize,
}

/// Smith normal form by elementary row/column operations.
pub fn smith(a: &IMat) -> Smith {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut s = a.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);

    fn swap_rows(m: &mut IMat, i: usize, j: usize) {
        m.swap(i, j);
    }
    fn swap_cols(m: &mut IMat, i: usize, j: usize) {
        for row in m.iter_mut() {
            row.swap(i, j);
        }
    }
    fn add_row(m: &mut IMat, dst: usize, src: usize, c: i64) {
        let n = m[0].len();
        for k in 0..n {
            m[dst][k] += c * m[src][k];
        }
    }
    fn add_col(m: &mut IMat, dst: usize, src: usize, c: i64) {
        for row in m.iter_mut() {
            row[dst] += c * row[src];
        }
    }

    let mut t = 0usize;
    while t < rows && t < cols {
        // find a pivot of minimal absolute value in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if s[i][j] != 0
                    && pivot.map_or(true, |(pi, pj)| s[i][j].abs() < s[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        swap_rows(&mut s, t, pi);
        swap_rows(&mut u, t, pi);
        swap_cols(&mut s, t, pj);
        swap_cols(&mut v, t, pj);

        let mut clean = true;
        for i in t + 1..rows {
            let q = s[i][t].div_euclid(s[t][t]);
            if q != 0 {
                add_row(&mut s, i, t, -q);
                add_row(&mut u, i, t, -q);
            }
            if s[i][t] != 0 {
                clean = false;
            }
        }
        for j in t + 1..cols {
            let q = s[t][j].div_euclid(s[t][t]);
            if q != 0 {
                add_col(&mut s, j, t, -q);
                add_col(&mut v, j, t, -q);
            }
            if s[t][j] != 0 {
                clean = false;
            }
        }
        if !clean {
            continue; // smaller remainders appeared; re-pivot
        }
        // divisibility pass: s[t][t] must divide the rest of the block
        let d = s[t][t];
        let mut fixed = true;
        'outer: for i in t + 1..rows {
            for j in t + 1..cols {
                if s[i][j] % d != 0 {
                    add_row(&mut s, t, i, 1);
                    add_row(&mut u, t, i, 1);
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if fixed {
            if s[t][t] < 0 {
                for k in 0..cols {
                    s[t][k] = -s[t][k];
                }
                for k in 0..u[0].len() {
                    u[t][k] = -u[t][k];
                }
            }
            t += 1;
        }
    }
    let rank = (0..rows.min(cols)).take_while(|&i| s[i][i] != 0).count();
    Smith { u, s, v, rank }
}

/// Integer kernel of `a` (as column vectors, returned as a list of vectors in
/// the source lattice).
pub fn kernel_basis(a: &IMat) -> Vec<IVec> {
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    if a.is_empty() {
        return identity(cols);
    }
    let sm = smith(a);
    // a * v has zero columns exactly beyond the rank
    (sm.rank..cols)
        .map(|j| (0..cols).map(|i| sm.v[i][j]).collect())
        .collect()
}

/// Does `a·x = b` have an integer solution `x`?
pub fn solvable(a: &IMat, b: &IVec) -> bool {
    solve(a, b).is_some()
}

/// An integer solution of `a·x = b`, if one exists.
pub fn solve(a: &IMat, b: &IVec) -> Option<IVec> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let sm = smith(a);
    let ub = mat_vec(&sm.u, b);
    let mut y = vec![0i64; cols];
    for i in 0..rows {
        if i < sm.rank {
            if ub[i] % sm.s[i][i] != 0 {
                return None;
            }
            y[i] = ub[i] / sm.s[i][i];
        } else if ub[i] != 0 {
            return None;
        }
    }
    Some(mat_vec(&sm.v, &y))
}
