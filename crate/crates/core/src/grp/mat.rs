//! 2×2 matrices over `ℤ/m` and a small Gaussian eliminator over `𝔽_p`.

use serde::{Deserialize, Serialize};

use crate::modarith::{inv_mod, mul_mod};

/// Row-major 2×2 matrix with entries reduced modulo some `m` held by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat2(pub [[u64; 2]; 2]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([[1, 0], [0, 1]]);

    pub fn diag(x: u64, y: u64) -> Self {
        Mat2([[x, 0], [0, y]])
    }

    /// Matrix whose columns are `c0` and `c1`.
    pub fn from_columns(c0: [u64; 2], c1: [u64; 2]) -> Self {
        Mat2([[c0[0], c1[0]], [c0[1], c1[1]]])
    }

    pub fn column(&self, j: usize) -> [u64; 2] {
        [self.0[0][j], self.0[1][j]]
    }

    pub fn mul(&self, rhs: &Mat2, m: u64) -> Mat2 {
        let a = &self.0;
        let b = &rhs.0;
        let mut out = [[0u64; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (mul_mod(a[i][0], b[0][j], m) + mul_mod(a[i][1], b[1][j], m)) % m;
            }
        }
        Mat2(out)
    }

    #[inline]
    pub fn apply(&self, v: [u64; 2], m: u64) -> [u64; 2] {
        let a = &self.0;
        [
            (a[0][0] * v[0] % m + a[0][1] * v[1] % m) % m,
            (a[1][0] * v[0] % m + a[1][1] * v[1] % m) % m,
        ]
    }

    pub fn pow(&self, mut e: u64, m: u64) -> Mat2 {
        let mut acc = Mat2::IDENTITY;
        let mut b = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b, m);
            }
            b = b.mul(&b, m);
            e >>= 1;
        }
        acc
    }

    pub fn det(&self, m: u64) -> u64 {
        let a = &self.0;
        (mul_mod(a[0][0], a[1][1], m) + m - mul_mod(a[0][1], a[1][0], m)) % m
    }

    pub fn trace(&self, m: u64) -> u64 {
        (self.0[0][0] + self.0[1][1]) % m
    }

    pub fn sub(&self, rhs: &Mat2, m: u64) -> Mat2 {
        let mut out = [[0u64; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (self.0[i][j] + m - rhs.0[i][j] % m) % m;
            }
        }
        Mat2(out)
    }

    /// Inverse modulo `m`, if the determinant is a unit.
    pub fn inverse(&self, m: u64) -> Option<Mat2> {
        let di = inv_mod(self.det(m), m).ok()?;
        let a = &self.0;
        let neg = |x: u64| (m - x % m) % m;
        Some(Mat2([
            [mul_mod(a[1][1], di, m), mul_mod(neg(a[0][1]), di, m)],
            [mul_mod(neg(a[1][0]), di, m), mul_mod(a[0][0], di, m)],
        ]))
    }
}

/// Basis of the right nullspace of `rows` over `𝔽_p`.
pub fn nullspace_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = inv_mod(rows[r][col], p).expect("nonzero mod prime");
        for x in rows[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_multiple_of(p) {
                let f = rows[i][col];
                let pivot = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot) {
                    *x = (*x + p - mul_mod(f, *y, p)) % p;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; ncols];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - rows[i][f] % p) % p;
            }
            v
        })
        .collect()
}
