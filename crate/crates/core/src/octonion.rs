//! Signed multiplication tables for the quaternions and octonions.
//!
//! Basis element `e_0` is the real unit; `e_1..e_{n-1}` are imaginary with
//! `e_i^2 = -1` and pairwise anticommutation. The octonion orientation is
//! fixed by the products
//!
//! ```text
//! e1*e2 = e3,  e1*e4 = e5,  e2*e4 = e6,  e3*e4 = e7
//! ```
//!
//! which is exactly what one Cayley-Dickson doubling of the quaternions
//! (`(a,b)(c,d) = (ac - conj(d) b, da + b conj(c))` with `e4 = (0,1)`)
//! produces; [`cayley_dickson_double`] rebuilds the table programmatically
//! and the unit tests pin the checked-in constants against it.

/// A signed basis-multiplication table: `e_i * e_j = sign[i][j] * e_{index[i][j]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedTable {
    pub dim: usize,
    pub sign: Vec<Vec<i8>>,
    pub index: Vec<Vec<usize>>,
}

/// Quaternion signs (row = left factor, column = right factor).
pub const QUATERNION_SIGNS: [[i8; 4]; 4] = [
    [1, 1, 1, 1],
    [1, -1, 1, -1],
    [1, -1, -1, 1],
    [1, 1, -1, -1],
];

/// Quaternion basis indices of each product.
pub const QUATERNION_INDEX: [[usize; 4]; 4] = [
    [0, 1, 2, 3],
    [1, 0, 3, 2],
    [2, 3, 0, 1],
    [3, 2, 1, 0],
];

/// Octonion signs (row = left factor, column = right factor).
pub const OCTONION_SIGNS: [[i8; 8]; 8] = [
    [1, 1, 1, 1, 1, 1, 1, 1],
    [1, -1, 1, -1, 1, -1, -1, 1],
    [1, -1, -1, 1, 1, 1, -1, -1],
    [1, 1, -1, -1, 1, -1, 1, -1],
    [1, -1, -1, -1, -1, 1, 1, 1],
    [1, 1, -1, 1, -1, -1, -1, 1],
    [1, 1, 1, -1, -1, 1, -1, -1],
    [1, -1, 1, 1, -1, -1, 1, -1],
];

/// Octonion basis indices of each product.
pub const OCTONION_INDEX: [[usize; 8]; 8] = [
    [0, 1, 2, 3, 4, 5, 6, 7],
    [1, 0, 3, 2, 5, 4, 7, 6],
    [2, 3, 0, 1, 6, 7, 4, 5],
    [3, 2, 1, 0, 7, 6, 5, 4],
    [4, 5, 6, 7, 0, 1, 2, 3],
    [5, 4, 7, 6, 1, 0, 3, 2],
    [6, 7, 4, 5, 2, 3, 0, 1],
    [7, 6, 5, 4, 3, 2, 1, 0],
];

impl SignedTable {
    pub fn quaternion() -> Self {
        Self {
            dim: 4,
            sign: QUATERNION_SIGNS.iter().map(|r| r.to_vec()).collect(),
            index: QUATERNION_INDEX.iter().map(|r| r.to_vec()).collect(),
        }
    }

    pub fn octonion() -> Self {
        Self {
            dim: 8,
            sign: OCTONION_SIGNS.iter().map(|r| r.to_vec()).collect(),
            index: OCTONION_INDEX.iter().map(|r| r.to_vec()).collect(),
        }
    }

    /// Multiplies two coefficient vectors in the algebra the table encodes.
    pub fn multiply(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        let mut out = vec![0.0; self.dim];
        for i in 0..self.dim {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..self.dim {
                if y[j] == 0.0 {
                    continue;
                }
                out[self.index[i][j]] += f64::from(self.sign[i][j]) * x[i] * y[j];
            }
        }
        out
    }

    /// Structure signs of the imaginary part: returns `t` with
    /// `Im(e_j e_k) = t(j,k) * e_{index[j][k]}` for imaginary `j != k`,
    /// `0` on the diagonal. Indices here are 1-based into the table.
    pub fn imaginary_sign(&self, j: usize, k: usize) -> i8 {
        if j == k {
            0
        } else {
            self.sign[j][k]
        }
    }
}

/// One Cayley-Dickson doubling step:
/// `(a,b)(c,d) = (ac - conj(d) b, da + b conj(c))`.
pub fn cayley_dickson_double(base: &SignedTable) -> SignedTable {
    let n = base.dim;
    let dim = 2 * n;
    let mut sign = vec![vec![0i8; dim]; dim];
    let mut index = vec![vec![0usize; dim]; dim];

    // conjugation: e_0 fixed, imaginary units negated
    let conj = |i: usize| -> i8 {
        if i == 0 {
            1
        } else {
            -1
        }
    };

    for i in 0..dim {
        for j in 0..dim {
            // write e_i = (a, b), e_j = (c, d) with exactly one nonzero slot
            let (a, b) = if i < n { (Some(i), None) } else { (None, Some(i - n)) };
            let (c, d) = if j < n { (Some(j), None) } else { (None, Some(j - n)) };

            let (s, k) = match (a, b, c, d) {
                // (a,0)(c,0) = (ac, 0)
                (Some(a), None, Some(c), None) => (base.sign[a][c], base.index[a][c]),
                // (a,0)(0,d) = (0, da)
                (Some(a), None, None, Some(d)) => (base.sign[d][a], base.index[d][a] + n),
                // (0,b)(c,0) = (0, b conj(c))
                (None, Some(b), Some(c), None) => {
                    (base.sign[b][c] * conj(c), base.index[b][c] + n)
                }
                // (0,b)(0,d) = (-conj(d) b, 0)
                (None, Some(b), None, Some(d)) => {
                    (-(base.sign[d][b] * conj(d)), base.index[d][b])
                }
                _ => unreachable!(),
            };
            sign[i][j] = s;
            index[i][j] = k;
        }
    }

    SignedTable { dim, sign, index }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(dim: usize, i: usize) -> Vec<f64> {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        v
    }

    #[test]
    fn quaternion_table_is_doubled_complex() {
        let complex = SignedTable {
            dim: 2,
            sign: vec![vec![1, 1], vec![1, -1]],
            index: vec![vec![0, 1], vec![1, 0]],
        };
        assert_eq!(cayley_dickson_double(&complex), SignedTable::quaternion());
    }

    #[test]
    fn octonion_table_is_doubled_quaternion() {
        assert_eq!(
            cayley_dickson_double(&SignedTable::quaternion()),
            SignedTable::octonion()
        );
    }

    #[test]
    fn octonion_defining_products() {
        let t = SignedTable::octonion();
        // e1e2=e3, e1e4=e5, e2e4=e6, e3e4=e7
        for (j, k, l) in [(1, 2, 3), (1, 4, 5), (2, 4, 6), (3, 4, 7)] {
            assert_eq!(t.sign[j][k], 1, "e{j} e{k}");
            assert_eq!(t.index[j][k], l, "e{j} e{k}");
        }
    }

    #[test]
    fn octonion_units_anticommute_and_square_to_minus_one() {
        let t = SignedTable::octonion();
        for i in 1..8 {
            assert_eq!((t.sign[i][i], t.index[i][i]), (-1, 0));
            for j in 1..8 {
                if i == j {
                    continue;
                }
                assert_eq!(t.index[i][j], t.index[j][i]);
                assert_eq!(t.sign[i][j], -t.sign[j][i]);
            }
        }
    }

    #[test]
    fn octonion_alternativity_on_random_vectors() {
        // x(xy) = (xx)y and (yx)x = y(xx) for a spread of integer vectors;
        // exact in f64 since all entries stay small integers.
        let t = SignedTable::octonion();
        let vecs: Vec<Vec<f64>> = (0..8)
            .map(|s| (0..8).map(|i| ((i * 7 + s * 3) % 5) as f64 - 2.0).collect())
            .collect();
        for x in &vecs {
            for y in &vecs {
                let xy = t.multiply(x, y);
                let xx = t.multiply(x, x);
                assert_eq!(t.multiply(x, &xy), t.multiply(&xx, y));
                let yx = t.multiply(y, x);
                assert_eq!(t.multiply(&yx, x), t.multiply(y, &xx));
            }
        }
    }

    #[test]
    fn octonion_moufang_identity_on_basis_sums() {
        // g(h(gk)) = ((gh)g)k on all sums of two basis elements
        let t = SignedTable::octonion();
        for a in 0..8 {
            for b in 0..8 {
                for c in 0..8 {
                    let g: Vec<f64> = (0..8)
                        .map(|i| f64::from(u8::from(i == a)) + f64::from(u8::from(i == b)))
                        .collect();
                    let h = basis(8, (a + 3) % 8);
                    let k = basis(8, c);
                    let lhs = t.multiply(&g, &t.multiply(&h, &t.multiply(&g, &k)));
                    let rhs = t.multiply(&t.multiply(&t.multiply(&g, &h), &g), &k);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
