//! Dense rational tensors of small rank over a dimension r <= 7.

use num_traits::Zero;

use crate::Rational;

/// Rank-(1,2) tensor `t[i][j][k]`, all indices of one dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor3 {
    dim: usize,
    data: Vec<Rational>,
}

impl Tensor3 {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Rational::zero(); dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn offset(&self, i: usize, j: usize, k: usize) -> usize {
        debug_assert!(i < self.dim && j < self.dim && k < self.dim);
        (i * self.dim + j) * self.dim + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.data[self.offset(i, j, k)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, value: Rational) {
        let at = self.offset(i, j, k);
        self.data[at] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Nonzero entries in index order.
    pub fn nonzero(&self) -> impl Iterator<Item = ([usize; 3], &Rational)> {
        let dim = self.dim;
        self.data.iter().enumerate().filter_map(move |(at, v)| {
            if v.is_zero() {
                None
            } else {
                let k = at % dim;
                let j = (at / dim) % dim;
                let i = at / (dim * dim);
                Some(([i, j, k], v))
            }
        })
    }
}

/// Rank-(1,3) tensor `t[i][j][k][l]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor4 {
    dim: usize,
    data: Vec<Rational>,
}

impl Tensor4 {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Rational::zero(); dim * dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn offset(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        debug_assert!(i < self.dim && j < self.dim && k < self.dim && l < self.dim);
        ((i * self.dim + j) * self.dim + k) * self.dim + l
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &Rational {
        &self.data[self.offset(i, j, k, l)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, value: Rational) {
        let at = self.offset(i, j, k, l);
        self.data[at] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = ([usize; 4], &Rational)> {
        let dim = self.dim;
        self.data.iter().enumerate().filter_map(move |(at, v)| {
            if v.is_zero() {
                None
            } else {
                let l = at % dim;
                let k = (at / dim) % dim;
                let j = (at / (dim * dim)) % dim;
                let i = at / (dim * dim * dim);
                Some(([i, j, k, l], v))
            }
        })
    }
}

/// Exact determinant of a square rational matrix (Gaussian elimination).
pub fn determinant(matrix: &[Vec<Rational>]) -> Rational {
    let n = matrix.len();
    let mut m: Vec<Vec<Rational>> = matrix.to_vec();
    let mut det = Rational::from_integer(1.into());
    for col in 0..n {
        let pivot_row = match (col..n).find(|&r| !m[r][col].is_zero()) {
            Some(r) => r,
            None => return Rational::zero(),
        };
        if pivot_row != col {
            m.swap(pivot_row, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= pivot.clone();
        for row in col + 1..n {
            if m[row][col].is_zero() {
                continue;
            }
            let factor = m[row][col].clone() / pivot.clone();
            for c in col..n {
                let delta = factor.clone() * m[col][c].clone();
                m[row][c] -= delta;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn determinant_of_identity_and_singular() {
        let id: Vec<Vec<Rational>> = (0..3)
            .map(|i| (0..3).map(|j| rat(i64::from(i == j), 1)).collect())
            .collect();
        assert_eq!(determinant(&id), rat(1, 1));

        let singular = vec![
            vec![rat(1, 1), rat(2, 1)],
            vec![rat(2, 1), rat(4, 1)],
        ];
        assert_eq!(determinant(&singular), rat(0, 1));

        let m = vec![
            vec![rat(0, 1), rat(1, 2)],
            vec![rat(-3, 1), rat(7, 5)],
        ];
        assert_eq!(determinant(&m), rat(3, 2));
    }
}
