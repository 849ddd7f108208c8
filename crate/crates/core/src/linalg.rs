//! Exact linear systems: fraction-free (Bareiss) elimination over the integers, plus plain
//! Gaussian elimination over any [`Scalar`] field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols}) or rhs has {rhs} entries")]
    Shape { rows: usize, cols: usize, rhs: usize },
    #[error("matrix is singular (no pivot in column {0})")]
    Singular(usize),
}

/// `matrix · x = rhs` over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    pub matrix: Vec<Vec<Rational>>,
    pub rhs: Vec<Rational>,
}

impl LinearSystem {
    pub fn new(matrix: Vec<Vec<Rational>>, rhs: Vec<Rational>) -> Self {
        Self { matrix, rhs }
    }

    fn check(&self) -> Result<usize, LinalgError> {
        let n = self.matrix.len();
        if self.rhs.len() != n || self.matrix.iter().any(|r| r.len() != n) {
            return Err(LinalgError::Shape {
                rows: n,
                cols: self.matrix.first().map_or(0, Vec::len),
                rhs: self.rhs.len(),
            });
        }
        Ok(n)
    }

    /// Whether `x` satisfies every equation exactly.
    pub fn is_solution(&self, x: &[Rational]) -> bool {
        self.matrix.iter().zip(&self.rhs).all(|(row, b)| {
            row.iter().zip(x).map(|(a, xi)| a * xi).sum::<Rational>() == *b
        })
    }
}

/// Solves the system exactly. Each row is scaled to integers, the augmented matrix is
/// reduced fraction-free (every intermediate entry is a minor, so no fractions or gcds
/// are needed), and the triangular system is back-substituted over the rationals.
pub fn solve_linear_exact(sys: &LinearSystem) -> Result<Vec<Rational>, LinalgError> {
    let n = sys.check()?;
    let mut m: Vec<Vec<BigInt>> = sys
        .matrix
        .iter()
        .zip(&sys.rhs)
        .map(|(row, b)| {
            let lcm = row.iter().chain([b]).fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            row.iter()
                .chain([b])
                .map(|x| x.numer() * (&lcm / x.denom()))
                .collect()
        })
        .collect();
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = (k..n).find(|&r| !m[r][k].is_zero()).ok_or(LinalgError::Singular(k))?;
        m.swap(k, pivot);
        for i in k + 1..n {
            for j in k + 1..=n {
                let v = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rational::from_integer(m[i][n].clone());
        for j in i + 1..n {
            acc -= Rational::from_integer(m[i][j].clone()) * &x[j];
        }
        x[i] = acc / Rational::from_integer(m[i][i].clone());
    }
    Ok(x)
}

/// Gaussian elimination over `S`, pivoting on the entry of largest magnitude (which for
/// exact types only needs to be nonzero).
pub fn solve_field<S: Scalar>(matrix: &[Vec<S>], rhs: &[S]) -> Result<Vec<S>, LinalgError> {
    let n = matrix.len();
    if rhs.len() != n || matrix.iter().any(|r| r.len() != n) {
        return Err(LinalgError::Shape {
            rows: n,
            cols: matrix.first().map_or(0, Vec::len),
            rhs: rhs.len(),
        });
    }
    let mut m: Vec<Vec<S>> = matrix
        .iter()
        .zip(rhs)
        .map(|(r, b)| r.iter().cloned().chain([b.clone()]).collect())
        .collect();
    for k in 0..n {
        let pivot = (k..n)
            .filter(|&r| !m[r][k].is_zero())
            .max_by(|&a, &b| m[a][k].approx().abs().total_cmp(&m[b][k].approx().abs()).then(b.cmp(&a)))
            .ok_or(LinalgError::Singular(k))?;
        m.swap(k, pivot);
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = m[i][k].clone() / m[k][k].clone();
            for j in k..=n {
                let v = m[i][j].clone() - f.clone() * m[k][j].clone();
                m[i][j] = v;
            }
        }
    }
    let mut x = vec![S::zero(); n];
    for i in (0..n).rev() {
        let mut acc = m[i][n].clone();
        for j in i + 1..n {
            acc = acc - m[i][j].clone() * x[j].clone();
        }
        x[i] = acc / m[i][i].clone();
    }
    Ok(x)
}

/// The integer value of `x`, if it is a nonnegative integer.
pub fn as_nonneg_integer(x: &Rational) -> Option<BigInt> {
    (x.is_integer() && !x.is_negative()).then(|| x.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn identity_and_scalar() {
        let sys = LinearSystem::new(vec![vec![r(1, 1), r(0, 1)], vec![r(0, 1), r(1, 1)]], vec![r(3, 1), r(-2, 5)]);
        assert_eq!(solve_linear_exact(&sys).unwrap(), vec![r(3, 1), r(-2, 5)]);
        let one = LinearSystem::new(vec![vec![r(2, 1)]], vec![r(1, 1)]);
        assert_eq!(solve_linear_exact(&one).unwrap(), vec![r(1, 2)]);
    }

    #[test]
    fn hilbert() {
        let h: Vec<Vec<Rational>> = (0..3).map(|i| (0..3).map(|j| r(1, i + j + 1)).collect()).collect();
        let sys = LinearSystem::new(h, vec![r(1, 1), r(2, 1), r(3, 1)]);
        let x = solve_linear_exact(&sys).unwrap();
        assert!(sys.is_solution(&x));
        assert_eq!(x, vec![r(27, 1), r(-192, 1), r(210, 1)]);
        let y = solve_field(&sys.matrix, &sys.rhs).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn pivoting_and_singularity() {
        let sys = LinearSystem::new(vec![vec![r(0, 1), r(1, 1)], vec![r(1, 1), r(0, 1)]], vec![r(5, 1), r(7, 1)]);
        assert_eq!(solve_linear_exact(&sys).unwrap(), vec![r(7, 1), r(5, 1)]);
        let sing = LinearSystem::new(vec![vec![r(1, 1), r(2, 1)], vec![r(2, 1), r(4, 1)]], vec![r(1, 1), r(2, 1)]);
        assert_eq!(solve_linear_exact(&sing), Err(LinalgError::Singular(1)));
        let bad = LinearSystem::new(vec![vec![r(1, 1)]], vec![]);
        assert!(matches!(solve_linear_exact(&bad), Err(LinalgError::Shape { .. })));
    }

    #[test]
    fn floats() {
        let m = vec![vec![1e-20, 1.0], vec![1.0, 1.0]];
        let x = solve_field(&m, &[1.0, 2.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12);
    }
}
