//! Exact Gaussian elimination over the rationals.

use num_rational::BigRational;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<BigRational>),
    /// Consistent but rank deficient; free unknowns set to zero.
    Underdetermined(Vec<BigRational>),
    Inconsistent,
}

/// Solves `a x = b` for an overdetermined or square system.
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Solution {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigRational>> =
        a.iter().zip(b).map(|(r, v)| r.iter().cloned().chain(std::iter::once(v.clone())).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = BigRational::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=cols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return Solution::Inconsistent;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols].clone();
    }
    if pivots.len() == cols {
        Solution::Unique(x)
    } else {
        Solution::Underdetermined(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn rows(v: &[&[i64]]) -> Vec<Vec<BigRational>> {
        v.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn unique_overdetermined() {
        let a = rows(&[&[1, 1], &[1, 2], &[1, 3]]);
        let b = vec![q(3), q(5), q(7)];
        assert_eq!(solve(&a, &b), Solution::Unique(vec![q(1), q(2)]));
    }

    #[test]
    fn inconsistent_and_deficient() {
        let a = rows(&[&[1, 1], &[1, 2], &[1, 3]]);
        assert_eq!(solve(&a, &[q(3), q(5), q(8)]), Solution::Inconsistent);
        let a = rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(solve(&a, &[q(2), q(4)]), Solution::Underdetermined(vec![q(2), q(0)]));
    }

    #[test]
    fn fractional_solution() {
        let a = rows(&[&[2, 0], &[0, 3]]);
        let s = solve(&a, &[q(1), q(1)]);
        assert_eq!(
            s,
            Solution::Unique(vec![BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 3.into())])
        );
    }
}
