//! Small dense linear algebra over ℚ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A basis of `{v : row · v = 0 for every row}` in `cols` unknowns, from the
/// reduced row echelon form.
pub(crate) fn nullspace(rows: &[Vec<BigRational>], cols: usize) -> Vec<Vec<BigRational>> {
    let mut a: Vec<Vec<BigRational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(p, r);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (x, p) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == a.len() {
            break;
        }
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![BigRational::zero(); cols];
            v[free] = BigRational::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[i][free].clone();
            }
            v
        })
        .collect()
}

pub(crate) fn rank(rows: &[Vec<BigRational>]) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    cols - nullspace(rows, cols).len()
}

/// The primitive integer vector on the ray through `v`.
pub(crate) fn primitive_integer(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

pub(crate) fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |s, (x, y)| s + x * y)
}

pub(crate) fn all_positive(v: &[BigRational]) -> bool {
    v.iter().all(Signed::is_positive)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn nullspace_of_a_line() {
        let ns = nullspace(&[vec![q(1), q(-1), q(0)]], 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(dot(v, &[q(1), q(-1), q(0)]).is_zero());
        }
        assert_eq!(rank(&[vec![q(2), q(4)], vec![q(1), q(2)]]), 1);
        assert_eq!(
            primitive_integer(&[BigRational::new(2.into(), 3.into()), BigRational::new(4.into(), 9.into())]),
            vec![BigInt::from(3), BigInt::from(2)]
        );
    }
}
