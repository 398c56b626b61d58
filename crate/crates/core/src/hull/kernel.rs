//! Exact scalar kernels for hull predicates.
//!
//! Points enter the hull in homogeneous form `[w, x_1, …, x_m]` with `w > 0`,
//! directions as `[0, e_j]`. Infinitesimal polytopes keep the entries in ℤ[ε]
//! and read signs at 0⁺; concrete polytopes evaluate up front and work in ℚ.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::eps::EpsNumber;
use crate::upoly::{sign_of, UPoly};

pub(crate) trait Scalar: Clone + Send + Sync + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Division known to be exact (Bareiss steps).
    fn div_exact(&self, o: &Self) -> Self;
    fn sign(&self) -> i8;
    fn to_eps(&self) -> EpsNumber;

    fn is_zero(&self) -> bool {
        self.sign() == 0
    }
}

/// A polynomial in ε compared as ε → 0⁺.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Inf(pub UPoly);

impl Scalar for Inf {
    fn zero() -> Self {
        Inf(UPoly::zero())
    }
    fn one() -> Self {
        Inf(UPoly::one())
    }
    fn add(&self, o: &Self) -> Self {
        Inf(self.0.add(&o.0))
    }
    fn sub(&self, o: &Self) -> Self {
        Inf(self.0.sub(&o.0))
    }
    fn mul(&self, o: &Self) -> Self {
        Inf(self.0.mul(&o.0))
    }
    fn neg(&self) -> Self {
        Inf(self.0.neg())
    }
    fn div_exact(&self, o: &Self) -> Self {
        Inf(self.0.exact_div(&o.0).expect("fraction-free step divides exactly"))
    }
    fn sign(&self) -> i8 {
        self.0.sign_at_zero_plus()
    }
    fn to_eps(&self) -> EpsNumber {
        EpsNumber::from_polys(self.0.clone(), UPoly::one()).expect("bounded degree")
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn sign(&self) -> i8 {
        sign_of(self)
    }
    fn to_eps(&self) -> EpsNumber {
        EpsNumber::from_rational(self)
    }
}

pub(crate) fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc.add(&x.mul(y)))
}

/// Bareiss determinant of a square matrix.
pub(crate) fn det<S: Scalar>(rows: &[Vec<S>]) -> S {
    let n = rows.len();
    if n == 0 {
        return S::one();
    }
    let mut a = rows.to_vec();
    let mut negate = false;
    let mut prev = S::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return S::zero();
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j])).div_exact(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    if negate {
        prev.neg()
    } else {
        prev
    }
}

/// Rank by fraction-free row echelon elimination.
pub(crate) fn rank<S: Scalar>(rows: &[Vec<S>]) -> usize {
    let Some(cols) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut a = rows.to_vec();
    let n = a.len();
    let mut r = 0;
    let mut prev = S::one();
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        for i in r + 1..n {
            for j in c + 1..cols {
                a[i][j] = a[i][j].mul(&a[r][c]).sub(&a[i][c].mul(&a[r][j])).div_exact(&prev);
            }
            a[i][c] = S::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Coefficients `c` with `det([r; rows]) = Σ c_t r_t` for `rows` of shape
/// k × (k+1).
pub(crate) fn cofactors<S: Scalar>(rows: &[Vec<S>]) -> Vec<S> {
    let width = rows.len() + 1;
    (0..width)
        .map(|t| {
            let minor: Vec<Vec<S>> = rows
                .iter()
                .map(|r| r.iter().enumerate().filter(|(j, _)| *j != t).map(|(_, v)| v.clone()).collect())
                .collect();
            let d = det(&minor);
            if t % 2 == 1 {
                d.neg()
            } else {
                d
            }
        })
        .collect()
}

/// A nonzero kernel vector of a k × (k+1) matrix of rank k, by fraction-free
/// Gauss–Jordan elimination. `None` when the rank is smaller.
pub(crate) fn null_vector<S: Scalar>(rows: &[Vec<S>]) -> Option<Vec<S>> {
    let n = rows.len();
    let cols = n + 1;
    let mut a = rows.to_vec();
    let mut pivots = Vec::with_capacity(n);
    let mut prev = S::one();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        for i in (0..n).filter(|&i| i != r) {
            for j in (0..cols).filter(|&j| j != c) {
                a[i][j] = a[r][c].mul(&a[i][j]).sub(&a[i][c].mul(&a[r][j])).div_exact(&prev);
            }
            a[i][c] = S::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    if r < n {
        return None;
    }
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut x = vec![S::zero(); cols];
    x[free] = prev;
    for (i, &pc) in pivots.iter().enumerate() {
        x[pc] = a[i][free].neg();
    }
    Some(x)
}
