//! Seeded random Weierstrass equations shared by the integration tests.

#![allow(dead_code)]

use nhpoly::equation::WeierstrassEquation;
use nhpoly::field::Field;
use nhpoly::poly::{ExponentVector, Poly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CORPUS_SEED: u64 = 0x4e48_5059;
pub const CORPUS_SIZE: usize = 200;

/// One equation with m ≤ 3 X variables, n ≤ 8 and at most 12 terms below Z^n.
pub fn random_equation(rng: &mut ChaCha8Rng) -> WeierstrassEquation {
    loop {
        let m = rng.gen_range(1..=3);
        let n = rng.gen_range(2..=8u32);
        let terms = rng.gen_range(1..=12);
        let field = Field::Rational;
        let mut p = Poly::monomial(field, ExponentVector::new(vec![0; m], n), field.one());
        for _ in 0..terms {
            let k = rng.gen_range(0..n);
            let i: Vec<u32> = loop {
                let i: Vec<u32> = (0..m).map(|_| rng.gen_range(0..=n + 1)).collect();
                if i.iter().sum::<u32>() + k >= n {
                    break i;
                }
            };
            let c = loop {
                let c = rng.gen_range(-5i64..=5);
                if c != 0 {
                    break c;
                }
            };
            p.add_term(ExponentVector::new(i, k), field.from_i64(c));
        }
        if p.len() < 2 {
            continue;
        }
        return WeierstrassEquation::from_poly(p).expect("generated equations satisfy the support condition");
    }
}

pub fn corpus() -> Vec<WeierstrassEquation> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    (0..CORPUS_SIZE).map(|_| random_equation(&mut rng)).collect()
}

pub fn eq(text: &str) -> WeierstrassEquation {
    WeierstrassEquation::parse(text, Field::Rational, None).expect("valid equation")
}
