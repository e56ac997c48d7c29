#![allow(dead_code)]

use conediag::polycore::{parse_polynomial, rat, Polynomial, Rat};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

pub const EX1: &str = "1 - (Z1+Z2+Z3) + 3/4*(Z1*Z2+Z1*Z3+Z2*Z3)";
pub const EX1_SCALED: &str = "1 - 2/3*(Z1+Z2+Z3) + 1/3*(Z1*Z2+Z1*Z3+Z2*Z3)";
pub const EX2: &str = "1 - (Z1+Z2+Z3+Z4) + 64/27*(Z1*Z2*Z3+Z1*Z2*Z4+Z1*Z3*Z4+Z2*Z3*Z4)";
pub const EX2_SCALED: &str = "1 - 3/8*(Z1+Z2+Z3+Z4) + 1/8*(Z1*Z2*Z3+Z1*Z2*Z4+Z1*Z3*Z4+Z2*Z3*Z4)";

pub fn poly(text: &str, d: usize) -> Polynomial {
    parse_polynomial(text, &Polynomial::default_variables(d)).unwrap()
}

/// Fixed-seed configuration so every run sees the same cases.
pub fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(42),
        failure_persistence: None,
        ..Config::default()
    }
}

pub fn small_rat() -> impl Strategy<Value = Rat> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

pub fn nonzero_rat() -> impl Strategy<Value = Rat> {
    (1i64..=9, 1i64..=5, any::<bool>()).prop_map(|(n, d, neg)| rat(if neg { -n } else { n }, d))
}

pub fn sparse_poly(dim: usize, max_terms: usize, max_exp: u32) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, dim), small_rat()), 0..=max_terms)
        .prop_map(move |terms| Polynomial::from_terms(dim, terms).unwrap())
}

/// Sum of `c_k e_k` over elementary symmetric polynomials, plus the constant 1.
pub fn symmetric_from_elementary(dim: usize, coeffs: &[Rat]) -> Polynomial {
    let mut p = Polynomial::constant(dim, rat(1, 1));
    for (k, c) in coeffs.iter().enumerate() {
        let k = k + 1;
        for mask in 0u32..(1 << dim) {
            if mask.count_ones() as usize == k {
                let e: Vec<u32> = (0..dim).map(|j| (mask >> j) & 1).collect();
                p = &p + &Polynomial::from_terms(dim, [(e, c.clone())]).unwrap();
            }
        }
    }
    p
}
