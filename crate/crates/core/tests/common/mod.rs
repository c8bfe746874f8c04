//! Generators shared by the integration tests.

#![allow(dead_code)]

use kerov::{Rat, Scalar, Zigzag};
use num_bigint::BigInt;
use rand::Rng;

pub fn r(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Centered zigzag with `corners` convex corners at rationals of denominator
/// `den`: draws `2L + 1` increasing points, alternates concave and convex, and
/// translates so that both corner sums agree.
pub fn zigzag_from_gaps(gaps: &[i64], den: i64) -> Zigzag<Rat> {
    let mut points = Vec::with_capacity(gaps.len() + 1);
    let mut acc = 0i64;
    points.push(r(0, 1));
    for g in gaps {
        acc += g.max(&1);
        points.push(r(acc, den));
    }
    if points.len() % 2 == 0 {
        points.pop();
    }
    let concave: Vec<Rat> = points.iter().step_by(2).cloned().collect();
    let convex: Vec<Rat> = points.iter().skip(1).step_by(2).cloned().collect();
    let sum = |v: &[Rat]| v.iter().fold(Rat::from_i64(0), |a, b| a + b);
    let shift = sum(&convex) - sum(&concave);
    let concave = concave.into_iter().map(|x| x + &shift).collect();
    let convex = convex.into_iter().map(|y| y + &shift).collect();
    Zigzag::new(concave, convex).expect("interlacing and centered by construction")
}

pub fn random_zigzag<R: Rng>(rng: &mut R, max_corners: usize, den: i64) -> Zigzag<Rat> {
    let corners = rng.random_range(0..=max_corners);
    let gaps: Vec<i64> = (0..2 * corners)
        .map(|_| rng.random_range(1..=3 * den))
        .collect();
    zigzag_from_gaps(&gaps, den)
}
