//! Instance generators.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Result};
use crate::model::Sequence;
use crate::opt::Certificate;
use crate::rational::Rational;

/// The 28-item worked example, in hundredths.
const WORKED_EXAMPLE: [i64; 28] = [
    25, 80, 72, 20, 90, 45, 51, 67, 45, 60, 42, 55, 53, 28, 11, 15, 52, 15, 51, 41, 15, 35, 10, 35,
    30, 30, 40, 18,
];

pub fn worked_example() -> Sequence {
    Sequence::from_values(WORKED_EXAMPLE.iter().map(|&v| Rational::frac(v, 100)))
}

/// Optimal covering of [`worked_example`] with 11 bins, as item indices.
pub fn worked_example_certificate() -> Certificate {
    // values per bin: {.53,.51} {.52,.51} | {.90,.11} {.80,.20} {.72,.28} {.67,.15,.18}
    // {.55,.30,.15} | {.60,.40} | {.45,.35,.15,.10} {.45,.25,.35} {.42,.41,.30}
    Certificate::new(vec![
        vec![12, 6],
        vec![16, 18],
        vec![4, 14],
        vec![1, 3],
        vec![2, 13],
        vec![7, 15, 27],
        vec![11, 24, 17],
        vec![9, 26],
        vec![5, 21, 20, 22],
        vec![8, 0, 23],
        vec![10, 19, 25],
    ])
}

/// Ratio `(1 - big) / small`, which must be a positive integer.
fn smalls_per_bin(big: &Rational, small: &Rational) -> Result<usize> {
    let half = Rational::frac(1, 2);
    if *big < half || *big >= Rational::one() {
        return Err(domain(format!("big item {big} outside [1/2, 1[")));
    }
    if small.is_negative() || small.is_zero() || *small >= Rational::frac(1, 4) {
        return Err(domain(format!("small item {small} outside ]0, 1/4[")));
    }
    let r = (Rational::one() - big) / small.clone();
    if r.denom() != &BigInt::from(1) {
        return Err(domain(format!(
            "(1 - {big}) / {small} = {r} is not an integer"
        )));
    }
    r.numer()
        .to_usize()
        .ok_or_else(|| domain("smalls per bin does not fit in a machine word"))
}

/// `N * r` small items followed by `N` big items, where `r = (1 - big) / small`. An optimal
/// covering puts one big item and `r` small items in each of `N` bins, each at load exactly 1.
pub fn tightness_family(n: usize, big: &Rational, small: &Rational) -> Result<Sequence> {
    let r = smalls_per_bin(big, small)?;
    let values =
        std::iter::repeat_n(small.clone(), n * r).chain(std::iter::repeat_n(big.clone(), n));
    Ok(Sequence::from_values(values))
}

pub fn tightness_default(n: usize) -> Sequence {
    tightness_family(n, &Rational::frac(11, 20), &Rational::frac(9, 100)).expect("valid defaults")
}

/// The `N`-bin covering of a [`tightness_family`] instance.
pub fn tightness_certificate(n: usize, big: &Rational, small: &Rational) -> Result<Certificate> {
    let r = smalls_per_bin(big, small)?;
    Ok(Certificate::new(
        (0..n)
            .map(|i| {
                let mut bin: Vec<usize> = (i * r..(i + 1) * r).collect();
                bin.push(n * r + i);
                bin
            })
            .collect(),
    ))
}

/// Seeded uniform instance on the grid `j / denominator_bound` inside `[value_min, value_max]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomSpec {
    pub n: usize,
    pub value_min: Rational,
    pub value_max: Rational,
    pub denominator_bound: u32,
    pub seed: u64,
}

pub fn random_instance(spec: &RandomSpec) -> Result<Sequence> {
    if spec.value_min.is_negative()
        || spec.value_min.is_zero()
        || spec.value_min >= spec.value_max
        || spec.value_max >= Rational::one()
    {
        return Err(domain(format!(
            "need 0 < value_min < value_max < 1, got [{}, {}]",
            spec.value_min, spec.value_max
        )));
    }
    if spec.denominator_bound == 0 {
        return Err(domain("denominator bound must be positive"));
    }
    let d = Rational::integer(spec.denominator_bound);
    let lo = (spec.value_min.clone() * d.clone()).ceil();
    let hi = (spec.value_max.clone() * d).floor();
    let (lo, hi) = match (lo.to_i64(), hi.to_i64()) {
        (Some(lo), Some(hi)) if lo <= hi => (lo, hi),
        _ => {
            return Err(domain(format!(
                "no multiple of 1/{} inside [{}, {}]",
                spec.denominator_bound, spec.value_min, spec.value_max
            )))
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let values = (0..spec.n)
        .map(|_| Rational::frac(rng.random_range(lo..=hi), spec.denominator_bound as i64))
        .collect::<Vec<_>>();
    Ok(Sequence::from_values(values))
}
