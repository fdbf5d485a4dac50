//! Oracles shared by the integration tests. They work on integer-scaled values and avoid the
//! library's solver code.
#![allow(dead_code)]

use bincover::{Rational, Sequence};
use num_integer::Integer;
use num_traits::ToPrimitive;

/// Values scaled to integers over the least common denominator, plus that denominator.
pub fn scale(seq: &Sequence) -> (Vec<u64>, u64) {
    let d = seq
        .values()
        .map(|v| v.denom().to_u64().expect("small denominators"))
        .fold(1u64, |acc, d| acc.lcm(&d));
    let values = seq
        .values()
        .map(|v| {
            (v.numer() * (d / v.denom().to_u64().unwrap()))
                .to_u64()
                .unwrap()
        })
        .collect();
    (values, d)
}

/// Best covering over every set partition, enumerated as restricted growth strings.
pub fn naive_partition_opt(seq: &Sequence) -> usize {
    fn go(i: usize, values: &[u64], cap: u64, blocks: &mut Vec<u64>, best: &mut usize) {
        if i == values.len() {
            let covered = blocks.iter().filter(|&&b| b >= cap).count();
            *best = (*best).max(covered);
            return;
        }
        for b in 0..blocks.len() {
            blocks[b] += values[i];
            go(i + 1, values, cap, blocks, best);
            blocks[b] -= values[i];
        }
        blocks.push(values[i]);
        go(i + 1, values, cap, blocks, best);
        blocks.pop();
    }
    let (values, cap) = scale(seq);
    let mut best = 0;
    go(0, &values, cap, &mut Vec::new(), &mut best);
    best
}

pub fn seq_from(values: &[(i64, i64)]) -> Sequence {
    Sequence::from_values(values.iter().map(|&(p, q)| Rational::frac(p, q)))
}
