//! Optimal coverings, certificates, the group decomposition of an optimum and the
//! competitive-bound checks.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{domain, Error, Result};
use crate::model::{classify, total_load, ItemClass, Sequence};
use crate::rational::Rational;

pub const DEFAULT_SIZE_LIMIT: usize = 15;
/// Hard ceiling for the subset tables of [`opt_exact`].
pub const MAX_SIZE_LIMIT: usize = 24;

/// A covering given as bins of 0-based item indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Certificate {
    pub bins: Vec<Vec<usize>>,
}

impl Certificate {
    pub fn new(bins: Vec<Vec<usize>>) -> Self {
        Certificate { bins }
    }

    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    /// One bin per line, whitespace-separated indices, `#` comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut bins = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bin = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| Error::Parse {
                        line: lineno + 1,
                        message: format!("bad item index {tok:?}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            bins.push(bin);
        }
        Ok(Certificate { bins })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bin in &self.bins {
            let line: Vec<String> = bin.iter().map(|i| i.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// `floor(load(seq))`, an upper bound on the optimum.
pub fn floor_load_bound(seq: &Sequence) -> usize {
    total_load(seq)
        .floor()
        .to_usize()
        .expect("load of a sequence is non-negative and bounded by its length")
}

/// Checks index bounds, disjointness and coverage; returns the number of bins.
pub fn verify_certificate(seq: &Sequence, cert: &Certificate) -> Result<usize> {
    let mut owner: Vec<Option<usize>> = vec![None; seq.n()];
    for (b, bin) in cert.bins.iter().enumerate() {
        let reject = |reason: String| Error::Certificate { bin: b, reason };
        let mut load = Rational::zero();
        for &i in bin {
            let slot = owner
                .get_mut(i)
                .ok_or_else(|| reject(format!("item index {i} out of range (n = {})", seq.n())))?;
            if let Some(other) = slot {
                return Err(reject(format!("item {i} already used by bin {other}")));
            }
            *slot = Some(b);
            load += &seq.items[i].value;
        }
        if load < Rational::one() {
            return Err(reject(format!("load {load} is below 1")));
        }
    }
    Ok(cert.len())
}

/// Item values scaled to integers over their common denominator.
fn scaled(seq: &Sequence) -> (Vec<BigInt>, BigInt) {
    let d = seq
        .values()
        .fold(BigInt::from(1), |acc, v| acc.lcm(v.denom()));
    let values = seq.values().map(|v| v.numer() * (&d / v.denom())).collect();
    (values, d)
}

/// Maximum number of disjoint covering subsets, by dynamic programming over item subsets.
///
/// Candidate bins are restricted to minimal covering subsets: removing any item uncovers them.
fn max_cover<T>(values: &[T], capacity: &T) -> (usize, Vec<u32>)
where
    T: Clone + Ord + Zero,
    for<'a> &'a T: Add<&'a T, Output = T>,
{
    let n = values.len();
    let full = (1u32 << n) - 1;
    let size = 1usize << n;
    let mut sums: Vec<T> = Vec::with_capacity(size);
    // index of the smallest value in the mask
    let mut min_idx: Vec<u8> = Vec::with_capacity(size);
    sums.push(T::zero());
    min_idx.push(0);
    let mut by_low: Vec<Vec<u32>> = vec![Vec::new(); n];
    for mask in 1..size {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        sums.push(&sums[rest] + &values[low]);
        let m = if rest == 0 || values[low] <= values[min_idx[rest] as usize] {
            low as u8
        } else {
            min_idx[rest]
        };
        min_idx.push(m);
        let covering = sums[mask] >= *capacity;
        if covering {
            let without_min = mask ^ (1 << m);
            if sums[without_min] < *capacity {
                by_low[low].push(mask as u32);
            }
        }
    }
    drop(sums);
    let mut best = vec![0u8; size];
    let mut choice = vec![0u32; size];
    for mask in 1..size {
        let low = mask.trailing_zeros() as usize;
        let m = mask as u32;
        let mut b = best[mask & (mask - 1)];
        let mut c = 0u32;
        for &cover in &by_low[low] {
            if cover & m == cover {
                let candidate = best[(m ^ cover) as usize] + 1;
                if candidate > b {
                    b = candidate;
                    c = cover;
                }
            }
        }
        best[mask] = b;
        choice[mask] = c;
    }
    let mut mask = full;
    let mut bins = Vec::new();
    while mask != 0 {
        let c = choice[mask as usize];
        if c == 0 {
            mask &= mask - 1;
        } else {
            bins.push(c);
            mask ^= c;
        }
    }
    (best[full as usize] as usize, bins)
}

/// Exact optimum for instances with at most `size_limit` items.
pub fn opt_exact(seq: &Sequence, size_limit: usize) -> Result<(usize, Certificate)> {
    if size_limit > MAX_SIZE_LIMIT {
        return Err(domain(format!(
            "size limit {size_limit} above the supported maximum {MAX_SIZE_LIMIT}"
        )));
    }
    if seq.n() > size_limit {
        return Err(Error::LimitExceeded {
            n: seq.n(),
            limit: size_limit,
        });
    }
    if seq.values().any(|v| v.is_negative()) {
        return Err(domain("negative item value"));
    }
    if seq.is_empty() {
        return Ok((0, Certificate::default()));
    }
    let (values, capacity) = scaled(seq);
    let (count, masks) = match (
        capacity.to_u64(),
        values
            .iter()
            .map(|v| v.to_u128())
            .collect::<Option<Vec<_>>>(),
    ) {
        // at most 24 values below 2^64 each, so every subset sum fits in u128
        (Some(cap), Some(small)) if small.iter().all(|&v| v <= u64::MAX as u128) => {
            max_cover(&small, &(cap as u128))
        }
        _ => max_cover(&values, &capacity),
    };
    let mut bins: Vec<Vec<usize>> = masks
        .into_iter()
        .map(|mask| (0..seq.n()).filter(|i| mask & (1 << i) != 0).collect())
        .collect();
    bins.sort();
    Ok((count, Certificate::new(bins)))
}

/// Sorted multiset of item types `t_1 <= ... <= t_j` found in a bin, small items excluded.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupKey(pub Vec<u32>);

impl GroupKey {
    pub fn new(mut types: Vec<u32>) -> Self {
        types.sort_unstable();
        GroupKey(types)
    }

    fn reciprocal_sum(types: &[u32], offset: i64) -> Rational {
        types
            .iter()
            .map(|&t| Rational::frac(1, t as i64 - offset))
            .sum()
    }

    /// The t-items alone are guaranteed to cover the bin.
    pub fn is_easy(&self) -> bool {
        Self::reciprocal_sum(&self.0, 0) >= Rational::one()
    }

    /// The bin cannot be covered without small items.
    pub fn is_gap(&self) -> bool {
        !self.0.is_empty() && Self::reciprocal_sum(&self.0, 1) < Rational::one()
    }

    /// Small-item mass every bin of a gap group needs: `1 - sum 1/(t_i - 1)`, else zero.
    pub fn gap_deficit(&self) -> Rational {
        if self.is_gap() {
            Rational::one() - Self::reciprocal_sum(&self.0, 1)
        } else {
            Rational::zero()
        }
    }

    /// No proper sub-multiset is easy. It suffices to drop the largest type, the item with the
    /// smallest guaranteed size.
    pub fn is_canonical(&self) -> bool {
        match self.0.split_last() {
            None => true,
            Some((_, rest)) => !GroupKey(rest.to_vec()).is_easy(),
        }
    }

    pub fn multiplicity(&self, t: u32) -> usize {
        self.0.iter().filter(|&&x| x == t).count()
    }
}

impl fmt::Display for GroupKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("G")?;
        if self.0.is_empty() {
            return f.write_str("S");
        }
        let sep = if self.0.iter().any(|&t| t >= 10) {
            ","
        } else {
            ""
        };
        let parts: Vec<String> = self.0.iter().map(|t| t.to_string()).collect();
        f.write_str(&parts.join(sep))
    }
}

/// An optimal covering partitioned by the item types each bin contains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupDecomposition {
    pub k: u32,
    /// Bin count per key with at least one t-item.
    pub groups: BTreeMap<GroupKey, usize>,
    /// Bins covered by small items alone.
    pub small_only_count: usize,
    /// Load of the bins covered by small items alone.
    pub small_only_mass: Rational,
    /// Number of `t`-items in the sequence, `t = 2..=k`.
    pub t_totals: BTreeMap<u32, usize>,
    /// Small-item load per key.
    pub small_mass: BTreeMap<GroupKey, Rational>,
}

impl GroupDecomposition {
    pub fn total_bins(&self) -> usize {
        self.groups.values().sum::<usize>() + self.small_only_count
    }

    pub fn count(&self, key: &[u32]) -> usize {
        self.groups
            .get(&GroupKey::new(key.to_vec()))
            .copied()
            .unwrap_or(0)
    }
}

fn classes(seq: &Sequence, k: u32) -> Result<Vec<ItemClass>> {
    seq.values().map(|v| classify(v, k)).collect()
}

fn key_of(bin: &[usize], classes: &[ItemClass]) -> GroupKey {
    GroupKey::new(
        bin.iter()
            .filter_map(|&i| match classes[i] {
                ItemClass::TItem(t) => Some(t),
                ItemClass::Small => None,
            })
            .collect(),
    )
}

pub fn decompose(seq: &Sequence, cert: &Certificate, k: u32) -> Result<GroupDecomposition> {
    verify_certificate(seq, cert)?;
    let classes = classes(seq, k)?;
    let mut d = GroupDecomposition {
        k,
        groups: BTreeMap::new(),
        small_only_count: 0,
        small_only_mass: Rational::zero(),
        t_totals: (2..=k).map(|t| (t, 0)).collect(),
        small_mass: BTreeMap::new(),
    };
    for class in &classes {
        if let ItemClass::TItem(t) = class {
            *d.t_totals.get_mut(t).expect("t in 2..=k") += 1;
        }
    }
    for bin in &cert.bins {
        let key = key_of(bin, &classes);
        let smalls: Rational = bin
            .iter()
            .filter(|&&i| classes[i] == ItemClass::Small)
            .map(|&i| &seq.items[i].value)
            .sum();
        if key.0.is_empty() {
            d.small_only_count += 1;
            d.small_only_mass += smalls;
        } else {
            *d.groups.entry(key.clone()).or_insert(0) += 1;
            *d.small_mass.entry(key).or_insert_with(Rational::zero) += smalls;
        }
    }
    Ok(d)
}

/// What the normalization pass changed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NormalizationReport {
    /// Items taken out of easy bins.
    pub moved_out: usize,
    /// Unused or moved t-items that found a bin.
    pub absorbed: usize,
    /// t-items left outside every bin.
    pub unplaced_t_items: usize,
}

/// Rewrites a covering into the canonical form the count identities assume, without losing a
/// bin: easy bins keep only a smallest easy set of t-items and no small items, and every t-item
/// outside the covering (unused or moved) is put into a bin whose key stays canonical.
pub fn normalize_certificate(
    seq: &Sequence,
    cert: &Certificate,
    k: u32,
) -> Result<(Certificate, NormalizationReport)> {
    verify_certificate(seq, cert)?;
    let classes = classes(seq, k)?;
    let type_of = |i: usize| match classes[i] {
        ItemClass::TItem(t) => Some(t),
        ItemClass::Small => None,
    };
    let mut report = NormalizationReport::default();
    let mut used = vec![false; seq.n()];
    let mut bins: Vec<Vec<usize>> = Vec::with_capacity(cert.len());
    let mut pool: Vec<usize> = Vec::new();

    for bin in &cert.bins {
        for &i in bin {
            used[i] = true;
        }
        if !key_of(bin, &classes).is_easy() {
            bins.push(bin.clone());
            continue;
        }
        // largest guaranteed sizes first; ties by larger actual value
        let mut titems: Vec<usize> = bin
            .iter()
            .copied()
            .filter(|&i| type_of(i).is_some())
            .collect();
        titems.sort_by(|&a, &b| {
            type_of(a)
                .cmp(&type_of(b))
                .then_with(|| seq.items[b].value.cmp(&seq.items[a].value))
        });
        let mut kept = Vec::new();
        let mut guaranteed = Rational::zero();
        for i in titems {
            if guaranteed >= Rational::one() {
                pool.push(i);
            } else {
                guaranteed += Rational::frac(1, type_of(i).expect("t-item") as i64);
                kept.push(i);
            }
        }
        report.moved_out += bin.len() - kept.len();
        bins.push(kept);
    }
    pool.extend((0..seq.n()).filter(|&i| !used[i] && type_of(i).is_some()));
    pool.sort_by(|&a, &b| type_of(a).cmp(&type_of(b)).then(a.cmp(&b)));

    for i in pool {
        let t = type_of(i).expect("pool holds t-items");
        let target = bins.iter().position(|bin| {
            let key = key_of(bin, &classes);
            if key.is_easy() {
                return false;
            }
            let mut grown = key.0.clone();
            grown.push(t);
            GroupKey::new(grown).is_canonical()
        });
        match target {
            Some(b) => {
                bins[b].push(i);
                report.absorbed += 1;
                if key_of(&bins[b], &classes).is_easy() {
                    let before = bins[b].len();
                    bins[b].retain(|&j| classes[j] != ItemClass::Small);
                    report.moved_out += before - bins[b].len();
                }
            }
            None => report.unplaced_t_items += 1,
        }
    }
    for bin in &mut bins {
        bin.sort_unstable();
    }
    let normalized = Certificate::new(bins);
    debug_assert_eq!(verify_certificate(seq, &normalized).ok(), Some(cert.len()));
    Ok((normalized, report))
}

/// Exhaustive counterpart of [`normalize_certificate`]: among all optimal coverings whose bins
/// are canonical (covered, canonical key, no small items in easy bins), finds one that leaves
/// the fewest t-items outside the bins. Returns the covering and that number.
///
/// Minimal covering bins are always canonical, so the search reaches the optimum.
pub fn canonical_optimum(
    seq: &Sequence,
    k: u32,
    size_limit: usize,
) -> Result<(Certificate, usize)> {
    if size_limit > MAX_SIZE_LIMIT {
        return Err(domain(format!(
            "size limit {size_limit} above the supported maximum {MAX_SIZE_LIMIT}"
        )));
    }
    if seq.n() > size_limit {
        return Err(Error::LimitExceeded {
            n: seq.n(),
            limit: size_limit,
        });
    }
    let classes = classes(seq, k)?;
    let n = seq.n();
    let size = 1usize << n;
    let t_mask: usize = (0..n)
        .filter(|&i| classes[i] != ItemClass::Small)
        .fold(0, |acc, i| acc | (1 << i));

    let mut loads = vec![Rational::zero(); size];
    let mut canonical = vec![false; size];
    for mask in 1..size {
        let low = mask.trailing_zeros() as usize;
        loads[mask] = &loads[mask & (mask - 1)] + &seq.items[low].value;
        if loads[mask] < Rational::one() {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let key = key_of(&members, &classes);
        let has_small = mask & !t_mask != 0;
        canonical[mask] = key.is_canonical() && !(key.is_easy() && has_small);
    }
    drop(loads);

    // (bins, placed t-items), maximized lexicographically
    let mut best = vec![(0u8, 0u8); size];
    let mut choice = vec![0usize; size];
    for mask in 1..size {
        let low = mask & mask.wrapping_neg();
        let mut b = best[mask ^ low];
        let mut c = 0;
        let rest = mask ^ low;
        let mut sub = rest;
        loop {
            let bin = sub | low;
            if canonical[bin] {
                let prev = best[mask ^ bin];
                let candidate = (prev.0 + 1, prev.1 + (bin & t_mask).count_ones() as u8);
                if candidate > b {
                    b = candidate;
                    c = bin;
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        best[mask] = b;
        choice[mask] = c;
    }
    let mut mask = size - 1;
    let mut bins = Vec::new();
    while mask != 0 {
        let c = choice[mask];
        if c == 0 {
            mask &= mask - 1;
        } else {
            bins.push((0..n).filter(|i| c & (1 << i) != 0).collect::<Vec<_>>());
            mask ^= c;
        }
    }
    bins.sort();
    let (_, placed) = best[size - 1];
    let unplaced = t_mask.count_ones() as usize - placed as usize;
    Ok((Certificate::new(bins), unplaced))
}

/// Canonical keys for `k` classes: a non-easy multiset extended by one type at least as large
/// as its largest. These are the only groups a normalized optimum can contain.
pub fn canonical_keys(k: u32) -> Vec<GroupKey> {
    fn grow(prefix: &mut Vec<u32>, k: u32, out: &mut Vec<GroupKey>) {
        let start = prefix.last().copied().unwrap_or(2);
        for t in start..=k {
            prefix.push(t);
            let key = GroupKey(prefix.clone());
            let easy = key.is_easy();
            out.push(key);
            if !easy {
                grow(prefix, k, out);
            }
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::new(), k, &mut out);
    out.sort();
    out
}

/// Where an identity's coefficients come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdentitySource {
    /// Transcribed group lists for `k = 2` and `k = 4`.
    Tabulated,
    /// Obtained by counting over [`canonical_keys`].
    Derived,
}

/// `T_t = sum coefficient * |G_key|` for one `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountIdentity {
    pub t: u32,
    pub terms: Vec<(GroupKey, usize)>,
    pub source: IdentitySource,
}

fn key(types: &[u32]) -> GroupKey {
    GroupKey(types.to_vec())
}

fn tabulated_identities(k: u32) -> Option<Vec<CountIdentity>> {
    let identity = |t: u32, terms: &[(&[u32], usize)]| CountIdentity {
        t,
        terms: terms.iter().map(|(k, c)| (key(k), *c)).collect(),
        source: IdentitySource::Tabulated,
    };
    match k {
        2 => Some(vec![identity(2, &[(&[2, 2], 2), (&[2], 1)])]),
        4 => Some(vec![
            identity(
                2,
                &[
                    (&[2], 1),
                    (&[2, 2], 2),
                    (&[2, 3], 1),
                    (&[2, 4], 1),
                    (&[2, 3, 3], 1),
                    (&[2, 3, 4], 1),
                    (&[2, 4, 4], 1),
                ],
            ),
            identity(
                3,
                &[
                    (&[3], 1),
                    (&[2, 3], 1),
                    (&[3, 3], 2),
                    (&[3, 4], 1),
                    (&[2, 3, 3], 2),
                    (&[2, 3, 4], 1),
                    (&[3, 3, 3], 3),
                    (&[3, 3, 4], 2),
                    (&[3, 4, 4], 1),
                    (&[3, 3, 4, 4], 2),
                    (&[3, 4, 4, 4], 1),
                ],
            ),
            identity(
                4,
                &[
                    (&[4], 1),
                    (&[2, 4], 1),
                    (&[3, 4], 1),
                    (&[4, 4], 2),
                    (&[2, 3, 4], 1),
                    (&[2, 4, 4], 2),
                    (&[3, 3, 4], 1),
                    (&[3, 4, 4], 2),
                    (&[4, 4, 4], 3),
                    (&[3, 3, 4, 4], 2),
                    (&[3, 4, 4, 4], 3),
                    (&[4, 4, 4, 4], 4),
                ],
            ),
        ]),
        _ => None,
    }
}

pub fn derived_identities(k: u32) -> Vec<CountIdentity> {
    let keys = canonical_keys(k);
    (2..=k)
        .map(|t| CountIdentity {
            t,
            terms: keys
                .iter()
                .filter(|key| key.multiplicity(t) > 0)
                .map(|key| (key.clone(), key.multiplicity(t)))
                .collect(),
            source: IdentitySource::Derived,
        })
        .collect()
}

/// The tabulated closed forms where they exist, the derived ones otherwise.
pub fn count_identities(k: u32) -> Vec<CountIdentity> {
    tabulated_identities(k).unwrap_or_else(|| derived_identities(k))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityRow {
    pub t: u32,
    pub source: IdentitySource,
    /// `T_t` counted in the sequence.
    pub items: usize,
    /// Weighted group sum.
    pub groups: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub rows: Vec<IdentityRow>,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.items == r.groups)
    }
}

impl fmt::Display for IdentityCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            let mark = if r.items == r.groups { "==" } else { "!=" };
            writeln!(
                f,
                "T_{} = {} {mark} {} ({:?})",
                r.t, r.items, r.groups, r.source
            )?;
        }
        Ok(())
    }
}

/// Compares each `T_t` counted in `seq` with the weighted group sum of its identity.
pub fn verify_count_identities(
    decomp: &GroupDecomposition,
    seq: &Sequence,
) -> Result<IdentityCheck> {
    let classes = classes(seq, decomp.k)?;
    let rows = count_identities(decomp.k)
        .into_iter()
        .map(|identity| IdentityRow {
            t: identity.t,
            source: identity.source,
            items: classes
                .iter()
                .filter(|&&c| c == ItemClass::TItem(identity.t))
                .count(),
            groups: identity
                .terms
                .iter()
                .map(|(key, coeff)| coeff * decomp.groups.get(key).copied().unwrap_or(0))
                .sum(),
        })
        .collect();
    Ok(IdentityCheck { rows })
}

/// `covered >= ratio * opt - additive`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundSpec {
    pub k: u32,
    pub ratio: Rational,
    pub additive: Rational,
}

impl BoundSpec {
    pub fn for_k(k: u32) -> Option<BoundSpec> {
        let (ratio, additive) = match k {
            2 => (Rational::frac(3, 5), Rational::frac(19, 15)),
            3 => (Rational::frac(9, 14), Rational::frac(97, 42)),
            4 => (Rational::frac(2, 3), Rational::frac(173, 60)),
            _ => return None,
        };
        Some(BoundSpec { k, ratio, additive })
    }

    pub fn all() -> Vec<BoundSpec> {
        (2..=4).filter_map(BoundSpec::for_k).collect()
    }

    /// Right-hand side `ratio * opt - additive`.
    pub fn guarantee(&self, opt: usize) -> Rational {
        self.ratio.clone() * Rational::integer(opt) - self.additive.clone()
    }
}

impl fmt::Display for BoundSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*OPT - {}", self.ratio, self.additive)
    }
}

pub fn check_bound(strategy_covered: usize, opt: usize, spec: &BoundSpec) -> bool {
    Rational::integer(strategy_covered) >= spec.guarantee(opt)
}
