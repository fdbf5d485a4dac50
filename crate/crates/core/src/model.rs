//! Items, size classes, sequences, bins and coverings.

use std::fmt;
use std::path::Path;

use num_bigint::BigInt;

use crate::error::{domain, Error, Result};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Item {
    pub value: Rational,
    /// 0-based position in the raw input.
    pub source_index: usize,
}

impl Item {
    pub fn new(value: Rational, source_index: usize) -> Self {
        Item {
            value,
            source_index,
        }
    }
}

/// Size class of an item for a fixed number of classes `k`.
///
/// `TItem(t)` holds items with `1/t <= v < 1/(t-1)`, `Small` those with `v < 1/k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ItemClass {
    TItem(u32),
    Small,
}

impl fmt::Display for ItemClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ItemClass::TItem(t) => write!(f, "{t}-item"),
            ItemClass::Small => f.write_str("small"),
        }
    }
}

/// Classifies `v` in `]0,1[` for `k >= 2` classes. Interval boundaries are left-closed, so
/// `1/t` itself is a `t`-item.
pub fn classify(v: &Rational, k: u32) -> Result<ItemClass> {
    if k < 2 {
        return Err(domain(format!("k must be at least 2, got {k}")));
    }
    if v.is_negative() || v.is_zero() || *v >= Rational::one() {
        return Err(domain(format!("item {v} outside ]0,1[")));
    }
    // t = ceil(1/v) is the unique t with t-1 < 1/v <= t.
    let t = v.recip().expect("nonzero").ceil();
    if t > BigInt::from(k) {
        Ok(ItemClass::Small)
    } else {
        let t: u32 = t.try_into().expect("t <= k fits in u32");
        Ok(ItemClass::TItem(t))
    }
}

/// The online input, in release order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Sequence {
    pub items: Vec<Item>,
}

impl Sequence {
    /// Builds a sequence with `source_index` equal to the position.
    pub fn from_values(values: impl IntoIterator<Item = Rational>) -> Self {
        Sequence {
            items: values
                .into_iter()
                .enumerate()
                .map(|(i, value)| Item::new(value, i))
                .collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = &Rational> + '_ {
        self.items.iter().map(|item| &item.value)
    }

    /// Prefix of the first `len` items.
    pub fn prefix(&self, len: usize) -> Sequence {
        Sequence {
            items: self.items[..len.min(self.n())].to_vec(),
        }
    }
}

/// Exact sum of all item values; zero for the empty sequence.
pub fn total_load(seq: &Sequence) -> Rational {
    seq.values().sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinKind {
    Critical,
    TBin(u32),
    SmallBin,
    OptBin,
    /// Single-class bin of plain Dual Next Fit.
    Dnf,
    /// Holds one item of value at least 1, split off during normalization.
    Prepacked,
}

impl fmt::Display for BinKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BinKind::Critical => f.write_str("critical"),
            BinKind::TBin(t) => write!(f, "{t}-bin"),
            BinKind::SmallBin => f.write_str("small-bin"),
            BinKind::OptBin => f.write_str("opt-bin"),
            BinKind::Dnf => f.write_str("dnf-bin"),
            BinKind::Prepacked => f.write_str("prepacked"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bin {
    pub id: usize,
    pub items: Vec<Item>,
    pub kind: BinKind,
}

impl Bin {
    pub fn new(id: usize, kind: BinKind) -> Self {
        Bin {
            id,
            items: Vec::new(),
            kind,
        }
    }

    pub fn load(&self) -> Rational {
        self.items.iter().map(|item| &item.value).sum()
    }

    pub fn is_covered(&self) -> bool {
        self.load() >= Rational::one()
    }
}

/// Output of a strategy or solver. `bins` holds the covered bins only; every item of an
/// uncovered bin is listed in `leftover`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Covering {
    pub bins: Vec<Bin>,
    pub covered_count: usize,
    pub leftover: Vec<Item>,
    /// How many of the covered bins came from normalization rather than the strategy.
    pub prepacked_count: usize,
}

impl Covering {
    /// Splits `bins` into covered bins and leftover items.
    pub fn from_bins(bins: impl IntoIterator<Item = Bin>) -> Self {
        let mut covering = Covering::default();
        for bin in bins {
            if bin.is_covered() {
                covering.bins.push(bin);
            } else {
                covering.leftover.extend(bin.items);
            }
        }
        covering.covered_count = covering.bins.len();
        covering
    }

    /// Adds the bins split off by [`normalize_sequence`]; they count toward `covered_count`.
    pub fn absorb(&mut self, normalized: &Normalized) {
        let mut bins = normalized.prepacked.clone();
        self.prepacked_count += bins.len();
        self.covered_count += bins.len();
        bins.append(&mut self.bins);
        self.bins = bins;
        self.leftover
            .extend(normalized.discarded_zeros.iter().cloned());
    }

    /// Every item in the covering, covered bins first.
    pub fn all_items(&self) -> impl Iterator<Item = &Item> + '_ {
        self.bins
            .iter()
            .flat_map(|bin| bin.items.iter())
            .chain(self.leftover.iter())
    }
}

/// A raw input split into the online part and the bins that need no strategy.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Normalized {
    /// Items strictly inside `]0,1[`, in input order.
    pub sequence: Sequence,
    /// One covered bin per value `>= 1`. Zero values ride in the first one.
    pub prepacked: Vec<Bin>,
    /// Zero values when there is no prepacked bin to hold them.
    pub discarded_zeros: Vec<Item>,
}

/// Removes values `>= 1` (each covers a bin alone) and zeros from the raw input.
pub fn normalize_sequence(raw: &[Rational]) -> Result<Normalized> {
    let mut out = Normalized::default();
    let mut zeros = Vec::new();
    for (i, v) in raw.iter().enumerate() {
        if v.is_negative() {
            return Err(domain(format!("negative item {v} at position {i}")));
        }
        let item = Item::new(v.clone(), i);
        if v.is_zero() {
            zeros.push(item);
        } else if *v >= Rational::one() {
            let mut bin = Bin::new(out.prepacked.len(), BinKind::Prepacked);
            bin.items.push(item);
            out.prepacked.push(bin);
        } else {
            out.sequence.items.push(item);
        }
    }
    match out.prepacked.first_mut() {
        Some(first) => first.items.extend(zeros),
        None => out.discarded_zeros = zeros,
    }
    Ok(out)
}

/// Reads the instance text format: one `p/q` or decimal per line, `#` comments and blank lines
/// ignored.
pub fn parse_instance(text: &str) -> Result<Vec<Rational>> {
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: Rational = line.parse().map_err(|e: Error| Error::Parse {
            line: lineno + 1,
            message: e.to_string(),
        })?;
        values.push(v);
    }
    Ok(values)
}

pub fn read_instance(path: &Path) -> Result<Vec<Rational>> {
    parse_instance(&std::fs::read_to_string(path)?)
}

/// Writes values one per line as reduced fractions (integers without a denominator).
pub fn format_instance<'a>(values: impl IntoIterator<Item = &'a Rational>) -> String {
    let mut out = String::new();
    for v in values {
        out.push_str(&v.to_string());
        out.push('\n');
    }
    out
}
