//! Online covering strategies: Dual Next Fit, Dual Harmonic and the critical-bin advice
//! strategy built on top of Dual Harmonic.
//!
//! Each strategy is a state machine fed one item at a time through [`OnlineStrategy::step`].
//! Bin ids are handed out in the order bins are opened, so a run is fully determined by the
//! configuration and the sequence.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{domain, Result};
use crate::model::{classify, Bin, BinKind, Covering, Item, ItemClass, Sequence};
use crate::rational::Rational;

/// Where a strategy put an item.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Placement {
    /// The single active bin of Dual Next Fit.
    Dnf,
    /// The active bin of the item's class.
    ClassBin(ItemClass),
    /// Critical bin with the given 0-based index.
    Critical(usize),
    /// An item at least `x_m` that found every critical bin already holding a big item.
    Overflow,
}

impl fmt::Display for Placement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Placement::Dnf => f.write_str("dnf"),
            Placement::ClassBin(class) => write!(f, "{class} bin"),
            Placement::Critical(i) => write!(f, "critical #{i}"),
            Placement::Overflow => f.write_str("overflow to 2-bin"),
        }
    }
}

/// One row of a replay trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub item: Item,
    pub placement: Placement,
    pub bin_id: usize,
    /// Actual load of the receiving bin after the item.
    pub load: Rational,
    /// Virtual load after the item, for critical bins only.
    pub virtual_load: Option<Rational>,
    /// The receiving bin reached load 1 with this item and was closed.
    pub closed: bool,
}

pub trait OnlineStrategy {
    /// Packs the next item. No lookahead is available.
    fn step(&mut self, item: &Item) -> Result<TraceStep>;

    /// The covering for the items seen so far.
    fn finish(&self) -> Covering;
}

/// Dual Next Fit over a single stream: fill the active bin until its load reaches 1.
#[derive(Clone, Debug)]
struct NextFitLane {
    kind: BinKind,
    active: Option<Bin>,
    closed: Vec<Bin>,
}

impl NextFitLane {
    fn new(kind: BinKind) -> Self {
        NextFitLane {
            kind,
            active: None,
            closed: Vec::new(),
        }
    }

    fn push(&mut self, item: &Item, next_id: &mut usize) -> (usize, Rational, bool) {
        let kind = self.kind;
        let bin = self.active.get_or_insert_with(|| {
            let bin = Bin::new(*next_id, kind);
            *next_id += 1;
            bin
        });
        bin.items.push(item.clone());
        let id = bin.id;
        let load = bin.load();
        let closed = load >= Rational::one();
        if closed {
            self.closed.push(self.active.take().expect("active bin"));
        }
        (id, load, closed)
    }

    fn bins(&self) -> impl Iterator<Item = &Bin> + '_ {
        self.closed.iter().chain(self.active.iter())
    }
}

fn collect(bins: Vec<&Bin>) -> Covering {
    let mut bins: Vec<Bin> = bins.into_iter().cloned().collect();
    bins.sort_by_key(|bin| bin.id);
    Covering::from_bins(bins)
}

#[derive(Clone, Debug)]
pub struct DualNextFit {
    lane: NextFitLane,
    next_id: usize,
}

impl DualNextFit {
    pub fn new() -> Self {
        DualNextFit {
            lane: NextFitLane::new(BinKind::Dnf),
            next_id: 0,
        }
    }
}

impl Default for DualNextFit {
    fn default() -> Self {
        Self::new()
    }
}

impl OnlineStrategy for DualNextFit {
    fn step(&mut self, item: &Item) -> Result<TraceStep> {
        let (bin_id, load, closed) = self.lane.push(item, &mut self.next_id);
        Ok(TraceStep {
            item: item.clone(),
            placement: Placement::Dnf,
            bin_id,
            load,
            virtual_load: None,
            closed,
        })
    }

    fn finish(&self) -> Covering {
        collect(self.lane.bins().collect())
    }
}

/// Dual Harmonic: one independent Dual Next Fit lane per size class.
#[derive(Clone, Debug)]
pub struct DualHarmonic {
    k: u32,
    lanes: BTreeMap<ItemClass, NextFitLane>,
    next_id: usize,
}

impl DualHarmonic {
    pub fn new(k: u32) -> Result<Self> {
        Self::with_first_id(k, 0)
    }

    fn with_first_id(k: u32, next_id: usize) -> Result<Self> {
        if k < 2 {
            return Err(domain(format!("k must be at least 2, got {k}")));
        }
        Ok(DualHarmonic {
            k,
            lanes: BTreeMap::new(),
            next_id,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    fn place(&mut self, item: &Item, class: ItemClass) -> (usize, Rational, bool) {
        let kind = match class {
            ItemClass::TItem(t) => BinKind::TBin(t),
            ItemClass::Small => BinKind::SmallBin,
        };
        self.lanes
            .entry(class)
            .or_insert_with(|| NextFitLane::new(kind))
            .push(item, &mut self.next_id)
    }

    fn bins(&self) -> impl Iterator<Item = &Bin> + '_ {
        self.lanes.values().flat_map(|lane| lane.bins())
    }
}

impl OnlineStrategy for DualHarmonic {
    fn step(&mut self, item: &Item) -> Result<TraceStep> {
        let class = classify(&item.value, self.k)?;
        let (bin_id, load, closed) = self.place(item, class);
        Ok(TraceStep {
            item: item.clone(),
            placement: Placement::ClassBin(class),
            bin_id,
            load,
            virtual_load: None,
            closed,
        })
    }

    fn finish(&self) -> Covering {
        collect(self.bins().collect())
    }
}

/// A bin reserved for one large 2-item plus small items.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalBin {
    pub bin: Bin,
    /// `x_m` (or the big item once placed) plus the small items in the bin.
    pub virtual_load: Rational,
    pub has_big_item: bool,
    /// Set once the virtual load reaches 1; no further small items are accepted.
    pub small_saturated: bool,
}

impl CriticalBin {
    fn new(id: usize, threshold: &Rational) -> Self {
        CriticalBin {
            bin: Bin::new(id, BinKind::Critical),
            virtual_load: threshold.clone(),
            has_big_item: false,
            small_saturated: *threshold >= Rational::one(),
        }
    }

    fn add(&mut self, item: &Item, threshold: &Rational, big: bool) {
        self.bin.items.push(item.clone());
        if big {
            // the placeholder x_m is replaced by the actual value
            self.virtual_load = &self.virtual_load - threshold + &item.value;
            self.has_big_item = true;
        } else {
            self.virtual_load += &item.value;
        }
        self.small_saturated = self.virtual_load >= Rational::one();
    }
}

/// Dual Harmonic with `m` critical bins, steered by the advice pair `(m, x_m)`.
///
/// 1. A 2-item `v >= x_m` goes to the lowest-index critical bin that holds no big item yet. If
///    there is none it is packed as an ordinary 2-item.
/// 2. Any other `t`-item goes to its class bin by Dual Next Fit.
/// 3. A small item goes to the lowest-index critical bin whose virtual load is below 1, else to
///    the small bin by Dual Next Fit.
///
/// Critical bins count only when their actual load reaches 1.
#[derive(Clone, Debug)]
pub struct AdviceDualHarmonic {
    threshold: Rational,
    criticals: Vec<CriticalBin>,
    harmonic: DualHarmonic,
}

impl AdviceDualHarmonic {
    pub fn new(k: u32, m: usize, x_m: Rational) -> Result<Self> {
        if x_m.is_negative() || x_m > Rational::one() {
            return Err(domain(format!("x_m = {x_m} outside [0,1]")));
        }
        let criticals = (0..m).map(|id| CriticalBin::new(id, &x_m)).collect();
        Ok(AdviceDualHarmonic {
            threshold: x_m,
            criticals,
            harmonic: DualHarmonic::with_first_id(k, m)?,
        })
    }

    pub fn criticals(&self) -> &[CriticalBin] {
        &self.criticals
    }

    fn critical_step(&mut self, idx: usize, item: &Item, big: bool) -> TraceStep {
        let critical = &mut self.criticals[idx];
        critical.add(item, &self.threshold, big);
        TraceStep {
            item: item.clone(),
            placement: Placement::Critical(idx),
            bin_id: critical.bin.id,
            load: critical.bin.load(),
            virtual_load: Some(critical.virtual_load.clone()),
            closed: false,
        }
    }

    fn class_step(&mut self, item: &Item, class: ItemClass, placement: Placement) -> TraceStep {
        let (bin_id, load, closed) = self.harmonic.place(item, class);
        TraceStep {
            item: item.clone(),
            placement,
            bin_id,
            load,
            virtual_load: None,
            closed,
        }
    }
}

impl OnlineStrategy for AdviceDualHarmonic {
    fn step(&mut self, item: &Item) -> Result<TraceStep> {
        let class = classify(&item.value, self.harmonic.k)?;
        let step = match class {
            ItemClass::TItem(2) if item.value >= self.threshold => {
                match self.criticals.iter().position(|c| !c.has_big_item) {
                    Some(idx) => self.critical_step(idx, item, true),
                    None => self.class_step(item, class, Placement::Overflow),
                }
            }
            ItemClass::Small => match self.criticals.iter().position(|c| !c.small_saturated) {
                Some(idx) => self.critical_step(idx, item, false),
                None => self.class_step(item, class, Placement::ClassBin(class)),
            },
            _ => self.class_step(item, class, Placement::ClassBin(class)),
        };
        Ok(step)
    }

    fn finish(&self) -> Covering {
        collect(
            self.criticals
                .iter()
                .map(|c| &c.bin)
                .chain(self.harmonic.bins())
                .collect(),
        )
    }
}

/// Serializable choice of strategy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrategyConfig {
    Dnf,
    Dh { k: u32 },
    AdviceDh { k: u32, m: usize, x_m: Rational },
}

impl StrategyConfig {
    pub fn name(&self) -> &'static str {
        match self {
            StrategyConfig::Dnf => "dnf",
            StrategyConfig::Dh { .. } => "dh",
            StrategyConfig::AdviceDh { .. } => "adh",
        }
    }

    pub fn k(&self) -> Option<u32> {
        match self {
            StrategyConfig::Dnf => None,
            StrategyConfig::Dh { k } | StrategyConfig::AdviceDh { k, .. } => Some(*k),
        }
    }

    pub fn build(&self) -> Result<Box<dyn OnlineStrategy>> {
        Ok(match self {
            StrategyConfig::Dnf => Box::new(DualNextFit::new()),
            StrategyConfig::Dh { k } => Box::new(DualHarmonic::new(*k)?),
            StrategyConfig::AdviceDh { k, m, x_m } => {
                Box::new(AdviceDualHarmonic::new(*k, *m, x_m.clone())?)
            }
        })
    }

    pub fn run(&self, seq: &Sequence) -> Result<Covering> {
        let mut strategy = self.build()?;
        for item in &seq.items {
            strategy.step(item)?;
        }
        Ok(strategy.finish())
    }
}

pub fn dnf_run(seq: &Sequence) -> Covering {
    StrategyConfig::Dnf
        .run(seq)
        .expect("dual next fit accepts any item")
}

pub fn dh_run(seq: &Sequence, k: u32) -> Result<Covering> {
    StrategyConfig::Dh { k }.run(seq)
}

pub fn advice_dh_run(seq: &Sequence, k: u32, m: usize, x_m: &Rational) -> Result<Covering> {
    StrategyConfig::AdviceDh {
        k,
        m,
        x_m: x_m.clone(),
    }
    .run(seq)
}

/// Per-item trace of a run, for debugging and documentation.
pub fn replay(seq: &Sequence, config: &StrategyConfig) -> Result<Vec<TraceStep>> {
    let mut strategy = config.build()?;
    seq.items.iter().map(|item| strategy.step(item)).collect()
}
