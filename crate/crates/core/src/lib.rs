//! Online bin covering with exact parameter advice.
//!
//! The crate provides Dual Next Fit, Dual Harmonic and the critical-bin advice strategy as
//! online state machines ([`strategies`]), the oracle that computes the advice ([`oracle`]),
//! the self-delimiting advice tape ([`codec`]), an exact optimum solver with certificate and
//! group-decomposition tooling ([`opt`]), instance generators ([`generators`]) and the
//! experiment harness behind the `bincover` binary ([`harness`]).
//!
//! All arithmetic on item sizes is exact, see [`Rational`].

pub mod codec;
pub mod error;
pub mod generators;
pub mod harness;
pub mod model;
pub mod opt;
pub mod oracle;
pub mod rational;
pub mod strategies;

pub use codec::{AdvicePayload, BitString};
pub use error::{Error, Result};
pub use model::{classify, Bin, BinKind, Covering, Item, ItemClass, Sequence};
pub use opt::{BoundSpec, Certificate, GroupDecomposition};
pub use oracle::{compute_advice, OracleResult};
pub use rational::Rational;
pub use strategies::{advice_dh_run, dh_run, dnf_run, StrategyConfig};
