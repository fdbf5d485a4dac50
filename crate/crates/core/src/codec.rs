//! Self-delimiting advice tape encoding.
//!
//! A bit string `s` is written as `u(s) b(s) s`, where `b(s)` is the minimal binary form of
//! `|s|` and `u(s)` is `|b(s)|` ones followed by a zero. A reader therefore learns from the tape
//! itself how many bits belong to each field. Minimal binary has no leading zeros, and the
//! minimal binary form of zero is the empty string, so the empty string encodes as the single
//! bit `0`.
//!
//! The advice for the critical-bin strategy is three such fields in a row: `m`, then the
//! numerator and the denominator of `x_m`.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn append(&mut self, other: &BitString) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut out = self.clone();
        out.append(other);
        out
    }

    pub fn slice(&self, start: usize, end: usize) -> BitString {
        BitString {
            bits: self.bits[start..end].to_vec(),
        }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Minimal binary form of `n`; empty for zero.
    pub fn from_uint(n: &BigUint) -> BitString {
        let bits = (0..n.bits()).rev().map(|i| n.bit(i)).collect();
        BitString { bits }
    }

    pub fn from_usize(n: usize) -> BitString {
        Self::from_uint(&BigUint::from(n))
    }

    pub fn to_uint(&self) -> BigUint {
        self.bits
            .iter()
            .fold(BigUint::zero(), |acc, &b| (acc << 1u8) + u8::from(b))
    }

    /// Packs MSB-first behind an 8-byte big-endian bit count; the last byte is zero padded.
    pub fn to_packed(&self) -> Vec<u8> {
        let mut out = (self.len() as u64).to_be_bytes().to_vec();
        for chunk in self.bits.chunks(8) {
            let byte = chunk
                .iter()
                .enumerate()
                .fold(0u8, |acc, (i, &b)| acc | (u8::from(b) << (7 - i)));
            out.push(byte);
        }
        out
    }

    pub fn from_packed(bytes: &[u8]) -> Result<BitString> {
        let malformed = |msg: &str| Error::MalformedAdvice(format!("packed tape: {msg}"));
        let header: [u8; 8] = bytes
            .get(..8)
            .and_then(|h| h.try_into().ok())
            .ok_or_else(|| malformed("missing 8-byte header"))?;
        let len = u64::from_be_bytes(header) as usize;
        let body = &bytes[8..];
        if body.len() != len.div_ceil(8) {
            return Err(malformed("byte count does not match header"));
        }
        let bits = (0..len)
            .map(|i| body[i / 8] & (0x80 >> (i % 8)) != 0)
            .collect();
        Ok(BitString { bits })
    }
}

impl From<Vec<bool>> for BitString {
    fn from(bits: Vec<bool>) -> Self {
        BitString { bits }
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::MalformedAdvice(format!(
                    "unexpected character {other:?} on tape"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString::from)
    }
}

/// Number of bits in the minimal binary form of `n` (zero for zero).
pub fn bitlen(n: usize) -> usize {
    (usize::BITS - n.leading_zeros()) as usize
}

pub fn encode_self_delim(s: &BitString) -> BitString {
    let length = BitString::from_usize(s.len());
    let mut out = BitString::new();
    for _ in 0..length.len() {
        out.push(true);
    }
    out.push(false);
    out.append(&length);
    out.append(s);
    out
}

/// Read position on an advice tape.
#[derive(Clone, Debug)]
pub struct TapeCursor<'a> {
    tape: &'a BitString,
    position: usize,
}

impl<'a> TapeCursor<'a> {
    pub fn new(tape: &'a BitString) -> Self {
        TapeCursor { tape, position: 0 }
    }

    pub fn position(&self) -> usize {
        self.position
    }

    pub fn remaining(&self) -> usize {
        self.tape.len() - self.position
    }

    fn read_bit(&mut self, field: &'static str) -> Result<bool> {
        let bit = *self
            .tape
            .bits
            .get(self.position)
            .ok_or(Error::Truncated { field })?;
        self.position += 1;
        Ok(bit)
    }

    fn read_bits(&mut self, count: usize, field: &'static str) -> Result<BitString> {
        if self.remaining() < count {
            return Err(Error::Truncated { field });
        }
        let out = self.tape.slice(self.position, self.position + count);
        self.position += count;
        Ok(out)
    }
}

/// Reads one self-delimited field and advances the cursor past it.
pub fn decode_self_delim(cursor: &mut TapeCursor<'_>) -> Result<BitString> {
    let mut width = 0usize;
    while cursor.read_bit("length prefix")? {
        width += 1;
    }
    let length = cursor.read_bits(width, "length")?.to_uint();
    let length = length
        .to_usize()
        .filter(|&len| len <= cursor.remaining())
        .ok_or(Error::Truncated { field: "payload" })?;
    cursor.read_bits(length, "payload")
}

/// The oracle's advice: the number of critical bins and the `m`-th largest item value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdvicePayload {
    pub m: usize,
    pub x_m: Rational,
}

impl AdvicePayload {
    /// Validates `m = 0 => x_m = 1` and `m > 0 => 0 < x_m <= 1`.
    pub fn new(m: usize, x_m: Rational) -> Result<Self> {
        if m == 0 && x_m != Rational::one() {
            return Err(Error::MalformedAdvice(format!(
                "m = 0 requires the sentinel x_m = 1, got {x_m}"
            )));
        }
        if x_m.is_negative() || x_m.is_zero() || x_m > Rational::one() {
            return Err(Error::MalformedAdvice(format!("x_m = {x_m} outside ]0,1]")));
        }
        Ok(AdvicePayload { m, x_m })
    }

    /// No critical bins.
    pub fn none() -> Self {
        AdvicePayload {
            m: 0,
            x_m: Rational::one(),
        }
    }
}

fn nonnegative(n: &BigInt) -> BigUint {
    n.to_biguint().expect("payload values are non-negative")
}

pub fn encode_advice(p: &AdvicePayload) -> BitString {
    let mut out = encode_self_delim(&BitString::from_usize(p.m));
    out.append(&encode_self_delim(&BitString::from_uint(&nonnegative(
        p.x_m.numer(),
    ))));
    out.append(&encode_self_delim(&BitString::from_uint(&nonnegative(
        p.x_m.denom(),
    ))));
    out
}

pub fn decode_advice(cursor: &mut TapeCursor<'_>) -> Result<AdvicePayload> {
    let m = decode_self_delim(cursor)?
        .to_uint()
        .to_usize()
        .ok_or_else(|| Error::MalformedAdvice("m does not fit in a machine word".into()))?;
    let numer = decode_self_delim(cursor)?.to_uint();
    let denom = decode_self_delim(cursor)?.to_uint();
    if denom.is_zero() {
        return Err(Error::MalformedAdvice("zero denominator".into()));
    }
    let x_m = Rational::new(
        BigInt::from_biguint(Sign::Plus, numer),
        BigInt::from_biguint(Sign::Plus, denom),
    )?;
    AdvicePayload::new(m, x_m)
}

/// Writes the tape as ASCII `0`/`1`, or packed when the path ends in `.bin`.
pub fn write_tape(path: &Path, tape: &BitString) -> Result<()> {
    if is_packed(path) {
        std::fs::write(path, tape.to_packed())?;
    } else {
        std::fs::write(path, format!("{tape}\n"))?;
    }
    Ok(())
}

pub fn read_tape(path: &Path) -> Result<BitString> {
    if is_packed(path) {
        BitString::from_packed(&std::fs::read(path)?)
    } else {
        std::fs::read_to_string(path)?.parse()
    }
}

fn is_packed(path: &Path) -> bool {
    path.extension().is_some_and(|ext| ext == "bin")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn encode_examples() {
        assert_eq!(encode_self_delim(&bits("101")), bits("11011101"));
        assert_eq!(encode_self_delim(&bits("1")), bits("1011"));
        assert_eq!(encode_self_delim(&bits("")), bits("0"));
    }

    #[test]
    fn decode_examples() {
        let tape = bits("11011101");
        let mut cursor = TapeCursor::new(&tape);
        assert_eq!(decode_self_delim(&mut cursor).unwrap(), bits("101"));
        assert_eq!(cursor.position(), 8);

        let tape = bits("0");
        assert!(decode_self_delim(&mut TapeCursor::new(&tape))
            .unwrap()
            .is_empty());

        // a zero-valued length field is also read as the empty string
        let tape = bits("100");
        let mut cursor = TapeCursor::new(&tape);
        assert!(decode_self_delim(&mut cursor).unwrap().is_empty());
        assert_eq!(cursor.position(), 3);

        let tape = bits("11");
        assert_eq!(
            decode_self_delim(&mut TapeCursor::new(&tape)),
            Err(Error::Truncated {
                field: "length prefix"
            })
        );
        let tape = bits("1101110");
        assert_eq!(
            decode_self_delim(&mut TapeCursor::new(&tape)),
            Err(Error::Truncated { field: "payload" })
        );
    }

    #[test]
    fn minimal_binary() {
        assert_eq!(BitString::from_usize(2), bits("10"));
        assert_eq!(BitString::from_usize(0), bits(""));
        assert_eq!(bits("000101").to_uint(), BigUint::from(5u8));
        assert_eq!(bitlen(0), 0);
        assert_eq!(bitlen(1), 1);
        assert_eq!(bitlen(4), 3);
    }

    #[test]
    fn advice_example_values() {
        let p = AdvicePayload::new(2, Rational::frac(4, 5)).unwrap();
        let tape = encode_advice(&p);
        let expected = encode_self_delim(&bits("10"))
            .concat(&encode_self_delim(&bits("100")))
            .concat(&encode_self_delim(&bits("101")));
        assert_eq!(tape, expected);
        let mut cursor = TapeCursor::new(&tape);
        assert_eq!(decode_advice(&mut cursor).unwrap(), p);
        assert_eq!(cursor.remaining(), 0);
    }

    #[test]
    fn advice_sentinel_and_half() {
        for p in [
            AdvicePayload::none(),
            AdvicePayload::new(1, Rational::frac(1, 2)).unwrap(),
        ] {
            let tape = encode_advice(&p);
            assert_eq!(decode_advice(&mut TapeCursor::new(&tape)).unwrap(), p);
        }
    }

    #[test]
    fn payload_invariants() {
        assert!(AdvicePayload::new(0, Rational::frac(1, 2)).is_err());
        assert!(AdvicePayload::new(3, Rational::zero()).is_err());
        assert!(AdvicePayload::new(3, Rational::frac(5, 4)).is_err());
        assert!(AdvicePayload::new(3, Rational::one()).is_ok());
    }

    fn raw_advice(m: u32, numer: u32, denom: u32) -> BitString {
        let field = |v: u32| encode_self_delim(&BitString::from_usize(v as usize));
        field(m).concat(&field(numer)).concat(&field(denom))
    }

    #[test]
    fn decode_rejects_malformed_advice() {
        for tape in [
            raw_advice(1, 3, 2),
            raw_advice(1, 1, 0),
            raw_advice(0, 1, 2),
        ] {
            assert!(matches!(
                decode_advice(&mut TapeCursor::new(&tape)),
                Err(Error::MalformedAdvice(_))
            ));
        }
        let tape = raw_advice(2, 4, 5).slice(0, 10);
        assert!(matches!(
            decode_advice(&mut TapeCursor::new(&tape)),
            Err(Error::Truncated { .. })
        ));
    }

    #[test]
    fn packed_form() {
        let tape = bits("1011000011");
        let packed = tape.to_packed();
        assert_eq!(&packed[..8], &10u64.to_be_bytes());
        assert_eq!(&packed[8..], &[0b1011_0000, 0b1100_0000]);
        assert_eq!(BitString::from_packed(&packed).unwrap(), tape);
        assert!(BitString::from_packed(&packed[..9]).is_err());
        assert!(BitString::from_packed(&[0; 4]).is_err());
    }

    #[test]
    fn tape_files() {
        let dir = tempfile::tempdir().unwrap();
        let tape = encode_advice(&AdvicePayload::new(2, Rational::frac(4, 5)).unwrap());
        for name in ["advice.txt", "advice.bin"] {
            let path = dir.path().join(name);
            write_tape(&path, &tape).unwrap();
            assert_eq!(read_tape(&path).unwrap(), tape);
        }
        let ascii = std::fs::read_to_string(dir.path().join("advice.txt")).unwrap();
        assert_eq!(ascii.trim(), tape.to_string());
    }
}
