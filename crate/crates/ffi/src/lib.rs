//! C ABI over `bincover`.
//!
//! Sequences live behind an opaque `BcSequence` handle. Every fallible function returns a
//! [`BcStatus`]; on failure `bc_last_error` describes the problem. Strings handed out by the
//! library are released with `bc_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bincover::codec::{decode_advice, encode_advice, TapeCursor};
use bincover::model::{normalize_sequence, parse_instance, Normalized};
use bincover::opt::opt_exact;
use bincover::{compute_advice, AdvicePayload, BitString, Error, Rational, StrategyConfig};
use num_traits::ToPrimitive;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    MalformedAdvice = 5,
    LimitExceeded = 6,
    /// A rational does not fit in 64-bit numerator and denominator.
    Overflow = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BcStrategy {
    Dnf = 0,
    Dh = 1,
    Adh = 2,
}

/// Opaque item sequence.
pub struct BcSequence {
    normalized: Normalized,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: BcStatus, msg: impl Into<String>) -> BcStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> BcStatus {
    let status = match &e {
        Error::Parse { .. } | Error::Io(_) => BcStatus::Parse,
        Error::Truncated { .. } | Error::MalformedAdvice(_) => BcStatus::MalformedAdvice,
        Error::LimitExceeded { .. } => BcStatus::LimitExceeded,
        Error::Domain(_) | Error::Certificate { .. } => BcStatus::Domain,
    };
    fail(status, e.to_string())
}

/// Runs `f`, turning panics into `BcStatus::Panic`.
fn guard(f: impl FnOnce() -> Result<(), BcStatus>) -> BcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BcStatus::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(BcStatus::Panic, "internal panic"),
    }
}

fn lift<T>(r: bincover::Result<T>) -> Result<T, BcStatus> {
    r.map_err(from_error)
}

unsafe fn c_str<'a>(s: *const c_char) -> Result<&'a str, BcStatus> {
    if s.is_null() {
        return Err(fail(BcStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(BcStatus::InvalidUtf8, "string argument is not UTF-8"))
}

unsafe fn seq_ref<'a>(seq: *const BcSequence) -> Result<&'a BcSequence, BcStatus> {
    seq.as_ref()
        .ok_or_else(|| fail(BcStatus::NullPointer, "null sequence handle"))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), BcStatus> {
    if out.is_null() {
        return Err(fail(BcStatus::NullPointer, "null output pointer"));
    }
    out.write(value);
    Ok(())
}

fn rational(num: i64, den: i64) -> Result<Rational, BcStatus> {
    if den == 0 {
        return Err(fail(BcStatus::Domain, "zero denominator"));
    }
    Ok(Rational::frac(num, den))
}

fn split(r: &Rational) -> Result<(i64, i64), BcStatus> {
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(n), Some(d)) => Ok((n, d)),
        _ => Err(fail(
            BcStatus::Overflow,
            format!("{r} does not fit in 64 bits"),
        )),
    }
}

/// Message for the last failed call on this thread, or null. Valid until the next call that
/// fails on the same thread.
#[no_mangle]
pub extern "C" fn bc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses an instance in the text format (one `p/q` or decimal per line, `#` comments).
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bc_sequence_parse(
    text: *const c_char,
    out: *mut *mut BcSequence,
) -> BcStatus {
    guard(|| {
        let text = c_str(text)?;
        let values = lift(parse_instance(text))?;
        let normalized = lift(normalize_sequence(&values))?;
        write(out, Box::into_raw(Box::new(BcSequence { normalized })))
    })
}

/// # Safety
/// `seq` must come from `bc_sequence_parse` and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bc_sequence_free(seq: *mut BcSequence) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

/// Number of items handed to the strategies; items of size at least 1 and zeros are split off.
///
/// # Safety
/// `seq` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn bc_sequence_len(seq: *const BcSequence) -> usize {
    seq.as_ref().map_or(0, |s| s.normalized.sequence.n())
}

/// Runs a strategy and stores the number of covered bins, counting items of size at least 1
/// as bins of their own. `m`, `x_num`, `x_den` are read for `BC_STRATEGY_ADH` only.
///
/// # Safety
/// `seq` must be a live handle and `out_covered` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bc_run(
    seq: *const BcSequence,
    strategy: BcStrategy,
    k: u32,
    m: usize,
    x_num: i64,
    x_den: i64,
    out_covered: *mut usize,
) -> BcStatus {
    guard(|| {
        let seq = seq_ref(seq)?;
        let config = match strategy {
            BcStrategy::Dnf => StrategyConfig::Dnf,
            BcStrategy::Dh => StrategyConfig::Dh { k },
            BcStrategy::Adh => StrategyConfig::AdviceDh {
                k,
                m,
                x_m: rational(x_num, x_den)?,
            },
        };
        let mut covering = lift(config.run(&seq.normalized.sequence))?;
        covering.absorb(&seq.normalized);
        write(out_covered, covering.covered_count)
    })
}

/// Computes the oracle advice `(m, x_m)` and the bins it covers (items of size at least 1
/// excluded).
///
/// # Safety
/// `seq` must be a live handle and every output pointer valid.
#[no_mangle]
pub unsafe extern "C" fn bc_oracle(
    seq: *const BcSequence,
    k: u32,
    out_m: *mut usize,
    out_x_num: *mut i64,
    out_x_den: *mut i64,
    out_covered: *mut usize,
) -> BcStatus {
    guard(|| {
        let seq = seq_ref(seq)?;
        let r = lift(compute_advice(&seq.normalized.sequence, k))?;
        let (num, den) = split(&r.x_m)?;
        write(out_m, r.m)?;
        write(out_x_num, num)?;
        write(out_x_den, den)?;
        write(out_covered, r.covered)
    })
}

/// Exact optimum, or `BC_STATUS_LIMIT_EXCEEDED` above `limit` items.
///
/// # Safety
/// `seq` must be a live handle and `out_opt` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bc_opt_exact(
    seq: *const BcSequence,
    limit: usize,
    out_opt: *mut usize,
) -> BcStatus {
    guard(|| {
        let seq = seq_ref(seq)?;
        let (opt, _) = lift(opt_exact(&seq.normalized.sequence, limit))?;
        write(out_opt, opt + seq.normalized.prepacked.len())
    })
}

/// Encodes `(m, x_num / x_den)` as a tape of `0`/`1` characters, released with
/// `bc_string_free`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bc_advice_encode(
    m: usize,
    x_num: i64,
    x_den: i64,
    out: *mut *mut c_char,
) -> BcStatus {
    guard(|| {
        let payload = lift(AdvicePayload::new(m, rational(x_num, x_den)?))?;
        let text = encode_advice(&payload).to_string();
        write(out, CString::new(text).expect("0/1 only").into_raw())
    })
}

/// Decodes an advice tape given as `0`/`1` characters.
///
/// # Safety
/// `bits` must be a valid NUL-terminated string and every output pointer valid.
#[no_mangle]
pub unsafe extern "C" fn bc_advice_decode(
    bits: *const c_char,
    out_m: *mut usize,
    out_x_num: *mut i64,
    out_x_den: *mut i64,
) -> BcStatus {
    guard(|| {
        let tape: BitString = lift(c_str(bits)?.parse())?;
        let payload = lift(decode_advice(&mut TapeCursor::new(&tape)))?;
        let (num, den) = split(&payload.x_m)?;
        write(out_m, payload.m)?;
        write(out_x_num, num)?;
        write(out_x_den, den)
    })
}

/// # Safety
/// `s` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn bc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> *mut BcSequence {
        let text = CString::new(text).unwrap();
        let mut seq = ptr::null_mut();
        assert_eq!(
            unsafe { bc_sequence_parse(text.as_ptr(), &mut seq) },
            BcStatus::Ok
        );
        seq
    }

    fn last_error() -> String {
        unsafe { CStr::from_ptr(bc_last_error()) }
            .to_string_lossy()
            .into_owned()
    }

    #[test]
    fn runs_strategies_on_parsed_sequence() {
        let seq = parse("0.5\n0.5\n0.7\n0.3\n1.5\n");
        assert_eq!(unsafe { bc_sequence_len(seq) }, 4);
        let mut covered = 0;
        let status = unsafe { bc_run(seq, BcStrategy::Dnf, 0, 0, 0, 1, &mut covered) };
        assert_eq!((status, covered), (BcStatus::Ok, 3));
        let status = unsafe { bc_run(seq, BcStrategy::Adh, 3, 1, 7, 10, &mut covered) };
        assert_eq!(status, BcStatus::Ok);
        let mut opt = 0;
        assert_eq!(unsafe { bc_opt_exact(seq, 15, &mut opt) }, BcStatus::Ok);
        assert_eq!(opt, 3);
        assert!(covered <= opt);
        unsafe { bc_sequence_free(seq) };
    }

    #[test]
    fn oracle_and_advice_round_trip() {
        let seq = parse("0.8\n0.25\n0.9\n0.2\n");
        let (mut m, mut num, mut den, mut covered) = (0, 0, 0, 0);
        let status = unsafe { bc_oracle(seq, 3, &mut m, &mut num, &mut den, &mut covered) };
        assert_eq!(status, BcStatus::Ok);
        assert_eq!(covered, 2);
        let mut tape = ptr::null_mut();
        assert_eq!(
            unsafe { bc_advice_encode(m, num, den, &mut tape) },
            BcStatus::Ok
        );
        let (mut m2, mut num2, mut den2) = (0, 0, 0);
        let status = unsafe { bc_advice_decode(tape, &mut m2, &mut num2, &mut den2) };
        assert_eq!(status, BcStatus::Ok);
        assert_eq!((m2, num2, den2), (m, num, den));
        unsafe {
            bc_string_free(tape);
            bc_sequence_free(seq);
        }
    }

    #[test]
    fn errors_set_status_and_message() {
        let bad = CString::new("0.5\nnope\n").unwrap();
        let mut seq = ptr::null_mut();
        assert_eq!(
            unsafe { bc_sequence_parse(bad.as_ptr(), &mut seq) },
            BcStatus::Parse
        );
        assert!(last_error().contains("line 2"));
        assert!(seq.is_null());

        let mut covered = 0;
        let status = unsafe { bc_run(ptr::null(), BcStrategy::Dnf, 0, 0, 0, 1, &mut covered) };
        assert_eq!(status, BcStatus::NullPointer);

        let truncated = CString::new("1101").unwrap();
        let (mut m, mut n, mut d) = (0, 0, 0);
        let status = unsafe { bc_advice_decode(truncated.as_ptr(), &mut m, &mut n, &mut d) };
        assert_eq!(status, BcStatus::MalformedAdvice);

        let mut out = ptr::null_mut();
        assert_eq!(
            unsafe { bc_advice_encode(1, 1, 0, &mut out) },
            BcStatus::Domain
        );
        assert_eq!(
            unsafe { bc_advice_encode(1, 3, 2, &mut out) },
            BcStatus::MalformedAdvice
        );

        let seq = parse(&"0.1\n".repeat(20));
        let mut opt = 0;
        assert_eq!(
            unsafe { bc_opt_exact(seq, 15, &mut opt) },
            BcStatus::LimitExceeded
        );
        unsafe { bc_sequence_free(seq) };
    }
}
