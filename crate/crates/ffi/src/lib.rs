//! C ABI over `unbox-core`.
//!
//! Every fallible entry point returns an [`UnboxStatus`] and writes its
//! result through an out-pointer. On failure a message is kept per thread
//! and can be read with [`unbox_last_error_message`] until the next call
//! on the same thread. Panics never cross the boundary; they surface as
//! `UNBOX_STATUS_PANIC`.
//!
//! Lexicons are opaque: create one with [`unbox_lexicon_bundled`] or
//! [`unbox_lexicon_load`], release it with [`unbox_lexicon_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use unbox_core::cleaning;
use unbox_core::eval::{self, ConfusionMatrix};
use unbox_core::labeling::{label_compound, Label};
use unbox_core::models::SplitSpec;
use unbox_core::sentiment::{self, Lexicon, RuleConstants};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnboxStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Lexicon = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnboxLabel {
    Negative = -1,
    Neutral = 0,
    Positive = 1,
}

impl From<Label> for UnboxLabel {
    fn from(l: Label) -> Self {
        match l {
            Label::Negative => UnboxLabel::Negative,
            Label::Neutral => UnboxLabel::Neutral,
            Label::Positive => UnboxLabel::Positive,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct UnboxScores {
    pub pos: f64,
    pub neu: f64,
    pub neg: f64,
    pub compound: f64,
}

/// Per-class and macro metrics of a binary confusion matrix.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct UnboxReport {
    pub negative_precision: f64,
    pub negative_recall: f64,
    pub negative_f1: f64,
    pub positive_precision: f64,
    pub positive_recall: f64,
    pub positive_f1: f64,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
    pub accuracy: f64,
}

/// Opaque sentiment lexicon with the default rule constants.
pub struct UnboxLexicon {
    lexicon: Lexicon,
    constants: RuleConstants,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(UnboxStatus, String);

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> UnboxStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => UnboxStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            UnboxStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(UnboxStatus::NullPointer, format!("{what} is null"))
}

unsafe fn text_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(UnboxStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn bytes_arg<'a>(p: *const u8, len: usize, what: &str) -> Result<&'a [u8], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next `unbox_*` call on the same thread.
#[no_mangle]
pub extern "C" fn unbox_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn unbox_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// New handle on the lexicon and emoji table shipped with the library.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn unbox_lexicon_bundled(out: *mut *mut UnboxLexicon) -> UnboxStatus {
    guard(|| {
        let handle = Box::new(UnboxLexicon {
            lexicon: Lexicon::bundled().clone(),
            constants: RuleConstants::default(),
        });
        if out.is_null() {
            return Err(null("out"));
        }
        out.write(Box::into_raw(handle));
        Ok(())
    })
}

/// Parse a lexicon from tab-separated bytes. The emoji table is optional
/// (pass NULL and 0).
///
/// # Safety
/// Each buffer must be readable for its stated length; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn unbox_lexicon_load(
    lexicon: *const u8,
    lexicon_len: usize,
    emoji: *const u8,
    emoji_len: usize,
    out: *mut *mut UnboxLexicon,
) -> UnboxStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let lex_bytes = bytes_arg(lexicon, lexicon_len, "lexicon")?;
        let emoji_bytes = if emoji.is_null() && emoji_len == 0 {
            None
        } else {
            Some(bytes_arg(emoji, emoji_len, "emoji")?)
        };
        let lexicon = Lexicon::load(lex_bytes, emoji_bytes).map_err(|e| Failure(UnboxStatus::Lexicon, e.to_string()))?;
        out.write(Box::into_raw(Box::new(UnboxLexicon {
            lexicon,
            constants: RuleConstants::default(),
        })));
        Ok(())
    })
}

/// Release a handle. NULL is ignored.
///
/// # Safety
/// `handle` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn unbox_lexicon_free(handle: *mut UnboxLexicon) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Number of lexicon entries; 0 for NULL.
///
/// # Safety
/// `handle` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn unbox_lexicon_len(handle: *const UnboxLexicon) -> usize {
    handle.as_ref().map_or(0, |h| h.lexicon.len())
}

/// Sentiment scores of a NUL-terminated UTF-8 text.
///
/// # Safety
/// `handle` must be live, `text` NUL-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn unbox_score(
    handle: *const UnboxLexicon,
    text: *const c_char,
    out: *mut UnboxScores,
) -> UnboxStatus {
    guard(|| {
        let h = handle.as_ref().ok_or_else(|| null("handle"))?;
        let text = text_arg(text, "text")?;
        let s = sentiment::score(text, &h.lexicon, &h.constants);
        write_out(
            out,
            UnboxScores {
                pos: s.pos,
                neu: s.neu,
                neg: s.neg,
                compound: s.compound,
            },
            "out",
        )
    })
}

/// Map a compound score to a label: `>= threshold` positive,
/// `<= -threshold` negative, otherwise neutral.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn unbox_label(compound: f64, threshold: f64, out: *mut UnboxLabel) -> UnboxStatus {
    guard(|| {
        if !(threshold > 0.0 && threshold <= 1.0) {
            return Err(Failure(UnboxStatus::InvalidArgument, format!("threshold {threshold} outside (0,1]")));
        }
        if !compound.is_finite() {
            return Err(Failure(UnboxStatus::InvalidArgument, "compound is not finite".into()));
        }
        write_out(out, label_compound(compound, threshold).into(), "out")
    })
}

/// Metrics of the matrix with negative as class 0 and positive as class 1.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn unbox_report_from_confusion(
    tn: u64,
    fp: u64,
    fn_: u64,
    tp: u64,
    out: *mut UnboxReport,
) -> UnboxStatus {
    guard(|| {
        let r = eval::report(&ConfusionMatrix::new(tn, fp, fn_, tp))
            .map_err(|e| Failure(UnboxStatus::InvalidArgument, e.to_string()))?;
        write_out(
            out,
            UnboxReport {
                negative_precision: r.negative.precision,
                negative_recall: r.negative.recall,
                negative_f1: r.negative.f1,
                positive_precision: r.positive.precision,
                positive_recall: r.positive.recall,
                positive_f1: r.positive.f1,
                macro_precision: r.macro_precision,
                macro_recall: r.macro_recall,
                macro_f1: r.macro_f1,
                accuracy: r.accuracy,
            },
            "out",
        )
    })
}

/// Train and test partition sizes for `n` rows.
///
/// # Safety
/// Both out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn unbox_split_sizes(
    n: usize,
    train_fraction: f64,
    out_train: *mut usize,
    out_test: *mut usize,
) -> UnboxStatus {
    guard(|| {
        if !(train_fraction > 0.0 && train_fraction < 1.0) {
            return Err(Failure(
                UnboxStatus::InvalidArgument,
                format!("train fraction {train_fraction} outside (0,1)"),
            ));
        }
        let spec = SplitSpec {
            train_fraction,
            ..SplitSpec::default()
        };
        write_out(out_train, spec.train_size(n), "out_train")?;
        write_out(out_test, spec.test_size(n), "out_test")
    })
}

/// Whether the cleaning stage would drop `text` as numeric-only.
///
/// # Safety
/// `text` NUL-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn unbox_is_numeric_only(text: *const c_char, out: *mut bool) -> UnboxStatus {
    guard(|| {
        let text = text_arg(text, "text")?;
        write_out(out, cleaning::is_numeric_only(text), "out")
    })
}

/// Share of cased letters in `text` that are upper case.
///
/// # Safety
/// `text` NUL-terminated, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn unbox_caps_ratio(text: *const c_char, out: *mut f64) -> UnboxStatus {
    guard(|| {
        let text = text_arg(text, "text")?;
        write_out(out, cleaning::caps_ratio(text), "out")
    })
}
