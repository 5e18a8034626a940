//! File formats, instance generators, run reports and benchmarks for
//! [`tverberg_core`].

pub mod bench;
pub mod format;
pub mod generate;
pub mod report;

/// Set to anything but `0` or the empty string to turn off oracle-call
/// counting (reports then show zero calls).
pub const NO_COUNT_ENV: &str = "TVERBERG_NO_COUNT";

pub fn counting_enabled() -> bool {
    std::env::var_os(NO_COUNT_ENV).is_none_or(|v| v.is_empty() || v == "0")
}
