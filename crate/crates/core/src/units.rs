use alloc::format;
use alloc::string::String;

/// Formats with at most `max_decimals` places, dropping trailing zeros:
/// `2.4`, `2.95`, `86`.
pub fn format_decimal(value: f64, max_decimals: usize) -> String {
    let mut s = format!("{value:.max_decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = String::from("0");
    }
    s
}
