/// Formats a value the way the text outputs print it: integral values
/// without a fractional part.
pub fn format_value(value: f64) -> String {
    if value == f64::INFINITY {
        "inf".to_string()
    } else if value == 0.0 {
        "0".to_string()
    } else {
        format!("{value}")
    }
}
