/// Shortest decimal form without trailing zeros: `7`, `7.5`, `0.25`.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    format!("{v}")
}

/// `60°`
pub fn format_degrees(v: f64) -> String {
    format!("{}°", format_number(v))
}
