/// Collapses runs of whitespace to single spaces, drops control characters
/// and trims. Case is preserved.
pub fn normalize_whitespace(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut pending_space = false;
    for c in text.chars() {
        if c.is_whitespace() {
            pending_space = !out.is_empty();
        } else if c.is_control() || c == '\u{200b}' || c == '\u{feff}' {
            continue;
        } else {
            if pending_space {
                out.push(' ');
                pending_space = false;
            }
            out.push(c);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collapses_and_strips() {
        assert_eq!(normalize_whitespace("  Max \n\t Verstappen\u{7}  "), "Max Verstappen");
        assert_eq!(normalize_whitespace("A\u{200b}B"), "AB");
        assert_eq!(normalize_whitespace("   "), "");
    }
}
