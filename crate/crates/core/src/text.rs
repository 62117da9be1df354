//! Tokenization shared by corpus ingestion and count derivation.

/// Lowercases, splits on anything that is not alphanumeric, drops empties.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_and_lowercases() {
        assert_eq!(tokenize("The car's  wheel-base, 2x!"), vec!["the", "car", "s", "wheel", "base", "2x"]);
        assert!(tokenize(" ,.; ").is_empty());
    }
}
