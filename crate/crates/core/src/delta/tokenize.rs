use std::collections::BTreeSet;

/// Canonical tokenizer: lowercase, split on anything that is not
/// alphanumeric (Unicode-aware), drop empties.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

pub fn tokenize_all<'a>(texts: impl IntoIterator<Item = &'a str>) -> Vec<String> {
    texts.into_iter().flat_map(tokenize).collect()
}

pub fn token_set<'a>(texts: impl IntoIterator<Item = &'a str>) -> BTreeSet<String> {
    texts.into_iter().flat_map(tokenize).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowercases_and_strips_punctuation() {
        assert_eq!(tokenize("Car-crash, on HIGHWAY!!"), vec!["car", "crash", "on", "highway"]);
    }

    #[test]
    fn unicode_words() {
        assert_eq!(tokenize("Zürich — Straße"), vec!["zürich", "straße"]);
    }

    #[test]
    fn empty_input() {
        assert!(tokenize("  ,;  ").is_empty());
    }
}
