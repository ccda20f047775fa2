/// Minimal normalizer for raw review text.
///
/// Lowercases, replaces HTML line breaks with spaces and splits punctuation
/// into separate tokens. Apostrophes inside words are kept (`don't`). This
/// is a convenience for raw text; it does not reproduce any particular
/// preprocessed release of a dataset.
pub fn normalize(text: &str) -> Vec<String> {
    let lower = text.to_lowercase();
    let cleaned = lower
        .replace("<br />", " ")
        .replace("<br/>", " ")
        .replace("<br>", " ");
    let mut spaced = String::with_capacity(cleaned.len() + 16);
    let chars: Vec<char> = cleaned.chars().collect();
    for (i, &c) in chars.iter().enumerate() {
        let inner_apostrophe = c == '\''
            && i > 0
            && chars[i - 1].is_alphanumeric()
            && chars.get(i + 1).is_some_and(|n| n.is_alphanumeric());
        if c.is_ascii_punctuation() && !inner_apostrophe {
            spaced.push(' ');
            spaced.push(c);
            spaced.push(' ');
        } else {
            spaced.push(c);
        }
    }
    spaced.split_whitespace().map(str::to_owned).collect()
}
