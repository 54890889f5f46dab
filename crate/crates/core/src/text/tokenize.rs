use super::TokenSentence;

/// Contraction suffixes split off as their own tokens (matched case-insensitively).
const CONTRACTIONS: [&str; 7] = ["n't", "'s", "'re", "'ll", "'ve", "'d", "'m"];

/// Rule-based tokenizer.
///
/// The line is split on whitespace; each chunk then has trailing and leading
/// runs of ASCII punctuation detached (a run stays one token) and English
/// contractions split off. Every emitted token is a fixed point of the rules,
/// which makes the tokenizer idempotent on its own output.
pub fn tokenize(raw: &str) -> TokenSentence {
    let mut tokens = Vec::new();
    for chunk in raw.split_whitespace() {
        split_chunk(chunk, &mut tokens);
    }
    TokenSentence::new(tokens)
}

fn is_punct(c: char) -> bool {
    c.is_ascii_punctuation()
}

fn contraction_suffix(chunk: &str) -> Option<usize> {
    let lower = chunk.to_ascii_lowercase();
    CONTRACTIONS
        .iter()
        .find(|c| lower.ends_with(*c))
        .map(|c| chunk.len() - c.len())
}

fn is_contraction(chunk: &str) -> bool {
    CONTRACTIONS.iter().any(|c| chunk.eq_ignore_ascii_case(c))
}

fn split_chunk(chunk: &str, out: &mut Vec<String>) {
    if chunk.is_empty() {
        return;
    }
    if chunk.chars().all(is_punct) || is_contraction(chunk) {
        out.push(chunk.to_owned());
        return;
    }
    let core_end = chunk.trim_end_matches(is_punct).len();
    if core_end < chunk.len() {
        split_chunk(&chunk[..core_end], out);
        out.push(chunk[core_end..].to_owned());
        return;
    }
    let core_start = chunk.len() - chunk.trim_start_matches(is_punct).len();
    if core_start > 0 {
        out.push(chunk[..core_start].to_owned());
        split_chunk(&chunk[core_start..], out);
        return;
    }
    match contraction_suffix(chunk) {
        Some(at) if at > 0 => {
            split_chunk(&chunk[..at], out);
            out.push(chunk[at..].to_owned());
        }
        _ => out.push(chunk.to_owned()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn toks(s: &str) -> Vec<String> {
        tokenize(s).into_tokens()
    }

    #[test]
    fn contraction_and_final_period() {
        assert_eq!(toks("It's good."), ["It", "'s", "good", "."]);
    }

    #[test]
    fn empty_line() {
        assert!(tokenize("").is_empty());
        assert!(tokenize("   \t ").is_empty());
    }

    #[test]
    fn plain_words_are_stable() {
        assert_eq!(toks("a b"), ["a", "b"]);
        assert_eq!(toks(&tokenize("a b").join()), ["a", "b"]);
    }

    #[test]
    fn negation_and_quotes() {
        assert_eq!(toks("\"Don't!\""), ["\"", "Do", "n't", "!\""]);
        assert_eq!(toks("WE'LL see..."), ["WE", "'LL", "see", "..."]);
        assert_eq!(toks("'s."), ["'s", "."]);
    }

    #[test]
    fn inner_punctuation_is_kept() {
        assert_eq!(toks("e.g. U.S.A"), ["e.g", ".", "U.S.A"]);
    }

    proptest! {
        #[test]
        fn idempotent(raw in "[a-zA-Z'.,!?\" ]{0,40}") {
            let once = tokenize(&raw);
            let twice = tokenize(&once.join());
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn tokens_are_nonempty_and_unspaced(raw in "\\PC{0,40}") {
            for t in tokenize(&raw).iter() {
                prop_assert!(!t.is_empty());
                prop_assert!(!t.chars().any(char::is_whitespace));
            }
        }
    }
}
