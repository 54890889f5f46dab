//! Seeded toy corpora with planted errors, for demos and tests.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::edit::EditSpan;
use crate::error::Result;
use crate::metrics::GoldAnnotation;
use crate::pipeline::osa_distance;
use crate::text::TokenSentence;

const SUBJECTS: &[&str] = &[
    "he", "she", "the teacher", "my brother", "the student", "our neighbour", "the manager",
    "my sister",
];

const PLURAL_SUBJECTS: &[&str] = &["they", "we", "the students", "my parents", "our teachers"];

/// (base form, third person singular)
const VERBS: &[(&str, &str)] = &[
    ("visit", "visits"),
    ("describe", "describes"),
    ("remember", "remembers"),
    ("discuss", "discusses"),
    ("explain", "explains"),
    ("imagine", "imagines"),
    ("consider", "considers"),
    ("mention", "mentions"),
];

const ADJECTIVES: &[&str] = &[
    "beautiful", "important", "different", "wonderful", "expensive", "dangerous", "comfortable",
    "interesting", "political", "traditional",
];

const NOUNS: &[&str] = &[
    "difficulty", "government", "information", "knowledge", "restaurant", "environment",
    "education", "experience", "community", "situation", "technology", "hospital", "language",
    "business", "vacation", "neighbourhood", "building", "question", "mountain", "festival",
];

const ADVERBS: &[&str] = &[
    "yesterday", "carefully", "tomorrow", "frequently", "together", "recently", "honestly",
    "seriously",
];

/// A corpus whose sources carry disjoint spelling and agreement errors.
#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    /// Error-free text for training lexicons, language models and subwords.
    pub clean: Vec<TokenSentence>,
    pub sources: Vec<TokenSentence>,
    pub references: Vec<TokenSentence>,
    pub gold: Vec<GoldAnnotation>,
    /// Fixes every agreement error and nothing else.
    pub grammar_rules: Vec<(String, String)>,
}

/// Tokens of one sentence, the verb position (if the subject is singular)
/// and the positions a typo may hit.
fn clean_sentence(rng: &mut ChaCha8Rng) -> (Vec<String>, Option<usize>, Vec<usize>) {
    let singular = rng.random_bool(0.7);
    let subjects = if singular { SUBJECTS } else { PLURAL_SUBJECTS };
    let mut toks: Vec<String> = subjects
        .choose(rng)
        .expect("non-empty")
        .split(' ')
        .map(str::to_owned)
        .collect();
    let verb = toks.len();
    let (base, third) = *VERBS.choose(rng).expect("non-empty");
    toks.push(if singular { third } else { base }.to_owned());
    toks.push("the".to_owned());
    let mut targets = Vec::new();
    if rng.random_bool(0.5) {
        targets.push(toks.len());
        toks.push(ADJECTIVES.choose(rng).expect("non-empty").to_string());
    }
    targets.push(toks.len());
    toks.push(NOUNS.choose(rng).expect("non-empty").to_string());
    if rng.random_bool(0.5) {
        targets.push(toks.len());
        toks.push(ADVERBS.choose(rng).expect("non-empty").to_string());
    }
    toks.push(".".to_owned());
    (toks, singular.then_some(verb), targets)
}

/// Applies one or two random character edits (substitute, insert, delete or
/// swap adjacent letters) to a word of at least four characters.
pub fn plant_typo(word: &str, rng: &mut impl Rng) -> String {
    const LETTERS: &[u8] = b"abcdefghijklmnopqrstuvwxyz";
    let mut chars: Vec<char> = word.chars().collect();
    let edits = rng.random_range(1..=2);
    for _ in 0..edits {
        // Leave the first letter alone, as most real typos do.
        let i = rng.random_range(1..chars.len());
        let letter = char::from(*LETTERS.choose(rng).expect("non-empty"));
        match rng.random_range(0..4) {
            0 => chars[i] = letter,
            1 => chars.insert(i, letter),
            2 if chars.len() > 3 => {
                chars.remove(i);
            }
            _ if i + 1 < chars.len() => chars.swap(i, i + 1),
            _ => chars[i] = letter,
        }
    }
    chars.into_iter().collect()
}

/// A typo of `word` within distance 2 that `reject` does not refuse.
fn typo_for(word: &str, rng: &mut ChaCha8Rng, reject: &dyn Fn(&str) -> bool) -> String {
    loop {
        let t = plant_typo(word, rng);
        if t != word && osa_distance(&t, word) <= 2 && !reject(&t) {
            return t;
        }
    }
}

fn is_vocabulary_word(w: &str) -> bool {
    ADJECTIVES.contains(&w)
        || NOUNS.contains(&w)
        || ADVERBS.contains(&w)
        || VERBS.iter().any(|(b, s)| *b == w || *s == w)
        || SUBJECTS
            .iter()
            .chain(PLURAL_SUBJECTS)
            .any(|s| s.split(' ').any(|p| p == w))
        || w == "the"
        || w == "."
}

/// `n_clean` error-free sentences plus `n_dev` sentences where each carries,
/// independently with probability one half, a spelling error in a content
/// word and (for singular subjects) an agreement error on the verb.
pub fn complementary_corpus(n_clean: usize, n_dev: usize, seed: u64) -> Result<SyntheticCorpus> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let clean = (0..n_clean)
        .map(|_| TokenSentence::new(clean_sentence(&mut rng).0))
        .collect();
    let mut sources = Vec::with_capacity(n_dev);
    let mut references = Vec::with_capacity(n_dev);
    let mut gold = Vec::with_capacity(n_dev);
    for _ in 0..n_dev {
        let (reference, verb, targets) = clean_sentence(&mut rng);
        let mut source = reference.clone();
        let mut edits = Vec::new();
        if let Some(verb) = verb.filter(|_| rng.random_bool(0.5)) {
            let base = VERBS
                .iter()
                .find(|(_, s)| *s == reference[verb])
                .expect("verb from the table")
                .0;
            source[verb] = base.to_owned();
            edits.push(EditSpan::new(verb, verb + 1, &[&reference[verb]]));
        }
        if rng.random_bool(0.5) {
            let at = *targets.choose(&mut rng).expect("every sentence has a noun");
            source[at] = typo_for(&reference[at], &mut rng, &is_vocabulary_word);
            edits.push(EditSpan::new(at, at + 1, &[&reference[at]]));
        }
        let src = TokenSentence::new(source);
        gold.push(GoldAnnotation::new(src.clone(), vec![edits])?);
        sources.push(src);
        references.push(TokenSentence::new(reference));
    }
    // Keyed on the word before the verb so plural subjects are left alone.
    let mut grammar_rules = Vec::new();
    for subject in SUBJECTS {
        let last = subject.rsplit(' ').next().expect("non-empty");
        for (base, third) in VERBS {
            let rule = (format!("{last} {base}"), format!("{last} {third}"));
            if !grammar_rules.contains(&rule) {
                grammar_rules.push(rule);
            }
        }
    }
    Ok(SyntheticCorpus {
        clean,
        sources,
        references,
        gold,
        grammar_rules,
    })
}

/// Sentences for spell-checker gating checks.
#[derive(Debug, Clone)]
pub struct TypoBenchmark {
    pub sentences: Vec<TokenSentence>,
    /// `(sentence, token, intended word)` for every planted typo.
    pub typos: Vec<(usize, usize, String)>,
}

/// Clean sentences totalling at least `n_tokens` tokens, with `n_typos`
/// content words replaced by typos for which `accept` holds, and
/// `n_single` further tokens replaced by lone out-of-vocabulary letters.
pub fn typo_benchmark(
    n_tokens: usize,
    n_typos: usize,
    n_single: usize,
    seed: u64,
    accept: &dyn Fn(&str) -> bool,
) -> TypoBenchmark {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sentences: Vec<Vec<String>> = Vec::new();
    let mut targets: Vec<(usize, usize)> = Vec::new();
    let mut others: Vec<(usize, usize)> = Vec::new();
    let mut total = 0;
    while total < n_tokens {
        let (toks, _, t) = clean_sentence(&mut rng);
        let s = sentences.len();
        total += toks.len();
        targets.extend(t.iter().map(|&i| (s, i)));
        others.extend((0..toks.len()).filter(|i| !t.contains(i)).map(|i| (s, i)));
        sentences.push(toks);
    }
    // Trim the last sentence so the token count is exact.
    let excess = total - n_tokens;
    if excess > 0 {
        let last = sentences.len() - 1;
        let keep = sentences[last].len() - excess;
        sentences[last].truncate(keep);
        targets.retain(|&(s, i)| s != last || i < keep);
        others.retain(|&(s, i)| s != last || i < keep);
    }
    let chosen: Vec<(usize, usize)> = targets
        .choose_multiple(&mut rng, n_typos.min(targets.len()))
        .copied()
        .collect();
    let mut typos = Vec::with_capacity(chosen.len());
    for (s, i) in chosen {
        let word = sentences[s][i].clone();
        let reject = |t: &str| is_vocabulary_word(t) || !accept(t);
        sentences[s][i] = typo_for(&word, &mut rng, &reject);
        typos.push((s, i, word));
    }
    typos.sort();
    const SINGLES: &[&str] = &["q", "z", "x", "j", "k"];
    for &(s, i) in others.choose_multiple(&mut rng, n_single.min(others.len())) {
        sentences[s][i] = SINGLES.choose(&mut rng).expect("non-empty").to_string();
    }
    TypoBenchmark {
        sentences: sentences.into_iter().map(TokenSentence::new).collect(),
        typos,
    }
}
