mod common;

use gecx::edit::{dense_edit_features, extract_edits, align_words, EditSpan};
use gecx::metrics::{
    gleu_evaluate, human_leave_one_out, m2_evaluate, m2_leave_one_out_scores, parse_m2, write_m2,
    GleuConfig, GoldAnnotation,
};
use gecx::text::TokenSentence;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn s(t: &str) -> TokenSentence {
    TokenSentence::from_line(t)
}

#[test]
fn gleu_two_sentence_hand_count() {
    // Sentence 1 keeps the source: matches 3,1,0,0 minus penalties 1,2,2,1
    // (floored) over 4,3,2,1 n-grams. Sentence 2 equals its reference:
    // 5,4,3,2 of 5,4,3,2. Corpus: 7/9, 4/7, 3/5, 2/3, lengths equal.
    let sources = vec![s("he go to school"), s("she like it very much")];
    let refs = vec![vec![s("he goes to school")], vec![s("she likes it very much")]];
    let hyps = vec![s("he go to school"), s("she likes it very much")];
    let g = gleu_evaluate(&sources, &refs, &hyps, &GleuConfig::default()).unwrap();
    let expected = (7.0 / 9.0 * 4.0 / 7.0 * 3.0 / 5.0 * 2.0 / 3.0f64).powf(0.25);
    assert!((g - expected).abs() < 1e-9, "{g} vs {expected}");
}

#[test]
fn gleu_multi_reference_is_seed_deterministic() {
    let sources = vec![s("a b c"), s("d e f")];
    let refs = vec![vec![s("a b d"), s("a c c")], vec![s("d e g"), s("d f f"), s("x e f")]];
    let hyps = vec![s("a b d"), s("d e f")];
    let cfg = GleuConfig { seed: 3, ..GleuConfig::default() };
    let a = gleu_evaluate(&sources, &refs, &hyps, &cfg).unwrap();
    let b = gleu_evaluate(&sources, &refs, &hyps, &cfg).unwrap();
    assert_eq!(a.to_bits(), b.to_bits());
}

#[test]
fn leave_one_out_by_hand() {
    // Three annotators over four sentences.
    let edit = |a: usize, b: usize, c: &str| EditSpan::new(a, b, &c.split_whitespace().collect::<Vec<_>>());
    let gold = vec![
        GoldAnnotation::new(s("a b c"), vec![vec![edit(1, 2, "x")], vec![edit(1, 2, "x")], vec![]]).unwrap(),
        GoldAnnotation::new(s("d e"), vec![vec![], vec![edit(0, 1, "y")], vec![edit(0, 1, "y")]]).unwrap(),
        GoldAnnotation::new(s("f"), vec![vec![edit(0, 1, "g")], vec![edit(0, 1, "h")], vec![edit(0, 1, "g")]]).unwrap(),
        GoldAnnotation::new(s("k l"), vec![vec![], vec![], vec![]]).unwrap(),
    ];
    let scores = m2_leave_one_out_scores(&gold, 2, 0.5).unwrap();
    for (held, score) in scores.iter().enumerate() {
        // Recompute by hand: the held-out annotator's text scored against the
        // other two with m2_evaluate.
        let hyps: Vec<TokenSentence> = gold
            .iter()
            .map(|g| TokenSentence::new(gecx::edit::apply_edits(g.source.tokens(), &g.edit_sets[held]).unwrap()))
            .collect();
        let rest: Vec<GoldAnnotation> = gold
            .iter()
            .map(|g| {
                let others = (0..3).filter(|&a| a != held).map(|a| g.edit_sets[a].clone()).collect();
                GoldAnnotation::new(g.source.clone(), others).unwrap()
            })
            .collect();
        let direct = m2_evaluate(&rest, &hyps, 2, 0.5).unwrap().f_score;
        assert_eq!(*score, direct);
    }
    // Held-out annotator 0 ends with tp 2, fp 0, fn 1 (F0.5 = 10/11);
    // annotator 1 with tp 2, fp 1, fn 1 (2/3); annotator 2 mirrors 0.
    let expected = [10.0 / 11.0, 2.0 / 3.0, 10.0 / 11.0];
    for (got, want) in scores.iter().zip(expected) {
        assert!((got - want).abs() < 1e-12);
    }
    let loo = human_leave_one_out(&scores).unwrap();
    assert!((loo.mean - 82.0 / 99.0).abs() < 1e-12);
    assert!((loo.sd - 128f64.sqrt() / 99.0).abs() < 1e-12);
}

#[test]
fn five_sentence_two_annotator_corpus_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..200 {
        let (gold, hyps): (Vec<_>, Vec<_>) = (0..5)
            .map(|_| loop {
                let (g, h) = common::random_m2_sentence(&mut rng);
                if g.annotators() == 2 {
                    break (g, h);
                }
            })
            .unzip();
        let report = m2_evaluate(&gold, &hyps, 2, 0.5).unwrap();
        assert_eq!(report.counts(), common::brute_force_m2(&gold, &hyps, 2, 0.5));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn unchanged_sources_have_no_false_positives(seed in any::<u64>(), n in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gold: Vec<_> = (0..n).map(|_| common::random_m2_sentence(&mut rng).0).collect();
        let hyps: Vec<_> = gold.iter().map(|g| g.source.clone()).collect();
        prop_assert_eq!(m2_evaluate(&gold, &hyps, 2, 0.5).unwrap().fp, 0);
    }

    #[test]
    fn m2_file_round_trips(seed in any::<u64>(), n in 0usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gold: Vec<_> = (0..n)
            .map(|_| common::random_m2_sentence(&mut rng).0)
            .filter(|g| !g.source.is_empty())
            .collect();
        let text = write_m2(&gold);
        let back = parse_m2(&text).unwrap();
        prop_assert_eq!(write_m2(&back), text);
    }

    #[test]
    fn gleu_corruption_never_helps(
        words in prop::collection::vec("[a-e]", 1..12),
        pos in any::<prop::sample::Index>(),
    ) {
        // With the source equal to the reference there are no source-only
        // n-grams to penalize, so a fresh token can only remove matches.
        let reference = TokenSentence::new(words.clone());
        let mut corrupted = words.clone();
        corrupted[pos.index(words.len())] = "zz".to_owned();
        let cfg = GleuConfig { iterations: 1, ..GleuConfig::default() };
        let src = vec![reference.clone()];
        let refs = vec![vec![reference.clone()]];
        let clean = gleu_evaluate(&src, &refs, std::slice::from_ref(&reference), &cfg).unwrap();
        let worse = gleu_evaluate(&src, &refs, &[TokenSentence::new(corrupted)], &cfg).unwrap();
        prop_assert!(worse <= clean);
    }

    #[test]
    fn word_distance_is_symmetric(
        a in prop::collection::vec("[a-c]", 0..10),
        b in prop::collection::vec("[a-c]", 0..10),
    ) {
        let (x, y) = (TokenSentence::new(a), TokenSentence::new(b));
        prop_assert_eq!(
            dense_edit_features(&x, &y).get("word_lev_dist"),
            dense_edit_features(&y, &x).get("word_lev_dist")
        );
    }

    #[test]
    fn merged_spans_bridge_few_matches(
        a in prop::collection::vec("[a-c]", 0..10),
        b in prop::collection::vec("[a-c]", 0..10),
        max_unchanged in 0usize..4,
    ) {
        let ops = align_words(&a, &b);
        let cand = extract_edits(&ops, &b, max_unchanged);
        // A merged span covers its base edits plus the bridged matches; the
        // source length it adds over them is the bridged match count.
        for m in &cand.merged {
            let inside: Vec<&EditSpan> = cand.base.iter().filter(|e| e.start >= m.start && e.end <= m.end).collect();
            prop_assert!(inside.len() >= 2);
            for pair in inside.windows(2) {
                prop_assert!(pair[1].start - pair[0].end <= max_unchanged);
            }
        }
    }
}
