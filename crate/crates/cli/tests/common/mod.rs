#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gecx::lm::char_sentence;
use gecx::metrics::write_m2;
use gecx::nbest::{write_nbest, Hypothesis, NBestList};
use gecx::edit::FeatureVector;
use gecx::pipeline::{Lexicon, RuleCorrector};
use gecx::synthetic::complementary_corpus;
use gecx::text::{write_corpus, TokenSentence};

pub const BIN: &str = env!("CARGO_BIN_EXE_gecx");

pub fn gecx(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .current_dir(dir)
        .env_remove("GECX_SEED")
        .output()
        .expect("binary runs")
}

/// Writes a small synthetic workspace: clean training text, an erroneous
/// dev set with gold annotations, two reference sets, models inputs and a
/// base n-best file.
pub fn fixture(dir: &Path) {
    let c = complementary_corpus(600, 40, 7).unwrap();
    let w = |name: &str, text: String| fs::write(dir.join(name), text).unwrap();
    let rules = RuleCorrector::from_pairs(c.grammar_rules.iter().map(|(a, b)| (a.as_str(), b.as_str()))).unwrap();
    let grammar_only: Vec<TokenSentence> = c.sources.iter().map(|s| rules.rewrite(s)).collect();

    w("clean.txt", write_corpus(&c.clean));
    w("src.txt", write_corpus(&c.sources));
    w("ref.txt", write_corpus(&c.references));
    w("ref2.txt", write_corpus(&grammar_only));
    w("gold.m2", write_m2(&c.gold));
    w(
        "rules.tsv",
        c.grammar_rules.iter().map(|(a, b)| format!("{a}\t{b}\n")).collect(),
    );
    w(
        "raw.txt",
        "He's going, isn't he?\n\"Hello,\" she said (quietly).\nIt costs $3.50 -- or so.\n".into(),
    );
    w("lower.txt", "he is here .\ni think so .\n".into());
    let lexicon = Lexicon::from_corpus(&c.clean).unwrap();
    w("lexicon.txt", lexicon.to_text());
    w(
        "classes.txt",
        lexicon
            .by_frequency()
            .map(|(word, _)| format!("{word}\tc{}\n", word.len() % 5))
            .collect(),
    );
    let chars: Vec<TokenSentence> = c.clean.iter().flat_map(|s| s.iter().map(char_sentence)).collect();
    w("chars.txt", write_corpus(&chars));

    let lists: Vec<NBestList> = (0..c.sources.len())
        .map(|i| {
            let hyp = |t: &TokenSentence, tm: f64| {
                Hypothesis::new(t.clone(), FeatureVector::with_dense([("TM", tm)]), tm)
            };
            NBestList::new(
                i,
                vec![
                    hyp(&c.sources[i], -1.0),
                    hyp(&grammar_only[i], -1.5),
                    hyp(&c.references[i], -2.0),
                ],
            )
            .unwrap()
        })
        .collect();
    w("base.nbest", write_nbest(&lists));
    w(
        "pipeline.toml",
        r#"[[stages]]
kind = "spellcheck"
lexicon_path = "lexicon.txt"
bpe_path = "bpe.codes"
char_lm_path = "chars.arpa"
word_lm_path = "lm.arpa"

[[stages]]
kind = "corrector"
rules_path = "rules.tsv"

[[stages]]
kind = "rescore"
weights_path = "mert.w"
annotators = [{ kind = "edit" }, { kind = "lm", name = "LM", path = "lm.arpa", normalized = true }]
"#
        .into(),
    );
}

/// Every subcommand, in dependency order, with the files it writes.
pub fn command_script() -> Vec<(Vec<&'static str>, Vec<&'static str>)> {
    vec![
        (vec!["tokenize", "--in", "raw.txt", "--out", "tok.txt"], vec!["tok.txt"]),
        (vec!["truecase", "train", "--in", "clean.txt", "--model", "tc.txt"], vec!["tc.txt"]),
        (
            vec!["truecase", "apply", "--model", "tc.txt", "--in", "lower.txt", "--out", "tc_out.txt"],
            vec!["tc_out.txt"],
        ),
        (
            vec!["bpe", "learn", "--in", "clean.txt", "--merges", "200", "--codes", "bpe.codes"],
            vec!["bpe.codes"],
        ),
        (
            vec!["bpe", "apply", "--codes", "bpe.codes", "--in", "src.txt", "--out", "src.bpe"],
            vec!["src.bpe"],
        ),
        (vec!["bpe", "apply", "--undo", "--in", "src.bpe", "--out", "src.unbpe"], vec!["src.unbpe"]),
        (vec!["lm", "train", "--in", "clean.txt", "--order", "3", "--out", "lm.arpa"], vec!["lm.arpa"]),
        (
            vec!["lm", "train", "--in", "chars.txt", "--order", "4", "--out", "chars.arpa"],
            vec!["chars.arpa"],
        ),
        (
            vec!["lm", "train", "--in", "clean.txt", "--classes", "classes.txt", "--order", "4", "--out", "wclm.arpa"],
            vec!["wclm.arpa"],
        ),
        (
            vec!["lm", "score", "--lm", "lm.arpa", "--in", "src.txt", "--out", "lm.scores"],
            vec!["lm.scores"],
        ),
        (vec!["lm", "ppl", "--lm", "lm.arpa", "--in", "ref.txt", "--out", "ppl.kv"], vec!["ppl.kv"]),
        (
            vec!["m2", "score", "--gold", "gold.m2", "--hyp", "src.txt", "--per-sentence", "m2.tsv", "--out", "m2.kv"],
            vec!["m2.kv", "m2.tsv"],
        ),
        (
            vec![
                "gleu", "score", "--src", "src.txt", "--ref", "ref.txt", "--ref", "ref2.txt", "--hyp", "src.txt",
                "--iterations", "50", "--out", "gleu.kv",
            ],
            vec!["gleu.kv"],
        ),
        (
            vec![
                "nbest", "annotate", "--nbest", "base.nbest", "--src", "src.txt", "--edit", "--patterns",
                "classes.txt", "--lm", "LM=lm.arpa", "--class-lm", "WCLM=wclm.arpa,classes.txt", "--normalized",
                "--out", "ann.nbest",
            ],
            vec!["ann.nbest"],
        ),
        (
            vec!["tune", "mert", "--nbest", "ann.nbest", "--gold", "gold.m2", "--max-iterations", "5", "--out", "mert.w"],
            vec!["mert.w"],
        ),
        (
            vec![
                "tune", "mert", "--nbest", "ann.nbest", "--gold", "gold.m2", "--max-iterations", "3", "--folds", "3",
                "--out", "mert_cv.w",
            ],
            vec!["mert_cv.w"],
        ),
        (
            vec![
                "tune", "mira", "--nbest", "ann.nbest", "--metric", "gleu", "--src", "src.txt", "--ref", "ref.txt",
                "--ref", "ref2.txt", "--out", "mira.w",
            ],
            vec!["mira.w"],
        ),
        (
            vec![
                "tune", "grid", "--nbest", "ann.nbest", "--gold", "gold.m2", "--feature", "LM", "--grid",
                "0.1,0.2,0.25,0.3", "--init", "mert.w", "--out", "grid.w",
            ],
            vec!["grid.w"],
        ),
        (
            vec![
                "nbest", "rescore", "--nbest", "ann.nbest", "--weights", "mert.w", "--nbest-out", "rescored.nbest",
                "--out", "rescored.txt",
            ],
            vec!["rescored.txt", "rescored.nbest"],
        ),
        (
            vec![
                "spell", "run", "--lexicon", "lexicon.txt", "--bpe", "bpe.codes", "--char-lm", "chars.arpa",
                "--word-lm", "lm.arpa", "--in", "src.txt", "--out", "spell.txt",
            ],
            vec!["spell.txt"],
        ),
        (
            vec!["spell", "run", "--train", "clean.txt", "--in", "src.txt", "--out", "spell_trained.txt"],
            vec!["spell_trained.txt"],
        ),
        (
            vec!["pipeline", "run", "--config", "pipeline.toml", "--in", "src.txt", "--out", "pipe.txt"],
            vec!["pipe.txt", "pipe.txt.trace/stage0.txt", "pipe.txt.trace/stage1.txt", "pipe.txt.trace/stage2.txt"],
        ),
        (
            vec!["human", "compare", "--system", "61.50", "--human", "62.38", "--out", "human.kv"],
            vec!["human.kv"],
        ),
        (
            vec!["human", "compare", "--system", "40", "--src", "src.txt", "--ref", "ref.txt", "--ref", "ref2.txt", "--out", "human_gleu.kv"],
            vec!["human_gleu.kv"],
        ),
    ]
}

/// Runs the whole script in `dir` with `--seed`, returning stdout and every
/// output file keyed by name. Manifests are excluded: they carry timings.
pub fn run_script(dir: &Path, seed: u64) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let seed = seed.to_string();
    let mut outputs = BTreeMap::new();
    for (i, (args, files)) in command_script().into_iter().enumerate() {
        let mut full = args.clone();
        full.extend(["--seed", seed.as_str()]);
        let out = gecx(dir, &full);
        if !out.status.success() {
            return Err(format!(
                "`gecx {}` failed: {}",
                args.join(" "),
                String::from_utf8_lossy(&out.stderr)
            ));
        }
        outputs.insert(format!("{i:02} stdout"), out.stdout);
        if !files.iter().any(|f| dir.join(format!("{f}.manifest.json")).exists()) {
            return Err(format!("`gecx {}` wrote no manifest", args.join(" ")));
        }
        for f in files {
            let bytes = fs::read(dir.join(f)).map_err(|e| format!("{f}: {e}"))?;
            outputs.insert(f.to_string(), bytes);
        }
    }
    Ok(outputs)
}

pub struct Determinism {
    pub commands: usize,
    pub files: usize,
    pub mismatches: Vec<String>,
}

/// Runs every subcommand twice on identical inputs in fresh directories and
/// lists the outputs that differ.
pub fn determinism(seed: u64) -> Result<Determinism, String> {
    let dirs: Vec<PathBuf> = (0..2)
        .map(|_| tempfile::tempdir().unwrap().keep())
        .collect();
    let mut runs = Vec::new();
    for d in &dirs {
        fixture(d);
        runs.push(run_script(d, seed));
    }
    for d in &dirs {
        let _ = fs::remove_dir_all(d);
    }
    let b = runs.pop().unwrap()?;
    let a = runs.pop().unwrap()?;
    let mismatches = a
        .iter()
        .filter(|(k, v)| b.get(*k) != Some(v))
        .map(|(k, _)| k.clone())
        .collect();
    Ok(Determinism {
        commands: command_script().len(),
        files: a.len(),
        mismatches,
    })
}
