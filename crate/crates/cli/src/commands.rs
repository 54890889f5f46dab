use std::path::{Path, PathBuf};
use std::sync::Arc;

use gecx::lm::{perplexity, project_to_classes, LanguageModel, NGramModel};
use gecx::metrics::{
    gleu_evaluate, gleu_leave_one_out_scores, human_leave_one_out, human_ratio, m2_evaluate,
    m2_leave_one_out_scores, parse_m2, GleuConfig, M2Scorer,
};
use gecx::nbest::{
    annotate_features, cross_validated_tune, grid_search_lm_weight, linear_rescore, mert_tune, mira_tune,
    parse_nbest, parse_weights, write_nbest, write_weights, ClassLmFeature, EditFeatures, FeatureAnnotator,
    GleuMetric, LinearModel, LmFeature, M2Metric, MertConfig, MiraConfig, NBestList, PatternFeatures,
    SentenceMetric, TuningMetric, DEFAULT_LM_GRID, GLEU_LM_WEIGHT, M2_LM_WEIGHT,
};
use gecx::pipeline::{pipeline_run, Lexicon, PipelineConfig, SpellChecker};
use gecx::text::{bpe_unapply, read_corpus, tokenize, write_corpus, BpeModel, TokenSentence, TruecaseModel, WordClassMap};

use crate::args::*;
use crate::run::Run;
use crate::Failure;

pub fn dispatch(cli: Cli) -> Result<(), Failure> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(Failure::Usage("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let config = serde_json::to_value(&cli).expect("arguments serialize");
    let mut run = Run::new(cli.command.name().to_string(), config, cli.seed, cli.manifest.clone());
    match &cli.command {
        Command::Tokenize(io) => tokenize_cmd(&mut run, io)?,
        Command::Truecase(c) => truecase(&mut run, c)?,
        Command::Bpe(c) => bpe(&mut run, c)?,
        Command::Lm(c) => lm(&mut run, c)?,
        Command::M2(c) => m2(&mut run, c)?,
        Command::Gleu(c) => gleu(&mut run, c)?,
        Command::Nbest(c) => nbest(&mut run, c)?,
        Command::Tune(c) => tune(&mut run, c)?,
        Command::Pipeline(c) => pipeline(&mut run, c)?,
        Command::Spell(c) => spell(&mut run, c)?,
        Command::Human(c) => human(&mut run, c)?,
    }
    run.finish()
}

fn corpus(run: &mut Run, path: &Path) -> Result<Vec<TokenSentence>, Failure> {
    Ok(read_corpus(&run.read(path)?))
}

fn load_lm(run: &mut Run, path: &Path) -> Result<NGramModel, Failure> {
    Ok(NGramModel::from_arpa(&run.read(path)?)?)
}

fn load_classes(run: &mut Run, path: &Path) -> Result<WordClassMap, Failure> {
    Ok(WordClassMap::from_text(&run.read(path)?)?)
}

fn tokenize_cmd(run: &mut Run, io: &InOut) -> Result<(), Failure> {
    let text = run.read(&io.input)?;
    let out: Vec<TokenSentence> = text.lines().map(tokenize).collect();
    run.write(io.out.as_deref(), &write_corpus(&out))
}

fn truecase(run: &mut Run, cmd: &TruecaseCmd) -> Result<(), Failure> {
    match cmd {
        TruecaseCmd::Train { input, model } => {
            let c = corpus(run, input)?;
            let m = TruecaseModel::train(&c)?;
            run.write(Some(model), &m.to_text())
        }
        TruecaseCmd::Apply { model, io } => {
            let m = TruecaseModel::from_text(&run.read(model)?)?;
            let c = corpus(run, &io.input)?;
            let out: Vec<TokenSentence> = c.iter().map(|s| m.apply(s)).collect();
            run.write(io.out.as_deref(), &write_corpus(&out))
        }
    }
}

fn bpe(run: &mut Run, cmd: &BpeCmd) -> Result<(), Failure> {
    match cmd {
        BpeCmd::Learn { input, merges, codes } => {
            let c = corpus(run, input)?;
            let m = BpeModel::learn(&c, *merges)?;
            run.write(Some(codes), &m.to_text())
        }
        BpeCmd::Apply { codes, undo, io } => {
            let c = corpus(run, &io.input)?;
            let out: Vec<TokenSentence> = if *undo {
                c.iter().map(bpe_unapply).collect()
            } else {
                let path = codes.as_deref().expect("clap requires --codes");
                let m = BpeModel::from_text(&run.read(path)?)?;
                c.iter().map(|s| m.apply(s)).collect()
            };
            run.write(io.out.as_deref(), &write_corpus(&out))
        }
    }
}

fn project(c: Vec<TokenSentence>, classes: Option<&WordClassMap>) -> Vec<TokenSentence> {
    match classes {
        Some(map) => c.iter().map(|s| project_to_classes(s, map)).collect(),
        None => c,
    }
}

fn lm(run: &mut Run, cmd: &LmCmd) -> Result<(), Failure> {
    match cmd {
        LmCmd::Train {
            input,
            order,
            discount,
            classes,
            out,
        } => {
            let map = classes.as_deref().map(|p| load_classes(run, p)).transpose()?;
            let c = project(corpus(run, input)?, map.as_ref());
            let model = NGramModel::train(&c, *order, *discount)?;
            run.write(Some(out), &model.to_arpa())
        }
        LmCmd::Score { lm, classes, io } => {
            let model = load_lm(run, lm)?;
            let map = classes.as_deref().map(|p| load_classes(run, p)).transpose()?;
            let c = project(corpus(run, &io.input)?, map.as_ref());
            let mut out = String::new();
            for s in &c {
                let score = model.score(s);
                out.push_str(&format!("{:.6}\t{}\t{:.6}\n", score.logprob, score.n_scored, score.normalized));
            }
            run.write(io.out.as_deref(), &out)
        }
        LmCmd::Ppl { lm, classes, io } => {
            let model = load_lm(run, lm)?;
            let map = classes.as_deref().map(|p| load_classes(run, p)).transpose()?;
            let c = project(corpus(run, &io.input)?, map.as_ref());
            let ppl = perplexity(&model, &c)?;
            println!("Perplexity  : {ppl:.4}");
            if io.out.is_some() {
                run.write(io.out.as_deref(), &format!("sentences\t{}\nperplexity\t{ppl:.6}\n", c.len()))?;
            }
            Ok(())
        }
    }
}

/// Human form to stdout; key-value form to `--out` when given, else after it.
fn report(run: &mut Run, human: &str, kv: &str, out: &ReportOut) -> Result<(), Failure> {
    print!("{human}");
    match &out.out {
        Some(p) => run.write(Some(p), kv),
        None => {
            println!();
            run.write(None, kv)
        }
    }
}

fn m2(run: &mut Run, cmd: &M2Cmd) -> Result<(), Failure> {
    let M2Cmd::Score {
        gold,
        hyp,
        max_unchanged,
        beta,
        per_sentence,
        report: out,
    } = cmd;
    let g = parse_m2(&run.read(gold)?)?;
    let h = corpus(run, hyp)?;
    let r = m2_evaluate(&g, &h, *max_unchanged, *beta)?;
    if let Some(p) = per_sentence {
        run.write(Some(p), &r.per_sentence_tsv())?;
    }
    report(run, &r.to_human(), &r.to_key_values(), out)
}

/// `references[s][a]` from one parallel file per annotator.
fn references(run: &mut Run, paths: &[PathBuf], n: usize) -> Result<Vec<Vec<TokenSentence>>, Failure> {
    let mut refs = vec![Vec::with_capacity(paths.len()); n];
    for p in paths {
        let c = corpus(run, p)?;
        if c.len() != n {
            return Err(Failure::Data(format!(
                "{} has {} sentences, expected {n}",
                p.display(),
                c.len()
            )));
        }
        for (slot, s) in refs.iter_mut().zip(c) {
            slot.push(s);
        }
    }
    Ok(refs)
}

fn gleu(run: &mut Run, cmd: &GleuCmd) -> Result<(), Failure> {
    let GleuCmd::Score {
        src,
        refs,
        hyp,
        max_n,
        iterations,
        report: out,
    } = cmd;
    let sources = corpus(run, src)?;
    let references = references(run, refs, sources.len())?;
    let hyps = corpus(run, hyp)?;
    let cfg = GleuConfig {
        max_n: *max_n,
        iterations: *iterations,
        seed: run.seed(),
    };
    let score = gleu_evaluate(&sources, &references, &hyps, &cfg)?;
    report(
        run,
        &format!("GLEU        : {score:.4}\n"),
        &format!("gleu\t{score:.6}\nreferences\t{}\nseed\t{}\n", refs.len(), cfg.seed),
        out,
    )
}

fn nbest(run: &mut Run, cmd: &NbestCmd) -> Result<(), Failure> {
    match cmd {
        NbestCmd::Annotate {
            nbest,
            src,
            edit,
            patterns,
            lm,
            class_lm,
            normalized,
            out,
        } => {
            let mut lists = parse_nbest(&run.read(nbest)?)?;
            let sources = corpus(run, src)?;
            let mut annotators: Vec<Box<dyn FeatureAnnotator>> = Vec::new();
            if *edit {
                annotators.push(Box::new(EditFeatures));
            }
            if let Some(p) = patterns {
                annotators.push(Box::new(PatternFeatures {
                    classes: Arc::new(load_classes(run, p)?),
                }));
            }
            let lm_feature = |name: &str, model: NGramModel| {
                let f = LmFeature::new(name, Arc::new(model) as Arc<dyn LanguageModel>);
                if *normalized {
                    f.normalized()
                } else {
                    f
                }
            };
            for arg in lm {
                let (name, path) = arg
                    .split_once('=')
                    .ok_or_else(|| Failure::Usage(format!("--lm expects NAME=PATH, got `{arg}`")))?;
                let model = load_lm(run, Path::new(path))?;
                annotators.push(Box::new(lm_feature(name, model)));
            }
            for arg in class_lm {
                let parsed = arg.split_once('=').and_then(|(n, rest)| {
                    let (m, c) = rest.split_once(',')?;
                    Some((n, m, c))
                });
                let (name, model_path, classes_path) = parsed.ok_or_else(|| {
                    Failure::Usage(format!("--class-lm expects NAME=MODEL,CLASSES, got `{arg}`"))
                })?;
                let model = load_lm(run, Path::new(model_path))?;
                annotators.push(Box::new(ClassLmFeature {
                    inner: lm_feature(name, model),
                    classes: Arc::new(load_classes(run, Path::new(classes_path))?),
                }));
            }
            if annotators.is_empty() {
                return Err(Failure::Usage(
                    "nothing to annotate: give --edit, --patterns, --lm or --class-lm".into(),
                ));
            }
            let refs: Vec<&dyn FeatureAnnotator> = annotators.iter().map(|a| a.as_ref()).collect();
            annotate_features(&mut lists, &sources, &refs)?;
            run.write(out.as_deref(), &write_nbest(&lists))
        }
        NbestCmd::Rescore {
            nbest,
            weights,
            nbest_out,
            out,
        } => {
            let lists = parse_nbest(&run.read(nbest)?)?;
            let model = parse_weights(&run.read(weights)?)?;
            let best: Vec<TokenSentence> = lists
                .iter()
                .map(|l| linear_rescore(l, &model).1.tokens.clone())
                .collect();
            if let Some(p) = nbest_out {
                let resorted = lists
                    .iter()
                    .map(|l| {
                        let mut hyps = l.hypotheses.clone();
                        for h in &mut hyps {
                            h.model_score = model.score(&h.features);
                        }
                        NBestList::new(l.sentence_id, hyps)
                    })
                    .collect::<gecx::Result<Vec<_>>>()?;
                run.write(Some(p), &write_nbest(&resorted))?;
            }
            run.write(out.as_deref(), &write_corpus(&best))
        }
    }
}

enum LoadedMetric {
    M2(M2Metric),
    Gleu(GleuMetric),
}

impl LoadedMetric {
    fn as_metric(&self) -> &dyn SentenceMetric {
        match self {
            LoadedMetric::M2(m) => m,
            LoadedMetric::Gleu(m) => m,
        }
    }
}

fn tune_inputs(run: &mut Run, data: &TuneData) -> Result<(Vec<NBestList>, LoadedMetric, LinearModel), Failure> {
    let lists = parse_nbest(&run.read(&data.nbest)?)?;
    let metric = match data.metric {
        MetricKind::M2 => {
            let gold = data
                .gold
                .as_deref()
                .ok_or_else(|| Failure::Usage("--metric m2 needs --gold".into()))?;
            LoadedMetric::M2(M2Metric::new(M2Scorer::new(parse_m2(&run.read(gold)?)?)))
        }
        MetricKind::Gleu => {
            let src = data
                .src
                .as_deref()
                .filter(|_| !data.refs.is_empty())
                .ok_or_else(|| Failure::Usage("--metric gleu needs --src and --ref".into()))?;
            let sources = corpus(run, src)?;
            let refs = references(run, &data.refs, sources.len())?;
            LoadedMetric::Gleu(GleuMetric::new(sources, &refs, 4, run.seed())?)
        }
    };
    let init = match &data.init {
        Some(p) => parse_weights(&run.read(p)?)?,
        None => LinearModel::new(),
    };
    Ok((lists, metric, init))
}

fn tuned(run: &mut Run, data: &TuneData, model: &LinearModel, score: f64) -> Result<(), Failure> {
    eprintln!("tuning score: {score:.6}");
    run.write(data.out.as_deref(), &write_weights(model))
}

fn with_folds<F>(lists: &[NBestList], folds: Option<usize>, tune: F) -> Result<LinearModel, Failure>
where
    F: Fn(&[NBestList]) -> gecx::Result<LinearModel>,
{
    Ok(match folds {
        Some(k) => cross_validated_tune(lists, k, tune)?.0,
        None => tune(lists)?,
    })
}

fn tune(run: &mut Run, cmd: &TuneCmd) -> Result<(), Failure> {
    match cmd {
        TuneCmd::Mert {
            data,
            directions,
            max_iterations,
            folds,
        } => {
            let (lists, metric, init) = tune_inputs(run, data)?;
            let metric = TuningMetric::Decomposable(metric.as_metric());
            let cfg = MertConfig {
                random_directions: *directions,
                max_iterations: *max_iterations,
                seed: run.seed(),
                ..MertConfig::default()
            };
            let model = with_folds(&lists, *folds, |l| Ok(mert_tune(l, &metric, &init, &cfg)?.model))?;
            let score = gecx::nbest::evaluate_model(&lists, &metric, &model)?;
            tuned(run, data, &model, score)
        }
        TuneCmd::Mira { data, c, epochs, folds } => {
            let (lists, metric, init) = tune_inputs(run, data)?;
            let metric = TuningMetric::Decomposable(metric.as_metric());
            let cfg = MiraConfig {
                c: *c,
                epochs: *epochs,
                seed: run.seed(),
            };
            let model = with_folds(&lists, *folds, |l| Ok(mira_tune(l, &metric, &init, &cfg)?.model))?;
            let score = gecx::nbest::evaluate_model(&lists, &metric, &model)?;
            tuned(run, data, &model, score)
        }
        TuneCmd::Grid { data, feature, grid } => {
            let (lists, metric, init) = tune_inputs(run, data)?;
            let metric = TuningMetric::Decomposable(metric.as_metric());
            let grid: &[f64] = if grid.is_empty() { &DEFAULT_LM_GRID } else { grid };
            let r = grid_search_lm_weight(&lists, &metric, &init, feature, grid)?;
            for (v, s) in &r.scores {
                eprintln!("{feature}={v}\t{s:.6}");
            }
            let default = match data.metric {
                MetricKind::M2 => M2_LM_WEIGHT,
                MetricKind::Gleu => GLEU_LM_WEIGHT,
            };
            println!("selected {feature} weight: {} (published default {default})", r.value);
            tuned(run, data, &r.model, r.score)
        }
    }
}

fn pipeline(run: &mut Run, cmd: &PipelineCmd) -> Result<(), Failure> {
    let PipelineCmd::Run { config, io, trace } = cmd;
    let cfg = PipelineConfig::from_toml(&run.read(config)?)?;
    let base = config.parent().unwrap_or(Path::new(""));
    for p in cfg.input_paths() {
        run.note_input(&base.join(p))?;
    }
    let stages = cfg.build(base)?;
    let input = corpus(run, &io.input)?;
    let out = pipeline_run(&stages, &input)?;
    let trace_dir = trace.clone().or_else(|| {
        io.out.as_ref().map(|o| {
            let mut name = o.as_os_str().to_owned();
            name.push(".trace");
            PathBuf::from(name)
        })
    });
    if let Some(dir) = trace_dir {
        for (i, stage) in out.traces.iter().enumerate() {
            run.write(Some(&dir.join(format!("stage{i}.txt"))), &write_corpus(stage))?;
        }
    }
    run.write(io.out.as_deref(), &write_corpus(&out.output))
}

fn spell(run: &mut Run, cmd: &SpellCmd) -> Result<(), Failure> {
    let SpellCmd::Run {
        train,
        merges,
        lexicon,
        bpe,
        char_lm,
        word_lm,
        lambda_char,
        lambda_lm,
        tau,
        io,
    } = cmd;
    let mut checker = match train {
        Some(p) => {
            let clean = corpus(run, p)?;
            SpellChecker::from_corpus(&clean, *merges, 4, 3)?
        }
        None => {
            let need = |p: &Option<PathBuf>| p.clone().expect("clap requires model files");
            let lex = Lexicon::from_text(&run.read(&need(lexicon))?)?;
            let codes = BpeModel::from_text(&run.read(&need(bpe))?)?;
            let chars = load_lm(run, &need(char_lm))?;
            let words = load_lm(run, &need(word_lm))?;
            SpellChecker::new(Arc::new(lex), Arc::new(codes), Arc::new(chars), Arc::new(words))
        }
    };
    checker.lambda_char = *lambda_char;
    checker.lambda_lm = *lambda_lm;
    checker.tau = *tau;
    let input = corpus(run, &io.input)?;
    let stage = gecx::pipeline::Stage::Spell(Arc::new(checker));
    let out = pipeline_run(&[stage], &input)?;
    run.write(io.out.as_deref(), &write_corpus(&out.output))
}

fn human(run: &mut Run, cmd: &HumanCmd) -> Result<(), Failure> {
    let HumanCmd::Compare {
        system,
        human,
        gold,
        src,
        refs,
        report: out,
    } = cmd;
    let (mean, sd, per) = match (human, gold, src) {
        (Some(h), _, _) => (*h, None, Vec::new()),
        (None, Some(g), _) => {
            let g = parse_m2(&run.read(g)?)?;
            let scores: Vec<f64> = m2_leave_one_out_scores(&g, gecx::metrics::DEFAULT_MAX_UNCHANGED, 0.5)?
                .into_iter()
                .map(|s| 100.0 * s)
                .collect();
            let loo = human_leave_one_out(&scores)?;
            (loo.mean, Some(loo.sd), scores)
        }
        (None, None, Some(s)) => {
            let sources = corpus(run, s)?;
            let refs = references(run, refs, sources.len())?;
            let cfg = GleuConfig {
                seed: run.seed(),
                ..GleuConfig::default()
            };
            let scores: Vec<f64> = gleu_leave_one_out_scores(&sources, &refs, &cfg)?
                .into_iter()
                .map(|s| 100.0 * s)
                .collect();
            let loo = human_leave_one_out(&scores)?;
            (loo.mean, Some(loo.sd), scores)
        }
        (None, None, None) => {
            return Err(Failure::Usage("give --human, --gold, or --src with --ref".into()));
        }
    };
    let ratio = human_ratio(*system, mean)?;
    let mut human_text = format!("System      : {system:.2}\nHuman mean  : {mean:.2}\n");
    let mut kv = format!("system\t{system:.4}\nhuman_mean\t{mean:.4}\n");
    if let Some(sd) = sd {
        human_text.push_str(&format!("Human sd    : {sd:.2}\n"));
        kv.push_str(&format!("human_sd\t{sd:.4}\n"));
        for (a, s) in per.iter().enumerate() {
            kv.push_str(&format!("annotator_{a}\t{s:.4}\n"));
        }
    }
    human_text.push_str(&format!("Ratio       : {ratio:.2}%\n"));
    kv.push_str(&format!("ratio\t{ratio:.4}\n"));
    report(run, &human_text, &kv, out)
}
