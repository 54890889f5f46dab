use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(name = "gecx", version, about = "Grammatical error correction toolkit")]
pub struct Cli {
    /// Seed for every random choice (GLEU sampling, MERT directions, MIRA order).
    #[arg(long, global = true, env = "GECX_SEED", default_value_t = 42)]
    pub seed: u64,
    /// Worker threads for per-sentence work; defaults to all cores.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Where to write the run manifest; defaults to `<output>.manifest.json`,
    /// or stderr when output goes to stdout.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum Command {
    /// Split raw lines into space-separated tokens.
    Tokenize(InOut),
    #[command(subcommand)]
    Truecase(TruecaseCmd),
    #[command(subcommand)]
    Bpe(BpeCmd),
    #[command(subcommand)]
    Lm(LmCmd),
    #[command(subcommand)]
    M2(M2Cmd),
    #[command(subcommand)]
    Gleu(GleuCmd),
    #[command(subcommand)]
    Nbest(NbestCmd),
    #[command(subcommand)]
    Tune(TuneCmd),
    #[command(subcommand)]
    Pipeline(PipelineCmd),
    #[command(subcommand)]
    Spell(SpellCmd),
    #[command(subcommand)]
    Human(HumanCmd),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Tokenize(_) => "tokenize",
            Command::Truecase(TruecaseCmd::Train { .. }) => "truecase train",
            Command::Truecase(TruecaseCmd::Apply { .. }) => "truecase apply",
            Command::Bpe(BpeCmd::Learn { .. }) => "bpe learn",
            Command::Bpe(BpeCmd::Apply { .. }) => "bpe apply",
            Command::Lm(LmCmd::Train { .. }) => "lm train",
            Command::Lm(LmCmd::Score { .. }) => "lm score",
            Command::Lm(LmCmd::Ppl { .. }) => "lm ppl",
            Command::M2(M2Cmd::Score { .. }) => "m2 score",
            Command::Gleu(GleuCmd::Score { .. }) => "gleu score",
            Command::Nbest(NbestCmd::Annotate { .. }) => "nbest annotate",
            Command::Nbest(NbestCmd::Rescore { .. }) => "nbest rescore",
            Command::Tune(TuneCmd::Mert { .. }) => "tune mert",
            Command::Tune(TuneCmd::Mira { .. }) => "tune mira",
            Command::Tune(TuneCmd::Grid { .. }) => "tune grid",
            Command::Pipeline(PipelineCmd::Run { .. }) => "pipeline run",
            Command::Spell(SpellCmd::Run { .. }) => "spell run",
            Command::Human(HumanCmd::Compare { .. }) => "human compare",
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct InOut {
    /// Input text, one sentence per line.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum TruecaseCmd {
    /// Count surface casings in a tokenized corpus.
    Train {
        #[arg(long = "in")]
        input: PathBuf,
        /// Model file (`surface count` lines).
        #[arg(long)]
        model: PathBuf,
    },
    /// Restore the most frequent casing of each token.
    Apply {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        io: InOut,
    },
}

#[derive(Debug, Subcommand, Serialize)]
pub enum BpeCmd {
    /// Learn merge operations from a tokenized corpus.
    Learn {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        merges: usize,
        /// Codes file, one merge per line.
        #[arg(long)]
        codes: PathBuf,
    },
    /// Segment a corpus, or join segments back with `--undo`.
    Apply {
        /// Required unless `--undo` is given.
        #[arg(long, required_unless_present = "undo")]
        codes: Option<PathBuf>,
        #[arg(long)]
        undo: bool,
        #[command(flatten)]
        io: InOut,
    },
}

#[derive(Debug, Subcommand, Serialize)]
pub enum LmCmd {
    /// Train an interpolated Kneser-Ney model and write it as ARPA.
    Train {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = gecx::lm::DEFAULT_WORD_ORDER)]
        order: usize,
        #[arg(long, default_value_t = gecx::lm::DEFAULT_DISCOUNT)]
        discount: f64,
        /// Train on word classes (`word<TAB>class` file) instead of words.
        #[arg(long)]
        classes: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Per-sentence `logprob<TAB>positions<TAB>normalized`, natural log.
    Score {
        #[arg(long)]
        lm: PathBuf,
        #[arg(long)]
        classes: Option<PathBuf>,
        #[command(flatten)]
        io: InOut,
    },
    /// Corpus perplexity.
    Ppl {
        #[arg(long)]
        lm: PathBuf,
        #[arg(long)]
        classes: Option<PathBuf>,
        #[command(flatten)]
        io: InOut,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct ReportOut {
    /// Also write the `key<TAB>value` report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum M2Cmd {
    /// Score a corrected corpus against M2 gold annotations.
    Score {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        hyp: PathBuf,
        #[arg(long, default_value_t = gecx::metrics::DEFAULT_MAX_UNCHANGED)]
        max_unchanged: usize,
        #[arg(long, default_value_t = gecx::metrics::DEFAULT_BETA)]
        beta: f64,
        /// Per-sentence counts as TSV.
        #[arg(long)]
        per_sentence: Option<PathBuf>,
        #[command(flatten)]
        report: ReportOut,
    },
}

#[derive(Debug, Subcommand, Serialize)]
pub enum GleuCmd {
    /// Score a corrected corpus against one or more reference files.
    Score {
        #[arg(long)]
        src: PathBuf,
        /// Reference file, one per annotator; repeat the flag.
        #[arg(long = "ref", required = true)]
        refs: Vec<PathBuf>,
        #[arg(long)]
        hyp: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        /// Reference samples averaged when there are several references.
        #[arg(long, default_value_t = 500)]
        iterations: usize,
        #[command(flatten)]
        report: ReportOut,
    },
}

#[derive(Debug, Subcommand, Serialize)]
pub enum NbestCmd {
    /// Add feature columns to an n-best file.
    Annotate {
        #[arg(long)]
        nbest: PathBuf,
        /// Source sentences indexed by n-best sentence id.
        #[arg(long)]
        src: PathBuf,
        /// Dense edit-operation counts.
        #[arg(long)]
        edit: bool,
        /// Sparse correction patterns over this class file.
        #[arg(long)]
        patterns: Option<PathBuf>,
        /// `NAME=model.arpa`; repeatable.
        #[arg(long)]
        lm: Vec<String>,
        /// `NAME=model.arpa,classes.txt`; repeatable.
        #[arg(long)]
        class_lm: Vec<String>,
        /// LM features are per-position rather than sentence totals.
        #[arg(long)]
        normalized: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pick the best hypothesis of each list under a weight file.
    Rescore {
        #[arg(long)]
        nbest: PathBuf,
        #[arg(long)]
        weights: PathBuf,
        /// Also write the re-sorted n-best lists.
        #[arg(long)]
        nbest_out: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
pub enum MetricKind {
    M2,
    Gleu,
}

#[derive(Debug, Args, Serialize)]
pub struct TuneData {
    #[arg(long)]
    pub nbest: PathBuf,
    #[arg(long, value_enum, default_value_t = MetricKind::M2)]
    pub metric: MetricKind,
    /// M2 gold file (for `--metric m2`).
    #[arg(long)]
    pub gold: Option<PathBuf>,
    /// Sources (for `--metric gleu`).
    #[arg(long)]
    pub src: Option<PathBuf>,
    /// References (for `--metric gleu`); repeatable.
    #[arg(long = "ref")]
    pub refs: Vec<PathBuf>,
    /// Starting weights; absent features start at 0.
    #[arg(long)]
    pub init: Option<PathBuf>,
    /// Tuned weights file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum TuneCmd {
    /// Minimum error rate training by exact line search.
    Mert {
        #[command(flatten)]
        data: TuneData,
        #[arg(long, default_value_t = 8)]
        directions: usize,
        #[arg(long, default_value_t = 100)]
        max_iterations: usize,
        /// Tune on k-1 folds, average the fold models.
        #[arg(long)]
        folds: Option<usize>,
    },
    /// Batch MIRA with hope/fear updates.
    Mira {
        #[command(flatten)]
        data: TuneData,
        #[arg(long, default_value_t = 0.01)]
        c: f64,
        #[arg(long, default_value_t = 10)]
        epochs: usize,
        #[arg(long)]
        folds: Option<usize>,
    },
    /// Grid search over one LM weight (published choices: 0.2 for M2, 0.25 for GLEU).
    Grid {
        #[command(flatten)]
        data: TuneData,
        #[arg(long, default_value = "LM")]
        feature: String,
        /// Comma-separated values; 0, 0.05, ..., 0.5 when omitted.
        #[arg(long, value_delimiter = ',')]
        grid: Vec<f64>,
    },
}

#[derive(Debug, Subcommand, Serialize)]
pub enum PipelineCmd {
    /// Run the stages of a TOML config over a corpus.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        io: InOut,
        /// Per-stage 1-best files; `<out>.trace` when `--out` is given.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand, Serialize)]
pub enum SpellCmd {
    /// Correct out-of-lexicon multi-fragment tokens.
    Run {
        /// Train lexicon, BPE and both LMs from this clean corpus instead
        /// of loading them.
        #[arg(long, conflicts_with_all = ["lexicon", "bpe", "char_lm", "word_lm"])]
        train: Option<PathBuf>,
        #[arg(long, default_value_t = 400)]
        merges: usize,
        #[arg(long, required_unless_present = "train")]
        lexicon: Option<PathBuf>,
        #[arg(long, required_unless_present = "train")]
        bpe: Option<PathBuf>,
        #[arg(long, required_unless_present = "train")]
        char_lm: Option<PathBuf>,
        #[arg(long, required_unless_present = "train")]
        word_lm: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        lambda_char: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda_lm: f64,
        #[arg(long, default_value_t = gecx::pipeline::DEFAULT_TAU)]
        tau: f64,
        #[command(flatten)]
        io: InOut,
    },
}

#[derive(Debug, Subcommand, Serialize)]
pub enum HumanCmd {
    /// Compare a system score with human performance.
    ///
    /// Either give `--human` directly, or let it be estimated leave-one-out
    /// from a multi-annotator M2 file (`--gold`) or from several GLEU
    /// references (`--src` and `--ref`).
    Compare {
        #[arg(long)]
        system: f64,
        #[arg(long, conflicts_with_all = ["gold", "src"])]
        human: Option<f64>,
        #[arg(long, conflicts_with = "src")]
        gold: Option<PathBuf>,
        #[arg(long, requires = "refs")]
        src: Option<PathBuf>,
        #[arg(long = "ref")]
        refs: Vec<PathBuf>,
        #[command(flatten)]
        report: ReportOut,
    },
}
