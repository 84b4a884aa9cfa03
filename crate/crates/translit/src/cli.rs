//! The `translit` command-line tool.
//!
//! Exit codes: 0 on success, 1 for usage errors (bad flags, missing
//! arguments), 2 for data and validation errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use translit_core::deromanizer::{
    decode_chars, encode_chars, evaluate_deromanization, make_training_pairs, train_deromanizer, CharEncodingConfig,
    DeromanizerConfig, DeromanizerModel, TrainingPair,
};
use translit_core::metrics::{
    char_overlap, paired_bootstrap, type_count, BleuConfig, BootstrapConfig, ChrfConfig, Metric,
};
use translit_core::pipeline::{
    corpus_stats, derom_ablation, language_tag, mix_corpora, relative_change_pct, tag_line, MixtureSpec, ParallelCorpus,
};
use translit_core::romanizer::{
    deromanize_rule_based, is_reversible, romanize, MappingTable, Mode, Passthrough, TableOptions,
};
use translit_core::subword::{avg_subwords_per_sentence, segment, segment_pieces, train_bpe, SubwordVocab};
use translit_core::vocabtransfer::{remap_embeddings, reuse_parent_vocab, transfer_vocab, TransferReport};

use crate::error::{CliError, Result};
use crate::formats::{load_table, read_embeddings, write_embeddings, EmbeddingFormat};
use crate::io::{
    for_each_line, open_output, read_json, read_lines, read_parallel, read_tsv_pairs, write_json, write_parallel,
};

#[derive(Debug, Parser)]
#[command(
    name = "translit",
    version,
    about = "Romanization, deromanization, subword and evaluation tools"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Romanize one sentence per line.
    Romanize(RomanizeArgs),
    /// Recover the original script, with a trained model or by inverting a table.
    #[command(alias = "derom-apply")]
    Deromanize(DeromanizeArgs),
    /// Train a deromanization model.
    DeromTrain(DeromTrainArgs),
    /// Score a model on (romanized, original) pairs with chrF.
    DeromEval(DeromEvalArgs),
    /// Write text as space-separated characters with a space sentinel.
    DeromEncode(CharArgs),
    /// Undo `derom-encode`.
    DeromDecode(CharArgs),
    /// Train a BPE vocabulary.
    BpeTrain(BpeTrainArgs),
    /// Segment text into subword pieces.
    BpeSegment(BpeSegmentArgs),
    /// Average subwords per sentence before and after romanization (TSV).
    BpeStats(BpeStatsArgs),
    /// Map a child vocabulary onto parent positions.
    TransferVocab(TransferArgs),
    /// Give each child piece the parent embedding row it inherits.
    RemapEmbeddings(RemapArgs),
    /// Corpus-level scoring and significance testing.
    Score(ScoreArgs),
    /// Paired bootstrap resampling between two systems.
    Bootstrap(BootstrapArgs),
    /// Type counts, character overlap and corpus statistics.
    Stats(StatsArgs),
    /// Prefix source lines with a target-language tag such as `<2de>`.
    Tag(TagArgs),
    /// Build a parent/child finetuning mixture.
    Mix(MixArgs),
    /// Deromanization quality against training-data size.
    Ablate(AblateArgs),
}

fn parse_mode(s: &str) -> std::result::Result<Mode, String> {
    s.parse::<Mode>().map_err(|e| e.to_string())
}

fn parse_char(s: &str) -> std::result::Result<char, String> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(format!("{s:?} is not a single character")),
    }
}

#[derive(Debug, Args)]
pub struct RomanizeArgs {
    /// Table file or bundled table name.
    #[arg(long)]
    pub table: String,
    #[arg(long, value_parser = parse_mode)]
    pub mode: Mode,
    /// Copy unmapped characters even if the table asks for an error.
    #[arg(long)]
    pub best_effort: bool,
    /// Refuse to run unless the table is reversible in this mode.
    #[arg(long)]
    pub check_reversible: bool,
    #[arg(long = "in", default_value = "-")]
    pub input: PathBuf,
    #[arg(long, default_value = "-")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DeromanizeArgs {
    /// Trained model (JSON).
    #[arg(long, conflicts_with_all = ["table", "mode"], required_unless_present = "table")]
    pub model: Option<PathBuf>,
    /// Invert this table instead of using a model.
    #[arg(long, requires = "mode")]
    pub table: Option<String>,
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<Mode>,
    /// With `--table`: decode even if the table is not reversible, copying
    /// undecodable spans.
    #[arg(long)]
    pub best_effort: bool,
    #[arg(long = "in", default_value = "-")]
    pub input: PathBuf,
    #[arg(long, default_value = "-")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DeromConfigArgs {
    #[arg(long, default_value_t = 5)]
    pub order: usize,
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 8)]
    pub beam: usize,
}

impl DeromConfigArgs {
    fn config(&self) -> DeromanizerConfig {
        DeromanizerConfig {
            order: self.order,
            alpha: self.alpha,
            lambda: self.lambda,
            beam: self.beam,
        }
    }
}

#[derive(Debug, Args)]
pub struct DeromTrainArgs {
    #[arg(long)]
    pub table: String,
    #[arg(long, value_parser = parse_mode)]
    pub mode: Mode,
    /// Original-script sentences, romanized with the table to make pairs.
    #[arg(long = "in", required_unless_present = "pairs", conflicts_with = "pairs")]
    pub input: Option<PathBuf>,
    /// Ready-made `romanized<TAB>original` pairs; re-aligned with the table.
    #[arg(long)]
    pub pairs: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub config: DeromConfigArgs,
}

#[derive(Debug, Args)]
pub struct DeromEvalArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// `romanized<TAB>original` pairs.
    #[arg(long)]
    pub test: PathBuf,
    /// Include per-sentence scores.
    #[arg(long)]
    pub segments: bool,
}

#[derive(Debug, Args)]
pub struct CharArgs {
    #[arg(long, default_value = "\u{2300}", value_parser = parse_char)]
    pub sentinel: char,
    #[arg(long = "in", default_value = "-")]
    pub input: PathBuf,
    #[arg(long, default_value = "-")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BpeTrainArgs {
    #[arg(long)]
    pub size: usize,
    #[arg(long, default_value_t = 0.9995)]
    pub coverage: f64,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BpeSegmentArgs {
    #[arg(long)]
    pub vocab: PathBuf,
    /// Print piece ids instead of pieces.
    #[arg(long)]
    pub ids: bool,
    #[arg(long = "in", default_value = "-")]
    pub input: PathBuf,
    #[arg(long, default_value = "-")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BpeStatsArgs {
    /// Vocabulary for the original-script text.
    #[arg(long)]
    pub vocab: PathBuf,
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Also romanize the corpus in both modes with this table.
    #[arg(long)]
    pub table: Option<String>,
    /// Vocabulary for the romanized text (defaults to `--vocab`).
    #[arg(long, requires = "table")]
    pub rom_vocab: Option<PathBuf>,
    #[arg(long, default_value = "-")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TransferArgs {
    #[arg(long)]
    pub parent: PathBuf,
    /// Child vocabulary to place into the parent.
    #[arg(long, required_unless_present = "reuse")]
    pub child: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Keep the parent vocabulary and report what the child corpus lacks.
    #[arg(long, requires = "corpus", conflicts_with = "child")]
    pub reuse: bool,
    /// Child-language corpus (with `--reuse`).
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long, default_value = "-")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RemapArgs {
    /// Parent embedding matrix.
    #[arg(long)]
    pub embeddings: PathBuf,
    /// Transfer report from `transfer-vocab`.
    #[arg(long)]
    pub report: PathBuf,
    #[arg(long, value_enum, default_value_t = EmbeddingFormat::Auto)]
    pub format: EmbeddingFormat,
    /// Where to write `piece<TAB>row` lines.
    #[arg(long, default_value = "-")]
    pub map_out: PathBuf,
    /// Also write the child matrix, one inherited row per child piece.
    #[arg(long)]
    pub child_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[command(subcommand)]
    pub command: ScoreCommand,
}

#[derive(Debug, Subcommand)]
pub enum ScoreCommand {
    Chrf(ScoreFiles),
    Bleu(ScoreFiles),
    Bootstrap(BootstrapArgs),
}

#[derive(Debug, Args)]
pub struct ScoreFiles {
    #[arg(long)]
    pub hyp: PathBuf,
    #[arg(long = "ref")]
    pub reference: PathBuf,
    /// Print the JSON report instead of a single number.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricName {
    Chrf,
    Bleu,
}

impl MetricName {
    fn metric(self) -> Metric {
        match self {
            MetricName::Chrf => Metric::Chrf(ChrfConfig::default()),
            MetricName::Bleu => Metric::Bleu(BleuConfig::default()),
        }
    }
}

#[derive(Debug, Args)]
pub struct BootstrapArgs {
    #[arg(long)]
    pub sys_a: PathBuf,
    #[arg(long)]
    pub sys_b: PathBuf,
    #[arg(long = "ref")]
    pub reference: PathBuf,
    #[arg(long, value_enum, default_value_t = MetricName::Bleu)]
    pub metric: MetricName,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 12345)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(subcommand)]
    pub command: StatsCommand,
}

#[derive(Debug, Subcommand)]
pub enum StatsCommand {
    /// Distinct whitespace-delimited tokens.
    Types {
        #[arg(long = "in", default_value = "-")]
        input: PathBuf,
    },
    /// chrF between two whole corpora; `--a` is scored against `--b`.
    Overlap {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Sentence, token, type and subword counts, optionally per romanization mode.
    Corpus {
        #[arg(long = "in", default_value = "-")]
        input: PathBuf,
        #[arg(long)]
        vocab: Option<PathBuf>,
        #[arg(long)]
        table: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct TagArgs {
    /// Target language code.
    #[arg(long)]
    pub lang: String,
    /// Input is `source<TAB>target`; only the source column is tagged.
    #[arg(long)]
    pub tsv: bool,
    #[arg(long = "in", default_value = "-")]
    pub input: PathBuf,
    #[arg(long, default_value = "-")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct MixArgs {
    /// Parent corpus: one TSV file or a source and a target file.
    #[arg(long, num_args = 1..=2, required = true)]
    pub parent: Vec<PathBuf>,
    /// Child corpus: one TSV file or a source and a target file.
    #[arg(long, num_args = 1..=2, required = true)]
    pub child: Vec<PathBuf>,
    #[arg(long, default_value_t = 250_000)]
    pub parent_take: usize,
    #[arg(long, default_value_t = 650_000)]
    pub total: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// One TSV file or a source and a target file.
    #[arg(long, num_args = 1..=2, default_value = "-")]
    pub out: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AblateArgs {
    #[arg(long)]
    pub table: String,
    #[arg(long, value_parser = parse_mode)]
    pub mode: Mode,
    /// Original-script sentences.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "0.01,0.1,1")]
    pub fractions: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
    pub seeds: Vec<u64>,
    /// Write the JSON report instead of TSV rows.
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value = "-")]
    pub out: PathBuf,
    #[command(flatten)]
    pub config: DeromConfigArgs,
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("translit: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: Command) -> Result<()> {
    match command {
        Command::Romanize(a) => cmd_romanize(a),
        Command::Deromanize(a) => cmd_deromanize(a),
        Command::DeromTrain(a) => cmd_derom_train(a),
        Command::DeromEval(a) => cmd_derom_eval(a),
        Command::DeromEncode(a) => cmd_chars(a, true),
        Command::DeromDecode(a) => cmd_chars(a, false),
        Command::BpeTrain(a) => cmd_bpe_train(a),
        Command::BpeSegment(a) => cmd_bpe_segment(a),
        Command::BpeStats(a) => cmd_bpe_stats(a),
        Command::TransferVocab(a) => cmd_transfer(a),
        Command::RemapEmbeddings(a) => cmd_remap(a),
        Command::Score(a) => match a.command {
            ScoreCommand::Chrf(f) => cmd_score(f, Metric::Chrf(ChrfConfig::default())),
            ScoreCommand::Bleu(f) => cmd_score(f, Metric::Bleu(BleuConfig::default())),
            ScoreCommand::Bootstrap(b) => cmd_bootstrap(b),
        },
        Command::Bootstrap(a) => cmd_bootstrap(a),
        Command::Stats(a) => cmd_stats(a.command),
        Command::Tag(a) => cmd_tag(a),
        Command::Mix(a) => cmd_mix(a),
        Command::Ablate(a) => cmd_ablate(a),
    }
}

/// Runs `f` on every input line and writes its result as one output line.
fn map_lines(input: &Path, output: &Path, mut f: impl FnMut(usize, &str) -> Result<String>) -> Result<()> {
    let mut out = open_output(output)?;
    for_each_line(input, |number, line| {
        let mapped = f(number, line)?;
        writeln!(out, "{mapped}").map_err(|e| CliError::io(output, e))
    })?;
    out.flush().map_err(|e| CliError::io(output, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut out = open_output(path)?;
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::io(path, e))
}

fn check_reversible(table: &MappingTable, mode: Mode, verbose: bool) -> Result<()> {
    let report = is_reversible(table, mode);
    if verbose {
        eprintln!(
            "{}",
            serde_json::to_string(&report).map_err(|source| CliError::Json {
                path: "<report>".into(),
                source
            })?
        );
    }
    if report.reversible() {
        Ok(())
    } else {
        Err(translit_core::Error::NotReversible {
            witness: report.witness,
        }
        .into())
    }
}

fn cmd_romanize(a: RomanizeArgs) -> Result<()> {
    let mut table = load_table(&a.table)?;
    if a.check_reversible {
        check_reversible(&table, a.mode, true)?;
    }
    if a.best_effort {
        let options = TableOptions {
            passthrough: Passthrough::CopyUnmapped,
            ..table.options()
        };
        table = table.with_options(options);
    }
    map_lines(&a.input, &a.out, |_, line| Ok(romanize(line, &table, a.mode)?))
}

fn cmd_deromanize(a: DeromanizeArgs) -> Result<()> {
    if let Some(model_path) = &a.model {
        let model: DeromanizerModel = read_json(model_path)?;
        model.config.validate()?;
        let decoder = model.decoder();
        return map_lines(&a.input, &a.out, |_, line| Ok(decoder.decode(line)));
    }
    let (Some(spec), Some(mode)) = (&a.table, a.mode) else {
        return Err(CliError::Usage(
            "either --model or --table with --mode is required".into(),
        ));
    };
    let table = load_table(spec)?;
    if !a.best_effort {
        check_reversible(&table, mode, false)?;
    }
    map_lines(&a.input, &a.out, |_, line| {
        Ok(deromanize_rule_based(line, &table, mode, a.best_effort)?)
    })
}

fn cmd_derom_train(a: DeromTrainArgs) -> Result<()> {
    let table = load_table(&a.table)?;
    let pairs = match (&a.input, &a.pairs) {
        (Some(input), _) => make_training_pairs(&read_lines(input)?, &table, a.mode)?,
        (None, Some(path)) => read_tsv_pairs(path)?
            .into_iter()
            .map(|(r, o)| TrainingPair::unaligned(&r, &o))
            .collect(),
        (None, None) => return Err(CliError::Usage("--in or --pairs is required".into())),
    };
    let model = train_deromanizer(&pairs, a.config.config(), Some((&table, a.mode)))?;
    write_json(&a.out, &model)
}

fn cmd_derom_eval(a: DeromEvalArgs) -> Result<()> {
    let model: DeromanizerModel = read_json(&a.model)?;
    model.config.validate()?;
    let pairs: Vec<TrainingPair> = read_tsv_pairs(&a.test)?
        .into_iter()
        .map(|(r, o)| TrainingPair::unaligned(&r, &o))
        .collect();
    let mut report = evaluate_deromanization(&model, &pairs);
    if !a.segments {
        report.segments.clear();
    }
    write_json(Path::new("-"), &report)
}

fn cmd_chars(a: CharArgs, encode: bool) -> Result<()> {
    let cfg = CharEncodingConfig::new(a.sentinel)?;
    map_lines(&a.input, &a.out, |_, line| {
        Ok(if encode {
            encode_chars(line, &cfg)?
        } else {
            decode_chars(line, &cfg)?
        })
    })
}

fn cmd_bpe_train(a: BpeTrainArgs) -> Result<()> {
    let corpus = read_lines(&a.input)?;
    let vocab = train_bpe(&corpus, a.size, a.coverage)?;
    if vocab.is_truncated() {
        eprintln!(
            "translit: warning: merges ran out at {} pieces ({} requested)",
            vocab.len(),
            vocab.requested_size()
        );
    }
    write_json(&a.out, &vocab)
}

fn cmd_bpe_segment(a: BpeSegmentArgs) -> Result<()> {
    let vocab: SubwordVocab = read_json(&a.vocab)?;
    map_lines(&a.input, &a.out, |_, line| {
        Ok(if a.ids {
            segment(line, &vocab)
                .iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(" ")
        } else {
            segment_pieces(line, &vocab).join(" ")
        })
    })
}

fn cmd_bpe_stats(a: BpeStatsArgs) -> Result<()> {
    let vocab: SubwordVocab = read_json(&a.vocab)?;
    let corpus = read_lines(&a.input)?;
    let base = avg_subwords_per_sentence(&corpus, &vocab)?;
    let mut out = String::from("variant\tsentences\tavg_subwords\trel_change_pct\n");
    out.push_str(&format!("orig\t{}\t{base:.4}\t0.00\n", corpus.len()));
    if let Some(spec) = &a.table {
        let table = load_table(spec)?;
        let rom_vocab: SubwordVocab = match &a.rom_vocab {
            Some(path) => read_json(path)?,
            None => vocab.clone(),
        };
        for mode in Mode::ALL {
            let lines = corpus
                .iter()
                .map(|l| romanize(l, &table, mode))
                .collect::<translit_core::Result<Vec<_>>>()?;
            let avg = avg_subwords_per_sentence(&lines, &rom_vocab)?;
            let change = relative_change_pct(base, avg).map_or_else(|| "NA".to_string(), |c| format!("{c:.2}"));
            out.push_str(&format!("{mode}\t{}\t{avg:.4}\t{change}\n", lines.len()));
        }
    }
    write_text(&a.out, &out)
}

fn cmd_transfer(a: TransferArgs) -> Result<()> {
    let parent: SubwordVocab = read_json(&a.parent)?;
    let report: TransferReport = if a.reuse {
        let corpus_path = a
            .corpus
            .as_ref()
            .ok_or_else(|| CliError::Usage("--reuse needs --corpus".into()))?;
        reuse_parent_vocab(&parent, &read_lines(corpus_path)?)
    } else {
        let child_path = a
            .child
            .as_ref()
            .ok_or_else(|| CliError::Usage("--child is required".into()))?;
        let child: SubwordVocab = read_json(child_path)?;
        transfer_vocab(&parent, &child, a.seed)?
    };
    write_json(&a.out, &report)
}

fn cmd_remap(a: RemapArgs) -> Result<()> {
    let parent = read_embeddings(&a.embeddings, a.format)?;
    let report: TransferReport = read_json(&a.report)?;
    let (_, map) = remap_embeddings(&parent, &report)?;
    let mut text = String::new();
    for (piece, row) in &map.entries {
        text.push_str(&format!("{piece}\t{row}\n"));
    }
    write_text(&a.map_out, &text)?;
    if let Some(path) = &a.child_out {
        write_embeddings(path, &map.gather(&parent), a.format)?;
    }
    Ok(())
}

fn cmd_score(f: ScoreFiles, metric: Metric) -> Result<()> {
    let hyps = read_lines(&f.hyp)?;
    let refs = read_lines(&f.reference)?;
    let mut report = metric.corpus(&hyps, &refs)?;
    if f.json {
        report.segments.clear();
        write_json(Path::new("-"), &report)
    } else {
        write_text(Path::new("-"), &format!("{}\t{:.4}\n", report.metric, report.score))
    }
}

fn cmd_bootstrap(a: BootstrapArgs) -> Result<()> {
    let sys_a = read_lines(&a.sys_a)?;
    let sys_b = read_lines(&a.sys_b)?;
    let refs = read_lines(&a.reference)?;
    let cfg = BootstrapConfig {
        samples: a.samples,
        alpha: a.alpha,
        seed: a.seed,
    };
    let result = paired_bootstrap(&sys_a, &sys_b, &refs, &a.metric.metric(), &cfg)?;
    write_json(Path::new("-"), &result)
}

#[derive(Serialize)]
struct Count {
    types: usize,
}

#[derive(Serialize)]
struct Overlap {
    metric: &'static str,
    score: f64,
}

fn cmd_stats(command: StatsCommand) -> Result<()> {
    match command {
        StatsCommand::Types { input } => {
            let lines = read_lines(&input)?;
            write_json(
                Path::new("-"),
                &Count {
                    types: type_count(&lines),
                },
            )
        }
        StatsCommand::Overlap { a, b } => {
            let score = char_overlap(&read_lines(&a)?, &read_lines(&b)?, &ChrfConfig::default());
            write_json(Path::new("-"), &Overlap { metric: "chrF", score })
        }
        StatsCommand::Corpus { input, vocab, table } => {
            let lines = read_lines(&input)?;
            let vocab: Option<SubwordVocab> = vocab.as_deref().map(read_json).transpose()?;
            let table = table.as_deref().map(load_table).transpose()?;
            let stats = corpus_stats(&lines, vocab.as_ref(), table.as_ref())?;
            write_json(Path::new("-"), &stats)
        }
    }
}

fn cmd_tag(a: TagArgs) -> Result<()> {
    let tag = language_tag(&a.lang)?;
    let input = a.input.clone();
    map_lines(&a.input, &a.out, |number, line| {
        if !a.tsv {
            return Ok(tag_line(&tag, line));
        }
        match line.split_once('\t') {
            Some((source, target)) if !target.contains('\t') => Ok(format!("{}\t{target}", tag_line(&tag, source))),
            _ => Err(CliError::data(
                &input,
                number,
                format!("expected two tab-separated columns in {line:?}"),
            )),
        }
    })
}

fn cmd_mix(a: MixArgs) -> Result<()> {
    let (ps, pt) = read_parallel(&a.parent)?;
    let (cs, ct) = read_parallel(&a.child)?;
    let spec = MixtureSpec {
        parent_take: a.parent_take,
        total_target: a.total,
        shuffle_seed: a.seed,
    };
    let mixed = mix_corpora(&ParallelCorpus::new(ps, pt)?, &ParallelCorpus::new(cs, ct)?, &spec)?;
    write_parallel(&a.out, &mixed.source, &mixed.target)
}

fn cmd_ablate(a: AblateArgs) -> Result<()> {
    let table = load_table(&a.table)?;
    let corpus = read_lines(&a.input)?;
    let report = derom_ablation(&corpus, &table, a.mode, &a.fractions, &a.seeds, a.config.config())?;
    if a.json {
        write_json(&a.out, &report)
    } else {
        write_text(&a.out, &report.to_tsv())
    }
}
