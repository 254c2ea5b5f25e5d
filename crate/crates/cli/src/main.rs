use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use nli_forge::dataset::{read_dataset, read_raw, uniqueness_violations, validate_raw, write_dataset};
use nli_forge::diagnostics::{validate_diagnostics, CountManifest};
use nli_forge::fragments::{generate_fragment, Category, EntityLexicon};
use nli_forge::hans::{generate_hans, TemplateSet};
use nli_forge::heuristics::{scan_corpus, Granularity};
use nli_forge::numeric::generate_numeric_dataset;
use nli_forge::resources::{
    digest, CharFrequency, DistractorSet, EntityList, PinyinTable, QuantLexicon, ResourceText, SubstitutionLexicon,
    Vocabulary, SPELLING_FREQ_RANGE,
};
use nli_forge::score::{agreement, blank_sheet, sample_for_annotation, score, AnnotationSheet, PredictionFile};
use nli_forge::stress::{
    annotate, parse_annotations, perturb_distraction, perturb_spelling, perturb_substitution, write_annotations,
    DistractionCondition, PerturbKind, SpellingTables, DEFAULT_CONNECTOR,
};
use nli_forge::Dataset;

/// Generate, check and score Chinese NLI challenge data.
#[derive(Parser)]
#[command(name = "nli-forge", version)]
struct Cli {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Directory searched for resource files before the bundled copies.
    #[arg(long, global = true, env = "NLI_FORGE_RESOURCES")]
    resources: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SeedArg {
    /// Master seed; drawn at random and printed when omitted.
    #[arg(long)]
    seed: Option<u64>,
}

impl SeedArg {
    fn resolve(&self) -> u64 {
        self.seed.unwrap_or_else(|| {
            let s = rand::random::<u64>();
            eprintln!("seed: {s}");
            s
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Fill HANS-style templates from a vocabulary.
    GenHans {
        #[arg(long)]
        templates: Option<PathBuf>,
        #[arg(long)]
        vocab: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        per_template: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long)]
        out: PathBuf,
        /// Also write token annotations for the generated pairs.
        #[arg(long)]
        annotations_out: Option<PathBuf>,
    },
    /// Apply a stress-test perturbation to an existing dataset.
    Perturb {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        input: PathBuf,
        /// Token annotations, required for antonym and synonym.
        #[arg(long)]
        annotations: Option<PathBuf>,
        /// Distraction condition; all four when omitted.
        #[arg(long)]
        condition: Option<String>,
        #[arg(long)]
        distractors: Option<PathBuf>,
        #[arg(long, default_value = DEFAULT_CONNECTOR)]
        connector: String,
        /// Substitution lexicon (antonyms.tsv or synonyms.tsv by default).
        #[arg(long)]
        lexicon: Option<PathBuf>,
        #[arg(long)]
        pinyin: Option<PathBuf>,
        #[arg(long)]
        char_freq: Option<PathBuf>,
        /// Keep at most this many outputs.
        #[arg(long)]
        limit: Option<usize>,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Derive numeric-reasoning triples from seed sentences.
    GenNumeric {
        /// One sentence per line.
        #[arg(long)]
        seeds: Option<PathBuf>,
        #[arg(long)]
        quantifiers: Option<PathBuf>,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate one semantic fragment.
    GenFragments {
        #[arg(long)]
        category: String,
        #[arg(long)]
        names: Option<PathBuf>,
        #[arg(long)]
        places: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Count heuristic membership by gold label.
    Scan {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "char")]
        granularity: String,
        /// Report path; printed to stdout when omitted.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check a dataset (or a diagnostic set) and report problems.
    Validate {
        #[arg(long)]
        input: PathBuf,
        /// Apply the diagnostic schema.
        #[arg(long)]
        diagnostics: bool,
        /// Expected per-phenomenon counts (diagnostic mode).
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Score predictions against gold labels.
    Score {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        /// Reference accuracy in percent, for the delta row.
        #[arg(long)]
        delta_ref: Option<f64>,
        /// `.md` gets a markdown table, anything else TSV.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Draw pairs for human verification.
    Sample {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 50)]
        n: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long)]
        out: PathBuf,
        /// Also write a blank annotation sheet.
        #[arg(long)]
        sheet: Option<PathBuf>,
    },
    /// Majority-vote agreement of an annotation sheet with gold.
    Agreement {
        #[arg(long)]
        sheet: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Distraction,
    Antonym,
    Synonym,
    Spelling,
}

impl From<KindArg> for PerturbKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Distraction => PerturbKind::Distraction,
            KindArg::Antonym => PerturbKind::Antonym,
            KindArg::Synonym => PerturbKind::Synonym,
            KindArg::Spelling => PerturbKind::Spelling,
        }
    }
}

/// Resolves resource files and remembers their digests for the metadata.
struct Resources {
    dir: Option<PathBuf>,
    digests: BTreeMap<String, String>,
}

impl Resources {
    fn get(&mut self, explicit: Option<&Path>, name: &str) -> Result<ResourceText> {
        let r = ResourceText::locate(explicit, self.dir.as_deref(), name)?;
        self.digests.insert(name.to_string(), r.digest());
        Ok(r)
    }

    fn stamp(&self, ds: &mut Dataset) {
        for (name, d) in &self.digests {
            ds.meta.insert(format!("digest.{name}"), d.clone());
        }
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_text(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn save(ds: &mut Dataset, res: &Resources, out: &Path) -> Result<()> {
    res.stamp(ds);
    write_dataset(ds, out)?;
    eprintln!("wrote {} pairs to {}", ds.len(), out.display());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let mut res = Resources {
        dir: cli.resources,
        digests: BTreeMap::new(),
    };

    match cli.command {
        Command::GenHans {
            templates,
            vocab,
            per_template,
            seed,
            out,
            annotations_out,
        } => {
            let seed = seed.resolve();
            let v = res.get(vocab.as_deref(), "vocabulary.tsv")?;
            let vocab = Vocabulary::parse(&v.text, &v.origin)?;
            let t = res.get(templates.as_deref(), "templates.tsv")?;
            let ts = TemplateSet::parse(&t.text, &t.origin, &vocab)?;
            let mut output = generate_hans(&ts, &vocab, per_template, seed)?;
            save(&mut output.dataset, &res, &out)?;
            if let Some(path) = annotations_out {
                write_text(&path, &write_annotations(&output.annotations))?;
            }
        }
        Command::Perturb {
            kind,
            input,
            annotations,
            condition,
            distractors,
            connector,
            lexicon,
            pinyin,
            char_freq,
            limit,
            seed,
            out,
        } => {
            let seed = seed.resolve();
            let kind = PerturbKind::from(kind);
            let data = read_dataset(&input)?;
            res.digests.insert("input".into(), digest(&read_text(&input)?));
            let mut ds = match kind {
                PerturbKind::Distraction => {
                    let d = res.get(distractors.as_deref(), "distractors.tsv")?;
                    let set = DistractorSet::parse(&d.text, &d.origin)?;
                    let conditions = match condition {
                        Some(c) => vec![c.parse::<DistractionCondition>().map_err(anyhow::Error::msg)?],
                        None => DistractionCondition::ALL.to_vec(),
                    };
                    perturb_distraction(&data, &set, &conditions, &connector, seed, limit)
                }
                PerturbKind::Antonym | PerturbKind::Synonym => {
                    let Some(ann) = annotations else {
                        bail!("--annotations is required for {}", kind.as_str());
                    };
                    let text = read_text(&ann)?;
                    res.digests.insert("annotations".into(), digest(&text));
                    let aps = annotate(&data, parse_annotations(&text, &ann.display().to_string())?)?;
                    let name = if kind == PerturbKind::Antonym {
                        "antonyms.tsv"
                    } else {
                        "synonyms.tsv"
                    };
                    let l = res.get(lexicon.as_deref(), name)?;
                    let lex = SubstitutionLexicon::parse(&l.text, &l.origin)?;
                    perturb_substitution(&aps, &lex, kind, seed, limit)
                }
                PerturbKind::Spelling => {
                    let p = res.get(pinyin.as_deref(), "pinyin.tsv")?;
                    let f = res.get(char_freq.as_deref(), "char_freq.tsv")?;
                    let pinyin = PinyinTable::parse(&p.text, &p.origin)?;
                    let freq = CharFrequency::parse(&f.text, &f.origin)?;
                    let tables = SpellingTables {
                        pinyin: &pinyin,
                        freq: &freq,
                        range: SPELLING_FREQ_RANGE,
                    };
                    perturb_spelling(&data, tables, seed, limit)
                }
            };
            save(&mut ds, &res, &out)?;
        }
        Command::GenNumeric {
            seeds,
            quantifiers,
            seed,
            out,
        } => {
            let seed = seed.resolve();
            let s = res.get(seeds.as_deref(), "numeric_seeds.txt")?;
            let sentences: Vec<String> = s
                .text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(String::from)
                .collect();
            let q = res.get(quantifiers.as_deref(), "quantifiers.tsv")?;
            let q = QuantLexicon::parse(&q.text, &q.origin)?;
            let mut ds = generate_numeric_dataset(&sentences, &q, seed)?;
            save(&mut ds, &res, &out)?;
        }
        Command::GenFragments {
            category,
            names,
            places,
            count,
            seed,
            out,
        } => {
            let seed = seed.resolve();
            let category: Category = category.parse().map_err(anyhow::Error::msg)?;
            let n = res.get(names.as_deref(), "names.tsv")?;
            let p = res.get(places.as_deref(), "places.tsv")?;
            let lex = EntityLexicon::new(
                &EntityList::parse(&n.text, &n.origin)?,
                &EntityList::parse(&p.text, &p.origin)?,
            )?;
            let mut ds = generate_fragment(category, &lex, count, seed)?;
            save(&mut ds, &res, &out)?;
        }
        Command::Scan {
            input,
            granularity,
            report,
        } => {
            let g: Granularity = granularity.parse().map_err(anyhow::Error::msg)?;
            let ds = read_dataset(&input)?;
            let r = scan_corpus(&ds, g);
            emit(report.as_deref(), &r.to_tsv())?;
            eprintln!(
                "combined entailment share: {:.1}%",
                r.combined_entailment_share() * 100.0
            );
        }
        Command::Validate {
            input,
            diagnostics,
            manifest,
            report,
        } => {
            // Validation reports problems; it never fails on content.
            let mut out = String::new();
            if diagnostics {
                let r = validate_diagnostics(&input)?;
                out.push_str(&r.to_tsv());
                if let Some(m) = manifest {
                    let m = CountManifest::load(&m)?;
                    for d in r.compare(&m) {
                        out.push_str(&format!(
                            "mismatch\t{}\texpected {}\tfound {}\n",
                            d.key, d.expected, d.found
                        ));
                    }
                }
                for v in &r.violations {
                    out.push_str(&format!("violation\tline {}\t{}\n", v.line, v.message));
                }
                eprintln!("{} records, {} violations", r.total, r.violations.len());
            } else {
                let (records, malformed) = read_raw(&input)?;
                let mut problems: Vec<(usize, String)> = malformed
                    .into_iter()
                    .map(|(l, m)| (l, format!("not a JSON record: {m}")))
                    .collect();
                for (line, raw) in &records {
                    problems.extend(validate_raw(raw).into_iter().map(|v| (*line, v.to_string())));
                }
                let keys = records
                    .iter()
                    .map(|(_, r)| (r.id.as_str(), r.premise.as_str(), r.hypothesis.as_str()));
                for (i, v) in uniqueness_violations(keys) {
                    problems.push((records[i].0, v.to_string()));
                }
                problems.sort();
                for (line, msg) in &problems {
                    out.push_str(&format!("violation\tline {line}\t{msg}\n"));
                }
                eprintln!("{} records, {} violations", records.len(), problems.len());
            }
            emit(report.as_deref(), &out)?;
        }
        Command::Score {
            gold,
            pred,
            delta_ref,
            report,
        } => {
            let gold = read_dataset(&gold)?;
            let preds = PredictionFile::load(&pred)?;
            let mut r = score(&gold, &preds)?;
            if let Some(reference) = delta_ref {
                r = r.with_delta(reference)?;
            }
            let markdown = report
                .as_deref()
                .is_some_and(|p| p.extension().is_some_and(|e| e == "md"));
            let text = if markdown { r.to_markdown() } else { r.to_tsv() };
            emit(report.as_deref(), &text)?;
        }
        Command::Sample {
            input,
            n,
            seed,
            out,
            sheet,
        } => {
            let seed = seed.resolve();
            let ds = read_dataset(&input)?;
            let sample = sample_for_annotation(&ds, n, seed)?;
            write_dataset(&sample, &out)?;
            if let Some(path) = sheet {
                write_text(&path, &blank_sheet(&sample))?;
            }
        }
        Command::Agreement { sheet } => {
            let s = AnnotationSheet::load(&sheet)?;
            println!("{:.4}", agreement(&s));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
