use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cograph::checks::{self, CheckSettings};
use cograph::enumeration::{
    self, labeled_cograph_counts, labeled_counts, pi_distribution, pi_u_distribution, unlabeled_cograph_counts,
    unlabeled_counts, MAX_ORDER,
};
use cograph::experiment::{Command as SpecCommand, ExperimentSpec};
use cograph::montecarlo::{fold_trials, map_trials};
use cograph::render::render_pgm;
use cograph::sampling::{sample, SampleConfig, Sampler, SamplerKind};
use cograph::stats::{
    law_key, random_induced_cotree, total_variation, vertex_connectivity, wasserstein1_vs_uniform,
    EmpiricalDistribution,
};
use cograph::{Cotree, TruncatedSeries};
use serde_json::json;

#[derive(Parser)]
#[command(name = "cograph", version, about = "Enumerate, sample and measure random cographs")]
struct Cli {
    /// Experiment file; its command and parameters replace the flags.
    #[arg(long, global = true)]
    spec: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Table of tree and cograph counts up to a size.
    Count {
        #[arg(long, value_enum, default_value_t = Class::Labeled)]
        class: Class,
        #[arg(long = "n", visible_alias = "max-n")]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact coefficients of a generating series.
    Series {
        #[arg(long, value_enum)]
        name: SeriesName,
        #[arg(long = "n", visible_alias = "order")]
        n: usize,
        /// Induced tree for the marked series, in cotree text form.
        #[arg(long)]
        tree: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One random cotree.
    Sample(SampleArgs),
    /// Empirical statistics over many random cotrees.
    Stats {
        #[command(flatten)]
        sample: SampleArgs,
        #[arg(long, value_enum, default_value_t = Metric::Degree)]
        metric: Metric,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Number of marked leaves for the induced-tree law.
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Largest connectivity value kept apart from the tail bucket.
        #[arg(long, default_value_t = 60)]
        jmax: usize,
    },
    /// Adjacency matrix of a random (or given) cograph as a P5 image.
    Render {
        #[command(flatten)]
        sample: SampleArgs,
        /// Cotree file to draw instead of a random one.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Verification suites; exits with status 1 if any metric fails.
    Check {
        /// Suite names; all suites when omitted.
        suites: Vec<String>,
        /// Divide every Monte Carlo trial count by this number.
        #[arg(long, default_value_t = 1)]
        trials_divisor: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// List suite names and exit.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Args, Clone)]
struct SampleArgs {
    #[arg(long = "n")]
    n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "labeled-exact", value_parser = parse_kind)]
    kind: SamplerKind,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Condition on a connected cograph.
    #[arg(long)]
    connected: bool,
    #[arg(long, value_enum, default_value_t = Format::Cotree)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl SampleArgs {
    fn config(&self) -> Result<SampleConfig> {
        let n = self.n.context("--n is required")?;
        let mut c = SampleConfig::new(n, self.seed, self.kind);
        c.epsilon = self.epsilon;
        c.p = self.p;
        c.connected = self.connected;
        Ok(c)
    }
}

fn parse_kind(s: &str) -> Result<SamplerKind, String> {
    s.parse()
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Class {
    Labeled,
    Unlabeled,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Format {
    Cotree,
    Edges,
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Metric {
    /// Normalized degree of one uniform vertex per sample.
    Degree,
    /// Vertex connectivity of connected samples.
    Kappa,
    /// Tree induced by `k` uniform leaves.
    Induced,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum SeriesName {
    L,
    M,
    U,
    V,
    D,
    LDerivative,
    LEven,
    LOdd,
    UStar,
    UEven,
    UOdd,
    Mt0,
    Vt0,
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

fn cmd_count(class: Class, max_n: usize, out: Option<&Path>) -> Result<()> {
    if max_n > MAX_ORDER {
        bail!("size {max_n} exceeds the series cap {MAX_ORDER}");
    }
    let (trees, graphs, header) = match class {
        Class::Labeled => (labeled_counts(max_n), labeled_cograph_counts(max_n), "n,trees,cographs\n"),
        Class::Unlabeled => (unlabeled_counts(max_n), unlabeled_cograph_counts(max_n), "n,trees,cographs\n"),
    };
    let mut s = String::from(header);
    for n in 1..=max_n {
        s.push_str(&format!("{n},{},{}\n", trees[n], graphs[n]));
    }
    emit(out, s.as_bytes())
}

fn cmd_series(name: SeriesName, order: usize, tree: Option<&str>, format: Format, out: Option<&Path>) -> Result<()> {
    if order > MAX_ORDER {
        bail!("order {order} exceeds the series cap {MAX_ORDER}");
    }
    let t0 = || -> Result<Cotree> { tree.context("--tree is required for marked series")?.parse().context("parsing --tree") };
    let s: TruncatedSeries = match name {
        SeriesName::L => enumeration::series_l(order),
        SeriesName::M => enumeration::series_m(order),
        SeriesName::U => enumeration::series_u(order),
        SeriesName::V => enumeration::series_v(order),
        SeriesName::D => enumeration::series_d(order),
        SeriesName::LDerivative => enumeration::series_marked_labeled(order).derivative,
        SeriesName::LEven => enumeration::series_marked_labeled(order).even,
        SeriesName::LOdd => enumeration::series_marked_labeled(order).odd,
        SeriesName::UStar => enumeration::series_u_marked(order).star,
        SeriesName::UEven => enumeration::series_u_marked(order).even,
        SeriesName::UOdd => enumeration::series_u_marked(order).odd,
        SeriesName::Mt0 => enumeration::series_mt0(&t0()?, order)?,
        SeriesName::Vt0 => enumeration::series_vt0(&t0()?, order)?,
    };
    let text = match format {
        Format::Csv => s.to_csv(),
        Format::Json => {
            let coeffs: Vec<String> = s.coeffs().iter().map(|c| c.to_string()).collect();
            format!("{}\n", json!({ "order": order, "coefficients": coeffs }))
        }
        _ => bail!("series output is csv or json"),
    };
    emit(out, text.as_bytes())
}

fn cmd_sample(config: &SampleConfig, format: Format, out: Option<&Path>) -> Result<()> {
    let t = sample(config)?;
    let text = match format {
        Format::Cotree => format!("{t}\n"),
        Format::Edges => t.cograph().to_edge_list(),
        Format::Json => format!(
            "{}\n",
            json!({ "config": config, "size": t.leaf_count(), "cotree": t.to_string() })
        ),
        Format::Csv => bail!("sample output is cotree, edges or json"),
    };
    emit(out, text.as_bytes())
}


fn cmd_stats(
    config: &SampleConfig,
    metric: Metric,
    trials: usize,
    k: usize,
    jmax: usize,
    format: Format,
    out: Option<&Path>,
) -> Result<()> {
    if trials == 0 {
        bail!("--trials must be positive");
    }
    let mut config = config.clone();
    if metric == Metric::Kappa {
        config.connected = true;
    }
    let config = &config;
    let sampler = Sampler::new(config)?;
    let draw = |r: &mut rand_chacha::ChaCha8Rng| sampler.draw(config, r).expect("size window reached");
    let (dist, summary) = match metric {
        Metric::Degree => {
            let v = map_trials(trials, config.seed, |r| {
                let t = draw(r);
                let deg = t.degree_vector();
                deg[rand::Rng::gen_range(r, 0..deg.len())] as f64 / deg.len() as f64
            });
            let d = EmpiricalDistribution::from_reals(v);
            let w1 = wasserstein1_vs_uniform(&d)?;
            (d.clone(), json!({ "metric": "w1_to_uniform", "value": w1, "mean": d.mean() }))
        }
        Metric::Kappa => {
            let counts = tally(trials, config.seed, |r| law_key(vertex_connectivity(&draw(r)).expect("connected"), jmax));
            let d = EmpiricalDistribution::from_counts(counts);
            let law = match config.kind {
                SamplerKind::UnlabeledExact => Some(pi_u_distribution(jmax)),
                SamplerKind::LabeledExact | SamplerKind::LabeledBoltzmann => Some(pi_distribution(jmax)),
                SamplerKind::BinaryDecorated => None,
            };
            let tv = law.map(|l| total_variation(&d.probabilities(), &l.probability_map()));
            (d, json!({ "metric": "tv_to_limit", "value": tv, "jmax": jmax }))
        }
        Metric::Induced => {
            if k == 0 || k > config.n {
                bail!("--k must lie in 1..={}", config.n);
            }
            let counts = tally(trials, config.seed, |r| {
                let t = draw(r);
                random_induced_cotree(&t, k, r).expect("k within size").canonical_key()
            });
            (EmpiricalDistribution::from_counts(counts), json!({ "metric": "induced", "k": k }))
        }
    };
    let text = match format {
        Format::Csv => dist.to_csv(),
        Format::Json => {
            let body = match &dist {
                EmpiricalDistribution::Keyed { .. } => json!(dist
                    .probabilities()
                    .into_iter()
                    .map(|(key, p)| json!({ "key": key, "probability": p, "stderr": dist.stderr(&key) }))
                    .collect::<Vec<_>>()),
                EmpiricalDistribution::Real(v) => json!(v),
            };
            format!("{}\n", json!({ "config": config, "trials": trials, "summary": summary, "distribution": body }))
        }
        _ => bail!("stats output is csv or json"),
    };
    emit(out, text.as_bytes())
}

fn tally<F>(trials: usize, seed: u64, f: F) -> std::collections::BTreeMap<String, u64>
where
    F: Fn(&mut rand_chacha::ChaCha8Rng) -> String + Sync,
{
    fold_trials(
        trials,
        seed,
        std::collections::BTreeMap::new,
        |acc: &mut std::collections::BTreeMap<String, u64>, r| *acc.entry(f(r)).or_insert(0) += 1,
        |mut a, b| {
            for (key, c) in b {
                *a.entry(key).or_insert(0) += c;
            }
            a
        },
    )
}

fn cmd_render(config: Option<&SampleConfig>, input: Option<&Path>, out: Option<&Path>) -> Result<()> {
    let t = match input {
        Some(p) => fs::read_to_string(p)
            .with_context(|| format!("reading {}", p.display()))?
            .trim()
            .parse::<Cotree>()
            .context("parsing cotree")?,
        None => sample(config.context("--n or --input is required")?)?,
    };
    emit(out, &render_pgm(&t)?)
}

/// Runs the suites; `Ok(false)` when some metric failed.
fn cmd_check(suites: &[String], settings: &CheckSettings, out: Option<&Path>) -> Result<bool> {
    let results = checks::run_suites(suites, settings)?;
    for r in &results {
        eprintln!("{}", r.line());
    }
    let pass = checks::all_pass(&results);
    let report = json!({ "pass": pass, "settings": settings, "results": results });
    emit(out, format!("{}\n", serde_json::to_string_pretty(&report)?).as_bytes())?;
    Ok(pass)
}

fn run_spec(path: &Path) -> Result<bool> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let spec = ExperimentSpec::from_json(&text).context("parsing experiment spec")?;
    let out = spec.outputs.first().map(PathBuf::as_path);
    let c = &spec.sample;
    match spec.command {
        SpecCommand::Count => cmd_count(Class::Labeled, c.n, out)?,
        SpecCommand::Series => cmd_series(SeriesName::L, c.n, None, Format::Csv, out)?,
        SpecCommand::Sample => cmd_sample(c, Format::Cotree, out)?,
        SpecCommand::Stats => {
            let metric = match spec.metrics.first().map(String::as_str) {
                None | Some("degree") => Metric::Degree,
                Some("kappa") => Metric::Kappa,
                Some("induced") => Metric::Induced,
                Some(other) => bail!("unknown metric `{other}`"),
            };
            cmd_stats(c, metric, spec.trials.unwrap_or(1000), 3, 60, Format::Csv, out)?
        }
        SpecCommand::Render => cmd_render(Some(c), None, out)?,
        SpecCommand::Check => return cmd_check(&spec.metrics, &spec.check_settings()?, out),
    }
    Ok(true)
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(path) = &cli.spec {
        return run_spec(path);
    }
    let Some(cmd) = cli.command else { bail!("a subcommand or --spec is required") };
    match cmd {
        Cmd::Count { class, n, out } => cmd_count(class, n, out.as_deref())?,
        Cmd::Series { name, n, tree, format, out } => cmd_series(name, n, tree.as_deref(), format, out.as_deref())?,
        Cmd::Sample(a) => cmd_sample(&a.config()?, a.format, a.out.as_deref())?,
        Cmd::Stats { sample, metric, trials, k, jmax } => {
            let format = if sample.format == Format::Cotree { Format::Csv } else { sample.format };
            cmd_stats(&sample.config()?, metric, trials, k, jmax, format, sample.out.as_deref())?
        }
        Cmd::Render { sample, input } => {
            let config = if input.is_none() { Some(sample.config()?) } else { None };
            cmd_render(config.as_ref(), input.as_deref(), sample.out.as_deref())?
        }
        Cmd::Check { suites, trials_divisor, out, list } => {
            if list {
                println!("{}", checks::SUITES.join("\n"));
                return Ok(true);
            }
            let settings = CheckSettings::default().scaled_down(trials_divisor);
            return cmd_check(&suites, &settings, out.as_deref());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
