//! `polarlab` command-line front end: FER simulation, single-frame decoding,
//! node census, latency sweeps and the sorter self-check.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use polarlab::construction::{self, Channel, CodeConfig};
use polarlab::latency::{self, OptFlags};
use polarlab::nodes::{self, CensusParams};
use polarlab::sim::{self, DecoderKind, SimSpec};
use polarlab::sorter::{self, SorterKind, SorterSpec};
use polarlab::{Arithmetic, DecoderParams, Execution, ForkLimits, SrListDecoder};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "polarlab", version, about = "5G NR polar codes with SR-List decoding")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte-Carlo FER/BER over BPSK and AWGN.
    Simulate(SimulateArgs),
    /// Decode one frame of received LLRs.
    Decode(DecodeArgs),
    /// Histogram of SR and G-PC node types over a channel's configurations.
    AnalyzeNodes(AnalyzeArgs),
    /// Cycle counts of the behavioral latency model.
    Latency(LatencyArgs),
    /// Check the partial rank-order sorter against a full sort.
    SortBench(SortBenchArgs),
}

/// Code and decoder settings shared by `simulate` and `decode`. Keys of the
/// `--config` file (`key = value`, `#` comments) use the flag names with
/// `-` or `_` and override the flags.
#[derive(Args, Default)]
struct CodeArgs {
    /// Flat key=value settings file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// `ul` or `dl`.
    #[arg(long)]
    channel: Option<Channel>,
    /// Message bits.
    #[arg(long)]
    a: Option<usize>,
    /// Rate-matched length.
    #[arg(long)]
    e: Option<usize>,
    /// List size (default 8).
    #[arg(long)]
    list: Option<usize>,
    /// `float` or `fixed` (Q6.2 LLRs, 7-bit path metrics).
    #[arg(long)]
    mode: Option<Arithmetic>,
    /// Largest repetition-sequence set per SR node (default 8).
    #[arg(long)]
    smax: Option<usize>,
    /// Use the empirical fork caps instead of exact forking.
    #[arg(long)]
    caps: Option<bool>,
    /// `sr`, `fast-scl`, `scl` or `sc` (default `sr`).
    #[arg(long)]
    decoder: Option<DecoderKind>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Eb/N0 points in dB: `start:step:stop` or a comma list.
    #[arg(long)]
    ebn0: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Stop a point after this many frame errors (default 100).
    #[arg(long)]
    min_errors: Option<u64>,
    /// Stop a point after this many frames (default 10^7).
    #[arg(long)]
    max_frames: Option<u64>,
    /// Transmit without noise.
    #[arg(long)]
    noiseless: Option<bool>,
    /// Run on the calling thread only.
    #[arg(long)]
    sequential: bool,
    /// CSV output (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DecodeArgs {
    #[command(flatten)]
    code: CodeArgs,
    /// Received LLRs, one per line (`E` values).
    #[arg(long)]
    llr_in: PathBuf,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    channel: Channel,
    /// Scan every k-th (A, G) configuration.
    #[arg(long, default_value_t = 1)]
    sample_stride: usize,
    /// Largest node considered, in leaves (default: no limit).
    #[arg(long)]
    max_node_len: Option<usize>,
    #[arg(long)]
    sequential: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LatencyArgs {
    #[arg(long)]
    channel: Channel,
    #[arg(long)]
    e: usize,
    /// Single message length; default sweeps every valid A.
    #[arg(long)]
    a: Option<usize>,
    #[arg(long, default_value_t = 8)]
    list: usize,
    #[arg(long, default_value_t = 4)]
    smax: usize,
    /// `all`, `none`, or a comma list of `flexible`, `sr`, `caps`, `rm`.
    #[arg(long, default_value = "all")]
    flags: OptFlags,
    #[arg(long)]
    sequential: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SortBenchArgs {
    #[arg(long, default_value_t = 64)]
    x: usize,
    #[arg(long, default_value_t = 8)]
    y: usize,
    #[arg(long, default_value_t = 100_000)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

fn read_config(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| anyhow!("{}:{}: expected key = value", path.display(), n + 1))?;
        map.insert(k.trim().replace('-', "_"), v.trim().to_string());
    }
    Ok(map)
}

/// Overwrite `slot` with the config value of `key`, if any.
fn apply<T: FromStr>(map: &mut BTreeMap<String, String>, key: &str, slot: &mut Option<T>) -> Result<()>
where
    T::Err: std::fmt::Display,
{
    if let Some(v) = map.remove(key) {
        *slot = Some(v.parse().map_err(|e| anyhow!("config key `{key}`: {e}"))?);
    }
    Ok(())
}

fn required<T: Copy>(slot: Option<T>, name: &str) -> Result<T> {
    slot.ok_or_else(|| anyhow!("missing required setting `{name}` (flag --{name} or config key)"))
}

impl CodeArgs {
    /// Merge the config file into the flags; returns the unused config keys.
    fn merge(&mut self) -> Result<BTreeMap<String, String>> {
        let Some(path) = &self.config else { return Ok(BTreeMap::new()) };
        let mut map = read_config(path)?;
        apply(&mut map, "channel", &mut self.channel)?;
        apply(&mut map, "a", &mut self.a)?;
        apply(&mut map, "e", &mut self.e)?;
        apply(&mut map, "list", &mut self.list)?;
        apply(&mut map, "mode", &mut self.mode)?;
        apply(&mut map, "smax", &mut self.smax)?;
        apply(&mut map, "caps", &mut self.caps)?;
        apply(&mut map, "decoder", &mut self.decoder)?;
        Ok(map)
    }

    fn code(&self) -> Result<CodeConfig> {
        let channel = required(self.channel, "channel")?;
        Ok(construction::resolve_config(channel, required(self.a, "a")?, required(self.e, "e")?)?)
    }

    fn params(&self) -> Result<DecoderParams> {
        let list = self.list.unwrap_or(8);
        let mut p = DecoderParams::sr_list(list).with_arithmetic(self.mode.unwrap_or_default());
        if let Some(smax) = self.smax {
            p.smax = smax;
        }
        if self.caps.unwrap_or(false) {
            p.fork_limits = ForkLimits::empirical(list);
        }
        p.validate()?;
        Ok(p)
    }
}

fn parse_points(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let [start, step, stop] = [0, 1, 2].map(|i| parts[i].trim().parse::<f64>());
        let (start, step, stop) = (start?, step?, stop?);
        if step <= 0.0 || stop < start {
            bail!("Eb/N0 range needs a positive step and start <= stop");
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        return Ok((0..count).map(|i| start + i as f64 * step).collect());
    }
    s.split(',').map(|p| p.trim().parse::<f64>().map_err(|e| anyhow!("Eb/N0 point `{p}`: {e}"))).collect()
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn csv_writer(out: &Option<PathBuf>) -> Result<csv::Writer<Box<dyn Write>>> {
    let sink: Box<dyn Write> = match out {
        Some(p) => Box::new(std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(std::io::stdout()),
    };
    Ok(csv::Writer::from_writer(sink))
}

fn ensure_consumed(rest: BTreeMap<String, String>) -> Result<()> {
    match rest.keys().next() {
        Some(k) => bail!("unknown config key `{k}`"),
        None => Ok(()),
    }
}

fn simulate(mut args: SimulateArgs) -> Result<()> {
    let mut rest = args.code.merge()?;
    apply(&mut rest, "ebn0", &mut args.ebn0)?;
    apply(&mut rest, "seed", &mut args.seed)?;
    apply(&mut rest, "min_errors", &mut args.min_errors)?;
    apply(&mut rest, "max_frames", &mut args.max_frames)?;
    apply(&mut rest, "noiseless", &mut args.noiseless)?;
    ensure_consumed(rest)?;
    let config = args.code.code()?;
    let points = parse_points(args.ebn0.as_deref().ok_or_else(|| anyhow!("missing required setting `ebn0`"))?)?;
    let mut spec = SimSpec::new(config, args.code.decoder.unwrap_or(DecoderKind::SrList), args.code.params()?, points);
    spec.seed = args.seed.unwrap_or(spec.seed);
    spec.min_errors = args.min_errors.unwrap_or(spec.min_errors);
    spec.max_frames = args.max_frames.unwrap_or(spec.max_frames);
    spec.noiseless = args.noiseless.unwrap_or(false);
    let report = sim::run_fer(&spec, execution(args.sequential))?;
    eprintln!("spec_hash={:016x} build={}", report.spec_hash, report.build_id);
    let mut w = csv_writer(&args.out)?;
    w.write_record(["ebn0_db", "frames", "frame_errors", "fer", "ber", "ci_low", "ci_high"])?;
    for p in &report.points {
        w.write_record([
            p.ebn0_db.to_string(),
            p.frames.to_string(),
            p.frame_errors.to_string(),
            format!("{:.6e}", p.fer),
            format!("{:.6e}", p.ber),
            format!("{:.6e}", p.ci_low),
            format!("{:.6e}", p.ci_high),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn to_hex(bits: &[u8]) -> String {
    bits.chunks(4).map(|c| {
        let nibble = c.iter().enumerate().fold(0u32, |acc, (i, &b)| acc | (b as u32) << (3 - i));
        char::from_digit(nibble, 16).expect("nibble")
    }).collect()
}

fn decode(mut args: DecodeArgs) -> Result<()> {
    ensure_consumed(args.code.merge()?)?;
    let config = args.code.code()?;
    let text = std::fs::read_to_string(&args.llr_in).with_context(|| format!("reading {}", args.llr_in.display()))?;
    let llr: Vec<f64> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| l.parse::<f64>().map_err(|e| anyhow!("LLR `{l}`: {e}")))
        .collect::<Result<_>>()?;
    let decoder = SrListDecoder::new(&config, &args.code.params()?)?;
    let result = decoder.decode(&llr)?;
    println!(
        "message={} crc={} pm={}",
        to_hex(&result.message),
        if result.crc_pass { "pass" } else { "fail" },
        result.chosen_pm
    );
    Ok(())
}

fn analyze_nodes(args: AnalyzeArgs) -> Result<()> {
    let sample = nodes::config_space(args.channel, args.sample_stride);
    let params = CensusParams { max_node_len: args.max_node_len, ..CensusParams::default() };
    let hist = nodes::node_distribution(args.channel, &sample, &params, execution(args.sequential))?;
    eprintln!("configs={} nodes={}", hist.configs, hist.total);
    let mut w = csv_writer(&args.out)?;
    w.write_record(["key_family", "key", "count", "percent"])?;
    for (family, key, count, percent) in hist.rows() {
        w.write_record([family.to_string(), key.to_string(), count.to_string(), format!("{percent:.4}")])?;
    }
    w.flush()?;
    Ok(())
}

fn latency_cmd(args: LatencyArgs) -> Result<()> {
    let configs = match args.a {
        Some(a) => vec![construction::resolve_config(args.channel, a, args.e)?],
        None => latency::sweep(args.channel, args.e),
    };
    let params = args.flags.params(args.list, args.smax);
    let wc = latency::worst_case(&configs, &params, execution(args.sequential))?;
    eprintln!("worst case {} CC at A={}", wc.max_cycles, wc.argmax.a);
    let mut w = csv_writer(&args.out)?;
    w.write_record(["A", "E", "CC_total", "CC_scu", "CC_npu", "CC_psu"])?;
    for row in &wc.table {
        let r = &row.report;
        w.write_record([row.config.a, row.config.e].map(|v| v.to_string()).into_iter().chain([r.total, r.scu, r.npu, r.psu].map(|v| v.to_string())))?;
    }
    w.flush()?;
    Ok(())
}

fn sort_bench(args: SortBenchArgs) -> Result<bool> {
    let partial = SorterSpec::new(args.x, args.y, SorterKind::Partial)?;
    let full = SorterSpec::new(args.x, args.y, SorterKind::Full)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut wrong = 0usize;
    for _ in 0..args.trials {
        let values: Vec<f64> = (0..args.x).map(|_| rng.random_range(0..16) as f64).collect();
        let mut got: Vec<f64> = sorter::partial_rank_select(&values, args.y)?.iter().map(|r| r.key).collect();
        got.sort_by(f64::total_cmp);
        let mut want = values;
        want.sort_by(f64::total_cmp);
        want.truncate(args.y);
        wrong += (got != want) as usize;
    }
    let ok = wrong == 0;
    println!("{} {}/{} trials correct", if ok { "pass" } else { "fail" }, args.trials - wrong, args.trials);
    println!("comparators partial={} full={}", sorter::comparator_count(partial), sorter::comparator_count(full));
    Ok(ok)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Simulate(a) => simulate(a)?,
        Command::Decode(a) => decode(a)?,
        Command::AnalyzeNodes(a) => analyze_nodes(a)?,
        Command::Latency(a) => latency_cmd(a)?,
        Command::SortBench(a) => return sort_bench(a),
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
