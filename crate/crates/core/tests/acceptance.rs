//! Acceptance run: one PASS/FAIL line per criterion, with the measured
//! numbers underneath.
//!
//! Pass criterion numbers as arguments to run a subset
//! (`cargo test --test acceptance -- 3 5`). Set `POLARLAB_ACCEPTANCE_STRICT=1`
//! to exit nonzero when any criterion fails.

use std::time::Instant;

use polarlab::construction::{self, BitRoles, Channel, CodeConfig};
use polarlab::kernel::{self, hard_decision, Arithmetic};
use polarlab::latency::{self, NpuNode, OptFlags};
use polarlab::nodes::{self, CensusParams, SrDescriptor};
use polarlab::params::{DecoderParams, ForkLimits};
use polarlab::sim::{self, DecoderKind, FerPoint, SimSpec};
use polarlab::sorter::{self, SorterKind, SorterSpec};
use polarlab::sr::{self, NodeInput, SrListDecoder};
use polarlab::Execution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (usize, &'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    details: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self { pass: true, details: Vec::new() }
    }

    fn check(&mut self, ok: bool, line: String) {
        self.pass &= ok;
        self.details.push(format!("{} {line}", if ok { "ok  " } else { "MISS" }));
    }

    fn note(&mut self, line: String) {
        self.details.push(format!("     {line}"));
    }
}

/// LLR drawn from a quarter-step grid so that every sum is exact in floating point.
fn grid_llr(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let v = rng.random_range(-64i32..=64) as f64 / 4.0;
        if v != 0.0 {
            return v;
        }
    }
}

/// Continuous-looking LLR on a 2^-16 grid; sums of a few dozen stay exact.
fn fine_llr(rng: &mut ChaCha8Rng) -> f64 {
    (rng.random_range(-8.0f64..10.0) * 65536.0).round() / 65536.0
}

fn random_roles(rng: &mut ChaCha8Rng, len: usize, k: usize) -> BitRoles {
    let mut idx: Vec<usize> = (0..len).collect();
    for i in (1..len).rev() {
        idx.swap(i, rng.random_range(0..=i));
    }
    let mut info = vec![false; len];
    for &i in &idx[..k] {
        info[i] = true;
    }
    BitRoles::from_info_mask(&info).expect("power-of-two length")
}

fn oracle_equivalence() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let frames = 10_000;
    let mut mismatches = 0;
    for t in 0..frames {
        let n = [8usize, 16, 32][t % 3];
        let l = [2usize, 4][(t / 3) % 2];
        let k = rng.random_range(1..=n);
        let roles = random_roles(&mut rng, n, k);
        let llr: Vec<f64> = (0..n).map(|_| fine_llr(&mut rng)).collect();
        let params = DecoderParams::scl_exact(l);
        let schedule = nodes::build_schedule(&roles, &params).expect("schedule");
        let got = sr::decode_codeword(&llr, &schedule, &params).expect("decode");
        let want = kernel::scl_decode_reference(&llr, &roles, l).expect("reference");
        if got[0].pm != want[0].pm {
            mismatches += 1;
        }
    }
    out.check(mismatches == 0, format!("best PM equals reference SCL on {frames} toy frames ({mismatches} mismatches)"));

    let ml_frames = 2_000;
    let mut ml_mismatches = 0;
    for _ in 0..ml_frames {
        let n = 16;
        let k = rng.random_range(1..=4);
        let roles = random_roles(&mut rng, n, k);
        let llr: Vec<f64> = (0..n).map(|_| fine_llr(&mut rng)).collect();
        let params = DecoderParams::scl_exact(1 << k);
        let schedule = nodes::build_schedule(&roles, &params).expect("schedule");
        let got = sr::decode_codeword(&llr, &schedule, &params).expect("decode");
        let info: Vec<usize> = (0..n).filter(|&i| roles.is_info(i)).collect();
        let (ml_x, ml_pm) = (0..1u32 << k)
            .map(|m| {
                let mut u = vec![0u8; n];
                for (b, &i) in info.iter().enumerate() {
                    u[i] = ((m >> b) & 1) as u8;
                }
                let x = kernel::encode(&u).expect("power of two");
                let d = kernel::discrepancy(&llr, &x);
                (x, d)
            })
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty");
        if got[0].codeword != ml_x || got[0].pm != ml_pm {
            ml_mismatches += 1;
        }
    }
    out.check(ml_mismatches == 0, format!("L = 2^K best path equals exhaustive ML on {ml_frames} frames ({ml_mismatches} mismatches)"));
    out
}

/// Source LLRs by explicit g-propagation through the rate-0/repetition
/// left siblings with decisions `eta`.
fn explicit_source_llr(llr_s: &[f64], eta: &[u8]) -> Vec<f64> {
    let mut cur = llr_s.to_vec();
    for &e in eta {
        let h = cur.len() / 2;
        cur = (0..h).map(|j| cur[h + j] + if e == 0 { cur[j] } else { -cur[j] }).collect();
    }
    cur
}

/// Min-sum SC path metric of input vector `u`; returns `(pm, codeword)`.
fn sc_path_metric(llr: &[f64], u: &[u8]) -> (f64, Vec<u8>) {
    if llr.len() == 1 {
        let pm = if hard_decision(llr[0]) != u[0] { llr[0].abs() } else { 0.0 };
        return (pm, vec![u[0]]);
    }
    let h = llr.len() / 2;
    let a: Vec<f64> =
        (0..h).map(|j| llr[j].signum() * llr[h + j].signum() * llr[j].abs().min(llr[h + j].abs())).collect();
    let (pm1, x1) = sc_path_metric(&a, &u[..h]);
    let b: Vec<f64> = (0..h).map(|j| llr[h + j] + if x1[j] == 0 { llr[j] } else { -llr[j] }).collect();
    let (pm2, x2) = sc_path_metric(&b, &u[h..]);
    let mut x: Vec<u8> = x1.iter().zip(&x2).map(|(p, q)| p ^ q).collect();
    x.extend(x2);
    (pm1 + pm2, x)
}

fn sequence_identities() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let instances = 10_000;
    let (mut llr_mismatch, mut pm_mismatch, mut hypotheses) = (0, 0, 0usize);
    for _ in 0..instances {
        let depth = rng.random_range(1..=5usize);
        let r = rng.random_range(0..=(6 - depth).min(3)) as u32;
        let v: Vec<bool> = (0..depth).map(|_| rng.random_bool(0.5)).collect();
        let d = SrDescriptor { v: v.clone(), np: 0, source_stage: r };
        let len = 1usize << d.stage();
        let llr: Vec<f64> = (0..len).map(|_| grid_llr(&mut rng)).collect();
        let seqs = sr::gen_sequences(&v, 64).expect("within budget");
        let cands = sr::sr1_candidates(&[NodeInput { llr: &llr, pm: 0.0 }], &d, &seqs, 0, Arithmetic::Float);
        let reps: Vec<usize> = (0..depth).filter(|&t| v[t]).collect();
        for (k, seq) in seqs.iter().enumerate() {
            hypotheses += 1;
            let mut eta = vec![0u8; depth];
            for (b, &t) in reps.iter().enumerate() {
                eta[t] = ((k >> b) & 1) as u8;
            }
            let want = explicit_source_llr(&llr, &eta);
            if sr::source_llr(&llr, seq, Arithmetic::Float) != want {
                llr_mismatch += 1;
            }
            // Input vector of the matching decision path: repetition siblings
            // carry their decision in the last leaf, the rate-1 source takes
            // its hard decision.
            let mut u = Vec::with_capacity(len);
            for (t, &e) in eta.iter().enumerate() {
                let sib = len >> (t + 1);
                u.extend(std::iter::repeat_n(0u8, sib - 1));
                u.push(if v[t] { e } else { 0 });
            }
            let src: Vec<u8> = want.iter().map(|&x| hard_decision(x)).collect();
            u.extend(kernel::encode(&src).expect("power of two"));
            let (pm, _) = sc_path_metric(&llr, &u);
            if cands[k].pm != pm {
                pm_mismatch += 1;
            }
        }
    }
    out.check(
        llr_mismatch == 0,
        format!("source LLRs equal explicit propagation: {instances} nodes, {hypotheses} hypotheses, {llr_mismatch} mismatches"),
    );
    out.check(pm_mismatch == 0, format!("candidate PMs equal bit-by-bit SC path metrics ({pm_mismatch} mismatches)"));
    out
}

fn sorter_check() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let trials = 100_000;
    let mut wrong = 0;
    for t in 0..trials {
        let x = 2 * rng.random_range(1..=32usize);
        let y = rng.random_range(1..=x / 2);
        let values: Vec<f64> = if t % 2 == 0 {
            (0..x).map(|_| rng.random_range(0..8) as f64).collect()
        } else {
            (0..x).map(|_| rng.random_range(-100.0..100.0)).collect()
        };
        let mut got: Vec<f64> = sorter::partial_rank_select(&values, y).expect("valid").iter().map(|r| r.key).collect();
        let mut want = values.clone();
        want.sort_by(f64::total_cmp);
        want.truncate(y);
        got.sort_by(f64::total_cmp);
        if got != want {
            wrong += 1;
        }
    }
    out.check(wrong == 0, format!("partial selection returns the smallest-Y multiset on {trials} inputs ({wrong} wrong)"));
    let counts: Vec<usize> = [(16, SorterKind::Partial), (16, SorterKind::Full), (32, SorterKind::Partial), (32, SorterKind::Full), (64, SorterKind::Partial), (64, SorterKind::Full)]
        .iter()
        .map(|&(x, kind)| sorter::comparator_count(SorterSpec::new(x, 8, kind).expect("valid")))
        .collect();
    out.check(counts == [64, 120, 248, 496, 1000, 2016], format!("comparator counts for L=8, X=16/32/64: {counts:?}"));
    out
}

fn node_census() -> Outcome {
    let mut out = Outcome::new();
    let t = Instant::now();
    let sample = nodes::config_space(Channel::Downlink, 1);
    let h = nodes::node_distribution(Channel::Downlink, &sample, &CensusParams::default(), Execution::Parallel)
        .expect("census");
    out.note(format!("{} PDCCH configurations, {} nodes, {:.1?}", h.configs, h.total, t.elapsed()));
    let within = |got: f64, want: f64| (got - want).abs() <= 3.0;
    let s1 = h.seq_percent(1);
    out.check(within(s1, 62.78), format!("|S|=1 share {s1:.2}% (target 62.78 +/- 3)"));
    let s4 = h.seq_percent_at_most(4);
    out.check(within(s4, 92.16), format!("|S|<=4 share {s4:.2}% (target 92.16 +/- 3)"));
    let np1 = h.np_percent(1);
    out.check(within(np1, 83.91), format!("N_p=1 share {np1:.2}% (target 83.91 +/- 3)"));
    let big_s: u64 = h.by_seq_count.range(33..).map(|(_, c)| c).sum();
    let big_np: u64 = h.by_np.range(3..).map(|(_, c)| c).sum();
    out.check(big_s == 0 && big_np == 0, format!("nodes with |S|>32: {big_s}, with N_p>2: {big_np}"));
    out.note(format!(
        "|S| 1/2/4/8/16/32: {}",
        [1, 2, 4, 8, 16, 32].map(|s| format!("{:.2}", h.seq_percent(s))).join("/")
    ));
    out.note(format!("N_p 0/1/2: {}", [0, 1, 2].map(|n| format!("{:.2}", h.np_percent(n))).join("/")));
    out
}

fn latency_model() -> Outcome {
    let mut out = Outcome::new();
    let mut table_ok = true;
    for l in [1usize, 2, 4, 8, 16, 32] {
        for ns in [2usize, 4, 8, 16, 32, 64] {
            let m = |k: usize| (l - 1).min(k) as u64;
            let u = ForkLimits::Unlimited;
            let rows = [
                (NpuNode::Rate0.cycles(l, u), 1),
                (NpuNode::Rep.cycles(l, u), 2),
                (NpuNode::Rate1 { k: ns }.cycles(l, u), m(ns) + 1),
                (NpuNode::Spc { k: ns - 1 }.cycles(l, u), 1 + m(ns - 1) + 1),
                (NpuNode::Type3 { k: ns - 2 }.cycles(l, u), 1 + m(ns - 2) + 1),
                (NpuNode::SrRate1 { k: ns }.cycles(l, u), 2 + m(ns)),
                (NpuNode::SrSpc { k: ns - 1 }.cycles(l, u), 2 + m(ns - 1) + 1),
                (NpuNode::SrType3 { k: ns - 2 }.cycles(l, u), 2 + m(ns - 2) + 1),
            ];
            table_ok &= rows.iter().all(|(got, want)| got == want);
        }
    }
    out.check(table_ok, "node processor cycles match all eight table rows".into());

    let configs = latency::sweep(Channel::Downlink, 432);
    let targets = [334.0, 311.0, 240.0, 173.0];
    let mut got = Vec::new();
    for flags in OptFlags::staircase() {
        let wc = latency::worst_case(&configs, &flags.params(8, 4), Execution::Parallel).expect("sweep");
        got.push(wc.max_cycles);
    }
    let monotone = got.windows(2).all(|w| w[0] > w[1]);
    let close = got.iter().zip(targets).all(|(&g, t)| (g as f64 - t).abs() <= 0.15 * t);
    out.check(close && monotone, format!("DL E=432 L=8 staircase {got:?} vs {targets:?} (+/-15%, strictly decreasing)"));

    let cfg = construction::resolve_config(Channel::Uplink, 501, 1024).expect("config");
    let roles = construction::frozen_set(&cfg);
    let ul_targets = [325.0, 355.0, 395.0];
    let mut ul = Vec::new();
    for l in [2, 4, 8] {
        let params = latency::uplink_params(l);
        let schedule = nodes::build_schedule(&roles, &params).expect("schedule");
        ul.push(latency::schedule_cycles(&schedule, &params).expect("cycles").total);
    }
    let close = ul.iter().zip(ul_targets).all(|(&g, t)| (g as f64 - t).abs() <= 0.15 * t);
    out.check(close, format!("UL (1024,512) L=2/4/8 {ul:?} vs {ul_targets:?} (+/-15%)"));
    out
}

fn fer_curve(cfg: &CodeConfig, kind: DecoderKind, params: DecoderParams, points: &[f64], min_errors: u64, max_frames: u64) -> Vec<FerPoint> {
    let mut spec = SimSpec::new(cfg.clone(), kind, params, points.to_vec());
    spec.min_errors = min_errors;
    spec.max_frames = max_frames;
    spec.seed = 0x5eed_0006;
    sim::run_fer(&spec, Execution::Parallel).expect("simulation").points
}

fn fmt_curve(points: &[FerPoint]) -> String {
    points.iter().map(|p| format!("{}dB {}/{}={:.2e}", p.ebn0_db, p.frame_errors, p.frames, p.fer)).collect::<Vec<_>>().join(", ")
}

fn fer_desk_scale() -> Outcome {
    let mut out = Outcome::new();
    let cases = [
        ("UL (1024,512)", Channel::Uplink, 501, 1024, vec![1.5, 1.75, 2.0, 2.125], [1.5, 1.75], 20_000u64),
        ("DL (432,140)", Channel::Downlink, 140, 432, vec![1.5, 2.0, 2.5, 2.75], [2.0, 2.5], 40_000u64),
    ];
    for (name, channel, a, e, grid, gap_points, gap_frames) in cases {
        let t = Instant::now();
        let cfg = construction::resolve_config(channel, a, e).expect("config");
        let exact = DecoderParams::sr_list(8);
        let sr_curve = fer_curve(&cfg, DecoderKind::SrList, exact, &grid, 100, 400_000);
        let fast_curve = fer_curve(&cfg, DecoderKind::FastSclEmu, exact, &grid, 100, 400_000);
        out.note(format!("{name} SR-List  {}", fmt_curve(&sr_curve)));
        out.note(format!("{name} Fast-SCL {}", fmt_curve(&fast_curve)));
        let worse: Vec<f64> = sr_curve
            .iter()
            .zip(&fast_curve)
            .filter(|(s, f)| s.fer > f.fer + 2.0 * (f.ci_high - f.ci_low))
            .map(|(s, _)| s.ebn0_db)
            .collect();
        out.check(worse.is_empty(), format!("{name}: SR-List within 2 CI widths of Fast-SCL at every point (worse at {worse:?})"));
        let counted = sr_curve.iter().chain(&fast_curve).all(|p| p.frame_errors >= 100);
        let deep = sr_curve.last().is_some_and(|p| p.fer <= 1e-3) && fast_curve.last().is_some_and(|p| p.fer <= 1e-3);
        out.check(counted && deep, format!("{name}: >= 100 errors at every point, last point at FER <= 1e-3"));

        // Paired runs (same frames) bracketing FER 1e-2.
        let paired = |params: DecoderParams| fer_curve(&cfg, DecoderKind::SrList, params, &gap_points, u64::MAX, gap_frames);
        let x_exact = sim::ebn0_at_fer(&paired(exact), 1e-2);
        let capped = exact.with_fork_limits(ForkLimits::empirical(8));
        let x_caps = sim::ebn0_at_fer(&paired(capped), 1e-2);
        let x_fixed = sim::ebn0_at_fer(&paired(exact.with_arithmetic(Arithmetic::Fixed)), 1e-2);
        match (x_exact, x_caps, x_fixed) {
            (Some(x0), Some(xc), Some(xf)) => {
                out.check(xc - x0 < 0.05, format!("{name}: fork caps (2,3,3) loss at FER 1e-2 {:.3} dB (< 0.05)", xc - x0));
                out.check(xf - x0 < 0.1, format!("{name}: Q6.2/Q7.0 loss at FER 1e-2 {:.3} dB (< 0.1)", xf - x0));
            }
            other => out.check(false, format!("{name}: FER 1e-2 not bracketed by {gap_points:?}: {other:?}")),
        }
        out.note(format!("{name}: {:.0?}", t.elapsed()));
    }
    out
}

fn rm_neutrality() -> Outcome {
    let mut out = Outcome::new();
    let cases = [
        (Channel::Downlink, 140, 432),
        (Channel::Downlink, 100, 140),
        (Channel::Uplink, 200, 256),
        (Channel::Uplink, 100, 1200),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    for (channel, a, e) in cases {
        let cfg = construction::resolve_config(channel, a, e).expect("config");
        let roles = construction::frozen_set(&cfg);
        for arith in [Arithmetic::Float, Arithmetic::Fixed] {
            let on = DecoderParams::sr_list(8).with_arithmetic(arith);
            let off = DecoderParams { rm_adaptation: false, ..on };
            let (d_on, d_off) = (SrListDecoder::new(&cfg, &on).expect("decoder"), SrListDecoder::new(&cfg, &off).expect("decoder"));
            let frames = 1_000;
            let (mut diff, mut errors) = (0, 0);
            for _ in 0..frames {
                let msg: Vec<u8> = (0..a).map(|_| rng.random_range(0..2u8)).collect();
                let x = construction::encode_block(&msg, &cfg, &roles).expect("encode");
                let tx = construction::rate_match(&x, &cfg).expect("rate match");
                let llr = sim::awgn_bpsk_llr(&tx, 1.5, cfg.rate(), &mut rng);
                let (r1, r2) = (d_on.decode(&llr).expect("decode"), d_off.decode(&llr).expect("decode"));
                if r1.message != r2.message || r1.crc_pass != r2.crc_pass {
                    diff += 1;
                }
                errors += (r1.message != msg) as u32;
            }
            out.check(
                diff == 0,
                format!(
                    "{channel:?} A={a} E={e} {:?} {arith:?}: {diff} differing of {frames} frames ({errors} frame errors, {} promotions)",
                    cfg.rate_matching,
                    d_on.schedule().promotions
                ),
            );
        }
    }
    out
}

fn main() {
    let wanted: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let criteria: [Criterion; 7] = [
        (1, "oracle equivalence", oracle_equivalence),
        (2, "sequence LLR and PM identities", sequence_identities),
        (3, "partial rank-order sorter", sorter_check),
        (4, "PDCCH node distribution", node_census),
        (5, "latency model", latency_model),
        (6, "FER at desk scale", fer_desk_scale),
        (7, "rate-matching adaptation neutrality", rm_neutrality),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        if !wanted.is_empty() && !wanted.contains(&id) {
            continue;
        }
        let t = Instant::now();
        let outcome = run();
        println!("criterion {id} {name}: {} ({:.1?})", if outcome.pass { "PASS" } else { "FAIL" }, t.elapsed());
        for line in &outcome.details {
            println!("    {line}");
        }
        failed += !outcome.pass as usize;
    }
    println!("acceptance: {failed} failing criteria");
    if failed > 0 && std::env::var("POLARLAB_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
