//! SR-List decoding: node-level list decoding of rate-0, repetition, G-PC
//! and SR nodes driven by a [`DecodeSchedule`], with lazily copied path
//! memory and CRC-aided final selection.
//!
//! Every list-decodable node is handled in its SR form. The first part
//! (SR-I) evaluates each repetition sequence `S^k` for every path, sums the
//! sign-adjusted blocks of the node LLRs into source LLRs, takes the
//! parity-corrected hard decision of the source and keeps the `L` best of
//! the `|S|·L` candidates. The second part (SR-II) forks the source bits
//! one at a time in order of increasing reliability, keeping `L` of `2L`
//! candidates per step. Partial sums are kept as `u64` bit masks since
//! nodes hold at most 64 leaves.

use std::collections::HashMap;

use crate::construction::{self, BitRoles, CodeConfig};
use crate::error::{Error, Result};
use crate::kernel::{self, hard_decision, Arithmetic};
use crate::nodes::{self, DecodeSchedule, Instruction, ScheduledNode, SrDescriptor};
use crate::params::DecoderParams;
use crate::sorter::select_smallest;

/// Repetition sequences of an SR node, indexed by `k`.
///
/// Bit `b` of `k` is the decision of the `b`-th repetition sibling from the
/// top; rate-0 siblings always decide 0. Entry `m` of a sequence is the XOR
/// of the decisions of the siblings met at depths `t` where bit `t` of `m`
/// (most significant first) is 0.
pub fn gen_sequences(v: &[bool], smax: usize) -> Result<Vec<Vec<u8>>> {
    let depth = v.len();
    let reps: Vec<usize> = (0..depth).filter(|&t| v[t]).collect();
    let count = 1usize << reps.len();
    if count > smax {
        return Err(Error::SequenceBudgetExceeded { needed: count, budget: smax });
    }
    let blocks = 1usize << depth;
    Ok((0..count)
        .map(|k| {
            let mut eta = vec![0u8; depth];
            for (b, &t) in reps.iter().enumerate() {
                eta[t] = ((k >> b) & 1) as u8;
            }
            (0..blocks)
                .map(|m| (0..depth).filter(|&t| (m >> (depth - 1 - t)) & 1 == 0).fold(0u8, |acc, t| acc ^ eta[t]))
                .collect()
        })
        .collect())
}

/// Source-node LLRs `λ_r[j] = Σ_m (1 - 2 S[m]) λ_s[m·2^r + j]`.
///
/// In fixed point the sum is formed exactly and saturated once.
pub fn source_llr(llr_s: &[f64], seq: &[u8], arith: Arithmetic) -> Vec<f64> {
    let nr = llr_s.len() / seq.len();
    (0..nr)
        .map(|j| {
            let sum: f64 = seq.iter().enumerate().map(|(m, &b)| if b == 0 { llr_s[m * nr + j] } else { -llr_s[m * nr + j] }).sum();
            arith.saturate(sum)
        })
        .collect()
}

/// Node partial sum from the source partial sum: block `m` is `β_r ⊕ S[m]`.
pub fn sr_psum_expand(beta_r: &[u8], seq: &[u8]) -> Vec<u8> {
    seq.iter().flat_map(|&s| beta_r.iter().map(move |&b| b ^ s)).collect()
}

fn expand_mask(beta_r: u64, nr: usize, seq: &[u8]) -> u64 {
    let ones = if nr == 64 { u64::MAX } else { (1u64 << nr) - 1 };
    seq.iter().enumerate().fold(0u64, |acc, (m, &s)| acc | (if s == 0 { beta_r } else { beta_r ^ ones }) << (m * nr))
}

fn mask_discrepancy(llr: &[f64], beta: u64) -> f64 {
    llr.iter().enumerate().filter(|&(j, &l)| hard_decision(l) != ((beta >> j) & 1) as u8).map(|(_, l)| l.abs()).sum()
}

/// Maximum-likelihood decision of a G-PC source node.
#[derive(Debug, Clone, PartialEq)]
pub struct GpcPrepared {
    /// Hard decision with the least reliable bit of every odd-parity group flipped.
    pub beta: u64,
    /// Least reliable position of each parity group (lowest index on ties).
    pub eps: Vec<usize>,
    /// Parity of each group's hard decision before correction.
    pub gamma: Vec<u8>,
    /// Path-metric cost of the corrections.
    pub penalty: f64,
}

/// Wagner decoding of the `np` interleaved parity groups (`j mod np`).
/// Positions in `forced` are known zeros; `np = 0` is a plain hard decision.
pub fn gpc_prepare(llr_r: &[f64], np: usize, forced: u64) -> GpcPrepared {
    let mut beta = 0u64;
    for (j, &l) in llr_r.iter().enumerate() {
        if forced >> j & 1 == 0 && hard_decision(l) == 1 {
            beta |= 1 << j;
        }
    }
    let mut eps = Vec::with_capacity(np);
    let mut gamma = Vec::with_capacity(np);
    let mut penalty = 0.0;
    for q in 0..np {
        let mut best = q;
        let mut parity = 0u8;
        for j in (q..llr_r.len()).step_by(np) {
            parity ^= ((beta >> j) & 1) as u8;
            if llr_r[j].abs() < llr_r[best].abs() {
                best = j;
            }
        }
        if parity == 1 {
            beta ^= 1 << best;
            penalty += llr_r[best].abs();
        }
        eps.push(best);
        gamma.push(parity);
    }
    GpcPrepared { beta, eps, gamma, penalty }
}

/// LLRs and path metric of one path entering a node.
#[derive(Debug, Clone, Copy)]
pub struct NodeInput<'a> {
    pub llr: &'a [f64],
    pub pm: f64,
}

/// One SR-I candidate: parent path `parent` under repetition sequence `seq`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sr1Candidate {
    pub parent: usize,
    pub seq: usize,
    pub source_llr: Vec<f64>,
    pub prepared: GpcPrepared,
    /// Path metric of the candidate's most likely node codeword.
    pub pm: f64,
}

/// All `|S|·P` SR-I candidates, ordered by `(parent, seq)`.
pub fn sr1_candidates(
    parents: &[NodeInput],
    d: &SrDescriptor,
    seqs: &[Vec<u8>],
    forced: u64,
    arith: Arithmetic,
) -> Vec<Sr1Candidate> {
    let nr = d.source_len();
    let mut out = Vec::with_capacity(parents.len() * seqs.len());
    for (l, input) in parents.iter().enumerate() {
        for (k, seq) in seqs.iter().enumerate() {
            let lr = source_llr(input.llr, seq, arith);
            let prepared = gpc_prepare(&lr, d.np, forced);
            let hd_only = gpc_prepare(&lr, 0, forced).beta;
            let cost = mask_discrepancy(input.llr, expand_mask(hd_only, nr, seq)) + prepared.penalty;
            let pm = arith.pm_add(input.pm, cost);
            out.push(Sr1Candidate { parent: l, seq: k, source_llr: lr, prepared, pm });
        }
    }
    out
}

/// SR-I list decoding: the `L` best candidates (all when there are at most
/// `L`), ordered by `(parent, seq)`.
pub fn sr1_decode(
    parents: &[NodeInput],
    d: &SrDescriptor,
    seqs: &[Vec<u8>],
    forced: u64,
    params: &DecoderParams,
) -> Vec<Sr1Candidate> {
    let cands = sr1_candidates(parents, d, seqs, forced, params.arithmetic);
    if cands.len() <= params.list_size {
        return cands;
    }
    let keys: Vec<f64> = cands.iter().map(|c| c.pm).collect();
    let keep = select_smallest(&keys, params.list_size);
    let mut slots: Vec<Option<Sr1Candidate>> = cands.into_iter().map(Some).collect();
    keep.into_iter().map(|i| slots[i].take().expect("distinct indices")).collect()
}

/// A path leaving a list-decoded node.
#[derive(Debug, Clone, PartialEq)]
pub struct NodePath {
    /// Index of the path that entered the node.
    pub parent: usize,
    pub seq: usize,
    /// Source-node partial sum.
    pub beta_r: u64,
    pub pm: f64,
}

struct ForkState {
    cand: usize,
    beta: u64,
    pm: f64,
    cursor: usize,
    eps_flipped: u64,
}

/// SR-II list decoding: fork the source bits of every survivor in order of
/// increasing reliability, keeping `L` of `2L` candidates per step.
///
/// A flip of position `i` in parity group `q` also flips the group's least
/// reliable bit `ε_q`; its cost is `|λ_i| - |λ_ε|` when `ε_q` currently
/// differs from its hard decision and `|λ_i| + |λ_ε|` otherwise.
pub fn sr2_fork(survivors: &[Sr1Candidate], np: usize, forced: u64, params: &DecoderParams) -> Vec<NodePath> {
    let arith = params.arithmetic;
    // Fork order per survivor: positions by initial cost, excluding ε and forced bits.
    let orders: Vec<Vec<usize>> = survivors
        .iter()
        .map(|c| {
            let lr = &c.source_llr;
            let p = &c.prepared;
            let zeta = |j: usize| {
                if np == 0 {
                    lr[j].abs()
                } else {
                    let q = j % np;
                    let e = lr[p.eps[q]].abs();
                    if p.gamma[q] == 1 {
                        lr[j].abs() - e
                    } else {
                        lr[j].abs() + e
                    }
                }
            };
            let mut order: Vec<usize> =
                (0..lr.len()).filter(|&j| forced >> j & 1 == 0 && !p.eps.contains(&j)).collect();
            order.sort_by(|&a, &b| zeta(a).total_cmp(&zeta(b)).then(a.cmp(&b)));
            order
        })
        .collect();
    let free = orders.first().map_or(0, Vec::len);
    let steps = params.fork_limits.forks(params.list_size, np, free);
    let mut paths: Vec<ForkState> = survivors
        .iter()
        .enumerate()
        .map(|(i, c)| ForkState {
            cand: i,
            beta: c.prepared.beta,
            pm: c.pm,
            cursor: 0,
            eps_flipped: c.prepared.gamma.iter().enumerate().fold(0, |acc, (q, &g)| acc | (g as u64) << q),
        })
        .collect();
    for _ in 0..steps {
        let mut keys = Vec::with_capacity(2 * paths.len());
        for st in &paths {
            keys.push(st.pm);
            let c = &survivors[st.cand];
            keys.push(match orders[st.cand].get(st.cursor) {
                Some(&i) => {
                    let lr = &c.source_llr;
                    let delta = if np == 0 {
                        lr[i].abs()
                    } else {
                        let q = i % np;
                        let e = lr[c.prepared.eps[q]].abs();
                        if st.eps_flipped >> q & 1 == 1 {
                            lr[i].abs() - e
                        } else {
                            lr[i].abs() + e
                        }
                    };
                    arith.pm_add(st.pm, delta)
                }
                None => f64::INFINITY,
            });
        }
        let valid: Vec<usize> = (0..keys.len()).filter(|&i| keys[i].is_finite()).collect();
        let chosen: Vec<usize> = if valid.len() <= params.list_size {
            valid
        } else {
            let vkeys: Vec<f64> = valid.iter().map(|&i| keys[i]).collect();
            select_smallest(&vkeys, params.list_size).into_iter().map(|i| valid[i]).collect()
        };
        paths = chosen
            .into_iter()
            .map(|idx| {
                let st = &paths[idx / 2];
                let mut next = ForkState {
                    cand: st.cand,
                    beta: st.beta,
                    pm: keys[idx],
                    cursor: st.cursor + 1,
                    eps_flipped: st.eps_flipped,
                };
                if idx % 2 == 1 {
                    let i = orders[st.cand][st.cursor];
                    next.beta ^= 1 << i;
                    if np > 0 {
                        let q = i % np;
                        next.beta ^= 1 << survivors[st.cand].prepared.eps[q];
                        next.eps_flipped ^= 1 << q;
                    }
                }
                next
            })
            .collect();
    }
    paths
        .into_iter()
        .map(|st| {
            let c = &survivors[st.cand];
            NodePath { parent: c.parent, seq: c.seq, beta_r: st.beta, pm: st.pm }
        })
        .collect()
}

/// A path leaving a scheduled node, with the node's full partial sum.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeOutput {
    pub parent: usize,
    pub beta: u64,
    pub pm: f64,
}

/// List-decode one scheduled node for all entering paths.
pub fn decode_node(parents: &[NodeInput], node: &ScheduledNode, params: &DecoderParams) -> Result<Vec<NodeOutput>> {
    let arith = params.arithmetic;
    let Some(d) = node.list_form() else {
        return Ok(parents
            .iter()
            .enumerate()
            .map(|(l, p)| NodeOutput { parent: l, beta: 0, pm: arith.pm_add(p.pm, mask_discrepancy(p.llr, 0)) })
            .collect());
    };
    let seqs = gen_sequences(&d.v, usize::MAX)?;
    let survivors = sr1_decode(parents, &d, &seqs, node.forced, params);
    let paths = sr2_fork(&survivors, d.np, node.forced, params);
    let nr = d.source_len();
    Ok(paths
        .into_iter()
        .map(|p| NodeOutput { parent: p.parent, beta: expand_mask(p.beta_r, nr, &seqs[p.seq]), pm: p.pm })
        .collect())
}

/// Reference-counted slots of equal-length buffers.
#[derive(Debug, Clone)]
struct Pool<T> {
    data: Vec<Vec<T>>,
    refs: Vec<u32>,
    free: Vec<usize>,
    len: usize,
}

impl<T: Copy + Default> Pool<T> {
    fn new(len: usize) -> Self {
        Self { data: vec![vec![T::default(); len]], refs: vec![1], free: Vec::new(), len }
    }

    fn alloc(&mut self) -> usize {
        if let Some(s) = self.free.pop() {
            self.refs[s] = 1;
            s
        } else {
            self.data.push(vec![T::default(); self.len]);
            self.refs.push(1);
            self.data.len() - 1
        }
    }

    fn retain(&mut self, slot: usize) {
        self.refs[slot] += 1;
    }

    fn release(&mut self, slot: usize) {
        self.refs[slot] -= 1;
        if self.refs[slot] == 0 {
            self.free.push(slot);
        }
    }

    /// A slot exclusively owned by the caller holding `slot`, copying the
    /// content when `keep` is set and the slot was shared.
    fn make_unique(&mut self, slot: usize, keep: bool) -> usize {
        if self.refs[slot] == 1 {
            return slot;
        }
        self.release(slot);
        let fresh = self.alloc();
        if keep {
            let (src, dst) = if slot < fresh {
                let (a, b) = self.data.split_at_mut(fresh);
                (&a[slot], &mut b[0])
            } else {
                let (a, b) = self.data.split_at_mut(slot);
                (&b[0], &mut a[fresh])
            };
            dst.copy_from_slice(src);
        }
        fresh
    }
}

#[derive(Debug, Clone)]
struct PathHandles {
    /// LLR slot per stage `0..n`.
    llr: Vec<usize>,
    /// Partial-sum slot per level `0..=n+1` (level `t` holds `2^t` bits).
    psum: Vec<usize>,
    pm: f64,
}

/// The decoding paths of one frame: per-stage LLR and partial-sum memories
/// shared between paths until a path writes to them.
#[derive(Debug, Clone)]
pub struct PathSet {
    log_len: u32,
    channel: Vec<f64>,
    llr: Vec<Pool<f64>>,
    psum: Vec<Pool<u8>>,
    paths: Vec<PathHandles>,
}

const CHANNEL_SLOT: usize = usize::MAX;

impl PathSet {
    /// One path with zero partial sums and path metric 0.
    pub fn new(channel: Vec<f64>) -> Self {
        let n = channel.len().trailing_zeros();
        let llr = (0..n).map(|s| Pool::new(1 << s)).collect();
        let psum = (0..=n + 1).map(|t| Pool::new(1 << t)).collect();
        let path = PathHandles { llr: vec![0; n as usize], psum: vec![0; n as usize + 2], pm: 0.0 };
        Self { log_len: n, channel, llr, psum, paths: vec![path] }
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn path_metrics(&self) -> Vec<f64> {
        self.paths.iter().map(|p| p.pm).collect()
    }

    fn llr_of(&self, path: usize, stage: u32) -> &[f64] {
        if stage == self.log_len {
            &self.channel
        } else {
            &self.llr[stage as usize].data[self.paths[path].llr[stage as usize]]
        }
    }

    fn llr_slot(&self, path: usize, stage: u32) -> usize {
        if stage == self.log_len {
            CHANNEL_SLOT
        } else {
            self.paths[path].llr[stage as usize]
        }
    }

    /// Partial sum of level `t`, half `h`.
    fn psum_half(&self, path: usize, t: u32, h: usize) -> &[u8] {
        let buf = &self.psum[t as usize].data[self.paths[path].psum[t as usize]];
        let half = buf.len() / 2;
        &buf[h * half..(h + 1) * half]
    }

    fn descend(&mut self, stage: u32, index: usize, arith: Arithmetic) {
        let s = stage as usize;
        let half = 1usize << stage;
        let right = index & 1 == 1;
        let mut done: HashMap<(usize, usize), usize> = HashMap::new();
        let mut tmp = vec![0.0; half];
        for p in 0..self.paths.len() {
            let key = (self.llr_slot(p, stage + 1), if right { self.paths[p].psum[s + 1] } else { CHANNEL_SLOT });
            if let Some(&slot) = done.get(&key) {
                let old = self.paths[p].llr[s];
                if old != slot {
                    self.llr[s].retain(slot);
                    self.llr[s].release(old);
                    self.paths[p].llr[s] = slot;
                }
                continue;
            }
            {
                let parent = self.llr_of(p, stage + 1);
                if right {
                    let z = self.psum_half(p, stage + 1, 0);
                    for j in 0..half {
                        tmp[j] = arith.g(parent[j], parent[j + half], z[j]);
                    }
                } else {
                    for j in 0..half {
                        tmp[j] = arith.f(parent[j], parent[j + half]);
                    }
                }
            }
            let slot = self.llr[s].make_unique(self.paths[p].llr[s], false);
            self.paths[p].llr[s] = slot;
            self.llr[s].data[slot].copy_from_slice(&tmp);
            done.insert(key, slot);
        }
    }

    fn write_psum(&mut self, p: usize, t: usize, h: usize, bits: impl Iterator<Item = u8>) {
        let slot = self.psum[t].make_unique(self.paths[p].psum[t], true);
        self.paths[p].psum[t] = slot;
        let buf = &mut self.psum[t].data[slot];
        let half = buf.len() / 2;
        for (dst, b) in buf[h * half..(h + 1) * half].iter_mut().zip(bits) {
            *dst = b;
        }
    }

    fn combine(&mut self, stage: u32, index: usize) {
        let s = stage as usize;
        let h = index & 1;
        let mut done: HashMap<(usize, usize), usize> = HashMap::new();
        for p in 0..self.paths.len() {
            let key = (self.paths[p].psum[s], self.paths[p].psum[s + 1]);
            if let Some(&slot) = done.get(&key) {
                let old = self.paths[p].psum[s + 1];
                self.psum[s + 1].retain(slot);
                self.psum[s + 1].release(old);
                self.paths[p].psum[s + 1] = slot;
                continue;
            }
            let merged = {
                let left = self.psum_half(p, stage, 0);
                let right = self.psum_half(p, stage, 1);
                let mut m: Vec<u8> = left.iter().zip(right).map(|(a, b)| a ^ b).collect();
                m.extend_from_slice(right);
                m
            };
            self.write_psum(p, s + 1, h, merged.into_iter());
            done.insert(key, self.paths[p].psum[s + 1]);
        }
    }

    /// Replace the paths by the node outputs (each derived from its parent).
    fn apply_node(&mut self, node: &ScheduledNode, outputs: Vec<NodeOutput>, normalize: bool) {
        let mut next: Vec<PathHandles> = Vec::with_capacity(outputs.len());
        for o in &outputs {
            let parent = &self.paths[o.parent];
            for (s, &slot) in parent.llr.iter().enumerate() {
                self.llr[s].retain(slot);
            }
            for (t, &slot) in parent.psum.iter().enumerate() {
                self.psum[t].retain(slot);
            }
            next.push(PathHandles { pm: o.pm, ..parent.clone() });
        }
        for old in std::mem::replace(&mut self.paths, next) {
            for (s, slot) in old.llr.into_iter().enumerate() {
                self.llr[s].release(slot);
            }
            for (t, slot) in old.psum.into_iter().enumerate() {
                self.psum[t].release(slot);
            }
        }
        let t = node.stage as usize + 1;
        let h = node.index & 1;
        let len = node.len();
        for (p, o) in outputs.iter().enumerate() {
            self.write_psum(p, t, h, (0..len).map(|j| ((o.beta >> j) & 1) as u8));
        }
        if normalize {
            let min = self.paths.iter().map(|p| p.pm).fold(f64::INFINITY, f64::min);
            for p in &mut self.paths {
                p.pm -= min;
            }
        }
    }

    /// Codeword of every path (the root partial sum).
    fn codewords(&self) -> Vec<Vec<u8>> {
        (0..self.paths.len()).map(|p| self.psum_half(p, self.log_len + 1, 0).to_vec()).collect()
    }
}

/// A surviving path of the SR-List decoder.
#[derive(Debug, Clone, PartialEq)]
pub struct ListPath {
    /// Decided input vector.
    pub u: Vec<u8>,
    pub codeword: Vec<u8>,
    pub pm: f64,
}

/// Run `schedule` on mother-code LLRs. Returns the surviving paths sorted by
/// path metric (ties keep list order).
pub fn decode_codeword(llr: &[f64], schedule: &DecodeSchedule, params: &DecoderParams) -> Result<Vec<ListPath>> {
    if llr.len() != schedule.len() {
        return Err(Error::LengthMismatch { expected: schedule.len(), actual: llr.len() });
    }
    let arith = params.arithmetic;
    let normalize = arith == Arithmetic::Fixed;
    let mut set = PathSet::new(llr.iter().map(|&x| arith.quantize(x)).collect());
    for ins in &schedule.instructions {
        match ins {
            Instruction::Descend { stage, index, .. } => set.descend(*stage, *index, arith),
            Instruction::Combine { stage, index } => set.combine(*stage, *index),
            Instruction::Decode(node) => {
                let outputs = {
                    let inputs: Vec<NodeInput> = (0..set.len())
                        .map(|p| {
                            NodeInput { llr: set.llr_of(p, node.stage), pm: set.paths[p].pm }
                        })
                        .collect();
                    decode_node(&inputs, node, params)?
                };
                set.apply_node(node, outputs, normalize);
            }
        }
    }
    let pms = set.path_metrics();
    let mut out: Vec<ListPath> = set
        .codewords()
        .into_iter()
        .zip(pms)
        .map(|(x, pm)| {
            let u = kernel::encode(&x).expect("power-of-two length");
            ListPath { u, codeword: x, pm }
        })
        .collect();
    out.sort_by(|a, b| a.pm.total_cmp(&b.pm));
    Ok(out)
}

/// Final record of one list path.
#[derive(Debug, Clone, PartialEq)]
pub struct PathRecord {
    /// Message and CRC bits in transmission order.
    pub bits: Vec<u8>,
    pub pm: f64,
    pub crc_pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecodeResult {
    pub message: Vec<u8>,
    pub crc_pass: bool,
    pub chosen_pm: f64,
    /// All surviving paths, sorted by path metric.
    pub all_paths: Vec<PathRecord>,
}

/// SR-List decoder for one code configuration.
#[derive(Debug, Clone)]
pub struct SrListDecoder {
    config: CodeConfig,
    roles: BitRoles,
    schedule: DecodeSchedule,
    params: DecoderParams,
}

impl SrListDecoder {
    pub fn new(config: &CodeConfig, params: &DecoderParams) -> Result<Self> {
        let roles = construction::frozen_set(config);
        let schedule = nodes::build_schedule(&roles, params)?;
        Ok(Self { config: config.clone(), roles, schedule, params: *params })
    }

    pub fn config(&self) -> &CodeConfig {
        &self.config
    }

    pub fn roles(&self) -> &BitRoles {
        &self.roles
    }

    pub fn schedule(&self) -> &DecodeSchedule {
        &self.schedule
    }

    pub fn params(&self) -> &DecoderParams {
        &self.params
    }

    /// Decode `E` received LLRs and pick the best CRC-passing path (the best
    /// path when none passes).
    pub fn decode(&self, llr_e: &[f64]) -> Result<DecodeResult> {
        if llr_e.len() != self.config.e {
            return Err(Error::ConfigMismatch { expected: self.config.e, actual: llr_e.len() });
        }
        let llr = construction::rate_recover(llr_e, &self.config, self.params.arithmetic)?;
        let paths = decode_codeword(&llr, &self.schedule, &self.params)?;
        select_by_crc(&paths, &self.config, &self.roles)
    }
}

/// CRC-aided selection over list paths sorted by path metric.
pub fn select_by_crc(paths: &[ListPath], config: &CodeConfig, roles: &BitRoles) -> Result<DecodeResult> {
    let mut records = Vec::with_capacity(paths.len());
    for p in paths {
        let bits = construction::extract_block(&p.u, config, roles)?;
        let crc_pass = construction::crc_check(&bits, config)?;
        records.push(PathRecord { bits, pm: p.pm, crc_pass });
    }
    let chosen = records.iter().find(|r| r.crc_pass).or(records.first()).expect("at least one path");
    Ok(DecodeResult {
        message: chosen.bits[..config.a].to_vec(),
        crc_pass: chosen.crc_pass,
        chosen_pm: chosen.pm,
        all_paths: records,
    })
}

/// One-shot decode of `E` received LLRs.
pub fn decode(llr_e: &[f64], config: &CodeConfig, params: &DecoderParams) -> Result<DecodeResult> {
    SrListDecoder::new(config, params)?.decode(llr_e)
}
