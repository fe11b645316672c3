//! Decode-tree node analysis: classification of leaf-role patterns, SR
//! decomposition, the instruction-level decode schedule and the node census
//! over 5G configurations.
//!
//! A node at stage `s` with index `i` covers leaves `i·2^s .. (i+1)·2^s`.
//! An SR node is described top-down by `v`: entry `t` says whether the left
//! child met at depth `t` on the way to the source is rate-0 (`false`) or a
//! repetition node (`true`). The source is a G-PC node, i.e. `N_p` frozen
//! leaves followed by information leaves, with `N_p` zero or a power of two.

use std::collections::{BTreeMap, HashMap};

use crate::construction::{self, BitRoles, Channel, RateMatching};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::latency;
use crate::params::{DecoderParams, NodeSet};

/// A subtree of the decoding tree and its leaf-role pattern (`true` = information).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeDescriptor {
    pub stage: u32,
    pub index: usize,
    pub pattern: Vec<bool>,
}

impl NodeDescriptor {
    pub fn from_roles(roles: &BitRoles, stage: u32, index: usize) -> Self {
        let start = index << stage;
        let pattern = (start..start + (1 << stage)).map(|i| roles.is_info(i)).collect();
        Self { stage, index, pattern }
    }

    pub fn len(&self) -> usize {
        self.pattern.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pattern.is_empty()
    }

    pub fn info_count(&self) -> usize {
        self.pattern.iter().filter(|&&b| b).count()
    }
}

/// Parametrization of an SR node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SrDescriptor {
    /// Left-sibling types from the top down: `false` rate-0, `true` repetition.
    pub v: Vec<bool>,
    /// Parity groups of the source (0 rate-1, 1 SPC, 2 TYPE-III).
    pub np: usize,
    /// Stage of the source node.
    pub source_stage: u32,
}

impl SrDescriptor {
    /// Stage of the SR node itself.
    pub fn stage(&self) -> u32 {
        self.source_stage + self.v.len() as u32
    }

    /// Number of repetition siblings.
    pub fn rep_count(&self) -> u32 {
        self.v.iter().filter(|&&b| b).count() as u32
    }

    /// Size of the repetition-sequence set, `2^rep_count`.
    pub fn seq_count(&self) -> usize {
        1 << self.rep_count()
    }

    pub fn source_len(&self) -> usize {
        1 << self.source_stage
    }

    /// Information bits of the source node.
    pub fn source_info(&self) -> usize {
        self.source_len() - self.np
    }

    /// Rebuild the leaf pattern this descriptor stands for.
    pub fn expand_pattern(&self) -> Vec<bool> {
        let mut cur: Vec<bool> = (0..self.source_len()).map(|j| j >= self.np).collect();
        for &rep in self.v.iter().rev() {
            let len = cur.len();
            let mut left = vec![false; len];
            if rep {
                left[len - 1] = true;
            }
            left.extend(cur);
            cur = left;
        }
        cur
    }
}

/// Most specific type of a leaf-role pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeType {
    Rate0,
    Rate1,
    Rep,
    Spc,
    Type3,
    /// G-PC node with `np >= 4` parity groups.
    Gpc { np: usize },
    /// Decomposable into rate-0/repetition siblings and a G-PC source.
    SrCompatible(SrDescriptor),
    Generic,
}

/// Prefix sums over a leaf-role vector for constant-time pattern queries.
#[derive(Debug, Clone)]
struct CodeView {
    info_prefix: Vec<u32>,
    short_prefix: Vec<u32>,
    /// `next_info[p]`: first information index `>= p` (or `len`).
    next_info: Vec<usize>,
}

impl CodeView {
    fn new(info: impl Iterator<Item = bool>, shortened: impl Iterator<Item = bool>) -> Self {
        let info: Vec<bool> = info.collect();
        let shortened: Vec<bool> = shortened.collect();
        let len = info.len();
        let mut info_prefix = vec![0u32; len + 1];
        let mut short_prefix = vec![0u32; len + 1];
        for p in 0..len {
            info_prefix[p + 1] = info_prefix[p] + info[p] as u32;
            short_prefix[p + 1] = short_prefix[p] + shortened[p] as u32;
        }
        let mut next_info = vec![len; len + 1];
        for p in (0..len).rev() {
            next_info[p] = if info[p] { p } else { next_info[p + 1] };
        }
        Self { info_prefix, short_prefix, next_info }
    }

    fn from_pattern(pattern: &[bool]) -> Self {
        Self::new(pattern.iter().copied(), std::iter::repeat_n(false, pattern.len()))
    }

    fn from_roles(roles: &BitRoles) -> Self {
        Self::new((0..roles.len()).map(|i| roles.is_info(i)), (0..roles.len()).map(|i| roles.is_shortened(i)))
    }

    fn info(&self, start: usize, len: usize) -> usize {
        (self.info_prefix[start + len] - self.info_prefix[start]) as usize
    }

    fn shortened(&self, start: usize, len: usize) -> usize {
        (self.short_prefix[start + len] - self.short_prefix[start]) as usize
    }

    fn is_rep(&self, start: usize, len: usize) -> bool {
        self.info(start, len) == 1 && self.next_info[start] == start + len - 1
    }

    /// Parity-group count if the range is a G-PC pattern.
    fn gpc_np(&self, start: usize, len: usize) -> Option<usize> {
        let k = self.info(start, len);
        if k == 0 {
            return None;
        }
        let np = len - k;
        let suffix = self.next_info[start] == start + np;
        (suffix && (np == 0 || np.is_power_of_two())).then_some(np)
    }

    fn extract_sr(&self, start: usize, len: usize, smax: usize, np_max: usize) -> Option<SrDescriptor> {
        if self.info(start, len) == 0 {
            return None;
        }
        let (mut start, mut len) = (start, len);
        let mut v = Vec::new();
        loop {
            if let Some(np) = self.gpc_np(start, len) {
                if np <= np_max {
                    let d = SrDescriptor { v, np, source_stage: len.trailing_zeros() };
                    return (d.seq_count() <= smax).then_some(d);
                }
            }
            if len == 1 {
                return None;
            }
            let half = len / 2;
            if self.info(start, half) == 0 {
                v.push(false);
            } else if self.is_rep(start, half) {
                v.push(true);
            } else {
                return None;
            }
            if 1usize << v.iter().filter(|&&b| b).count() > smax {
                return None;
            }
            start += half;
            len = half;
        }
    }
}

/// Classify a leaf-role pattern (length must be a power of two).
pub fn classify_node(pattern: &[bool]) -> NodeType {
    let view = CodeView::from_pattern(pattern);
    let len = pattern.len();
    let k = view.info(0, len);
    if k == 0 {
        return NodeType::Rate0;
    }
    if k == len {
        return NodeType::Rate1;
    }
    if view.is_rep(0, len) {
        return NodeType::Rep;
    }
    match view.gpc_np(0, len) {
        Some(1) => return NodeType::Spc,
        Some(2) => return NodeType::Type3,
        Some(np) => return NodeType::Gpc { np },
        None => {}
    }
    match view.extract_sr(0, len, usize::MAX, usize::MAX) {
        Some(d) => NodeType::SrCompatible(d),
        None => NodeType::Generic,
    }
}

/// Find the SR decomposition of `pattern` whose source is the shallowest
/// G-PC node with at most `np_max` parity groups, subject to `|S| <= smax`.
pub fn extract_sr(pattern: &[bool], smax: usize, np_max: usize) -> Result<SrDescriptor> {
    if !pattern.len().is_power_of_two() {
        return Err(Error::LengthNotPowerOfTwo(pattern.len()));
    }
    CodeView::from_pattern(pattern)
        .extract_sr(0, pattern.len(), smax, np_max)
        .ok_or(Error::NotSrCompatible)
}

/// How a scheduled node is decoded.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Rate0,
    Rep,
    /// G-PC node decoded directly (`np = 0` rate-1, 1 SPC, 2 TYPE-III).
    Gpc { np: usize },
    /// SR node with at least one left sibling.
    Sr(SrDescriptor),
}

/// A node handed to the node decoder.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScheduledNode {
    pub stage: u32,
    pub index: usize,
    pub kind: NodeKind,
    /// Information leaves decided by this node.
    pub info_count: usize,
    /// Local codeword positions known to be zero (shortened bits of a
    /// node promoted to rate-1).
    pub forced: u64,
}

impl ScheduledNode {
    pub fn len(&self) -> usize {
        1 << self.stage
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// First leaf covered by the node.
    pub fn offset(&self) -> usize {
        self.index << self.stage
    }

    /// The node as SR descriptor; repetition nodes become `SR(0…0, R1, 0)`
    /// and G-PC nodes an SR node without siblings. Rate-0 has no list form.
    pub fn list_form(&self) -> Option<SrDescriptor> {
        match &self.kind {
            NodeKind::Rate0 => None,
            NodeKind::Rep => Some(SrDescriptor { v: vec![false; self.stage as usize], np: 0, source_stage: 0 }),
            NodeKind::Gpc { np } => Some(SrDescriptor { v: Vec::new(), np: *np, source_stage: self.stage }),
            NodeKind::Sr(d) => Some(d.clone()),
        }
    }

    /// Free (non-forced) bits of the source node.
    pub fn free_source_bits(&self) -> usize {
        match &self.kind {
            NodeKind::Rate0 => 0,
            NodeKind::Rep => 1,
            NodeKind::Gpc { np } => self.len() - np - self.forced.count_ones() as usize,
            NodeKind::Sr(d) => d.source_info(),
        }
    }
}

/// One step of a decode schedule.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Instruction {
    /// Compute the LLRs of node `(stage, index)` from its parent: `f` for
    /// even indices, `g` with the left sibling's partial sum for odd ones.
    /// `store` marks LLRs written to memory (a pass ends here).
    Descend { stage: u32, index: usize, store: bool },
    Decode(ScheduledNode),
    /// Both children of `(stage, index)` are done: merge their partial sums.
    Combine { stage: u32, index: usize },
}

/// Linear instruction list driving the decoder and the cycle model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeSchedule {
    pub log_len: u32,
    pub instructions: Vec<Instruction>,
    /// Leading frozen leaves whose decoding was skipped.
    pub skipped_prefix: usize,
    /// Nodes promoted to rate-1 because their frozen leaves are all shortened.
    pub promotions: usize,
}

impl DecodeSchedule {
    pub fn len(&self) -> usize {
        1 << self.log_len
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = &ScheduledNode> {
        self.instructions.iter().filter_map(|ins| match ins {
            Instruction::Decode(node) => Some(node),
            _ => None,
        })
    }
}

const INF: u64 = u64::MAX / 4;

#[derive(Debug, Clone, Copy)]
enum Choice {
    Skip,
    Decode,
    SplitStore,
    SplitThrough,
}

struct Builder<'a> {
    view: CodeView,
    params: &'a DecoderParams,
    log_len: u32,
    /// Leaves before this index are frozen and skipped.
    skip_until: usize,
    memo: HashMap<(u32, usize, u32), (u64, Choice)>,
    node_memo: HashMap<(u32, usize), Option<(ScheduledNode, u64)>>,
}

impl<'a> Builder<'a> {
    fn root_origin(&self) -> u32 {
        self.log_len + 1
    }

    fn pass_cost(&self, origin: u32) -> u64 {
        if origin > self.log_len {
            0
        } else {
            (1usize << (origin - 1)).div_ceil(self.params.arch.num_pe) as u64
        }
    }

    fn max_node_stage(&self) -> u32 {
        self.params.ns_max.trailing_zeros()
    }

    fn stride_stage(&self, s: u32) -> bool {
        (self.log_len - s).is_multiple_of(self.params.arch.num_scu)
    }

    fn storable(&self, s: u32) -> bool {
        s == self.log_len || self.stride_stage(s) || (self.params.arch.flexible && s <= self.max_node_stage())
    }

    fn decode_stage_allowed(&self, s: u32) -> bool {
        s <= self.max_node_stage() && (self.params.arch.flexible || s == 0 || self.stride_stage(s))
    }

    /// Cheapest direct decoding of node `(s, i)` and its cycle cost.
    fn best_node(&mut self, s: u32, i: usize) -> Option<(ScheduledNode, u64)> {
        if let Some(hit) = self.node_memo.get(&(s, i)) {
            return hit.clone();
        }
        let found = self.find_node(s, i);
        self.node_memo.insert((s, i), found.clone());
        found
    }

    fn find_node(&self, s: u32, i: usize) -> Option<(ScheduledNode, u64)> {
        let p = self.params;
        let len = 1usize << s;
        let start = i << s;
        let k = self.view.info(start, len);
        let mut options: Vec<ScheduledNode> = Vec::new();
        let node = |kind, info_count, forced| ScheduledNode { stage: s, index: i, kind, info_count, forced };
        if k == 0 {
            options.push(node(NodeKind::Rate0, 0, 0));
        } else if self.view.is_rep(start, len) {
            options.push(node(NodeKind::Rep, 1, 0));
        }
        let np_limit = match p.node_set {
            NodeSet::Basic => p.np_max.min(1),
            NodeSet::SrList => p.np_max,
            NodeSet::SclExact => 0,
        };
        if let Some(np) = self.view.gpc_np(start, len) {
            if np <= np_limit && !(np == 1 && len == 2) {
                options.push(node(NodeKind::Gpc { np }, k, 0));
            }
        }
        if p.node_set != NodeSet::Basic && k > 0 && len <= p.rsu_size && s > 0 {
            if let Some(d) = self.view.extract_sr(start, len, p.smax, np_limit) {
                let exact_form = {
                    let reps = d.rep_count();
                    reps == 0 || (reps == 1 && d.v.last() == Some(&true))
                };
                if !d.v.is_empty() && (p.node_set != NodeSet::SclExact || exact_form) {
                    options.push(node(NodeKind::Sr(d), k, 0));
                }
            }
        }
        if p.rm_adaptation && k > 0 && k < len {
            let shortened = self.view.shortened(start, len);
            if shortened > 0 && shortened + k == len {
                let mut forced = 0u64;
                for j in 0..len {
                    if self.view.info(start + j, 1) == 0 {
                        forced |= 1 << j;
                    }
                }
                options.push(node(NodeKind::Gpc { np: 0 }, k, forced));
            }
        }
        options
            .into_iter()
            .map(|n| {
                let c = latency::node_cost_estimate(&n, p.list_size, p.fork_limits);
                (n, c)
            })
            .min_by_key(|(_, c)| *c)
    }

    fn cost(&mut self, s: u32, i: usize, origin: u32) -> u64 {
        if let Some(&(c, _)) = self.memo.get(&(s, i, origin)) {
            return c;
        }
        let len = 1usize << s;
        let start = i << s;
        let (c, choice) = if start + len <= self.skip_until {
            (0, Choice::Skip)
        } else {
            let pass = self.pass_cost(origin);
            let mut best = (INF, Choice::Decode);
            if self.decode_stage_allowed(s) {
                if let Some((_, cyc)) = self.best_node(s, i) {
                    best = (pass + cyc + 1, Choice::Decode);
                }
            }
            if s > 0 {
                let root = origin > self.log_len;
                if root || self.storable(s) {
                    let inner = if root { 0 } else { pass };
                    let c = inner + self.cost(s - 1, 2 * i, s) + self.cost(s - 1, 2 * i + 1, s);
                    if c < best.0 {
                        best = (c, Choice::SplitStore);
                    }
                }
                if !root && origin - (s - 1) <= self.params.arch.num_scu {
                    let c = self.cost(s - 1, 2 * i, origin) + self.cost(s - 1, 2 * i + 1, origin);
                    if c < best.0 {
                        best = (c, Choice::SplitThrough);
                    }
                }
            }
            best
        };
        self.memo.insert((s, i, origin), (c, choice));
        c
    }

    fn emit(&mut self, s: u32, i: usize, origin: u32, out: &mut Vec<Instruction>, promotions: &mut usize) {
        self.cost(s, i, origin);
        let choice = self.memo[&(s, i, origin)].1;
        let root = origin > self.log_len;
        match choice {
            Choice::Skip => {}
            Choice::Decode => {
                let (node, _) = self.best_node(s, i).expect("decode choice has a node");
                if !root {
                    out.push(Instruction::Descend { stage: s, index: i, store: true });
                }
                if node.forced != 0 {
                    *promotions += 1;
                }
                out.push(Instruction::Decode(node));
            }
            Choice::SplitStore | Choice::SplitThrough => {
                let child_origin = if matches!(choice, Choice::SplitStore) { s } else { origin };
                if !root {
                    out.push(Instruction::Descend { stage: s, index: i, store: matches!(choice, Choice::SplitStore) });
                }
                let mark = out.len();
                self.emit(s - 1, 2 * i, child_origin, out, promotions);
                self.emit(s - 1, 2 * i + 1, child_origin, out, promotions);
                if out.len() > mark {
                    out.push(Instruction::Combine { stage: s, index: i });
                }
            }
        }
    }
}

/// Build the decode schedule for `roles` under `params`.
///
/// Every subtree is either decoded as one node or split, whichever costs
/// fewer modeled cycles (ties favor the larger node). With rate-matching
/// adaptation the all-frozen prefix is skipped and nodes holding only
/// information and shortened leaves are decoded as rate-1.
pub fn build_schedule(roles: &BitRoles, params: &DecoderParams) -> Result<DecodeSchedule> {
    params.validate()?;
    if !roles.len().is_power_of_two() {
        return Err(Error::LengthNotPowerOfTwo(roles.len()));
    }
    let log_len = roles.len().trailing_zeros();
    let first_info = roles.first_info_index();
    let skip_until = match first_info {
        _ if !params.rm_adaptation => 0,
        None => roles.len(),
        Some(f) => f,
    };
    let mut b = Builder {
        view: CodeView::from_roles(roles),
        params,
        log_len,
        skip_until,
        memo: HashMap::new(),
        node_memo: HashMap::new(),
    };
    let mut instructions = Vec::new();
    let mut promotions = 0;
    let root = b.root_origin();
    b.emit(log_len, 0, root, &mut instructions, &mut promotions);
    // Children of a skipped left sibling still need their parent's combine,
    // which `emit` already produces; a fully skipped code yields nothing.
    Ok(DecodeSchedule { log_len, instructions, skipped_prefix: skip_until.min(roles.len()), promotions })
}

/// Occurrence counts of scheduled SR and G-PC nodes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeHistogram {
    /// Keyed by repetition-sequence count `|S|`.
    pub by_seq_count: BTreeMap<usize, u64>,
    /// Keyed by source parity-group count `N_p`.
    pub by_np: BTreeMap<usize, u64>,
    pub total: u64,
    pub configs: u64,
}

impl NodeHistogram {
    fn add_node(&mut self, seq: usize, np: usize, weight: u64) {
        *self.by_seq_count.entry(seq).or_default() += weight;
        *self.by_np.entry(np).or_default() += weight;
        self.total += weight;
    }

    fn merge(mut self, other: NodeHistogram) -> NodeHistogram {
        for (k, v) in other.by_seq_count {
            *self.by_seq_count.entry(k).or_default() += v;
        }
        for (k, v) in other.by_np {
            *self.by_np.entry(k).or_default() += v;
        }
        self.total += other.total;
        self.configs += other.configs;
        self
    }

    fn scaled(mut self, weight: u64) -> NodeHistogram {
        for v in self.by_seq_count.values_mut() {
            *v *= weight;
        }
        for v in self.by_np.values_mut() {
            *v *= weight;
        }
        self.total *= weight;
        self.configs *= weight;
        self
    }

    fn percent_of(&self, count: u64) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            100.0 * count as f64 / self.total as f64
        }
    }

    /// Share of nodes with exactly `seq` repetition sequences, in percent.
    pub fn seq_percent(&self, seq: usize) -> f64 {
        self.percent_of(self.by_seq_count.get(&seq).copied().unwrap_or(0))
    }

    /// Share of nodes with at most `seq` repetition sequences, in percent.
    pub fn seq_percent_at_most(&self, seq: usize) -> f64 {
        self.percent_of(self.by_seq_count.range(..=seq).map(|(_, v)| v).sum())
    }

    /// Share of nodes whose source has `np` parity groups, in percent.
    pub fn np_percent(&self, np: usize) -> f64 {
        self.percent_of(self.by_np.get(&np).copied().unwrap_or(0))
    }

    /// Rows `(family, key, count, percent)` for CSV output.
    pub fn rows(&self) -> Vec<(&'static str, usize, u64, f64)> {
        let mut rows: Vec<_> =
            self.by_seq_count.iter().map(|(&k, &v)| ("seq_count", k, v, self.percent_of(v))).collect();
        rows.extend(self.by_np.iter().map(|(&k, &v)| ("np", k, v, self.percent_of(v))));
        rows
    }
}

/// Tally the SR and G-PC nodes of one schedule (repetition and rate-0 nodes are not counted).
pub fn tally_schedule(schedule: &DecodeSchedule) -> NodeHistogram {
    let mut h = NodeHistogram { configs: 1, ..Default::default() };
    for node in schedule.nodes() {
        match &node.kind {
            NodeKind::Gpc { np } => h.add_node(1, *np, 1),
            NodeKind::Sr(d) => h.add_node(d.seq_count(), d.np, 1),
            NodeKind::Rate0 | NodeKind::Rep => {}
        }
    }
    h
}

/// Limits of the node census decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CensusParams {
    /// Largest node considered, in leaves (`None`: no limit).
    pub max_node_len: Option<usize>,
    pub smax: usize,
    pub np_max: usize,
}

impl Default for CensusParams {
    fn default() -> Self {
        Self { max_node_len: None, smax: usize::MAX, np_max: usize::MAX }
    }
}

/// Largest-node-first decomposition of a code into rate-0, repetition, G-PC
/// and SR nodes: a subtree is taken whole when it has one of these forms,
/// otherwise both children are examined. Returns the SR view of every
/// non-rate-0, non-repetition node in decoding order.
pub fn census_nodes(roles: &BitRoles, params: &CensusParams) -> Vec<SrDescriptor> {
    fn walk(view: &CodeView, p: &CensusParams, start: usize, len: usize, out: &mut Vec<SrDescriptor>) {
        if p.max_node_len.is_none_or(|m| len <= m) {
            if view.info(start, len) == 0 || view.is_rep(start, len) {
                return;
            }
            if let Some(d) = view.extract_sr(start, len, p.smax, p.np_max) {
                out.push(d);
                return;
            }
        }
        if len > 1 {
            walk(view, p, start, len / 2, out);
            walk(view, p, start + len / 2, len / 2, out);
        }
    }
    let mut out = Vec::new();
    walk(&CodeView::from_roles(roles), params, 0, roles.len(), &mut out);
    out
}

/// Tally the SR view of census nodes.
pub fn tally_nodes(nodes: &[SrDescriptor]) -> NodeHistogram {
    let mut h = NodeHistogram { configs: 1, ..Default::default() };
    for d in nodes {
        h.add_node(d.seq_count(), d.np, 1);
    }
    h
}

/// Every `step`-th `(A, G)` pair of the channel's valid range.
pub fn config_space(channel: Channel, step: usize) -> Vec<(usize, usize)> {
    let step = step.max(1);
    let a_range = match channel {
        Channel::Downlink => 12..=140,
        Channel::Uplink => 12..=1706,
    };
    let mut out = Vec::new();
    let mut idx = 0usize;
    for a in a_range {
        if let Some(g) = construction::valid_g_range(channel, a) {
            for g in g {
                if idx.is_multiple_of(step) {
                    out.push((a, g));
                }
                idx += 1;
            }
        }
    }
    out
}

/// Scan `(A, G)` configurations and tally SR/G-PC node types of the census
/// decomposition.
///
/// Configurations sharing a frozen pattern are scheduled once and weighted
/// by their multiplicity. Segmented uplink blocks contribute their per-segment
/// code once per segment.
pub fn node_distribution(
    channel: Channel,
    sample: &[(usize, usize)],
    params: &CensusParams,
    execution: Execution,
) -> Result<NodeHistogram> {
    let mut groups: HashMap<(usize, usize, RateMatching, usize), (construction::CodeConfig, u64)> = HashMap::new();
    let mut configs = 0u64;
    for &(a, g) in sample {
        let (cfg, segments) = match construction::resolve_segment(channel, a, g) {
            Ok(v) => v,
            Err(_) => continue,
        };
        configs += 1;
        let e_key = if cfg.rate_matching == RateMatching::Repeat { 0 } else { cfg.e };
        let key = (cfg.len, cfg.k, cfg.rate_matching, e_key);
        groups.entry(key).or_insert_with(|| (cfg, 0)).1 += segments as u64;
    }
    let work: Vec<(construction::CodeConfig, u64)> = groups.into_values().collect();
    let hist = exec::map_reduce(
        execution,
        &work,
        |(cfg, weight)| {
            let roles = construction::frozen_set(cfg);
            let mut h = tally_nodes(&census_nodes(&roles, params));
            h.configs = 0;
            h.scaled(*weight)
        },
        NodeHistogram::default,
        NodeHistogram::merge,
    );
    Ok(NodeHistogram { configs, ..hist })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(s: &str) -> Vec<bool> {
        s.chars().filter(|c| !c.is_whitespace()).map(|c| c == '1').collect()
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_node(&pat("0001")), NodeType::Rep);
        assert_eq!(classify_node(&pat("0111")), NodeType::Spc);
        assert_eq!(classify_node(&pat("1111")), NodeType::Rate1);
        assert_eq!(classify_node(&pat("0000")), NodeType::Rate0);
        assert_eq!(classify_node(&pat("00111111")), NodeType::Type3);
    }

    #[test]
    fn sr_of_small_tree() {
        let d = extract_sr(&pat("00010111"), 8, 2).unwrap();
        assert_eq!(d, SrDescriptor { v: vec![true], np: 1, source_stage: 2 });
        assert_eq!(d.seq_count(), 2);
        assert_eq!(d.expand_pattern(), pat("00010111"));
    }

    #[test]
    fn rep_then_rate0_then_rate1() {
        let p = pat("0000000100001111");
        let d = extract_sr(&p, 8, 2).unwrap();
        assert_eq!(d, SrDescriptor { v: vec![true, false], np: 0, source_stage: 2 });
        assert_eq!(d.expand_pattern(), p);
    }

    #[test]
    fn rejects() {
        assert_eq!(extract_sr(&pat("0000"), 8, 2), Err(Error::NotSrCompatible));
        assert_eq!(extract_sr(&pat("00010111"), 1, 2), Err(Error::NotSrCompatible));
        assert_eq!(extract_sr(&pat("0110"), 8, 2), Err(Error::NotSrCompatible));
    }
}
