//! Behavioral cycle model of the node-based list decoder: multi-stage LLR
//! passes, node-processing cycles and partial-sum updates.

use std::collections::BTreeMap;

use crate::construction::{self, Channel, CodeConfig};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::nodes::{self, DecodeSchedule, Instruction, NodeKind, ScheduledNode};
use crate::params::{ArchParams, DecoderParams, ForkLimits};

/// Node types the node processor handles, with the sizes their cost depends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NpuNode {
    Rate0,
    Rep,
    /// Rate-1 node with `k` bits to decide.
    Rate1 { k: usize },
    Spc { k: usize },
    Type3 { k: usize },
    /// SR node with a rate-1 source of `k` free bits.
    SrRate1 { k: usize },
    SrSpc { k: usize },
    SrType3 { k: usize },
}

impl NpuNode {
    /// Map a scheduled node to its processor type.
    pub fn of(node: &ScheduledNode) -> Result<Self> {
        let k = node.free_source_bits();
        Ok(match &node.kind {
            NodeKind::Rate0 => NpuNode::Rate0,
            NodeKind::Rep => NpuNode::Rep,
            NodeKind::Gpc { np: 0 } => NpuNode::Rate1 { k },
            NodeKind::Gpc { np: 1 } => NpuNode::Spc { k },
            NodeKind::Gpc { np: 2 } => NpuNode::Type3 { k },
            NodeKind::Sr(d) => match d.np {
                0 => NpuNode::SrRate1 { k },
                1 => NpuNode::SrSpc { k },
                2 => NpuNode::SrType3 { k },
                _ => return Err(Error::UnsupportedNode("SR source with more than two parity groups")),
            },
            NodeKind::Gpc { .. } => return Err(Error::UnsupportedNode("G-PC node with more than two parity groups")),
        })
    }

    /// Cycles spent in the node processor.
    pub fn cycles(self, list_size: usize, limits: ForkLimits) -> u64 {
        let forks = |np, k| limits.forks(list_size, np, k) as u64;
        match self {
            NpuNode::Rate0 => 1,
            NpuNode::Rep => 2,
            NpuNode::Rate1 { k } => forks(0, k) + 1,
            NpuNode::Spc { k } => 1 + forks(1, k) + 1,
            NpuNode::Type3 { k } => 1 + forks(2, k) + 1,
            NpuNode::SrRate1 { k } => 2 + forks(0, k),
            NpuNode::SrSpc { k } => 2 + forks(1, k) + 1,
            NpuNode::SrType3 { k } => 2 + forks(2, k) + 1,
        }
    }
}

/// Node-processor cycles of a scheduled node.
pub fn node_cycles(node: &ScheduledNode, list_size: usize, limits: ForkLimits) -> Result<u64> {
    Ok(NpuNode::of(node)?.cycles(list_size, limits))
}

/// Like [`node_cycles`], but prices G-PC sources with more than two parity
/// groups as if the processor supported them (used by the census scheduler).
pub(crate) fn node_cost_estimate(node: &ScheduledNode, list_size: usize, limits: ForkLimits) -> u64 {
    node_cycles(node, list_size, limits).unwrap_or_else(|_| {
        let k = node.free_source_bits();
        let base = if matches!(node.kind, NodeKind::Sr(_)) { 2 } else { 1 };
        base + limits.forks(list_size, 2, k) as u64 + 1
    })
}

/// Cycles of one decoded node, split by unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeCost {
    pub node: ScheduledNode,
    pub scu: u64,
    pub npu: u64,
    pub psu: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CycleReport {
    pub total: u64,
    /// LLR passes.
    pub scu: u64,
    /// Node decoding.
    pub npu: u64,
    /// Partial-sum updates, one per decoded node.
    pub psu: u64,
    /// Cost attributed to each decoded node, in decoding order. A node is
    /// charged for the pass that produced its LLRs and for the passes of
    /// stored ancestors it triggered.
    pub per_node: Vec<NodeCost>,
    /// Total cycles per node type.
    pub by_type: BTreeMap<String, u64>,
}

fn pass_cycles(origin: u32, log_len: u32, arch: &ArchParams) -> u64 {
    if origin > log_len {
        0
    } else {
        (1usize << (origin - 1)).div_ceil(arch.num_pe) as u64
    }
}

fn type_name(node: &ScheduledNode) -> &'static str {
    match &node.kind {
        NodeKind::Rate0 => "R0",
        NodeKind::Rep => "REP",
        NodeKind::Gpc { np: 0 } if node.forced != 0 => "R1-shortened",
        NodeKind::Gpc { np: 0 } => "R1",
        NodeKind::Gpc { np: 1 } => "SPC",
        NodeKind::Gpc { np: 2 } => "TYPE3",
        NodeKind::Gpc { .. } => "G-PC",
        NodeKind::Sr(d) => match d.np {
            0 => "SR(R1)",
            1 => "SR(SPC)",
            2 => "SR(TYPE3)",
            _ => "SR(G-PC)",
        },
    }
}

/// Replay a schedule against the cycle model.
///
/// A pass starting from LLRs stored at stage `o` costs `ceil(2^(o-1) / #PE)`
/// cycles; the channel LLRs at the root are free to read for the root node
/// itself. Passes end where LLRs are stored (`Descend` with `store`).
pub fn schedule_cycles(schedule: &DecodeSchedule, params: &DecoderParams) -> Result<CycleReport> {
    let n = schedule.log_len;
    let mut stored = vec![false; n as usize + 2];
    stored[n as usize] = true;
    let mut report = CycleReport::default();
    let mut pending_scu = 0u64;
    for ins in &schedule.instructions {
        match ins {
            Instruction::Descend { stage, store, .. } => {
                let s = *stage as usize;
                stored[s] = *store;
                if *store {
                    let origin = (s + 1..=n as usize).find(|&t| stored[t]).unwrap_or(n as usize) as u32;
                    pending_scu += pass_cycles(origin, n, &params.arch);
                }
            }
            Instruction::Decode(node) => {
                let npu = node_cycles(node, params.list_size, params.fork_limits)?;
                let cost = NodeCost { node: node.clone(), scu: pending_scu, npu, psu: 1 };
                pending_scu = 0;
                report.scu += cost.scu;
                report.npu += cost.npu;
                report.psu += cost.psu;
                *report.by_type.entry(type_name(node).to_string()).or_default() += cost.scu + cost.npu + cost.psu;
                report.per_node.push(cost);
            }
            Instruction::Combine { .. } => {}
        }
    }
    report.scu += pending_scu;
    report.total = report.scu + report.npu + report.psu;
    Ok(report)
}

/// Optimizations applied on top of a Fast-SCL style baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OptFlags {
    /// Two-stage LLR unit that may stop at any node-decodable stage.
    pub flexible_multistage: bool,
    /// SR and TYPE-III nodes.
    pub sr_nodes: bool,
    /// Empirical fork caps.
    pub fork_caps: bool,
    /// Frozen-prefix skip and shortened rate-1 promotion.
    pub rm_adaptation: bool,
}

impl OptFlags {
    pub const NONE: OptFlags =
        OptFlags { flexible_multistage: false, sr_nodes: false, fork_caps: false, rm_adaptation: false };
    pub const ALL: OptFlags =
        OptFlags { flexible_multistage: true, sr_nodes: true, fork_caps: true, rm_adaptation: true };

    /// The cumulative steps: baseline, +flexible, +SR nodes, +caps and adaptation.
    pub fn staircase() -> [OptFlags; 4] {
        let flex = OptFlags { flexible_multistage: true, ..Self::NONE };
        let sr = OptFlags { sr_nodes: true, ..flex };
        [Self::NONE, flex, sr, Self::ALL]
    }

    /// Decoder parameters for list size `list_size` and sequence budget `smax`.
    pub fn params(self, list_size: usize, smax: usize) -> DecoderParams {
        let mut p = if self.sr_nodes {
            DecoderParams { smax, ..DecoderParams::sr_list(list_size) }
        } else {
            DecoderParams::fast_scl(list_size)
        };
        p.arch = if self.flexible_multistage {
            ArchParams::default()
        } else {
            ArchParams { num_scu: 1, flexible: false, ..ArchParams::default() }
        };
        if self.fork_caps {
            p.fork_limits = ForkLimits::empirical(list_size);
        }
        p.rm_adaptation = self.rm_adaptation;
        p
    }
}

impl std::str::FromStr for OptFlags {
    type Err = Error;

    /// `all`, `none`, or a comma list of `flexible`, `sr`, `caps`, `rm`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => return Ok(Self::ALL),
            "none" | "baseline" => return Ok(Self::NONE),
            _ => {}
        }
        let mut f = Self::NONE;
        for part in s.split(',').map(str::trim) {
            match part {
                "flexible" => f.flexible_multistage = true,
                "sr" => f.sr_nodes = true,
                "caps" => f.fork_caps = true,
                "rm" => f.rm_adaptation = true,
                other => return Err(Error::Parse(format!("unknown optimization flag `{other}`"))),
            }
        }
        Ok(f)
    }
}

/// Cycle report of one configuration.
#[derive(Debug, Clone)]
pub struct ConfigCycles {
    pub config: CodeConfig,
    pub report: CycleReport,
}

#[derive(Debug, Clone)]
pub struct WorstCase {
    pub max_cycles: u64,
    pub argmax: CodeConfig,
    pub table: Vec<ConfigCycles>,
}

/// Schedule every configuration under `params` and report the slowest.
pub fn worst_case(configs: &[CodeConfig], params: &DecoderParams, execution: Execution) -> Result<WorstCase> {
    if configs.is_empty() {
        return Err(Error::InvalidParams("no configurations to evaluate"));
    }
    let table = exec::try_map(execution, configs, |cfg| {
        let roles = construction::frozen_set(cfg);
        let schedule = nodes::build_schedule(&roles, params)?;
        let report = schedule_cycles(&schedule, params)?;
        Ok(ConfigCycles { config: cfg.clone(), report })
    })?;
    let best = table
        .iter()
        .enumerate()
        .max_by_key(|(i, c)| (c.report.total, std::cmp::Reverse(*i)))
        .map(|(_, c)| c)
        .expect("nonempty table");
    Ok(WorstCase { max_cycles: best.report.total, argmax: best.config.clone(), table })
}

/// All supported configurations of `channel` with rate-matched length `e`.
pub fn sweep(channel: Channel, e: usize) -> Vec<CodeConfig> {
    let a_range = match channel {
        Channel::Downlink => 12..=140,
        Channel::Uplink => 20..=1706,
    };
    a_range.filter_map(|a| construction::resolve_config(channel, a, e).ok()).collect()
}

/// Decoder parameters for the uplink comparison point: `|S| <= 4`, SR nodes
/// of at most 16 leaves, all optimizations.
pub fn uplink_params(list_size: usize) -> DecoderParams {
    DecoderParams { rsu_size: 16, ..OptFlags::ALL.params(list_size, 4) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rows() {
        let l = 8;
        let u = ForkLimits::Unlimited;
        assert_eq!(NpuNode::Rate0.cycles(l, u), 1);
        assert_eq!(NpuNode::Rep.cycles(l, u), 2);
        assert_eq!(NpuNode::Spc { k: 10 }.cycles(l, u), 9);
        let capped = ForkLimits::Capped { r1: 2, spc: 3, type3: 3 };
        assert_eq!(NpuNode::SrSpc { k: 3 }.cycles(l, capped), 6);
    }

    #[test]
    fn flags_parse() {
        assert_eq!("all".parse::<OptFlags>().unwrap(), OptFlags::ALL);
        assert_eq!("sr,rm".parse::<OptFlags>().unwrap(), OptFlags { sr_nodes: true, rm_adaptation: true, ..OptFlags::NONE });
        assert!("fast".parse::<OptFlags>().is_err());
    }
}
