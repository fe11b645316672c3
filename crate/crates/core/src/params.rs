//! Decoder and architecture parameters shared by the scheduler, the list
//! decoder and the latency model.

use crate::error::{Error, Result};
use crate::kernel::Arithmetic;

/// Per-node-type caps on SR-II path forks, or the exact (uncapped) rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ForkLimits {
    /// `min(L-1, K)` forks, equivalent to bit-by-bit list decoding.
    #[default]
    Unlimited,
    /// At most `r1`, `spc` and `type3` forks for sources with 0, 1 and 2 parity groups.
    Capped { r1: usize, spc: usize, type3: usize },
}

impl ForkLimits {
    /// Caps used for list size 4 and 8 in the FER/latency experiments.
    pub fn empirical(list_size: usize) -> Self {
        match list_size {
            0..=2 => ForkLimits::Capped { r1: 1, spc: 1, type3: 1 },
            3..=4 => ForkLimits::Capped { r1: 1, spc: 2, type3: 2 },
            _ => ForkLimits::Capped { r1: 2, spc: 3, type3: 3 },
        }
    }

    /// Number of forks for a source with `np` parity groups and `k` free bits.
    pub fn forks(self, list_size: usize, np: usize, k: usize) -> usize {
        let exact = (list_size.saturating_sub(1)).min(k);
        match self {
            ForkLimits::Unlimited => exact,
            ForkLimits::Capped { r1, spc, type3 } => {
                let cap = match np {
                    0 => r1,
                    1 => spc,
                    _ => type3,
                };
                exact.min(cap)
            }
        }
    }
}

/// Which special nodes the scheduler may hand to the node decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum NodeSet {
    /// Fast-SCL nodes only: rate-0, rate-1, repetition and single parity check.
    Basic,
    /// Rate-0, repetition, G-PC and SR nodes within the configured limits.
    #[default]
    SrList,
    /// Only nodes whose list decoding matches bit-by-bit SCL exactly:
    /// rate-0, repetition, rate-1, and SR nodes with a rate-1 source whose
    /// left siblings are rate-0 nodes followed by at most one repetition
    /// node adjacent to the source.
    SclExact,
}

/// Architecture of the behavioral cycle model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ArchParams {
    /// Stages the LLR unit evaluates combinatorially in one pass.
    pub num_scu: u32,
    /// Processing elements in the first pass stage.
    pub num_pe: usize,
    /// Allow passes to stop (and nodes to be decoded) at any stage the node
    /// decoder supports, not only at stride stages.
    pub flexible: bool,
}

impl Default for ArchParams {
    fn default() -> Self {
        Self { num_scu: 2, num_pe: 64, flexible: true }
    }
}

/// Everything that shapes a decode: list size, node limits, arithmetic and
/// the architecture the schedule is optimized for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DecoderParams {
    pub list_size: usize,
    pub node_set: NodeSet,
    /// Largest node (in leaves) decoded in one step; at most 64.
    pub ns_max: usize,
    /// Largest repetition-sequence set of an SR node.
    pub smax: usize,
    /// Largest number of parity groups of a G-PC source.
    pub np_max: usize,
    /// Largest SR node (with left siblings) the sequence unit accepts.
    pub rsu_size: usize,
    pub fork_limits: ForkLimits,
    pub arithmetic: Arithmetic,
    /// Skip the frozen prefix and treat info-plus-shortened nodes as rate-1.
    pub rm_adaptation: bool,
    pub arch: ArchParams,
}

impl DecoderParams {
    /// SR-List decoder with the default limits (`|S| <= 8`, `N_p <= 2`, nodes up to 32).
    pub fn sr_list(list_size: usize) -> Self {
        Self {
            list_size,
            node_set: NodeSet::SrList,
            ns_max: 32,
            smax: 8,
            np_max: 2,
            rsu_size: 32,
            fork_limits: ForkLimits::Unlimited,
            arithmetic: Arithmetic::Float,
            rm_adaptation: true,
            arch: ArchParams::default(),
        }
    }

    /// Fast-SCL emulation: basic nodes only, no repetition-sequence search.
    pub fn fast_scl(list_size: usize) -> Self {
        Self { node_set: NodeSet::Basic, smax: 1, np_max: 1, rm_adaptation: false, ..Self::sr_list(list_size) }
    }

    /// Node decoding restricted to rules that reproduce bit-by-bit SCL exactly.
    pub fn scl_exact(list_size: usize) -> Self {
        Self {
            node_set: NodeSet::SclExact,
            ns_max: 64,
            smax: 64,
            np_max: 0,
            rsu_size: 64,
            rm_adaptation: false,
            ..Self::sr_list(list_size)
        }
    }

    pub fn with_arithmetic(mut self, arithmetic: Arithmetic) -> Self {
        self.arithmetic = arithmetic;
        self
    }

    pub fn with_fork_limits(mut self, fork_limits: ForkLimits) -> Self {
        self.fork_limits = fork_limits;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.list_size == 0 {
            return Err(Error::InvalidParams("list size must be at least 1"));
        }
        if !self.ns_max.is_power_of_two() || self.ns_max > 64 {
            return Err(Error::InvalidParams("node size limit must be a power of two <= 64"));
        }
        if !self.smax.is_power_of_two() {
            return Err(Error::InvalidParams("sequence budget must be a power of two"));
        }
        if self.arch.num_scu == 0 || self.arch.num_pe == 0 {
            return Err(Error::InvalidParams("architecture needs at least one stage and one PE"));
        }
        if let ForkLimits::Capped { r1, spc, type3 } = self.fork_limits {
            if r1 == 0 || spc == 0 || type3 == 0 {
                return Err(Error::InvalidParams("fork caps must be at least 1"));
            }
        }
        Ok(())
    }
}
