//! 5G NR polar code construction: parameter resolution, frozen sets, CRC,
//! input interleaving and rate matching/recovery.
//!
//! Channel interleavers are not applied; over a memoryless channel they only
//! reorder the transmitted bits.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::kernel::{self, Arithmetic};

/// Link direction, which selects CRC, mother-code cap and valid ranges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    Uplink,
    Downlink,
}

impl Channel {
    /// Largest mother-code exponent allowed on this channel.
    pub fn max_log_len(self) -> u32 {
        match self {
            Channel::Uplink => 10,
            Channel::Downlink => 9,
        }
    }
}

impl std::str::FromStr for Channel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ul" | "uplink" => Ok(Channel::Uplink),
            "dl" | "downlink" => Ok(Channel::Downlink),
            _ => Err(Error::Parse(format!("unknown channel '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RateMatching {
    Puncture,
    Shorten,
    Repeat,
}

/// CRC generator polynomials used by the polar-coded channels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CrcKind {
    Crc6,
    Crc11,
    Crc24C,
}

impl CrcKind {
    pub fn parity_bits(self) -> usize {
        match self {
            CrcKind::Crc6 => 6,
            CrcKind::Crc11 => 11,
            CrcKind::Crc24C => 24,
        }
    }

    /// Generator polynomial without its leading term, MSB at bit `len-1`.
    fn poly(self) -> u32 {
        let exps: &[u32] = match self {
            CrcKind::Crc6 => &[5, 0],
            CrcKind::Crc11 => &[10, 9, 5, 0],
            CrcKind::Crc24C => &[23, 21, 20, 17, 15, 13, 12, 8, 4, 2, 1, 0],
        };
        exps.iter().fold(0, |p, e| p | (1 << e))
    }
}

/// Fully resolved parameters of one polar-coded block.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodeConfig {
    pub channel: Channel,
    /// Message bits.
    pub a: usize,
    /// Rate-matched (transmitted) length.
    pub e: usize,
    /// Encoded block length before segmentation; equals `e` for a single segment.
    pub g: usize,
    /// Mother code length, a power of two.
    pub len: usize,
    /// `log2(len)`.
    pub log_len: u32,
    pub crc: CrcKind,
    /// CRC bit count.
    pub p: usize,
    /// Bits entering the polar encoder, `a + p`.
    pub k: usize,
    pub rate_matching: RateMatching,
    /// Apply the downlink distributed-CRC input interleaver.
    pub input_interleaving: bool,
}

impl CodeConfig {
    /// Code rate `A/E` used for Eb/N0 scaling.
    pub fn rate(&self) -> f64 {
        self.a as f64 / self.e as f64
    }

    /// Build a configuration directly from its parts, bypassing the
    /// standard's range checks (used for toy and custom codes).
    pub fn custom(channel: Channel, a: usize, e: usize, crc: CrcKind) -> Result<Self> {
        let p = crc.parity_bits();
        let k = a + p;
        let len = mother_code_len(k, e, channel.max_log_len());
        build(channel, a, e, e, crc, len)
    }
}

/// Mother code length per the standard's selection rule.
pub fn mother_code_len(k: usize, e: usize, max_log: u32) -> usize {
    let ceil_log_e = ceil_log2(e);
    let n1 = if (e as f64) <= 9.0 / 8.0 * 2f64.powi(ceil_log_e as i32 - 1)
        && (k as f64) / (e as f64) < 9.0 / 16.0
    {
        ceil_log_e - 1
    } else {
        ceil_log_e
    };
    let n2 = ceil_log2(8 * k);
    1 << n1.min(n2).min(max_log).max(5)
}

fn ceil_log2(x: usize) -> u32 {
    if x <= 1 {
        0
    } else {
        usize::BITS - (x - 1).leading_zeros()
    }
}

fn build(channel: Channel, a: usize, e: usize, g: usize, crc: CrcKind, len: usize) -> Result<CodeConfig> {
    let p = crc.parity_bits();
    let k = a + p;
    if k > len {
        return Err(Error::OutOfRange { a, e, reason: "more payload bits than the mother code holds" });
    }
    let rate_matching = if e >= len {
        RateMatching::Repeat
    } else if 16 * k <= 7 * e {
        RateMatching::Puncture
    } else {
        RateMatching::Shorten
    };
    Ok(CodeConfig {
        channel,
        a,
        e,
        g,
        len,
        log_len: len.trailing_zeros(),
        crc,
        p,
        k,
        rate_matching,
        input_interleaving: channel == Channel::Downlink,
    })
}

/// Range of encoded lengths `G` the channel accepts for `a` message bits.
pub fn valid_g_range(channel: Channel, a: usize) -> Option<std::ops::RangeInclusive<usize>> {
    match channel {
        Channel::Downlink => (12..=140).contains(&a).then(|| (a + 24).max(36)..=8192),
        Channel::Uplink => match a {
            12..=19 => Some(a + 9..=8192),
            20..=359 => Some(a + 11..=8192),
            360..=1012 => Some(a + 11..=16385),
            1013..=1706 => Some(2 * a.div_ceil(2) + 22..=16385),
            _ => None,
        },
    }
}

/// Resolve the single-segment code carrying `a` message bits in `e` bits.
pub fn resolve_config(channel: Channel, a: usize, e: usize) -> Result<CodeConfig> {
    let range = valid_g_range(channel, a).ok_or(Error::OutOfRange {
        a,
        e,
        reason: "message length outside the channel's range",
    })?;
    if !range.contains(&e) {
        return Err(Error::OutOfRange { a, e, reason: "rate-matched length outside the channel's range" });
    }
    match channel {
        Channel::Downlink => {
            let len = mother_code_len(a + 24, e, 9);
            build(channel, a, e, e, CrcKind::Crc24C, len)
        }
        Channel::Uplink => {
            if a < 20 {
                return Err(Error::Unsupported("uplink messages below 20 bits need parity-check polar bits"));
            }
            if needs_segmentation(a, e) {
                return Err(Error::Unsupported("uplink code block segmentation"));
            }
            let len = mother_code_len(a + 11, e, 10);
            build(channel, a, e, e, CrcKind::Crc11, len)
        }
    }
}

fn needs_segmentation(a: usize, g: usize) -> bool {
    a >= 1013 || (a >= 360 && g >= 1088)
}

/// Resolve the per-segment code for an `(a, g)` pair, allowing uplink
/// segmentation and the parity-check range `a < 20`.
///
/// Returns the segment configuration and the number of segments. For
/// `a < 20` the three parity-check bits are counted as payload (they occupy
/// information positions) and CRC6 is used.
pub fn resolve_segment(channel: Channel, a: usize, g: usize) -> Result<(CodeConfig, usize)> {
    let range = valid_g_range(channel, a).ok_or(Error::OutOfRange {
        a,
        e: g,
        reason: "message length outside the channel's range",
    })?;
    if !range.contains(&g) {
        return Err(Error::OutOfRange { a, e: g, reason: "encoded length outside the channel's range" });
    }
    match channel {
        Channel::Downlink => Ok((resolve_config(channel, a, g)?, 1)),
        Channel::Uplink if a < 20 => {
            // CRC6 plus three parity-check bits placed on information positions.
            let len = mother_code_len(a + 9, g, 10);
            let mut cfg = build(channel, a + 3, g, g, CrcKind::Crc6, len)?;
            cfg.a = a;
            cfg.p = 9;
            Ok((cfg, 1))
        }
        Channel::Uplink => {
            if needs_segmentation(a, g) {
                let a_seg = a.div_ceil(2);
                let e_seg = g / 2;
                let len = mother_code_len(a_seg + 11, e_seg, 10);
                let mut cfg = build(channel, a_seg, e_seg, g, CrcKind::Crc11, len)?;
                cfg.g = g;
                Ok((cfg, 2))
            } else {
                Ok((resolve_config(channel, a, g)?, 1))
            }
        }
    }
}

/// Role of one input position of the polar transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BitRole {
    Frozen,
    Info,
}

/// Frozen/information assignment of the `N` input positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitRoles {
    roles: Vec<BitRole>,
    /// Frozen positions whose codeword bit is removed by shortening.
    shortened: Vec<bool>,
}

impl BitRoles {
    /// Build roles from an explicit frozen index list.
    pub fn from_frozen(len: usize, frozen: &[usize]) -> Result<Self> {
        if !len.is_power_of_two() {
            return Err(Error::LengthNotPowerOfTwo(len));
        }
        let mut roles = vec![BitRole::Info; len];
        for &f in frozen {
            if f >= len {
                return Err(Error::LengthMismatch { expected: len, actual: f + 1 });
            }
            roles[f] = BitRole::Frozen;
        }
        Ok(Self { roles, shortened: vec![false; len] })
    }

    /// Build roles from a per-position information flag.
    pub fn from_info_mask(info: &[bool]) -> Result<Self> {
        if !info.len().is_power_of_two() {
            return Err(Error::LengthNotPowerOfTwo(info.len()));
        }
        let roles = info.iter().map(|&i| if i { BitRole::Info } else { BitRole::Frozen }).collect();
        Ok(Self { roles, shortened: vec![false; info.len()] })
    }

    /// Mark frozen positions as shortened. Information positions are ignored.
    pub fn with_shortened(mut self, positions: &[usize]) -> Self {
        for &p in positions {
            if p < self.roles.len() && self.roles[p] == BitRole::Frozen {
                self.shortened[p] = true;
            }
        }
        self
    }

    pub fn len(&self) -> usize {
        self.roles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roles.is_empty()
    }

    pub fn roles(&self) -> &[BitRole] {
        &self.roles
    }

    pub fn is_info(&self, i: usize) -> bool {
        self.roles[i] == BitRole::Info
    }

    pub fn is_shortened(&self, i: usize) -> bool {
        self.shortened[i]
    }

    pub fn info_count(&self) -> usize {
        self.roles.iter().filter(|&&r| r == BitRole::Info).count()
    }

    /// Information positions in ascending order.
    pub fn info_positions(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_info(i)).collect()
    }

    /// Index of the first information position, if any.
    pub fn first_info_index(&self) -> Option<usize> {
        self.roles.iter().position(|&r| r == BitRole::Info)
    }

    /// Smallest shortened index; every shortened position lies at or above it.
    pub fn shortened_start(&self) -> Option<usize> {
        self.shortened.iter().position(|&s| s)
    }
}

/// The 1024-entry reliability sequence, least reliable first.
pub fn reliability_sequence() -> &'static [u16] {
    static SEQ: OnceLock<Vec<u16>> = OnceLock::new();
    SEQ.get_or_init(|| {
        include_str!("../data/reliability_nr.txt")
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| l.trim().parse().expect("reliability table entry"))
            .collect()
    })
}

const SUBBLOCK_PERM: [usize; 32] = [
    0, 1, 2, 4, 3, 5, 6, 7, 8, 16, 9, 17, 10, 18, 11, 19, 12, 20, 13, 21, 14, 22, 15, 23, 24, 25, 26, 28, 27, 29,
    30, 31,
];

/// Sub-block interleaver: output position `n` takes codeword bit `J[n]`.
pub fn subblock_pattern(len: usize) -> Vec<usize> {
    let block = len / 32;
    (0..len).map(|n| SUBBLOCK_PERM[32 * n / len] * block + n % block).collect()
}

const INPUT_INTERLEAVER_MAX: [u8; 164] = [
    0, 2, 4, 7, 9, 14, 19, 20, 24, 25, 26, 28, 31, 34, 42, 45, 49, 50, 51, 53, 54, 56, 58, 59, 61, 62, 65, 66, 67,
    69, 70, 71, 72, 76, 77, 81, 82, 83, 87, 88, 89, 91, 93, 95, 98, 101, 104, 106, 108, 110, 111, 113, 115, 118,
    119, 120, 122, 123, 126, 127, 129, 132, 134, 138, 139, 140, 1, 3, 5, 8, 10, 15, 21, 27, 29, 32, 35, 43, 46, 52,
    55, 57, 60, 63, 68, 73, 78, 84, 90, 92, 94, 96, 99, 102, 105, 107, 109, 112, 114, 116, 121, 124, 128, 130, 133,
    135, 141, 6, 11, 16, 22, 30, 33, 36, 44, 47, 64, 74, 79, 85, 97, 100, 103, 117, 125, 131, 136, 142, 12, 17, 23,
    37, 48, 75, 80, 86, 137, 143, 13, 18, 38, 144, 39, 145, 40, 146, 41, 147, 148, 149, 150, 151, 152, 153, 154,
    155, 156, 157, 158, 159, 160, 161, 162, 163,
];

/// Distributed-CRC input interleaver for `k <= 164` bits: output position
/// `i` takes input bit `pattern[i]`.
pub fn input_interleaver_pattern(k: usize) -> Result<Vec<usize>> {
    if k > INPUT_INTERLEAVER_MAX.len() {
        return Err(Error::Unsupported("input interleaver is defined for at most 164 bits"));
    }
    let offset = INPUT_INTERLEAVER_MAX.len() - k;
    Ok(INPUT_INTERLEAVER_MAX
        .iter()
        .map(|&p| p as usize)
        .filter(|&p| p >= offset)
        .map(|p| p - offset)
        .collect())
}

/// Positions frozen before reliability selection because of puncturing or shortening.
fn pre_frozen(config: &CodeConfig) -> Vec<usize> {
    let (n, e) = (config.len, config.e);
    let j = subblock_pattern(n);
    match config.rate_matching {
        RateMatching::Repeat => Vec::new(),
        RateMatching::Shorten => j[e..].to_vec(),
        RateMatching::Puncture => {
            let mut v = j[..n - e].to_vec();
            // Extra freezing of the lowest indices, per the standard's rule.
            let t = if 4 * e >= 3 * n { (3 * n - 2 * e).div_ceil(4) } else { (9 * n - 4 * e).div_ceil(16) };
            v.extend(0..t);
            v
        }
    }
}

/// Frozen/information assignment for a resolved configuration.
pub fn frozen_set(config: &CodeConfig) -> BitRoles {
    let n = config.len;
    let pre = pre_frozen(config);
    let mut blocked = vec![false; n];
    for &p in &pre {
        blocked[p] = true;
    }
    let mut info = vec![false; n];
    let mut remaining = config.k;
    for &q in reliability_sequence().iter().rev() {
        if remaining == 0 {
            break;
        }
        let q = q as usize;
        if q < n && !blocked[q] {
            info[q] = true;
            remaining -= 1;
        }
    }
    let roles = BitRoles::from_info_mask(&info).expect("mother code length is a power of two");
    if config.rate_matching == RateMatching::Shorten {
        roles.with_shortened(&pre)
    } else {
        roles
    }
}

/// CRC parity of `bits` (MSB-first shift register, zero initial state).
pub fn crc_parity(bits: &[u8], kind: CrcKind) -> Vec<u8> {
    let len = kind.parity_bits();
    let poly = kind.poly();
    let top = 1u32 << (len - 1);
    let mask = (1u32 << len) - 1;
    let mut reg = 0u32;
    for &b in bits {
        let feedback = ((reg & top) != 0) ^ (b & 1 == 1);
        reg = (reg << 1) & mask;
        if feedback {
            reg ^= poly;
        }
    }
    (0..len).map(|i| ((reg >> (len - 1 - i)) & 1) as u8).collect()
}

/// Append the channel's CRC to an `A`-bit message.
pub fn crc_attach(msg: &[u8], config: &CodeConfig) -> Result<Vec<u8>> {
    let payload = config.k - config.p;
    if msg.len() != payload {
        return Err(Error::LengthMismatch { expected: payload, actual: msg.len() });
    }
    let mut out = msg.to_vec();
    out.extend(crc_parity(msg, config.crc));
    Ok(out)
}

/// Check a `K`-bit block (message followed by CRC).
pub fn crc_check(bits: &[u8], config: &CodeConfig) -> Result<bool> {
    if bits.len() != config.k {
        return Err(Error::LengthMismatch { expected: config.k, actual: bits.len() });
    }
    let split = config.k - config.p;
    Ok(crc_parity(&bits[..split], config.crc) == bits[split..])
}

/// Codeword index carried by each of the `E` transmitted positions.
pub fn rate_matching_map(config: &CodeConfig) -> Vec<usize> {
    let (n, e) = (config.len, config.e);
    let j = subblock_pattern(n);
    match config.rate_matching {
        RateMatching::Repeat => (0..e).map(|k| j[k % n]).collect(),
        RateMatching::Puncture => j[n - e..].to_vec(),
        RateMatching::Shorten => j[..e].to_vec(),
    }
}

/// Sub-block interleave and select `E` bits of an `N`-bit codeword.
pub fn rate_match(x: &[u8], config: &CodeConfig) -> Result<Vec<u8>> {
    if x.len() != config.len {
        return Err(Error::LengthMismatch { expected: config.len, actual: x.len() });
    }
    Ok(rate_matching_map(config).into_iter().map(|i| x[i]).collect())
}

/// LLR assigned to shortened positions in floating-point mode. Large enough
/// to dominate any sum of channel LLRs, small enough to stay exact in `f64`.
pub const SHORTENED_LLR: f64 = 1048576.0;

/// Map `E` received LLRs back onto the `N` codeword positions.
///
/// Punctured positions get 0, shortened positions the largest magnitude of
/// the arithmetic, repeated copies are summed (saturating in fixed point).
/// Fixed-point mode scales by [`kernel::FIXED_INPUT_SCALE`] before quantizing.
pub fn rate_recover(llr: &[f64], config: &CodeConfig, arith: Arithmetic) -> Result<Vec<f64>> {
    if llr.len() != config.e {
        return Err(Error::ConfigMismatch { expected: config.e, actual: llr.len() });
    }
    let mut out = vec![0.0; config.len];
    for (k, &i) in rate_matching_map(config).iter().enumerate() {
        out[i] = arith.add(out[i], arith.quantize_channel(llr[k]));
    }
    if config.rate_matching == RateMatching::Shorten {
        let big = match arith {
            Arithmetic::Float => SHORTENED_LLR,
            Arithmetic::Fixed => kernel::LLR_FORMAT.max_value(),
        };
        for &i in &subblock_pattern(config.len)[config.e..] {
            out[i] = big;
        }
    }
    Ok(out)
}

/// Encoder-side chain: CRC, optional input interleaving, placement on the
/// information positions and the polar transform. Returns the `N`-bit codeword.
pub fn encode_block(msg: &[u8], config: &CodeConfig, roles: &BitRoles) -> Result<Vec<u8>> {
    let c = crc_attach(msg, config)?;
    let c = if config.input_interleaving {
        input_interleaver_pattern(config.k)?.into_iter().map(|i| c[i]).collect()
    } else {
        c
    };
    let mut u = vec![0u8; config.len];
    for (pos, bit) in roles.info_positions().into_iter().zip(c) {
        u[pos] = bit;
    }
    kernel::encode(&u)
}

/// Recover the `K`-bit block (message plus CRC) from a decoded input vector `u`.
pub fn extract_block(u: &[u8], config: &CodeConfig, roles: &BitRoles) -> Result<Vec<u8>> {
    let info: Vec<u8> = roles.info_positions().into_iter().map(|i| u[i]).collect();
    if !config.input_interleaving {
        return Ok(info);
    }
    let pattern = input_interleaver_pattern(config.k)?;
    let mut c = vec![0u8; config.k];
    for (i, &src) in pattern.iter().enumerate() {
        c[src] = info[i];
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reliability_table_is_a_permutation() {
        let q = reliability_sequence();
        assert_eq!(q.len(), 1024);
        let mut seen = vec![false; 1024];
        for &i in q {
            assert!(!seen[i as usize]);
            seen[i as usize] = true;
        }
        assert_eq!(q[0], 0);
        assert_eq!(q[1023], 1023);
    }

    #[test]
    fn dl_minimum_message_rejected() {
        assert!(matches!(resolve_config(Channel::Downlink, 11, 100), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn ul_short_messages_unsupported() {
        assert!(matches!(resolve_config(Channel::Uplink, 15, 100), Err(Error::Unsupported(_))));
    }

    #[test]
    fn rate_matching_rule() {
        let c = resolve_config(Channel::Downlink, 140, 432).unwrap();
        assert_eq!(c.rate_matching, RateMatching::Puncture);
        let c = resolve_config(Channel::Uplink, 501, 1024).unwrap();
        assert_eq!(c.rate_matching, RateMatching::Repeat);
    }

    #[test]
    fn all_info_when_k_equals_n() {
        let r = BitRoles::from_frozen(16, &[]).unwrap();
        assert_eq!(r.info_count(), 16);
    }

    #[test]
    fn zero_message_has_zero_crc() {
        for kind in [CrcKind::Crc6, CrcKind::Crc11, CrcKind::Crc24C] {
            assert!(crc_parity(&[0; 40], kind).iter().all(|&b| b == 0));
        }
    }
}
