//! Shift space specifications and language-level operations.
//!
//! A spec describes a one-sided shift space over {0,1} (the full shift also
//! admits larger alphabets, in which case only counting is available). The
//! language of a spec is queried per length; enumerations are guarded by the
//! caps in [`Config`].

use crate::weiss::WeissLanguage;
use crate::words::{self, all_blocks, lex_key, Block};
use crate::{exec, Config, Error, Result};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub enum ShiftSpec {
    /// Full shift on r >= 2 symbols. Binary block operations apply only to
    /// r = 2; larger alphabets support counting and trivial membership.
    Full(u32),
    /// Subshift of finite type given by a finite forbidden block list.
    Sft(SftSpec),
    /// Finite language oracle: explicit slices up to a horizon.
    Explicit(Arc<ExplicitLanguage>),
    /// Staged aperiodic-flavored construction; see the weiss module.
    Weiss(Arc<WeissLanguage>),
    /// Downward closure (turning ones into zeros) of an inner spec.
    Hereditary(Box<ShiftSpec>),
}

impl ShiftSpec {
    pub fn describe(&self) -> String {
        match self {
            ShiftSpec::Full(r) => format!("full:{r}"),
            ShiftSpec::Sft(s) => {
                let list: Vec<String> = s.forbidden.iter().map(|b| b.to_string()).collect();
                format!("sft{{{}}}", list.join(","))
            }
            ShiftSpec::Explicit(e) => format!("explicit(horizon={})", e.horizon()),
            ShiftSpec::Weiss(w) => w.describe(),
            ShiftSpec::Hereditary(inner) => format!("hereditary({})", inner.describe()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SftSpec {
    forbidden: Vec<Block>,
    /// Forbidden packed bit patterns grouped by length, each list sorted.
    by_len: Vec<(u32, Vec<u64>)>,
}

impl SftSpec {
    pub fn new(forbidden: Vec<Block>) -> Result<SftSpec> {
        let mut by_len: Vec<(u32, Vec<u64>)> = Vec::new();
        for f in &forbidden {
            if f.is_empty() {
                return Err(Error::Config(
                    "empty forbidden block would forbid every block".into(),
                ));
            }
            if f.len() > crate::MAX_PACKED_LEN {
                return Err(Error::Config(format!(
                    "forbidden block of length {} exceeds the packed limit {}",
                    f.len(),
                    crate::MAX_PACKED_LEN
                )));
            }
            match by_len.iter_mut().find(|(m, _)| *m == f.len()) {
                Some((_, v)) => v.push(f.packed()),
                None => by_len.push((f.len(), vec![f.packed()])),
            }
        }
        for (_, v) in &mut by_len {
            v.sort_unstable();
            v.dedup();
        }
        by_len.sort_unstable_by_key(|(m, _)| *m);
        Ok(SftSpec { forbidden, by_len })
    }

    pub fn forbidden(&self) -> &[Block] {
        &self.forbidden
    }

    /// True when some forbidden block ends exactly at the last position of
    /// the packed block `bits` of length `len`.
    fn forbidden_suffix(&self, bits: u64, len: u32) -> bool {
        for (m, set) in &self.by_len {
            if *m > len {
                break;
            }
            let suffix = bits >> (len - m);
            if set.binary_search(&suffix).is_ok() {
                return true;
            }
        }
        false
    }

    fn occurs_forbidden(&self, w: &Block) -> bool {
        for (m, set) in &self.by_len {
            if *m > w.len() {
                break;
            }
            for start in 1..=(w.len() - m + 1) {
                let window = words::subblock(w, start, start + m - 1).packed();
                if set.binary_search(&window).is_ok() {
                    return true;
                }
            }
        }
        false
    }
}

/// Sorted set of same-length blocks, stored as lexicographic keys.
#[derive(Debug, Clone, Default)]
pub(crate) struct LangSet {
    pub n: u32,
    pub keys: Vec<u64>,
}

impl LangSet {
    pub fn from_packed(n: u32, bits_list: impl IntoIterator<Item = u64>) -> LangSet {
        let mut keys: Vec<u64> = bits_list.into_iter().map(|b| lex_key(b, n)).collect();
        keys.sort_unstable();
        keys.dedup();
        LangSet { n, keys }
    }

    pub fn contains_packed(&self, bits: u64) -> bool {
        self.keys.binary_search(&lex_key(bits, self.n)).is_ok()
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn blocks(&self) -> Vec<Block> {
        self.keys
            .iter()
            .map(|&k| Block::from_packed(words::key_to_bits(k, self.n), self.n))
            .collect()
    }

    pub fn iter_packed(&self) -> impl Iterator<Item = u64> + '_ {
        let n = self.n;
        self.keys.iter().map(move |&k| words::key_to_bits(k, n))
    }
}

/// Explicitly listed language slices for lengths 1..=horizon. Slices may be
/// empty, which models inconsistent or truncated languages.
#[derive(Debug, Clone)]
pub struct ExplicitLanguage {
    pub(crate) slices: Vec<LangSet>,
}

impl ExplicitLanguage {
    pub fn from_slices(slices: Vec<Vec<Block>>) -> Result<ExplicitLanguage> {
        let mut out = Vec::with_capacity(slices.len());
        for (i, slice) in slices.into_iter().enumerate() {
            let n = i as u32 + 1;
            if n > crate::MAX_PACKED_LEN {
                return Err(Error::Config(format!(
                    "explicit language horizon exceeds the packed limit {}",
                    crate::MAX_PACKED_LEN
                )));
            }
            for b in &slice {
                if b.len() != n {
                    return Err(Error::Config(format!(
                        "block {b:?} of length {} in the slice for length {n}",
                        b.len()
                    )));
                }
            }
            out.push(LangSet::from_packed(n, slice.iter().map(|b| b.packed())));
        }
        Ok(ExplicitLanguage { slices: out })
    }

    pub fn horizon(&self) -> u32 {
        self.slices.len() as u32
    }

    fn slice(&self, n: u32) -> Result<&LangSet> {
        if n == 0 || n > self.horizon() {
            return Err(Error::CapExceeded {
                what: "language horizon",
                needed: n as u64,
                cap: self.horizon() as u64,
            });
        }
        Ok(&self.slices[(n - 1) as usize])
    }
}

/// One enumerated language level.
#[derive(Debug, Clone)]
pub struct LanguageSlice {
    pub n: u32,
    pub count: u64,
    pub blocks: Vec<Block>,
}

#[derive(Debug, Clone)]
pub struct EntropyRow {
    pub n: u32,
    pub count: BigUint,
    pub estimate: f64,
    pub running_inf: f64,
}

/// Per-length counts with the finite entropy estimates log2|B_n| / n and
/// their running minimum, which converges to the entropy from above.
#[derive(Debug, Clone)]
pub struct EntropyEstimate {
    pub rows: Vec<EntropyRow>,
}

impl EntropyEstimate {
    pub fn final_running_inf(&self) -> f64 {
        self.rows.last().map(|r| r.running_inf).unwrap_or(f64::NAN)
    }
}

#[derive(Debug, Clone)]
pub struct LanguageAxiomsReport {
    /// (member, its missing one-step subblock)
    pub factorial_violations: Vec<(Block, Block)>,
    /// members with no one-symbol right extension
    pub prolongable_violations: Vec<Block>,
    pub checked_to: u32,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct HereditaryReport {
    /// (member, its lowered non-member)
    pub violations: Vec<(Block, Block)>,
    pub checked_to: u32,
    pub pass: bool,
}

pub fn golden_mean() -> ShiftSpec {
    ShiftSpec::Sft(SftSpec::new(vec![words::blk("11")]).expect("valid forbidden list"))
}

pub fn full_shift(r: u32) -> Result<ShiftSpec> {
    if r < 2 {
        return Err(Error::Config(format!("full shift needs r >= 2, got {r}")));
    }
    Ok(ShiftSpec::Full(r))
}

pub fn sft_from_forbidden(forbidden: Vec<Block>) -> Result<ShiftSpec> {
    Ok(ShiftSpec::Sft(SftSpec::new(forbidden)?))
}

/// Loads an SFT from a text file with one forbidden block per line. Blank
/// lines and lines starting with '#' are skipped.
pub fn sft_from_file(path: &std::path::Path) -> Result<ShiftSpec> {
    let text = std::fs::read_to_string(path)?;
    let mut forbidden = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        forbidden.push(line.parse::<Block>()?);
    }
    sft_from_forbidden(forbidden)
}

/// Whether the block occurs in the language of the spec.
pub fn membership(spec: &ShiftSpec, w: &Block) -> Result<bool> {
    if w.is_empty() {
        return Ok(true);
    }
    match spec {
        ShiftSpec::Full(_) => Ok(true),
        ShiftSpec::Sft(s) => Ok(!s.occurs_forbidden(w)),
        ShiftSpec::Explicit(e) => Ok(e.slice(w.len())?.contains_packed(w.packed())),
        ShiftSpec::Weiss(lang) => lang.contains(w),
        ShiftSpec::Hereditary(inner) => {
            if w.len() > crate::MAX_PACKED_LEN {
                return Err(Error::Unsupported(
                    "hereditary membership beyond the packed limit".into(),
                ));
            }
            let cfg = Config::default();
            let inner_slice = blocks_of_length(inner, w.len(), &cfg)?;
            let bits = w.packed();
            Ok(inner_slice
                .blocks
                .iter()
                .any(|u| bits & !u.packed() == 0))
        }
    }
}

/// All blocks of length n in the language, sorted lexicographically.
///
/// Enumerating specs (full, sft, hereditary) honor `cfg.enum_cap`; oracle
/// specs (explicit, weiss) are instead bounded by their own horizon.
pub fn blocks_of_length(spec: &ShiftSpec, n: u32, cfg: &Config) -> Result<LanguageSlice> {
    if n == 0 {
        return Err(Error::Config("blocks_of_length needs n >= 1".into()));
    }
    let blocks = match spec {
        ShiftSpec::Full(2) => all_blocks(n, cfg)?,
        ShiftSpec::Full(r) => {
            return Err(Error::Unsupported(format!(
                "full shift on {r} symbols has non-binary blocks; only counting applies"
            )))
        }
        ShiftSpec::Sft(s) => {
            let levels = sft_levels(s, n, cfg)?;
            LangSet::from_packed(n, levels.into_iter().last().unwrap()).blocks()
        }
        ShiftSpec::Explicit(e) => e.slice(n)?.blocks(),
        ShiftSpec::Weiss(lang) => lang.slice(n)?.blocks(),
        ShiftSpec::Hereditary(inner) => hereditary_slice(inner, n, cfg)?.blocks(),
    };
    Ok(LanguageSlice {
        n,
        count: blocks.len() as u64,
        blocks,
    })
}

/// |B_n| without materializing blocks where a closed form or stored count
/// exists.
pub fn count_blocks(spec: &ShiftSpec, n: u32, cfg: &Config) -> Result<BigUint> {
    if n == 0 {
        return Ok(BigUint::from(1u32));
    }
    match spec {
        ShiftSpec::Full(r) => Ok(BigUint::from(*r).pow(n)),
        ShiftSpec::Sft(s) => {
            let levels = sft_levels(s, n, cfg)?;
            Ok(BigUint::from(levels.last().unwrap().len()))
        }
        ShiftSpec::Explicit(e) => Ok(BigUint::from(e.slice(n)?.len())),
        ShiftSpec::Weiss(lang) => Ok(BigUint::from(lang.slice(n)?.len())),
        ShiftSpec::Hereditary(inner) => Ok(BigUint::from(hereditary_slice(inner, n, cfg)?.len())),
    }
}

/// Lex-ordered packed levels 1..=n_max of an SFT language, built by one-step
/// right extension. Each parent emits its surviving children in order, so
/// levels stay sorted without re-sorting.
fn sft_levels(s: &SftSpec, n_max: u32, cfg: &Config) -> Result<Vec<Vec<u64>>> {
    if n_max > cfg.enum_cap {
        return Err(Error::CapExceeded {
            what: "enumeration length",
            needed: n_max as u64,
            cap: cfg.enum_cap as u64,
        });
    }
    let mut levels: Vec<Vec<u64>> = Vec::with_capacity(n_max as usize);
    let base: Vec<u64> = [0u64, 1u64]
        .into_iter()
        .filter(|&b| !s.forbidden_suffix(b, 1))
        .collect();
    levels.push(base);
    for len in 2..=n_max {
        let parents = levels.last().unwrap();
        let extend = |&bits: &u64| -> Vec<u64> {
            let mut out = Vec::with_capacity(2);
            for b in [0u64, 1u64] {
                let child = bits | (b << (len - 1));
                if !s.forbidden_suffix(child, len) {
                    out.push(child);
                }
            }
            out
        };
        let next: Vec<u64> = if parents.len() >= 65536 {
            let chunks: Vec<&[u64]> = parents.chunks(8192).collect();
            exec::flat_map_ordered(cfg.strategy, chunks, |chunk| {
                chunk.iter().flat_map(extend).collect()
            })
        } else {
            parents.iter().flat_map(extend).collect()
        };
        if next.len() as u64 > cfg.block_budget {
            return Err(Error::CapExceeded {
                what: "block budget",
                needed: next.len() as u64,
                cap: cfg.block_budget,
            });
        }
        levels.push(next);
    }
    Ok(levels)
}

/// Downward closure of the inner slice at length n.
fn hereditary_slice(inner: &ShiftSpec, n: u32, cfg: &Config) -> Result<LangSet> {
    let inner_slice = blocks_of_length(inner, n, cfg)?;
    let mut bits_list: Vec<u64> = Vec::new();
    let mut emitted: u64 = 0;
    for u in &inner_slice.blocks {
        let bits = u.packed();
        // Iterate all submasks of the one-positions, including the block
        // itself and the all-zero block.
        let mut sub = bits;
        loop {
            emitted += 1;
            if emitted > cfg.block_budget {
                return Err(Error::CapExceeded {
                    what: "block budget",
                    needed: emitted,
                    cap: cfg.block_budget,
                });
            }
            bits_list.push(sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & bits;
        }
    }
    Ok(LangSet::from_packed(n, bits_list))
}

/// Entropy estimates log2|B_n| / n for n = 1..=n_max with the running
/// minimum, which is an upper bound converging to the entropy.
pub fn entropy_estimate(spec: &ShiftSpec, n_max: u32, cfg: &Config) -> Result<EntropyEstimate> {
    if n_max == 0 {
        return Err(Error::Config("entropy_estimate needs n_max >= 1".into()));
    }
    let counts: Vec<BigUint> = match spec {
        ShiftSpec::Sft(s) => sft_levels(s, n_max, cfg)?
            .iter()
            .map(|lvl| BigUint::from(lvl.len()))
            .collect(),
        other => (1..=n_max)
            .map(|n| count_blocks(other, n, cfg))
            .collect::<Result<_>>()?,
    };
    let mut rows = Vec::with_capacity(n_max as usize);
    let mut running = f64::INFINITY;
    for (i, count) in counts.into_iter().enumerate() {
        let n = i as u32 + 1;
        if count == BigUint::from(0u32) {
            return Err(Error::Config(format!(
                "empty language slice at n={n}: inconsistent spec"
            )));
        }
        let estimate = count.to_f64().map(f64::log2).unwrap_or(f64::INFINITY) / n as f64;
        running = running.min(estimate);
        rows.push(EntropyRow {
            n,
            count,
            estimate,
            running_inf: running,
        });
    }
    Ok(EntropyEstimate { rows })
}

fn level_sets(spec: &ShiftSpec, n_max: u32, cfg: &Config) -> Result<Vec<LangSet>> {
    match spec {
        ShiftSpec::Sft(s) => Ok(sft_levels(s, n_max, cfg)?
            .into_iter()
            .enumerate()
            .map(|(i, bits)| LangSet::from_packed(i as u32 + 1, bits))
            .collect()),
        other => (1..=n_max)
            .map(|n| {
                Ok(LangSet::from_packed(
                    n,
                    blocks_of_length(other, n, cfg)?.blocks.iter().map(|b| b.packed()),
                ))
            })
            .collect(),
    }
}

/// Checks the two language axioms up to n_max: factoriality via the two
/// one-step subblocks of each member, and right prolongability into the next
/// slice. Oracle specs are clamped to their declared horizon.
pub fn check_factorial_prolongable(
    spec: &ShiftSpec,
    n_max: u32,
    cfg: &Config,
) -> Result<LanguageAxiomsReport> {
    let horizon = match spec {
        ShiftSpec::Explicit(e) => Some(e.horizon()),
        ShiftSpec::Weiss(lang) => Some(lang.horizon()),
        _ => None,
    };
    let depth = horizon.map_or(n_max, |h| n_max.min(h));
    if depth == 0 {
        return Err(Error::Config("nothing to check at n_max = 0".into()));
    }
    let sets = level_sets(spec, depth, cfg)?;
    let mut factorial_violations = Vec::new();
    let mut prolongable_violations = Vec::new();
    for n in 2..=depth {
        let cur = &sets[(n - 1) as usize];
        let prev = &sets[(n - 2) as usize];
        for bits in cur.iter_packed() {
            let prefix = bits & ((1u64 << (n - 1)) - 1);
            let suffix = bits >> 1;
            for sub in [prefix, suffix] {
                if !prev.contains_packed(sub) {
                    factorial_violations.push((
                        Block::from_packed(bits, n),
                        Block::from_packed(sub, n - 1),
                    ));
                }
            }
        }
    }
    for n in 1..depth {
        let cur = &sets[(n - 1) as usize];
        let next = &sets[n as usize];
        for bits in cur.iter_packed() {
            let zero_ext = bits;
            let one_ext = bits | (1u64 << n);
            if !next.contains_packed(zero_ext) && !next.contains_packed(one_ext) {
                prolongable_violations.push(Block::from_packed(bits, n));
            }
        }
    }
    let pass = factorial_violations.is_empty() && prolongable_violations.is_empty();
    Ok(LanguageAxiomsReport {
        factorial_violations,
        prolongable_violations,
        checked_to: depth,
        pass,
    })
}

/// Checks closure under lowering single ones to zeros on every slice up to
/// n_max. Single-position lowerings generate all of them, so this decides
/// hereditarity of the finite slices.
pub fn hereditary_check(spec: &ShiftSpec, n_max: u32, cfg: &Config) -> Result<HereditaryReport> {
    let horizon = match spec {
        ShiftSpec::Explicit(e) => Some(e.horizon()),
        ShiftSpec::Weiss(lang) => Some(lang.horizon()),
        _ => None,
    };
    let depth = horizon.map_or(n_max, |h| n_max.min(h));
    if depth == 0 {
        return Err(Error::Config("nothing to check at n_max = 0".into()));
    }
    let sets = level_sets(spec, depth, cfg)?;
    let mut violations = Vec::new();
    for set in &sets {
        for bits in set.iter_packed() {
            let mut ones = bits;
            while ones != 0 {
                let lowered = bits & !(ones & ones.wrapping_neg());
                if !set.contains_packed(lowered) {
                    violations.push((
                        Block::from_packed(bits, set.n),
                        Block::from_packed(lowered, set.n),
                    ));
                }
                ones &= ones - 1;
            }
        }
    }
    let pass = violations.is_empty();
    Ok(HereditaryReport {
        violations,
        checked_to: depth,
        pass,
    })
}
