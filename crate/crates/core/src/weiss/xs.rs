//! The allowed-blocks recursion for gap-set variants, with transitivity and
//! distinguishability witnesses, and rotation-set families.
//!
//! A block is ranked by its ones count: level 0 holds at most one 1, level
//! l >= 1 holds counts in (2^{l-1}, 2^l]. A level-l block is allowed when it
//! splits as 0^a u 0^beta v 0^b with u, v allowed from-1-to-1 blocks of at
//! most 2^{l-1} ones and beta in S with beta >= 2^{2l}. The thresholds sit
//! one level above the generator's, so the allowed sets form a strict
//! sublanguage of the main construction.

use super::is_f121;
use crate::density::{Rat, SetRule};
use crate::shiftspace::LangSet;
use crate::words::{concat, key_to_bits, Block};
use crate::{Config, Error, Result};

/// Level of a ones count: 0 for counts <= 1, else ceil(log2 count).
pub fn level_for_ones(ones: u32) -> u32 {
    if ones <= 1 {
        0
    } else {
        32 - (ones - 1).leading_zeros()
    }
}

pub struct AllowedBlocks {
    pub rule: SetRule,
    pub max_level: u32,
    pub len_max: u32,
    /// level_sets[l][n-1]: allowed level-l blocks of length n.
    level_sets: Vec<Vec<LangSet>>,
}

impl AllowedBlocks {
    pub fn build(rule: SetRule, max_level: u32, len_max: u32, cfg: &Config) -> Result<AllowedBlocks> {
        if max_level > 3 {
            return Err(Error::Config(format!(
                "allowed levels are capped at 3, got {max_level}"
            )));
        }
        if len_max == 0 || len_max > crate::MAX_PACKED_LEN {
            return Err(Error::Config(format!(
                "len_max must be in 1..={}",
                crate::MAX_PACKED_LEN
            )));
        }
        let l = len_max;
        let mut emissions = 0u64;
        let mut level_sets: Vec<Vec<Vec<u64>>> = Vec::new();

        // Level 0: at most one 1.
        let mut zero: Vec<Vec<u64>> = Vec::with_capacity(l as usize);
        for n in 1..=l {
            let mut bits_list = vec![0u64];
            for p in 0..n {
                bits_list.push(1u64 << p);
            }
            zero.push(bits_list);
        }
        level_sets.push(zero);

        for lvl in 1..=max_level {
            let ones_cap = 1u64 << (lvl - 1);
            let ones_lo = ones_cap + 1;
            let ones_hi = 1u64 << lvl;
            let thr = 1u64 << (2 * lvl);
            // Parts: allowed from-1-to-1 blocks of lower levels.
            let mut parts: Vec<(u32, u64)> = Vec::new();
            for sets in &level_sets {
                for (idx, bits_list) in sets.iter().enumerate() {
                    let n = idx as u32 + 1;
                    for &bits in bits_list {
                        if is_f121(bits, n) && u64::from(bits.count_ones()) <= ones_cap {
                            parts.push((n, bits));
                        }
                    }
                }
            }
            let mut emitted: Vec<Vec<u64>> = vec![Vec::new(); l as usize];
            if thr < l as u64 {
                let thr = thr as u32;
                for &(ul, ubits) in &parts {
                    for &(vl, vbits) in &parts {
                        if ul + vl + thr > l {
                            continue;
                        }
                        for beta in thr..=(l - ul - vl) {
                            if !rule.contains(beta as u64) {
                                continue;
                            }
                            let base_len = ul + beta + vl;
                            let base = ubits | (vbits << (ul + beta));
                            let ones = u64::from(base.count_ones());
                            if !(ones_lo..=ones_hi).contains(&ones) {
                                continue;
                            }
                            for a in 0..=(l - base_len) {
                                let sb = base << a;
                                for total in (base_len + a)..=l {
                                    emissions += 1;
                                    emitted[(total - 1) as usize].push(sb);
                                }
                            }
                        }
                    }
                    if emissions > cfg.block_budget {
                        return Err(Error::CapExceeded {
                            what: "block budget",
                            needed: emissions,
                            cap: cfg.block_budget,
                        });
                    }
                }
            }
            level_sets.push(emitted);
        }

        let wrapped = level_sets
            .into_iter()
            .map(|sets| {
                sets.into_iter()
                    .enumerate()
                    .map(|(idx, bits_list)| LangSet::from_packed(idx as u32 + 1, bits_list))
                    .collect()
            })
            .collect();
        Ok(AllowedBlocks {
            rule,
            max_level,
            len_max,
            level_sets: wrapped,
        })
    }

    pub fn contains(&self, w: &Block) -> Result<bool> {
        if w.is_empty() {
            return Ok(true);
        }
        if w.len() > self.len_max {
            return Err(Error::CapExceeded {
                what: "allowed horizon",
                needed: w.len() as u64,
                cap: self.len_max as u64,
            });
        }
        let lvl = level_for_ones(w.ones());
        if lvl > self.max_level {
            return Err(Error::CapExceeded {
                what: "allowed level",
                needed: lvl as u64,
                cap: self.max_level as u64,
            });
        }
        Ok(self.level_sets[lvl as usize][(w.len() - 1) as usize].contains_packed(w.packed()))
    }

    /// All allowed blocks of one length, over the built levels, sorted.
    pub fn blocks_of_length(&self, n: u32) -> Result<Vec<Block>> {
        if n == 0 || n > self.len_max {
            return Err(Error::CapExceeded {
                what: "allowed horizon",
                needed: n as u64,
                cap: self.len_max as u64,
            });
        }
        let mut keys: Vec<u64> = Vec::new();
        for sets in &self.level_sets {
            keys.extend_from_slice(&sets[(n - 1) as usize].keys);
        }
        keys.sort_unstable();
        keys.dedup();
        Ok(keys
            .into_iter()
            .map(|k| Block::from_packed(key_to_bits(k, n), n))
            .collect())
    }

    pub fn count(&self) -> u64 {
        self.level_sets
            .iter()
            .flat_map(|sets| sets.iter())
            .map(|s| s.len() as u64)
            .sum()
    }
}

#[derive(Debug, Clone)]
pub struct TransitivityWitness {
    pub beta: u32,
    pub block: Block,
    pub level: u32,
    pub threshold: u64,
}

/// Smallest gap in S at or above the concatenation threshold joining two
/// allowed from-1-to-1 blocks into an allowed block, verified against the
/// recursion. Errors when a precondition fails or the horizon is too small.
pub fn xs_transitivity_witness(
    rule: &SetRule,
    u: &Block,
    v: &Block,
    len_max: u32,
    cfg: &Config,
) -> Result<TransitivityWitness> {
    if u.is_empty() || v.is_empty() {
        return Err(Error::Config("blocks must be nonempty".into()));
    }
    if !is_f121(u.packed(), u.len()) || !is_f121(v.packed(), v.len()) {
        return Err(Error::Config(
            "both blocks must run from a 1 to a 1".into(),
        ));
    }
    let (i, j) = (u.ones(), v.ones());
    let level = level_for_ones(i + j)
        .max(level_for_ones(i) + 1)
        .max(level_for_ones(j) + 1);
    if level > 3 {
        return Err(Error::CapExceeded {
            what: "allowed level",
            needed: level as u64,
            cap: 3,
        });
    }
    let allowed = AllowedBlocks::build(rule.clone(), level, len_max, cfg)?;
    if !allowed.contains(u)? {
        return Err(Error::Config(format!("{u} is not allowed for this S")));
    }
    if !allowed.contains(v)? {
        return Err(Error::Config(format!("{v} is not allowed for this S")));
    }
    let threshold = 1u64 << (2 * level);
    let mut beta = threshold;
    loop {
        let total = u.len() as u64 + beta + v.len() as u64;
        if total > len_max as u64 {
            return Err(Error::Config(format!(
                "no admissible gap for this pair within len_max={len_max}; \
                 the horizon is too small, not a refutation"
            )));
        }
        if rule.contains(beta) {
            let block = concat(&concat(u, &Block::zeros(beta as u32)), v);
            if allowed.contains(&block)? {
                return Ok(TransitivityWitness {
                    beta: beta as u32,
                    block,
                    level,
                    threshold,
                });
            }
        }
        beta += 1;
    }
}

#[derive(Debug, Clone)]
pub struct DistinctWitness {
    pub beta: u32,
    pub separator: Block,
    /// True when the separator is allowed for the first rule.
    pub in_first: bool,
}

/// Finds the smallest gap >= 4 on which the two gap sets disagree; the block
/// 1 0^beta 1 is then allowed for exactly one of them.
pub fn xs_pairwise_distinct(
    rule_s: &SetRule,
    rule_t: &SetRule,
    len_max: u32,
    cfg: &Config,
) -> Result<DistinctWitness> {
    if len_max < 6 {
        return Err(Error::Config("len_max must be at least 6".into()));
    }
    let allowed_s = AllowedBlocks::build(rule_s.clone(), 1, len_max, cfg)?;
    let allowed_t = AllowedBlocks::build(rule_t.clone(), 1, len_max, cfg)?;
    for beta in 4..=(len_max - 2) {
        let in_s = rule_s.contains(beta as u64);
        let in_t = rule_t.contains(beta as u64);
        if in_s == in_t {
            continue;
        }
        let separator = concat(&concat(&Block::from_packed(1, 1), &Block::zeros(beta)), &Block::from_packed(1, 1));
        let member_s = allowed_s.contains(&separator)?;
        let member_t = allowed_t.contains(&separator)?;
        debug_assert_eq!(member_s, in_s);
        debug_assert_eq!(member_t, in_t);
        if member_s != member_t {
            return Ok(DistinctWitness {
                beta,
                separator,
                in_first: member_s,
            });
        }
    }
    Err(Error::Config(format!(
        "the rules agree on every gap in [4, {}]",
        len_max - 2
    )))
}

#[derive(Debug, Clone)]
pub struct PairStats {
    pub i: usize,
    pub j: usize,
    pub both: u64,
    pub only_i: u64,
    pub only_j: u64,
}

#[derive(Debug, Clone)]
pub struct FamilyReport {
    pub rules: Vec<SetRule>,
    pub horizon: u64,
    pub pairs: Vec<PairStats>,
    pub pass: bool,
}

/// Rotation gap sets {n : frac(n p/q) < 1/2} for each parameter, with
/// pairwise intersection and difference counts over [1, horizon]. Distinct
/// irrational-like parameters should make every count positive.
pub fn independent_family(params: &[Rat], horizon: u64) -> Result<FamilyReport> {
    if params.len() < 2 {
        return Err(Error::Config("need at least two parameters".into()));
    }
    if horizon == 0 || horizon > 1_000_000 {
        return Err(Error::CapExceeded {
            what: "density horizon",
            needed: horizon,
            cap: 1_000_000,
        });
    }
    let mut rules = Vec::with_capacity(params.len());
    for r in params {
        let (p, q) = (*r.numer(), *r.denom());
        if p <= 0 || p >= q {
            return Err(Error::Config(format!("parameter {r} is outside (0, 1)")));
        }
        if q > 1_000_000 {
            return Err(Error::Config(format!(
                "parameter denominator {q} exceeds 10^6; pass a coarser approximant"
            )));
        }
        let rule = SetRule::Rotation { p, q };
        if rules.contains(&rule) {
            return Err(Error::Config("parameters must be distinct".into()));
        }
        rules.push(rule);
    }
    let mut pairs = Vec::new();
    let mut pass = true;
    for i in 0..rules.len() {
        for j in (i + 1)..rules.len() {
            let (mut both, mut only_i, mut only_j) = (0u64, 0u64, 0u64);
            for n in 1..=horizon {
                let a = rules[i].contains(n);
                let b = rules[j].contains(n);
                match (a, b) {
                    (true, true) => both += 1,
                    (true, false) => only_i += 1,
                    (false, true) => only_j += 1,
                    (false, false) => {}
                }
            }
            pass &= both > 0 && only_i > 0 && only_j > 0;
            pairs.push(PairStats {
                i,
                j,
                both,
                only_i,
                only_j,
            });
        }
    }
    Ok(FamilyReport {
        rules,
        horizon,
        pairs,
        pass,
    })
}

/// Denominator-10^6 approximants of five classical rotation numbers:
/// sqrt(2)-1, sqrt(3)-1, the golden ratio conjugate, sqrt(5)-2, and pi-3.
pub fn sample_rotation_params() -> Vec<Rat> {
    [414_213, 732_050, 618_033, 236_067, 141_592]
        .into_iter()
        .map(|p| Rat::new(p, 1_000_000))
        .collect()
}
