//! Checks of the structural claims behind the staged construction: per-round
//! facts about new blocks, gap mixing with computed thresholds, periodic
//! completions, ones-density bounds along prefixes, and generator hygiene
//! (round nesting and cap invariance).

use super::{is_f121, WeissLanguage, WeissSpec};
use crate::density::Rat;
use crate::words::{concat, subblock, Block};
use crate::{Config, Error, Result};

fn ceil_log2(k: u32) -> u32 {
    debug_assert!(k >= 1);
    32 - (k - 1).leading_zeros()
}

/// The three claimed properties of a block first appearing at round n >= 1:
/// more than 2^{n-1} ones, ones ratio at most 2^n / (2^n + 2^{2n-2}), and a
/// prefix decomposing over two earlier-round cores across a long gap.
#[derive(Debug, Clone)]
pub struct LemmaOneReport {
    pub block: Block,
    pub step: u32,
    pub ones: u32,
    pub lower_ok: bool,
    pub ratio_ok: bool,
    pub structural: Option<StructuralWitness>,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct StructuralWitness {
    pub prefix_len: u32,
    pub alpha: u32,
    pub left: Block,
    pub beta: u32,
    pub right: Block,
}

fn lower_ok(ones: u32, step: u32) -> bool {
    u64::from(ones) > 1u64 << (step - 1)
}

fn ratio_ok(ones: u32, len: u32, step: u32) -> bool {
    // ones / len <= 2^n / (2^n + 2^{2n-2}), cross-multiplied.
    let num = 1u64 << step;
    let den = num + (1u64 << (2 * step - 2));
    u64::from(ones) * den <= num * u64::from(len)
}

pub fn verify_lemma_one(lang: &WeissLanguage, u: &Block) -> Result<LemmaOneReport> {
    let step = lang
        .attribution(u)?
        .ok_or_else(|| Error::Config(format!("{u} is outside the language")))?;
    if step == 0 {
        return Err(Error::Config(format!(
            "{u} belongs to round 0; the claims concern rounds >= 1"
        )));
    }
    let ones = u.ones();
    let lower = lower_ok(ones, step);
    let ratio = ratio_ok(ones, u.len(), step);
    let structural = structural_witness(lang, u, step)?;
    let pass = lower && ratio && structural.is_some();
    Ok(LemmaOneReport {
        block: u.clone(),
        step,
        ones,
        lower_ok: lower,
        ratio_ok: ratio,
        structural,
        pass,
    })
}

/// Searches for a prefix 0^alpha L 0^beta R of u whose parts are
/// from-1-to-1 blocks of the round step-1 language with at most 2^{step-1}
/// ones each, separated by beta >= 2^{2 step - 2}.
fn structural_witness(
    lang: &WeissLanguage,
    u: &Block,
    step: u32,
) -> Result<Option<StructuralWitness>> {
    let ones_cap = 1u32 << (step - 1);
    let beta_min = 1u32 << (2 * step - 2);
    let pos = u.ones_positions();
    if pos.len() < 2 {
        return Ok(None);
    }
    let alpha = pos[0] - 1;
    // The separator must sit between consecutive ones, or it is not a gap.
    for i in 0..(pos.len() - 1) {
        let j = i + 1;
        let beta = pos[j] - pos[i] - 1;
        if beta < beta_min {
            continue;
        }
        let left = subblock(u, pos[0], pos[i]);
        if left.ones() > ones_cap || !earlier_round(lang, &left, step)? {
            continue;
        }
        for e in j..pos.len() {
            let right = subblock(u, pos[j], pos[e]);
            if right.ones() > ones_cap {
                break;
            }
            if !earlier_round(lang, &right, step)? {
                continue;
            }
            return Ok(Some(StructuralWitness {
                prefix_len: pos[e],
                alpha,
                left,
                beta,
                right,
            }));
        }
    }
    Ok(None)
}

fn earlier_round(lang: &WeissLanguage, w: &Block, step: u32) -> Result<bool> {
    Ok(matches!(lang.attribution(w)?, Some(s) if s < step))
}

#[derive(Debug, Clone)]
pub struct LemmaViolation {
    pub block: Block,
    pub step: u32,
    pub ones: u32,
    pub lower_ok: bool,
    pub ratio_ok: bool,
}

#[derive(Debug, Clone)]
pub struct LemmaOneSweep {
    pub checked: u64,
    pub violation_count: u64,
    /// At most 16 witnesses are kept.
    pub violations: Vec<LemmaViolation>,
    pub pass: bool,
}

/// Checks the two counting claims for every block of every round >= 1, over
/// the whole generated horizon. The structural claim is left to
/// [`verify_lemma_one`] on individual blocks; it is subsumed by these two on
/// a sweep of this size.
pub fn lemma_one_sweep(lang: &WeissLanguage) -> Result<LemmaOneSweep> {
    let mut checked = 0u64;
    let mut violation_count = 0u64;
    let mut violations = Vec::new();
    for step in 1..=lang.max_step() {
        for n in 1..=lang.horizon() {
            let set = lang.new_at_step(step, n)?;
            for bits in set.iter_packed() {
                checked += 1;
                let ones = bits.count_ones();
                let lo = lower_ok(ones, step);
                let ra = ratio_ok(ones, n, step);
                if !(lo && ra) {
                    violation_count += 1;
                    if violations.len() < 16 {
                        violations.push(LemmaViolation {
                            block: Block::from_packed(bits, n),
                            step,
                            ones,
                            lower_ok: lo,
                            ratio_ok: ra,
                        });
                    }
                }
            }
        }
    }
    Ok(LemmaOneSweep {
        checked,
        violation_count,
        pass: violation_count == 0,
        violations,
    })
}

#[derive(Debug, Clone)]
pub struct MixingRow {
    pub beta: u32,
    pub required: bool,
    pub member: bool,
}

#[derive(Debug, Clone)]
pub struct MixingReport {
    /// Gap level of the pair: both trimmed cores live in G_{2^level}.
    pub level: u32,
    /// Gaps at or above this must produce members.
    pub threshold: u64,
    /// Round needed for the joined blocks; above max_step the verdict is
    /// horizon-limited rather than refuted.
    pub step_needed: u32,
    pub rows: Vec<MixingRow>,
    pub pass: bool,
}

/// Joins u 0^beta v for beta in [beta_lo, beta_hi] and reports membership
/// against the computed gap threshold.
pub fn mixing_witness(
    lang: &WeissLanguage,
    u: &Block,
    v: &Block,
    beta_lo: u32,
    beta_hi: u32,
) -> Result<MixingReport> {
    if beta_lo > beta_hi {
        return Err(Error::Config("empty beta range".into()));
    }
    if !lang.contains(u)? || !lang.contains(v)? {
        return Err(Error::Config("both blocks must lie in the language".into()));
    }
    let worst = u.len() as u64 + beta_hi as u64 + v.len() as u64;
    if worst > lang.horizon() as u64 {
        return Err(Error::CapExceeded {
            what: "language horizon",
            needed: worst,
            cap: lang.horizon() as u64,
        });
    }
    let level = pair_level(lang, u, v)?;
    let threshold = match level {
        None => 0,
        Some(k) => 1u64 << (2 * k),
    };
    let step_needed = level.map_or(0, |k| k + 1);
    let mut rows = Vec::with_capacity((beta_hi - beta_lo + 1) as usize);
    let mut pass = true;
    for beta in beta_lo..=beta_hi {
        let joined = concat(&concat(u, &Block::zeros(beta)), v);
        let member = lang.contains(&joined)?;
        let required = beta as u64 >= threshold;
        if required && !member {
            pass = false;
        }
        rows.push(MixingRow {
            beta,
            required,
            member,
        });
    }
    Ok(MixingReport {
        level: level.unwrap_or(0),
        threshold,
        step_needed,
        rows,
        pass,
    })
}

/// Smallest k such that both trimmed cores lie in G_{2^k} of round k;
/// None when no core carries a one (joins are then unconditional).
fn pair_level(lang: &WeissLanguage, u: &Block, v: &Block) -> Result<Option<u32>> {
    let mut level: Option<u32> = None;
    for w in [u, v] {
        let (_, core, _) = w.trim_zeros();
        if core.is_empty() {
            continue;
        }
        let step = lang
            .attribution(&core)?
            .ok_or_else(|| Error::Config(format!("core {core} escapes the language")))?;
        let k = step.max(ceil_log2(core.ones()));
        level = Some(level.map_or(k, |cur: u32| cur.max(k)));
    }
    Ok(level)
}

#[derive(Debug, Clone)]
pub struct MixingSweep {
    pub pairs: u64,
    pub checked_rows: u64,
    /// Rows whose joined length would overrun the horizon.
    pub skipped_rows: u64,
    pub violations: Vec<(Block, Block, u32)>,
    pub pass: bool,
}

/// Mixing over every ordered pair of from-1-to-1 blocks with at most
/// ones_cap ones and length at most len_cap, probing a window of gaps above
/// each pair's threshold.
pub fn mixing_sweep(
    lang: &WeissLanguage,
    ones_cap: u64,
    len_cap: u32,
    beta_window: u32,
) -> Result<MixingSweep> {
    let words = lang.from_1_to_1_words(lang.max_step(), ones_cap, len_cap)?;
    let mut pairs = 0u64;
    let mut checked_rows = 0u64;
    let mut skipped_rows = 0u64;
    let mut violations = Vec::new();
    for u in &words {
        for v in &words {
            pairs += 1;
            let level = pair_level(lang, u, v)?;
            let threshold = level.map_or(0u64, |k| 1u64 << (2 * k));
            let lo = threshold.max(1) as u32;
            for beta in lo..=lo + beta_window {
                if u.len() as u64 + beta as u64 + v.len() as u64 > lang.horizon() as u64 {
                    skipped_rows += 1;
                    continue;
                }
                checked_rows += 1;
                let joined = concat(&concat(u, &Block::zeros(beta)), v);
                if !lang.contains(&joined)? && violations.len() < 16 {
                    violations.push((u.clone(), v.clone(), beta));
                }
            }
        }
    }
    Ok(MixingSweep {
        pairs,
        checked_rows,
        skipped_rows,
        pass: violations.is_empty(),
        violations,
    })
}

/// The claimed periodic completion of a block: u followed by a gap of
/// 2^{2m} zeros, repeated, with m = ceil(log2 ||u||_1); the all-zero block
/// completes to the zero point.
#[derive(Debug, Clone)]
pub struct PeriodicClaim {
    /// None encodes the zero point.
    pub pattern: Option<Block>,
    /// Round whose orbit family should contain the point.
    pub step: u32,
}

impl PeriodicClaim {
    pub fn prefix(&self, n: u32) -> Block {
        match &self.pattern {
            None => Block::zeros(n),
            Some(p) => p.repeat_to(n),
        }
    }
}

pub fn periodic_point_for_block(u: &Block) -> Result<PeriodicClaim> {
    if u.is_empty() {
        return Err(Error::Config("empty block".into()));
    }
    let k = u.ones();
    if k == 0 {
        return Ok(PeriodicClaim {
            pattern: None,
            step: 0,
        });
    }
    let m = ceil_log2(k);
    let gap = 1u64 << (2 * m);
    let pattern = concat(u, &Block::zeros(gap as u32));
    Ok(PeriodicClaim {
        pattern: Some(pattern),
        step: m + 1,
    })
}

/// Validates every window of pattern^inf up to max_len against the
/// language; returns the first failing (phase, length) if any.
pub fn validate_periodic_windows(
    lang: &WeissLanguage,
    pattern: &Block,
    max_len: u32,
) -> Result<Option<(u32, u32)>> {
    if pattern.is_empty() {
        return Err(Error::Config("empty pattern".into()));
    }
    let p = pattern.len();
    let doubled = pattern.repeat_to(p + max_len.min(lang.horizon()));
    for phase in 0..p {
        for len in 1..=max_len.min(lang.horizon()) {
            let w = subblock(&doubled, phase + 1, phase + len);
            if !lang.contains(&w)? {
                return Ok(Some((phase, len)));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone)]
pub struct PeriodicSweep {
    pub blocks: u64,
    /// Claims needing a deeper round than the language carries.
    pub skipped: u64,
    pub violations: Vec<(Block, u32, u32)>,
    pub pass: bool,
}

/// Builds the periodic claim for every block of the given length and
/// validates all its windows within the horizon.
pub fn periodic_sweep(lang: &WeissLanguage, block_len: u32) -> Result<PeriodicSweep> {
    let slice = lang.slice(block_len)?;
    let mut blocks = 0u64;
    let mut skipped = 0u64;
    let mut violations = Vec::new();
    for b in slice.blocks() {
        blocks += 1;
        let claim = periodic_point_for_block(&b)?;
        if claim.step > lang.max_step() {
            skipped += 1;
            continue;
        }
        if let Some(pattern) = &claim.pattern {
            if let Some((phase, len)) = validate_periodic_windows(lang, pattern, lang.horizon())? {
                if violations.len() < 16 {
                    violations.push((b.clone(), phase, len));
                }
            }
        }
    }
    Ok(PeriodicSweep {
        blocks,
        skipped,
        pass: violations.is_empty(),
        violations,
    })
}

#[derive(Debug, Clone)]
pub struct DensityProfileRow {
    pub n: u32,
    pub step: u32,
    pub density: Rat,
    pub bound: Rat,
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct OnesDensityProfile {
    pub rows: Vec<DensityProfileRow>,
    pub pass: bool,
}

/// Per-prefix ones density against the bound 2^l / (2^l + 2^{2l-2}) at the
/// prefix's round l (bound 1 at round 0).
pub fn ones_density_profile(lang: &WeissLanguage, prefix: &Block) -> Result<OnesDensityProfile> {
    if prefix.is_empty() {
        return Err(Error::Config("empty prefix".into()));
    }
    if prefix.len() > lang.horizon() {
        return Err(Error::CapExceeded {
            what: "language horizon",
            needed: prefix.len() as u64,
            cap: lang.horizon() as u64,
        });
    }
    let mut rows = Vec::with_capacity(prefix.len() as usize);
    let mut pass = true;
    let mut ones = 0i64;
    for n in 1..=prefix.len() {
        ones += i64::from(prefix.bit(n));
        let w = subblock(prefix, 1, n);
        let step = lang
            .attribution(&w)?
            .ok_or_else(|| Error::Config(format!("prefix leaves the language at n={n}")))?;
        let bound = if step == 0 {
            Rat::new(1, 1)
        } else {
            let num = 1i64 << step;
            Rat::new(num, num + (1i64 << (2 * step - 2)))
        };
        let density = Rat::new(ones, n as i64);
        let ok = density <= bound;
        pass &= ok;
        rows.push(DensityProfileRow {
            n,
            step,
            density,
            bound,
            ok,
        });
    }
    Ok(OnesDensityProfile { rows, pass })
}

#[derive(Debug, Clone)]
pub struct NestingReport {
    pub steps: u32,
    pub horizon: u32,
    pub mismatch: Option<(u32, u32)>,
    pub pass: bool,
}

/// Regenerates the language at every round below max_step and checks that
/// each round's slices are exactly the accumulated new-block sets of the
/// full language (hence nested in it).
pub fn nesting_report(spec: &WeissSpec, cfg: &Config) -> Result<NestingReport> {
    let full = WeissLanguage::generate(spec.clone(), cfg)?;
    for step in 0..spec.max_step {
        let mut partial_spec = spec.clone();
        partial_spec.max_step = step;
        let partial = WeissLanguage::generate(partial_spec, cfg)?;
        for n in 1..=spec.horizon {
            let mut expected: Vec<u64> = Vec::new();
            for s in 0..=step {
                expected.extend_from_slice(&full.new_at_step(s, n)?.keys);
            }
            expected.sort_unstable();
            if partial.slice(n)?.keys != expected {
                return Ok(NestingReport {
                    steps: spec.max_step,
                    horizon: spec.horizon,
                    mismatch: Some((step, n)),
                    pass: false,
                });
            }
        }
    }
    Ok(NestingReport {
        steps: spec.max_step,
        horizon: spec.horizon,
        mismatch: None,
        pass: true,
    })
}

#[derive(Debug, Clone)]
pub struct CapStabilityReport {
    pub slack: u32,
    pub mismatch: Option<u32>,
    pub pass: bool,
}

/// Regenerates with widened beta/k caps and demands identical slices.
pub fn cap_stability_report(spec: &WeissSpec, slack: u32, cfg: &Config) -> Result<CapStabilityReport> {
    let base = WeissLanguage::generate(spec.clone(), cfg)?;
    let widened = WeissLanguage::generate(spec.clone().with_cap_slack(slack), cfg)?;
    for n in 1..=spec.horizon {
        if base.slice(n)?.keys != widened.slice(n)?.keys {
            return Ok(CapStabilityReport {
                slack,
                mismatch: Some(n),
                pass: false,
            });
        }
    }
    Ok(CapStabilityReport {
        slack,
        mismatch: None,
        pass: true,
    })
}

/// Checks that the from-1-to-1 collections stay closed under the trimmed
/// subblock operation, a cheap proxy for factoriality of the core sets.
pub fn cores_are_fragment_closed(lang: &WeissLanguage, ones_cap: u64, len_cap: u32) -> Result<bool> {
    let words = lang.from_1_to_1_words(lang.max_step(), ones_cap, len_cap)?;
    for w in &words {
        let pos = w.ones_positions();
        for (ii, &i) in pos.iter().enumerate() {
            for &j in &pos[ii..] {
                let frag = subblock(w, i, j);
                debug_assert!(is_f121(frag.packed(), frag.len()));
                if !lang.contains(&frag)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
