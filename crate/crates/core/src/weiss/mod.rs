//! Staged construction of a low-complexity shift space.
//!
//! Points accumulate in rounds. Round 0 holds the orbits of 0^inf and
//! 0^a 1 0^inf. Round m >= 1 takes cores from G_{2^{m-1}}: the from-1-to-1
//! blocks of the round m-1 language carrying at most 2^{m-1} ones, and
//! adjoins
//!   - tails          0^a u 0^inf,
//!   - joined tails   0^a u 0^beta v 0^inf   with beta >= 2^{2(m-1)},
//!   - periodic orbits of (u 0^k)^inf        with k    >= 2^{2(m-1)}.
//! The gap-set variant restricts beta to a set S and drops the periodic
//! orbits.
//!
//! The language is materialized per length up to a horizon of at most 64,
//! with each block attributed to the first round containing it. Within the
//! horizon the beta/k caps never bind: a window of length <= horizon shows a
//! full gap only when the gap is shorter than the horizon, so every block is
//! reached with gap parameters below horizon + threshold.

pub mod verify;
pub mod xs;

use crate::density::SetRule;
use crate::exec;
use crate::shiftspace::LangSet;
use crate::words::{key_to_bits, lex_key, Block};
use crate::{exec::Strategy, Config, Error, Result};

/// Hard cap on construction rounds. At the packed horizon of 64, round 4
/// gap thresholds (2^6) already push most new material past the horizon.
pub const MAX_STEP: u32 = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct WeissSpec {
    pub max_step: u32,
    pub horizon: u32,
    /// None runs the main construction; Some(S) restricts joining gaps to S
    /// and drops the periodic orbits.
    pub rule: Option<SetRule>,
    /// Widens the beta/k caps. The language below the horizon must not
    /// depend on this; it exists so that invariance can be tested.
    pub cap_slack: u32,
}

impl WeissSpec {
    pub fn new(max_step: u32, horizon: u32) -> Result<WeissSpec> {
        if max_step > MAX_STEP {
            return Err(Error::Config(format!(
                "max_step {max_step} exceeds the cap {MAX_STEP}"
            )));
        }
        if horizon == 0 || horizon > crate::MAX_PACKED_LEN {
            return Err(Error::Config(format!(
                "horizon must be in 1..={}",
                crate::MAX_PACKED_LEN
            )));
        }
        Ok(WeissSpec {
            max_step,
            horizon,
            rule: None,
            cap_slack: 0,
        })
    }

    pub fn with_rule(mut self, rule: SetRule) -> WeissSpec {
        self.rule = Some(rule);
        self
    }

    pub fn with_cap_slack(mut self, slack: u32) -> WeissSpec {
        self.cap_slack = slack;
        self
    }

    /// Parses "key = value" lines; '#' starts a comment. Keys: max_step
    /// (required), horizon (default 64), s_rule (optional).
    pub fn from_config_str(text: &str) -> Result<WeissSpec> {
        let mut max_step: Option<u32> = None;
        let mut horizon = crate::MAX_PACKED_LEN;
        let mut rule = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            let value = value.trim();
            match key.trim() {
                "max_step" => {
                    max_step = Some(value.parse().map_err(|_| {
                        Error::Config(format!("line {}: bad max_step {value:?}", i + 1))
                    })?)
                }
                "horizon" => {
                    horizon = value.parse().map_err(|_| {
                        Error::Config(format!("line {}: bad horizon {value:?}", i + 1))
                    })?
                }
                "s_rule" => rule = Some(SetRule::parse(value)?),
                other => {
                    return Err(Error::Config(format!(
                        "line {}: unknown key {other:?}",
                        i + 1
                    )))
                }
            }
        }
        let mut spec = WeissSpec::new(
            max_step.ok_or_else(|| Error::Config("max_step is required".into()))?,
            horizon,
        )?;
        if let Some(r) = rule {
            spec = spec.with_rule(r);
        }
        Ok(spec)
    }

    pub fn describe(&self) -> String {
        match &self.rule {
            None => format!("weiss:step={}", self.max_step),
            Some(r) => format!("weiss:step={},S={}", self.max_step, r.descriptor()),
        }
    }
}

/// The generated language: per-round new blocks and the cumulative slices.
#[derive(Debug)]
pub struct WeissLanguage {
    spec: WeissSpec,
    /// step_new[s][n-1]: blocks of length n first appearing at round s.
    step_new: Vec<Vec<LangSet>>,
    cumulative: Vec<LangSet>,
}

impl WeissLanguage {
    pub fn generate(spec: WeissSpec, cfg: &Config) -> Result<WeissLanguage> {
        let l = spec.horizon;
        let strategy = cfg.strategy;
        let mut cumulative: Vec<Vec<u64>> = Vec::with_capacity(l as usize);
        for n in 1..=l {
            let mut keys: Vec<u64> = Vec::with_capacity(n as usize + 1);
            keys.push(lex_key(0, n));
            for p in 0..n {
                keys.push(lex_key(1u64 << p, n));
            }
            keys.sort_unstable();
            cumulative.push(keys);
        }
        let mut step_new: Vec<Vec<Vec<u64>>> = vec![cumulative.clone()];

        let mut budget_used: u64 = 0;
        for m in 1..=spec.max_step {
            let ones_cap = 1u64 << (m - 1);
            let thr = 1u32 << (2 * (m - 1));
            let cores = collect_cores(&cumulative, ones_cap);

            let estimate = estimate_emissions(&spec, &cores, thr);
            budget_used = budget_used.saturating_add(estimate);
            if budget_used > cfg.block_budget {
                return Err(Error::CapExceeded {
                    what: "block budget",
                    needed: budget_used,
                    cap: cfg.block_budget,
                });
            }

            let mut emitted = Emitter::new(l);
            emit_tails(&cores, l, &mut emitted);
            if spec.rule.is_none() {
                emit_periodic(&cores, thr, l, spec.cap_slack, &mut emitted);
            }
            emitted.absorb(emit_joined(&spec, &cores, thr, l, strategy));

            // Normalize per length: sort, dedup, split off what is new.
            let items: Vec<(usize, Vec<u64>)> =
                std::mem::take(&mut emitted.per_len).into_iter().enumerate().collect();
            let cum_ref = &cumulative;
            let merged: Vec<(Vec<u64>, Vec<u64>)> =
                exec::map_ordered(strategy, items, move |(idx, mut keys)| {
                    keys.sort_unstable();
                    keys.dedup();
                    let news = diff_sorted(&keys, &cum_ref[idx]);
                    let union = union_sorted(&cum_ref[idx], &news);
                    (news, union)
                });
            let mut round = Vec::with_capacity(l as usize);
            for (idx, (news, union)) in merged.into_iter().enumerate() {
                cumulative[idx] = union;
                round.push(news);
            }
            step_new.push(round);
        }

        let wrap = |sets: Vec<Vec<u64>>| -> Vec<LangSet> {
            sets.into_iter()
                .enumerate()
                .map(|(idx, keys)| LangSet {
                    n: idx as u32 + 1,
                    keys,
                })
                .collect()
        };
        Ok(WeissLanguage {
            spec,
            step_new: step_new.into_iter().map(wrap).collect(),
            cumulative: wrap(cumulative),
        })
    }

    pub fn spec(&self) -> &WeissSpec {
        &self.spec
    }

    pub fn horizon(&self) -> u32 {
        self.spec.horizon
    }

    pub fn max_step(&self) -> u32 {
        self.spec.max_step
    }

    pub fn describe(&self) -> String {
        self.spec.describe()
    }

    /// All admitted blocks of length n, in lexicographic order.
    pub fn blocks_of_length(&self, n: u32) -> Result<Vec<Block>> {
        Ok(self.slice(n)?.blocks())
    }

    pub(crate) fn slice(&self, n: u32) -> Result<&LangSet> {
        if n == 0 || n > self.horizon() {
            return Err(Error::CapExceeded {
                what: "language horizon",
                needed: n as u64,
                cap: self.horizon() as u64,
            });
        }
        Ok(&self.cumulative[(n - 1) as usize])
    }

    /// Blocks of length n first appearing at the given round.
    pub(crate) fn new_at_step(&self, step: u32, n: u32) -> Result<&LangSet> {
        if step > self.max_step() {
            return Err(Error::Config(format!(
                "round {step} beyond max_step {}",
                self.max_step()
            )));
        }
        if n == 0 || n > self.horizon() {
            return Err(Error::CapExceeded {
                what: "language horizon",
                needed: n as u64,
                cap: self.horizon() as u64,
            });
        }
        Ok(&self.step_new[step as usize][(n - 1) as usize])
    }

    pub fn count_new(&self, step: u32) -> Result<u64> {
        if step > self.max_step() {
            return Err(Error::Config(format!(
                "round {step} beyond max_step {}",
                self.max_step()
            )));
        }
        Ok(self.step_new[step as usize]
            .iter()
            .map(|s| s.len() as u64)
            .sum())
    }

    pub fn contains(&self, w: &Block) -> Result<bool> {
        if w.is_empty() {
            return Ok(true);
        }
        Ok(self.slice(w.len())?.contains_packed(w.packed()))
    }

    /// First round whose language contains w; None when w is outside the
    /// language. Relative to this horizon: enlarging the horizon can only
    /// move an attribution to an earlier round, never a later one.
    pub fn attribution(&self, w: &Block) -> Result<Option<u32>> {
        if w.is_empty() {
            return Ok(Some(0));
        }
        if w.len() > self.horizon() {
            return Err(Error::CapExceeded {
                what: "language horizon",
                needed: w.len() as u64,
                cap: self.horizon() as u64,
            });
        }
        let idx = (w.len() - 1) as usize;
        let bits = w.packed();
        for (step, round) in self.step_new.iter().enumerate() {
            if round[idx].contains_packed(bits) {
                return Ok(Some(step as u32));
            }
        }
        Ok(None)
    }

    /// From-1-to-1 blocks of the round `step` language with 1..=ones_cap
    /// ones and length at most len_cap, sorted by length then lex.
    pub fn from_1_to_1_words(
        &self,
        step: u32,
        ones_cap: u64,
        len_cap: u32,
    ) -> Result<Vec<Block>> {
        if step > self.max_step() {
            return Err(Error::Config(format!(
                "round {step} beyond max_step {}",
                self.max_step()
            )));
        }
        if len_cap > self.horizon() {
            return Err(Error::CapExceeded {
                what: "language horizon",
                needed: len_cap as u64,
                cap: self.horizon() as u64,
            });
        }
        let mut out = Vec::new();
        for n in 1..=len_cap {
            let idx = (n - 1) as usize;
            let mut keys: Vec<u64> = Vec::new();
            for round in self.step_new.iter().take(step as usize + 1) {
                keys.extend_from_slice(&round[idx].keys);
            }
            keys.sort_unstable();
            for key in keys {
                let bits = key_to_bits(key, n);
                if is_f121(bits, n) {
                    let ones = u64::from(bits.count_ones());
                    if (1..=ones_cap).contains(&ones) {
                        out.push(Block::from_packed(bits, n));
                    }
                }
            }
        }
        Ok(out)
    }
}

pub(crate) fn is_f121(bits: u64, n: u32) -> bool {
    n >= 1 && bits & 1 == 1 && (bits >> (n - 1)) & 1 == 1
}

fn collect_cores(cumulative: &[Vec<u64>], ones_cap: u64) -> Vec<(u32, u64)> {
    let mut cores = Vec::new();
    for (idx, keys) in cumulative.iter().enumerate() {
        let n = idx as u32 + 1;
        for &key in keys {
            let bits = key_to_bits(key, n);
            if is_f121(bits, n) && u64::from(bits.count_ones()) <= ones_cap {
                cores.push((n, bits));
            }
        }
    }
    cores
}

/// Per-length emission buffer; keys may repeat until normalization.
struct Emitter {
    per_len: Vec<Vec<u64>>,
}

impl Emitter {
    fn new(l: u32) -> Emitter {
        Emitter {
            per_len: vec![Vec::new(); l as usize],
        }
    }

    #[inline]
    fn push(&mut self, bits: u64, n: u32) {
        self.per_len[(n - 1) as usize].push(lex_key(bits, n));
    }

    fn absorb(&mut self, other: Emitter) {
        for (dst, src) in self.per_len.iter_mut().zip(other.per_len) {
            dst.extend(src);
        }
    }
}

/// Exact number of raw emissions the three emitters would produce, so the
/// block budget can be enforced before allocating.
fn estimate_emissions(spec: &WeissSpec, cores: &[(u32, u64)], thr: u32) -> u64 {
    let l = spec.horizon;
    // (d+1)(d+2)/2 placements of a base inside lengths up to base + d.
    let pad_pairs = |d: u32| -> u64 {
        let d = d as u64;
        (d + 1).saturating_mul(d + 2) / 2
    };
    let mut cnt = vec![0u64; l as usize + 1];
    for &(n, _) in cores {
        cnt[n as usize] += 1;
    }
    let mut total: u64 = 0;
    for cl in 1..=l as usize {
        if cnt[cl] > 0 {
            total = total.saturating_add(cnt[cl].saturating_mul(pad_pairs(l - cl as u32)));
        }
    }
    for sl in 1..=l {
        if cnt[sl as usize] == 0 {
            continue;
        }
        for tl in 1..=l {
            if cnt[tl as usize] == 0 || sl + tl + thr > l {
                continue;
            }
            let pairs = cnt[sl as usize].saturating_mul(cnt[tl as usize]);
            let beta_hi = (thr + l + spec.cap_slack).min(l - sl - tl);
            for beta in thr..=beta_hi {
                if let Some(rule) = &spec.rule {
                    if !rule.contains(beta as u64) {
                        continue;
                    }
                }
                total = total.saturating_add(pairs.saturating_mul(pad_pairs(l - sl - beta - tl)));
            }
        }
    }
    if spec.rule.is_none() {
        for &(cl, _) in cores {
            let k_hi = (thr + l + spec.cap_slack).min(l.saturating_sub(2) / 2);
            for k in thr..=k_hi {
                let p = (cl + k) as u64;
                let lo = 2 * k + 2;
                total = total.saturating_add(p.saturating_mul((l - lo + 1) as u64));
            }
        }
    }
    total
}

/// Tails 0^a u 0^b: every padding of every core.
fn emit_tails(cores: &[(u32, u64)], l: u32, out: &mut Emitter) {
    for &(cl, bits) in cores {
        for a in 0..=(l - cl) {
            let sb = bits << a;
            for total in (cl + a)..=l {
                out.push(sb, total);
            }
        }
    }
}

/// Joined tails 0^a s 0^beta t 0^b with beta >= thr (and beta in S for the
/// gap-set variant). The s-side cores are chunked for the parallel path.
fn emit_joined(
    spec: &WeissSpec,
    cores: &[(u32, u64)],
    thr: u32,
    l: u32,
    strategy: Strategy,
) -> Emitter {
    let chunks: Vec<Vec<(u32, u64)>> = cores.chunks(64).map(|c| c.to_vec()).collect();
    let parts = exec::map_ordered(strategy, chunks, |chunk| {
        let mut em = Emitter::new(l);
        for &(sl, sbits) in &chunk {
            for &(tl, tbits) in cores {
                if sl + tl + thr > l {
                    continue;
                }
                // The length bound always binds below the cap within the
                // horizon; the min records the cap semantics.
                let beta_hi = (thr + l + spec.cap_slack).min(l - sl - tl);
                for beta in thr..=beta_hi {
                    if let Some(rule) = &spec.rule {
                        if !rule.contains(beta as u64) {
                            continue;
                        }
                    }
                    let base_len = sl + beta + tl;
                    let base = sbits | (tbits << (sl + beta));
                    for a in 0..=(l - base_len) {
                        let sb = base << a;
                        for total in (base_len + a)..=l {
                            em.push(sb, total);
                        }
                    }
                }
            }
        }
        em
    });
    let mut merged = Emitter::new(l);
    for part in parts {
        merged.absorb(part);
    }
    merged
}

/// Windows of (u 0^k)^inf, k >= thr, of every phase and every length from
/// 2k + 2 up to the horizon. Shorter windows show at most two one-groups
/// and already arise among the tail forms.
fn emit_periodic(cores: &[(u32, u64)], thr: u32, l: u32, slack: u32, out: &mut Emitter) {
    let k_hi = (thr + l + slack).min(l.saturating_sub(2) / 2);
    for &(cl, bits) in cores {
        for k in thr..=k_hi {
            let p = cl + k;
            let lo = 2 * k + 2;
            let buf = periodic_buffer(bits, cl, k, l);
            for phase in 0..p {
                for wl in lo..=l {
                    out.push(read_window(&buf, phase, wl), wl);
                }
            }
        }
    }
}

/// Bit buffer holding (core 0^k) repeated long enough that any window of
/// length <= l starting inside the first period can be read.
fn periodic_buffer(core_bits: u64, core_len: u32, k: u32, l: u32) -> Vec<u64> {
    let p = core_len + k;
    let need = (p + l) as usize;
    let mut buf = vec![0u64; need.div_ceil(64)];
    for i in 0..need {
        let pos = (i as u32) % p;
        if pos < core_len && (core_bits >> pos) & 1 == 1 {
            buf[i / 64] |= 1 << (i % 64);
        }
    }
    buf
}

fn read_window(buf: &[u64], start: u32, len: u32) -> u64 {
    let w = (start / 64) as usize;
    let off = start % 64;
    let lo = buf[w] >> off;
    let hi = if off == 0 {
        0
    } else {
        buf.get(w + 1).copied().unwrap_or(0) << (64 - off)
    };
    let bits = lo | hi;
    if len == 64 {
        bits
    } else {
        bits & ((1u64 << len) - 1)
    }
}

/// Elements of `a` not in `b`; both sorted.
fn diff_sorted(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = Vec::new();
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j >= b.len() || b[j] != x {
            out.push(x);
        }
    }
    out
}

/// Sorted union of two sorted, disjoint-or-not key lists.
fn union_sorted(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::blk;

    fn cfg() -> Config {
        Config::default()
    }

    fn lang(step: u32, horizon: u32) -> WeissLanguage {
        WeissLanguage::generate(WeissSpec::new(step, horizon).unwrap(), &cfg()).unwrap()
    }

    fn slice_strings(lang: &WeissLanguage, n: u32) -> Vec<String> {
        lang.slice(n).unwrap().blocks().iter().map(|b| b.to_string()).collect()
    }

    #[test]
    fn round_zero_has_at_most_one_one() {
        let lang = lang(0, 8);
        assert_eq!(slice_strings(&lang, 2), ["00", "01", "10"]);
        assert_eq!(lang.slice(8).unwrap().len(), 9);
        assert!(!lang.contains(&blk("11")).unwrap());
    }

    #[test]
    fn round_one_slice_three() {
        let lang = lang(1, 8);
        assert_eq!(slice_strings(&lang, 3), ["000", "001", "010", "100", "101"]);
    }

    #[test]
    fn round_one_counts() {
        let lang = lang(1, 12);
        let expected = [2u64, 3, 5, 8, 13, 19];
        for (i, &want) in expected.iter().enumerate() {
            let n = i as u32 + 1;
            assert_eq!(
                lang.slice(n).unwrap().len() as u64,
                want,
                "count at length {n}"
            );
        }
    }

    #[test]
    fn adjacent_ones_never_appear() {
        let lang = lang(3, 20);
        for n in 2..=20 {
            for b in lang.slice(n).unwrap().blocks() {
                let bits = b.packed();
                assert_eq!(bits & (bits >> 1), 0, "adjacent ones in {b}");
            }
        }
    }

    #[test]
    fn attribution_of_basic_blocks() {
        let lang = lang(3, 16);
        assert_eq!(lang.attribution(&blk("000")).unwrap(), Some(0));
        assert_eq!(lang.attribution(&blk("1")).unwrap(), Some(0));
        assert_eq!(lang.attribution(&blk("101")).unwrap(), Some(1));
        assert_eq!(lang.attribution(&blk("10101")).unwrap(), Some(1));
        assert_eq!(lang.attribution(&blk("11")).unwrap(), None);
    }

    #[test]
    fn the_round_three_tail_block() {
        // The padded core 10101 first gains its trailing zeros at round 3:
        // rounds 1 and 2 only show it inside 1-gap periodic context.
        let step3 = lang(3, 16);
        assert!(step3.contains(&blk("1010100")).unwrap());
        assert_eq!(step3.attribution(&blk("1010100")).unwrap(), Some(3));
        let step2 = lang(2, 16);
        assert!(!step2.contains(&blk("1010100")).unwrap());
    }

    #[test]
    fn rounds_nest() {
        let small = lang(2, 12);
        let big = lang(3, 12);
        for n in 1..=12 {
            let inner = small.slice(n).unwrap();
            let outer = big.slice(n).unwrap();
            for bits in inner.iter_packed() {
                assert!(outer.contains_packed(bits), "nesting fails at length {n}");
            }
        }
    }

    #[test]
    fn from_1_to_1_collection() {
        let lang = lang(1, 8);
        let words: Vec<String> = lang
            .from_1_to_1_words(1, 2, 4)
            .unwrap()
            .iter()
            .map(|b| b.to_string())
            .collect();
        assert_eq!(words, ["1", "101", "1001"]);
    }

    #[test]
    fn gap_set_variant_drops_odd_gaps() {
        let spec = WeissSpec::new(1, 12).unwrap().with_rule(SetRule::Even);
        let lang = WeissLanguage::generate(spec, &cfg()).unwrap();
        assert!(!lang.contains(&blk("101")).unwrap(), "gap 1 is odd");
        assert!(lang.contains(&blk("1001")).unwrap(), "gap 2 is even");
        assert!(!lang.contains(&blk("10101")).unwrap(), "no periodic orbits");
    }

    #[test]
    fn cap_slack_is_invisible_below_the_horizon() {
        let a = lang(2, 24);
        let spec = WeissSpec::new(2, 24).unwrap().with_cap_slack(8);
        let b = WeissLanguage::generate(spec, &cfg()).unwrap();
        for n in 1..=24 {
            assert_eq!(
                a.slice(n).unwrap().keys,
                b.slice(n).unwrap().keys,
                "slack changed length {n}"
            );
        }
    }

    #[test]
    fn config_parsing() {
        let spec = WeissSpec::from_config_str("max_step = 2\nhorizon = 32\n").unwrap();
        assert_eq!(spec.max_step, 2);
        assert_eq!(spec.horizon, 32);
        assert_eq!(spec.rule, None);

        let spec =
            WeissSpec::from_config_str("# variant\nmax_step = 1\ns_rule = multiples:3\n").unwrap();
        assert_eq!(spec.rule, Some(SetRule::Multiples { k: 3 }));
        assert_eq!(spec.describe(), "weiss:step=1,S=multiples:3");

        assert!(WeissSpec::from_config_str("horizon = 10\n").is_err());
        assert!(WeissSpec::from_config_str("max_step = 9\n").is_err());
        assert!(WeissSpec::from_config_str("max_step\n").is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let mut tight = cfg();
        tight.block_budget = 1000;
        let err = WeissLanguage::generate(WeissSpec::new(2, 32).unwrap(), &tight).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { what: "block budget", .. }));
    }
}
