//! Index sets of naturals and their density arithmetic, plus maximal symbol
//! frequencies over a shift language.
//!
//! Densities are exact rationals. For eventually periodic sets the reported
//! values are the true infima (a scan over one preperiod and two periods
//! suffices by periodicity); for finite data they are horizon surrogates:
//! the lower and upper density of a length-N prefix are the min and max of
//! the running density over the tail half [N/2, N].

use crate::shiftspace::{blocks_of_length, membership, ShiftSpec};
use crate::words::{blk, subblock, Block};
use crate::{Config, Error, Result};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

pub type Rat = Ratio<i64>;

/// A subset of the naturals given by a closed-form membership rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum SetRule {
    All,
    Even,
    Odd,
    Multiples { k: u64 },
    List { items: Vec<u64> },
    /// {n : frac(n * p / q) < 1/2} for a rotation number p/q in (0,1).
    Rotation { p: i64, q: i64 },
}

impl SetRule {
    pub fn contains(&self, n: u64) -> bool {
        match self {
            SetRule::All => true,
            SetRule::Even => n % 2 == 0,
            SetRule::Odd => n % 2 == 1,
            SetRule::Multiples { k } => *k != 0 && n % k == 0,
            SetRule::List { items } => items.binary_search(&n).is_ok(),
            SetRule::Rotation { p, q } => {
                // frac(n p / q) < 1/2  <=>  2 (n p mod q) < q, exactly.
                let r = (n as i64).checked_mul(*p).expect("rotation overflow") % q;
                2 * r < *q
            }
        }
    }

    /// Parses "all", "even", "odd", "multiples:k", or "list:a+b+c".
    pub fn parse(s: &str) -> Result<SetRule> {
        match s {
            "all" => return Ok(SetRule::All),
            "even" => return Ok(SetRule::Even),
            "odd" => return Ok(SetRule::Odd),
            _ => {}
        }
        if let Some(k) = s.strip_prefix("multiples:") {
            let k: u64 = k
                .parse()
                .map_err(|_| Error::Config(format!("bad multiples rule {s:?}")))?;
            if k == 0 {
                return Err(Error::Config("multiples:0 is empty".into()));
            }
            return Ok(SetRule::Multiples { k });
        }
        if let Some(list) = s.strip_prefix("list:") {
            let mut items = Vec::new();
            for part in list.split('+') {
                let v: u64 = part
                    .parse()
                    .map_err(|_| Error::Config(format!("bad list item {part:?} in rule")))?;
                items.push(v);
            }
            items.sort_unstable();
            items.dedup();
            if items.is_empty() {
                return Err(Error::Config("empty list rule".into()));
            }
            return Ok(SetRule::List { items });
        }
        if let Some(frac) = s.strip_prefix("rotation:") {
            let (p, q) = frac
                .split_once('/')
                .ok_or_else(|| Error::Config(format!("rotation rule needs p/q in {s:?}")))?;
            let p: i64 = p
                .parse()
                .map_err(|_| Error::Config(format!("bad rotation numerator in {s:?}")))?;
            let q: i64 = q
                .parse()
                .map_err(|_| Error::Config(format!("bad rotation denominator in {s:?}")))?;
            if q <= 0 || p <= 0 || p >= q {
                return Err(Error::Config("rotation number must be in (0, 1)".into()));
            }
            return Ok(SetRule::Rotation { p, q });
        }
        Err(Error::Config(format!("unknown set rule {s:?}")))
    }

    pub fn descriptor(&self) -> String {
        match self {
            SetRule::All => "all".into(),
            SetRule::Even => "even".into(),
            SetRule::Odd => "odd".into(),
            SetRule::Multiples { k } => format!("multiples:{k}"),
            SetRule::List { items } => {
                let parts: Vec<String> = items.iter().map(|v| v.to_string()).collect();
                format!("list:{}", parts.join("+"))
            }
            SetRule::Rotation { p, q } => format!("rotation:{p}/{q}"),
        }
    }

    /// Preperiod and period characteristic words when the rule is eventually
    /// periodic by construction.
    fn eventually_periodic(&self) -> Option<(Block, Block)> {
        match self {
            SetRule::All => Some((Block::empty(), blk("1"))),
            SetRule::Even => Some((Block::empty(), blk("01"))),
            SetRule::Odd => Some((Block::empty(), blk("10"))),
            SetRule::Multiples { k } => {
                let mut period = Block::zeros(*k as u32);
                period.set(*k as u32, true);
                Some((Block::empty(), period))
            }
            SetRule::List { items } => {
                // Finite sets are eventually periodic with period "0".
                let max = *items.last().unwrap();
                if max > 100_000 {
                    return None;
                }
                let pre = Block::from_fn(max as u32, |i| items.binary_search(&(i as u64)).is_ok());
                Some((pre, blk("0")))
            }
            SetRule::Rotation { .. } => None,
        }
    }
}

/// A set of naturals, represented finitely.
#[derive(Debug, Clone, PartialEq)]
pub enum IndexSet {
    /// Characteristic word of the set within [1, |chi|]; nothing is known
    /// beyond the horizon.
    FinitePrefix { chi: Block },
    /// Characteristic word split into a preperiod and a repeating period.
    EventuallyPeriodic { pre: Block, period: Block },
    Rule(SetRule),
}

impl IndexSet {
    pub fn from_chi(chi: Block) -> IndexSet {
        IndexSet::FinitePrefix { chi }
    }

    pub fn eventually_periodic(pre: Block, period: Block) -> Result<IndexSet> {
        if period.is_empty() {
            return Err(Error::Config("period must be nonempty".into()));
        }
        Ok(IndexSet::EventuallyPeriodic { pre, period })
    }

    /// Parses "chi:BITS", "ep:PRE,PERIOD", or a set rule.
    pub fn parse(s: &str) -> Result<IndexSet> {
        if let Some(bits) = s.strip_prefix("chi:") {
            return Ok(IndexSet::from_chi(bits.parse()?));
        }
        if let Some(rest) = s.strip_prefix("ep:") {
            let (pre, period) = rest
                .split_once(',')
                .ok_or_else(|| Error::Config(format!("ep set needs PRE,PERIOD in {s:?}")))?;
            return IndexSet::eventually_periodic(pre.parse()?, period.parse()?);
        }
        Ok(IndexSet::Rule(SetRule::parse(s)?))
    }

    pub fn contains(&self, n: u64) -> bool {
        match self {
            IndexSet::FinitePrefix { chi } => n >= 1 && n <= chi.len() as u64 && chi.bit(n as u32),
            IndexSet::EventuallyPeriodic { pre, period } => {
                if n == 0 {
                    return false;
                }
                if n <= pre.len() as u64 {
                    pre.bit(n as u32)
                } else {
                    let off = (n - pre.len() as u64 - 1) % period.len() as u64;
                    period.bit(off as u32 + 1)
                }
            }
            IndexSet::Rule(rule) => n >= 1 && rule.contains(n),
        }
    }

    /// Characteristic word of the set within [1, n].
    pub fn chi_prefix(&self, n: u32) -> Block {
        Block::from_fn(n, |i| self.contains(i as u64))
    }

    pub fn describe(&self) -> String {
        match self {
            IndexSet::FinitePrefix { chi } => format!("chi:{chi}"),
            IndexSet::EventuallyPeriodic { pre, period } => format!("ep:{pre},{period}"),
            IndexSet::Rule(rule) => format!("{rule:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub horizon: u64,
    /// inf over n of |A cap [1,n]| / n.
    pub shnirelman: Rat,
    /// True when the value is the exact infimum rather than a horizon min.
    pub exact: bool,
    pub lower: Rat,
    pub upper: Rat,
    /// Present when lower and upper agree (eventually periodic case).
    pub asymptotic: Option<Rat>,
}

/// Running-density bounds over the tail half of a finite characteristic
/// word: (min, max) of c(n)/n for n in [ceil(N/2), N].
pub(crate) fn tail_half_bounds(chi: &Block) -> (Rat, Rat) {
    let n = chi.len();
    assert!(n >= 1, "tail bounds need a nonempty prefix");
    let start = n.div_ceil(2);
    let mut count: i64 = 0;
    let mut lo = Rat::new(1, 1);
    let mut hi = Rat::new(0, 1);
    for i in 1..=n {
        if chi.bit(i) {
            count += 1;
        }
        if i >= start {
            let r = Rat::new(count, i as i64);
            if r < lo {
                lo = r;
            }
            if r > hi {
                hi = r;
            }
        }
    }
    (lo, hi)
}

fn finite_report(chi: &Block) -> DensityReport {
    let n = chi.len();
    let mut count: i64 = 0;
    let mut shn = Rat::new(1, 1);
    for i in 1..=n {
        if chi.bit(i) {
            count += 1;
        }
        let r = Rat::new(count, i as i64);
        if r < shn {
            shn = r;
        }
    }
    let (lower, upper) = tail_half_bounds(chi);
    let asymptotic = (lower == upper).then_some(lower);
    DensityReport {
        horizon: n as u64,
        shnirelman: shn,
        exact: false,
        lower,
        upper,
        asymptotic,
    }
}

fn periodic_report(pre: &Block, period: &Block) -> DensityReport {
    let a = pre.len() as i64;
    let p = period.len() as i64;
    let d = Rat::new(period.ones() as i64, p);
    // The running density equals d in the limit and every value it takes
    // below d already appears within the first preperiod plus two periods.
    let scan = (a + 2 * p) as u32;
    let set = IndexSet::EventuallyPeriodic {
        pre: pre.clone(),
        period: period.clone(),
    };
    let mut count: i64 = 0;
    let mut shn = d;
    for i in 1..=scan {
        if set.contains(i as u64) {
            count += 1;
        }
        let r = Rat::new(count, i as i64);
        if r < shn {
            shn = r;
        }
    }
    DensityReport {
        horizon: scan as u64,
        shnirelman: shn,
        exact: true,
        lower: d,
        upper: d,
        asymptotic: Some(d),
    }
}

/// Shnirelman, lower, upper, and asymptotic densities of the set.
///
/// Eventually periodic representations (including the closed-form rules) get
/// exact values; finite prefixes and rotation rules are evaluated to the
/// horizon.
pub fn density_report(set: &IndexSet, horizon: u64) -> Result<DensityReport> {
    match set {
        IndexSet::FinitePrefix { chi } => {
            if chi.is_empty() {
                return Err(Error::Config("empty characteristic word".into()));
            }
            let n = if horizon == 0 {
                chi.len()
            } else {
                (chi.len() as u64).min(horizon) as u32
            };
            Ok(finite_report(&subblock(chi, 1, n)))
        }
        IndexSet::EventuallyPeriodic { pre, period } => Ok(periodic_report(pre, period)),
        IndexSet::Rule(rule) => match rule.eventually_periodic() {
            Some((pre, period)) => Ok(periodic_report(&pre, &period)),
            None => {
                if horizon == 0 {
                    return Err(Error::Config("rule sets need a positive horizon".into()));
                }
                if horizon > 1_000_000 {
                    return Err(Error::CapExceeded {
                        what: "density horizon",
                        needed: horizon,
                        cap: 1_000_000,
                    });
                }
                let chi = Block::from_fn(horizon as u32, |i| rule.contains(i as u64));
                Ok(finite_report(&chi))
            }
        },
    }
}

#[derive(Debug, Clone)]
pub struct MaxOccurrences {
    pub k: u32,
    pub count: u64,
    /// Lexicographically smallest block attaining the maximum.
    pub witness: Block,
}

/// d^a_k: the maximal number of occurrences of symbol `a` over B_k(X).
pub fn max_occurrences(spec: &ShiftSpec, a: u8, k: u32, cfg: &Config) -> Result<MaxOccurrences> {
    assert!(a <= 1, "binary alphabet");
    let slice = blocks_of_length(spec, k, cfg)?;
    let mut best: Option<(u64, Block)> = None;
    for w in slice.blocks {
        let c = crate::words::count_symbol(&w, a);
        match &best {
            Some((b, _)) if *b >= c => {}
            _ => best = Some((c, w)),
        }
    }
    let (count, witness) =
        best.ok_or_else(|| Error::Config(format!("empty language slice at n={k}")))?;
    Ok(MaxOccurrences { k, count, witness })
}

#[derive(Debug, Clone)]
pub struct FreqRow {
    pub k: u32,
    pub count: u64,
    pub ratio: Rat,
}

/// Ratios d^a_k / k with their running minimum; the sequence d^a_k is
/// subadditive, so the minimum converges to the limiting frequency.
#[derive(Debug, Clone)]
pub struct FrequencyTable {
    pub a: u8,
    pub rows: Vec<FreqRow>,
    pub theta_estimate: Rat,
}

pub fn limiting_frequency(spec: &ShiftSpec, a: u8, k_max: u32, cfg: &Config) -> Result<FrequencyTable> {
    if k_max == 0 {
        return Err(Error::Config("limiting_frequency needs k_max >= 1".into()));
    }
    let mut rows = Vec::with_capacity(k_max as usize);
    let mut theta = Rat::new(1, 1);
    for k in 1..=k_max {
        let m = max_occurrences(spec, a, k, cfg)?;
        let ratio = Rat::new(m.count as i64, k as i64);
        if ratio < theta {
            theta = ratio;
        }
        rows.push(FreqRow {
            k,
            count: m.count,
            ratio,
        });
    }
    Ok(FrequencyTable {
        a,
        rows,
        theta_estimate: theta,
    })
}

/// Finds the lexicographically smallest block w of length k in the language
/// such that every prefix w_[1,j] carries at least theta * j occurrences of
/// the symbol `a`. Returns None when no such block exists.
pub fn star_prefix(
    spec: &ShiftSpec,
    a: u8,
    k: u32,
    theta: Rat,
    _cfg: &Config,
) -> Result<Option<Block>> {
    assert!(a <= 1, "binary alphabet");
    if theta < Rat::new(0, 1) {
        return Err(Error::Config("theta must be nonnegative".into()));
    }
    if k == 0 || k > crate::MAX_PACKED_LEN {
        return Err(Error::Config(format!(
            "star prefix length must be in 1..={}",
            crate::MAX_PACKED_LEN
        )));
    }
    let p = *theta.numer();
    let q = *theta.denom();
    // Depth-first search, zero branch first; prefixes violating the
    // frequency constraint or leaving the language are pruned.
    fn dfs(
        spec: &ShiftSpec,
        a: u8,
        k: u32,
        p: i64,
        q: i64,
        bits: u64,
        len: u32,
        count: i64,
    ) -> Result<Option<Block>> {
        if len == k {
            return Ok(Some(Block::from_packed(bits, len)));
        }
        for sym in [0u8, 1u8] {
            let new_bits = bits | ((sym as u64) << len);
            let new_count = count + i64::from(sym == a);
            let j = (len + 1) as i64;
            if new_count * q < j * p {
                continue;
            }
            let prefix = Block::from_packed(new_bits, len + 1);
            if !membership(spec, &prefix)? {
                continue;
            }
            if let Some(found) = dfs(spec, a, k, p, q, new_bits, len + 1, new_count)? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }
    dfs(spec, a, k, p, q, 0, 0, 0)
}

/// Prefix of length n of the extremal point: the limiting frequency at
/// k_search feeds the star-prefix search and the result is truncated.
pub fn extremal_point_prefix(
    spec: &ShiftSpec,
    a: u8,
    n: u32,
    k_search: u32,
    cfg: &Config,
) -> Result<Block> {
    if n == 0 || n > k_search {
        return Err(Error::Config(format!(
            "need 1 <= n <= k_search, got n={n}, k_search={k_search}"
        )));
    }
    let table = limiting_frequency(spec, a, k_search, cfg)?;
    let theta = table.theta_estimate;
    let w = star_prefix(spec, a, k_search, theta, cfg)?.ok_or_else(|| {
        Error::Config(format!(
            "no star prefix at k_search={k_search} for theta={theta}: raise k_search"
        ))
    })?;
    Ok(subblock(&w, 1, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shiftspace::golden_mean;

    fn cfg() -> Config {
        Config::default()
    }

    fn rat(p: i64, q: i64) -> Rat {
        Rat::new(p, q)
    }

    #[test]
    fn density_of_all_naturals() {
        let set = IndexSet::Rule(SetRule::All);
        let rep = density_report(&set, 100).unwrap();
        assert_eq!(rep.shnirelman, rat(1, 1));
        assert!(rep.exact);
        assert_eq!(rep.asymptotic, Some(rat(1, 1)));
    }

    #[test]
    fn density_of_evens_and_odds() {
        let evens = density_report(&IndexSet::Rule(SetRule::Even), 100).unwrap();
        assert_eq!(evens.shnirelman, rat(0, 1), "1 is missing, so the inf is 0");
        assert_eq!(evens.asymptotic, Some(rat(1, 2)));
        assert!(evens.exact);

        let odds = density_report(&IndexSet::Rule(SetRule::Odd), 100).unwrap();
        assert_eq!(odds.shnirelman, rat(1, 2));
        assert_eq!(odds.asymptotic, Some(rat(1, 2)));
    }

    #[test]
    fn density_of_multiples() {
        let rep = density_report(&IndexSet::Rule(SetRule::Multiples { k: 3 }), 50).unwrap();
        assert_eq!(rep.shnirelman, rat(0, 1));
        assert_eq!(rep.asymptotic, Some(rat(1, 3)));
    }

    #[test]
    fn density_of_finite_prefix() {
        let set = IndexSet::from_chi(blk("110100"));
        let rep = density_report(&set, 6).unwrap();
        assert_eq!(rep.shnirelman, rat(1, 2));
        assert!(!rep.exact);
        // Tail half is n in [3, 6]: ratios 2/3, 3/4, 3/5, 3/6.
        assert_eq!(rep.lower, rat(1, 2));
        assert_eq!(rep.upper, rat(3, 4));
        assert_eq!(rep.asymptotic, None);
    }

    #[test]
    fn shnirelman_never_exceeds_lower() {
        let samples = ["1", "0101101", "0001", "111000111000", "10"];
        for s in samples {
            let rep = density_report(&IndexSet::from_chi(blk(s)), 64).unwrap();
            assert!(rep.shnirelman <= rep.lower, "ordering on {s}");
            assert!(rep.lower <= rep.upper, "ordering on {s}");
        }
    }

    #[test]
    fn eventually_periodic_exact_inf() {
        // Preperiod "0", then period "10": the set {2, 4, 6, ...} shifted;
        // chi = 0 1 0 1 0 ... so the inf is attained at n = 1.
        let set = IndexSet::eventually_periodic(blk("0"), blk("10")).unwrap();
        let rep = density_report(&set, 0).unwrap();
        assert_eq!(rep.shnirelman, rat(0, 1));
        assert_eq!(rep.asymptotic, Some(rat(1, 2)));

        // All ones: inf 1 exactly.
        let ones = IndexSet::eventually_periodic(Block::empty(), blk("1")).unwrap();
        let rep = density_report(&ones, 0).unwrap();
        assert_eq!(rep.shnirelman, rat(1, 1));
    }

    #[test]
    fn rotation_rule_matches_fractional_parts() {
        // p/q ~ sqrt(2) - 1 with denominator 10^6.
        let rule = SetRule::Rotation { p: 414_213, q: 1_000_000 };
        assert!(rule.contains(1));
        assert!(!rule.contains(2));
        assert!(rule.contains(3));
        let rep = density_report(&IndexSet::Rule(rule), 10_000).unwrap();
        assert!(!rep.exact);
        // Equidistribution keeps the tail densities near 1/2.
        assert!(rep.lower > rat(2, 5) && rep.upper < rat(3, 5));
    }

    #[test]
    fn max_occurrences_on_golden_mean() {
        let m = max_occurrences(&golden_mean(), 1, 5, &cfg()).unwrap();
        assert_eq!(m.count, 3);
        assert_eq!(m.witness, blk("10101"));
        let m = max_occurrences(&golden_mean(), 0, 4, &cfg()).unwrap();
        assert_eq!(m.count, 4);
        assert_eq!(m.witness, blk("0000"));
    }

    #[test]
    fn golden_mean_limiting_frequency_is_half() {
        let table = limiting_frequency(&golden_mean(), 1, 12, &cfg()).unwrap();
        assert_eq!(table.theta_estimate, rat(1, 2));
        for row in &table.rows {
            assert_eq!(row.count as i64, (row.k as i64 + 1) / 2, "ceil(k/2) at {}", row.k);
        }
    }

    #[test]
    fn star_prefix_on_golden_mean() {
        let w = star_prefix(&golden_mean(), 1, 4, rat(1, 2), &cfg()).unwrap();
        assert_eq!(w, Some(blk("1010")));
        let none = star_prefix(&golden_mean(), 1, 4, rat(2, 3), &cfg()).unwrap();
        assert_eq!(none, None, "no golden-mean block keeps two thirds ones");
    }

    #[test]
    fn extremal_prefix_on_golden_mean() {
        let w = extremal_point_prefix(&golden_mean(), 1, 12, 20, &cfg()).unwrap();
        assert_eq!(w, blk("101010101010"));
        // Every prefix satisfies the star property at theta = 1/2.
        let mut count = 0i64;
        for j in 1..=w.len() {
            count += i64::from(w.bit(j));
            assert!(2 * count >= j as i64);
        }
    }

    #[test]
    fn index_set_parsing() {
        assert_eq!(
            IndexSet::parse("chi:10110").unwrap(),
            IndexSet::from_chi(blk("10110"))
        );
        assert_eq!(
            IndexSet::parse("ep:0,10").unwrap(),
            IndexSet::eventually_periodic(blk("0"), blk("10")).unwrap()
        );
        assert_eq!(
            IndexSet::parse("multiples:4").unwrap(),
            IndexSet::Rule(SetRule::Multiples { k: 4 })
        );
        assert_eq!(
            IndexSet::parse("list:3+5+9").unwrap(),
            IndexSet::Rule(SetRule::List { items: vec![3, 5, 9] })
        );
        assert!(IndexSet::parse("ep:letters,1").is_err());
        assert!(IndexSet::parse("frobnicate").is_err());
    }
}
