//! Independence sets for block families: assignment certificates, the
//! counting lemmas (Pajor; Sauer, Perles, Shelah), the binomial-tail entropy
//! bound, the Karpovsky-Milman density pipeline, and the characteristic-word
//! language I_X.
//!
//! A set J of positions is independent for a family F of n-blocks when every
//! map J -> {0,1} is realized by some member. Assignments are indexed by
//! reading the required bits along the sorted J as a binary string, most
//! significant first, so index order is lexicographic order of assignment
//! strings.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::density::Rat;
use crate::exec;
use crate::shiftspace::{blocks_of_length, entropy_estimate, ExplicitLanguage, ShiftSpec};
use crate::words::{lex_key, Block};
use crate::{Config, Error, Result};

/// A set of distinct binary blocks of one common length, kept sorted
/// lexicographically so that first-found witnesses are lexicographically
/// least.
#[derive(Debug, Clone)]
pub struct BlockFamily {
    n: u32,
    members: Vec<Block>,
}

impl BlockFamily {
    pub fn new(n: u32, blocks: impl IntoIterator<Item = Block>) -> Result<BlockFamily> {
        if n == 0 || n > crate::MAX_PACKED_LEN {
            return Err(Error::Config(format!(
                "family length must be in 1..={}, got {n}",
                crate::MAX_PACKED_LEN
            )));
        }
        let mut members: Vec<Block> = blocks.into_iter().collect();
        for b in &members {
            if b.len() != n {
                return Err(Error::Config(format!(
                    "family of length {n} cannot hold {b} of length {}",
                    b.len()
                )));
            }
        }
        members.sort_by_key(|b| lex_key(b.packed(), n));
        members.dedup_by_key(|b| b.packed());
        Ok(BlockFamily { n, members })
    }

    /// The length-n slice of a shift space's language as a family.
    pub fn from_language(spec: &ShiftSpec, n: u32, cfg: &Config) -> Result<BlockFamily> {
        BlockFamily::new(n, blocks_of_length(spec, n, cfg)?.blocks)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Block] {
        &self.members
    }
}

/// One witness block per assignment, indexed as described in the module
/// docs. The empty family certifies the empty set with no witnesses; every
/// other certificate holds exactly 2^|J| blocks.
#[derive(Debug, Clone)]
pub struct IndependenceCertificate {
    pub j: Vec<u32>,
    pub witnesses: Vec<Block>,
}

/// The first assignment (in index order) no member realizes, as
/// (position, required bit) pairs along J.
#[derive(Debug, Clone)]
pub struct Refutation {
    pub j: Vec<u32>,
    pub assignment: Vec<(u32, bool)>,
}

#[derive(Debug, Clone)]
pub enum IndependenceOutcome {
    Independent(IndependenceCertificate),
    Refuted(Refutation),
}

impl IndependenceOutcome {
    pub fn is_independent(&self) -> bool {
        matches!(self, IndependenceOutcome::Independent(_))
    }
}

fn validate_j(n: u32, j: &[u32], cfg: &Config) -> Result<Vec<u32>> {
    let mut j: Vec<u32> = j.to_vec();
    j.sort_unstable();
    j.dedup();
    if let Some(&p) = j.iter().find(|&&p| p == 0 || p > n) {
        return Err(Error::Config(format!(
            "index {p} is outside 1..={n}"
        )));
    }
    if j.len() as u32 > cfg.j_cap {
        return Err(Error::CapExceeded {
            what: "independence set size",
            needed: j.len() as u64,
            cap: cfg.j_cap as u64,
        });
    }
    Ok(j)
}

fn assignment_index(b: &Block, j: &[u32]) -> usize {
    let mut idx = 0usize;
    for &p in j {
        idx = (idx << 1) | b.bit(p) as usize;
    }
    idx
}

fn decode_assignment(idx: usize, j: &[u32]) -> Vec<(u32, bool)> {
    let k = j.len();
    j.iter()
        .enumerate()
        .map(|(t, &p)| (p, (idx >> (k - 1 - t)) & 1 == 1))
        .collect()
}

/// Checks all 2^|J| assignments against the family, producing either a full
/// witness map (lexicographically least witnesses) or the first missing
/// assignment. The empty set is independent for every family, the empty one
/// included.
pub fn is_independence_set(
    family: &BlockFamily,
    j: &[u32],
    cfg: &Config,
) -> Result<IndependenceOutcome> {
    let j = validate_j(family.n, j, cfg)?;
    if j.is_empty() && family.is_empty() {
        return Ok(IndependenceOutcome::Independent(IndependenceCertificate {
            j,
            witnesses: Vec::new(),
        }));
    }
    let size = 1usize << j.len();
    let mut witnesses: Vec<Option<&Block>> = vec![None; size];
    let mut seen = 0usize;
    for b in &family.members {
        let slot = &mut witnesses[assignment_index(b, &j)];
        if slot.is_none() {
            *slot = Some(b);
            seen += 1;
            if seen == size {
                break;
            }
        }
    }
    if seen == size {
        Ok(IndependenceOutcome::Independent(IndependenceCertificate {
            j,
            witnesses: witnesses.into_iter().map(|w| w.unwrap().clone()).collect(),
        }))
    } else {
        let idx = witnesses.iter().position(|w| w.is_none()).unwrap();
        let assignment = decode_assignment(idx, &j);
        Ok(IndependenceOutcome::Refuted(Refutation { j, assignment }))
    }
}

/// Projects packed bits onto the set positions of mask, low positions first.
fn project(bits: u64, mask: u64) -> u64 {
    let mut out = 0u64;
    let mut out_bit = 0u32;
    let mut m = mask;
    while m != 0 {
        let low = m & m.wrapping_neg();
        if bits & low != 0 {
            out |= 1 << out_bit;
        }
        out_bit += 1;
        m &= m - 1;
    }
    out
}

/// Whether the positions of mask form an independence set: all 2^k
/// projections must occur among the members.
fn mask_passes(members: &[Block], mask: u64) -> bool {
    let k = mask.count_ones();
    let size = 1usize << k;
    if members.len() < size {
        return false;
    }
    let mut seen = vec![false; size];
    let mut hits = 0usize;
    for b in members {
        let p = project(b.packed(), mask) as usize;
        if !seen[p] {
            seen[p] = true;
            hits += 1;
            if hits == size {
                return true;
            }
        }
    }
    false
}

fn mask_to_set(mask: u64) -> Vec<u32> {
    (0..64).filter(|t| mask >> t & 1 == 1).map(|t| t + 1).collect()
}

/// All independence sets of the family, as position sets sorted by (size,
/// lexicographic rank). Contains the empty set for every family.
pub fn independence_sets(family: &BlockFamily, cfg: &Config) -> Result<Vec<Vec<u32>>> {
    Ok(independence_masks(family, cfg)?
        .into_iter()
        .map(mask_to_set)
        .collect())
}

/// Mask form of [`independence_sets`], sorted by (popcount, value). Subset
/// closure prunes the level-by-level enumeration: a set is tested only when
/// all its one-smaller subsets passed.
pub(crate) fn independence_masks(family: &BlockFamily, cfg: &Config) -> Result<Vec<u64>> {
    let n = family.n;
    if n > 16 {
        return Err(Error::CapExceeded {
            what: "power-set enumeration",
            needed: n as u64,
            cap: 16,
        });
    }
    let total = 1usize << n;
    let mut passed = vec![false; total];
    passed[0] = true;
    let mut out = vec![0u64];
    let mut level: Vec<u64> = Vec::new();
    for k in 1..=n {
        level.clear();
        for mask in 1..total as u64 {
            if mask.count_ones() != k {
                continue;
            }
            let mut m = mask;
            let mut viable = true;
            while m != 0 {
                let low = m & m.wrapping_neg();
                if !passed[(mask ^ low) as usize] {
                    viable = false;
                    break;
                }
                m &= m - 1;
            }
            if viable {
                level.push(mask);
            }
        }
        if level.is_empty() {
            break;
        }
        let members = family.members();
        let verdicts = exec::map_ordered(cfg.strategy, level.clone(), |mask| {
            (mask, mask_passes(members, mask))
        });
        for (mask, ok) in verdicts {
            if ok {
                passed[mask as usize] = true;
                out.push(mask);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct PajorReport {
    pub independence_count: u64,
    pub family_count: u64,
    pub pass: bool,
}

/// The counting inequality |Ind(F)| >= |F|.
pub fn pajor_check(family: &BlockFamily, cfg: &Config) -> Result<PajorReport> {
    let independence_count = independence_masks(family, cfg)?.len() as u64;
    let family_count = family.len() as u64;
    Ok(PajorReport {
        independence_count,
        family_count,
        pass: independence_count >= family_count,
    })
}

/// Sum of C(n, j) for j < k: families larger than this must carry a size-k
/// independence set.
pub fn sauer_threshold(n: u32, k: u32) -> Result<BigUint> {
    if k == 0 || k > n {
        return Err(Error::Config(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    let mut sum = BigUint::ZERO;
    for j in 0..k {
        sum += num_integer::binomial(BigUint::from(n), BigUint::from(j));
    }
    Ok(sum)
}

/// The lexicographically first size-k independence set, or None. Depth-first
/// search over ascending positions; a dependent prefix closes its whole
/// subtree, since supersets of dependent sets are dependent.
pub fn find_independent_of_size(
    family: &BlockFamily,
    k: u32,
    cfg: &Config,
) -> Result<Option<Vec<u32>>> {
    if k == 0 {
        return Ok(Some(Vec::new()));
    }
    if k > family.n {
        return Ok(None);
    }
    if k > cfg.j_cap {
        return Err(Error::CapExceeded {
            what: "independence set size",
            needed: k as u64,
            cap: cfg.j_cap as u64,
        });
    }
    let mut visits = 0u64;
    let mut stack: Vec<u32> = Vec::with_capacity(k as usize);
    let found = dfs(family, k, 1, 0, &mut stack, &mut visits, cfg)?;
    Ok(found.then(|| stack.clone()))
}

/// Greedily grows an independence set by ascending positions until no
/// further coordinate keeps it independent. The result is maximal, not
/// maximum.
pub fn maximal_extension(family: &BlockFamily, j: &[u32], cfg: &Config) -> Result<Vec<u32>> {
    let mut j = validate_j(family.n, j, cfg)?;
    let mut mask = j.iter().fold(0u64, |m, &p| m | 1u64 << (p - 1));
    if !j.is_empty() && !mask_passes(family.members(), mask) {
        return Err(Error::Config(format!(
            "the seed set {j:?} is not an independence set"
        )));
    }
    for p in 1..=family.n {
        if mask & (1u64 << (p - 1)) != 0 {
            continue;
        }
        let next = mask | 1u64 << (p - 1);
        if j.len() as u32 + 1 > cfg.j_cap {
            break;
        }
        if mask_passes(family.members(), next) {
            mask = next;
            j.push(p);
        }
    }
    j.sort_unstable();
    Ok(j)
}

fn dfs(
    family: &BlockFamily,
    k: u32,
    from: u32,
    mask: u64,
    stack: &mut Vec<u32>,
    visits: &mut u64,
    cfg: &Config,
) -> Result<bool> {
    if stack.len() as u32 == k {
        return Ok(true);
    }
    let remaining = k - stack.len() as u32;
    for p in from..=(family.n + 1 - remaining) {
        *visits += 1;
        if *visits > cfg.subset_budget {
            return Err(Error::CapExceeded {
                what: "subset budget",
                needed: *visits,
                cap: cfg.subset_budget,
            });
        }
        let next = mask | 1u64 << (p - 1);
        if !mask_passes(family.members(), next) {
            continue;
        }
        stack.push(p);
        if dfs(family, k, p + 1, next, stack, visits, cfg)? {
            return Ok(true);
        }
        stack.pop();
    }
    Ok(false)
}

/// H(eps) = -eps log2 eps - (1-eps) log2 (1-eps), for eps in (0, 1).
pub fn binary_entropy(eps: Rat) -> Result<f64> {
    if eps <= Rat::new(0, 1) || eps >= Rat::new(1, 1) {
        return Err(Error::Config(format!(
            "binary entropy needs eps in (0, 1), got {eps}"
        )));
    }
    let x = *eps.numer() as f64 / *eps.denom() as f64;
    Ok(-x * x.log2() - (1.0 - x) * (1.0 - x).log2())
}

/// log2 of a positive big integer, exact to f64 precision.
fn log2_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 53 {
        x.to_f64().expect("small biguint").log2()
    } else {
        let shift = bits - 53;
        let top = (x >> shift).to_f64().expect("53-bit mantissa");
        top.log2() + shift as f64
    }
}

#[derive(Debug, Clone)]
pub struct BinomialTailReport {
    pub n: u32,
    pub eps: Rat,
    pub floor_eps_n: u64,
    pub tail_sum: BigUint,
    pub tail_log2: f64,
    pub bound_log2: f64,
    pub pass: bool,
}

/// Exact check of sum_{j <= floor(n eps)} C(n, j) <= 2^{n H(eps)}: the left
/// side is exact, the right side enters as n H(eps) with a hair of outward
/// rounding.
pub fn suma_check(n: u32, eps: Rat) -> Result<BinomialTailReport> {
    if n == 0 {
        return Err(Error::Config("need n >= 1".into()));
    }
    if eps <= Rat::new(0, 1) || eps > Rat::new(1, 2) {
        return Err(Error::Config(format!(
            "the tail bound needs eps in (0, 1/2], got {eps}"
        )));
    }
    let floor_eps_n = (i128::from(*eps.numer()) * i128::from(n) / i128::from(*eps.denom())) as u64;
    let mut tail_sum = BigUint::ZERO;
    for j in 0..=floor_eps_n {
        tail_sum += num_integer::binomial(BigUint::from(n), BigUint::from(j));
    }
    let tail_log2 = log2_biguint(&tail_sum);
    let bound_log2 = f64::from(n) * binary_entropy(eps)?;
    Ok(BinomialTailReport {
        n,
        eps,
        floor_eps_n,
        tail_sum,
        tail_log2,
        bound_log2,
        pass: tail_log2 <= bound_log2 + 1e-9,
    })
}

/// Largest dyadic eps in (0, 1/2] with H(eps) <= min(h, 1) - margin, at
/// denominator 2^{bisect_depth + 1}. Binary entropy increases on (0, 1/2],
/// so bisection on the numerator suffices.
pub fn karpovsky_milman_epsilon(h: f64, cfg: &Config) -> Result<Rat> {
    if !h.is_finite() || h <= 0.0 {
        return Err(Error::Config(format!("need a positive finite h, got {h}")));
    }
    let target = h.min(1.0) - cfg.km_margin;
    if target <= 0.0 {
        return Err(Error::Hypothesis(format!(
            "entropy bound {h} leaves no eps under margin {}",
            cfg.km_margin
        )));
    }
    let denom: i64 = 1 << (cfg.bisect_depth + 1);
    let h_at = |num: i64| binary_entropy(Rat::new(num, denom)).expect("eps in (0, 1/2]");
    if h_at(1) > target {
        return Err(Error::Hypothesis(format!(
            "no eps at denominator 2^{} satisfies H(eps) <= {target}",
            cfg.bisect_depth + 1
        )));
    }
    // Invariant: H(lo/denom) <= target, H(hi/denom) > target or hi is 1/2+.
    let (mut lo, mut hi) = (1i64, denom / 2 + 1);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if mid > denom / 2 || h_at(mid) > target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Rat::new(lo, denom))
}

#[derive(Debug, Clone)]
pub struct KmReport {
    pub n: u32,
    pub entropy_inf: f64,
    pub eps: Rat,
    pub target_size: u32,
    pub j: Vec<u32>,
    pub certificate: IndependenceCertificate,
}

/// floor(eps * n) computed exactly on the rational.
pub fn km_target_size(eps: Rat, n: u32) -> u32 {
    (i128::from(*eps.numer()) * i128::from(n) / i128::from(*eps.denom())) as u32
}

/// The density pipeline: entropy estimate, eps extraction, then a
/// floor(eps n)-element independence set for B_n(X). Greedy growth first
/// (smallest position that keeps the set certifiable), exhaustive
/// lexicographic search as fallback.
pub fn km_independence(spec: &ShiftSpec, n: u32, cfg: &Config) -> Result<KmReport> {
    if n == 0 || n > crate::MAX_PACKED_LEN {
        return Err(Error::Config(format!(
            "need n in 1..={}, got {n}",
            crate::MAX_PACKED_LEN
        )));
    }
    let entropy_inf = entropy_estimate(spec, n, cfg)?.final_running_inf();
    let eps = karpovsky_milman_epsilon(entropy_inf, cfg)?;
    let target_size = km_target_size(eps, n);
    let family = BlockFamily::from_language(spec, n, cfg)?;

    let mut mask = 0u64;
    let mut j: Vec<u32> = Vec::new();
    for p in 1..=n {
        if j.len() as u32 == target_size {
            break;
        }
        let next = mask | 1u64 << (p - 1);
        if mask_passes(family.members(), next) {
            mask = next;
            j.push(p);
        }
    }
    if j.len() as u32 != target_size {
        j = find_independent_of_size(&family, target_size, cfg)?.ok_or_else(|| {
            Error::Hypothesis(format!(
                "no independence set of size {target_size} in the length-{n} slice"
            ))
        })?;
    }
    let certificate = match is_independence_set(&family, &j, cfg)? {
        IndependenceOutcome::Independent(cert) => cert,
        IndependenceOutcome::Refuted(_) => unreachable!("verified set lost its certificate"),
    };
    Ok(KmReport {
        n,
        entropy_inf,
        eps,
        target_size,
        j,
        certificate,
    })
}

/// The shift space of characteristic words of independence sets: its
/// length-n slice holds chi_J for every independence set J of B_n(X). The
/// packed bits of chi_J are exactly the mask of J.
pub fn build_i_x(spec: &ShiftSpec, n_max: u32, cfg: &Config) -> Result<ShiftSpec> {
    if n_max == 0 {
        return Err(Error::Config("need n_max >= 1".into()));
    }
    if n_max > 14 {
        return Err(Error::CapExceeded {
            what: "characteristic-language horizon",
            needed: n_max as u64,
            cap: 14,
        });
    }
    let mut slices = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let family = BlockFamily::from_language(spec, n, cfg)?;
        let masks = independence_masks(&family, cfg)?;
        slices.push(
            masks
                .into_iter()
                .map(|mask| Block::from_packed(mask, n))
                .collect(),
        );
    }
    Ok(ShiftSpec::Explicit(Arc::new(ExplicitLanguage::from_slices(
        slices,
    )?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::limiting_frequency;
    use crate::shiftspace::{check_factorial_prolongable, full_shift, golden_mean};
    use crate::words::{all_blocks, blk};

    fn cfg() -> Config {
        Config::default()
    }

    fn family(n: u32, strs: &[&str]) -> BlockFamily {
        BlockFamily::new(n, strs.iter().map(|s| blk(s))).unwrap()
    }

    fn full_family(n: u32) -> BlockFamily {
        BlockFamily::new(n, all_blocks(n, &cfg()).unwrap()).unwrap()
    }

    #[test]
    fn full_family_realizes_everything() {
        let f = full_family(2);
        match is_independence_set(&f, &[1, 2], &cfg()).unwrap() {
            IndependenceOutcome::Independent(cert) => {
                assert_eq!(cert.witnesses.len(), 4);
                for (idx, w) in cert.witnesses.iter().enumerate() {
                    for (t, &p) in cert.j.iter().enumerate() {
                        let want = (idx >> (cert.j.len() - 1 - t)) & 1;
                        assert_eq!(w.bit(p) as usize, want);
                    }
                }
            }
            IndependenceOutcome::Refuted(_) => panic!("full family refuted"),
        }
    }

    #[test]
    fn two_member_family_certificates_and_refutations() {
        let f = family(2, &["01", "10"]);
        let one = is_independence_set(&f, &[1], &cfg()).unwrap();
        match one {
            IndependenceOutcome::Independent(cert) => {
                assert_eq!(cert.witnesses[0], blk("01"));
                assert_eq!(cert.witnesses[1], blk("10"));
            }
            IndependenceOutcome::Refuted(_) => panic!("size 1 should pass"),
        }
        match is_independence_set(&f, &[1, 2], &cfg()).unwrap() {
            IndependenceOutcome::Refuted(r) => {
                assert_eq!(r.assignment, vec![(1, false), (2, false)]);
            }
            IndependenceOutcome::Independent(_) => panic!("00 is unrealizable"),
        }
    }

    #[test]
    fn empty_set_is_independent_for_every_family() {
        let empty = BlockFamily::new(3, Vec::<Block>::new()).unwrap();
        assert!(is_independence_set(&empty, &[], &cfg()).unwrap().is_independent());
        let sets = independence_sets(&empty, &cfg()).unwrap();
        assert_eq!(sets, vec![Vec::<u32>::new()]);
        let f = family(2, &["01"]);
        match is_independence_set(&f, &[], &cfg()).unwrap() {
            IndependenceOutcome::Independent(cert) => {
                assert_eq!(cert.witnesses, vec![blk("01")]);
            }
            IndependenceOutcome::Refuted(_) => panic!("empty set refuted"),
        }
    }

    #[test]
    fn enumeration_and_pajor_small_cases() {
        let sets = independence_sets(&full_family(2), &cfg()).unwrap();
        assert_eq!(sets.len(), 4);
        let f = family(2, &["01", "10"]);
        let sets = independence_sets(&f, &cfg()).unwrap();
        assert_eq!(sets, vec![vec![], vec![1], vec![2]]);
        let rep = pajor_check(&f, &cfg()).unwrap();
        assert_eq!(
            (rep.independence_count, rep.family_count, rep.pass),
            (3, 2, true)
        );
        let rep = pajor_check(&full_family(3), &cfg()).unwrap();
        assert_eq!(
            (rep.independence_count, rep.family_count, rep.pass),
            (8, 8, true)
        );
    }

    #[test]
    fn independence_sets_are_subset_closed() {
        let f = family(4, &["0000", "0001", "0010", "0011", "1100", "0111"]);
        let masks = independence_masks(&f, &cfg()).unwrap();
        for &m in &masks {
            let mut sub = m;
            while sub != 0 {
                let low = sub & sub.wrapping_neg();
                assert!(masks.contains(&(m ^ low)), "closure fails under {m:#b}");
                sub &= sub - 1;
            }
        }
    }

    #[test]
    fn sauer_threshold_values() {
        assert_eq!(sauer_threshold(4, 2).unwrap(), BigUint::from(5u32));
        assert_eq!(sauer_threshold(7, 1).unwrap(), BigUint::from(1u32));
        assert_eq!(sauer_threshold(5, 5).unwrap(), BigUint::from(31u32));
        assert!(sauer_threshold(3, 0).is_err());
        assert!(sauer_threshold(3, 4).is_err());
    }

    #[test]
    fn sauer_extremal_family_has_no_large_set() {
        // All blocks with < k ones: exactly threshold many, no size-k set.
        for (n, k) in [(4u32, 2u32), (6, 3), (5, 2)] {
            let members: Vec<Block> = all_blocks(n, &cfg())
                .unwrap()
                .into_iter()
                .filter(|b| b.ones() < k)
                .collect();
            let f = BlockFamily::new(n, members).unwrap();
            assert_eq!(
                BigUint::from(f.len() as u64),
                sauer_threshold(n, k).unwrap()
            );
            assert_eq!(find_independent_of_size(&f, k, &cfg()).unwrap(), None);
        }
    }

    #[test]
    fn one_block_above_the_threshold_suffices_here() {
        let f = family(4, &["0000", "1000", "0100", "0010", "0001", "0011"]);
        assert_eq!(f.len(), 6);
        let j = find_independent_of_size(&f, 2, &cfg()).unwrap().unwrap();
        assert_eq!(j, vec![3, 4]);
        assert!(is_independence_set(&f, &j, &cfg()).unwrap().is_independent());
    }

    #[test]
    fn singleton_family_is_dependent_everywhere() {
        let f = family(3, &["000"]);
        assert_eq!(find_independent_of_size(&f, 1, &cfg()).unwrap(), None);
    }

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(Rat::new(1, 2)).unwrap(), 1.0);
        assert!((binary_entropy(Rat::new(1, 4)).unwrap() - 0.811_278_124_459_1).abs() < 1e-9);
        assert!((binary_entropy(Rat::new(17, 100)).unwrap() - 0.657_705).abs() < 1e-5);
        let h = binary_entropy(Rat::new(1, 4)).unwrap();
        let h_sym = binary_entropy(Rat::new(3, 4)).unwrap();
        assert!((h - h_sym).abs() < 1e-12);
        assert!(binary_entropy(Rat::new(0, 1)).is_err());
        assert!(binary_entropy(Rat::new(1, 1)).is_err());
    }

    #[test]
    fn binomial_tail_bound_cases() {
        let rep = suma_check(4, Rat::new(1, 4)).unwrap();
        assert_eq!(rep.floor_eps_n, 1);
        assert_eq!(rep.tail_sum, BigUint::from(5u32));
        assert!(rep.pass);
        let rep = suma_check(10, Rat::new(1, 2)).unwrap();
        assert_eq!(rep.tail_sum, BigUint::from(638u32));
        assert!(rep.pass);
        assert!(suma_check(5, Rat::new(3, 4)).is_err());
    }

    #[test]
    fn epsilon_extraction_brackets_the_target() {
        let c = cfg();
        let eps = karpovsky_milman_epsilon(1.0, &c).unwrap();
        assert!(binary_entropy(eps).unwrap() <= 0.99);
        assert!(eps > Rat::new(2, 5), "eps should sit near 1/2, got {eps}");
        let eps = karpovsky_milman_epsilon(0.6942, &c).unwrap();
        assert!(binary_entropy(eps).unwrap() <= 0.6942 - c.km_margin);
        assert_eq!(km_target_size(eps, 8), 1);
        assert_eq!(km_target_size(eps, 10), 1);
        assert_eq!(km_target_size(eps, 12), 2);
        assert!(matches!(
            karpovsky_milman_epsilon(0.005, &c),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn greedy_extension_saturates_the_full_shift() {
        let c = Config::default();
        let family = BlockFamily::from_language(&full_shift(2).unwrap(), 8, &c).unwrap();
        let j = maximal_extension(&family, &[], &c).unwrap();
        assert_eq!(j, (1..=8).collect::<Vec<u32>>());
    }

    #[test]
    fn greedy_extension_on_the_golden_mean_takes_alternating_positions() {
        let c = Config::default();
        let family = BlockFamily::from_language(&golden_mean(), 10, &c).unwrap();
        let j = maximal_extension(&family, &[], &c).unwrap();
        assert_eq!(j, vec![1, 3, 5, 7, 9]);
        let seeded = maximal_extension(&family, &[2], &c).unwrap();
        assert!(seeded.contains(&2) && seeded.len() > 1);
        assert!(maximal_extension(&family, &[1, 2], &c).is_err());
    }

    #[test]
    fn km_pipeline_on_the_golden_mean() {
        let spec = golden_mean();
        for (n, want) in [(8u32, 1usize), (10, 1), (12, 2)] {
            let rep = km_independence(&spec, n, &cfg()).unwrap();
            assert_eq!(rep.j.len(), want, "n={n}");
            assert_eq!(rep.target_size as usize, want);
            assert_eq!(rep.certificate.witnesses.len(), 1 << want);
            let f = BlockFamily::from_language(&spec, n, &cfg()).unwrap();
            assert!(is_independence_set(&f, &rep.j, &cfg()).unwrap().is_independent());
        }
    }

    #[test]
    fn km_pipeline_on_the_full_shift() {
        let spec = full_shift(2).unwrap();
        let rep = km_independence(&spec, 8, &cfg()).unwrap();
        assert_eq!(rep.entropy_inf, 1.0);
        assert_eq!(rep.j.len() as u32, rep.target_size);
        assert_eq!(rep.j.len(), km_target_size(rep.eps, 8) as usize);
    }

    #[test]
    fn characteristic_language_of_the_golden_mean_is_itself() {
        let c = cfg();
        let spec = golden_mean();
        let ix = build_i_x(&spec, 10, &c).unwrap();
        for n in 1..=10 {
            let a = blocks_of_length(&ix, n, &c).unwrap().blocks;
            let b = blocks_of_length(&spec, n, &c).unwrap().blocks;
            assert_eq!(a, b, "slices differ at n={n}");
        }
        assert!(check_factorial_prolongable(&ix, 10, &c).unwrap().pass);
    }

    #[test]
    fn characteristic_language_of_the_full_shift_is_full() {
        let c = cfg();
        let ix = build_i_x(&full_shift(2).unwrap(), 6, &c).unwrap();
        for n in 1..=6 {
            assert_eq!(
                blocks_of_length(&ix, n, &c).unwrap().count,
                1 << n,
                "n={n}"
            );
        }
    }

    #[test]
    fn characteristic_language_frequency_matches_the_remark() {
        let c = cfg();
        let ix = build_i_x(&golden_mean(), 12, &c).unwrap();
        let table = limiting_frequency(&ix, 1, 12, &c).unwrap();
        assert_eq!(table.theta_estimate, Rat::new(1, 2));
    }

    #[test]
    fn entropy_dominates_the_characteristic_frequency() {
        let c = cfg();
        for spec in [golden_mean(), full_shift(2).unwrap()] {
            let ix = build_i_x(&spec, 10, &c).unwrap();
            let theta = limiting_frequency(&ix, 1, 10, &c).unwrap().theta_estimate;
            let h = entropy_estimate(&spec, 10, &c).unwrap().final_running_inf();
            let theta_f = *theta.numer() as f64 / *theta.denom() as f64;
            assert!(h >= theta_f, "h={h} < theta={theta}");
        }
    }

    #[test]
    fn caps_are_enforced() {
        let f = full_family(4);
        let tight = Config {
            j_cap: 2,
            ..Config::default()
        };
        assert!(matches!(
            is_independence_set(&f, &[1, 2, 3], &tight),
            Err(Error::CapExceeded { .. })
        ));
        assert!(matches!(
            find_independent_of_size(&f, 3, &tight),
            Err(Error::CapExceeded { .. })
        ));
        assert!(is_independence_set(&f, &[0], &cfg()).is_err());
        assert!(is_independence_set(&f, &[5], &cfg()).is_err());
        assert!(build_i_x(&golden_mean(), 15, &cfg()).is_err());
        let wide = BlockFamily::new(17, all_blocks(17, &cfg()).unwrap()).unwrap();
        assert!(matches!(
            independence_sets(&wide, &cfg()),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn budget_stops_the_subset_search() {
        let f = full_family(12);
        let tiny = Config {
            subset_budget: 3,
            ..Config::default()
        };
        assert!(matches!(
            find_independent_of_size(&f, 6, &tiny),
            Err(Error::CapExceeded { .. })
        ));
    }
}
