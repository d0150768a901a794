//! Finite-horizon detectors for Li-Yorke and distributional-chaos pair
//! types.
//!
//! Distances follow the standard sequence metric 2^{-j} with j the first
//! disagreeing coordinate counted from 0. Window agreement ties the
//! distribution functions of a pair to densities: the distance profile at a
//! scale t in (2^{-k}, 2^{-k+1}] is the density of the positions whose
//! length-k windows agree. All estimates are window statistics over the tail
//! half of the horizon, exact rationals, and explicitly horizon-relative:
//! verdicts are candidates, never theorems.

use serde::{Deserialize, Serialize};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::density::{tail_half_bounds, IndexSet, Rat};
use crate::weiss::WeissLanguage;
use crate::words::{concat, subblock, Block};
use crate::{Config, Error, Result};

/// Finite recipe for a point of a shift space. Prefixes of any length can be
/// generated from it; the recipe doubles as the text form in pair files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PointDescriptor {
    /// The fixed point of all zeros.
    Zero,
    /// pattern repeated forever.
    Periodic { pattern: Block },
    /// 0^alpha u 0^beta v 0^inf; with v absent, the tail point 0^alpha u
    /// 0^inf (beta must then be 0).
    Joining {
        alpha: u32,
        u: Block,
        beta: u32,
        v: Option<Block>,
    },
    /// 0^f 1^f 0^{f^2} 1^{f^2} 0^{f^3} ...: run lengths growing by a factor,
    /// so run densities oscillate forever.
    AlternatingRuns { factor: u32 },
    /// A literal prefix; usable only up to its own length.
    Explicit { bits: Block },
}

impl PointDescriptor {
    /// The first n symbols of the described point.
    pub fn prefix(&self, n: u32) -> Result<Block> {
        match self {
            PointDescriptor::Zero => Ok(Block::zeros(n)),
            PointDescriptor::Periodic { pattern } => {
                if pattern.is_empty() {
                    return Err(Error::Config("periodic pattern must be nonempty".into()));
                }
                Ok(pattern.repeat_to(n))
            }
            PointDescriptor::Joining { alpha, u, beta, v } => {
                if u.is_empty() {
                    return Err(Error::Config("joining head block must be nonempty".into()));
                }
                if v.is_none() && *beta != 0 {
                    return Err(Error::Config(
                        "a tail point takes no gap; set beta = 0 or give v".into(),
                    ));
                }
                let (ul, vl) = (u.len(), v.as_ref().map_or(0, Block::len));
                Ok(Block::from_fn(n, |i| {
                    if i <= *alpha {
                        false
                    } else if i <= alpha + ul {
                        u.bit(i - alpha)
                    } else if i <= alpha + ul + beta {
                        false
                    } else if i <= alpha + ul + beta + vl {
                        v.as_ref().expect("vl > 0 means v is present").bit(i - alpha - ul - beta)
                    } else {
                        false
                    }
                }))
            }
            PointDescriptor::AlternatingRuns { factor } => {
                if *factor < 2 {
                    return Err(Error::Config(format!(
                        "alternating runs need factor >= 2, got {factor}"
                    )));
                }
                let mut b = Block::empty();
                let mut run = u64::from(*factor);
                'fill: loop {
                    for symbol in [false, true] {
                        for _ in 0..run {
                            if b.len() == n {
                                break 'fill;
                            }
                            b.push(symbol);
                        }
                    }
                    run = run.saturating_mul(u64::from(*factor));
                }
                Ok(b)
            }
            PointDescriptor::Explicit { bits } => {
                if bits.len() < n {
                    return Err(Error::Config(format!(
                        "explicit point of length {} cannot reach horizon {n}",
                        bits.len()
                    )));
                }
                Ok(Block::from_fn(n, |i| bits.bit(i)))
            }
        }
    }

    /// Compact text form: zero | periodic:PAT | tail:ALPHA,U |
    /// joining:ALPHA,U,BETA,V | runs:FACTOR | explicit:BITS.
    pub fn describe(&self) -> String {
        match self {
            PointDescriptor::Zero => "zero".into(),
            PointDescriptor::Periodic { pattern } => format!("periodic:{pattern}"),
            PointDescriptor::Joining { alpha, u, beta, v } => match v {
                Some(v) => format!("joining:{alpha},{u},{beta},{v}"),
                None => format!("tail:{alpha},{u}"),
            },
            PointDescriptor::AlternatingRuns { factor } => format!("runs:{factor}"),
            PointDescriptor::Explicit { bits } => format!("explicit:{bits}"),
        }
    }

    pub fn parse(s: &str) -> Result<PointDescriptor> {
        let bad = |msg: String| Error::Config(msg);
        let block = |part: &str| -> Result<Block> {
            part.parse()
                .map_err(|e| bad(format!("bad block in point descriptor: {e}")))
        };
        if s == "zero" {
            return Ok(PointDescriptor::Zero);
        }
        let (head, rest) = s
            .split_once(':')
            .ok_or_else(|| bad(format!("unknown point descriptor {s:?}")))?;
        match head {
            "periodic" => Ok(PointDescriptor::Periodic {
                pattern: block(rest)?,
            }),
            "tail" => {
                let (a, u) = rest
                    .split_once(',')
                    .ok_or_else(|| bad(format!("tail wants ALPHA,U, got {rest:?}")))?;
                Ok(PointDescriptor::Joining {
                    alpha: a.parse().map_err(|e| bad(format!("bad alpha: {e}")))?,
                    u: block(u)?,
                    beta: 0,
                    v: None,
                })
            }
            "joining" => {
                let parts: Vec<&str> = rest.split(',').collect();
                if parts.len() != 4 {
                    return Err(bad(format!("joining wants ALPHA,U,BETA,V, got {rest:?}")));
                }
                Ok(PointDescriptor::Joining {
                    alpha: parts[0].parse().map_err(|e| bad(format!("bad alpha: {e}")))?,
                    u: block(parts[1])?,
                    beta: parts[2].parse().map_err(|e| bad(format!("bad beta: {e}")))?,
                    v: Some(block(parts[3])?),
                })
            }
            "runs" => Ok(PointDescriptor::AlternatingRuns {
                factor: rest.parse().map_err(|e| bad(format!("bad factor: {e}")))?,
            }),
            "explicit" => Ok(PointDescriptor::Explicit { bits: block(rest)? }),
            other => Err(bad(format!("unknown point descriptor kind {other:?}"))),
        }
    }
}

/// A generated prefix together with the recipe that produced it.
#[derive(Debug, Clone)]
pub struct OrbitPrefix {
    pub point: Block,
    pub source: String,
}

pub fn orbit_prefix(desc: &PointDescriptor, n: u32) -> Result<OrbitPrefix> {
    Ok(OrbitPrefix {
        point: desc.prefix(n)?,
        source: desc.describe(),
    })
}

/// run[p] (1-based) = length of the agreement run starting at p: 0 on a
/// mismatch, else 1 + run[p+1]. Entry 0 is unused.
fn agreement_runs(x: &Block, y: &Block) -> Vec<u32> {
    let n = x.len();
    let mut run = vec![0u32; n as usize + 2];
    for p in (1..=n).rev() {
        if x.bit(p) == y.bit(p) {
            run[p as usize] = run[p as usize + 1] + 1;
        }
    }
    run
}

fn common_horizon(x: &Block, y: &Block) -> Result<u32> {
    if x.len() != y.len() {
        return Err(Error::Config(format!(
            "prefixes must share a horizon, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.is_empty() {
        return Err(Error::Config("empty prefixes carry no statistics".into()));
    }
    Ok(x.len())
}

/// The positions p in 1..=N-k+1 where the length-k windows of the two
/// prefixes agree, as a characteristic word.
pub fn equal_set(x: &Block, y: &Block, k: u32) -> Result<IndexSet> {
    let n = common_horizon(x, y)?;
    if k == 0 || k > n {
        return Err(Error::Config(format!(
            "window length must be in 1..={n}, got {k}"
        )));
    }
    let run = agreement_runs(x, y);
    Ok(IndexSet::from_chi(Block::from_fn(n - k + 1, |p| {
        run[p as usize] >= k
    })))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileRow {
    pub k: u32,
    pub lower: Rat,
    pub upper: Rat,
}

/// Per-k window statistics: minimum and maximum of |Equal^k cap [1,n]| / n
/// over n in the tail half of the horizon. The ratio denominators run over
/// the full horizon for every k, so rows are pointwise non-increasing in k.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionProfile {
    pub horizon: u32,
    pub rows: Vec<ProfileRow>,
}

pub fn distribution_profile(x: &Block, y: &Block, k_max: u32) -> Result<DistributionProfile> {
    let n = common_horizon(x, y)?;
    if k_max == 0 {
        return Err(Error::Config("need k_max >= 1".into()));
    }
    if 4 * k_max > n {
        return Err(Error::Config(format!(
            "horizon {n} is too short for k_max {k_max}; need at least 4 k_max"
        )));
    }
    let run = agreement_runs(x, y);
    let mut rows = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        // run[p] >= k already fails past N-k+1, so this is the Equal^k
        // characteristic word padded onto the full horizon.
        let chi = Block::from_fn(n, |p| run[p as usize] >= k);
        let (lower, upper) = tail_half_bounds(&chi);
        rows.push(ProfileRow { k, lower, upper });
    }
    Ok(DistributionProfile { horizon: n, rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LiYorkeEvidence {
    /// Late full-match runs and late mismatches both recur.
    EvidenceFor,
    /// The tails agree outright; no limsup evidence at this horizon.
    EvidenceAgainst,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DcClass {
    None,
    Dc3Candidate,
    Dc2Candidate,
    Dc1Candidate,
}

/// Horizon-relative pair classification; classes are candidates, never
/// theorems, since no finite computation decides a liminf.
#[derive(Debug, Clone, Serialize)]
pub struct PairVerdict {
    pub li_yorke: LiYorkeEvidence,
    pub dc_class: DcClass,
    pub horizon: u32,
}

fn rat_f64(r: Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Classifies a pair from its distribution profile and late-window behavior.
/// The strongest candidate wins: all upper estimates near 1 with some lower
/// near 0 reads as DC1, with some lower merely depressed as DC2; otherwise a
/// persistent lower/upper gap reads as DC3.
pub fn classify_pair(x: &OrbitPrefix, y: &OrbitPrefix, k_max: u32, cfg: &Config) -> Result<PairVerdict> {
    let profile = distribution_profile(&x.point, &y.point, k_max)?;
    let n = profile.horizon;
    let tol = cfg.chaos_tol;
    let gap = cfg.chaos_gap;

    let all_upper_high = profile.rows.iter().all(|r| rat_f64(r.upper) >= 1.0 - tol);
    let some_lower_zero = profile.rows.iter().any(|r| rat_f64(r.lower) <= tol);
    let some_lower_low = profile.rows.iter().any(|r| rat_f64(r.lower) <= 1.0 - gap);
    let max_gap = profile
        .rows
        .iter()
        .map(|r| rat_f64(r.upper) - rat_f64(r.lower))
        .fold(0.0, f64::max);
    let dc_class = if all_upper_high && some_lower_zero {
        DcClass::Dc1Candidate
    } else if all_upper_high && some_lower_low {
        DcClass::Dc2Candidate
    } else if max_gap >= gap {
        DcClass::Dc3Candidate
    } else {
        DcClass::None
    };

    let run = agreement_runs(&x.point, &y.point);
    let tail_from = n.div_ceil(2);
    let late_mismatch = (tail_from..=n).any(|p| run[p as usize] == 0);
    let late_close = (tail_from..=n).any(|p| run[p as usize] >= cfg.proximity_len);
    let li_yorke = if !late_mismatch {
        LiYorkeEvidence::EvidenceAgainst
    } else if late_close {
        LiYorkeEvidence::EvidenceFor
    } else {
        LiYorkeEvidence::Inconclusive
    };

    Ok(PairVerdict {
        li_yorke,
        dc_class,
        horizon: n,
    })
}

/// Deterministic sampler for points of a staged language: tails, joins at or
/// above the round threshold, and periodic points, with cores drawn from the
/// previous round. Every prefix is validated window-by-window against the
/// language before it is returned.
pub fn sample_weiss_pairs(
    lang: &WeissLanguage,
    pairs: usize,
    n: u32,
    seed: u64,
    cfg: &Config,
) -> Result<Vec<(OrbitPrefix, OrbitPrefix)>> {
    let step = lang.max_step();
    if step == 0 {
        return Err(Error::Config("sampling needs a language of step >= 1".into()));
    }
    let ones_cap = 1u64 << (step - 1);
    let thr = 1u32 << (2 * (step - 1));
    let len_cap = lang.horizon().min(16);
    let cores = lang.from_1_to_1_words(step - 1, ones_cap, len_cap)?;
    if cores.is_empty() {
        return Err(Error::Config("no cores available at this horizon".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(pairs);
    for _ in 0..pairs {
        let mut point = || -> Result<OrbitPrefix> {
            let core = cores[rng.gen_range(0..cores.len())].clone();
            let desc = match rng.gen_range(0..3u8) {
                0 => PointDescriptor::Joining {
                    alpha: rng.gen_range(0..8),
                    u: core,
                    beta: 0,
                    v: None,
                },
                1 => PointDescriptor::Joining {
                    alpha: rng.gen_range(0..8),
                    u: core,
                    beta: thr + rng.gen_range(0..16),
                    v: Some(cores[rng.gen_range(0..cores.len())].clone()),
                },
                _ => {
                    let gap = thr + rng.gen_range(0..16);
                    PointDescriptor::Periodic {
                        pattern: concat(&core, &Block::zeros(gap)),
                    }
                }
            };
            let prefix = orbit_prefix(&desc, n)?;
            if let Some(start) = validate_windows(lang, &prefix.point)? {
                return Err(Error::Config(format!(
                    "sampled point {} leaves the language at position {start}",
                    prefix.source
                )));
            }
            Ok(prefix)
        };
        let a = point()?;
        let b = point()?;
        out.push((a, b));
    }
    let _ = cfg;
    Ok(out)
}

/// First position whose horizon-length window falls outside the language;
/// None when every window passes. Factoriality makes checking the single
/// longest window length sufficient.
pub fn validate_windows(lang: &WeissLanguage, point: &Block) -> Result<Option<u32>> {
    let l = lang.horizon().min(point.len());
    if l == 0 {
        return Ok(None);
    }
    for start in 1..=(point.len() - l + 1) {
        let w = subblock(point, start, start + l - 1);
        if !lang.contains(&w)? {
            return Ok(Some(start));
        }
    }
    Ok(None)
}
