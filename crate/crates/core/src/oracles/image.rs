use std::collections::BTreeMap;

use crate::circuit::{BitString, Circuit};
use crate::error::{CapacityError, Error, Result};

/// Largest input count the exhaustive image oracles will enumerate.
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

fn check_cap(c: &Circuit, cap: usize) -> Result<()> {
    if c.n() > cap {
        return Err(CapacityError::Enumeration {
            inputs: c.n(),
            cap,
        }
        .into());
    }
    Ok(())
}

/// Packed input words for the 64 assignments `base … base + 63`.
fn input_words(base: u64, n: usize) -> Vec<u64> {
    (0..n)
        .map(|i| {
            if i < 6 {
                // bit i of (base + lane) with base a multiple of 64
                const PATTERNS: [u64; 6] = [
                    0xaaaa_aaaa_aaaa_aaaa,
                    0xcccc_cccc_cccc_cccc,
                    0xf0f0_f0f0_f0f0_f0f0,
                    0xff00_ff00_ff00_ff00,
                    0xffff_0000_ffff_0000,
                    0xffff_ffff_0000_0000,
                ];
                PATTERNS[i]
            } else if (base >> i) & 1 == 1 {
                u64::MAX
            } else {
                0
            }
        })
        .collect()
}

/// Calls `visit(lane_mask, output_words)` for every block of 64 assignments;
/// `lane_mask` marks the lanes that correspond to real assignments.
fn for_each_block(c: &Circuit, mut visit: impl FnMut(u64, u64, &[u64]) -> bool) {
    let rows = 1u64 << c.n();
    let mut base = 0u64;
    while base < rows {
        let lanes = (rows - base).min(64);
        let mask = if lanes == 64 { u64::MAX } else { (1u64 << lanes) - 1 };
        let outs = c.eval_words(&input_words(base, c.n()));
        if !visit(base, mask, &outs) {
            return;
        }
        base += 64;
    }
}

/// Whether `y ∈ Image(c)`, decided by evaluating `c` on all `2ⁿ` inputs.
pub fn image_contains(c: &Circuit, y: &BitString) -> Result<bool> {
    image_contains_with_cap(c, y, DEFAULT_ENUMERATION_CAP)
}

pub fn image_contains_with_cap(c: &Circuit, y: &BitString, cap: usize) -> Result<bool> {
    if y.len() != c.m() {
        return Err(Error::Arity {
            expected: c.m(),
            got: y.len(),
        });
    }
    check_cap(c, cap)?;
    let mut found = false;
    for_each_block(c, |_, mask, outs| {
        let hits = outs
            .iter()
            .zip(y.bits())
            .fold(mask, |acc, (&w, &want)| acc & if want { w } else { !w });
        found = hits != 0;
        !found
    });
    Ok(found)
}

/// The lexicographically smallest string outside `Image(c)` (`y₁` most
/// significant). Requires `m > n`, which guarantees one exists.
pub fn exact_avoid(c: &Circuit) -> Result<BitString> {
    exact_avoid_with_cap(c, DEFAULT_ENUMERATION_CAP)
}

pub fn exact_avoid_with_cap(c: &Circuit, cap: usize) -> Result<BitString> {
    if c.m() <= c.n() {
        return Err(Error::NotAvoidInstance {
            inputs: c.n(),
            outputs: c.m(),
        });
    }
    let profile = ImageProfile::enumerate_with_cap(c, cap)?;
    // the image has at most 2ⁿ points, so one of the first 2ⁿ + 1 ranks is free
    let mut rank = 0u64;
    for y in profile.counts.keys() {
        let r = y.lex_rank().expect("m ≤ 64 when n ≤ cap and image is scanned");
        if r != rank {
            break;
        }
        rank += 1;
    }
    Ok(BitString::from_lex_rank(rank, c.m()))
}

/// Exact preimage counts `|C⁻¹(y)|` for every `y` in the image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageProfile {
    pub n: usize,
    pub m: usize,
    /// Keyed by output string; only image points appear.
    pub counts: BTreeMap<BitString, u64>,
}

impl ImageProfile {
    pub fn enumerate(c: &Circuit) -> Result<Self> {
        Self::enumerate_with_cap(c, DEFAULT_ENUMERATION_CAP)
    }

    pub fn enumerate_with_cap(c: &Circuit, cap: usize) -> Result<Self> {
        check_cap(c, cap)?;
        if c.m() > 64 {
            return Err(Error::Unsupported(format!(
                "image profiles support at most 64 outputs, got {}",
                c.m()
            )));
        }
        let mut packed: BTreeMap<u64, u64> = BTreeMap::new();
        for_each_block(c, |_, mask, outs| {
            let mut lanes = mask;
            while lanes != 0 {
                let lane = lanes.trailing_zeros();
                lanes &= lanes - 1;
                let rank = outs
                    .iter()
                    .fold(0u64, |acc, &w| (acc << 1) | ((w >> lane) & 1));
                *packed.entry(rank).or_insert(0) += 1;
            }
            true
        });
        let counts = packed
            .into_iter()
            .map(|(rank, k)| (BitString::from_lex_rank(rank, c.m()), k))
            .collect();
        Ok(ImageProfile {
            n: c.n(),
            m: c.m(),
            counts,
        })
    }

    pub fn image_size(&self) -> u64 {
        self.counts.len() as u64
    }

    pub fn preimages(&self, y: &BitString) -> u64 {
        self.counts.get(y).copied().unwrap_or(0)
    }

    pub fn contains(&self, y: &BitString) -> bool {
        self.counts.contains_key(y)
    }
}
