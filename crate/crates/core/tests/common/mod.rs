//! Reference implementations written independently of the library's
//! optimized paths. Each test binary uses a different subset.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use avoid_lab::circuit::{Gate, Wire};
use avoid_lab::{BitString, Circuit};

/// Recursive wire-by-wire evaluation with memoization.
pub fn naive_eval(c: &Circuit, x: &[bool]) -> Vec<bool> {
    fn wire(c: &Circuit, x: &[bool], w: Wire, memo: &mut HashMap<usize, bool>) -> bool {
        match w {
            Wire::Input(i) => x[i],
            Wire::Const(b) => b,
            Wire::Gate(k) => {
                if let Some(&v) = memo.get(&k) {
                    return v;
                }
                let v = match c.gates()[k] {
                    Gate::Not(a) => !wire(c, x, a, memo),
                    Gate::And(a, b) => wire(c, x, a, memo) & wire(c, x, b, memo),
                    Gate::Or(a, b) => wire(c, x, a, memo) | wire(c, x, b, memo),
                    Gate::Xor(a, b) => wire(c, x, a, memo) ^ wire(c, x, b, memo),
                };
                memo.insert(k, v);
                v
            }
        }
    }
    let mut memo = HashMap::new();
    c.outputs().iter().map(|&w| wire(c, x, w, &mut memo)).collect()
}

/// All `n`-bit strings, `x₁` first.
pub fn all_strings(n: usize) -> Vec<Vec<bool>> {
    (0..1u64 << n)
        .map(|v| (0..n).map(|i| (v >> (n - 1 - i)) & 1 == 1).collect())
        .collect()
}

pub fn naive_image(c: &Circuit) -> BTreeSet<Vec<bool>> {
    all_strings(c.n()).iter().map(|x| naive_eval(c, x)).collect()
}

pub fn naive_preimage_counts(c: &Circuit) -> HashMap<Vec<bool>, u64> {
    let mut counts = HashMap::new();
    for x in all_strings(c.n()) {
        *counts.entry(naive_eval(c, &x)).or_insert(0) += 1;
    }
    counts
}

pub fn bs(bits: &[bool]) -> BitString {
    BitString::new(bits.to_vec())
}

/// Minimum gate count of every `vars`-variable function computable within
/// `budget` gates, by depth-first enumeration of gate sequences. Entries
/// beyond the budget stay `None`. Tables are bitmasks with bit `i` the value
/// on the input whose binary expansion is `i` (bit 0 of `i` is `x₁`).
///
/// Two reductions, both harmless for minimum size: operands of symmetric
/// operators are taken in nondecreasing order, and a gate that repeats an
/// already available table is never added.
pub fn sequence_search(vars: usize, budget: usize, xor: bool) -> Vec<Option<usize>> {
    assert!(vars <= 3, "table fits in u8");
    let rows = 1usize << vars;
    let full: u16 = ((1u32 << rows) - 1) as u16;
    let mut best = vec![None; 1 << rows];
    let mut wires: Vec<u16> = vec![0, full];
    for i in 0..vars {
        let t = (0..rows).filter(|r| (r >> i) & 1 == 1).fold(0u16, |acc, r| acc | (1 << r));
        wires.push(t);
    }
    for &w in &wires {
        best[w as usize] = Some(0);
    }

    fn dfs(wires: &mut Vec<u16>, depth: usize, budget: usize, full: u16, xor: bool, best: &mut [Option<usize>]) {
        if depth == budget {
            return;
        }
        let len = wires.len();
        let mut candidates = Vec::new();
        for a in 0..len {
            candidates.push(!wires[a] & full);
            for b in a..len {
                candidates.push(wires[a] & wires[b]);
                candidates.push(wires[a] | wires[b]);
                if xor {
                    candidates.push(wires[a] ^ wires[b]);
                }
            }
        }
        candidates.sort_unstable();
        candidates.dedup();
        for t in candidates {
            if wires.contains(&t) {
                continue;
            }
            let slot = &mut best[t as usize];
            if slot.is_none_or(|s| s > depth + 1) {
                *slot = Some(depth + 1);
            }
            wires.push(t);
            dfs(wires, depth + 1, budget, full, xor, best);
            wires.pop();
        }
    }
    dfs(&mut wires, 0, budget, full, xor, &mut best);
    best
}
