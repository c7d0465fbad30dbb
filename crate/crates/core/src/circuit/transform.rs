use std::collections::HashMap;

use super::{Circuit, Wire};
use crate::error::{Error, Result};

fn ceil_sqrt(v: usize) -> usize {
    let mut r = (v as f64).sqrt() as usize;
    while r * r < v {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= v {
        r -= 1;
    }
    r
}

/// Ensures the circuit has at least `⌈√size⌉` inputs by adding fresh inputs
/// that are copied straight to fresh outputs: `C′(x, z) = (C(x), z)`.
pub fn pad_circuit(c: &Circuit) -> Circuit {
    let needed = ceil_sqrt(c.size());
    if c.n() >= needed {
        return c.clone();
    }
    let extra = needed - c.n();
    let mut padded = c.remap(format!("{}_pad{extra}", c.name()), needed, |w| w);
    padded
        .outputs
        .extend((c.n()..needed).map(Wire::Input));
    padded
}

/// `t` parallel copies of `c` on disjoint input blocks. Block `i` reads inputs
/// `i·n … i·n + n − 1` and drives outputs `i·m … i·m + m − 1` (zero-based).
pub fn product_circuit(c: &Circuit, t: usize) -> Result<Circuit> {
    if t == 0 {
        return Err(Error::param("product_circuit needs t ≥ 1"));
    }
    let (n, g) = (c.n(), c.size());
    let mut gates = Vec::with_capacity(t * g);
    let mut outputs = Vec::with_capacity(t * c.m());
    for block in 0..t {
        let shift = |w: Wire| match w {
            Wire::Input(i) => Wire::Input(block * n + i),
            Wire::Const(b) => Wire::Const(b),
            Wire::Gate(k) => Wire::Gate(block * g + k),
        };
        gates.extend(c.gates().iter().map(|gate| gate.map_wires(shift)));
        outputs.extend(c.outputs().iter().map(|&w| shift(w)));
    }
    Circuit::new(format!("{}_x{t}", c.name()), t * n, gates, outputs)
}

/// A set of outputs that, together, depend on a set of inputs disjoint from
/// every other component's. `circuit` is the restriction to those wires with
/// inputs renumbered in increasing order of original index.
#[derive(Debug, Clone)]
pub struct Component {
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    pub circuit: Circuit,
}

struct DisjointSet(Vec<usize>);

impl DisjointSet {
    fn find(&mut self, mut a: usize) -> usize {
        while self.0[a] != a {
            self.0[a] = self.0[self.0[a]];
            a = self.0[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl Circuit {
    /// Splits the outputs into groups with pairwise disjoint input supports.
    /// Outputs that depend on no input at all form their own group with an
    /// empty input list. Groups are ordered by their first output.
    pub fn independent_components(&self) -> Vec<Component> {
        let n = self.n();
        let node = |w: Wire| match w {
            Wire::Input(i) => Some(i),
            Wire::Gate(k) => Some(n + k),
            Wire::Const(_) => None,
        };
        let mut sets = DisjointSet((0..n + self.size()).collect());
        for (k, gate) in self.gates().iter().enumerate() {
            for w in gate.operands() {
                if let Some(v) = node(w) {
                    sets.union(n + k, v);
                }
            }
        }

        // group key: root node, or None for outputs that are plain constants
        let mut group_of_root: HashMap<usize, usize> = HashMap::new();
        let mut constant_group: Option<usize> = None;
        let mut parts: Vec<(Option<usize>, Vec<usize>)> = Vec::new();
        for (j, &w) in self.outputs().iter().enumerate() {
            let key = node(w).map(|v| sets.find(v));
            let slot = match key {
                Some(root) => group_of_root.get(&root).copied(),
                None => constant_group,
            };
            match slot {
                Some(g) => parts[g].1.push(j),
                None => {
                    let g = parts.len();
                    match key {
                        Some(root) => {
                            group_of_root.insert(root, g);
                        }
                        None => constant_group = Some(g),
                    }
                    parts.push((key, vec![j]));
                }
            }
        }

        let mut inputs_of: Vec<Vec<usize>> = vec![Vec::new(); parts.len()];
        let mut gates_of: Vec<Vec<usize>> = vec![Vec::new(); parts.len()];
        let mut position = vec![usize::MAX; n + self.size()];
        for (v, pos) in position.iter_mut().enumerate() {
            if let Some(&g) = group_of_root.get(&sets.find(v)) {
                let list = if v < n { &mut inputs_of[g] } else { &mut gates_of[g] };
                *pos = list.len();
                list.push(if v < n { v } else { v - n });
            }
        }

        parts
            .into_iter()
            .zip(inputs_of.into_iter().zip(gates_of))
            .map(|((_, outputs), (inputs, gate_ids))| {
                let rename = |w: Wire| match w {
                    Wire::Input(i) => Wire::Input(position[i]),
                    Wire::Const(b) => Wire::Const(b),
                    Wire::Gate(k) => Wire::Gate(position[n + k]),
                };
                // a constant-only group still needs one (unused) input
                let circuit = Circuit {
                    name: format!("{}_part", self.name()),
                    inputs: inputs.len().max(1),
                    gates: gate_ids.iter().map(|&k| self.gates()[k].map_wires(rename)).collect(),
                    outputs: outputs.iter().map(|&j| rename(self.outputs()[j])).collect(),
                };
                Component {
                    inputs,
                    outputs,
                    circuit,
                }
            })
            .collect()
    }
}
