//! Multi-output Boolean circuits over `{NOT, AND, OR, XOR}`.
//!
//! A [`Circuit`] maps `{0,1}ⁿ → {0,1}ᵐ`. Gates are stored in topological
//! order: every operand refers to an input, a constant or an earlier gate,
//! so the structure is acyclic by construction. The size of a circuit is its
//! gate count; inputs, constants and output wiring are free.

mod bits;
pub mod families;
mod format;
mod generate;
mod transform;

pub use bits::{BitString, TruthTable, MAX_TABLE_VARS};
pub use format::{parse, serialize};
pub use generate::random_circuit;
pub use transform::{pad_circuit, product_circuit, Component};

use std::fmt;

use crate::error::{Error, Result};

/// A wire reference. Indices are zero-based (`Input(0)` is `x₁`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Wire {
    Input(usize),
    Const(bool),
    Gate(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Not,
    And,
    Or,
    Xor,
}

impl Op {
    pub const ALL: [Op; 4] = [Op::Not, Op::And, Op::Or, Op::Xor];

    pub fn arity(self) -> usize {
        match self {
            Op::Not => 1,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Op::Not => "NOT",
            Op::And => "AND",
            Op::Or => "OR",
            Op::Xor => "XOR",
        }
    }

    pub fn from_name(name: &str) -> Option<Op> {
        Op::ALL.into_iter().find(|op| op.name() == name)
    }

    /// Applies the operator bitwise to packed operands (`b` ignored for NOT).
    #[inline]
    pub fn apply_word(self, a: u64, b: u64) -> u64 {
        match self {
            Op::Not => !a,
            Op::And => a & b,
            Op::Or => a | b,
            Op::Xor => a ^ b,
        }
    }
}

/// A gate with its operands; the arity is fixed by the variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    Not(Wire),
    And(Wire, Wire),
    Or(Wire, Wire),
    Xor(Wire, Wire),
}

impl Gate {
    pub fn new(op: Op, operands: &[Wire]) -> Option<Gate> {
        match (op, operands) {
            (Op::Not, &[a]) => Some(Gate::Not(a)),
            (Op::And, &[a, b]) => Some(Gate::And(a, b)),
            (Op::Or, &[a, b]) => Some(Gate::Or(a, b)),
            (Op::Xor, &[a, b]) => Some(Gate::Xor(a, b)),
            _ => None,
        }
    }

    pub fn op(&self) -> Op {
        match self {
            Gate::Not(_) => Op::Not,
            Gate::And(..) => Op::And,
            Gate::Or(..) => Op::Or,
            Gate::Xor(..) => Op::Xor,
        }
    }

    pub fn operands(&self) -> impl Iterator<Item = Wire> + '_ {
        let (a, b) = match *self {
            Gate::Not(a) => (a, None),
            Gate::And(a, b) | Gate::Or(a, b) | Gate::Xor(a, b) => (a, Some(b)),
        };
        std::iter::once(a).chain(b)
    }

    fn map_wires(&self, f: impl Fn(Wire) -> Wire) -> Gate {
        match *self {
            Gate::Not(a) => Gate::Not(f(a)),
            Gate::And(a, b) => Gate::And(f(a), f(b)),
            Gate::Or(a, b) => Gate::Or(f(a), f(b)),
            Gate::Xor(a, b) => Gate::Xor(f(a), f(b)),
        }
    }

    #[inline]
    fn eval(&self, value: impl Fn(Wire) -> bool) -> bool {
        match *self {
            Gate::Not(a) => !value(a),
            Gate::And(a, b) => value(a) & value(b),
            Gate::Or(a, b) => value(a) | value(b),
            Gate::Xor(a, b) => value(a) ^ value(b),
        }
    }
}

/// A validated multi-output circuit. Immutable after construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Circuit {
    name: String,
    inputs: usize,
    gates: Vec<Gate>,
    outputs: Vec<Wire>,
}

impl Circuit {
    pub fn new(
        name: impl Into<String>,
        inputs: usize,
        gates: Vec<Gate>,
        outputs: Vec<Wire>,
    ) -> Result<Self> {
        let name = name.into();
        if name.is_empty() || name.contains(char::is_whitespace) || name.contains('#') {
            return Err(Error::param(format!("invalid circuit name `{name}`")));
        }
        if inputs == 0 {
            return Err(Error::param("a circuit needs at least one input"));
        }
        if outputs.is_empty() {
            return Err(Error::param("a circuit needs at least one output"));
        }
        let resolves = |w: Wire, gates_before: usize| match w {
            Wire::Input(i) => i < inputs,
            Wire::Const(_) => true,
            Wire::Gate(k) => k < gates_before,
        };
        for (k, gate) in gates.iter().enumerate() {
            if let Some(bad) = gate.operands().find(|&w| !resolves(w, k)) {
                return Err(Error::param(format!(
                    "gate {} refers to {bad:?}, which is not defined before it",
                    k + 1
                )));
            }
        }
        if let Some(bad) = outputs.iter().find(|&&w| !resolves(w, gates.len())) {
            return Err(Error::param(format!("output refers to undefined {bad:?}")));
        }
        Ok(Circuit {
            name,
            inputs,
            gates,
            outputs,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Input count `n`.
    pub fn n(&self) -> usize {
        self.inputs
    }

    /// Output count `m`.
    pub fn m(&self) -> usize {
        self.outputs.len()
    }

    /// Number of gates.
    pub fn size(&self) -> usize {
        self.gates.len()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[Wire] {
        &self.outputs
    }

    pub fn stretch(&self) -> isize {
        self.m() as isize - self.n() as isize
    }

    pub fn with_name(&self, name: impl Into<String>) -> Result<Circuit> {
        Circuit::new(name, self.inputs, self.gates.clone(), self.outputs.clone())
    }

    pub fn eval(&self, x: &BitString) -> Result<BitString> {
        if x.len() != self.inputs {
            return Err(Error::Arity {
                expected: self.inputs,
                got: x.len(),
            });
        }
        Ok(BitString::new(self.eval_bits(x.bits())))
    }

    /// Evaluation without the arity check; `x.len()` must equal `n`.
    pub(crate) fn eval_bits(&self, x: &[bool]) -> Vec<bool> {
        let mut values = Vec::with_capacity(self.gates.len());
        self.fill_gate_values(x, &mut values);
        self.outputs
            .iter()
            .map(|&w| wire_value(w, x, &values))
            .collect()
    }

    /// True iff `C(x) = y`; `x` and `y` must have the circuit's arities.
    pub(crate) fn maps_to(&self, x: &[bool], y: &[bool], scratch: &mut Vec<bool>) -> bool {
        self.fill_gate_values(x, scratch);
        self.outputs
            .iter()
            .zip(y)
            .all(|(&w, &want)| wire_value(w, x, scratch) == want)
    }

    fn fill_gate_values(&self, x: &[bool], values: &mut Vec<bool>) {
        values.clear();
        for gate in &self.gates {
            let v = gate.eval(|w| wire_value(w, x, values));
            values.push(v);
        }
    }

    /// Evaluates the circuit on 64 assignments at once. `inputs[i]` holds the
    /// packed values of `xᵢ₊₁`; returns one packed word per output.
    pub fn eval_words(&self, inputs: &[u64]) -> Vec<u64> {
        assert_eq!(inputs.len(), self.inputs, "eval_words arity");
        let mut values: Vec<u64> = Vec::with_capacity(self.gates.len());
        let word = |w: Wire, values: &[u64]| match w {
            Wire::Input(i) => inputs[i],
            Wire::Const(c) => {
                if c {
                    u64::MAX
                } else {
                    0
                }
            }
            Wire::Gate(k) => values[k],
        };
        for gate in &self.gates {
            let mut ops = gate.operands();
            let a = word(ops.next().unwrap(), &values);
            let b = ops.next().map_or(0, |w| word(w, &values));
            values.push(gate.op().apply_word(a, b));
        }
        self.outputs.iter().map(|&w| word(w, &values)).collect()
    }

    /// Truth table of output `j` (1-based).
    pub fn truth_table(&self, j: usize) -> Result<TruthTable> {
        if j == 0 || j > self.m() {
            return Err(Error::OutputIndex {
                index: j,
                outputs: self.m(),
            });
        }
        if self.inputs > MAX_TABLE_VARS {
            return Err(Error::param(format!(
                "{} inputs is too many for a truth table",
                self.inputs
            )));
        }
        let rows = 1u64 << self.inputs;
        let mut bits = Vec::with_capacity(rows as usize);
        let mut base = 0u64;
        while base < rows {
            // bit `lane` of the input word for xᵢ is bit i of (base + lane)
            let words: Vec<u64> = (0..self.inputs)
                .map(|i| {
                    (0..64u64)
                        .filter(|lane| ((base + lane) >> i) & 1 == 1)
                        .fold(0u64, |acc, lane| acc | (1 << lane))
                })
                .collect();
            let out = self.eval_words(&words)[j - 1];
            let lanes = (rows - base).min(64);
            bits.extend((0..lanes).map(|lane| (out >> lane) & 1 == 1));
            base += 64;
        }
        TruthTable::new(self.inputs, bits)
    }

    pub(crate) fn remap(&self, name: String, inputs: usize, f: impl Fn(Wire) -> Wire) -> Circuit {
        Circuit {
            name,
            inputs,
            gates: self.gates.iter().map(|g| g.map_wires(&f)).collect(),
            outputs: self.outputs.iter().map(|&w| f(w)).collect(),
        }
    }
}

#[inline]
fn wire_value(w: Wire, x: &[bool], values: &[bool]) -> bool {
    match w {
        Wire::Input(i) => x[i],
        Wire::Const(c) => c,
        Wire::Gate(k) => values[k],
    }
}

impl fmt::Debug for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", serialize(self))
    }
}
