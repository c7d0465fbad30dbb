//! Small named circuit families used by tests, experiments and the CLI.

use super::{Circuit, Gate, Op, Wire};

fn build(name: String, inputs: usize, gates: Vec<Gate>, outputs: Vec<Wire>) -> Circuit {
    Circuit::new(name, inputs, gates, outputs).expect("family circuits are well formed")
}

/// `x ↦ (x₁,…,xₙ, x₁)`; for `n = 1` this is the duplicator `x ↦ (x, x)`.
/// Injective with stretch 1.
pub fn duplicator(n: usize) -> Circuit {
    stretched_duplicator(n, 1)
}

/// `x ↦ (x₁,…,xₙ, x₁ repeated k times)`: injective with stretch `k`.
pub fn stretched_duplicator(n: usize, k: usize) -> Circuit {
    let outputs = (0..n)
        .map(Wire::Input)
        .chain(std::iter::repeat_n(Wire::Input(0), k))
        .collect();
    build(format!("dup{n}x{k}"), n, vec![], outputs)
}

/// `x ↦ (x₁, x₁⊕x₂, …, xₙ₋₁⊕xₙ, xₙ)`: injective with stretch 1 and `n − 1` gates.
pub fn xor_chain(n: usize) -> Circuit {
    let gates: Vec<Gate> = (1..n)
        .map(|i| Gate::Xor(Wire::Input(i - 1), Wire::Input(i)))
        .collect();
    let mut outputs = vec![Wire::Input(0)];
    outputs.extend((0..n.saturating_sub(1)).map(Wire::Gate));
    outputs.push(Wire::Input(n - 1));
    build(format!("xorchain{n}"), n, gates, outputs)
}

/// `x ↦ (x₁∧…∧xₙ, 0, …, 0)` with `n + 1` outputs. Almost every input maps to
/// the all-zero string, so preimage sizes are extremely skewed.
pub fn conjunction_flag(n: usize) -> Circuit {
    let mut gates = Vec::new();
    let mut acc = Wire::Input(0);
    for i in 1..n {
        gates.push(Gate::And(acc, Wire::Input(i)));
        acc = Wire::Gate(gates.len() - 1);
    }
    let mut outputs = vec![acc];
    outputs.extend(std::iter::repeat_n(Wire::Const(false), n));
    build(format!("andflag{n}"), n, gates, outputs)
}

/// Single-output parity of `n ≥ 1` inputs.
pub fn parity(n: usize) -> Circuit {
    let mut gates = Vec::new();
    let mut acc = Wire::Input(0);
    for i in 1..n {
        gates.push(Gate::Xor(acc, Wire::Input(i)));
        acc = Wire::Gate(gates.len() - 1);
    }
    build(format!("parity{n}"), n, gates, vec![acc])
}

/// One gate applied to `x₁` (and `x₂` for binary operators), single output.
pub fn single_gate(op: Op) -> Circuit {
    let operands: Vec<Wire> = (0..op.arity()).map(Wire::Input).collect();
    let gate = Gate::new(op, &operands).expect("arity matches");
    build(
        op.name().to_lowercase(),
        op.arity(),
        vec![gate],
        vec![Wire::Gate(0)],
    )
}

/// All outputs constant zero.
pub fn constant_zero(n: usize, m: usize) -> Circuit {
    build(format!("zero{n}x{m}"), n, vec![], vec![Wire::Const(false); m])
}
