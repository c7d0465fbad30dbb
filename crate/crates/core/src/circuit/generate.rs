use rand::Rng;

use super::{Circuit, Gate, Op, Wire};
use crate::error::{Error, Result};
use crate::seed;

/// Wire number `k` among the wires available before gate `gates_before`:
/// inputs first, then `c0`, `c1`, then earlier gates.
fn nth_wire(k: usize, inputs: usize) -> Wire {
    if k < inputs {
        Wire::Input(k)
    } else if k < inputs + 2 {
        Wire::Const(k == inputs + 1)
    } else {
        Wire::Gate(k - inputs - 2)
    }
}

/// Random circuit with `n` inputs, `m` outputs and `g` gates. Each gate takes
/// a uniform operator and uniform operands among all wires defined before it;
/// outputs are uniform over all wires. Pure function of `seed`.
pub fn random_circuit(n: usize, m: usize, g: usize, seed: u64) -> Result<Circuit> {
    if n == 0 || m == 0 {
        return Err(Error::param("random_circuit needs n ≥ 1 and m ≥ 1"));
    }
    let mut rng = seed::rng(seed);
    let mut gates = Vec::with_capacity(g);
    for k in 0..g {
        let available = n + 2 + k;
        let op = Op::ALL[rng.random_range(0..Op::ALL.len())];
        let operands: Vec<Wire> = (0..op.arity())
            .map(|_| nth_wire(rng.random_range(0..available), n))
            .collect();
        gates.push(Gate::new(op, &operands).expect("arity matches"));
    }
    let outputs = (0..m)
        .map(|_| nth_wire(rng.random_range(0..n + 2 + g), n))
        .collect();
    Circuit::new(format!("rand_n{n}_m{m}_g{g}_{seed:016x}"), n, gates, outputs)
}
