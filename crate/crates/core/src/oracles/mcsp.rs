//! Exact minimum circuit size by breadth-first closure over sets of truth
//! tables.
//!
//! A state is the set of tables computed by the gates of some circuit (on top
//! of the free projections and constants). Level `k` holds every distinct
//! state reachable with `k` gates, where each gate adds a table that is not
//! already present; a minimum circuit never recomputes a table it already
//! has, so nothing is lost. A table has minimum size `k` iff it first shows up
//! as a one-gate extension of a level `k − 1` state.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use crate::circuit::{Circuit, Gate, Op, TruthTable, Wire};
use crate::error::{CapacityError, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// `{AND, OR, NOT}`
    AndOrNot,
    /// `{AND, OR, NOT, XOR}`
    AndOrNotXor,
}

impl Basis {
    pub fn ops(self) -> &'static [Op] {
        match self {
            Basis::AndOrNot => &[Op::Not, Op::And, Op::Or],
            Basis::AndOrNotXor => &[Op::Not, Op::And, Op::Or, Op::Xor],
        }
    }

    pub fn allows(self, op: Op) -> bool {
        self.ops().contains(&op)
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::AndOrNot => "aon",
            Basis::AndOrNotXor => "aonx",
        })
    }
}

impl FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "aon" | "and-or-not" => Ok(Basis::AndOrNot),
            "aonx" | "and-or-not-xor" => Ok(Basis::AndOrNotXor),
            other => Err(Error::param(format!("unknown basis `{other}` (expected aon or aonx)"))),
        }
    }
}

/// A finite oracle function usable as a single gate of cost 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OracleFun {
    table: TruthTable,
}

impl OracleFun {
    pub fn new(table: TruthTable) -> Result<Self> {
        if table.vars() == 0 {
            return Err(Error::param("oracle functions need arity ≥ 1"));
        }
        Ok(OracleFun { table })
    }

    pub fn arity(&self) -> usize {
        self.table.vars()
    }

    pub fn table(&self) -> &TruthTable {
        &self.table
    }
}

/// Parses `oraclefun <k> <bits>` lines; `#` starts a comment.
pub fn parse_oracle_file(text: &str) -> Result<Vec<OracleFun>> {
    let mut funs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let tokens: Vec<&str> = raw.split('#').next().unwrap_or("").split_whitespace().collect();
        match tokens.as_slice() {
            [] => {}
            ["oraclefun", k, bits] => {
                let arity: usize = k
                    .parse()
                    .map_err(|_| Error::param(format!("line {line}: bad arity `{k}`")))?;
                let table = TruthTable::parse(bits)
                    .map_err(|e| Error::param(format!("line {line}: {e}")))?;
                if table.vars() != arity {
                    return Err(Error::param(format!(
                        "line {line}: arity {arity} needs {} table bits, got {}",
                        1usize << arity.min(30),
                        bits.len()
                    )));
                }
                funs.push(OracleFun::new(table)?);
            }
            _ => return Err(Error::param(format!("line {line}: expected `oraclefun <k> <bits>`"))),
        }
    }
    Ok(funs)
}

/// An MCSP instance: does `tt` have a circuit of at most `size_bound` gates?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct McspQuery {
    pub tt: TruthTable,
    pub size_bound: usize,
    pub basis: Basis,
    pub oracle_gates: Vec<OracleFun>,
}

impl McspQuery {
    /// Builds a query, clamping `size_bound` to `2ⁿ`.
    pub fn new(tt: TruthTable, size_bound: usize, basis: Basis, oracle_gates: Vec<OracleFun>) -> Self {
        let cap = 1usize << tt.vars().min(usize::BITS as usize - 2);
        McspQuery {
            size_bound: size_bound.min(cap),
            tt,
            basis,
            oracle_gates,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McspLimits {
    pub max_vars: usize,
    pub max_size: usize,
    /// Largest number of distinct states kept for one level.
    pub max_states: usize,
}

impl Default for McspLimits {
    fn default() -> Self {
        McspLimits {
            max_vars: 4,
            max_size: 6,
            max_states: 4_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct ClosureKey {
    vars: usize,
    basis: Basis,
    oracles: Vec<(usize, u64)>,
}

enum Search {
    Found(usize),
    /// Proven larger than the limit that was searched.
    Exceeds(usize),
    /// State budget ran out; the size is at least `lower`.
    Budget { lower: usize },
}

struct Closure {
    key: ClosureKey,
    full: u64,
    base: Vec<u64>,
    first: HashMap<u64, usize>,
    /// Every table of size ≤ `probed` is in `first`.
    probed: usize,
    frontier_level: usize,
    frontier: Vec<Box<[u64]>>,
    /// Set when advancing past `frontier_level` would exceed the budget.
    exhausted: bool,
}

impl Closure {
    fn new(key: ClosureKey) -> Self {
        let rows = 1u32 << key.vars;
        let full = if rows == 64 { u64::MAX } else { (1u64 << rows) - 1 };
        let mut base = vec![0, full];
        for i in 0..key.vars {
            base.push((0..rows).filter(|&p| (p >> i) & 1 == 1).fold(0u64, |acc, p| acc | (1 << p)));
        }
        base.sort_unstable();
        base.dedup();
        let first = base.iter().map(|&t| (t, 0)).collect();
        Closure {
            key,
            full,
            base,
            first,
            probed: 0,
            frontier_level: 0,
            frontier: vec![Box::new([])],
            exhausted: false,
        }
    }

    fn apply_oracle(&self, oracle: (usize, u64), args: &[u64]) -> u64 {
        let rows = 1u32 << self.key.vars;
        let mut out = 0u64;
        for p in 0..rows {
            let idx = args
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &a)| acc | (((a >> p) & 1) << i));
            out |= ((oracle.1 >> idx) & 1) << p;
        }
        out
    }

    /// Calls `emit` with every table one gate away from `wires`.
    fn extensions(&self, wires: &[u64], mut emit: impl FnMut(u64)) {
        for op in self.key.basis.ops() {
            match op {
                Op::Not => wires.iter().for_each(|&a| emit(!a & self.full)),
                _ => {
                    for (i, &a) in wires.iter().enumerate() {
                        for &b in &wires[i + 1..] {
                            emit(op.apply_word(a, b) & self.full);
                        }
                    }
                }
            }
        }
        let mut args = Vec::new();
        for &oracle in &self.key.oracles {
            let k = oracle.0;
            let mut pick = vec![0usize; k];
            'tuples: loop {
                args.clear();
                args.extend(pick.iter().map(|&i| wires[i]));
                emit(self.apply_oracle(oracle, &args));
                for slot in pick.iter_mut() {
                    *slot += 1;
                    if *slot < wires.len() {
                        continue 'tuples;
                    }
                    *slot = 0;
                }
                break;
            }
        }
    }

    fn wires_of(&self, state: &[u64]) -> Vec<u64> {
        let mut wires = self.base.clone();
        wires.extend_from_slice(state);
        wires
    }

    fn probe(&mut self) {
        debug_assert_eq!(self.probed, self.frontier_level);
        let level = self.frontier_level + 1;
        let mut fresh = Vec::new();
        for state in &self.frontier {
            let wires = self.wires_of(state);
            self.extensions(&wires, |t| fresh.push(t));
        }
        for t in fresh {
            self.first.entry(t).or_insert(level);
        }
        self.probed = level;
    }

    fn advance(&mut self, max_states: usize) -> bool {
        debug_assert_eq!(self.probed, self.frontier_level + 1);
        let mut next: HashSet<Box<[u64]>> = HashSet::new();
        for state in &self.frontier {
            let wires = self.wires_of(state);
            let mut over_budget = false;
            self.extensions(&wires, |t| {
                if over_budget || wires.contains(&t) {
                    return;
                }
                let mut s: Vec<u64> = state.to_vec();
                let pos = s.binary_search(&t).unwrap_or_else(|p| p);
                s.insert(pos, t);
                next.insert(s.into_boxed_slice());
                if next.len() > max_states {
                    over_budget = true;
                }
            });
            if over_budget {
                self.exhausted = true;
                return false;
            }
        }
        let mut next: Vec<Box<[u64]>> = next.into_iter().collect();
        next.sort_unstable();
        self.frontier = next;
        self.frontier_level += 1;
        true
    }

    fn search(&mut self, target: u64, limit: usize, max_states: usize) -> Search {
        loop {
            if let Some(&s) = self.first.get(&target) {
                if s <= self.probed {
                    return if s <= limit { Search::Found(s) } else { Search::Exceeds(limit) };
                }
            }
            if self.probed >= limit {
                return Search::Exceeds(limit);
            }
            if self.probed == self.frontier_level {
                self.probe();
            } else if self.exhausted || !self.advance(max_states) {
                return Search::Budget {
                    lower: self.probed + 1,
                };
            }
        }
    }
}

/// Exact MCSP solver with a shared memo of explored closures. Safe to use
/// from several threads; cached state never changes an answer.
pub struct McspSolver {
    limits: McspLimits,
    cache: Mutex<HashMap<ClosureKey, Arc<Mutex<Closure>>>>,
}

impl McspSolver {
    pub fn new(limits: McspLimits) -> Self {
        McspSolver {
            limits,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn limits(&self) -> McspLimits {
        self.limits
    }

    fn key(&self, tt: &TruthTable, basis: Basis, oracle_gates: &[OracleFun]) -> Result<(ClosureKey, u64)> {
        let vars = tt.vars();
        if vars > self.limits.max_vars || vars > 6 {
            return Err(CapacityError::McspVariables {
                vars,
                cap: self.limits.max_vars.min(6),
            }
            .into());
        }
        let mut oracles = Vec::with_capacity(oracle_gates.len());
        for f in oracle_gates {
            if f.arity() > vars {
                return Err(Error::param(format!(
                    "oracle gate of arity {} exceeds the {vars} variables of the table",
                    f.arity()
                )));
            }
            oracles.push((f.arity(), f.table().to_mask().expect("arity ≤ 6")));
        }
        oracles.sort_unstable();
        oracles.dedup();
        let target = tt.to_mask().expect("vars ≤ 6");
        Ok((ClosureKey { vars, basis, oracles }, target))
    }

    fn run(&self, tt: &TruthTable, basis: Basis, oracle_gates: &[OracleFun], limit: usize) -> Result<Search> {
        let (key, target) = self.key(tt, basis, oracle_gates)?;
        let closure = {
            let mut cache = self.cache.lock().expect("mcsp cache poisoned");
            cache
                .entry(key.clone())
                .or_insert_with(|| Arc::new(Mutex::new(Closure::new(key))))
                .clone()
        };
        let mut closure = closure.lock().expect("mcsp closure poisoned");
        Ok(closure.search(target, limit, self.limits.max_states))
    }

    fn budget_error(tt: &TruthTable, basis: Basis, lower: usize) -> Error {
        let upper = shannon_circuit(tt, basis).ok().map(|c| c.size());
        CapacityError::McspBudget {
            lower_bound: lower,
            upper_bound: upper,
        }
        .into()
    }

    /// Least `s` such that some `s`-gate circuit over `basis` (plus oracle
    /// gates of cost 1) computes `tt`.
    pub fn min_circuit_size(&self, tt: &TruthTable, basis: Basis, oracle_gates: &[OracleFun]) -> Result<usize> {
        match self.run(tt, basis, oracle_gates, self.limits.max_size)? {
            Search::Found(s) => Ok(s),
            Search::Exceeds(limit) => Err(Self::budget_error(tt, basis, limit + 1)),
            Search::Budget { lower } => Err(Self::budget_error(tt, basis, lower)),
        }
    }

    pub fn decide(&self, q: &McspQuery) -> Result<bool> {
        let limit = q.size_bound.min(self.limits.max_size);
        let lower = match self.run(&q.tt, q.basis, &q.oracle_gates, limit)? {
            Search::Found(_) => return Ok(true),
            Search::Exceeds(l) if l >= q.size_bound => return Ok(false),
            Search::Exceeds(l) => l + 1,
            Search::Budget { lower } => lower,
        };
        if lower > q.size_bound {
            return Ok(false);
        }
        match shannon_circuit(&q.tt, q.basis) {
            Ok(c) if c.size() <= q.size_bound => Ok(true),
            _ => Err(Self::budget_error(&q.tt, q.basis, lower)),
        }
    }
}

impl Default for McspSolver {
    fn default() -> Self {
        McspSolver::new(McspLimits::default())
    }
}

fn shared_solver() -> &'static McspSolver {
    static SOLVER: OnceLock<McspSolver> = OnceLock::new();
    SOLVER.get_or_init(McspSolver::default)
}

/// [`McspSolver::min_circuit_size`] with the default limits.
pub fn min_circuit_size(tt: &TruthTable, basis: Basis, oracle_gates: &[OracleFun]) -> Result<usize> {
    shared_solver().min_circuit_size(tt, basis, oracle_gates)
}

/// True iff the minimum circuit size of `q.tt` is at most `q.size_bound`.
pub fn mcsp_decide(q: &McspQuery) -> Result<bool> {
    shared_solver().decide(q)
}

/// A (generally non-minimal) circuit for `tt` by Shannon expansion on the
/// highest variable. Used as the upper bound reported by budget errors.
pub fn shannon_circuit(tt: &TruthTable, basis: Basis) -> Result<Circuit> {
    let vars = tt.vars();
    let mask = tt
        .to_mask()
        .ok_or_else(|| Error::Unsupported("Shannon construction supports at most 6 variables".into()))?;
    let mut gates = Vec::new();
    let out = shannon(mask, vars, vars.max(1), basis, &mut gates);
    Circuit::new(format!("shannon_{tt}"), vars.max(1), gates, vec![out])
}

fn rows_mask(k: usize) -> u64 {
    if k >= 6 {
        u64::MAX
    } else {
        (1u64 << (1u32 << k)) - 1
    }
}

fn shannon(mask: u64, k: usize, inputs: usize, basis: Basis, gates: &mut Vec<Gate>) -> Wire {
    let full = rows_mask(k);
    if mask == 0 {
        return Wire::Const(false);
    }
    if mask == full {
        return Wire::Const(true);
    }
    for i in 0..k.min(inputs) {
        let proj = (0..1u64 << k)
            .filter(|&p| (p >> i) & 1 == 1)
            .fold(0u64, |acc, p| acc | (1 << p));
        if mask == proj {
            return Wire::Input(i);
        }
        if mask == !proj & full {
            gates.push(Gate::Not(Wire::Input(i)));
            return Wire::Gate(gates.len() - 1);
        }
    }
    let half = 1u32 << (k - 1);
    let low = rows_mask(k - 1);
    let f0 = mask & low;
    let f1 = (mask >> half) & low;
    if f0 == f1 {
        return shannon(f0, k - 1, inputs, basis, gates);
    }
    let x = Wire::Input(k - 1);
    let push = |g: Gate, gates: &mut Vec<Gate>| {
        gates.push(g);
        Wire::Gate(gates.len() - 1)
    };
    if f0 == 0 {
        let b = shannon(f1, k - 1, inputs, basis, gates);
        return push(Gate::And(x, b), gates);
    }
    if f1 == 0 {
        let a = shannon(f0, k - 1, inputs, basis, gates);
        let nx = push(Gate::Not(x), gates);
        return push(Gate::And(nx, a), gates);
    }
    if f1 == low {
        let a = shannon(f0, k - 1, inputs, basis, gates);
        return push(Gate::Or(x, a), gates);
    }
    if f0 == low {
        let b = shannon(f1, k - 1, inputs, basis, gates);
        let nx = push(Gate::Not(x), gates);
        return push(Gate::Or(nx, b), gates);
    }
    if basis.allows(Op::Xor) && f1 == !f0 & low {
        let a = shannon(f0, k - 1, inputs, basis, gates);
        return push(Gate::Xor(x, a), gates);
    }
    let a = shannon(f0, k - 1, inputs, basis, gates);
    let b = shannon(f1, k - 1, inputs, basis, gates);
    let hi = push(Gate::And(x, b), gates);
    let nx = push(Gate::Not(x), gates);
    let lo = push(Gate::And(nx, a), gates);
    push(Gate::Or(hi, lo), gates)
}
