//! The line-oriented `.circ` text format.
//!
//! ```text
//! circuit <name>
//! inputs <n>
//! outputs <m>
//! gate g<k> = <OP> <ref> [<ref>]
//! out <j> = <ref>
//! end
//! ```
//!
//! `#` starts a comment that runs to the end of the line. Gate ids must be
//! strictly increasing but need not be contiguous; [`serialize`] renumbers
//! them `g1, g2, …` in order.

use std::collections::HashMap;
use std::fmt::Write;

use super::{Circuit, Gate, Op, Wire};
use crate::error::{Error, ParseErrorKind, Result};

pub fn serialize(c: &Circuit) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "circuit {}", c.name());
    let _ = writeln!(out, "inputs {}", c.n());
    let _ = writeln!(out, "outputs {}", c.m());
    for (k, gate) in c.gates().iter().enumerate() {
        let _ = write!(out, "gate g{} = {}", k + 1, gate.op().name());
        for w in gate.operands() {
            let _ = write!(out, " {}", wire_name(w));
        }
        out.push('\n');
    }
    for (j, &w) in c.outputs().iter().enumerate() {
        let _ = writeln!(out, "out {} = {}", j + 1, wire_name(w));
    }
    out.push_str("end\n");
    out
}

fn wire_name(w: Wire) -> String {
    match w {
        Wire::Input(i) => format!("x{}", i + 1),
        Wire::Const(false) => "c0".to_string(),
        Wire::Const(true) => "c1".to_string(),
        Wire::Gate(k) => format!("g{}", k + 1),
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last_line: usize,
}

impl<'a> Lines<'a> {
    /// Next non-blank line as (1-based line number, tokens).
    fn next_tokens(&mut self) -> Option<(usize, Vec<&'a str>)> {
        for (idx, raw) in self.inner.by_ref() {
            self.last_line = idx + 1;
            let content = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if !tokens.is_empty() {
                return Some((idx + 1, tokens));
            }
        }
        None
    }

    fn expect(&mut self) -> Result<(usize, Vec<&'a str>)> {
        self.next_tokens().ok_or(Error::Parse {
            line: self.last_line + 1,
            kind: ParseErrorKind::UnexpectedEof,
        })
    }
}

fn err(line: usize, kind: ParseErrorKind) -> Error {
    Error::Parse { line, kind }
}

fn keyword_value<'a>(
    line: usize,
    tokens: &[&'a str],
    keyword: &'static str,
    what: &'static str,
) -> Result<&'a str> {
    match tokens {
        [k, v] if *k == keyword => Ok(v),
        [k, _, extra, ..] if *k == keyword => {
            Err(err(line, ParseErrorKind::UnexpectedToken(extra.to_string())))
        }
        [k] if *k == keyword => Err(err(line, ParseErrorKind::Expected(what))),
        [other, ..] => Err(err(line, ParseErrorKind::UnexpectedToken(other.to_string()))),
        [] => Err(err(line, ParseErrorKind::Expected(what))),
    }
}

fn count(line: usize, s: &str, what: &'static str) -> Result<usize> {
    s.parse::<usize>()
        .map_err(|_| err(line, ParseErrorKind::Expected(what)))
}

/// Numeric suffix of `g<k>`.
fn gate_id(line: usize, token: &str) -> Result<u64> {
    token
        .strip_prefix('g')
        .and_then(|d| d.parse::<u64>().ok())
        .ok_or_else(|| err(line, ParseErrorKind::BadReference(token.to_string())))
}

fn resolve(line: usize, token: &str, inputs: usize, gate_ids: &HashMap<u64, usize>) -> Result<Wire> {
    match token {
        "c0" => return Ok(Wire::Const(false)),
        "c1" => return Ok(Wire::Const(true)),
        _ => {}
    }
    if let Some(digits) = token.strip_prefix('x') {
        let i: usize = digits
            .parse()
            .map_err(|_| err(line, ParseErrorKind::BadReference(token.to_string())))?;
        if i == 0 || i > inputs {
            return Err(err(line, ParseErrorKind::UndefinedReference(token.to_string())));
        }
        return Ok(Wire::Input(i - 1));
    }
    if token.starts_with('g') {
        let id = gate_id(line, token)?;
        return gate_ids
            .get(&id)
            .map(|&k| Wire::Gate(k))
            .ok_or_else(|| err(line, ParseErrorKind::UndefinedReference(token.to_string())));
    }
    Err(err(line, ParseErrorKind::BadReference(token.to_string())))
}

pub fn parse(text: &str) -> Result<Circuit> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        last_line: 0,
    };

    let (line, tokens) = lines.expect()?;
    let name = keyword_value(line, &tokens, "circuit", "circuit <name>")?.to_string();
    let (line, tokens) = lines.expect()?;
    let inputs = count(
        line,
        keyword_value(line, &tokens, "inputs", "inputs <n>")?,
        "input count",
    )?;
    if inputs == 0 {
        return Err(err(line, ParseErrorKind::Invalid("a circuit needs at least one input".into())));
    }
    let (line, tokens) = lines.expect()?;
    let outputs = count(
        line,
        keyword_value(line, &tokens, "outputs", "outputs <m>")?,
        "output count",
    )?;
    if outputs == 0 {
        return Err(err(line, ParseErrorKind::Invalid("a circuit needs at least one output".into())));
    }

    let mut gates = Vec::new();
    let mut gate_ids: HashMap<u64, usize> = HashMap::new();
    let mut last_id: Option<(u64, &str)> = None;
    let mut outs = Vec::with_capacity(outputs);

    loop {
        let (line, tokens) = lines.expect()?;
        match tokens[0] {
            "gate" if outs.is_empty() => {
                if tokens.len() < 4 || tokens[2] != "=" {
                    return Err(err(line, ParseErrorKind::Expected("gate g<k> = <OP> <ref>...")));
                }
                let id = gate_id(line, tokens[1])?;
                if gate_ids.contains_key(&id) {
                    return Err(err(line, ParseErrorKind::DuplicateGate(tokens[1].to_string())));
                }
                if let Some((prev, prev_tok)) = last_id {
                    if id <= prev {
                        return Err(err(
                            line,
                            ParseErrorKind::GateOrder {
                                previous: prev_tok.to_string(),
                                got: tokens[1].to_string(),
                            },
                        ));
                    }
                }
                let op = Op::from_name(tokens[3])
                    .ok_or_else(|| err(line, ParseErrorKind::UnknownOp(tokens[3].to_string())))?;
                let operand_tokens = &tokens[4..];
                if operand_tokens.len() != op.arity() {
                    return Err(err(
                        line,
                        ParseErrorKind::Arity {
                            op: op.name().to_string(),
                            expected: op.arity(),
                            got: operand_tokens.len(),
                        },
                    ));
                }
                let operands = operand_tokens
                    .iter()
                    .map(|t| resolve(line, t, inputs, &gate_ids))
                    .collect::<Result<Vec<_>>>()?;
                gates.push(Gate::new(op, &operands).expect("arity checked"));
                gate_ids.insert(id, gates.len() - 1);
                last_id = Some((id, tokens[1]));
            }
            "out" => {
                if tokens.len() != 4 || tokens[2] != "=" {
                    return Err(err(line, ParseErrorKind::Expected("out <j> = <ref>")));
                }
                let j = count(line, tokens[1], "output index")?;
                let expected = outs.len() + 1;
                if j != expected {
                    return Err(err(line, ParseErrorKind::OutputOrder { expected, got: j }));
                }
                if j > outputs {
                    return Err(err(
                        line,
                        ParseErrorKind::Invalid(format!("more than {outputs} output lines")),
                    ));
                }
                outs.push(resolve(line, tokens[3], inputs, &gate_ids)?);
            }
            "end" => {
                if tokens.len() != 1 {
                    return Err(err(line, ParseErrorKind::UnexpectedToken(tokens[1].to_string())));
                }
                if outs.len() != outputs {
                    return Err(err(
                        line,
                        ParseErrorKind::Invalid(format!(
                            "expected {outputs} output lines, found {}",
                            outs.len()
                        )),
                    ));
                }
                if let Some((line, tokens)) = lines.next_tokens() {
                    return Err(err(line, ParseErrorKind::UnexpectedToken(tokens[0].to_string())));
                }
                return Circuit::new(name, inputs, gates, outs)
                    .map_err(|e| err(line, ParseErrorKind::Invalid(e.to_string())));
            }
            other => return Err(err(line, ParseErrorKind::UnexpectedToken(other.to_string()))),
        }
    }
}
