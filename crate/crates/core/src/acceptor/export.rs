use std::fmt::Write;

use serde::Serialize;

use super::build::{Acceptor, Target};

/// Graphviz rendering. State `i` is drawn as node `s{i}` labelled with its 1-based index.
pub fn export_dot(acc: &Acceptor, include_failure: bool) -> String {
    let alphabet = acc.alphabet();
    let mut out = String::new();
    out.push_str("digraph acceptor {\n  rankdir=LR;\n");
    out.push_str("  node [shape=doublecircle];\n");
    for i in 0..acc.num_states() {
        let _ = writeln!(out, "  s{i} [label=\"{}\"];", i + 1);
    }
    if include_failure {
        out.push_str("  fail [shape=box, label=\"fail\"];\n");
    }
    out.push_str("  start [shape=point];\n  start -> s0;\n");
    for i in 0..acc.num_states() {
        for x in alphabet.letters() {
            let label = alphabet.symbol(x).replace('"', "\\\"");
            match acc.step(i, x) {
                Target::State(j) => {
                    let _ = writeln!(out, "  s{i} -> s{j} [label=\"{label}\"];");
                }
                Target::Failure if include_failure => {
                    let _ = writeln!(out, "  s{i} -> fail [label=\"{label}\"];");
                }
                Target::Failure => {}
            }
        }
    }
    if include_failure {
        for x in alphabet.letters() {
            let label = alphabet.symbol(x).replace('"', "\\\"");
            let _ = writeln!(out, "  fail -> fail [label=\"{label}\"];");
        }
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
pub struct AcceptorJson<'a> {
    pub gamma: usize,
    pub alphabet: Vec<&'a str>,
    pub start: usize,
    pub states: Vec<StateJson>,
    pub arrows: Vec<ArrowJson<'a>>,
    pub loops: Vec<LoopJson<'a>>,
    pub failure_arrows: Vec<FailureJson<'a>>,
}

#[derive(Serialize)]
pub struct StateJson {
    pub id: usize,
    pub depth: usize,
    pub prefix: Vec<u32>,
}

#[derive(Serialize)]
pub struct ArrowJson<'a> {
    pub from: usize,
    pub to: usize,
    pub label: &'a str,
}

#[derive(Serialize)]
pub struct LoopJson<'a> {
    pub state: usize,
    pub label: &'a str,
}

#[derive(Serialize)]
pub struct FailureJson<'a> {
    pub from: usize,
    pub label: &'a str,
}

/// States, arrows, loops and failure arrows with stable integer ids (the build order).
pub fn to_json_value(acc: &Acceptor) -> AcceptorJson<'_> {
    let alphabet = acc.alphabet();
    let mut arrows = Vec::new();
    let mut loops = Vec::new();
    let mut failure_arrows = Vec::new();
    for i in 0..acc.num_states() {
        for x in alphabet.letters() {
            let label = alphabet.symbol(x);
            match acc.step(i, x) {
                Target::State(j) if j == i => loops.push(LoopJson { state: i, label }),
                Target::State(j) => arrows.push(ArrowJson { from: i, to: j, label }),
                Target::Failure => failure_arrows.push(FailureJson { from: i, label }),
            }
        }
    }
    AcceptorJson {
        gamma: acc.gamma(),
        alphabet: alphabet.letters().map(|l| alphabet.symbol(l)).collect(),
        start: acc.start(),
        states: acc
            .states()
            .iter()
            .enumerate()
            .map(|(id, s)| StateJson {
                id,
                depth: s.depth,
                prefix: s.prefix.exponents().to_vec(),
            })
            .collect(),
        arrows,
        loops,
        failure_arrows,
    }
}

pub fn export_json(acc: &Acceptor) -> String {
    serde_json::to_string_pretty(&to_json_value(acc)).expect("acceptor serializes")
}
