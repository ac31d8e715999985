//! Graphviz export.

use std::fmt::Write;

use super::{Dfa, Nba, Nfa};

fn render(name: &str, vars: &[String], init: usize, accepting: &[bool], edges: &[Vec<(super::Cube, usize)>]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "digraph \"{name}\" {{");
    let _ = writeln!(s, "  rankdir=LR;\n  init [shape=point];");
    for (q, &a) in accepting.iter().enumerate() {
        let shape = if a { "doublecircle" } else { "circle" };
        let _ = writeln!(s, "  {q} [shape={shape}];");
    }
    let _ = writeln!(s, "  init -> {init};");
    for (q, es) in edges.iter().enumerate() {
        for (c, t) in es {
            let _ = writeln!(s, "  {q} -> {t} [label=\"{}\"];", c.render(vars));
        }
    }
    s.push_str("}\n");
    s
}

pub fn nba_to_dot(a: &Nba, name: &str) -> String {
    render(name, &a.vars, a.init, &a.acc, &a.trans)
}

pub fn nfa_to_dot(a: &Nfa, name: &str) -> String {
    render(name, &a.vars, a.init, &a.finals, &a.trans)
}

pub fn dfa_to_dot(a: &Dfa, name: &str) -> String {
    nfa_to_dot(&a.to_nfa(), name)
}
