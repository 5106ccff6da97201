//! Deterministic DOT rendering: objects as nodes, non-identity generators
//! (arrows that are not composites of two non-identity arrows) as edges.
//! Output is byte-stable per input.

use std::fmt::Write;

use crate::cat::{FinCat, FunctorData, Mor};
use crate::factor::FactorizationResult;

fn generators(c: &FinCat) -> Vec<Mor> {
    (0..c.mor_count())
        .filter(|&m| {
            if c.is_identity(m) {
                return false;
            }
            let composite = (0..c.mor_count()).any(|g| {
                (0..c.mor_count()).any(|f| {
                    !c.is_identity(g)
                        && !c.is_identity(f)
                        && c.composable(g, f)
                        && c.compose(g, f) == m
                })
            });
            !composite
        })
        .collect()
}

fn write_nodes(out: &mut String, c: &FinCat, prefix: &str, indent: &str) {
    for x in 0..c.object_count() {
        writeln!(out, "{indent}{prefix}{x} [label=\"{x}\" shape=circle];").unwrap();
    }
    for m in generators(c) {
        writeln!(
            out,
            "{indent}{prefix}{} -> {prefix}{} [label=\"m{}\"];",
            c.dom(m),
            c.cod(m),
            m
        )
        .unwrap();
    }
}

/// A single category as a digraph.
pub fn cat_to_dot(c: &FinCat) -> String {
    let mut out = String::new();
    writeln!(out, "digraph category {{").unwrap();
    write_nodes(&mut out, c, "o", "    ");
    writeln!(out, "}}").unwrap();
    out
}

/// Source and target as clusters, with dashed object-mapping edges.
pub fn functor_to_dot(f: &FunctorData) -> String {
    let mut out = String::new();
    writeln!(out, "digraph functor {{").unwrap();
    writeln!(out, "    subgraph cluster_source {{").unwrap();
    writeln!(out, "        label=\"source\";").unwrap();
    write_nodes(&mut out, &f.source, "s", "        ");
    writeln!(out, "    }}").unwrap();
    writeln!(out, "    subgraph cluster_target {{").unwrap();
    writeln!(out, "        label=\"target\";").unwrap();
    write_nodes(&mut out, &f.target, "t", "        ");
    writeln!(out, "    }}").unwrap();
    for (x, &fx) in f.obj_map.iter().enumerate() {
        writeln!(out, "    s{x} -> t{fx} [style=dashed color=gray];").unwrap();
    }
    writeln!(out, "}}").unwrap();
    out
}

/// Triptych: source, middle and target clusters with the q- and s-images of
/// objects as dashed edges.
pub fn factorization_to_dot(fac: &FactorizationResult) -> String {
    let mut out = String::new();
    writeln!(out, "digraph factorization {{").unwrap();
    for (name, cat, prefix) in [
        ("source", &*fac.q.source, "a"),
        ("middle", &*fac.mid, "q"),
        ("target", &*fac.s.target, "b"),
    ] {
        writeln!(out, "    subgraph cluster_{name} {{").unwrap();
        writeln!(out, "        label=\"{name}\";").unwrap();
        write_nodes(&mut out, cat, prefix, "        ");
        writeln!(out, "    }}").unwrap();
    }
    for (x, &qx) in fac.q.obj_map.iter().enumerate() {
        writeln!(out, "    a{x} -> q{qx} [style=dashed color=blue label=\"q\"];").unwrap();
    }
    for (x, &sx) in fac.s.obj_map.iter().enumerate() {
        writeln!(out, "    q{x} -> b{sx} [style=dashed color=red label=\"s\"];").unwrap();
    }
    writeln!(out, "}}").unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders;

    #[test]
    fn terminal_renders_one_node_no_edges() {
        let dot = cat_to_dot(&builders::terminal());
        assert!(dot.contains("o0"));
        assert!(!dot.contains("->"));
    }

    #[test]
    fn arrow_renders_one_edge() {
        let dot = cat_to_dot(&builders::arrow());
        assert_eq!(dot.matches("->").count(), 1);
    }

    #[test]
    fn chain_renders_generators_only() {
        // 0 < 1 < 2: the composite 0 -> 2 is not a generator.
        let dot = cat_to_dot(&builders::chain(3));
        assert_eq!(dot.matches("->").count(), 2);
    }

    #[test]
    fn output_is_byte_stable() {
        let a = functor_to_dot(&builders::arrow_to_iso_pair());
        let b = functor_to_dot(&builders::arrow_to_iso_pair());
        assert_eq!(a, b);
    }
}
