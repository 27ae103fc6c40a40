//! SteinLib `.stp` reading and writing, restricted to weights 1 and 2.
//!
//! Node ids are 1-based in files and 0-based in memory. Weight-1 edges are the
//! instance graph; weight-2 edges are accepted and dropped since distance 2
//! is implied for every unlisted pair.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::instance::Instance;

const MAGIC: &str = "33D32945";

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

#[derive(PartialEq)]
enum Section {
    None,
    Graph,
    Terminals,
    Skipped,
}

fn parse_int(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| err(line, format!("invalid {what} {tok:?}")))
}

pub fn parse_stp(text: &str) -> Result<Instance> {
    let mut section = Section::None;
    let mut nodes: Option<usize> = None;
    let mut declared_edges: Option<(usize, usize)> = None;
    let mut declared_terminals: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut edge_lines = 0;
    let mut terminals: Vec<(usize, usize)> = Vec::new();
    let mut saw_graph = false;
    let mut saw_eof = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if saw_eof {
            return Err(err(line, "content after EOF"));
        }
        let mut toks = content.split_whitespace();
        let head = toks.next().expect("non-empty");
        let key = head.to_ascii_uppercase();
        if section == Section::None && head == MAGIC {
            continue;
        }
        match key.as_str() {
            "SECTION" => {
                if section != Section::None {
                    return Err(err(line, "SECTION inside an unterminated section"));
                }
                let name = toks
                    .next()
                    .ok_or_else(|| err(line, "missing section name"))?;
                section = match name.to_ascii_uppercase().as_str() {
                    "GRAPH" => {
                        saw_graph = true;
                        Section::Graph
                    }
                    "TERMINALS" => Section::Terminals,
                    _ => Section::Skipped,
                };
                continue;
            }
            "END" => {
                if section == Section::None {
                    return Err(err(line, "END outside a section"));
                }
                section = Section::None;
                continue;
            }
            "EOF" => {
                if section != Section::None {
                    return Err(err(line, "EOF inside a section"));
                }
                saw_eof = true;
                continue;
            }
            _ => {}
        }
        match section {
            Section::Skipped => continue,
            Section::None => {
                return Err(err(line, format!("unexpected {head:?} outside a section")))
            }
            Section::Graph => match key.as_str() {
                "NODES" => nodes = Some(parse_int(toks.next(), line, "node count")?),
                "EDGES" | "ARCS" => {
                    declared_edges = Some((parse_int(toks.next(), line, "edge count")?, line))
                }
                "E" | "A" => {
                    let u = parse_int(toks.next(), line, "edge endpoint")?;
                    let v = parse_int(toks.next(), line, "edge endpoint")?;
                    let w = parse_int(toks.next(), line, "edge weight")?;
                    if w != 1 && w != 2 {
                        return Err(err(line, format!("edge weight {w} is not 1 or 2")));
                    }
                    edge_lines += 1;
                    if w == 1 {
                        edges.push((u, v, line));
                    } else if u == 0 || v == 0 || u == v {
                        return Err(err(line, format!("invalid pair {u} {v}")));
                    }
                }
                _ => return Err(err(line, format!("unknown Graph keyword {head:?}"))),
            },
            Section::Terminals => match key.as_str() {
                "TERMINALS" => {
                    declared_terminals =
                        Some((parse_int(toks.next(), line, "terminal count")?, line))
                }
                "T" => terminals.push((parse_int(toks.next(), line, "terminal")?, line)),
                _ => return Err(err(line, format!("unknown Terminals keyword {head:?}"))),
            },
        }
        if let Some(extra) = toks.next() {
            return Err(err(line, format!("trailing token {extra:?}")));
        }
    }

    let last = text.lines().count().max(1);
    if section != Section::None {
        return Err(err(last, "unterminated section"));
    }
    if !saw_graph {
        return Err(err(last, "missing SECTION Graph"));
    }
    let n = nodes.ok_or_else(|| err(last, "missing Nodes line"))?;
    if n == 0 {
        return Err(err(last, "Nodes must be positive"));
    }
    if let Some((count, line)) = declared_edges {
        if count != edge_lines {
            return Err(err(
                line,
                format!("declared {count} edges, found {edge_lines}"),
            ));
        }
    }
    if let Some((count, line)) = declared_terminals {
        if count != terminals.len() {
            return Err(err(
                line,
                format!("declared {count} terminals, found {}", terminals.len()),
            ));
        }
    }
    let to_zero = |v: usize, line: usize| {
        if v == 0 || v > n {
            Err(err(line, format!("node {v} outside 1..={n}")))
        } else {
            Ok(v - 1)
        }
    };
    let mut zero_edges = Vec::with_capacity(edges.len());
    for (u, v, line) in edges {
        if u == v {
            return Err(err(line, format!("self-loop on node {u}")));
        }
        zero_edges.push((to_zero(u, line)?, to_zero(v, line)?));
    }
    let mut zero_terms = Vec::with_capacity(terminals.len());
    for (t, line) in terminals {
        zero_terms.push(to_zero(t, line)?);
    }
    Instance::new(n, zero_edges, zero_terms)
}

/// Writes the instance with 1-based ids and only its weight-1 edges.
pub fn write_stp(instance: &Instance, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC} STP File, STP Format Version 1.0");
    let _ = writeln!(out, "\nSECTION Comment");
    let _ = writeln!(out, "Name \"{}\"", name.replace('"', "'"));
    let _ = writeln!(out, "END\n\nSECTION Graph");
    let _ = writeln!(out, "Nodes {}", instance.node_count());
    let _ = writeln!(out, "Edges {}", instance.edge_count());
    for (u, v) in instance.edges() {
        let _ = writeln!(out, "E {} {} 1", u + 1, v + 1);
    }
    let _ = writeln!(out, "END\n\nSECTION Terminals");
    let _ = writeln!(out, "Terminals {}", instance.terminals().len());
    for &t in instance.terminals() {
        let _ = writeln!(out, "T {}", t + 1);
    }
    let _ = writeln!(out, "END\n\nEOF");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_p3() {
        let text = "\
33D32945 STP File, STP Format Version 1.0
SECTION Comment
Name \"p3\"
END
SECTION Graph
Nodes 3
Edges 2
E 1 2 1
E 2 3 1
END
SECTION Terminals
Terminals 2
T 1
T 3
END
EOF
";
        let inst = parse_stp(text).unwrap();
        assert_eq!(inst, Instance::new(3, [(0, 1), (1, 2)], [0, 2]).unwrap());
    }

    #[test]
    fn empty_edges_single_terminal() {
        let text = "SECTION Graph\nNodes 2\nEdges 0\nEND\nSECTION Terminals\nT 2\nEND\nEOF\n";
        let inst = parse_stp(text).unwrap();
        assert_eq!(inst.edge_count(), 0);
        assert_eq!(inst.terminals(), &[1]);
    }

    #[test]
    fn weight_two_is_implicit() {
        let text = "SECTION Graph\nNodes 3\nEdges 2\nE 1 2 2\nE 2 3 1\nEND\nSECTION Terminals\nT 1\nEND\nEOF\n";
        let inst = parse_stp(text).unwrap();
        assert_eq!(inst.edges().collect::<Vec<_>>(), vec![(1, 2)]);
    }

    #[test]
    fn errors_name_the_line() {
        let text = "SECTION Graph\nNodes 3\nE 1 2 1\nE 2 3 3\nEND\nEOF\n";
        assert_eq!(
            parse_stp(text).unwrap_err(),
            Error::Parse {
                line: 4,
                message: "edge weight 3 is not 1 or 2".into()
            }
        );
        let bad_node = "SECTION Graph\nNodes 3\nE 0 2 1\nEND\nEOF\n";
        assert!(matches!(
            parse_stp(bad_node),
            Err(Error::Parse { line: 3, .. })
        ));
        let count = "SECTION Graph\nNodes 3\nEdges 2\nE 1 2 1\nEND\nEOF\n";
        assert!(matches!(
            parse_stp(count),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(parse_stp("SECTION Graph\nNodes 3\n").is_err());
        assert!(parse_stp("SECTION Terminals\nT 1\nEND\nEOF\n").is_err());
        assert!(parse_stp("SECTION Graph\nNodes x\nEND\n").is_err());
        assert!(parse_stp("").is_err());
    }

    #[test]
    fn skips_unknown_sections() {
        let text = "SECTION Graph\nNodes 2\nE 1 2 1\nEND\nSECTION Coordinates\nDD 1 0 0\nEND\nSECTION Terminals\nT 1\nT 2\nEND\nEOF\n";
        assert_eq!(parse_stp(text).unwrap().terminals(), &[0, 1]);
    }

    #[test]
    fn writer_output_reparses() {
        let inst = Instance::new(5, [(0, 4), (1, 2), (2, 3)], [0, 3]).unwrap();
        let text = write_stp(&inst, "demo");
        assert!(text.contains("E 1 5 1"));
        assert_eq!(parse_stp(&text).unwrap(), inst);
    }
}
