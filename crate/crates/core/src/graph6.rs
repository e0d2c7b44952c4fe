//! graph6 and plain edge-list text formats.
//!
//! graph6 packs the upper triangle of the adjacency matrix column by column
//! (`x(0,1) x(0,2) x(1,2) x(0,3) ...`) into 6-bit groups offset by 63.
//! The edge-list format is an `n m` header followed by `m` lines `u v`,
//! vertices 0-based.

use crate::error::{Error, Result};
use crate::graph::{Graph, MAX_VERTICES};

const HEADER: &str = ">>graph6<<";

fn parse_err(line: usize, offset: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        offset,
        message: message.into(),
    }
}

/// Decodes one graph6 record. `line` is only used for error messages.
pub fn parse_graph6_line(text: &str, line: usize) -> Result<Graph> {
    let body = text.strip_prefix(HEADER).unwrap_or(text);
    let skipped = text.len() - body.len();
    let bytes = body.as_bytes();
    if bytes.is_empty() {
        return Err(parse_err(line, skipped, "empty graph6 record"));
    }
    if bytes[0] == b':' || bytes[0] == b'&' {
        return Err(parse_err(line, skipped, "sparse6/digraph6 records are not supported"));
    }
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(parse_err(line, skipped + i, format!("byte {b:#04x} outside graph6 range")));
        }
    }
    let (n, mut pos) = if bytes[0] == 126 {
        if bytes.get(1) == Some(&126) {
            return Err(parse_err(line, skipped + 1, "graphs this large are not supported"));
        }
        if bytes.len() < 4 {
            return Err(parse_err(line, skipped + bytes.len(), "truncated vertex count"));
        }
        let n = bytes[1..4]
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
        (n, 4)
    } else {
        ((bytes[0] - 63) as usize, 1)
    };
    if n > MAX_VERTICES {
        return Err(parse_err(
            line,
            skipped,
            format!("{n} vertices exceed the supported maximum of {MAX_VERTICES}"),
        ));
    }
    let bit_count = n * n.saturating_sub(1) / 2;
    let expected = bit_count.div_ceil(6);
    let data = &bytes[pos..];
    if data.len() != expected {
        return Err(parse_err(
            line,
            skipped + pos + data.len().min(expected),
            format!("expected {expected} data bytes for {n} vertices, found {}", data.len()),
        ));
    }
    let mut g = Graph::empty(n)?;
    let mut k = 0usize;
    for v in 1..n {
        for u in 0..v {
            let byte = data[k / 6] - 63;
            if byte & (1 << (5 - k % 6)) != 0 {
                g.insert_edge(u, v);
            }
            k += 1;
        }
    }
    // padding bits must be zero, otherwise the record is not canonical
    while k < expected * 6 {
        let byte = data[k / 6] - 63;
        if byte & (1 << (5 - k % 6)) != 0 {
            pos += k / 6;
            return Err(parse_err(line, skipped + pos, "non-zero padding bits"));
        }
        k += 1;
    }
    Ok(g)
}

pub fn serialize_graph(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::new();
    if n <= 62 {
        out.push(63 + n as u8);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(63 + ((n >> shift) & 63) as u8);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for v in 1..n {
        for u in 0..v {
            acc = (acc << 1) | g.has_edge(u, v) as u8;
            filled += 1;
            if filled == 6 {
                out.push(63 + acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(63 + (acc << (6 - filled)));
    }
    String::from_utf8(out).expect("graph6 is ASCII")
}

fn looks_like_edge_list(line: &str) -> bool {
    let mut it = line.split_whitespace();
    matches!(
        (it.next(), it.next(), it.next()),
        (Some(a), Some(b), None) if a.parse::<usize>().is_ok() && b.parse::<usize>().is_ok()
    )
}

/// Parses a single graph from graph6 or edge-list text.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut graphs = parse_graphs(text);
    match graphs.next() {
        None => Err(parse_err(1, 0, "no graph in input")),
        Some(first) => {
            let g = first.map(|(_, g)| g)?;
            if let Some(extra) = graphs.next() {
                let line = match extra {
                    Ok((l, _)) => l,
                    Err(Error::Parse { line, .. }) => line,
                    Err(_) => 0,
                };
                return Err(parse_err(line, 0, "more than one graph in input"));
            }
            Ok(g)
        }
    }
}

/// Parses a stream of graphs: one graph6 record per line, or consecutive
/// edge-list blocks. The format is chosen from the first non-empty line.
/// Each item carries the 1-based line where its record starts; a malformed
/// graph6 line yields an error item and parsing continues on the next line.
pub fn parse_graphs(text: &str) -> impl Iterator<Item = Result<(usize, Graph)>> + '_ {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let edge_list = lines.first().is_some_and(|(_, l)| looks_like_edge_list(l));
    let mut items: Vec<Result<(usize, Graph)>> = Vec::new();
    if edge_list {
        let mut i = 0;
        while i < lines.len() {
            match parse_edge_block(&lines[i..]) {
                Ok((g, used)) => {
                    items.push(Ok((lines[i].0, g)));
                    i += used;
                }
                Err(e) => {
                    // blocks cannot be resynchronised reliably
                    items.push(Err(e));
                    break;
                }
            }
        }
    } else {
        for &(no, l) in &lines {
            items.push(parse_graph6_line(l, no).map(|g| (no, g)));
        }
    }
    items.into_iter()
}

fn parse_edge_block(lines: &[(usize, &str)]) -> Result<(Graph, usize)> {
    let (hline, header) = lines[0];
    let nums = |no: usize, l: &str| -> Result<(usize, usize)> {
        let mut it = l.split_whitespace();
        let mut field = |offset: usize| -> Result<usize> {
            let tok = it.next().ok_or_else(|| parse_err(no, offset, "expected two integers"))?;
            let at = tok.as_ptr() as usize - l.as_ptr() as usize;
            tok.parse::<usize>()
                .map_err(|_| parse_err(no, at, format!("`{tok}` is not a non-negative integer")))
        };
        let a = field(0)?;
        let b = field(l.len())?;
        if it.next().is_some() {
            return Err(parse_err(no, l.len(), "trailing tokens"));
        }
        Ok((a, b))
    };
    let (n, m) = nums(hline, header)?;
    if n > MAX_VERTICES {
        return Err(parse_err(hline, 0, format!("{n} vertices exceed the supported maximum")));
    }
    if lines.len() < m + 1 {
        return Err(parse_err(hline, header.len(), format!("header announces {m} edges, input ends early")));
    }
    let mut g = Graph::empty(n)?;
    for &(no, l) in &lines[1..=m] {
        let (u, v) = nums(no, l)?;
        if u >= n || v >= n {
            return Err(parse_err(no, 0, format!("edge {u} {v} references a vertex >= {n}")));
        }
        if u == v {
            return Err(parse_err(no, 0, format!("self-loop at {u}")));
        }
        g.insert_edge(u, v);
    }
    Ok((g, m + 1))
}

pub fn serialize_edge_list(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.order(), g.size());
    for (u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    #[test]
    fn known_encodings() {
        assert!(parse_graph("C~").unwrap().same_structure(&named::complete(4)));
        assert_eq!(serialize_graph(&named::complete(2)), "A_");
        assert_eq!(serialize_graph(&Graph::empty(1).unwrap()), "@");
        assert_eq!(serialize_graph(&Graph::empty(0).unwrap()), "?");
        assert!(parse_graph("2 1\n0 1\n").unwrap().same_structure(&named::complete(2)));
    }

    #[test]
    fn dqo_round_trip() {
        let g = parse_graph("DQo").unwrap();
        assert_eq!(g.order(), 5);
        assert_eq!(serialize_graph(&g), "DQo");
    }

    #[test]
    fn large_header_form() {
        let g = named::path(63);
        let s = serialize_graph(&g);
        assert!(s.starts_with('~'));
        assert!(parse_graph(&s).unwrap().same_structure(&g));
    }

    #[test]
    fn header_prefix_is_accepted() {
        assert!(parse_graph(">>graph6<<A_").unwrap().same_structure(&named::complete(2)));
    }

    #[test]
    fn malformed_records() {
        assert!(matches!(parse_graph("C~~"), Err(Error::Parse { offset: 2, .. })));
        assert!(matches!(parse_graph("C"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("A "), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("A`"), Err(Error::Parse { .. }))); // padding bit set
        assert!(matches!(parse_graph(":Fa@x^"), Err(Error::Parse { .. })));
        assert!(matches!(parse_graph("3 1\n0 5\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("3 2\n0 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_graph("2 1\n0 x\n"), Err(Error::Parse { line: 2, offset: 2, .. })));
    }

    #[test]
    fn stream_reports_bad_lines_and_continues() {
        let items: Vec<_> = parse_graphs("A_\nB~\n\nC~\n").collect();
        assert_eq!(items.len(), 3);
        assert!(items[0].is_ok());
        assert!(matches!(items[1], Err(Error::Parse { line: 2, .. })));
        assert_eq!(items[2].as_ref().unwrap().0, 4);
    }

    #[test]
    fn edge_list_blocks() {
        let gs: Vec<_> = parse_graphs("2 1\n0 1\n3 0\n").map(|r| r.unwrap().1).collect();
        assert_eq!(gs.len(), 2);
        assert_eq!(gs[1].order(), 3);
        let g = named::petersen();
        assert!(parse_graph(&serialize_edge_list(&g)).unwrap().same_structure(&g));
    }
}
