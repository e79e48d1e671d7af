use std::collections::HashSet;
use std::io::BufRead;

use super::Graph;
use crate::error::{RcrError, Result};

fn parse_err(line: usize, message: impl Into<String>) -> RcrError {
    RcrError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_pair(text: &str, line: usize) -> Result<(usize, usize)> {
    let mut fields = text.split_whitespace();
    let mut next = |what: &str| -> Result<usize> {
        let field = fields
            .next()
            .ok_or_else(|| parse_err(line, format!("missing {what}")))?;
        field
            .parse()
            .map_err(|_| parse_err(line, format!("{what} is not a non-negative integer: {field:?}")))
    };
    let a = next("first field")?;
    let b = next("second field")?;
    if fields.next().is_some() {
        return Err(parse_err(line, "expected exactly two fields"));
    }
    Ok((a, b))
}

/// Reads the edge-list text format.
///
/// ```text
/// # comment
/// n m
/// u v      (m lines, 0-based endpoints)
/// ```
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    let mut last_line = 0;
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let line = line?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let (a, b) = parse_pair(text, lineno)?;
        let Some((n, m)) = header else {
            if a == 0 {
                return Err(parse_err(lineno, "vertex count must be positive"));
            }
            header = Some((a, b));
            continue;
        };
        if edges.len() == m {
            return Err(parse_err(lineno, format!("more than the declared {m} edges")));
        }
        if a >= n || b >= n {
            return Err(parse_err(lineno, format!("endpoint out of range for n = {n}")));
        }
        if a == b {
            return Err(parse_err(lineno, format!("loop at vertex {a}")));
        }
        if !seen.insert((a.min(b), a.max(b))) {
            return Err(parse_err(lineno, format!("duplicate edge {a} {b}")));
        }
        edges.push((a, b));
    }
    let (n, m) = header.ok_or_else(|| parse_err(last_line.max(1), "missing \"n m\" header"))?;
    if edges.len() != m {
        return Err(parse_err(
            last_line,
            format!("declared {m} edges but found {}", edges.len()),
        ));
    }
    Graph::from_edges(format!("edges:{n}"), n, &edges).map_err(|e| parse_err(last_line, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Graph> {
        parse_edge_list(text.as_bytes())
    }

    #[test]
    fn minimal_path() {
        let g = parse("3 2\n0 1\n1 2\n").unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse("# header\n\n3 2\n# edge\n0 1\n  1   2  \n").unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn rejects_loop() {
        let err = parse("2 1\n0 0\n").unwrap_err();
        assert!(matches!(err, RcrError::Parse { line: 2, .. }), "{err}");
        assert!(err.to_string().contains("loop"));
    }

    #[test]
    fn rejects_disconnected() {
        let err = parse("4 2\n0 1\n2 3\n").unwrap_err();
        assert!(err.to_string().contains("disconnected"), "{err}");
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(matches!(parse("3 2\n0 x\n1 2\n"), Err(RcrError::Parse { line: 2, .. })));
        assert!(matches!(parse("3 2\n0 1\n1 5\n"), Err(RcrError::Parse { line: 3, .. })));
        assert!(matches!(parse("3 2\n0 1\n1 0\n"), Err(RcrError::Parse { line: 3, .. })));
        assert!(matches!(parse("3 2\n0 1 2\n"), Err(RcrError::Parse { line: 2, .. })));
        assert!(parse("3 2\n0 1\n").is_err());
        assert!(parse("").is_err());
    }
}
