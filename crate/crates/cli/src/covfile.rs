//! Line-oriented covering files.
//!
//! ```text
//! covering odometer
//! level 1
//! vertices 0 1
//! edges
//! 0 1
//! 1 0
//! end
//! level 2
//! vertices 0 1 2 3
//! edges
//! 0 1
//! ...
//! map
//! 0 -> 0
//! ...
//! anchors 0 2
//! end
//! ```
//!
//! Level 1 maps to the singleton level 0, named `v0` unless the level-1
//! `map` block names it otherwise. `#` starts a comment line.

use std::fmt;
use std::sync::Arc;

use chaosembed_core::{CoveringSequence, DirectedGraph, GraphHom, VertexId};

pub const DEFAULT_BASE: &str = "v0";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { line, message: message.into() })
}

#[derive(Default)]
struct Block {
    start: usize,
    vertices: Option<Vec<String>>,
    edges: Vec<(String, String)>,
    map: Vec<(usize, String, String)>,
    anchors: Option<(String, String)>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Head,
    Edges,
    Map,
}

pub fn parse(text: &str) -> Result<CoveringSequence, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (no, header) = lines.next().ok_or(ParseError { line: 1, message: "empty file".into() })?;
    let name = match header.split_once(char::is_whitespace) {
        Some(("covering", rest)) if !rest.trim().is_empty() => rest.trim().to_string(),
        _ => return err(no, "expected `covering <name>`"),
    };

    let mut blocks: Vec<(Block, usize)> = Vec::new();
    let mut cur: Option<(Block, Section)> = None;
    for (no, line) in lines {
        let words: Vec<&str> = line.split_whitespace().collect();
        let Some((block, section)) = cur.as_mut() else {
            match words.as_slice() {
                ["level", n] => {
                    let want = blocks.len() + 1;
                    match n.parse::<usize>() {
                        Ok(n) if n == want => {}
                        _ => return err(no, format!("expected `level {want}`")),
                    }
                    cur = Some((Block { start: no, ..Block::default() }, Section::Head));
                    continue;
                }
                _ => return err(no, "expected `level <n>`"),
            }
        };
        match words.as_slice() {
            ["vertices", vs @ ..] => {
                if block.vertices.is_some() {
                    return err(no, "second `vertices` line");
                }
                if vs.is_empty() {
                    return err(no, "a level needs at least one vertex");
                }
                block.vertices = Some(vs.iter().map(|v| v.to_string()).collect());
                *section = Section::Head;
            }
            ["edges"] => *section = Section::Edges,
            ["map"] => *section = Section::Map,
            ["anchors", a, b] => {
                block.anchors = Some((a.to_string(), b.to_string()));
                *section = Section::Head;
            }
            ["anchors", ..] => return err(no, "expected `anchors <v1> <v2>`"),
            ["end"] => {
                let (block, _) = cur.take().expect("inside a level");
                blocks.push((block, no));
            }
            [u, v] if *section == Section::Edges => block.edges.push((u.to_string(), v.to_string())),
            [v, "->", u] if *section == Section::Map => block.map.push((no, v.to_string(), u.to_string())),
            _ => {
                let want = match section {
                    Section::Edges => "an edge `u v`",
                    Section::Map => "a map entry `v -> u`",
                    Section::Head => "`vertices`, `edges`, `map`, `anchors` or `end`",
                };
                return err(no, format!("expected {want}"));
            }
        }
    }
    if let Some((block, _)) = cur {
        return err(block.start, "level is missing `end`");
    }
    if blocks.is_empty() {
        return err(no, "no levels");
    }
    build(name, blocks)
}

fn build(name: String, blocks: Vec<(Block, usize)>) -> Result<CoveringSequence, ParseError> {
    let base = {
        let (first, _) = &blocks[0];
        let mut targets = first.map.iter().map(|(_, _, u)| u.as_str());
        let base = targets.next().unwrap_or(DEFAULT_BASE).to_string();
        if let Some((no, _, u)) = first.map.iter().find(|(_, _, u)| *u != base) {
            return err(*no, format!("level 0 has a single vertex `{base}`, not `{u}`"));
        }
        base
    };
    let mut levels = vec![Arc::new(DirectedGraph::singleton(base.as_str()))];
    let mut homs = Vec::new();
    let mut hints = Vec::new();
    for (n, (block, end)) in blocks.into_iter().enumerate() {
        let n = n + 1;
        let vertices = block.vertices.ok_or(ParseError { line: block.start, message: "missing `vertices`".into() })?;
        let g = DirectedGraph::new(vertices.iter().map(String::as_str), block.edges.iter().map(|(u, v)| (u.as_str(), v.as_str())))
            .map_err(|e| ParseError { line: end, message: format!("level {n}: {e}") })?;
        let g = Arc::new(g);
        for (no, v, _) in &block.map {
            if g.index_of_str(v).is_none() {
                return err(*no, format!("`{v}` is not a vertex of level {n}"));
            }
        }
        let pairs: Vec<(&str, &str)> = if n == 1 && block.map.is_empty() {
            vertices.iter().map(|v| (v.as_str(), base.as_str())).collect()
        } else {
            block.map.iter().map(|(_, v, u)| (v.as_str(), u.as_str())).collect()
        };
        let hom = GraphHom::from_names(g.clone(), levels[n - 1].clone(), pairs)
            .map_err(|e| ParseError { line: end, message: format!("level {n} map: {e}") })?;
        if let Some((a, b)) = block.anchors {
            hints.push((n, end, a, b));
        }
        levels.push(g);
        homs.push(hom);
    }
    let mut seq = CoveringSequence::new(name, levels, homs).map_err(|e| ParseError { line: 1, message: e.to_string() })?;
    for (n, no, a, b) in hints {
        seq = seq
            .with_anchor_hint(n, VertexId::new(a), VertexId::new(b))
            .map_err(|e| ParseError { line: no, message: format!("level {n} anchors: {e}") })?;
    }
    Ok(seq)
}

/// Writes `seq` in the format read by [`parse`]. Levels must be nonempty
/// and level 0 a singleton.
pub fn write(seq: &CoveringSequence) -> String {
    Display(seq).to_string()
}

struct Display<'a>(&'a CoveringSequence);

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let seq = self.0;
        writeln!(f, "covering {}", seq.name())?;
        for n in 1..=seq.depth() {
            let g = seq.level(n).expect("level exists");
            let below = seq.level(n - 1).expect("level exists");
            let h = seq.hom(n).expect("map exists");
            writeln!(f, "level {n}")?;
            let names: Vec<&str> = g.vertices().iter().map(|v| v.as_str()).collect();
            writeln!(f, "vertices {}", names.join(" "))?;
            writeln!(f, "edges")?;
            for (u, v) in g.edges() {
                writeln!(f, "{} {}", g.name(u), g.name(v))?;
            }
            writeln!(f, "map")?;
            for v in 0..g.vertex_count() {
                writeln!(f, "{} -> {}", g.name(v), below.name(h.image(v)))?;
            }
            if let Some((a, b)) = seq.anchor_hint(n) {
                writeln!(f, "anchors {a} {b}")?;
            }
            writeln!(f, "end")?;
        }
        Ok(())
    }
}
