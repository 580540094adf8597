//! Sierpinski-gasket pre-fractal graphs `G_n` with word/cell addressing.
//!
//! `V_0` consists of the fixed points of the three similitudes, i.e.
//! `(0,0)`, `(1,0)` and `(1/2, sqrt(3)/2)`; `V_{n+1}` is the image of `V_n`
//! under all three maps, and two vertices of `V_n` are joined by an edge iff
//! they lie in a common `n`-cell.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};

/// Maximum construction level; `|V_12|` is already ~800k vertices.
pub const MAX_LEVEL: usize = 12;

/// Quantization grid for vertex identity. Vertex gaps at level 12 are
/// `2^-12 ~ 2.4e-4`, float noise is ~1e-15, so 1e-6 separates cleanly.
const SNAP: f64 = 1e-6;

pub fn corners() -> [[f64; 2]; 3] {
    [[0.0, 0.0], [1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]]
}

/// Similitudes of the gasket, contraction ratio 1/2 each, fixing the three
/// corners respectively.
pub fn similitude(letter: u8, p: [f64; 2]) -> [f64; 2] {
    let c = corners()[(letter - 1) as usize];
    [(p[0] + c[0]) / 2.0, (p[1] + c[1]) / 2.0]
}

/// A finite word over the alphabet `{1,2,3}` addressing a cell of the gasket.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(letters: impl Into<Vec<u8>>) -> Result<Self> {
        let letters = letters.into();
        if letters.iter().any(|&l| !(1..=3).contains(&l)) {
            return Err(Error::InvalidParameter(
                "word letters must be in {1,2,3}".into(),
            ));
        }
        Ok(Word(letters))
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }
}

/// `S_w = S_{w_1} ∘ ... ∘ S_{w_l}` applied to `p` (first letter outermost).
pub fn apply_word(w: &Word, p: [f64; 2]) -> [f64; 2] {
    w.0.iter().rev().fold(p, |q, &l| similitude(l, q))
}

/// The three corners of the cell `w(SG)`.
pub fn cell_vertices(w: &Word) -> [[f64; 2]; 3] {
    let cs = corners();
    [
        apply_word(w, cs[0]),
        apply_word(w, cs[1]),
        apply_word(w, cs[2]),
    ]
}

fn snap_key(p: [f64; 2]) -> (i64, i64) {
    ((p[0] / SNAP).round() as i64, (p[1] / SNAP).round() as i64)
}

/// Level-`n` approximating graph of the gasket.
#[derive(Debug, Clone, Serialize)]
pub struct GraphApprox {
    pub level: usize,
    /// Planar coordinates per vertex index.
    pub vertices: Vec<[f64; 2]>,
    pub edges: Vec<[usize; 2]>,
    /// Indices of the three `V_0` corners.
    pub boundary: [usize; 3],
    /// Corner indices of each `n`-cell, in word-lexicographic order.
    pub cells: Vec<[usize; 3]>,
    #[serde(skip)]
    index: HashMap<(i64, i64), usize>,
}

impl GraphApprox {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Index of the vertex at coordinates `p`, if one exists.
    pub fn find_vertex(&self, p: [f64; 2]) -> Option<usize> {
        self.index.get(&snap_key(p)).copied()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.vertices.len()];
        for e in &self.edges {
            deg[e[0]] += 1;
            deg[e[1]] += 1;
        }
        deg
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            adj[e[0]].push(e[1]);
            adj[e[1]].push(e[0]);
        }
        adj
    }

    /// Indices (within this graph) of the coarser vertex set `V_m`.
    pub fn coarse_vertex_indices(&self, m: usize) -> Result<Vec<usize>> {
        if m > self.level {
            return Err(Error::InvalidParameter(format!(
                "V_{m} is not contained in the level-{} graph",
                self.level
            )));
        }
        let coarse = build_graph(m)?;
        coarse
            .vertices
            .iter()
            .map(|&p| {
                self.find_vertex(p).ok_or_else(|| {
                    Error::InvalidParameter("coarse vertex missing in fine graph".into())
                })
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "level": self.level,
            "vertices": self.vertices,
            "edges": self.edges,
            "boundary": self.boundary,
        })
    }
}

/// Builds `G_n` by midpoint refinement of cells; vertices are deduplicated by
/// snapped coordinates.
pub fn build_graph(n: usize) -> Result<GraphApprox> {
    if n > MAX_LEVEL {
        return Err(Error::InvalidParameter(format!(
            "level {n} exceeds maximum {MAX_LEVEL}"
        )));
    }
    // refine geometric cells; the corner-ordering of children matches the
    // word order w -> (w1, w2, w3)
    let mut cells_pts: Vec<[[f64; 2]; 3]> = vec![corners()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(cells_pts.len() * 3);
        for [a, b, c] in &cells_pts {
            let mab = mid(*a, *b);
            let mac = mid(*a, *c);
            let mbc = mid(*b, *c);
            next.push([*a, mab, mac]);
            next.push([mab, *b, mbc]);
            next.push([mac, mbc, *c]);
        }
        cells_pts = next;
    }

    let mut index: HashMap<(i64, i64), usize> = HashMap::new();
    let mut vertices: Vec<[f64; 2]> = Vec::new();
    let mut intern = |p: [f64; 2]| -> usize {
        *index.entry(snap_key(p)).or_insert_with(|| {
            vertices.push(p);
            vertices.len() - 1
        })
    };

    let mut cells = Vec::with_capacity(cells_pts.len());
    let mut edges = Vec::with_capacity(cells_pts.len() * 3);
    for pts in &cells_pts {
        let ids = [intern(pts[0]), intern(pts[1]), intern(pts[2])];
        edges.push([ids[0], ids[1]]);
        edges.push([ids[0], ids[2]]);
        edges.push([ids[1], ids[2]]);
        cells.push(ids);
    }
    let cs = corners();
    let boundary = [
        index[&snap_key(cs[0])],
        index[&snap_key(cs[1])],
        index[&snap_key(cs[2])],
    ];

    let g = GraphApprox {
        level: n,
        vertices,
        edges,
        boundary,
        cells,
        index,
    };
    debug_assert_eq!(g.vertex_count(), (3usize.pow(n as u32 + 1) + 3) / 2);
    debug_assert_eq!(g.edge_count(), 3usize.pow(n as u32 + 1));
    Ok(g)
}

fn mid(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0]
}
