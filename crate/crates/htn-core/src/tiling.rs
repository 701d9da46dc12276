//! Finite layered patches of regular {p,q} hyperbolic tilings with an ordered
//! boundary, plus minimal cuts through them.
//!
//! Patches are vertex-centered: layer 1 consists of the q tiles around a
//! central vertex, and layer L+1 adds every tile sharing a vertex with the
//! current patch. Construction works in the Poincaré disk; each vertex has
//! exactly q slots at angles 2πk/q, each holding either an edge or a boundary
//! leg. The boundary legs are enumerated counterclockwise around the patch
//! starting from the lexicographically smallest (vertex, slot) pair.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flow::CutGraph;

#[derive(Debug, Error)]
pub enum TilingError {
    #[error("{{{p},{q}}} is not hyperbolic: p·q must exceed 2(p+q) for layered patches")]
    NonHyperbolic { p: usize, q: usize },
    #[error("p and q must both be at least 3 (got {{{p},{q}}})")]
    BadSchlafli { p: usize, q: usize },
    #[error("vertex count exceeded the cap of {cap}")]
    Overflow { cap: usize },
    #[error("boundary region must be a proper nonempty subset of the boundary legs")]
    InvalidRegion,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TilingParams {
    pub p: usize,
    pub q: usize,
    pub layers: usize,
    /// Construction aborts with `Overflow` past this many vertices.
    pub max_vertices: usize,
}

impl TilingParams {
    pub fn new(p: usize, q: usize, layers: usize) -> Self {
        TilingParams { p, q, layers, max_vertices: 50_000 }
    }
}

pub fn is_hyperbolic(p: usize, q: usize) -> bool {
    p * q > 2 * (p + q)
}

/// What a vertex slot holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlotContent {
    Empty,
    Edge(usize),
    /// Index into the ordered boundary list.
    Leg(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    /// 2 for internal edges, 1 for edges on the patch rim.
    pub tile_count: u8,
}

impl Edge {
    pub fn other(&self, v: usize) -> usize {
        if self.a == v {
            self.b
        } else {
            self.a
        }
    }

    pub fn is_internal(&self) -> bool {
        self.tile_count == 2
    }
}

/// A subset of boundary-leg indices (positions in the ccw boundary order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryRegion {
    pub legs: Vec<usize>,
}

impl BoundaryRegion {
    pub fn new(mut legs: Vec<usize>) -> Self {
        legs.sort_unstable();
        legs.dedup();
        BoundaryRegion { legs }
    }

    /// Contiguous arc of `len` legs starting at `start`, wrapping mod `total`.
    pub fn contiguous(start: usize, len: usize, total: usize) -> Self {
        BoundaryRegion::new((0..len).map(|k| (start + k) % total).collect())
    }

    pub fn complement(&self, total: usize) -> Self {
        BoundaryRegion::new((0..total).filter(|i| !self.legs.contains(i)).collect())
    }

    pub fn is_proper(&self, total: usize) -> bool {
        !self.legs.is_empty() && self.legs.len() < total && self.legs.iter().all(|&l| l < total)
    }
}

/// An edge/leg cut separating a boundary region from its complement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cut {
    pub edges: Vec<CutElement>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "id")]
#[serde(rename_all = "snake_case")]
pub enum CutElement {
    Edge(usize),
    Leg(usize),
}

impl Cut {
    pub fn length(&self) -> usize {
        self.edges.len()
    }
}

/// A finite patch of a regular {p,q} tiling.
#[derive(Debug, Clone)]
pub struct HyperbolicTiling {
    pub p: usize,
    pub q: usize,
    pub layers: usize,
    positions: Vec<Complex64>,
    layer_of: Vec<usize>,
    edges: Vec<Edge>,
    /// Per vertex: q slots in ccw order (slot k sits at angle anchor + 2πk/q).
    slots: Vec<Vec<SlotContent>>,
    slot_angles: Vec<Vec<f64>>,
    /// Boundary legs in ccw cyclic order as (vertex, slot).
    boundary: Vec<(usize, usize)>,
    /// Tiles as ccw vertex-id cycles.
    tiles: Vec<Vec<usize>>,
    tile_layer: Vec<usize>,
}

// --- Poincaré disk helpers ---

fn mobius_to_origin(a: Complex64, z: Complex64) -> Complex64 {
    (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z)
}

fn mobius_from_origin(a: Complex64, w: Complex64) -> Complex64 {
    (w + a) / (Complex64::new(1.0, 0.0) + a.conj() * w)
}

fn rotate_about(center: Complex64, theta: f64, z: Complex64) -> Complex64 {
    let w = mobius_to_origin(center, z);
    mobius_from_origin(center, Complex64::from_polar(1.0, theta) * w)
}

#[derive(Debug, Clone)]
struct TileGeo {
    center: Complex64,
    verts: Vec<Complex64>,
    layer: usize,
}

const DEDUP_TOL: f64 = 1e-7;

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() < DEDUP_TOL
}

impl HyperbolicTiling {
    pub fn build(params: TilingParams) -> Result<Self, TilingError> {
        let TilingParams { p, q, layers, max_vertices } = params;
        if p < 3 || q < 3 {
            return Err(TilingError::BadSchlafli { p, q });
        }
        if layers >= 1 && !is_hyperbolic(p, q) {
            return Err(TilingError::NonHyperbolic { p, q });
        }
        if layers == 0 {
            return Ok(Self::seed_only(p, q));
        }

        let tiles = Self::grow_tiles(p, q, layers, max_vertices)?;
        Self::extract_graph(p, q, layers, tiles, max_vertices)
    }

    fn seed_only(p: usize, q: usize) -> Self {
        let boundary: Vec<(usize, usize)> = (0..q).map(|k| (0, k)).collect();
        HyperbolicTiling {
            p,
            q,
            layers: 0,
            positions: vec![Complex64::new(0.0, 0.0)],
            layer_of: vec![0],
            edges: vec![],
            slots: vec![(0..q).map(|k| SlotContent::Leg(k)).collect()],
            slot_angles: vec![(0..q).map(|k| 2.0 * PI * k as f64 / q as f64).collect()],
            boundary,
            tiles: vec![],
            tile_layer: vec![],
        }
    }

    fn grow_tiles(p: usize, q: usize, layers: usize, max_vertices: usize) -> Result<Vec<TileGeo>, TilingError> {
        // circumradius (center-to-vertex): cosh R = cot(π/p)·cot(π/q)
        let r_hyp = ((PI / p as f64).tan().recip() * (PI / q as f64).tan().recip()).acosh();
        let c0 = Complex64::new((r_hyp / 2.0).tanh(), 0.0);
        let seed_verts: Vec<Complex64> = (0..p)
            .map(|k| rotate_about(c0, 2.0 * PI * k as f64 / p as f64, Complex64::new(0.0, 0.0)))
            .collect();

        let mut tiles: Vec<TileGeo> = Vec::new();
        let push_if_new = |tiles: &mut Vec<TileGeo>, t: TileGeo| -> bool {
            if tiles.iter().any(|u| close(u.center, t.center)) {
                false
            } else {
                tiles.push(t);
                true
            }
        };

        for k in 0..q {
            let theta = 2.0 * PI * k as f64 / q as f64;
            let rot = |z: Complex64| Complex64::from_polar(1.0, theta) * z;
            let t = TileGeo {
                center: rot(c0),
                verts: seed_verts.iter().map(|&v| rot(v)).collect(),
                layer: 1,
            };
            push_if_new(&mut tiles, t);
        }

        for layer in 1..layers {
            // all tiles around every vertex of the current patch
            let mut verts_seen: Vec<Complex64> = Vec::new();
            let snapshot: Vec<(Complex64, Vec<Complex64>)> = tiles
                .iter()
                .map(|t| (t.center, t.verts.clone()))
                .collect();
            for (center, verts) in &snapshot {
                for &v in verts {
                    if verts_seen.iter().any(|&u| close(u, v)) {
                        continue;
                    }
                    verts_seen.push(v);
                    for k in 1..q {
                        let theta = 2.0 * PI * k as f64 / q as f64;
                        let t = TileGeo {
                            center: rotate_about(v, theta, *center),
                            verts: verts.iter().map(|&w| rotate_about(v, theta, w)).collect(),
                            layer: layer + 1,
                        };
                        push_if_new(&mut tiles, t);
                    }
                }
                if tiles.len() * p > max_vertices * 2 {
                    return Err(TilingError::Overflow { cap: max_vertices });
                }
            }
        }
        Ok(tiles)
    }

    fn extract_graph(
        p: usize,
        q: usize,
        layers: usize,
        tiles: Vec<TileGeo>,
        max_vertices: usize,
    ) -> Result<Self, TilingError> {
        // vertex dedup in tile discovery order
        let mut positions: Vec<Complex64> = Vec::new();
        let mut layer_of: Vec<usize> = Vec::new();
        let mut tile_vertex_ids: Vec<Vec<usize>> = Vec::new();
        for t in &tiles {
            let mut ids = Vec::with_capacity(p);
            for &v in &t.verts {
                let id = match positions.iter().position(|&u| close(u, v)) {
                    Some(i) => i,
                    None => {
                        positions.push(v);
                        layer_of.push(usize::MAX);
                        positions.len() - 1
                    }
                };
                ids.push(id);
            }
            tile_vertex_ids.push(ids);
        }
        if positions.len() > max_vertices {
            return Err(TilingError::Overflow { cap: max_vertices });
        }
        for (ids, t) in tile_vertex_ids.iter().zip(&tiles) {
            for &id in ids {
                layer_of[id] = layer_of[id].min(t.layer);
            }
        }
        // the central vertex sits at the origin
        let center_id = positions
            .iter()
            .position(|&z| z.norm() < DEDUP_TOL)
            .expect("central vertex present");
        layer_of[center_id] = 0;

        // edges from tile boundaries, deduped, with tile counts
        let mut edge_index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edges: Vec<Edge> = Vec::new();
        for ids in &tile_vertex_ids {
            for k in 0..p {
                let a = ids[k];
                let b = ids[(k + 1) % p];
                let key = (a.min(b), a.max(b));
                match edge_index.get(&key) {
                    Some(&e) => edges[e].tile_count += 1,
                    None => {
                        edge_index.insert(key, edges.len());
                        edges.push(Edge { a: key.0, b: key.1, tile_count: 1 });
                    }
                }
            }
        }
        // canonical edge ids: sort lexicographically by (a, b)
        let mut order: Vec<usize> = (0..edges.len()).collect();
        order.sort_by_key(|&e| (edges[e].a, edges[e].b));
        let sorted_edges: Vec<Edge> = order.iter().map(|&e| edges[e]).collect();
        let edges = sorted_edges;

        // slot assignment: q directions per vertex on the 2π/q grid
        let step = 2.0 * PI / q as f64;
        let mut slots: Vec<Vec<SlotContent>> = vec![vec![SlotContent::Empty; q]; positions.len()];
        let mut slot_angles: Vec<Vec<f64>> = vec![vec![0.0; q]; positions.len()];
        let mut anchor: Vec<Option<f64>> = vec![None; positions.len()];
        for (eid, e) in edges.iter().enumerate() {
            for (v, w) in [(e.a, e.b), (e.b, e.a)] {
                let theta = mobius_to_origin(positions[v], positions[w]).arg();
                let base = match anchor[v] {
                    Some(a) => a,
                    None => {
                        // anchor the grid so this direction is on it, normalized into [0, step)
                        let a = theta.rem_euclid(step);
                        anchor[v] = Some(a);
                        a
                    }
                };
                let rel = (theta - base).rem_euclid(2.0 * PI);
                let k = (rel / step).round() as usize % q;
                let grid_dev = (rel - step * ((rel / step).round())).abs();
                assert!(
                    grid_dev < 1e-6,
                    "edge direction off the 2π/q grid at vertex {v}: dev={grid_dev}"
                );
                assert!(
                    matches!(slots[v][k], SlotContent::Empty | SlotContent::Edge(_)),
                    "slot collision"
                );
                if let SlotContent::Edge(prev) = slots[v][k] {
                    assert_eq!(prev, eid, "two edges claim one slot");
                }
                slots[v][k] = SlotContent::Edge(eid);
            }
        }
        for v in 0..positions.len() {
            let base = anchor[v].unwrap_or(0.0);
            for k in 0..q {
                slot_angles[v][k] = base + step * k as f64;
            }
        }

        let mut tiling = HyperbolicTiling {
            p,
            q,
            layers,
            positions,
            layer_of,
            edges,
            slots,
            slot_angles,
            boundary: vec![],
            tiles: tile_vertex_ids,
            tile_layer: tiles.iter().map(|t| t.layer).collect(),
        };
        tiling.assign_boundary();
        Ok(tiling)
    }

    /// Fill free slots with legs ordered ccw around the outer face.
    fn assign_boundary(&mut self) {
        let q = self.q;
        let free: Vec<(usize, usize)> = (0..self.positions.len())
            .flat_map(|v| (0..q).map(move |k| (v, k)))
            .filter(|&(v, k)| self.slots[v][k] == SlotContent::Empty)
            .collect();
        if free.is_empty() {
            return;
        }
        let start = *free.iter().min().unwrap();

        let walk = |dir: i64| -> Vec<(usize, usize)> {
            let mut out = Vec::new();
            let (mut v, mut s) = start;
            loop {
                out.push((v, s));
                // turn to the next slot in `dir`, crossing edges as we meet them
                let (mut cv, mut cs) = (v, s);
                loop {
                    cs = ((cs as i64 + dir).rem_euclid(q as i64)) as usize;
                    match self.slots[cv][cs] {
                        SlotContent::Empty => {
                            v = cv;
                            s = cs;
                            break;
                        }
                        SlotContent::Leg(_) => unreachable!("legs not yet assigned"),
                        SlotContent::Edge(e) => {
                            let w = self.edges[e].other(cv);
                            // arrival slot of e at w
                            let sw = (0..q)
                                .find(|&k| self.slots[w][k] == SlotContent::Edge(e))
                                .expect("edge slot at mate");
                            cv = w;
                            cs = sw;
                        }
                    }
                }
                if (v, s) == start {
                    break;
                }
                if out.len() > free.len() + 1 {
                    panic!("boundary walk failed to close");
                }
            }
            out
        };

        // choose the direction with positive winding (counterclockwise)
        let mut chosen: Option<Vec<(usize, usize)>> = None;
        for dir in [1i64, -1i64] {
            let w = walk(dir);
            if w.len() != free.len() {
                continue;
            }
            let tips: Vec<Complex64> = w
                .iter()
                .map(|&(v, k)| {
                    let theta = self.slot_angles[v][k];
                    mobius_from_origin(self.positions[v], Complex64::from_polar(0.05, theta))
                })
                .collect();
            let mut area = 0.0;
            for i in 0..tips.len() {
                let a = tips[i];
                let b = tips[(i + 1) % tips.len()];
                area += a.re * b.im - b.re * a.im;
            }
            if area > 0.0 {
                chosen = Some(w);
                break;
            }
        }
        let order = chosen.expect("one walk orientation must be counterclockwise");
        for (idx, &(v, k)) in order.iter().enumerate() {
            self.slots[v][k] = SlotContent::Leg(idx);
        }
        self.boundary = order;
    }

    // --- accessors ---

    pub fn vertex_count(&self) -> usize {
        self.positions.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn boundary_len(&self) -> usize {
        self.boundary.len()
    }

    pub fn tile_count(&self) -> usize {
        self.tiles.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn tiles(&self) -> &[Vec<usize>] {
        &self.tiles
    }

    pub fn tile_layer(&self) -> &[usize] {
        &self.tile_layer
    }

    pub fn vertex_layer(&self, v: usize) -> usize {
        self.layer_of[v]
    }

    pub fn position(&self, v: usize) -> Complex64 {
        self.positions[v]
    }

    pub fn boundary(&self) -> &[(usize, usize)] {
        &self.boundary
    }

    pub fn slots(&self, v: usize) -> &[SlotContent] {
        &self.slots[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.slots[v]
            .iter()
            .filter(|s| matches!(s, SlotContent::Edge(_)))
            .count()
    }

    /// Edges incident to v as (slot, edge id).
    pub fn edges_at(&self, v: usize) -> Vec<(usize, usize)> {
        self.slots[v]
            .iter()
            .enumerate()
            .filter_map(|(k, s)| match s {
                SlotContent::Edge(e) => Some((k, *e)),
                _ => None,
            })
            .collect()
    }

    /// Boundary legs owned by v as (slot, boundary index).
    pub fn legs_at(&self, v: usize) -> Vec<(usize, usize)> {
        self.slots[v]
            .iter()
            .enumerate()
            .filter_map(|(k, s)| match s {
                SlotContent::Leg(b) => Some((k, *b)),
                _ => None,
            })
            .collect()
    }

    /// Bulk legs (one logical per vertex) and boundary legs.
    pub fn dof_counting(&self) -> (usize, usize) {
        (self.vertex_count(), self.boundary_len())
    }

    // --- minimal cuts ---

    /// The graph used for cuts: tiling edges get ids 0..E, legs E..E+B (in
    /// boundary order); every boundary leg ends in a phantom node.
    fn leg_graph(&self) -> (CutGraph, Vec<usize>) {
        let v_count = self.vertex_count();
        let mut g = CutGraph::new(v_count + self.boundary_len());
        for e in &self.edges {
            g.add_edge(e.a, e.b);
        }
        let mut phantoms = Vec::with_capacity(self.boundary_len());
        for (b, &(v, _slot)) in self.boundary.iter().enumerate() {
            let ph = v_count + b;
            g.add_edge(v, ph);
            phantoms.push(ph);
        }
        (g, phantoms)
    }

    /// Minimum-cardinality edge/leg cut separating `region` legs from the rest,
    /// lexicographically smallest (edges before legs, each by id).
    pub fn minimal_cut(&self, region: &BoundaryRegion) -> Result<Cut, TilingError> {
        if !region.is_proper(self.boundary_len()) {
            return Err(TilingError::InvalidRegion);
        }
        let (g, phantoms) = self.leg_graph();
        let sources: Vec<usize> = region.legs.iter().map(|&b| phantoms[b]).collect();
        let sinks: Vec<usize> = region
            .complement(self.boundary_len())
            .legs
            .iter()
            .map(|&b| phantoms[b])
            .collect();
        let raw = g.min_cut(&sources, &sinks);
        let e_count = self.edge_count();
        let elements = raw
            .into_iter()
            .map(|id| {
                if id < e_count {
                    CutElement::Edge(id)
                } else {
                    CutElement::Leg(id - e_count)
                }
            })
            .collect();
        Ok(Cut { edges: elements })
    }

    // --- export ---

    pub fn to_json(&self) -> TilingJson {
        TilingJson {
            p: self.p,
            q: self.q,
            layers: self.layers,
            vertices: (0..self.vertex_count())
                .map(|v| VertexJson { id: v, layer: self.layer_of[v] })
                .collect(),
            edges: self.edges.iter().map(|e| [e.a, e.b]).collect(),
            boundary: self.boundary.iter().map(|&(v, s)| [v, s]).collect(),
        }
    }

    pub fn to_dot(&self, overlay: Option<&TilingOverlay>) -> String {
        let mut s = String::new();
        writeln!(s, "graph tiling {{").unwrap();
        writeln!(s, "  layout=neato; node [shape=circle, width=0.25, fixedsize=true];").unwrap();
        for v in 0..self.vertex_count() {
            let z = self.positions[v];
            let color = overlay.map_or("lightgray", |o| o.vertex_color(v));
            writeln!(
                s,
                "  v{v} [pos=\"{:.4},{:.4}!\", style=filled, fillcolor={color}, label=\"{v}\"];",
                z.re * 8.0,
                z.im * 8.0
            )
            .unwrap();
        }
        for (eid, e) in self.edges.iter().enumerate() {
            let style = overlay
                .filter(|o| o.cut_edges.contains(&eid))
                .map_or("", |_| " [color=red, penwidth=2]");
            writeln!(s, "  v{} -- v{}{};", e.a, e.b, style).unwrap();
        }
        writeln!(s, "}}").unwrap();
        s
    }

    pub fn to_svg(&self, overlay: Option<&TilingOverlay>) -> String {
        let scale = 360.0;
        let map = |z: Complex64| (400.0 + scale * z.re, 400.0 - scale * z.im);
        let mut s = String::new();
        writeln!(
            s,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">"
        )
        .unwrap();
        writeln!(s, "<circle cx=\"400\" cy=\"400\" r=\"{scale}\" fill=\"none\" stroke=\"#ccc\"/>").unwrap();
        for (eid, e) in self.edges.iter().enumerate() {
            let (x1, y1) = map(self.positions[e.a]);
            let (x2, y2) = map(self.positions[e.b]);
            let stroke = if overlay.is_some_and(|o| o.cut_edges.contains(&eid)) {
                "#d33"
            } else {
                "#555"
            };
            writeln!(
                s,
                "<line x1=\"{x1:.1}\" y1=\"{y1:.1}\" x2=\"{x2:.1}\" y2=\"{y2:.1}\" stroke=\"{stroke}\" stroke-width=\"1.5\"/>"
            )
            .unwrap();
        }
        for &(v, k) in &self.boundary {
            let theta = self.slot_angles[v][k];
            let tip = mobius_from_origin(self.positions[v], Complex64::from_polar(0.04, theta));
            let (x1, y1) = map(self.positions[v]);
            let (x2, y2) = map(tip);
            writeln!(
                s,
                "<line x1=\"{x1:.1}\" y1=\"{y1:.1}\" x2=\"{x2:.1}\" y2=\"{y2:.1}\" stroke=\"#aaa\" stroke-width=\"1\"/>"
            )
            .unwrap();
        }
        for v in 0..self.vertex_count() {
            let (x, y) = map(self.positions[v]);
            let fill = overlay.map_or("#8bf", |o| o.vertex_color(v));
            writeln!(s, "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"5\" fill=\"{fill}\" stroke=\"#333\"/>").unwrap();
        }
        writeln!(s, "</svg>").unwrap();
        s
    }
}

/// Optional wedge/cut coloring for exports.
#[derive(Debug, Clone, Default)]
pub struct TilingOverlay {
    pub wedge: Vec<usize>,
    pub complement_wedge: Vec<usize>,
    pub residual: Vec<usize>,
    pub cut_edges: Vec<usize>,
}

impl TilingOverlay {
    fn vertex_color(&self, v: usize) -> &'static str {
        if self.wedge.contains(&v) {
            "skyblue"
        } else if self.complement_wedge.contains(&v) {
            "palegreen"
        } else if self.residual.contains(&v) {
            "white"
        } else {
            "lightgray"
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TilingJson {
    pub p: usize,
    pub q: usize,
    pub layers: usize,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<[usize; 2]>,
    pub boundary: Vec<[usize; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: usize,
    pub layer: usize,
}
