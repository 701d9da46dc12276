//! Independent cross-check of the tiling builder.
//!
//! This oracle rebuilds {p,q} patches in the hyperboloid model, generating
//! tiles by geodesic *reflections* (corner walks around vertices) instead of
//! disk rotations, with its own deduplication. Vertex/edge/leg counts must
//! agree with the Poincaré-disk builder; agreed values for deeper layers are
//! frozen as goldens.

use std::f64::consts::PI;

use htn_core::tiling::{HyperbolicTiling, TilingParams};

type P3 = [f64; 3];

fn minkowski(a: P3, b: P3) -> f64 {
    a[0] * b[0] + a[1] * b[1] - a[2] * b[2]
}

fn renorm(p: P3) -> P3 {
    let t = (1.0 + p[0] * p[0] + p[1] * p[1]).sqrt();
    [p[0], p[1], t.copysign(p[2])]
}

/// Reflect across the geodesic plane through points a and b.
fn reflect(p: P3, a: P3, b: P3) -> P3 {
    // Euclidean cross product, then flip the time component to get the
    // Minkowski normal of span{a, b}.
    let c = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    let n = [c[0], c[1], -c[2]];
    let nn = minkowski(n, n);
    assert!(nn > 0.0, "edge normal must be spacelike");
    let scale = 2.0 * minkowski(p, n) / nn;
    renorm([p[0] - scale * n[0], p[1] - scale * n[1], p[2] - scale * n[2]])
}

fn close(a: P3, b: P3) -> bool {
    let tol = 1e-6 * (1.0 + a[2].abs());
    (a[0] - b[0]).abs() < tol && (a[1] - b[1]).abs() < tol && (a[2] - b[2]).abs() < tol
}

#[derive(Clone)]
struct Tile {
    center: P3,
    verts: Vec<P3>,
    layer: usize,
}

fn mat_mul(m: [[f64; 3]; 3], p: P3) -> P3 {
    let mut out = [0.0; 3];
    for r in 0..3 {
        out[r] = m[r][0] * p[0] + m[r][1] * p[1] + m[r][2] * p[2];
    }
    out
}

fn seed_tile(p: usize, q: usize) -> Tile {
    let r = ((PI / p as f64).tan().recip() * (PI / q as f64).tan().recip()).acosh();
    let boost = [
        [r.cosh(), 0.0, r.sinh()],
        [0.0, 1.0, 0.0],
        [r.sinh(), 0.0, r.cosh()],
    ];
    let unboost = [
        [r.cosh(), 0.0, -r.sinh()],
        [0.0, 1.0, 0.0],
        [-r.sinh(), 0.0, r.cosh()],
    ];
    let center = mat_mul(boost, [0.0, 0.0, 1.0]);
    let verts: Vec<P3> = (0..p)
        .map(|k| {
            let th = 2.0 * PI * k as f64 / p as f64;
            let rot = [
                [th.cos(), -th.sin(), 0.0],
                [th.sin(), th.cos(), 0.0],
                [0.0, 0.0, 1.0],
            ];
            // rotate the origin-vertex around the tile center
            renorm(mat_mul(boost, mat_mul(rot, mat_mul(unboost, [0.0, 0.0, 1.0]))))
        })
        .collect();
    Tile { center, verts, layer: 1 }
}

/// All q tiles around vertex `v`, generated from one incident tile by repeated
/// reflections across edges through `v`.
fn tiles_around(v: P3, start: &Tile, q: usize) -> Vec<Tile> {
    let mut around: Vec<Tile> = vec![start.clone()];
    loop {
        let mut added = false;
        let snapshot: Vec<Tile> = around.clone();
        for t in &snapshot {
            let p = t.verts.len();
            for k in 0..p {
                let a = t.verts[k];
                let b = t.verts[(k + 1) % p];
                if !(close(a, v) || close(b, v)) {
                    continue;
                }
                let cand = Tile {
                    center: reflect(t.center, a, b),
                    verts: t.verts.iter().map(|&w| reflect(w, a, b)).collect(),
                    layer: t.layer,
                };
                if !around.iter().any(|u| close(u.center, cand.center)) {
                    around.push(cand);
                    added = true;
                }
            }
        }
        if !added || around.len() >= q {
            break;
        }
    }
    assert_eq!(around.len(), q, "corner walk must find exactly q tiles");
    around
}

struct Counts {
    tiles: usize,
    vertices: usize,
    edges: usize,
    legs: usize,
    vertices_per_layer: Vec<usize>,
}

fn oracle_counts(p: usize, q: usize, layers: usize) -> Counts {
    assert!(layers >= 1);
    let origin: P3 = [0.0, 0.0, 1.0];
    let t0 = seed_tile(p, q);
    let mut tiles: Vec<Tile> = Vec::new();
    for t in tiles_around(origin, &t0, q) {
        let mut t = t;
        t.layer = 1;
        if !tiles.iter().any(|u| close(u.center, t.center)) {
            tiles.push(t);
        }
    }
    for layer in 1..layers {
        let snapshot: Vec<Tile> = tiles.clone();
        let mut verts_done: Vec<P3> = Vec::new();
        for t in &snapshot {
            for &v in &t.verts {
                if verts_done.iter().any(|&u| close(u, v)) {
                    continue;
                }
                verts_done.push(v);
                for mut cand in tiles_around(v, t, q) {
                    cand.layer = layer + 1;
                    if !tiles.iter().any(|u| close(u.center, cand.center)) {
                        tiles.push(cand);
                    }
                }
            }
        }
    }

    // extract counts with local dedup
    let mut verts: Vec<P3> = Vec::new();
    let mut vert_layer: Vec<usize> = Vec::new();
    let vid = |verts: &mut Vec<P3>, vert_layer: &mut Vec<usize>, v: P3, layer: usize| -> usize {
        match verts.iter().position(|&u| close(u, v)) {
            Some(i) => {
                vert_layer[i] = vert_layer[i].min(layer);
                i
            }
            None => {
                verts.push(v);
                vert_layer.push(layer);
                verts.len() - 1
            }
        }
    };
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for t in &tiles {
        let ids: Vec<usize> = t
            .verts
            .iter()
            .map(|&v| vid(&mut verts, &mut vert_layer, v, t.layer))
            .collect();
        for k in 0..ids.len() {
            let a = ids[k].min(ids[(k + 1) % ids.len()]);
            let b = ids[k].max(ids[(k + 1) % ids.len()]);
            if !edges.contains(&(a, b)) {
                edges.push((a, b));
            }
        }
    }
    // center vertex has layer 0
    let center = verts.iter().position(|&v| close(v, origin)).unwrap();
    vert_layer[center] = 0;

    let mut degree = vec![0usize; verts.len()];
    for &(a, b) in &edges {
        degree[a] += 1;
        degree[b] += 1;
    }
    let legs: usize = degree.iter().map(|&d| q - d).sum();
    let mut per_layer = vec![0usize; layers + 1];
    for &l in &vert_layer {
        per_layer[l] += 1;
    }
    Counts {
        tiles: tiles.len(),
        vertices: verts.len(),
        edges: edges.len(),
        legs,
        vertices_per_layer: per_layer,
    }
}

fn compare(p: usize, q: usize, layers: usize) -> Counts {
    let main = HyperbolicTiling::build(TilingParams::new(p, q, layers)).unwrap();
    let oracle = oracle_counts(p, q, layers);
    assert_eq!(main.tile_count(), oracle.tiles, "{{{p},{q}}} L{layers} tiles");
    assert_eq!(main.vertex_count(), oracle.vertices, "{{{p},{q}}} L{layers} vertices");
    assert_eq!(main.edge_count(), oracle.edges, "{{{p},{q}}} L{layers} edges");
    assert_eq!(main.boundary_len(), oracle.legs, "{{{p},{q}}} L{layers} legs");
    let mut main_per_layer = vec![0usize; layers + 1];
    for v in 0..main.vertex_count() {
        main_per_layer[main.vertex_layer(v)] += 1;
    }
    assert_eq!(main_per_layer, oracle.vertices_per_layer, "{{{p},{q}}} L{layers} layer profile");
    oracle
}

#[test]
fn disk_and_hyperboloid_constructions_agree() {
    for (p, q, layers) in [
        (5, 4, 1),
        (5, 4, 2),
        (4, 5, 1),
        (4, 5, 2),
        (7, 3, 1),
        (7, 3, 2),
        (5, 5, 1),
    ] {
        let c = compare(p, q, layers);
        println!(
            "{{{p},{q}}} L{layers}: tiles={} V={} E={} legs={} perlayer={:?}",
            c.tiles, c.vertices, c.edges, c.legs, c.vertices_per_layer
        );
    }
}

#[test]
fn golden_counts_layers_two() {
    // frozen from the agreement of both constructions
    let c = compare(5, 4, 2);
    assert_eq!(
        (c.tiles, c.vertices, c.edges, c.legs),
        (24, 61, 84, 76),
        "{{5,4}} layers-2 patch golden counts"
    );
    assert_eq!(c.vertices_per_layer, vec![1, 12, 48]);

    let c = compare(4, 5, 2);
    assert_eq!((c.tiles, c.vertices, c.edges, c.legs), (30, 51, 80, 95));

    let c = compare(7, 3, 2);
    assert_eq!((c.tiles, c.vertices, c.edges, c.legs), (15, 61, 75, 33));
}
