//! Code networks on tilings: tensor assembly, greedy contraction, boundary
//! states, correlators, and encoding-isometry checks.
//!
//! Wire naming: vertex v's logical leg is `J{v}`; edge e carries two wire
//! labels `E{e}a` / `E{e}b` joined by the edge tensor; boundary leg b is
//! `B{b}`. Bra copies in sandwich contractions rename every internal label
//! `l → l*`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::codes::{
    self, edge_matrix, edge_tensor, project_logical, unitarity_defect, vertex_tensor, EdgeTensorKind,
    VertexTensorKind, LOGICAL_LEG,
};
use crate::flow::CutGraph;
use crate::tensor::{isometry_report, Bipartition, DenseTensor, Leg, TensorError};
use crate::tiling::{HyperbolicTiling, SlotContent};
use crate::DEFAULT_DIM_CAP;

#[derive(Debug, Error)]
pub enum NetworkError {
    #[error("tensor size {size} exceeds the dimension cap {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("vertex tensor has {tensor_arity} planar legs but the tiling needs {q}")]
    ArityMismatch { tensor_arity: usize, q: usize },
    #[error("edge tensor must be unitary and symmetric (defect {0:.2e})")]
    BadEdgeTensor(f64),
    #[error("network needs {0}")]
    BadConfig(String),
    #[error("wire `{0}` is shared by more than two tensors")]
    OversharedWire(String),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Per-vertex bulk configuration.
#[derive(Debug, Clone)]
pub enum BulkConfig {
    Open,
    Projected(Vec<Complex64>),
}

impl BulkConfig {
    pub fn is_open(&self) -> bool {
        matches!(self, BulkConfig::Open)
    }
}

/// A tiling dressed with vertex and edge tensors plus a bulk configuration.
#[derive(Debug, Clone)]
pub struct CodeNetwork {
    pub tiling: HyperbolicTiling,
    pub vertex_kind: VertexTensorKind,
    pub edge_kind: EdgeTensorKind,
    pub bulk: Vec<BulkConfig>,
}

impl CodeNetwork {
    pub fn new(
        tiling: HyperbolicTiling,
        vertex_kind: VertexTensorKind,
        edge_kind: EdgeTensorKind,
    ) -> Result<Self, NetworkError> {
        if vertex_kind.planar_arity() != tiling.q {
            return Err(NetworkError::ArityMismatch {
                tensor_arity: vertex_kind.planar_arity(),
                q: tiling.q,
            });
        }
        if edge_kind != EdgeTensorKind::Identity && vertex_kind.local_dim() != 4 {
            return Err(NetworkError::BadConfig(
                "nontrivial edge tensors require ququart vertex tensors".into(),
            ));
        }
        if edge_kind != EdgeTensorKind::Identity {
            let m = edge_matrix(edge_kind);
            let defect = unitarity_defect(&m).max(codes::symmetry_defect(&m));
            if defect > 1e-10 {
                return Err(NetworkError::BadEdgeTensor(defect));
            }
        }
        let bulk = vec![BulkConfig::Open; tiling.vertex_count()];
        Ok(CodeNetwork { tiling, vertex_kind, edge_kind, bulk })
    }

    /// Project every bulk leg onto the same state.
    pub fn with_uniform_bulk(mut self, state: &[Complex64]) -> Self {
        for b in self.bulk.iter_mut() {
            *b = BulkConfig::Projected(state.to_vec());
        }
        self
    }

    pub fn set_bulk(&mut self, v: usize, config: BulkConfig) {
        self.bulk[v] = config;
    }

    pub fn local_dim(&self) -> usize {
        self.vertex_kind.local_dim()
    }

    pub fn boundary_label(b: usize) -> String {
        format!("B{b}")
    }

    pub fn logical_label(v: usize) -> String {
        format!("J{v}")
    }

    /// The vertex tensor with network wire labels, bulk leg applied.
    fn vertex_instance(&self, v: usize) -> DenseTensor {
        let base = vertex_tensor(self.vertex_kind);
        let mut t = match &self.bulk[v] {
            BulkConfig::Open => {
                let mut t = base;
                t.relabel(LOGICAL_LEG, Self::logical_label(v)).unwrap();
                t
            }
            BulkConfig::Projected(state) => project_logical(&base, state),
        };
        let q = self.tiling.q;
        for k in 0..q {
            let new = match self.tiling.slots(v)[k] {
                SlotContent::Edge(e) => {
                    let edge = self.tiling.edges()[e];
                    if edge.a == v {
                        format!("E{e}a")
                    } else {
                        format!("E{e}b")
                    }
                }
                SlotContent::Leg(b) => Self::boundary_label(b),
                SlotContent::Empty => unreachable!("all slots are assigned"),
            };
            t.relabel(&format!("i{}", k + 1), new).unwrap();
        }
        t
    }

    /// All ket tensors of the network (vertex tensors plus edge tensors).
    pub fn ket_tensors(&self) -> Vec<DenseTensor> {
        let d = self.local_dim();
        let mut out: Vec<DenseTensor> = (0..self.tiling.vertex_count())
            .map(|v| self.vertex_instance(v))
            .collect();
        for (e, _) in self.tiling.edges().iter().enumerate() {
            out.push(edge_tensor(self.edge_kind, &format!("E{e}a"), &format!("E{e}b"), d));
        }
        out
    }

    /// External wire labels: boundary legs then open logical legs.
    pub fn external_labels(&self) -> Vec<String> {
        let mut out: Vec<String> = (0..self.tiling.boundary_len())
            .map(Self::boundary_label)
            .collect();
        for (v, b) in self.bulk.iter().enumerate() {
            if b.is_open() {
                out.push(Self::logical_label(v));
            }
        }
        out
    }

    pub fn wire_network(&self) -> Result<WireNetwork, NetworkError> {
        WireNetwork::new(self.ket_tensors(), self.external_labels())
    }
}

// ---------------------------------------------------------------------------
// Greedy contraction engine
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub struct ContractionOptions {
    pub cap: usize,
}

impl Default for ContractionOptions {
    fn default() -> Self {
        ContractionOptions { cap: DEFAULT_DIM_CAP }
    }
}

fn shared_labels(a: &DenseTensor, b: &DenseTensor) -> Vec<String> {
    a.legs()
        .iter()
        .filter(|l| b.legs().iter().any(|m| m.label == l.label))
        .map(|l| l.label.clone())
        .collect()
}

fn pair_output_size(a: &DenseTensor, b: &DenseTensor, shared: &[String]) -> usize {
    let shared_dim: usize = shared
        .iter()
        .map(|l| a.legs()[a.leg_index(l).unwrap()].dim)
        .product();
    (a.size() / shared_dim) * (b.size() / shared_dim)
}

/// Contract a list of tensors to a single tensor, greedily picking the pair
/// with the smallest result first (deterministic tie-breaking by index).
pub fn contract_all(mut tensors: Vec<DenseTensor>, opts: ContractionOptions) -> Result<DenseTensor, NetworkError> {
    if tensors.is_empty() {
        return Ok(DenseTensor::scalar(Complex64::new(1.0, 0.0)));
    }
    for t in &tensors {
        if t.size() > opts.cap {
            return Err(NetworkError::CapExceeded { size: t.size(), cap: opts.cap });
        }
    }
    while tensors.len() > 1 {
        let mut best: Option<(usize, usize, usize, bool)> = None; // (i, j, size, connected)
        for i in 0..tensors.len() {
            for j in (i + 1)..tensors.len() {
                let shared = shared_labels(&tensors[i], &tensors[j]);
                let connected = !shared.is_empty();
                let size = pair_output_size(&tensors[i], &tensors[j], &shared);
                let better = match best {
                    None => true,
                    Some((_, _, bsize, bconn)) => {
                        (connected && !bconn) || (connected == bconn && size < bsize)
                    }
                };
                if better {
                    best = Some((i, j, size, connected));
                }
            }
        }
        let (i, j, size, _) = best.unwrap();
        if size > opts.cap {
            return Err(NetworkError::CapExceeded { size, cap: opts.cap });
        }
        let b = tensors.remove(j);
        let a = tensors.remove(i);
        let shared = shared_labels(&a, &b);
        let pairs: Vec<(&str, &str)> = shared.iter().map(|l| (l.as_str(), l.as_str())).collect();
        let prod = DenseTensor::contract(&a, &b, &pairs)?;
        tensors.push(prod);
    }
    Ok(tensors.pop().unwrap())
}

/// Contract pairwise in a caller-given sequential order (for order-independence
/// tests; folds tensors[order[0]] with order[1], then order[2], ...).
pub fn contract_in_order(tensors: &[DenseTensor], order: &[usize], opts: ContractionOptions) -> Result<DenseTensor, NetworkError> {
    let mut acc = tensors[order[0]].clone();
    for &k in &order[1..] {
        let shared = shared_labels(&acc, &tensors[k]);
        let pairs: Vec<(&str, &str)> = shared.iter().map(|l| (l.as_str(), l.as_str())).collect();
        let size = pair_output_size(&acc, &tensors[k], &shared);
        if size > opts.cap {
            return Err(NetworkError::CapExceeded { size, cap: opts.cap });
        }
        acc = DenseTensor::contract(&acc, &tensors[k], &pairs)?;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Wire networks: tensors + external legs, with sandwich/Gram machinery
// ---------------------------------------------------------------------------

/// A collection of tensors whose shared labels are wires; `externals` are the
/// open legs (each appearing on exactly one tensor).
#[derive(Debug, Clone)]
pub struct WireNetwork {
    pub tensors: Vec<DenseTensor>,
    pub externals: Vec<String>,
}

impl WireNetwork {
    pub fn new(tensors: Vec<DenseTensor>, externals: Vec<String>) -> Result<Self, NetworkError> {
        let mut count: std::collections::HashMap<&str, usize> = std::collections::HashMap::new();
        for t in &tensors {
            for l in t.legs() {
                *count.entry(l.label.as_str()).or_insert(0) += 1;
            }
        }
        for (label, n) in &count {
            if *n > 2 {
                return Err(NetworkError::OversharedWire(label.to_string()));
            }
        }
        for e in &externals {
            if count.get(e.as_str()).copied().unwrap_or(0) != 1 {
                return Err(NetworkError::BadConfig(format!("external wire `{e}` must be open")));
            }
        }
        // every label appearing once must be declared external
        for (label, n) in &count {
            if *n == 1 && !externals.iter().any(|e| e == label) {
                return Err(NetworkError::BadConfig(format!("dangling wire `{label}` not declared external")));
            }
        }
        Ok(WireNetwork { tensors, externals })
    }

    /// Attach an extra tensor (e.g. a bulk state on logical wires). Its labels
    /// that match currently-external wires become internal.
    pub fn attach(&mut self, t: DenseTensor) -> Result<(), NetworkError> {
        for l in t.legs() {
            match self.externals.iter().position(|e| *e == l.label) {
                Some(k) => {
                    self.externals.remove(k);
                }
                None => {
                    return Err(NetworkError::BadConfig(format!(
                        "attached tensor leg `{}` is not an external wire",
                        l.label
                    )));
                }
            }
        }
        self.tensors.push(t);
        Ok(())
    }

    /// Contract everything; the result's legs are the external wires.
    pub fn contract(&self, opts: ContractionOptions) -> Result<DenseTensor, NetworkError> {
        contract_all(self.tensors.clone(), opts)
    }

    /// ⟨ψ|∏ops|ψ⟩ where ψ is the full contraction over external wires and each
    /// op is a matrix inserted on one external wire. Unlisted externals are
    /// traced between ket and bra.
    pub fn sandwich(&self, ops: &[(String, DMatrix<Complex64>)], opts: ContractionOptions) -> Result<Complex64, NetworkError> {
        let mut tensors = self.tensors.clone();
        let op_labels: Vec<&String> = ops.iter().map(|(l, _)| l).collect();
        for t in &self.tensors {
            // bra copy: conjugate; internal labels and op-site externals get `*`
            let bra = t.conj_map(|l| {
                let is_external = self.externals.iter().any(|e| e == l);
                let has_op = op_labels.iter().any(|m| *m == l);
                if is_external && !has_op {
                    l.to_string()
                } else {
                    format!("{l}*")
                }
            });
            tensors.push(bra);
        }
        for (label, m) in ops {
            let d = m.nrows();
            let t = DenseTensor::from_fn(
                vec![Leg::new(format!("{label}*"), d), Leg::new(label.clone(), d)],
                |ix| m[(ix[0], ix[1])],
            );
            tensors.push(t);
        }
        let out = contract_all(tensors, opts)?;
        assert_eq!(out.rank(), 0, "sandwich must close all wires");
        Ok(out.data()[0])
    }

    /// Squared norm of the state on the external wires.
    pub fn norm_sqr(&self, opts: ContractionOptions) -> Result<f64, NetworkError> {
        Ok(self.sandwich(&[], opts)?.re)
    }

    /// The wire graph for minimum cuts: node per tensor, one extra node per
    /// external wire. Edge ids follow wire discovery order: internal wires in
    /// tensor-scan order, then external wires in `externals` order.
    pub fn cut_graph(&self) -> (CutGraph, Vec<WireId>) {
        let mut g = CutGraph::new(self.tensors.len() + self.externals.len());
        let mut wires: Vec<WireId> = Vec::new();
        let mut seen: std::collections::HashMap<String, usize> = std::collections::HashMap::new();
        for (ti, t) in self.tensors.iter().enumerate() {
            for l in t.legs() {
                if self.externals.contains(&l.label) {
                    continue;
                }
                match seen.get(&l.label) {
                    None => {
                        seen.insert(l.label.clone(), ti);
                    }
                    Some(&tj) => {
                        g.add_edge(tj, ti);
                        wires.push(WireId { label: l.label.clone(), dim: l.dim });
                    }
                }
            }
        }
        for (k, e) in self.externals.iter().enumerate() {
            let owner = self
                .tensors
                .iter()
                .position(|t| t.legs().iter().any(|l| &l.label == e))
                .expect("external wire has an owner");
            let dim = self.tensors[owner].legs()[self.tensors[owner].leg_index(e).unwrap()].dim;
            g.add_edge(owner, self.tensors.len() + k);
            wires.push(WireId { label: e.clone(), dim });
        }
        (g, wires)
    }
}

#[derive(Debug, Clone)]
pub struct WireId {
    pub label: String,
    pub dim: usize,
}

// ---------------------------------------------------------------------------
// Network-level operations
// ---------------------------------------------------------------------------

/// Contract the full network: open legs are the boundary legs plus any open
/// logical legs.
pub fn contract_network(net: &CodeNetwork, opts: ContractionOptions) -> Result<DenseTensor, NetworkError> {
    let open_dims: usize = net
        .external_labels()
        .iter()
        .map(|_| net.local_dim())
        .product();
    if open_dims > opts.cap {
        return Err(NetworkError::CapExceeded { size: open_dims, cap: opts.cap });
    }
    contract_all(net.ket_tensors(), opts)
}

/// The boundary state of a fully projected network (all bulk legs projected),
/// normalized to unit norm. The raw contraction's norm is a fixed constant of
/// the network because the tensors realize proportional isometries; it carries
/// no physical content and is divided out here.
pub fn boundary_state(net: &CodeNetwork, opts: ContractionOptions) -> Result<DenseTensor, NetworkError> {
    if net.bulk.iter().any(|b| b.is_open()) {
        return Err(NetworkError::BadConfig("boundary_state needs all bulk legs projected".into()));
    }
    let raw = contract_network(net, opts)?;
    let n = raw.frobenius_norm();
    if n == 0.0 {
        return Err(NetworkError::BadConfig("projected network contracted to zero".into()));
    }
    Ok(raw.scale(Complex64::new(1.0 / n, 0.0)))
}

/// ⟨ψ|∏O_i|ψ⟩ / ⟨ψ|ψ⟩ for single-site operators on distinct boundary legs of a
/// fully projected network, evaluated by sandwich contraction (the boundary
/// state itself is never materialized).
pub fn correlator(
    net: &CodeNetwork,
    ops: &[(usize, DMatrix<Complex64>)],
    opts: ContractionOptions,
) -> Result<Complex64, NetworkError> {
    if net.bulk.iter().any(|b| b.is_open()) {
        return Err(NetworkError::BadConfig("correlator needs all bulk legs projected".into()));
    }
    {
        let mut sites: Vec<usize> = ops.iter().map(|(s, _)| *s).collect();
        sites.sort_unstable();
        sites.dedup();
        if sites.len() != ops.len() {
            return Err(NetworkError::BadConfig("correlator sites must be distinct".into()));
        }
    }
    let wn = net.wire_network()?;
    let labeled: Vec<(String, DMatrix<Complex64>)> = ops
        .iter()
        .map(|(s, m)| (CodeNetwork::boundary_label(*s), m.clone()))
        .collect();
    let num = wn.sandwich(&labeled, opts)?;
    let den = wn.norm_sqr(opts)?;
    Ok(num / Complex64::new(den, 0.0))
}

/// How an encoding-isometry verdict was reached.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case", tag = "method")]
pub enum IsometryEvidence {
    /// Bulk dimension exceeds boundary dimension: impossible by counting.
    CountingImpossible { bulk_legs: usize, boundary_legs: usize },
    /// Dense V†V test.
    Dense { deviation: f64 },
    /// Constancy of ⟨ψ|V†V|ψ⟩ over seeded random product bulk states (the
    /// tensors realize proportional isometries, so the constant need not be 1).
    RandomizedNorms { samples: usize, constant: f64, max_relative_deviation: f64 },
}

use serde::Serialize;

/// Check V†V ∝ 1 for the bulk-to-boundary map of a network with all bulk legs
/// open. Uses the dense check when the full map fits under the cap, otherwise
/// norm preservation on seeded random product bulk states.
pub fn encoding_isometry_check(
    net: &CodeNetwork,
    tol: f64,
    opts: ContractionOptions,
) -> Result<(bool, IsometryEvidence), NetworkError> {
    if net.bulk.iter().any(|b| !b.is_open()) {
        return Err(NetworkError::BadConfig("encoding_isometry_check needs all bulk legs open".into()));
    }
    let (bulk_legs, boundary_legs) = net.tiling.dof_counting();
    if bulk_legs > boundary_legs {
        return Ok((false, IsometryEvidence::CountingImpossible { bulk_legs, boundary_legs }));
    }
    let d = net.local_dim();
    let total_bits = (bulk_legs + boundary_legs) as u32;
    let fits_dense = (d as f64).powi(total_bits as i32) <= opts.cap as f64;
    if fits_dense {
        let v = contract_network(net, opts)?;
        let s: Vec<String> = (0..net.tiling.vertex_count())
            .map(CodeNetwork::logical_label)
            .collect();
        let report = isometry_report(&v, &Bipartition { s }, tol);
        return Ok((report.passes, IsometryEvidence::Dense { deviation: report.deviation }));
    }
    // randomized: ⟨ψ|V†V|ψ⟩ must be the same constant for every normalized
    // product bulk state when V†V ∝ 1
    let samples = 12usize;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut constant = 0.0f64;
    let mut max_rel: f64 = 0.0;
    for k in 0..samples {
        let mut probe = net.clone();
        for v in 0..probe.tiling.vertex_count() {
            let mut state: Vec<Complex64> = (0..d)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let norm = state.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            for z in state.iter_mut() {
                *z /= norm;
            }
            probe.set_bulk(v, BulkConfig::Projected(state));
        }
        let wn = probe.wire_network()?;
        let n2 = wn.norm_sqr(opts)?;
        if k == 0 {
            if n2 <= 0.0 {
                return Ok((false, IsometryEvidence::RandomizedNorms {
                    samples,
                    constant: n2,
                    max_relative_deviation: f64::INFINITY,
                }));
            }
            constant = n2;
        } else {
            max_rel = max_rel.max((n2 - constant).abs() / constant);
        }
    }
    let ok = max_rel <= tol.max(1e-9);
    Ok((ok, IsometryEvidence::RandomizedNorms { samples, constant, max_relative_deviation: max_rel }))
}
