//! The explicit vertex and edge tensors: the ququart error-detecting encoding
//! tensor, the candidate edge unitaries, the fixed-area projection, the qubit
//! five-qubit-code pentagon tensor, and the ququart hexacode tensor.
//!
//! Conventions: every vertex tensor has a logical leg labeled `j` and planar
//! legs `i1..iq` in counterclockwise cyclic order. Ququart Weyl operators use
//! the shift/clock convention of [`crate::pauli`].

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::pauli::{PauliString, StabilizerGroup};
use crate::tensor::{isometry_check, Bipartition, DenseTensor, Leg};

pub const LOGICAL_LEG: &str = "j";

pub fn planar_labels(q: usize) -> Vec<String> {
    (1..=q).map(|k| format!("i{k}")).collect()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Named vertex (encoding) tensors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VertexTensorKind {
    /// The ququart error-detecting code on 4 planar legs.
    APrime4112,
    /// The five-qubit-code tensor on 5 planar legs (qubit, perfect).
    Pentagon513,
    /// The ququart hexacode tensor on 5 planar legs (perfect).
    Hexacode614,
}

impl VertexTensorKind {
    pub fn local_dim(self) -> usize {
        match self {
            VertexTensorKind::APrime4112 | VertexTensorKind::Hexacode614 => 4,
            VertexTensorKind::Pentagon513 => 2,
        }
    }

    pub fn planar_arity(self) -> usize {
        match self {
            VertexTensorKind::APrime4112 => 4,
            VertexTensorKind::Pentagon513 | VertexTensorKind::Hexacode614 => 5,
        }
    }

    pub fn cli_name(self) -> &'static str {
        match self {
            VertexTensorKind::APrime4112 => "a4112",
            VertexTensorKind::Pentagon513 => "pentagon513",
            VertexTensorKind::Hexacode614 => "hexacode614",
        }
    }

    pub fn from_cli_name(s: &str) -> Option<Self> {
        match s {
            "a4112" => Some(VertexTensorKind::APrime4112),
            "pentagon513" => Some(VertexTensorKind::Pentagon513),
            "hexacode614" => Some(VertexTensorKind::Hexacode614),
            _ => None,
        }
    }
}

/// Named edge tensors (2-leg unitaries).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeTensorKind {
    Hadamard4,
    Qft4,
    Identity,
}

impl EdgeTensorKind {
    pub fn cli_name(self) -> &'static str {
        match self {
            EdgeTensorKind::Hadamard4 => "hadamard4",
            EdgeTensorKind::Qft4 => "qft4",
            EdgeTensorKind::Identity => "identity",
        }
    }

    pub fn from_cli_name(s: &str) -> Option<Self> {
        match s {
            "hadamard4" => Some(EdgeTensorKind::Hadamard4),
            "qft4" => Some(EdgeTensorKind::Qft4),
            "identity" => Some(EdgeTensorKind::Identity),
            _ => None,
        }
    }
}

pub fn vertex_tensor(kind: VertexTensorKind) -> DenseTensor {
    match kind {
        VertexTensorKind::APrime4112 => a_prime(),
        VertexTensorKind::Pentagon513 => pentagon(),
        VertexTensorKind::Hexacode614 => hexacode(),
    }
}

/// The 5-leg ququart encoding tensor: logical basis slices are the four code
/// states |j̄⟩ = ½ Σ_k |k, k+j, k+2j, k+3j⟩ (indices mod 4), coefficient 1/2.
pub fn a_prime() -> DenseTensor {
    let mut legs = vec![Leg::new(LOGICAL_LEG, 4)];
    legs.extend(planar_labels(4).into_iter().map(|l| Leg::new(l, 4)));
    DenseTensor::from_fn(legs, |ix| {
        let (j, i) = (ix[0], &ix[1..]);
        let k = i[0];
        if i[1] == (k + j) % 4 && i[2] == (k + 2 * j) % 4 && i[3] == (k + 3 * j) % 4 {
            c(0.5, 0.0)
        } else {
            c(0.0, 0.0)
        }
    })
}

/// Stabilizer generators of the ququart code: XXXX, I Z Z² Z, Z Z² Z I.
pub fn a_prime_stabilizers() -> StabilizerGroup {
    StabilizerGroup::new(vec![
        PauliString::from_exponents(&[1, 1, 1, 1], &[0, 0, 0, 0]),
        PauliString::from_exponents(&[0, 0, 0, 0], &[0, 1, 2, 1]),
        PauliString::from_exponents(&[0, 0, 0, 0], &[1, 2, 1, 0]),
    ])
}

/// Logical shift representative I X X² X³ (maps |j̄⟩ → |j̄+1 mod 4⟩).
pub fn logical_x() -> PauliString {
    PauliString::from_exponents(&[0, 1, 2, 3], &[0, 0, 0, 0])
}

/// Logical clock representative I I Z³ Z (maps |j̄⟩ → i^j |j̄⟩).
pub fn logical_z() -> PauliString {
    PauliString::from_exponents(&[0, 0, 0, 0], &[0, 0, 3, 1])
}

/// Site-rotate a string by `shift` (site s → s+shift mod n). All cyclic
/// rotations of the logical representatives are logical operators as well.
pub fn cyclic_shift(p: &PauliString, shift: usize) -> PauliString {
    let n = p.sites();
    let mut x = vec![0u8; n];
    let mut z = vec![0u8; n];
    for s in 0..n {
        x[(s + shift) % n] = p.x[s];
        z[(s + shift) % n] = p.z[s];
    }
    PauliString { x, z, phase: p.phase }
}

/// The 4×4 edge matrices. `hadamard4` is the real symmetric Hadamard with rows
/// (1,1,1,1), (1,−1,1,−1), (1,1,−1,−1), (1,−1,−1,1) scaled by 1/2; `qft4` is
/// the 4-dimensional Fourier matrix i^{jk}/2.
pub fn edge_matrix(kind: EdgeTensorKind) -> DMatrix<Complex64> {
    match kind {
        EdgeTensorKind::Hadamard4 => {
            let rows: [[f64; 4]; 4] = [
                [1.0, 1.0, 1.0, 1.0],
                [1.0, -1.0, 1.0, -1.0],
                [1.0, 1.0, -1.0, -1.0],
                [1.0, -1.0, -1.0, 1.0],
            ];
            DMatrix::from_fn(4, 4, |r, cc| c(rows[r][cc] / 2.0, 0.0))
        }
        EdgeTensorKind::Qft4 => {
            let im = c(0.0, 1.0);
            DMatrix::from_fn(4, 4, |r, cc| 0.5 * im.powu((r * cc) as u32))
        }
        EdgeTensorKind::Identity => DMatrix::identity(4, 4),
    }
}

/// Edge matrix as a 2-leg tensor.
pub fn edge_tensor(kind: EdgeTensorKind, label_a: &str, label_b: &str, dim: usize) -> DenseTensor {
    if kind == EdgeTensorKind::Identity {
        return DenseTensor::identity(label_a, label_b, dim);
    }
    let m = edge_matrix(kind);
    assert_eq!(dim, 4, "named nontrivial edge tensors are 4-dimensional");
    DenseTensor::from_fn(vec![Leg::new(label_a, 4), Leg::new(label_b, 4)], |ix| m[(ix[0], ix[1])])
}

/// Deviation of a matrix from unitarity (max-norm of M†M − 1).
pub fn unitarity_defect(m: &DMatrix<Complex64>) -> f64 {
    let n = m.ncols();
    let g = m.adjoint() * m;
    let mut dev: f64 = 0.0;
    for r in 0..n {
        for cc in 0..n {
            let want = if r == cc { c(1.0, 0.0) } else { c(0.0, 0.0) };
            dev = dev.max((g[(r, cc)] - want).norm());
        }
    }
    dev
}

pub fn symmetry_defect(m: &DMatrix<Complex64>) -> f64 {
    (m - m.transpose()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// The non-orthogonal hadamard variant with third row (1,1,1,−1): its
/// unitarity defect, reported by `verify` as the reason the Sylvester row
/// (1,1,−1,−1) is used instead.
pub fn hadamard4_row3_variant_defect() -> f64 {
    let rows: [[f64; 4]; 4] = [
        [1.0, 1.0, 1.0, 1.0],
        [1.0, -1.0, 1.0, -1.0],
        [1.0, 1.0, 1.0, -1.0],
        [1.0, -1.0, -1.0, 1.0],
    ];
    let m = DMatrix::from_fn(4, 4, |r, cc| c(rows[r][cc] / 2.0, 0.0));
    unitarity_defect(&m)
}

/// Eigenstates of the logical shift on the bulk input: component j is i^{−jk}/2.
/// k = 0 is the uniform superposition used as the fixed-area bulk state.
pub fn x_eigenstate(k: usize) -> Vec<Complex64> {
    let im = c(0.0, 1.0);
    (0..4).map(|j| im.powu((((4 - k % 4) % 4) * j % 4) as u32) * 0.5).collect()
}

/// Eigenstates of the logical clock: the bulk basis vectors.
pub fn z_eigenstate(k: usize) -> Vec<Complex64> {
    (0..4).map(|j| if j == k % 4 { c(1.0, 0.0) } else { c(0.0, 0.0) }).collect()
}

/// Contract the logical leg of an encoding tensor with a bulk state vector.
pub fn project_logical(t: &DenseTensor, state: &[Complex64]) -> DenseTensor {
    let d = t.legs()[t.leg_index(LOGICAL_LEG).expect("logical leg present")].dim;
    assert_eq!(state.len(), d);
    let v = DenseTensor::new(vec![Leg::new(LOGICAL_LEG, d)], state.to_vec()).unwrap();
    DenseTensor::contract(t, &v, &[(LOGICAL_LEG, LOGICAL_LEG)]).unwrap()
}

/// The 4-leg planar tensor from projecting the logical leg onto the uniform
/// shift eigenstate; block-perfect on its planar legs.
pub fn fixed_area_state() -> DenseTensor {
    project_logical(&a_prime(), &x_eigenstate(0))
}

// ---------------------------------------------------------------------------
// Qubit five-qubit-code pentagon tensor
// ---------------------------------------------------------------------------

/// The 6-leg perfect qubit tensor of the five-qubit code: logical leg `j`
/// (dim 2) plus five planar legs (dim 2). Built by projecting |00000⟩ onto the
/// code space of the cyclic generators X Z Z X I and applying the transversal
/// logical flip for the second slice.
pub fn pentagon() -> DenseTensor {
    // stabilizer generators as (x_mask, z_mask) over 5 qubit sites, site 0 = MSB
    let base = (0b10010u32, 0b01100u32); // X Z Z X I
    let gens: Vec<(u32, u32)> = (0..4)
        .map(|k| {
            let rot = |m: u32| -> u32 {
                let mut out = 0u32;
                for s in 0..5 {
                    if m & (1 << (4 - s)) != 0 {
                        out |= 1 << (4 - ((s + k) % 5));
                    }
                }
                out
            };
            (rot(base.0), rot(base.1))
        })
        .collect();
    let dim = 32usize;
    let apply = |v: &Vec<Complex64>, xm: u32, zm: u32| -> Vec<Complex64> {
        let mut out = vec![c(0.0, 0.0); dim];
        for (b, amp) in v.iter().enumerate() {
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            let sign = if ((b as u32) & zm).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            out[(b as u32 ^ xm) as usize] += amp * sign;
        }
        out
    };
    // project |00000⟩ with Π (1+g)/2
    let mut v0 = vec![c(0.0, 0.0); dim];
    v0[0] = c(1.0, 0.0);
    for &(xm, zm) in &gens {
        let gv = apply(&v0, xm, zm);
        for (a, b) in v0.iter_mut().zip(gv) {
            *a = (*a + b) * 0.5;
        }
    }
    let norm = v0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for a in v0.iter_mut() {
        *a /= norm;
    }
    // logical one = X X X X X applied to logical zero
    let v1 = apply(&v0, 0b11111, 0);

    let mut legs = vec![Leg::new(LOGICAL_LEG, 2)];
    legs.extend(planar_labels(5).into_iter().map(|l| Leg::new(l, 2)));
    DenseTensor::from_fn(legs, |ix| {
        let b = ix[1..].iter().fold(0usize, |acc, &i| acc * 2 + i);
        if ix[0] == 0 {
            v0[b]
        } else {
            v1[b]
        }
    })
}

// ---------------------------------------------------------------------------
// Ququart hexacode tensor
// ---------------------------------------------------------------------------

mod gf4 {
    /// GF(4) as indices 0,1,2,3 ↔ 0,1,ω,ω² with ω² = ω+1; addition is XOR.
    pub fn add(a: usize, b: usize) -> usize {
        a ^ b
    }

    pub fn mul(a: usize, b: usize) -> usize {
        const M: [[usize; 4]; 4] = [
            [0, 0, 0, 0],
            [0, 1, 2, 3],
            [0, 2, 3, 1],
            [0, 3, 1, 2],
        ];
        M[a][b]
    }

    pub fn square(a: usize) -> usize {
        mul(a, a)
    }
}

/// The 6-leg perfect ququart tensor: the uniform superposition over the 64
/// codewords (a, b, c, f(1), f(ω), f(ω²)) of f(x) = a·x² + b·x + c over GF(4),
/// a self-dual MDS code of distance 4. Leg `j` is the first coordinate.
pub fn hexacode() -> DenseTensor {
    let mut legs = vec![Leg::new(LOGICAL_LEG, 4)];
    legs.extend(planar_labels(5).into_iter().map(|l| Leg::new(l, 4)));
    DenseTensor::from_fn(legs, |ix| {
        let (a, b, c0) = (ix[0], ix[1], ix[2]);
        let f = |x: usize| gf4::add(gf4::add(gf4::mul(a, gf4::square(x)), gf4::mul(b, x)), c0);
        if ix[3] == f(1) && ix[4] == f(2) && ix[5] == f(3) {
            c(0.125, 0.0)
        } else {
            c(0.0, 0.0)
        }
    })
}

// ---------------------------------------------------------------------------
// Move constraint checks
// ---------------------------------------------------------------------------

/// Check the single-vertex reconstruction constraint: the map from (logical +
/// the planar legs at `unknown` positions) to the remaining planar legs is a
/// proportional isometry.
pub fn single_vertex_constraint(t: &DenseTensor, unknown: &[usize], tol: f64) -> bool {
    let q = t.rank() - 1;
    let labels = planar_labels(q);
    let mut s: Vec<String> = vec![LOGICAL_LEG.to_string()];
    for &u in unknown {
        s.push(labels[u].clone());
    }
    isometry_check(t, &Bipartition { s }, tol)
}

/// Contract two copies of a vertex tensor through an edge matrix on one planar
/// leg each, producing the 2-logical + 2(q−1)-planar pair tensor. Vertex 1
/// keeps labels `j1`, `a1..a{q-1}` (its legs after the contracted one, in
/// cyclic order) and vertex 2 keeps `j2`, `b1..b{q-1}`.
pub fn pair_tensor(t: &DenseTensor, b: &DMatrix<Complex64>) -> DenseTensor {
    let q = t.rank() - 1;
    let labels = planar_labels(q);
    let d = t.legs().last().unwrap().dim;
    let mut v1 = t.clone();
    v1.relabel(LOGICAL_LEG, "j1").unwrap();
    for (pos, l) in labels.iter().enumerate() {
        if pos == 0 {
            v1.relabel(l, "c1").unwrap();
        } else {
            v1.relabel(l, format!("a{pos}")).unwrap();
        }
    }
    let mut v2 = t.clone();
    v2.relabel(LOGICAL_LEG, "j2").unwrap();
    for (pos, l) in labels.iter().enumerate() {
        if pos == 0 {
            v2.relabel(l, "c2").unwrap();
        } else {
            v2.relabel(l, format!("b{pos}")).unwrap();
        }
    }
    let bt = DenseTensor::from_fn(vec![Leg::new("c1", d), Leg::new("c2", d)], |ix| {
        if b.nrows() == d {
            b[(ix[0], ix[1])]
        } else {
            panic!("edge matrix dimension mismatch")
        }
    });
    let half = DenseTensor::contract(&v1, &bt, &[("c1", "c1")]).unwrap();
    DenseTensor::contract(&half, &v2, &[("c2", "c2")]).unwrap()
}

/// Enumerate which 2-subsets of the pair tensor's 6 external planar positions
/// can act as the unknown side of a two-vertex reconstruction move: the map
/// (j1, j2, unknown pair) → (remaining 4 legs) must be a proportional isometry
/// (here square, hence unitary). Positions 0..2 are vertex 1's legs `a1..a3`
/// and 3..5 are vertex 2's `b1..b3`, both counted cyclically away from the
/// contracted edge.
pub fn pair_unitary_partitions(t: &DenseTensor, b: &DMatrix<Complex64>, tol: f64) -> Vec<[usize; 2]> {
    let pt = pair_tensor(t, b);
    let q = t.rank() - 1;
    let ext: Vec<String> = (1..q)
        .map(|k| format!("a{k}"))
        .chain((1..q).map(|k| format!("b{k}")))
        .collect();
    let mut passing = Vec::new();
    for u1 in 0..ext.len() {
        for u2 in (u1 + 1)..ext.len() {
            let s = vec!["j1".to_string(), "j2".to_string(), ext[u1].clone(), ext[u2].clone()];
            if isometry_check(&pt, &Bipartition { s }, tol) {
                passing.push([u1, u2]);
            }
        }
    }
    passing
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{is_block_perfect, is_perfect, k_isometric};
    use nalgebra::DVector;

    fn encoded_state(j: usize) -> DVector<Complex64> {
        let t = project_logical(&a_prime(), &z_eigenstate(j));
        DVector::from_iterator(256, t.data().iter().copied())
    }

    #[test]
    fn a_prime_entries_match_code_states() {
        let t = a_prime();
        assert_eq!(t.get(&[0, 0, 0, 0, 0]), c(0.5, 0.0));
        assert_eq!(t.get(&[1, 1, 2, 3, 0]), c(0.5, 0.0));
        assert_eq!(t.get(&[3, 0, 0, 0, 0]), c(0.0, 0.0));
        // the fourth code state contains |1 0 3 2⟩
        assert_eq!(t.get(&[3, 1, 0, 3, 2]), c(0.5, 0.0));
    }

    #[test]
    fn a_prime_cyclic_invariance_is_exact() {
        let t = a_prime();
        for j in 0..4 {
            for i1 in 0..4 {
                for i2 in 0..4 {
                    for i3 in 0..4 {
                        for i4 in 0..4 {
                            assert_eq!(
                                t.get(&[j, i1, i2, i3, i4]),
                                t.get(&[j, i4, i1, i2, i3]),
                                "cyclic invariance broken at {j},{i1},{i2},{i3},{i4}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn stabilizers_fix_all_code_states() {
        let grp = a_prime_stabilizers();
        assert!(grp.generators_commute());
        for j in 0..4 {
            let psi = encoded_state(j);
            for g in &grp.generators {
                let dev = vmax(&(g.realize() * &psi - &psi));
                assert!(dev < 1e-12, "generator {g} does not fix state {j}: {dev}");
            }
        }
    }

    fn vmax(v: &DVector<Complex64>) -> f64 {
        v.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn logical_operators_act_correctly() {
        let xbar = logical_x();
        let zbar = logical_z();
        let im = c(0.0, 1.0);
        for j in 0..4 {
            let psi = encoded_state(j);
            let xdev = vmax(&(xbar.realize() * &psi - encoded_state((j + 1) % 4)));
            assert!(xdev < 1e-12, "shift logical fails on {j}: {xdev}");
            let zdev = vmax(&(zbar.realize() * &psi - psi.map(|v| v * im.powu(j as u32))));
            assert!(zdev < 1e-12, "clock logical fails on {j}: {zdev}");
        }
        // the site-rotated variants used in the pushing derivation are logical too
        let xbar_rot = cyclic_shift(&xbar, 3); // X X² X³ I
        assert_eq!(xbar_rot.x, vec![1, 2, 3, 0]);
        let zbar_rot = cyclic_shift(&zbar, 2); // Z³ Z I I
        assert_eq!(zbar_rot.z, vec![3, 1, 0, 0]);
        for j in 0..4 {
            let psi = encoded_state(j);
            let xdev = vmax(&(xbar_rot.realize() * &psi - encoded_state((j + 1) % 4)));
            assert!(xdev < 1e-12);
            let zdev = vmax(&(zbar_rot.realize() * &psi - psi.map(|v| v * im.powu(j as u32))));
            assert!(zdev < 1e-12);
        }
    }

    #[test]
    fn edge_matrices_are_unitary_and_symmetric() {
        for kind in [EdgeTensorKind::Hadamard4, EdgeTensorKind::Qft4, EdgeTensorKind::Identity] {
            let m = edge_matrix(kind);
            assert!(unitarity_defect(&m) < 1e-12, "{kind:?} not unitary");
            assert!(symmetry_defect(&m) < 1e-12, "{kind:?} not symmetric");
        }
        let h = edge_matrix(EdgeTensorKind::Hadamard4);
        assert_eq!(h[(0, 0)], c(0.5, 0.0));
        let f = edge_matrix(EdgeTensorKind::Qft4);
        assert!((f[(1, 1)] - c(0.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn row3_variant_is_not_unitary() {
        assert!(hadamard4_row3_variant_defect() > 0.1);
    }

    #[test]
    fn fixed_area_state_is_uniform_code_superposition() {
        let t = fixed_area_state();
        // equals ¼ Σ_{k,m} |k, k+m, k+2m, k+3m⟩
        let mut norm2 = 0.0;
        for i1 in 0..4usize {
            for i2 in 0..4usize {
                for i3 in 0..4usize {
                    for i4 in 0..4usize {
                        let m = (4 + i2 - i1) % 4;
                        let expect = if i3 == (i1 + 2 * m) % 4 && i4 == (i1 + 3 * m) % 4 {
                            c(0.25, 0.0)
                        } else {
                            c(0.0, 0.0)
                        };
                        let got = t.get(&[i1, i2, i3, i4]);
                        assert!((got - expect).norm() < 1e-14);
                        norm2 += got.norm_sqr();
                    }
                }
            }
        }
        assert!((norm2 - 1.0).abs() < 1e-12, "norm² = {norm2}");
    }

    #[test]
    fn fixed_area_state_is_block_perfect_but_not_perfect() {
        let t = fixed_area_state();
        let order = ["i1", "i2", "i3", "i4"];
        assert!(is_block_perfect(&t, &order, 1e-10));
        // recorded: the exhaustive check over all bipartitions decides "not
        // perfect" (the i1/i3 marginal carries off-diagonal correlations).
        assert!(!is_perfect(&t, 1e-10));
    }

    #[test]
    fn a_prime_isometry_classes() {
        let t = a_prime();
        // single-vertex constraint: (logical + any one planar) → other three
        for u in 0..4 {
            assert!(single_vertex_constraint(&t, &[u], 1e-10), "unknown position {u}");
        }
        // 1-isometric on every single leg
        assert!(k_isometric(&t, 1, None, 1e-10));
        // balanced non-adjacent planar split fails: not perfect along planar legs
        assert!(!isometry_check(
            &t,
            &Bipartition::new(["i1".to_string(), "i3".to_string()]),
            1e-10
        ));
        // every projected code state is 1-isometric on the planar legs
        for j in 0..4 {
            let s = project_logical(&t, &z_eigenstate(j));
            assert!(k_isometric(&s, 1, None, 1e-10), "code state {j}");
        }
    }

    #[test]
    fn pentagon_tensor_is_perfect() {
        let t = pentagon();
        assert_eq!(t.rank(), 6);
        assert!(is_perfect(&t, 1e-10));
        assert!(k_isometric(&t, 3, None, 1e-10));
        // 1-leg reduced density of any logical slice is maximally mixed:
        // equivalent to 1-isometry of each encoded state on every planar leg.
        for j in 0..2 {
            let state = project_logical(&t, &[c(1.0 - j as f64, 0.0), c(j as f64, 0.0)]);
            assert!(k_isometric(&state, 1, None, 1e-10));
        }
    }

    #[test]
    fn hexacode_tensor_is_perfect() {
        let t = hexacode();
        assert_eq!(t.rank(), 6);
        assert!(is_perfect(&t, 1e-10));
    }

    #[test]
    fn pair_partitions_exist_for_hadamard_and_qft() {
        let t = a_prime();
        let h = pair_unitary_partitions(&t, &edge_matrix(EdgeTensorKind::Hadamard4), 1e-10);
        let f = pair_unitary_partitions(&t, &edge_matrix(EdgeTensorKind::Qft4), 1e-10);
        let idm = pair_unitary_partitions(&t, &edge_matrix(EdgeTensorKind::Identity), 1e-10);
        println!("hadamard4 pair partitions: {h:?}");
        println!("qft4 pair partitions: {f:?}");
        println!("identity pair partitions: {idm:?}");
        assert!(!h.is_empty() || !f.is_empty());
    }
}
