//! Generalized Pauli (Weyl) algebra over ℤ₄ ququarts, stabilizer groups, and
//! operator pushing through edge tensors.
//!
//! Conventions: the shift acts as X|k⟩ = |k+1 mod 4⟩ and the clock as
//! Z|k⟩ = i^k|k⟩. A string stores per-site exponents (x, z) meaning X^x Z^z on
//! that site, plus a global phase exponent of i. Multiplication picks up the
//! commutation factor i^{z_a·x_b} per site.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tensor::DenseTensor;

pub const QUDIT_DIM: usize = 4;

#[derive(Debug, Error)]
pub enum PauliError {
    #[error("site count mismatch: {0} vs {1}")]
    SiteMismatch(usize, usize),
    #[error("conjugation by this edge tensor leaves the Weyl group")]
    NotWeyl,
    #[error("no stabilizer/logical product cancels the operator on its support")]
    NoPush,
    #[error("parse error: {0}")]
    Parse(String),
}

/// A Weyl string i^phase · ⊗_s X^{x_s} Z^{z_s} on `sites()` ququarts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString {
    pub x: Vec<u8>,
    pub z: Vec<u8>,
    /// Exponent of the global phase i^phase, in ℤ₄.
    pub phase: u8,
}

impl PauliString {
    pub fn identity(sites: usize) -> Self {
        PauliString { x: vec![0; sites], z: vec![0; sites], phase: 0 }
    }

    /// Single-site operator X^x Z^z placed at `site` of an n-site register.
    pub fn single(sites: usize, site: usize, x: u8, z: u8) -> Self {
        let mut p = PauliString::identity(sites);
        p.x[site] = x % 4;
        p.z[site] = z % 4;
        p
    }

    /// Build from per-site exponent slices.
    pub fn from_exponents(x: &[u8], z: &[u8]) -> Self {
        assert_eq!(x.len(), z.len());
        PauliString {
            x: x.iter().map(|v| v % 4).collect(),
            z: z.iter().map(|v| v % 4).collect(),
            phase: 0,
        }
    }

    pub fn sites(&self) -> usize {
        self.x.len()
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x.iter().all(|&v| v == 0) && self.z.iter().all(|&v| v == 0)
    }

    /// Sites on which the string acts non-trivially.
    pub fn support(&self) -> Vec<usize> {
        (0..self.sites())
            .filter(|&s| self.x[s] != 0 || self.z[s] != 0)
            .collect()
    }

    pub fn weight(&self) -> usize {
        self.support().len()
    }

    pub fn mul(a: &PauliString, b: &PauliString) -> Result<PauliString, PauliError> {
        if a.sites() != b.sites() {
            return Err(PauliError::SiteMismatch(a.sites(), b.sites()));
        }
        let mut phase = (a.phase + b.phase) % 4;
        let mut x = vec![0u8; a.sites()];
        let mut z = vec![0u8; a.sites()];
        for s in 0..a.sites() {
            phase = (phase + a.z[s] * b.x[s]) % 4;
            x[s] = (a.x[s] + b.x[s]) % 4;
            z[s] = (a.z[s] + b.z[s]) % 4;
        }
        Ok(PauliString { x, z, phase })
    }

    pub fn pow(&self, k: u8) -> PauliString {
        let mut out = PauliString::identity(self.sites());
        for _ in 0..(k % 4) {
            out = PauliString::mul(&out, self).expect("same register");
        }
        out
    }

    pub fn inverse(&self) -> PauliString {
        let mut phase = (4 - self.phase % 4) % 4;
        for s in 0..self.sites() {
            phase = (phase + self.x[s] * self.z[s]) % 4;
        }
        PauliString {
            x: self.x.iter().map(|&v| (4 - v % 4) % 4).collect(),
            z: self.z.iter().map(|&v| (4 - v % 4) % 4).collect(),
            phase,
        }
    }

    /// Symplectic commutation exponent: a·b = i^k · b·a.
    pub fn commutation_exponent(a: &PauliString, b: &PauliString) -> u8 {
        let mut k = 0u8;
        for s in 0..a.sites() {
            k = (k + a.z[s] * b.x[s] + 4 - (a.x[s] * b.z[s]) % 4) % 4;
        }
        k % 4
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        PauliString::commutation_exponent(self, other) == 0
    }

    /// Restriction to a subset of sites (by original site index, ascending order
    /// of the given slice).
    pub fn restrict(&self, sites: &[usize]) -> PauliString {
        PauliString {
            x: sites.iter().map(|&s| self.x[s]).collect(),
            z: sites.iter().map(|&s| self.z[s]).collect(),
            phase: self.phase,
        }
    }

    /// The 4×4 matrix of X^x Z^z.
    pub fn site_matrix(x: u8, z: u8) -> DMatrix<Complex64> {
        let im = Complex64::new(0.0, 1.0);
        DMatrix::from_fn(QUDIT_DIM, QUDIT_DIM, |r, c| {
            if r == (c + x as usize) % QUDIT_DIM {
                im.powu((z as u32) * (c as u32))
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Dense matrix realization on 4^n dimensions, site 0 most significant.
    pub fn realize(&self) -> DMatrix<Complex64> {
        let im = Complex64::new(0.0, 1.0);
        let mut m = DMatrix::from_element(1, 1, im.powu(self.phase as u32));
        for s in 0..self.sites() {
            m = m.kronecker(&PauliString::site_matrix(self.x[s], self.z[s]));
        }
        m
    }

    /// Matrix realization as a 2n-leg tensor with given output/input labels per site.
    pub fn realize_tensor(&self, out_labels: &[String], in_labels: &[String]) -> DenseTensor {
        assert_eq!(out_labels.len(), self.sites());
        assert_eq!(in_labels.len(), self.sites());
        let m = self.realize();
        let n = self.sites();
        let mut legs = Vec::with_capacity(2 * n);
        for l in out_labels {
            legs.push(crate::tensor::Leg::new(l.clone(), QUDIT_DIM));
        }
        for l in in_labels {
            legs.push(crate::tensor::Leg::new(l.clone(), QUDIT_DIM));
        }
        DenseTensor::from_fn(legs, |idx| {
            let (out_idx, in_idx) = idx.split_at(n);
            let r = out_idx.iter().fold(0usize, |acc, &i| acc * QUDIT_DIM + i);
            let c = in_idx.iter().fold(0usize, |acc, &i| acc * QUDIT_DIM + i);
            m[(r, c)]
        })
    }
}

impl fmt::Display for PauliString {
    /// Text form like `i^1 · X1 Z2^3`; sites are 1-based; identity is `I`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for s in 0..self.sites() {
            if self.x[s] > 0 {
                if self.x[s] == 1 {
                    parts.push(format!("X{}", s + 1));
                } else {
                    parts.push(format!("X{}^{}", s + 1, self.x[s]));
                }
            }
            if self.z[s] > 0 {
                if self.z[s] == 1 {
                    parts.push(format!("Z{}", s + 1));
                } else {
                    parts.push(format!("Z{}^{}", s + 1, self.z[s]));
                }
            }
        }
        let body = if parts.is_empty() { "I".to_string() } else { parts.join(" ") };
        if self.phase != 0 {
            write!(f, "i^{} · {}", self.phase, body)
        } else {
            write!(f, "{}", body)
        }
    }
}

impl PauliString {
    /// Parse the `Display` format back into a string on `sites` ququarts.
    pub fn parse(text: &str, sites: usize) -> Result<PauliString, PauliError> {
        let mut p = PauliString::identity(sites);
        let text = text.trim();
        let mut rest = text;
        if let Some(stripped) = rest.strip_prefix("i^") {
            let (ph, tail) = stripped
                .split_once('·')
                .ok_or_else(|| PauliError::Parse("expected `·` after phase".into()))?;
            let k: u8 = ph
                .trim()
                .parse()
                .map_err(|_| PauliError::Parse(format!("bad phase exponent `{}`", ph.trim())))?;
            p.phase = k % 4;
            rest = tail.trim();
        }
        if rest == "I" || rest.is_empty() {
            return Ok(p);
        }
        for tok in rest.split_whitespace() {
            let bytes = tok.as_bytes();
            let kind = bytes[0];
            if kind != b'X' && kind != b'Z' {
                return Err(PauliError::Parse(format!("unknown operator token `{tok}`")));
            }
            let body = &tok[1..];
            let (site_str, exp_str) = match body.split_once('^') {
                Some((s, e)) => (s, e),
                None => (body, "1"),
            };
            let site: usize = site_str
                .parse()
                .map_err(|_| PauliError::Parse(format!("bad site in `{tok}`")))?;
            let exp: u8 = exp_str
                .parse()
                .map_err(|_| PauliError::Parse(format!("bad exponent in `{tok}`")))?;
            if site == 0 || site > sites {
                return Err(PauliError::Parse(format!("site {site} out of range 1..={sites}")));
            }
            let s = site - 1;
            if kind == b'X' {
                p.x[s] = (p.x[s] + exp % 4) % 4;
            } else {
                p.z[s] = (p.z[s] + exp % 4) % 4;
            }
        }
        Ok(p)
    }
}

/// A stabilizer group given by its generators on a common register.
#[derive(Debug, Clone)]
pub struct StabilizerGroup {
    pub generators: Vec<PauliString>,
}

impl StabilizerGroup {
    pub fn new(generators: Vec<PauliString>) -> Self {
        StabilizerGroup { generators }
    }

    pub fn sites(&self) -> usize {
        self.generators.first().map_or(0, |g| g.sites())
    }

    /// All generators mutually commute (exact symplectic check).
    pub fn generators_commute(&self) -> bool {
        for (i, a) in self.generators.iter().enumerate() {
            for b in &self.generators[i + 1..] {
                if !a.commutes_with(b) {
                    return false;
                }
            }
        }
        true
    }

    /// Enumerate all products g1^{a1}···gk^{ak}, a_i ∈ ℤ₄.
    pub fn elements(&self) -> Vec<PauliString> {
        let mut out = vec![PauliString::identity(self.sites())];
        for g in &self.generators {
            let mut next = Vec::with_capacity(out.len() * 4);
            for e in &out {
                let mut acc = e.clone();
                next.push(acc.clone());
                for _ in 0..3 {
                    acc = PauliString::mul(&acc, g).expect("same register");
                    next.push(acc.clone());
                }
            }
            out = next;
        }
        out
    }
}

/// Which side of the edge tensor the operator starts on. For symmetric edge
/// tensors both directions agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PushDirection {
    Forward,
    Backward,
}

/// Result of pushing a single-site operator through an edge tensor: the
/// exact identity op·B = B·(scalar·op_out) holds with op_out = B†·op·B; the
/// push succeeds when that conjugation stays inside the Weyl group.
#[derive(Debug, Clone)]
pub struct PushedThroughEdge {
    pub op_out: PauliString,
    pub scalar: Complex64,
}

/// Push a single-site Weyl operator through a unitary edge matrix `b`, from
/// the index adjacent to one endpoint tensor to the other. The conjugated
/// matrix is matched exactly against all 4² Weyl candidates (up to a unit
/// scalar, which is returned).
pub fn push_through_edge(
    op: &PauliString,
    b: &DMatrix<Complex64>,
    direction: PushDirection,
) -> Result<PushedThroughEdge, PauliError> {
    assert_eq!(op.sites(), 1, "edge pushing acts on single-site operators");
    let op_mat = op.realize();
    let target = match direction {
        PushDirection::Forward => b.adjoint() * &op_mat * b,
        PushDirection::Backward => b * &op_mat * b.adjoint(),
    };
    for x in 0..4u8 {
        for z in 0..4u8 {
            let cand = PauliString::single(1, 0, x, z);
            let w = cand.realize();
            // scalar from the first structurally nonzero entry of w
            let mut scalar = None;
            'outer: for r in 0..QUDIT_DIM {
                for c in 0..QUDIT_DIM {
                    if w[(r, c)].norm() > 0.5 {
                        scalar = Some(target[(r, c)] / w[(r, c)]);
                        break 'outer;
                    }
                }
            }
            let s = scalar.expect("weyl matrices have unit entries");
            if (s.norm() - 1.0).abs() > 1e-9 {
                continue;
            }
            let dev = max_modulus(&(&target - w.map(|v| v * s)));
            if dev < 1e-9 {
                return Ok(PushedThroughEdge { op_out: cand, scalar: s });
            }
        }
    }
    Err(PauliError::NotWeyl)
}

/// Result of cancelling an operator on its support by stabilizer/logical
/// multiplication: `op_in · combined = residual` with `residual` supported on
/// the complement, and `combined` a stabilizer times `logical^logical_power`.
#[derive(Debug, Clone)]
pub struct PushedThroughCode {
    /// The residual operator on the full register (support on complement only).
    pub residual: PauliString,
    /// The group element used (stabilizer · logical power).
    pub combined: PauliString,
    /// Number of logical-generator powers used.
    pub logical_power: u8,
}

/// Search products of `stabilizers` (all ℤ₄ powers) and powers of an optional
/// logical generator that cancel `op` on `support`, returning the residual on
/// the complementary sites.
pub fn push_through_code(
    op: &PauliString,
    stabilizers: &StabilizerGroup,
    logical: Option<&PauliString>,
    support: &[usize],
) -> Result<PushedThroughCode, PauliError> {
    let n = op.sites();
    let log_powers: u8 = if logical.is_some() { 4 } else { 1 };
    for d in 0..log_powers {
        let log_part = match logical {
            Some(l) => l.pow(d),
            None => PauliString::identity(n),
        };
        for e in stabilizers.elements() {
            let g = PauliString::mul(&e, &log_part)?;
            let combined = PauliString::mul(op, &g)?;
            if support.iter().all(|&s| combined.x[s] == 0 && combined.z[s] == 0) {
                return Ok(PushedThroughCode { residual: combined, combined: g, logical_power: d });
            }
        }
    }
    Err(PauliError::NoPush)
}

/// Largest modulus among the entries.
pub fn max_modulus(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
