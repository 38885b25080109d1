//! Discrete-time coined walk lifted from a gadget graph.
//!
//! The pipeline turns the weighted adjacency matrix `A` of a (reweighted)
//! gadget graph into a unitary walk operator in three steps:
//!
//! 1. **Row-normalized decomposition** — split `A` as
//!    `A_{v,w} = ‖A′‖ · conj(Δ_{v,w}) · Δ_{w,v}`, where `A′` is the
//!    entrywise absolute value of `A`, `‖A′‖` its spectral norm, and `Δ` a
//!    matrix with unit row norms built from the Perron vector `δ` of `A′`:
//!    for black `v` and red `w`, `Δ_{v,w} = conj(√A_{v,w})·√(δ_w/δ_v)/√‖A′‖`
//!    and `Δ_{w,v} = √A_{v,w}·√(δ_v/δ_w)/√‖A′‖` (the complex phase is split
//!    evenly between the two orientations; an alternative split that
//!    concentrates the phase on the black rows is also provided).
//!
//! 2. **Lift to directed-edge space** — with `T = Σ_v |ṽ⟩⟨v|`,
//!    `|ṽ⟩ = |v⟩⊗Σ_w Δ_{v,w}|w⟩`, the coin reflection `2Π−1 = 2TT†−1` and
//!    the swap `S` combine into the unitary `U₀ = i(2Π−1)S`. Its spectrum
//!    corresponds exactly to the spectrum of `M = T†ST = A/‖A′‖`: each
//!    eigenvalue `λ` of `M` yields walk eigenvalues `√(1−λ²)+iλ` and
//!    `−√(1−λ²)+iλ`, i.e. phases `arcsin λ` and `π − arcsin λ`.
//!
//! 3. **Oracle phases** — the input is consulted only through `U_x = Õ_x U₀`
//!    where `Õ_x` flips the sign of every edge state `|v,w⟩` whose first
//!    vertex is a leaf carrying a satisfied literal. On the invariant
//!    subspace `R(x)` this equals the walk built from the input-evaluated
//!    graph directly (satisfied leaves become probability sinks), so the
//!    spectrum of `U_x` near the output edge reproduces the spectrum of the
//!    evaluated graph — one multiplication by `U_x` costs exactly one oracle
//!    query.
//!
//! The edge basis is restricted to directed edges present in the graph plus
//! one self-loop state per leaf (the sink images); this span is invariant
//! under `S`, the coin, and the oracle, and contains the output-edge initial
//! state. The full `|V|²` tensor basis is available behind a flag for
//! cross-validation.

use std::collections::HashMap;

use num_complex::Complex64;
use thiserror::Error;

use crate::graph::{GadgetGraph, VertexClass};
use crate::linalg::{self, CMat, CVec, c, cr};
use crate::spanprog::Literal;

/// Absolute tolerance for unitarity / involution / projection residuals.
pub const WALK_TOL: f64 = 1e-10;

/// Everything that can go wrong while lifting a graph to a walk.
#[derive(Debug, Error)]
pub enum WalkError {
    /// The adjacency pattern does not reach every vertex: the Perron vector
    /// of a disconnected graph is not strictly positive, so the
    /// decomposition is undefined.
    #[error("graph is disconnected: vertex {vertex} is unreachable from vertex 0")]
    Disconnected { vertex: usize },
    /// A nonzero entry links two vertices of the same bipartition class.
    #[error("adjacency entry ({u},{v}) links two same-class vertices; the graph must be bipartite")]
    NotBipartite { u: usize, v: usize },
    /// The principal eigenvector came back with a nonpositive entry.
    #[error("principal eigenvector entry {vertex} is not strictly positive")]
    PerronDefect { vertex: usize },
    /// An input bit string was shorter than the variable count.
    #[error("input has {found} bits but the graph reads {needed} variables")]
    InputLength { needed: usize, found: usize },
}

/// How the complex phase of an adjacency entry is distributed between the
/// two directed orientations of the edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseSplit {
    /// Principal square root on both orientations (the default): each side
    /// carries half the phase.
    Balanced,
    /// The black-row entry carries the whole (conjugated) phase, the red-row
    /// entry stays real nonnegative.
    Concentrated,
}

/// Bipartition colors for the decomposition. Black rows take the conjugated
/// root in the balanced split.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Color {
    Black,
    Red,
}

/// Row-normalized decomposition of a weighted adjacency matrix.
#[derive(Debug, Clone)]
pub struct DeltaDecomposition {
    delta: CMat,
    norm_a_prime: f64,
    principal_vector: Vec<f64>,
    coloring: Vec<Color>,
}

impl DeltaDecomposition {
    /// The row-normalized matrix Δ.
    pub fn delta(&self) -> &CMat {
        &self.delta
    }

    /// Spectral norm of the entrywise absolute value of the adjacency.
    pub fn norm_a_prime(&self) -> f64 {
        self.norm_a_prime
    }

    /// Strictly positive Perron vector of the entrywise absolute value.
    pub fn principal_vector(&self) -> &[f64] {
        &self.principal_vector
    }

    /// Bipartition coloring used for the phase split.
    pub fn coloring(&self) -> &[Color] {
        &self.coloring
    }

    /// Rebuilds the adjacency as `‖A′‖ · conj(Δ_{v,w}) · Δ_{w,v}` — the
    /// entrywise product that pairs the two orientations of each edge (this
    /// is what makes the reconstruction Hermitian for complex weights).
    pub fn reconstruct(&self) -> CMat {
        let n = self.delta.nrows();
        CMat::from_fn(n, n, |v, w| {
            self.delta[(v, w)].conj() * self.delta[(w, v)] * cr(self.norm_a_prime)
        })
    }

    /// Worst deviation of a row norm from one.
    pub fn max_row_norm_error(&self) -> f64 {
        let n = self.delta.nrows();
        (0..n).fold(0.0_f64, |m, v| {
            let norm: f64 = (0..n)
                .map(|w| self.delta[(v, w)].norm_sqr())
                .sum::<f64>()
                .sqrt();
            m.max((norm - 1.0).abs())
        })
    }
}

/// First vertex unreachable from vertex 0 along nonzero entries, if any.
fn first_unreachable(a: &CMat) -> Option<usize> {
    let n = a.nrows();
    if n == 0 {
        return None;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for w in 0..n {
            if !seen[w] && a[(v, w)].norm() > 0.0 {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.iter().position(|&s| !s)
}

/// Decomposes a Hermitian bipartite adjacency matrix into a row-normalized
/// factor, explicit coloring + phase-split variant.
pub fn delta_decompose_matrix(
    a: &CMat,
    coloring: &[Color],
    split: PhaseSplit,
) -> Result<DeltaDecomposition, WalkError> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "adjacency must be square");
    assert_eq!(n, coloring.len(), "coloring must label every vertex");

    for v in 0..n {
        for w in 0..n {
            if a[(v, w)].norm() > 0.0 && coloring[v] == coloring[w] {
                return Err(WalkError::NotBipartite { u: v, v: w });
            }
        }
    }
    if let Some(vertex) = first_unreachable(a) {
        return Err(WalkError::Disconnected { vertex });
    }

    // Perron eigenpair of the entrywise absolute value.
    let a_abs = CMat::from_fn(n, n, |v, w| cr(a[(v, w)].norm()));
    let (eigs, vecs) = linalg::hermitian_eig(&a_abs);
    let norm_a_prime = *eigs.last().expect("nonempty spectrum");
    let top = vecs.column(n - 1);
    // Fix the global sign so the dominant entry is positive, then demand
    // strict positivity everywhere (guaranteed for a connected graph).
    let lead = (0..n).max_by(|&i, &j| top[i].re.abs().partial_cmp(&top[j].re.abs()).unwrap());
    let sign = if top[lead.unwrap()].re < 0.0 { -1.0 } else { 1.0 };
    let mut principal = vec![0.0_f64; n];
    for v in 0..n {
        principal[v] = sign * top[v].re;
        if principal[v] <= 0.0 {
            return Err(WalkError::PerronDefect { vertex: v });
        }
    }

    let mut delta = CMat::zeros(n, n);
    for v in 0..n {
        if coloring[v] != Color::Black {
            continue;
        }
        for w in 0..n {
            let entry = a[(v, w)];
            if entry.norm() == 0.0 {
                continue;
            }
            let ratio_vw = (principal[w] / principal[v]).sqrt();
            let (black_entry, red_entry) = match split {
                PhaseSplit::Balanced => {
                    let root = entry.sqrt();
                    (root.conj(), root)
                }
                PhaseSplit::Concentrated => {
                    let mag = entry.norm();
                    (entry.conj() / mag.sqrt(), cr(mag.sqrt()))
                }
            };
            let scale = norm_a_prime.sqrt();
            delta[(v, w)] = black_entry * cr(ratio_vw / scale);
            delta[(w, v)] = red_entry * cr(1.0 / (ratio_vw * scale));
        }
    }

    Ok(DeltaDecomposition {
        delta,
        norm_a_prime,
        principal_vector: principal,
        coloring: coloring.to_vec(),
    })
}

/// Maps the graph's structural bipartition onto decomposition colors: the
/// `B`-side vertices (output head, constraints, leaves) are black.
fn graph_coloring(g: &GadgetGraph) -> Vec<Color> {
    g.coloring()
        .iter()
        .map(|class| match class {
            VertexClass::B => Color::Black,
            VertexClass::A => Color::Red,
        })
        .collect()
}

/// Decomposes a gadget graph's adjacency with the balanced phase split.
pub fn delta_decompose(g: &GadgetGraph) -> Result<DeltaDecomposition, WalkError> {
    delta_decompose_with(g, PhaseSplit::Balanced)
}

/// Decomposes a gadget graph's adjacency with an explicit phase split.
pub fn delta_decompose_with(
    g: &GadgetGraph,
    split: PhaseSplit,
) -> Result<DeltaDecomposition, WalkError> {
    delta_decompose_matrix(g.adjacency(), &graph_coloring(g), split)
}

/// One directed-edge basis state `|from, to⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeState {
    pub from: usize,
    pub to: usize,
}

/// The walk unitary on the directed-edge space, with optional oracle phases.
#[derive(Debug, Clone)]
pub struct WalkOperator {
    basis: Vec<EdgeState>,
    index: HashMap<(usize, usize), usize>,
    swap: Vec<usize>,
    t_op: CMat,
    u0: CMat,
    oracle_diag: Vec<f64>,
    ux: CMat,
    input: Option<Vec<bool>>,
    adjacency: CMat,
    norm_a_prime: f64,
    /// `(leaf vertex, adjacent group vertex, literal)` per input slot.
    leaf_edges: Vec<(usize, usize, Literal)>,
    num_vars: usize,
    full_space: bool,
}

/// Phase-matched comparison report for one walk against its graph.
#[derive(Debug, Clone)]
pub struct WalkSpectrumReport {
    /// Dimension of the invariant subspace spanned by the lifted graph
    /// eigenvectors and their swap images.
    pub r_dimension: usize,
    /// Sorted eigenphases (radians, in (−π, π]) of the walk restricted to
    /// that subspace.
    pub eigenphases: Vec<f64>,
    /// Walk eigenvalues predicted from the evaluated graph's spectrum:
    /// `±√(1−λ²) + iλ` per eigenvalue `λ` of `A(x)/‖A′‖` (one value when
    /// `|λ| = 1`; satisfied leaves contribute their sink eigenvalue 1).
    pub expected_eigenvalues: Vec<Complex64>,
    /// Worst chordal distance in the greedy matching between computed and
    /// predicted walk eigenvalues.
    pub max_phase_mismatch: f64,
    /// Max-entry residual of `T(x)†ST(x)` against `A(x)/‖A′‖` (with the
    /// satisfied-leaf sink diagonal).
    pub m_residual: f64,
    /// `‖(1 − QQ†)·U_x·Q‖`: how far the walk drifts out of the subspace.
    pub invariance_residual: f64,
    /// `‖U_x†U_x − 1‖` (max entry).
    pub unitarity_residual: f64,
    /// `‖((2Π(x)−1)S + S)·(1−QQ†)‖`: the coin walk acts as `−S` off the
    /// invariant subspace.
    pub off_space_residual: f64,
    /// `‖(U_x − i(2Π(x)−1)S)·Q‖`: the oracle-product walk agrees on the
    /// subspace with the walk built from the evaluated graph directly (the
    /// sink construction).
    pub sink_route_residual: f64,
    /// `(phase, |⟨a_O b_O|ψ⟩|²)` per eigenvector of the full restricted-basis
    /// walk, sorted by phase.
    pub output_overlap_by_phase: Vec<(f64, f64)>,
}

impl WalkOperator {
    /// Number of basis states the operator acts on.
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// The ordered directed-edge basis.
    pub fn basis(&self) -> &[EdgeState] {
        &self.basis
    }

    /// Whether the operator lives on the full `|V|²` tensor basis.
    pub fn is_full_space(&self) -> bool {
        self.full_space
    }

    /// The input-independent walk unitary `i(2Π−1)S`.
    pub fn u0(&self) -> &CMat {
        &self.u0
    }

    /// The oracle-dressed walk (equals `u0` before [`apply_oracle`]).
    pub fn ux(&self) -> &CMat {
        &self.ux
    }

    /// Oracle phases (±1) per basis state.
    pub fn oracle_diag(&self) -> &[f64] {
        &self.oracle_diag
    }

    /// The input the oracle was dressed with, if any.
    pub fn input(&self) -> Option<&[bool]> {
        self.input.as_deref()
    }

    /// Spectral norm of the entrywise-absolute adjacency the walk was built
    /// from; the graph/walk eigenvalue dictionary is `θ = arcsin(λ/‖A′‖)`.
    pub fn norm_a_prime(&self) -> f64 {
        self.norm_a_prime
    }

    /// Basis index of the output edge state `|a_O, b_O⟩`.
    pub fn output_edge_index(&self) -> usize {
        self.index[&(0, 1)]
    }

    /// The swap permutation `|v,w⟩ ↦ |w,v⟩` as basis indices.
    pub fn swap_permutation(&self) -> &[usize] {
        &self.swap
    }

    fn swap_matrix(&self) -> CMat {
        let m = self.basis.len();
        let mut s = CMat::zeros(m, m);
        for (col, &row) in self.swap.iter().enumerate() {
            s[(row, col)] = cr(1.0);
        }
        s
    }

    /// The lift isometry for the evaluated graph: columns `|ṽ(x)⟩`, where a
    /// leaf with a satisfied literal points at its own self-loop state.
    fn t_for(&self, x: Option<&[bool]>) -> CMat {
        let mut t = self.t_op.clone();
        if let Some(bits) = x {
            for &(leaf, _, lit) in &self.leaf_edges {
                if lit.eval(bits) {
                    let mut col = CVec::zeros(self.basis.len());
                    col[self.index[&(leaf, leaf)]] = cr(1.0);
                    t.set_column(leaf, &col);
                }
            }
        }
        t
    }

    /// `T(x)† S T(x)` — equal to the evaluated graph adjacency over `‖A′‖`.
    pub fn m_matrix(&self) -> CMat {
        let t = self.t_for(self.input.as_deref());
        t.adjoint() * self.swap_matrix() * t
    }

    /// The evaluated adjacency `A(x)` (satisfied-literal edges zeroed).
    fn evaluated_adjacency(&self) -> CMat {
        let mut a = self.adjacency.clone();
        if let Some(bits) = self.input.as_deref() {
            for &(leaf, group, lit) in &self.leaf_edges {
                if lit.eval(bits) {
                    a[(leaf, group)] = cr(0.0);
                    a[(group, leaf)] = cr(0.0);
                }
            }
        }
        a
    }

    /// What `T(x)†ST(x)` must equal: the evaluated adjacency over `‖A′‖`,
    /// plus a diagonal 1 at every satisfied leaf — the sink's self-loop
    /// state is swap-invariant, so the decoupled leaf surfaces as an
    /// eigenvalue-one direction (walk phase π/2) rather than a zero mode.
    fn expected_m_matrix(&self) -> CMat {
        let mut m = self
            .evaluated_adjacency()
            .map(|z| z / cr(self.norm_a_prime));
        if let Some(bits) = self.input.as_deref() {
            for &(leaf, _, lit) in &self.leaf_edges {
                if lit.eval(bits) {
                    m[(leaf, leaf)] = cr(1.0);
                }
            }
        }
        m
    }

    /// Dresses the walk with oracle phases for input `x`: every edge state
    /// whose first vertex is a leaf with a satisfied literal is negated.
    pub fn apply_oracle(&self, x: &[bool]) -> Result<WalkOperator, WalkError> {
        if x.len() < self.num_vars {
            return Err(WalkError::InputLength {
                needed: self.num_vars,
                found: x.len(),
            });
        }
        let mut flipped = vec![false; self.adjacency.nrows()];
        for &(leaf, _, lit) in &self.leaf_edges {
            if lit.eval(x) {
                flipped[leaf] = true;
            }
        }
        let mut out = self.clone();
        out.oracle_diag = self
            .basis
            .iter()
            .map(|e| if flipped[e.from] { -1.0 } else { 1.0 })
            .collect();
        out.ux = self.u0.clone();
        for (k, &phase) in out.oracle_diag.iter().enumerate() {
            if phase < 0.0 {
                for col in 0..out.ux.ncols() {
                    out.ux[(k, col)] = -out.ux[(k, col)];
                }
            }
        }
        out.input = Some(x.to_vec());
        Ok(out)
    }

    /// Amplitude `⟨a_O b_O| U_x^k |a_O b_O⟩` for `k = 1..=powers` — the
    /// moment sequence of the spectral measure seen by the initial state.
    pub fn output_moments(&self, powers: usize) -> Vec<Complex64> {
        let m = self.basis.len();
        let start = self.output_edge_index();
        let mut state = CVec::zeros(m);
        state[start] = cr(1.0);
        let mut out = Vec::with_capacity(powers);
        for _ in 0..powers {
            state = &self.ux * state;
            out.push(state[start]);
        }
        out
    }

    /// Full spectral comparison of the walk against the evaluated graph.
    pub fn spectrum_report(&self) -> WalkSpectrumReport {
        let m = self.basis.len();
        let n = self.adjacency.nrows();
        let x = self.input.as_deref();

        // Graph side: spectrum of A(x)/‖A′‖ with the sink diagonal.
        let m_graph = self.expected_m_matrix();
        let (graph_eigs, graph_vecs) = linalg::hermitian_eig(&m_graph);

        // Lift side.
        let t = self.t_for(x);
        let s = self.swap_matrix();
        let m_op = t.adjoint() * &s * &t;
        let m_residual = (&m_op - &m_graph).camax();

        // Invariant subspace Q = orthonormal span of {T|λ⟩, ST|λ⟩}.
        let tv = &t * &graph_vecs;
        let stv = &s * &tv;
        let mut stacked = CMat::zeros(m, 2 * n);
        stacked.columns_mut(0, n).copy_from(&tv);
        stacked.columns_mut(n, n).copy_from(&stv);
        let (u, sigma, _) = linalg::jacobi_svd(&stacked);
        let cutoff = linalg::RANK_TOL_REL * sigma.first().copied().unwrap_or(0.0).max(1.0);
        let r_cols: Vec<CVec> = sigma
            .iter()
            .enumerate()
            .filter(|&(_, &sv)| sv > cutoff)
            .map(|(k, _)| u.column(k).into_owned())
            .collect();
        let r_dimension = r_cols.len();
        let q = CMat::from_columns(&r_cols);

        // Restricted walk and its phases.
        let restricted = q.adjoint() * &self.ux * &q;
        let (vals, _, _) = linalg::unitary_eig(&restricted);
        let mut eigenphases: Vec<f64> = vals.iter().map(|z| z.arg()).collect();
        eigenphases.sort_by(|a, b| a.partial_cmp(b).unwrap());

        // Predicted eigenvalues from the graph spectrum.
        let mut expected_eigenvalues = Vec::new();
        for &lam in &graph_eigs {
            let clamped = lam.clamp(-1.0, 1.0);
            let cosine = (1.0 - clamped * clamped).max(0.0).sqrt();
            if 1.0 - clamped.abs() <= 1e-12 {
                expected_eigenvalues.push(c(0.0, clamped));
            } else {
                expected_eigenvalues.push(c(cosine, clamped));
                expected_eigenvalues.push(c(-cosine, clamped));
            }
        }
        let max_phase_mismatch = greedy_circle_mismatch(&vals, &expected_eigenvalues);

        // Residual checks.
        let qq = &q * q.adjoint();
        let proj_out = CMat::identity(m, m) - &qq;
        let invariance_residual = (&proj_out * &self.ux * &q).norm();
        let unitarity_residual =
            (self.ux.adjoint() * &self.ux - CMat::identity(m, m)).camax();
        let pi_x = &t * t.adjoint();
        let coin_walk = (pi_x.scale(2.0) - CMat::identity(m, m)) * &s;
        let off_space_residual = ((&coin_walk + &s) * &proj_out).norm();
        let sink_route_residual =
            ((&self.ux - &(coin_walk * c(0.0, 1.0))) * &q).norm();

        // Output-edge overlap per eigenvector of the (restricted-basis) walk.
        let (full_vals, full_vecs, _) = linalg::unitary_eig(&self.ux);
        let out_idx = self.output_edge_index();
        let mut output_overlap_by_phase: Vec<(f64, f64)> = full_vals
            .iter()
            .enumerate()
            .map(|(k, z)| (z.arg(), full_vecs[(out_idx, k)].norm_sqr()))
            .collect();
        output_overlap_by_phase.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

        WalkSpectrumReport {
            r_dimension,
            eigenphases,
            expected_eigenvalues,
            max_phase_mismatch,
            m_residual,
            invariance_residual,
            unitarity_residual,
            off_space_residual,
            sink_route_residual,
            output_overlap_by_phase,
        }
    }
}

/// Greedy nearest-neighbor matching of two multisets on the unit circle;
/// returns the largest matched chordal distance (∞ on size mismatch).
fn greedy_circle_mismatch(found: &[Complex64], expected: &[Complex64]) -> f64 {
    if found.len() != expected.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; found.len()];
    let mut worst = 0.0_f64;
    for e in expected {
        let mut best: Option<(usize, f64)> = None;
        for (k, z) in found.iter().enumerate() {
            if used[k] {
                continue;
            }
            let d = (z - e).norm();
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((k, d));
            }
        }
        let (k, d) = best.expect("nonempty");
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}

/// Builds the walk operator from a graph and its decomposition.
///
/// With `full_space` unset, the basis is the set of directed edges with
/// nonzero weight plus one self-loop state per leaf; otherwise the full
/// `|V|²` product basis is used (for cross-validation).
pub fn build_walk(g: &GadgetGraph, d: &DeltaDecomposition, full_space: bool) -> WalkOperator {
    let n = g.size();
    assert_eq!(
        n,
        d.delta.nrows(),
        "decomposition and graph must share a vertex set"
    );
    let a = g.adjacency();

    let mut basis = Vec::new();
    let mut index = HashMap::new();
    let push = |basis: &mut Vec<EdgeState>,
                    index: &mut HashMap<(usize, usize), usize>,
                    from: usize,
                    to: usize| {
        index.entry((from, to)).or_insert_with(|| {
            basis.push(EdgeState { from, to });
            basis.len() - 1
        });
    };
    if full_space {
        for v in 0..n {
            for w in 0..n {
                push(&mut basis, &mut index, v, w);
            }
        }
    } else {
        for v in 0..n {
            for w in 0..n {
                if a[(v, w)].norm() > 0.0 {
                    push(&mut basis, &mut index, v, w);
                }
            }
        }
        for edge in g.input_edges() {
            let leaf = g.leaf_index(edge.leaf);
            push(&mut basis, &mut index, leaf, leaf);
        }
    }
    let m = basis.len();

    let swap: Vec<usize> = basis
        .iter()
        .map(|e| {
            *index
                .get(&(e.to, e.from))
                .expect("edge basis must be closed under swap")
        })
        .collect();

    let mut t_op = CMat::zeros(m, n);
    for (k, e) in basis.iter().enumerate() {
        let dv = d.delta[(e.from, e.to)];
        if dv.norm() > 0.0 {
            t_op[(k, e.from)] = dv;
        }
    }

    let mut s_mat = CMat::zeros(m, m);
    for (col, &row) in swap.iter().enumerate() {
        s_mat[(row, col)] = cr(1.0);
    }
    let pi = &t_op * t_op.adjoint();
    let u0 = (pi.scale(2.0) - CMat::identity(m, m)) * &s_mat * c(0.0, 1.0);

    let leaf_edges: Vec<(usize, usize, Literal)> = g
        .input_edges()
        .iter()
        .map(|edge| (g.leaf_index(edge.leaf), g.group_index(edge.group), edge.literal))
        .collect();

    WalkOperator {
        ux: u0.clone(),
        u0,
        oracle_diag: vec![1.0; m],
        basis,
        index,
        swap,
        t_op,
        input: None,
        adjacency: a.clone(),
        norm_a_prime: d.norm_a_prime,
        leaf_edges,
        num_vars: g.num_vars(),
        full_space,
    }
}
