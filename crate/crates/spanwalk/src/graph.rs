//! Weighted bipartite gadget graphs mirroring span programs.
//!
//! A normalized span program on coordinates `{O} ∪ C` with grouped columns
//! `J` and literal occurrences ("slots") `I` unfolds into a graph on
//! `2 + |C| + |J| + |I|` vertices:
//!
//! * an output pair `a_O — b_O` joined by the weight-one output edge,
//! * one `b`-side vertex per constraint coordinate,
//! * one `a`-side vertex per grouped column,
//! * one `b`-side leaf per literal occurrence, joined to its column's vertex
//!   by a weight-one input edge labeled with that literal.
//!
//! The Hermitian adjacency matrix carries the column entries between the
//! coordinate vertices (`b` side) and the column vertices (`a` side).
//! Evaluating on an input deletes every input edge whose literal is
//! satisfied; that ties the graph's kernel to the program's value.  Solutions
//! of the eigenvalue-zero vertex equations at every vertex except `a_O` reach
//! `a_O` exactly when the program accepts and `b_O` exactly when it rejects
//! (the two rails never mix), which [`zero_eigenvector_support`] quantifies.
//! For small `λ > 0` the boundary ratio `r_O = a_O/b_O` of the solution with
//! `b_O = 1` measures the same complexity; [`output_ratio`] evaluates it by
//! an explicit inversion formula and cross-checks a direct linear solve.
//!
//! Graphs compose by edge surgery: replacing an input edge by a child
//! graph's output edge (positive occurrence) or by the child's complement
//! graph (negated occurrence, a two-edge inverter at the output plus a
//! complemented shadow leaf below every child leaf).  [`compose_graphs`]
//! performs the surgery directly on adjacency matrices and reproduces, entry
//! for entry, the graph built from the composed span program, which makes
//! the two construction routes independently checkable.

use crate::linalg::{self, CMat, CVec, cr};
use crate::spanprog::{Literal, SpanProgram};
use num_complex::Complex64;
use serde::Serialize;
use std::fmt;
use thiserror::Error;

/// Default relative kernel band: eigenvalues within `1e-8·‖A‖` of zero count
/// as kernel.  Desk-scale separations are ≥ 1e-2, so the band is safe.
pub const KERNEL_TOL_REL: f64 = 1e-8;
/// Default squared-amplitude threshold below which eigenvector support on a
/// vertex counts as absent.
pub const SUPP_TOL: f64 = 1e-8;

/// Errors from graph construction, surgery, and ratio evaluation.
#[derive(Debug, Error)]
pub enum GraphError {
    /// Graph construction requires the target in the form `(1, 0, …, 0)`.
    #[error("span program must be normalized (target (1, 0, …, 0)) before building its graph")]
    NotNormalized,
    /// An input bitstring does not cover every variable the graph reads.
    #[error("input has {found} bits but the graph reads x1..x{needed}")]
    InputLength { needed: usize, found: usize },
    /// Output reweighting needs positive parameters.
    #[error("reweight parameters must be positive: adv = {adv}, eps_w = {eps_w}")]
    InvalidWeight { adv: f64, eps_w: f64 },
    /// One boundary ratio per literal occurrence is required.
    #[error("expected one input ratio per slot ({expected}), found {found}")]
    SlotCount { expected: usize, found: usize },
    /// The ratio formula is defined for `λ > 0` only.
    #[error("output ratio needs λ > 0, got {lambda}")]
    LambdaRange { lambda: f64 },
    /// `λ` fell outside the validity range of the inversion formula.
    #[error("λ = {lambda} is outside the validity range: {what} is singular")]
    RatioSingular { lambda: f64, what: &'static str },
    /// Composition needs one wire per variable.
    #[error("composition needs one wire per variable: graph reads {expected}, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    /// Graph surgery identifies weight-one output edges; reweight afterwards.
    #[error("graph surgery requires a unit output edge (found weight {weight}); reweight after composing")]
    CompositionWeight { weight: f64 },
    /// Graph surgery needs the full input-edge set; apply inputs afterwards.
    #[error("graph surgery requires the full input-edge set; apply inputs after composing")]
    ComposedAfterApply,
}

/// Bipartition class of a vertex.  Every edge joins an `A` vertex to a `B`
/// vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum VertexClass {
    A,
    B,
}

/// Canonical position of a vertex inside its graph.
///
/// Indices are block-local: `Constraint(c)` is the `c`-th constraint
/// coordinate, `Group(j)` the `j`-th column vertex, `Input(i)` the leaf of
/// the `i`-th literal occurrence.  Together with the fixed block order
/// `[AOut, BOut, constraints…, groups…, inputs…]` the role determines the
/// vertex's index, so roles are unique within a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Role {
    AOut,
    BOut,
    Constraint(usize),
    Group(usize),
    Input(usize),
}

impl Role {
    /// Which side of the bipartition the role occupies.
    pub fn class(self) -> VertexClass {
        match self {
            Role::AOut | Role::Group(_) => VertexClass::A,
            Role::BOut | Role::Constraint(_) | Role::Input(_) => VertexClass::B,
        }
    }

    fn base_label(self) -> String {
        match self {
            Role::AOut => "aO".into(),
            Role::BOut => "bO".into(),
            Role::Constraint(c) => format!("bC{c}"),
            Role::Group(j) => format!("aJ{j}"),
            Role::Input(i) => format!("bI{i}"),
        }
    }
}

/// A vertex: canonical role (unique per graph) plus a hierarchical label that
/// records how surgery produced it (`s3/bO` = output vertex of the child
/// grafted at slot 3; `n/aJ0`, `nb/bI1` = vertices introduced by
/// complementation).  Labels are for humans and exports; identity is the
/// role.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct VertexId {
    pub role: Role,
    pub label: String,
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// A weight-one input edge joining the leaf of slot `leaf` to the vertex of
/// column `group`, labeled with the literal whose truth deletes it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InputEdge {
    pub group: usize,
    pub leaf: usize,
    pub literal: Literal,
}

/// The weighted bipartite graph of a span program (or of a composition of
/// such graphs), with vertices in the canonical block order
/// `[a_O, b_O, constraints…, columns…, leaves…]`.
#[derive(Debug, Clone)]
pub struct GadgetGraph {
    vertices: Vec<VertexId>,
    adjacency: CMat,
    output_weight: f64,
    input_edges: Vec<InputEdge>,
    n_constraints: usize,
    n_groups: usize,
    n_leaves: usize,
    num_vars: usize,
}

impl GadgetGraph {
    /// Number of vertices.
    pub fn size(&self) -> usize {
        2 + self.n_constraints + self.n_groups + self.n_leaves
    }

    /// Hermitian adjacency matrix.
    pub fn adjacency(&self) -> &CMat {
        &self.adjacency
    }

    /// Vertices in index order.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// Current weight of the output edge `(a_O, b_O)`.
    pub fn output_weight(&self) -> f64 {
        self.output_weight
    }

    /// Surviving input edges, in slot order.
    pub fn input_edges(&self) -> &[InputEdge] {
        &self.input_edges
    }

    /// Number of constraint vertices.
    pub fn num_constraints(&self) -> usize {
        self.n_constraints
    }

    /// Number of column vertices.
    pub fn num_groups(&self) -> usize {
        self.n_groups
    }

    /// Number of leaf vertices (slots), whether or not their edges survive.
    pub fn num_leaves(&self) -> usize {
        self.n_leaves
    }

    /// Number of input variables the graph reads.
    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Index of the output vertex `a_O`.
    pub fn a_out_index(&self) -> usize {
        0
    }

    /// Index of the output vertex `b_O`.
    pub fn b_out_index(&self) -> usize {
        1
    }

    /// Index of the `c`-th constraint vertex.
    pub fn constraint_index(&self, c: usize) -> usize {
        2 + c
    }

    /// Index of the `j`-th column vertex.
    pub fn group_index(&self, j: usize) -> usize {
        2 + self.n_constraints + j
    }

    /// Index of the `i`-th leaf vertex.
    pub fn leaf_index(&self, i: usize) -> usize {
        2 + self.n_constraints + self.n_groups + i
    }

    /// Bipartition classes in vertex order; every edge is bichromatic.
    pub fn coloring(&self) -> Vec<VertexClass> {
        self.vertices.iter().map(|v| v.role.class()).collect()
    }

    /// The block `[rows: b_O, constraints] × [cols: a_O, columns]` of the
    /// adjacency matrix — the program data in matrix form: first row
    /// `(w | A_OJ)`, remaining rows `(0 | A_CJ)`.
    pub fn program_block(&self) -> CMat {
        let rows = 1 + self.n_constraints;
        let cols = 1 + self.n_groups;
        CMat::from_fn(rows, cols, |r, c| {
            let row = if r == 0 { 1 } else { 1 + r };
            let col = if c == 0 { 0 } else { self.group_index(c - 1) };
            self.adjacency[(row, col)]
        })
    }

    /// Deletes every input edge whose literal is satisfied by `x`, returning
    /// the evaluated graph.  Vertices are kept; only edges (and their
    /// [`InputEdge`] records) disappear.
    pub fn apply_input(&self, x: &[bool]) -> Result<GadgetGraph, GraphError> {
        if x.len() < self.num_vars {
            return Err(GraphError::InputLength {
                needed: self.num_vars,
                found: x.len(),
            });
        }
        let mut applied = self.clone();
        applied.input_edges.retain(|edge| {
            if edge.literal.eval(x) {
                let b = self.leaf_index(edge.leaf);
                let a = self.group_index(edge.group);
                applied.adjacency[(b, a)] = cr(0.0);
                applied.adjacency[(a, b)] = cr(0.0);
                false
            } else {
                true
            }
        });
        Ok(applied)
    }

    /// Replaces the output-edge weight by `eps_w / √adv`, leaving every
    /// other weight unchanged.
    pub fn reweight_output(&self, adv: f64, eps_w: f64) -> Result<GadgetGraph, GraphError> {
        if !(adv > 0.0) || !(eps_w > 0.0) {
            return Err(GraphError::InvalidWeight { adv, eps_w });
        }
        let w = eps_w / adv.sqrt();
        let mut out = self.clone();
        out.adjacency[(0, 1)] = cr(w);
        out.adjacency[(1, 0)] = cr(w);
        out.output_weight = w;
        Ok(out)
    }

    /// Full eigendecomposition summary with default tolerances
    /// ([`KERNEL_TOL_REL`], [`SUPP_TOL`]).
    pub fn spectrum_report(&self) -> SpectrumReport {
        self.spectrum_report_with(KERNEL_TOL_REL, SUPP_TOL)
    }

    /// Full eigendecomposition summary.
    ///
    /// Eigenvalues within `kernel_tol_rel·‖A‖` of zero form the numerical
    /// kernel; `zero_support_a/b` are the squared norms of the projections of
    /// the output-vertex indicators onto it.  `gap_witness` is the smallest
    /// `|λ|` among non-kernel eigenvectors whose squared support on the
    /// output pair exceeds `supp_tol`.
    pub fn spectrum_report_with(&self, kernel_tol_rel: f64, supp_tol: f64) -> SpectrumReport {
        let (eigenvalues, vectors) = linalg::hermitian_eig(&self.adjacency);
        let norm = eigenvalues.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let kernel_threshold = kernel_tol_rel * norm;
        let mut zero_support_a = 0.0;
        let mut zero_support_b = 0.0;
        let mut kernel_dim = 0;
        let mut gap_witness: Option<f64> = None;
        for (k, &lam) in eigenvalues.iter().enumerate() {
            let sa = vectors[(0, k)].norm_sqr();
            let sb = vectors[(1, k)].norm_sqr();
            if lam.abs() <= kernel_threshold {
                zero_support_a += sa;
                zero_support_b += sb;
                kernel_dim += 1;
            } else if sa + sb > supp_tol {
                gap_witness = Some(gap_witness.map_or(lam.abs(), |g: f64| g.min(lam.abs())));
            }
        }
        SpectrumReport {
            eigenvalues,
            zero_support_a,
            zero_support_b,
            kernel_dim,
            kernel_threshold,
            gap_witness,
            support_tol: supp_tol,
        }
    }

    /// Exportable edge list: vertex labels plus one record per undirected
    /// edge, weighted by the adjacency entry at `(min, max)` index order.
    pub fn edge_list(&self) -> EdgeListExport {
        let mut edges = Vec::new();
        for u in 0..self.size() {
            for v in (u + 1)..self.size() {
                let w = self.adjacency[(u, v)];
                if w != Complex64::default() {
                    edges.push(EdgeExport {
                        u: self.vertices[u].label.clone(),
                        v: self.vertices[v].label.clone(),
                        w: [w.re, w.im],
                    });
                }
            }
        }
        EdgeListExport {
            vertices: self.vertices.iter().map(|v| v.label.clone()).collect(),
            edges,
        }
    }

    /// Graphviz DOT rendering (undirected; literals annotate input edges).
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph gadget {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let shape = match v.role.class() {
                VertexClass::A => "circle",
                VertexClass::B => "box",
            };
            out.push_str(&format!(
                "  v{i} [label=\"{}\", shape={shape}];\n",
                v.label
            ));
        }
        let mut literal_of: std::collections::HashMap<(usize, usize), Literal> =
            std::collections::HashMap::new();
        for edge in &self.input_edges {
            let b = self.leaf_index(edge.leaf);
            let a = self.group_index(edge.group);
            literal_of.insert((a.min(b), a.max(b)), edge.literal);
        }
        for u in 0..self.size() {
            for v in (u + 1)..self.size() {
                let w = self.adjacency[(u, v)];
                if w != Complex64::default() {
                    let weight = if w.im == 0.0 {
                        format!("{}", w.re)
                    } else {
                        format!("{}{:+}i", w.re, w.im)
                    };
                    let label = match literal_of.get(&(u, v)) {
                        Some(lit) => format!("{weight} [{lit}]"),
                        None => weight,
                    };
                    out.push_str(&format!("  v{u} -- v{v} [label=\"{label}\"];\n"));
                }
            }
        }
        out.push_str("}\n");
        out
    }

    fn require_surgery_ready(&self) -> Result<(), GraphError> {
        if self.output_weight != 1.0 {
            return Err(GraphError::CompositionWeight {
                weight: self.output_weight,
            });
        }
        if self.input_edges.len() != self.n_leaves {
            return Err(GraphError::ComposedAfterApply);
        }
        Ok(())
    }
}

fn assemble_vertices(
    a_out_label: String,
    b_out_label: String,
    constraint_labels: Vec<String>,
    group_labels: Vec<String>,
    leaf_labels: Vec<String>,
) -> Vec<VertexId> {
    let mut vertices = Vec::with_capacity(2 + constraint_labels.len() + group_labels.len() + leaf_labels.len());
    vertices.push(VertexId {
        role: Role::AOut,
        label: a_out_label,
    });
    vertices.push(VertexId {
        role: Role::BOut,
        label: b_out_label,
    });
    for (c, label) in constraint_labels.into_iter().enumerate() {
        vertices.push(VertexId {
            role: Role::Constraint(c),
            label,
        });
    }
    for (j, label) in group_labels.into_iter().enumerate() {
        vertices.push(VertexId {
            role: Role::Group(j),
            label,
        });
    }
    for (i, label) in leaf_labels.into_iter().enumerate() {
        vertices.push(VertexId {
            role: Role::Input(i),
            label,
        });
    }
    vertices
}

/// Builds the gadget graph of a normalized span program.
///
/// Adjacency convention: the entry at `(b-side row, a-side column)` is the
/// program entry itself and the transposed entry is its conjugate, so the
/// block `[b_O; constraints] × [a_O; columns]` reads `[w | A_OJ; 0 | A_CJ]`
/// with `w = 1`.  Input edges all have weight one.
pub fn build_gadget_graph(p: &SpanProgram) -> Result<GadgetGraph, GraphError> {
    if !p.is_normalized() {
        return Err(GraphError::NotNormalized);
    }
    let n_constraints = p.dim() - 1;
    let n_groups = p.num_groups();
    let slots: Vec<(usize, Literal)> = p
        .literal_sets()
        .iter()
        .enumerate()
        .flat_map(|(j, set)| set.iter().map(move |&lit| (j, lit)))
        .collect();
    let n_leaves = slots.len();
    let n = 2 + n_constraints + n_groups + n_leaves;
    let group_base = 2 + n_constraints;
    let leaf_base = group_base + n_groups;

    let mut adjacency = CMat::zeros(n, n);
    adjacency[(1, 0)] = cr(1.0);
    adjacency[(0, 1)] = cr(1.0);
    for j in 0..n_groups {
        let gj = group_base + j;
        let top = p.columns()[(0, j)];
        adjacency[(1, gj)] = top;
        adjacency[(gj, 1)] = top.conj();
        for c in 0..n_constraints {
            let entry = p.columns()[(c + 1, j)];
            adjacency[(2 + c, gj)] = entry;
            adjacency[(gj, 2 + c)] = entry.conj();
        }
    }
    let mut input_edges = Vec::with_capacity(n_leaves);
    for (i, &(j, literal)) in slots.iter().enumerate() {
        let b = leaf_base + i;
        let a = group_base + j;
        adjacency[(b, a)] = cr(1.0);
        adjacency[(a, b)] = cr(1.0);
        input_edges.push(InputEdge {
            group: j,
            leaf: i,
            literal,
        });
    }

    let vertices = assemble_vertices(
        Role::AOut.base_label(),
        Role::BOut.base_label(),
        (0..n_constraints).map(|c| Role::Constraint(c).base_label()).collect(),
        (0..n_groups).map(|j| Role::Group(j).base_label()).collect(),
        (0..n_leaves).map(|i| Role::Input(i).base_label()).collect(),
    );

    Ok(GadgetGraph {
        vertices,
        adjacency,
        output_weight: 1.0,
        input_edges,
        n_constraints,
        n_groups,
        n_leaves,
        num_vars: p.num_inputs(),
    })
}

/// Eigendecomposition summary of a gadget graph.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    /// All eigenvalues, ascending.  Bipartiteness makes them symmetric about
    /// zero.
    pub eigenvalues: Vec<f64>,
    /// Squared norm of the projection of the `a_O` indicator onto the
    /// numerical kernel.
    pub zero_support_a: f64,
    /// Squared norm of the projection of the `b_O` indicator onto the
    /// numerical kernel.
    pub zero_support_b: f64,
    /// Dimension of the numerical kernel.
    pub kernel_dim: usize,
    /// Absolute eigenvalue threshold that delimited the kernel.
    pub kernel_threshold: f64,
    /// Smallest non-kernel `|λ|` whose eigenvector has squared output-pair
    /// support above `support_tol`, if any.
    pub gap_witness: Option<f64>,
    /// Support threshold used for `gap_witness`.
    pub support_tol: f64,
}

/// Which output vertex carries the zero-eigenvector support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OutputSide {
    AOut,
    BOut,
}

impl fmt::Display for OutputSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputSide::AOut => "aO",
            OutputSide::BOut => "bO",
        })
    }
}

/// Result of maximizing output-vertex overlap over the zero-eigenvalue
/// solution space.
#[derive(Debug, Clone, Serialize)]
pub struct ZeroSupport {
    /// The larger of the two normalized squared overlaps.
    pub ab_o: f64,
    /// Which output vertex attains it.
    pub side: OutputSide,
    /// Normalized squared overlap achievable on `a_O`.
    pub support_a: f64,
    /// Normalized squared overlap achievable on `b_O`.
    pub support_b: f64,
}

/// Maximal normalized squared output-vertex overlap of a zero-eigenvalue
/// solution, with unit leaf weights (plain norm).
///
/// The solution space consists of all vectors satisfying the eigenvalue-zero
/// equation at every vertex except `a_O` of the evaluated graph; it always
/// contains support on exactly one output vertex (`a_O` when the program
/// accepts, `b_O` when it rejects), and `ab_o · (wsize_x + κ) ≥ 1` for a
/// small measured constant `κ`.
pub fn zero_eigenvector_support(g: &GadgetGraph, x: &[bool]) -> Result<ZeroSupport, GraphError> {
    zero_eigenvector_support_weighted(g, x, &vec![1.0; g.input_edges.len()])
}

/// Like [`zero_eigenvector_support`], but in the weighted norm that charges
/// slot `i` (its leaf vertex **and** its column vertex) an extra diagonal
/// weight `1/α_i − 1`; `alphas` pairs with `g.input_edges()` in order, and
/// all-ones weights recover the plain norm.
pub fn zero_eigenvector_support_weighted(
    g: &GadgetGraph,
    x: &[bool],
    alphas: &[f64],
) -> Result<ZeroSupport, GraphError> {
    if alphas.len() != g.input_edges.len() {
        return Err(GraphError::SlotCount {
            expected: g.input_edges.len(),
            found: alphas.len(),
        });
    }
    let applied = g.apply_input(x)?;
    let n = g.size();
    // All eigenvalue-zero equations except the one at a_O (row 0).
    let constraints = applied.adjacency.rows(1, n - 1).into_owned();
    let basis = linalg::kernel_basis(&constraints);
    let mut weight = CMat::identity(n, n);
    for (edge, &alpha) in g.input_edges.iter().zip(alphas) {
        let extra = cr(1.0 / alpha - 1.0);
        let b = g.leaf_index(edge.leaf);
        let a = g.group_index(edge.group);
        weight[(b, b)] += extra;
        weight[(a, a)] += extra;
    }
    let support_a = linalg::max_weighted_overlap(&basis, &weight, 0);
    let support_b = linalg::max_weighted_overlap(&basis, &weight, 1);
    let (ab_o, side) = if support_a >= support_b {
        (support_a, OutputSide::AOut)
    } else {
        (support_b, OutputSide::BOut)
    };
    Ok(ZeroSupport {
        ab_o,
        side,
        support_a,
        support_b,
    })
}

/// Output boundary ratio of a gadget graph at eigenvalue `λ`, by the closed
/// inversion formula and by a direct linear solve.
#[derive(Debug, Clone, Serialize)]
pub struct OutputRatio {
    /// `r_O = a_O/b_O` from the closed formula.
    pub r_o: f64,
    /// The same ratio from the direct solve of the vertex equations.
    pub r_direct: f64,
    /// Complexity reading: `r_O/λ` when the output is false (small positive
    /// ratio), `−1/(λ·r_O)` when true (large negative ratio).
    pub s_o: f64,
    /// Whether the ratio signals a true output.
    pub is_true: bool,
    /// The probe eigenvalue.
    pub lambda: f64,
}

/// The two-edge inverter's exact ratio transfer: `r_O = λ − 1/r_in`.
pub fn not_gate_ratio(r_in: f64, lambda: f64) -> f64 {
    lambda - 1.0 / r_in
}

/// Boundary ratios for bare leaves under input `x`: a satisfied literal's
/// edge is absent (`r_i = +∞`), an unsatisfied literal's leaf equation gives
/// `r_i = λ·s_leaf` (complexity `s_leaf`, normally 1).
pub fn leaf_ratios(
    p: &SpanProgram,
    x: &[bool],
    lambda: f64,
    s_leaf: f64,
) -> Result<Vec<f64>, GraphError> {
    if x.len() < p.num_inputs() {
        return Err(GraphError::InputLength {
            needed: p.num_inputs(),
            found: x.len(),
        });
    }
    Ok(p.literal_sets()
        .iter()
        .flatten()
        .map(|lit| {
            if lit.eval(x) {
                f64::INFINITY
            } else {
                lambda * s_leaf
            }
        })
        .collect())
}

/// Evaluates the output boundary ratio `r_O = a_O/b_O` of the graph of `p`
/// at eigenvalue `λ > 0`, given one boundary ratio per literal occurrence
/// (`+∞` for an absent edge; see [`leaf_ratios`]).
///
/// The solution fixes `b_O = 1` and satisfies the eigenvalue equation at
/// every internal vertex, with each leaf equation replaced by the boundary
/// relation `b_i = a_j / r_i`.  Two routes are computed.  The closed formula
///
/// ```text
/// r_O = λ + ⟨o| (r̃ − (1/λ)·r̃ A_CJ† (1 + (1/λ)·A_CJ r̃ A_CJ†)⁻¹ A_CJ r̃) |o⟩
/// ```
///
/// with `|o⟩ = A_OJ†` and `r̃_j = (−λ + Σ_{i∈I_j} 1/r_i)⁻¹` is evaluated in
/// its algebraically identical push-through form
/// `r_O = λ + λ·⟨o|(A_CJ†A_CJ + diag(λ·Σ 1/r_i) − λ²)⁻¹|o⟩`, which keeps
/// every matrix entry at the scale of the λ→0 limit instead of mixing
/// `1/λ²` and `O(1)` scales inside the inverted block.  The cross-check
/// solves the full vertex equations of the graph (unknowns `a_O`, `b_C`,
/// `a_J`, and the surviving leaves) as one dense linear system and reads
/// `a_O` off directly.
///
/// As `λ → 0` the ratio converges to the bare-leaf graph complexity: the
/// unweighted minimum-norm acceptance witness on true inputs, and the
/// harmonically-weighted rejection witness plus its own squared length
/// (`min Σ_j Ĝ_j|v_j†w′|² + ‖w′‖²`) on false inputs.
pub fn output_ratio(
    p: &SpanProgram,
    input_ratios: &[f64],
    lambda: f64,
) -> Result<OutputRatio, GraphError> {
    if !(lambda > 0.0) {
        return Err(GraphError::LambdaRange { lambda });
    }
    if !p.is_normalized() {
        return Err(GraphError::NotNormalized);
    }
    let groups = p.num_groups();
    let n_constraints = p.dim() - 1;
    let total_slots: usize = p.literal_sets().iter().map(|s| s.len()).sum();
    if input_ratios.len() != total_slots {
        return Err(GraphError::SlotCount {
            expected: total_slots,
            found: input_ratios.len(),
        });
    }

    // Per-column inverse-ratio sums, consuming the slot ratios in order.
    let mut sum_inv = vec![0.0_f64; groups];
    let mut cursor = 0;
    for (j, set) in p.literal_sets().iter().enumerate() {
        for _ in set {
            sum_inv[j] += 1.0 / input_ratios[cursor];
            cursor += 1;
        }
        if !sum_inv[j].is_finite() {
            return Err(GraphError::RatioSingular {
                lambda,
                what: "slot ratio sum",
            });
        }
    }

    let o = CVec::from_fn(groups, |j, _| p.columns()[(0, j)].conj());
    let a_cj = p.columns().rows(1, n_constraints).into_owned();

    // Closed formula in push-through form; the Gram system is solved against
    // its factored representation so that the deliberate λ²-near-singularity
    // survives refinement intact.
    let d: Vec<f64> = (0..groups)
        .map(|j| lambda * sum_inv[j] - lambda * lambda)
        .collect();
    let y = linalg::refined_gram_solve(&a_cj, &d, &o).ok_or(GraphError::RatioSingular {
        lambda,
        what: "column-space inverse",
    })?;
    let quad = (o.adjoint() * &y)[(0, 0)];
    // The quadratic form is Hermitian, so its imaginary part is pure rounding
    // noise (kept loose: extreme λ can push κ(w) past the refinement range).
    debug_assert!(quad.im.abs() <= 1e-6 * (1.0 + quad.re.abs()));
    let r_o = lambda + lambda * quad.re;

    // Independent cross-check: dense solve of the vertex equations with
    // b_O = 1.  Unknowns [a_O | b_C | a_J | b_I(finite slots)]; each leaf
    // contributes its boundary relation in whichever orientation keeps the
    // coefficients bounded by one.
    let finite_slots: Vec<usize> = (0..total_slots)
        .filter(|&i| input_ratios[i].is_finite())
        .collect();
    let n_unknowns = 1 + n_constraints + groups + finite_slots.len();
    let mut sys = CMat::zeros(n_unknowns, n_unknowns);
    let mut rhs = CVec::zeros(n_unknowns);
    let bc_off = 1;
    let aj_off = 1 + n_constraints;
    let bi_off = aj_off + groups;
    // Slot bookkeeping: slot index → (group, unknown column if finite).
    let mut slot_group = vec![0usize; total_slots];
    {
        let mut cursor = 0;
        for (j, set) in p.literal_sets().iter().enumerate() {
            for _ in set {
                slot_group[cursor] = j;
                cursor += 1;
            }
        }
    }
    // Row 0 — vertex b_O: a_O + Σ_j A_OJ[j]·a_j = λ.
    sys[(0, 0)] = cr(1.0);
    for j in 0..groups {
        sys[(0, aj_off + j)] = p.columns()[(0, j)];
    }
    rhs[0] = cr(lambda);
    // Rows for b_C: Σ_j A_CJ[c,j]·a_j − λ·b_c = 0.
    for c in 0..n_constraints {
        sys[(bc_off + c, bc_off + c)] = cr(-lambda);
        for j in 0..groups {
            sys[(bc_off + c, aj_off + j)] = a_cj[(c, j)];
        }
    }
    // Rows for a_J: conj(A_OJ[j]) + Σ_c conj(A_CJ[c,j])·b_c
    //               + Σ_{finite i∈I_j} b_i − λ·a_j = 0.
    for j in 0..groups {
        let row = aj_off + j;
        sys[(row, row)] = cr(-lambda);
        for c in 0..n_constraints {
            sys[(row, bc_off + c)] = a_cj[(c, j)].conj();
        }
        rhs[row] = -p.columns()[(0, j)].conj();
    }
    for (ord, &i) in finite_slots.iter().enumerate() {
        sys[(aj_off + slot_group[i], bi_off + ord)] = cr(1.0);
    }
    // Leaf boundary rows.
    for (ord, &i) in finite_slots.iter().enumerate() {
        let row = bi_off + ord;
        let r = input_ratios[i];
        let aj_col = aj_off + slot_group[i];
        if r.abs() >= 1.0 {
            sys[(row, row)] = cr(1.0);
            sys[(row, aj_col)] = cr(-1.0 / r);
        } else {
            sys[(row, row)] = cr(-r);
            sys[(row, aj_col)] = cr(1.0);
        }
    }
    let solution = linalg::refined_lu_solve(&sys, &rhs).ok_or(GraphError::RatioSingular {
        lambda,
        what: "vertex system",
    })?;
    let r_direct = solution[0].re;

    let is_true = r_o < 0.0;
    let s_o = if is_true {
        -1.0 / (lambda * r_o)
    } else {
        r_o / lambda
    };
    Ok(OutputRatio {
        r_o,
        r_direct,
        s_o,
        is_true,
        lambda,
    })
}

/// The complement graph: computes `¬f` by grafting a two-edge inverter onto
/// the output and hanging a complemented shadow leaf below every old leaf.
///
/// Mechanically this is a re-rooting: a fresh output pair is attached to the
/// old `a_O` (which becomes the new `b_O`), the old `a`/`b` sides swap
/// canonical blocks with every old edge weight kept verbatim, and each old
/// leaf — now an `a`-side column vertex — receives a new weight-one leaf
/// labeled with the complemented literal.  The result equals, entry for
/// entry, the graph built from the dual span program.
pub fn complement_graph(g: &GadgetGraph) -> Result<GadgetGraph, GraphError> {
    g.require_surgery_ready()?;
    let n_old = g.size();
    let n_constraints = g.n_groups;
    let n_groups = 1 + g.n_constraints + g.n_leaves;
    let n_leaves = g.n_leaves;
    let n = 2 + n_constraints + n_groups + n_leaves;
    let group_base = 2 + n_constraints;
    let leaf_base = group_base + n_groups;

    // Old-vertex destinations: old a_O → new b_O; old columns → constraint
    // block; old b_O, constraints, and leaves → column block, in that order.
    let mut map = vec![0usize; n_old];
    map[0] = 1;
    map[1] = group_base;
    for c in 0..g.n_constraints {
        map[g.constraint_index(c)] = group_base + 1 + c;
    }
    for j in 0..g.n_groups {
        map[g.group_index(j)] = 2 + j;
    }
    for i in 0..g.n_leaves {
        map[g.leaf_index(i)] = group_base + 1 + g.n_constraints + i;
    }

    let mut adjacency = CMat::zeros(n, n);
    for u in 0..n_old {
        for v in 0..n_old {
            let z = g.adjacency[(u, v)];
            if z != Complex64::default() {
                adjacency[(map[u], map[v])] = z;
            }
        }
    }
    adjacency[(0, 1)] = cr(1.0);
    adjacency[(1, 0)] = cr(1.0);

    let mut input_edges = Vec::with_capacity(n_leaves);
    for (i, edge) in g.input_edges.iter().enumerate() {
        debug_assert_eq!(edge.leaf, i);
        let leaf = leaf_base + i;
        let group_vertex = map[g.leaf_index(i)];
        adjacency[(leaf, group_vertex)] = cr(1.0);
        adjacency[(group_vertex, leaf)] = cr(1.0);
        input_edges.push(InputEdge {
            group: group_vertex - group_base,
            leaf: i,
            literal: edge.literal.complement(),
        });
    }

    let old_label = |idx: usize| format!("n/{}", g.vertices[idx].label);
    let mut group_labels = Vec::with_capacity(n_groups);
    group_labels.push(old_label(1));
    for c in 0..g.n_constraints {
        group_labels.push(old_label(g.constraint_index(c)));
    }
    for i in 0..g.n_leaves {
        group_labels.push(old_label(g.leaf_index(i)));
    }
    let vertices = assemble_vertices(
        Role::AOut.base_label(),
        old_label(0),
        (0..g.n_groups).map(|j| old_label(g.group_index(j))).collect(),
        group_labels,
        (0..n_leaves)
            .map(|i| format!("nb/{}", g.vertices[g.leaf_index(i)].label))
            .collect(),
    );

    Ok(GadgetGraph {
        vertices,
        adjacency,
        output_weight: 1.0,
        input_edges,
        n_constraints,
        n_groups,
        n_leaves,
        num_vars: g.num_vars,
    })
}

/// One wire of a graph composition: a pass-through leaf or a child graph.
#[derive(Debug, Clone)]
pub enum GraphInner {
    Leaf,
    Graph(GadgetGraph),
}

impl GraphInner {
    /// Number of composed variables the wire consumes.
    pub fn arity(&self) -> usize {
        match self {
            GraphInner::Leaf => 1,
            GraphInner::Graph(g) => g.num_vars(),
        }
    }
}

/// Composes gadget graphs by edge surgery, one wire per outer variable.
///
/// Every input edge of the outer graph whose variable is wired to a child
/// graph is replaced by that child's output edge: the outer leaf disappears,
/// the child's `b_O` joins the constraint block, and a weight-one edge ties
/// it to the outer column vertex.  Negated occurrences graft
/// [`complement_graph`] of the child instead.  Wires of kind
/// [`GraphInner::Leaf`] keep their edges, relabeled into the composed
/// variable numbering (inner `k` reads composed variables
/// `offset_k+1 ..= offset_k+arity_k`; copies of one child share variables).
///
/// The result is identical, entry for entry, to the graph built from the
/// composed span program.
pub fn compose_graphs(
    outer: &GadgetGraph,
    inners: &[GraphInner],
) -> Result<GadgetGraph, GraphError> {
    if inners.len() != outer.num_vars {
        return Err(GraphError::ArityMismatch {
            expected: outer.num_vars,
            found: inners.len(),
        });
    }
    outer.require_surgery_ready()?;
    for inner in inners {
        if let GraphInner::Graph(g) = inner {
            g.require_surgery_ready()?;
        }
    }

    let mut offsets = vec![0usize; inners.len() + 1];
    for (k, inner) in inners.iter().enumerate() {
        offsets[k + 1] = offsets[k] + inner.arity();
    }

    struct Occurrence {
        outer_slot: usize,
        outer_group: usize,
        graph: GadgetGraph,
        shift: usize,
    }
    let mut kept: Vec<(usize, usize, Literal)> = Vec::new();
    let mut occurrences: Vec<Occurrence> = Vec::new();
    for edge in &outer.input_edges {
        let k = edge.literal.var;
        match &inners[k - 1] {
            GraphInner::Leaf => kept.push((
                edge.leaf,
                edge.group,
                Literal {
                    var: offsets[k - 1] + 1,
                    neg: edge.literal.neg,
                },
            )),
            GraphInner::Graph(child) => {
                let graph = if edge.literal.neg {
                    complement_graph(child)?
                } else {
                    child.clone()
                };
                occurrences.push(Occurrence {
                    outer_slot: edge.leaf,
                    outer_group: edge.group,
                    graph,
                    shift: offsets[k - 1],
                });
            }
        }
    }

    let n_constraints = outer.n_constraints
        + occurrences.iter().map(|o| 1 + o.graph.n_constraints).sum::<usize>();
    let n_groups =
        outer.n_groups + occurrences.iter().map(|o| o.graph.n_groups).sum::<usize>();
    let n_leaves =
        kept.len() + occurrences.iter().map(|o| o.graph.n_leaves).sum::<usize>();
    let n = 2 + n_constraints + n_groups + n_leaves;
    let group_base = 2 + n_constraints;
    let leaf_base = group_base + n_groups;

    let mut adjacency = CMat::zeros(n, n);

    // Outer vertices keep their positions class-by-class; replaced leaves
    // vanish.
    let mut outer_map: Vec<Option<usize>> = vec![None; outer.size()];
    outer_map[0] = Some(0);
    outer_map[1] = Some(1);
    for c in 0..outer.n_constraints {
        outer_map[outer.constraint_index(c)] = Some(2 + c);
    }
    for j in 0..outer.n_groups {
        outer_map[outer.group_index(j)] = Some(group_base + j);
    }
    for (ordinal, &(outer_leaf, _, _)) in kept.iter().enumerate() {
        outer_map[outer.leaf_index(outer_leaf)] = Some(leaf_base + ordinal);
    }
    for u in 0..outer.size() {
        for v in 0..outer.size() {
            let z = outer.adjacency[(u, v)];
            if z != Complex64::default() {
                if let (Some(a), Some(b)) = (outer_map[u], outer_map[v]) {
                    adjacency[(a, b)] = z;
                }
            }
        }
    }

    let mut constraint_labels: Vec<String> = (0..outer.n_constraints)
        .map(|c| outer.vertices[outer.constraint_index(c)].label.clone())
        .collect();
    let mut group_labels: Vec<String> = (0..outer.n_groups)
        .map(|j| outer.vertices[outer.group_index(j)].label.clone())
        .collect();
    let mut leaf_labels: Vec<String> = kept
        .iter()
        .map(|&(outer_leaf, _, _)| outer.vertices[outer.leaf_index(outer_leaf)].label.clone())
        .collect();
    let mut input_edges: Vec<InputEdge> = kept
        .iter()
        .enumerate()
        .map(|(ordinal, &(_, group, literal))| InputEdge {
            group,
            leaf: ordinal,
            literal,
        })
        .collect();

    let mut cons_off = outer.n_constraints;
    let mut grp_off = outer.n_groups;
    let mut leaf_off = kept.len();
    for occ in &occurrences {
        let child = &occ.graph;
        let prefix = format!("s{}/", occ.outer_slot);
        // Child b_O heads the occurrence's constraint block; child a_O and
        // the old output edge are dropped in favor of the weight-one tie to
        // the outer column vertex.
        let mut child_map: Vec<Option<usize>> = vec![None; child.size()];
        child_map[1] = Some(2 + cons_off);
        for c in 0..child.n_constraints {
            child_map[child.constraint_index(c)] = Some(2 + cons_off + 1 + c);
        }
        for j in 0..child.n_groups {
            child_map[child.group_index(j)] = Some(group_base + grp_off + j);
        }
        for i in 0..child.n_leaves {
            child_map[child.leaf_index(i)] = Some(leaf_base + leaf_off + i);
        }
        for u in 0..child.size() {
            for v in 0..child.size() {
                let z = child.adjacency[(u, v)];
                if z != Complex64::default() {
                    if let (Some(a), Some(b)) = (child_map[u], child_map[v]) {
                        adjacency[(a, b)] = z;
                    }
                }
            }
        }
        let tie_b = 2 + cons_off;
        let tie_a = group_base + occ.outer_group;
        adjacency[(tie_b, tie_a)] = cr(1.0);
        adjacency[(tie_a, tie_b)] = cr(1.0);

        constraint_labels.push(format!("{prefix}{}", child.vertices[1].label));
        for c in 0..child.n_constraints {
            constraint_labels.push(format!(
                "{prefix}{}",
                child.vertices[child.constraint_index(c)].label
            ));
        }
        for j in 0..child.n_groups {
            group_labels.push(format!(
                "{prefix}{}",
                child.vertices[child.group_index(j)].label
            ));
        }
        for i in 0..child.n_leaves {
            leaf_labels.push(format!(
                "{prefix}{}",
                child.vertices[child.leaf_index(i)].label
            ));
        }
        for edge in &child.input_edges {
            input_edges.push(InputEdge {
                group: grp_off + edge.group,
                leaf: leaf_off + edge.leaf,
                literal: Literal {
                    var: edge.literal.var + occ.shift,
                    neg: edge.literal.neg,
                },
            });
        }
        cons_off += 1 + child.n_constraints;
        grp_off += child.n_groups;
        leaf_off += child.n_leaves;
    }

    let vertices = assemble_vertices(
        outer.vertices[0].label.clone(),
        outer.vertices[1].label.clone(),
        constraint_labels,
        group_labels,
        leaf_labels,
    );

    Ok(GadgetGraph {
        vertices,
        adjacency,
        output_weight: outer.output_weight,
        input_edges,
        n_constraints,
        n_groups,
        n_leaves,
        num_vars: offsets[inners.len()],
    })
}

/// Edge-list export record: endpoint labels plus `[re, im]` weight.
#[derive(Debug, Clone, Serialize)]
pub struct EdgeExport {
    pub u: String,
    pub v: String,
    pub w: [f64; 2],
}

/// Exportable description of a gadget graph.
#[derive(Debug, Clone, Serialize)]
pub struct EdgeListExport {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeExport>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{
        and_program, equal_program, maj_program, or_program, parity_program, unit_program,
    };
    use crate::linalg::c;
    use crate::spanprog::{compose, Inner};
    use crate::witness::{witness_size, ComplexityVector};
    use approx::assert_abs_diff_eq;

    fn ones(n: usize) -> ComplexityVector {
        ComplexityVector::ones(n)
    }

    fn bits(pattern: u32, len: usize) -> Vec<bool> {
        (0..len).map(|k| (pattern >> (len - 1 - k)) & 1 == 1).collect()
    }

    fn assert_graphs_identical(a: &GadgetGraph, b: &GadgetGraph) {
        assert_eq!(a.size(), b.size(), "vertex counts differ");
        assert_eq!(a.num_constraints(), b.num_constraints());
        assert_eq!(a.num_groups(), b.num_groups());
        assert_eq!(a.num_leaves(), b.num_leaves());
        assert_eq!(a.num_vars(), b.num_vars());
        assert_eq!(a.output_weight(), b.output_weight());
        assert_eq!(a.input_edges(), b.input_edges());
        for u in 0..a.size() {
            for v in 0..a.size() {
                assert_eq!(
                    a.adjacency()[(u, v)],
                    b.adjacency()[(u, v)],
                    "adjacency mismatch at ({u}, {v})"
                );
            }
        }
    }

    fn assert_bipartite(g: &GadgetGraph) {
        let coloring = g.coloring();
        for u in 0..g.size() {
            for v in 0..g.size() {
                if g.adjacency()[(u, v)] != Complex64::default() {
                    assert_ne!(coloring[u], coloring[v], "edge ({u}, {v}) is monochromatic");
                }
            }
        }
    }

    fn assert_spectrum_symmetric(g: &GadgetGraph) {
        let report = g.spectrum_report();
        let n = report.eigenvalues.len();
        for k in 0..n {
            assert_abs_diff_eq!(
                report.eigenvalues[k],
                -report.eigenvalues[n - 1 - k],
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn unit_program_graph_is_a_path() {
        let g = build_gadget_graph(&unit_program()).unwrap();
        assert_eq!(g.size(), 4);
        assert_eq!(g.num_constraints(), 0);
        let mut expect = CMat::zeros(4, 4);
        expect[(0, 1)] = cr(1.0);
        expect[(1, 0)] = cr(1.0);
        expect[(1, 2)] = cr(1.0);
        expect[(2, 1)] = cr(1.0);
        expect[(2, 3)] = cr(1.0);
        expect[(3, 2)] = cr(1.0);
        assert_eq!(g.adjacency(), &expect);
        assert_eq!(g.vertices()[0].label, "aO");
        assert_eq!(g.vertices()[3].label, "bI0");
        assert_eq!(
            g.input_edges(),
            &[InputEdge {
                group: 0,
                leaf: 0,
                literal: Literal::pos(1)
            }]
        );
    }

    #[test]
    fn majority_graph_matches_block_form() {
        let g = build_gadget_graph(&maj_program()).unwrap();
        assert_eq!(g.size(), 9);
        assert_eq!(
            (g.num_constraints(), g.num_groups(), g.num_leaves()),
            (1, 3, 3)
        );
        let w = 1.0 / 3f64.sqrt();
        let omega = c(-0.5, 3f64.sqrt() / 2.0);
        let block = g.program_block();
        assert_eq!(block.nrows(), 2);
        assert_eq!(block.ncols(), 4);
        // First row (1, 1/√3, 1/√3, 1/√3); second row (0, 1, ω, ω̄).
        assert_eq!(block[(0, 0)], cr(1.0));
        for j in 1..4 {
            assert_eq!(block[(0, j)], cr(w));
        }
        assert_eq!(block[(1, 0)], cr(0.0));
        assert_eq!(block[(1, 1)], cr(1.0));
        assert_eq!(block[(1, 2)], omega);
        assert_abs_diff_eq!(block[(1, 3)].re, omega.conj().re, epsilon = 1e-15);
        assert_abs_diff_eq!(block[(1, 3)].im, omega.conj().im, epsilon = 1e-15);
        // Hermitian adjacency and bipartite coloring.
        assert_eq!(&g.adjacency().adjoint(), g.adjacency());
        assert_bipartite(&g);
        assert_spectrum_symmetric(&g);
    }

    #[test]
    fn build_rejects_unnormalized_target() {
        let p = SpanProgram::from_columns(
            CVec::from_vec(vec![cr(2.0)]),
            vec![(CVec::from_vec(vec![cr(1.0)]), vec![Literal::pos(1)])],
        )
        .unwrap();
        assert!(matches!(
            build_gadget_graph(&p),
            Err(GraphError::NotNormalized)
        ));
    }

    #[test]
    fn apply_input_deletes_satisfied_literal_edges() {
        let g = build_gadget_graph(&maj_program()).unwrap();
        let all_true = g.apply_input(&[true, true, true]).unwrap();
        assert!(all_true.input_edges().is_empty());
        for i in 0..3 {
            assert_eq!(
                all_true.adjacency()[(g.leaf_index(i), g.group_index(i))],
                cr(0.0)
            );
        }
        let all_false = g.apply_input(&[false, false, false]).unwrap();
        assert_eq!(all_false.adjacency(), g.adjacency());
        assert_eq!(all_false.input_edges().len(), 3);
        let one_true = g.apply_input(&[true, false, false]).unwrap();
        assert_eq!(one_true.input_edges().len(), 2);
        assert!(one_true
            .input_edges()
            .iter()
            .all(|e| e.literal != Literal::pos(1)));
        assert!(matches!(
            g.apply_input(&[true]),
            Err(GraphError::InputLength { needed: 3, found: 1 })
        ));
    }

    #[test]
    fn reweight_scales_only_the_output_edge() {
        let g = build_gadget_graph(&maj_program()).unwrap();
        let same = g.reweight_output(1.0, 1.0).unwrap();
        assert_eq!(same.adjacency(), g.adjacency());
        let scaled = g.reweight_output(4.0, 0.1).unwrap();
        assert_abs_diff_eq!(scaled.output_weight(), 0.05, epsilon = 1e-15);
        assert_eq!(scaled.adjacency()[(0, 1)], cr(0.05));
        assert_eq!(scaled.adjacency()[(1, 0)], cr(0.05));
        let default_adv2 = g.reweight_output(2.0, 0.1).unwrap();
        assert_abs_diff_eq!(
            default_adv2.output_weight(),
            0.1 / 2f64.sqrt(),
            epsilon = 1e-15
        );
        // Everything else untouched.
        for u in 0..g.size() {
            for v in 0..g.size() {
                if (u, v) != (0, 1) && (u, v) != (1, 0) {
                    assert_eq!(scaled.adjacency()[(u, v)], g.adjacency()[(u, v)]);
                }
            }
        }
        assert!(matches!(
            g.reweight_output(0.0, 0.1),
            Err(GraphError::InvalidWeight { .. })
        ));
        assert!(matches!(
            g.reweight_output(2.0, -1.0),
            Err(GraphError::InvalidWeight { .. })
        ));
    }

    #[test]
    fn single_edge_graph_has_eigenvalues_plus_minus_weight() {
        // A program with no columns rejects everything; its graph is the bare
        // output edge.
        let p = SpanProgram::from_columns(CVec::from_vec(vec![cr(1.0)]), vec![]).unwrap();
        let g = build_gadget_graph(&p).unwrap();
        assert_eq!(g.size(), 2);
        let report = g.reweight_output(4.0, 0.1).unwrap().spectrum_report();
        assert_eq!(report.eigenvalues.len(), 2);
        assert_abs_diff_eq!(report.eigenvalues[0], -0.05, epsilon = 1e-12);
        assert_abs_diff_eq!(report.eigenvalues[1], 0.05, epsilon = 1e-12);
    }

    #[test]
    fn spectrum_of_accepted_majority_input_has_kernel_output_support() {
        let g = build_gadget_graph(&maj_program())
            .unwrap()
            .reweight_output(2.0, 0.1)
            .unwrap();
        let report = g.apply_input(&[true, true, true]).unwrap().spectrum_report();
        let w = 0.1 / 2f64.sqrt();
        // Kernel: two-dimensional a-side solution space plus three isolated
        // leaves; a_O projection 1/(1+w²), no b_O component.
        assert_eq!(report.kernel_dim, 5);
        assert_abs_diff_eq!(report.zero_support_a, 1.0 / (1.0 + w * w), epsilon = 1e-10);
        assert!(report.zero_support_b <= 1e-12);
        // Smallest output-supported eigenvalue pair sits at √(1+w²).
        assert_abs_diff_eq!(
            report.gap_witness.unwrap(),
            (1.0 + w * w).sqrt(),
            epsilon = 1e-10
        );
    }

    #[test]
    fn spectrum_of_rejected_majority_input_has_gap_clear_of_threshold() {
        let g = build_gadget_graph(&maj_program())
            .unwrap()
            .reweight_output(2.0, 0.1)
            .unwrap();
        let report = g
            .apply_input(&[true, false, false])
            .unwrap()
            .spectrum_report();
        // Kernel is the single isolated deleted leaf; no output support.
        assert_eq!(report.kernel_dim, 1);
        assert!(report.zero_support_a <= 1e-12);
        assert!(report.zero_support_b <= 1e-12);
        // Measured smallest output-supported eigenvalue; must clear the
        // calibrated threshold eps/adv = 0.05/2.
        let gap = report.gap_witness.unwrap();
        assert_abs_diff_eq!(gap, 0.038665958729, epsilon = 1e-9);
        assert!(gap >= 0.025);
    }

    #[test]
    fn zero_support_halves_are_exact() {
        let maj = build_gadget_graph(&maj_program()).unwrap();
        let s111 = zero_eigenvector_support(&maj, &[true, true, true]).unwrap();
        assert_eq!(s111.side, OutputSide::AOut);
        assert_abs_diff_eq!(s111.ab_o, 0.5, epsilon = 1e-12);
        assert!(s111.support_b <= 1e-12);
        let s000 = zero_eigenvector_support(&maj, &[false, false, false]).unwrap();
        assert_eq!(s000.side, OutputSide::BOut);
        assert_abs_diff_eq!(s000.ab_o, 0.5, epsilon = 1e-12);
        assert!(s000.support_a <= 1e-12);

        let unit = build_gadget_graph(&unit_program()).unwrap();
        let s1 = zero_eigenvector_support(&unit, &[true]).unwrap();
        assert_eq!(s1.side, OutputSide::AOut);
        assert_abs_diff_eq!(s1.ab_o, 0.5, epsilon = 1e-12);
        let s0 = zero_eigenvector_support(&unit, &[false]).unwrap();
        assert_eq!(s0.side, OutputSide::BOut);
        assert_abs_diff_eq!(s0.ab_o, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn zero_support_respects_dual_rail_and_witness_bound() {
        let programs: Vec<SpanProgram> = vec![
            maj_program(),
            parity_program(2),
            or_program(&[1.0, 1.0]),
            and_program(&[1.0, 1.0]).normalize_target(),
        ];
        for p in &programs {
            let g = build_gadget_graph(p).unwrap();
            let n = p.num_inputs();
            for pattern in 0..(1u32 << n) {
                let x = bits(pattern, n);
                let expected = p.evaluate(&x).unwrap();
                let support = zero_eigenvector_support(&g, &x).unwrap();
                assert_eq!(
                    support.side == OutputSide::AOut,
                    expected,
                    "side mismatch for {:?} on {:?}",
                    p,
                    x
                );
                // The wrong rail carries nothing.
                let wrong = if expected {
                    support.support_b
                } else {
                    support.support_a
                };
                assert!(wrong <= 1e-10, "wrong-rail support {wrong}");
                // Strong output-support bound with measured constant ≤ 2.
                let wsize = witness_size(p, &x, &ones(n)).unwrap().value;
                assert!(
                    support.ab_o * (wsize + 2.0) >= 1.0 - 1e-9,
                    "support {} too small for wsize {}",
                    support.ab_o,
                    wsize
                );
            }
        }
    }

    #[test]
    fn weighted_zero_support_charges_slots() {
        // Unit graph, false input: solution ψ = (0, b_O, 0, −b_O).  Charging
        // the slot an extra unit of weight (α = 1/2) at its leaf and column
        // vertices turns the norm into |b_O|²·(1 + 2), so the overlap drops
        // from 1/2 to 1/3.
        let unit = build_gadget_graph(&unit_program()).unwrap();
        let plain = zero_eigenvector_support_weighted(&unit, &[false], &[1.0]).unwrap();
        assert_abs_diff_eq!(plain.ab_o, 0.5, epsilon = 1e-12);
        let charged = zero_eigenvector_support_weighted(&unit, &[false], &[0.5]).unwrap();
        assert_eq!(charged.side, OutputSide::BOut);
        assert_abs_diff_eq!(charged.ab_o, 1.0 / 3.0, epsilon = 1e-12);
        assert!(matches!(
            zero_eigenvector_support_weighted(&unit, &[false], &[1.0, 1.0]),
            Err(GraphError::SlotCount { .. })
        ));
    }

    #[test]
    fn inverter_transfer_identity_is_exact() {
        // The complement of the wire graph is a six-vertex chain: the output
        // inverter (new output pair grafted onto the old a_O) sits above the
        // old wire and its complemented shadow slot.  The inverter's ratio
        // transfer r_O = λ − 1/r_in must hold exactly, with r_in the ratio
        // of the structure below the old output edge, solved here by hand:
        // chasing the chain equations gives r_in = λ − 1/(λ − u) with
        // u = 1/(λ − 1/r_slot).
        let inverter = unit_program().dual();
        for &lambda in &[1e-2_f64, 1e-3] {
            for &r_slot in &[0.5, 2.0, -3.0, 1.0e4, lambda * 1.0, f64::INFINITY] {
                let u = 1.0 / (lambda - 1.0 / r_slot);
                let r_in = lambda - 1.0 / (lambda - u);
                let out = output_ratio(&inverter, &[r_slot], lambda).unwrap();
                let expect = not_gate_ratio(r_in, lambda);
                let scale = expect.abs().max(1.0);
                assert!(
                    (out.r_o - expect).abs() <= 1e-12 * scale,
                    "closed {} vs inverter transfer {}",
                    out.r_o,
                    expect
                );
                assert!((out.r_direct - expect).abs() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn not_gate_ratio_matches_complexity_rules() {
        // λ − 1/r converts the two complexity readings exactly: a false
        // input (r = λs) yields a true output of complexity s/(1 − λ²s); a
        // true input (r = −1/(λs)) yields a false output of complexity 1 + s.
        for &lambda in &[1e-3_f64, 1e-4, 1e-5] {
            for &s in &[0.5, 1.0, 2.0, 7.5] {
                let r_false_in = lambda * s;
                let r_out = not_gate_ratio(r_false_in, lambda);
                assert!(r_out < 0.0);
                let s_out = -1.0 / (lambda * r_out);
                let expect = s / (1.0 - lambda * lambda * s);
                assert_abs_diff_eq!(s_out, expect, epsilon = 1e-12 * expect);

                let r_true_in = -1.0 / (lambda * s);
                let r_out = not_gate_ratio(r_true_in, lambda);
                assert!(r_out > 0.0);
                let s_out = r_out / lambda;
                assert_abs_diff_eq!(s_out, 1.0 + s, epsilon = 1e-12 * (1.0 + s));
            }
        }
    }

    #[test]
    fn output_ratio_limits_match_hand_solved_values() {
        let lambda = 1e-4;
        let maj = maj_program();
        // All-false: rejection witness w' = e_O, cost Σ_j Ĝ_j|v_j†w'|² = 1
        // plus rail term ‖w'‖² = 1.
        let r000 = output_ratio(&maj, &leaf_ratios(&maj, &[false; 3], lambda, 1.0).unwrap(), lambda)
            .unwrap();
        assert!(!r000.is_true);
        assert_abs_diff_eq!(r000.s_o, 2.0, epsilon = 1e-7);
        // One true input: forced witness w' = (1, −1/√3), cost 2 + 4/3.
        let x100 = [true, false, false];
        let r100 = output_ratio(&maj, &leaf_ratios(&maj, &x100, lambda, 1.0).unwrap(), lambda)
            .unwrap();
        assert!(!r100.is_true);
        assert_abs_diff_eq!(r100.s_o, 10.0 / 3.0, epsilon = 1e-6);
        // Two true inputs: acceptance witness over two columns, ‖w‖² = 2.
        let x110 = [true, true, false];
        let r110 = output_ratio(&maj, &leaf_ratios(&maj, &x110, lambda, 1.0).unwrap(), lambda)
            .unwrap();
        assert!(r110.is_true);
        assert_abs_diff_eq!(r110.s_o, 2.0, epsilon = 1e-6);
        // All-true: minimum-norm acceptance witness ‖w‖² = 1.
        let r111 = output_ratio(&maj, &leaf_ratios(&maj, &[true; 3], lambda, 1.0).unwrap(), lambda)
            .unwrap();
        assert!(r111.is_true);
        assert_abs_diff_eq!(r111.s_o, 1.0, epsilon = 1e-6);

        // OR of three unit-cost inputs, all false: witness cost √3 plus rail 1.
        let or3 = or_program(&[1.0, 1.0, 1.0]);
        let r_or = output_ratio(&or3, &leaf_ratios(&or3, &[false; 3], lambda, 1.0).unwrap(), lambda)
            .unwrap();
        assert_abs_diff_eq!(r_or.s_o, 1.0 + 3f64.sqrt(), epsilon = 1e-7);

        // Two-input parity: false inputs cost 2 + rail 1; true inputs have a
        // single available column with ‖w‖² = 1.
        let parity = parity_program(2);
        let r00 = output_ratio(
            &parity,
            &leaf_ratios(&parity, &[false, false], lambda, 1.0).unwrap(),
            lambda,
        )
        .unwrap();
        assert!(!r00.is_true);
        assert_abs_diff_eq!(r00.s_o, 3.0, epsilon = 1e-7);
        let r10 = output_ratio(
            &parity,
            &leaf_ratios(&parity, &[true, false], lambda, 1.0).unwrap(),
            lambda,
        )
        .unwrap();
        assert!(r10.is_true);
        assert_abs_diff_eq!(r10.s_o, 1.0, epsilon = 1e-7);
    }

    /// Test oracle: λ→0 limit of the boundary ratio on a true input — the
    /// unweighted minimum-norm solution of `A Π w = t`.
    fn rail_limit_true(p: &SpanProgram, x: &[bool]) -> f64 {
        let masked = p.masked_columns(x).unwrap();
        let w = linalg::lstsq(&masked, p.target());
        let residual = (&masked * &w - p.target()).norm();
        assert!(residual < 1e-10, "input is not accepted");
        w.norm_squared()
    }

    /// Test oracle: λ→0 limit on a false input — minimize
    /// `Σ_j Ĝ_j |v_j†w'|² + ‖w'‖²` over `⟨t, w'⟩ = 1`, `Π A† w' = 0`, with
    /// `Ĝ_j` the harmonic weight over the group's false slots.
    fn rail_limit_false(p: &SpanProgram, x: &[bool]) -> f64 {
        let dim = p.dim();
        let avail = p.availability(x).unwrap();
        // Feasible space: kernel of the available columns' adjoints.
        let n_avail = avail.iter().filter(|&&a| a).count();
        let mut constraint = CMat::zeros(n_avail, dim);
        let mut row = 0;
        for (j, &ok) in avail.iter().enumerate() {
            if ok {
                for r in 0..dim {
                    constraint[(row, r)] = p.columns()[(r, j)].conj();
                }
                row += 1;
            }
        }
        let basis = linalg::kernel_basis(&constraint);
        // Quadratic form: harmonic group weights on unavailable columns plus
        // the identity rail term.
        let mut form = CMat::identity(dim, dim);
        for (j, &ok) in avail.iter().enumerate() {
            if !ok {
                let false_slots = p.literal_sets()[j]
                    .iter()
                    .filter(|lit| !lit.eval(x))
                    .count();
                let weight = 1.0 / false_slots as f64;
                let col = p.columns().column(j);
                for r in 0..dim {
                    for s in 0..dim {
                        form[(r, s)] += cr(weight) * col[r] * col[s].conj();
                    }
                }
            }
        }
        // Minimize y†My subject to ⟨c, y⟩ = 1 with c = B†t: value 1/(c†M⁻¹c).
        let m = basis.adjoint() * &form * &basis;
        let c_vec = basis.adjoint() * p.target();
        let m_inv_c = m
            .clone()
            .lu()
            .solve(&c_vec)
            .expect("rail form is positive definite");
        let denom = (c_vec.adjoint() * m_inv_c)[(0, 0)].re;
        assert!(denom > 0.0, "input is not rejected");
        1.0 / denom
    }

    #[test]
    fn output_ratio_approaches_rail_limit_oracles() {
        let programs: Vec<SpanProgram> = vec![
            maj_program(),
            parity_program(2),
            or_program(&[1.0, 1.0, 1.0]),
            and_program(&[1.0, 1.0, 1.0]).normalize_target(),
            equal_program(3),
        ];
        let lambda = 1e-5;
        for p in &programs {
            let n = p.num_inputs();
            for pattern in 0..(1u32 << n) {
                let x = bits(pattern, n);
                let ratios = leaf_ratios(p, &x, lambda, 1.0).unwrap();
                let out = output_ratio(p, &ratios, lambda).unwrap();
                let expected = p.evaluate(&x).unwrap();
                assert_eq!(out.is_true, expected, "{p:?} on {x:?}");
                let limit = if expected {
                    rail_limit_true(p, &x)
                } else {
                    rail_limit_false(p, &x)
                };
                assert!(
                    (out.s_o - limit).abs() <= 1e-3 * limit,
                    "{p:?} on {x:?}: s_O {} vs limit {}",
                    out.s_o,
                    limit
                );
            }
        }
    }

    #[test]
    fn output_ratio_closed_and_direct_routes_agree() {
        let programs: Vec<SpanProgram> = vec![
            maj_program(),
            parity_program(2),
            parity_program(3),
            or_program(&[1.0, 1.0, 1.0]),
            and_program(&[1.0, 2.0, 0.5]).normalize_target(),
            equal_program(3),
        ];
        for p in &programs {
            let n = p.num_inputs();
            for &lambda in &[1e-3, 1e-4, 1e-5] {
                for pattern in 0..(1u32 << n) {
                    let x = bits(pattern, n);
                    let ratios = leaf_ratios(p, &x, lambda, 1.0).unwrap();
                    let out = output_ratio(p, &ratios, lambda).unwrap();
                    let scale = out.r_o.abs().max(1.0);
                    assert!(
                        (out.r_o - out.r_direct).abs() <= 1e-8 * scale,
                        "routes disagree: {} vs {} (λ = {lambda})",
                        out.r_o,
                        out.r_direct
                    );
                }
            }
        }
    }

    #[test]
    fn output_ratio_sign_structure_and_shrinking_slack() {
        let probes = [1e-3, 1e-4, 1e-5];
        let programs: Vec<SpanProgram> = vec![
            maj_program(),
            or_program(&[1.0, 1.0, 1.0]),
            and_program(&[1.0, 1.0, 1.0]).normalize_target(),
            parity_program(2),
        ];
        for p in &programs {
            let n = p.num_inputs();
            for pattern in 0..(1u32 << n) {
                let x = bits(pattern, n);
                let expected = p.evaluate(&x).unwrap();
                let wsize = witness_size(p, &x, &ones(n)).unwrap().value;
                let limit = if expected {
                    rail_limit_true(p, &x)
                } else {
                    rail_limit_false(p, &x)
                };
                let mut slacks = Vec::new();
                for &lambda in &probes {
                    let ratios = leaf_ratios(p, &x, lambda, 1.0).unwrap();
                    let out = output_ratio(p, &ratios, lambda).unwrap();
                    if expected {
                        // Accepting ratio: large negative, at least 1/(wsize·λ)
                        // in magnitude (the limit never exceeds wsize).
                        assert!(out.r_o < 0.0);
                        assert!(out.r_o <= -1.0 / (wsize * lambda) * (1.0 - 1e-3));
                    } else {
                        // Rejecting ratio: small positive, within the
                        // rail-inclusive budget.
                        assert!(out.r_o > 0.0);
                        assert!(out.s_o > wsize - 1e-9);
                        assert!(out.s_o <= limit * (1.0 + 1e-3));
                    }
                    slacks.push((out.s_o / limit - 1.0).abs());
                }
                for k in 1..probes.len() {
                    assert!(
                        slacks[k] <= slacks[k - 1] + 1e-12,
                        "slack not shrinking for {p:?} on {x:?}: {slacks:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn output_ratio_rejects_bad_arguments() {
        let maj = maj_program();
        let ratios = leaf_ratios(&maj, &[false; 3], 1e-4, 1.0).unwrap();
        assert!(matches!(
            output_ratio(&maj, &ratios, 0.0),
            Err(GraphError::LambdaRange { .. })
        ));
        assert!(matches!(
            output_ratio(&maj, &[1e-4, 1e-4], 1e-4),
            Err(GraphError::SlotCount {
                expected: 3,
                found: 2
            })
        ));
        // A slot ratio of exactly 1/λ on a single-slot column makes the
        // column ratio denominator vanish.
        let unit = unit_program();
        assert!(matches!(
            output_ratio(&unit, &[1e3], 1e-3),
            Err(GraphError::RatioSingular { .. })
        ));
    }

    #[test]
    fn complement_graph_equals_dual_program_graph() {
        let programs: Vec<SpanProgram> = vec![
            unit_program(),
            maj_program(),
            parity_program(2),
            or_program(&[1.0, 1.0, 1.0]),
        ];
        for p in &programs {
            let direct = complement_graph(&build_gadget_graph(p).unwrap()).unwrap();
            let via_dual = build_gadget_graph(&p.dual()).unwrap();
            assert_graphs_identical(&direct, &via_dual);
            assert_bipartite(&direct);
        }
    }

    #[test]
    fn composition_routes_build_identical_graphs() {
        let maj = maj_program();
        let composed_program = compose(
            &maj,
            &[
                Inner::Leaf,
                Inner::Leaf,
                Inner::Program(maj.clone()),
            ],
        )
        .unwrap();
        let span_route = build_gadget_graph(&composed_program).unwrap();
        let graph_route = compose_graphs(
            &build_gadget_graph(&maj).unwrap(),
            &[
                GraphInner::Leaf,
                GraphInner::Leaf,
                GraphInner::Graph(build_gadget_graph(&maj).unwrap()),
            ],
        )
        .unwrap();
        assert_eq!(graph_route.size(), 16);
        assert_eq!(graph_route.num_vars(), 5);
        assert_graphs_identical(&span_route, &graph_route);
        assert_bipartite(&graph_route);
        assert_spectrum_symmetric(&graph_route);
        // Input edges read x1, x2 on the outer wires and x3..x5 on the copy.
        let vars: Vec<usize> = graph_route.input_edges().iter().map(|e| e.literal.var).collect();
        assert_eq!(vars, vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn negated_composition_routes_build_identical_graphs() {
        // Outer majority reading its third wire through an inverter.
        let outer = maj_program()
            .relabel(&[Literal::pos(1), Literal::pos(2), Literal::neg(3)])
            .unwrap();
        let composed_program = compose(
            &outer,
            &[
                Inner::Leaf,
                Inner::Leaf,
                Inner::Program(maj_program()),
            ],
        )
        .unwrap();
        let span_route = build_gadget_graph(&composed_program).unwrap();
        let graph_route = compose_graphs(
            &build_gadget_graph(&outer).unwrap(),
            &[
                GraphInner::Leaf,
                GraphInner::Leaf,
                GraphInner::Graph(build_gadget_graph(&maj_program()).unwrap()),
            ],
        )
        .unwrap();
        assert_graphs_identical(&span_route, &graph_route);
        // The negated copy contributes the complemented child minus its own
        // output vertex: constraints 1 + (1+3) = 5, groups 3 + 5 = 8, leaves
        // 2 + 3 = 5.
        assert_eq!(graph_route.size(), 2 + 5 + 8 + 5);
        // Composed function is MAJ(x1, x2, ¬MAJ(x3, x4, x5)).
        for pattern in 0..32u32 {
            let x = bits(pattern, 5);
            let child = (x[2] as u8 + x[3] as u8 + x[4] as u8) >= 2;
            let expect = (x[0] as u8 + x[1] as u8 + (!child) as u8) >= 2;
            assert_eq!(composed_program.evaluate(&x).unwrap(), expect);
        }
    }

    #[test]
    fn parity_of_majority_composition_and_evaluation() {
        let parity = parity_program(2);
        let maj = maj_program();
        let composed_program = compose(
            &parity,
            &[Inner::Program(maj.clone()), Inner::Leaf],
        )
        .unwrap();
        let span_route = build_gadget_graph(&composed_program).unwrap();
        let graph_route = compose_graphs(
            &build_gadget_graph(&parity).unwrap(),
            &[
                GraphInner::Graph(build_gadget_graph(&maj).unwrap()),
                GraphInner::Leaf,
            ],
        )
        .unwrap();
        assert_graphs_identical(&span_route, &graph_route);
        // Two copies of the child (one behind the inverter), so:
        // constraints 0 + (1+1) + (1+3) = 6, groups 2 + 3 + 5 = 10,
        // leaves 2 + 3 + 3 = 8.
        assert_eq!(graph_route.size(), 2 + 6 + 10 + 8);
        assert_eq!(graph_route.num_vars(), 4);

        // Evaluating at x = 1100 (x1 = x2 = 1) deletes exactly the four
        // satisfied literals: x1, x2 in the plain copy, x̄3 in the inverted
        // copy, and the kept wire's x̄4.
        let x = bits(0b1100, 4);
        let applied = graph_route.apply_input(&x).unwrap();
        let deleted = graph_route.input_edges().len() - applied.input_edges().len();
        assert_eq!(deleted, 4);
        let mut gone: Vec<Literal> = graph_route
            .input_edges()
            .iter()
            .filter(|e| !applied.input_edges().contains(e))
            .map(|e| e.literal)
            .collect();
        gone.sort();
        assert_eq!(
            gone,
            vec![
                Literal::pos(1),
                Literal::pos(2),
                Literal::neg(3),
                Literal::neg(4)
            ]
        );
        // MAJ(1,1,0) ⊕ 0 = 1: the composed program accepts.
        assert!(composed_program.evaluate(&x).unwrap());
        let support = zero_eigenvector_support(&graph_route, &x).unwrap();
        assert_eq!(support.side, OutputSide::AOut);
    }

    #[test]
    fn composition_rejects_bad_shapes() {
        let maj_graph = build_gadget_graph(&maj_program()).unwrap();
        assert!(matches!(
            compose_graphs(&maj_graph, &[GraphInner::Leaf]),
            Err(GraphError::ArityMismatch {
                expected: 3,
                found: 1
            })
        ));
        let reweighted = maj_graph.reweight_output(2.0, 0.1).unwrap();
        assert!(matches!(
            compose_graphs(
                &reweighted,
                &[GraphInner::Leaf, GraphInner::Leaf, GraphInner::Leaf]
            ),
            Err(GraphError::CompositionWeight { .. })
        ));
        let applied = maj_graph.apply_input(&[true, false, false]).unwrap();
        assert!(matches!(
            compose_graphs(
                &applied,
                &[GraphInner::Leaf, GraphInner::Leaf, GraphInner::Leaf]
            ),
            Err(GraphError::ComposedAfterApply)
        ));
        assert!(matches!(complement_graph(&applied), Err(GraphError::ComposedAfterApply)));
    }

    #[test]
    fn export_edge_list_and_dot() {
        let g = build_gadget_graph(&maj_program()).unwrap();
        let export = g.edge_list();
        assert_eq!(export.vertices.len(), 9);
        // Output edge + 3 column entries to b_O + 3 constraint entries + 3
        // input edges.
        assert_eq!(export.edges.len(), 10);
        let json = serde_json::to_string(&export).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["edges"].as_array().unwrap().len(), 10);
        assert!(parsed["edges"][0]["w"].as_array().unwrap().len() == 2);
        let dot = g.to_dot();
        assert!(dot.contains("graph gadget"));
        assert!(dot.contains("aO"));
        assert!(dot.contains("x3"));
    }
}
