//! Span programs over ℂ: representation, boolean evaluation, target
//! normalization, duality, and composition.
//!
//! A span program consists of a nonzero target vector `t` and a list of
//! grouped-input columns `v_j`, each labeled by a set of literals `X_j`.
//! On an input `x` the program accepts iff `t` lies in the span of the
//! columns whose literal sets are fully satisfied; an empty literal set is
//! always satisfied, so such a column is available on every input.
//!
//! Coordinate 0 is the "output" coordinate `O`; after [`SpanProgram::normalize_target`]
//! the target is exactly `e_O = (1, 0, …, 0)` and the remaining coordinates
//! form the constraint block `C`.

use crate::linalg::{c, cr, CMat, CVec};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors from constructing or combining span programs.
#[derive(Debug, Error)]
pub enum SpanProgramError {
    /// The target vector of a span program must be nonzero.
    #[error("target vector must be nonzero")]
    ZeroTarget,
    /// A column vector's dimension disagrees with the target's.
    #[error("column {index} has dimension {found}, expected {expected}")]
    ColumnDimension {
        index: usize,
        expected: usize,
        found: usize,
    },
    /// Literal variable indices are 1-based (`x1`, `x2`, …).
    #[error("literal variable indices are 1-based; found x0")]
    ZeroVariable,
    /// Number of literal sets must match the number of columns.
    #[error("found {found} literal sets for {expected} columns")]
    LiteralSetCount { expected: usize, found: usize },
    /// Composition needs exactly one inner program per outer variable.
    #[error("composition expects {expected} inner programs, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    /// An input bitstring does not cover every variable the program reads.
    #[error("input has {found} bits but the program reads x1..x{needed}")]
    InputLength { needed: usize, found: usize },
}

/// A literal `x_k` or `x̄_k`; `var` is the 1-based variable index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub var: usize,
    pub neg: bool,
}

impl Literal {
    /// The positive literal `x_k`.
    pub fn pos(var: usize) -> Self {
        Literal { var, neg: false }
    }

    /// The negated literal `x̄_k`.
    pub fn neg(var: usize) -> Self {
        Literal { var, neg: true }
    }

    /// The complementary literal (`x_k` ↔ `x̄_k`).
    pub fn complement(self) -> Self {
        Literal {
            var: self.var,
            neg: !self.neg,
        }
    }

    /// Truth value under the assignment `x` (index 0 holds `x1`).
    pub fn eval(self, x: &[bool]) -> bool {
        x[self.var - 1] ^ self.neg
    }
}

impl std::fmt::Display for Literal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.neg {
            write!(f, "~x{}", self.var)
        } else {
            write!(f, "x{}", self.var)
        }
    }
}

/// A span program over ℂ.
#[derive(Clone, Debug)]
pub struct SpanProgram {
    target: CVec,
    columns: CMat,
    literal_sets: Vec<Vec<Literal>>,
    num_inputs: usize,
}

/// One inner argument for [`compose`]: either a bare input wire or a span
/// program computing the subformula feeding that wire.
#[derive(Clone, Debug)]
pub enum Inner {
    /// The wire is an input variable; outer literals on it pass through.
    Leaf,
    /// The wire is computed by this span program.
    Program(SpanProgram),
}

impl Inner {
    fn arity(&self) -> usize {
        match self {
            Inner::Leaf => 1,
            Inner::Program(p) => p.num_inputs(),
        }
    }
}

impl SpanProgram {
    /// Builds a span program, validating dimensions and literal indices.
    ///
    /// Literal sets are sorted and deduplicated; `num_inputs` is the largest
    /// variable index mentioned (0 if the program reads no variables).
    pub fn new(
        target: CVec,
        columns: CMat,
        literal_sets: Vec<Vec<Literal>>,
    ) -> Result<Self, SpanProgramError> {
        if target.norm() == 0.0 {
            return Err(SpanProgramError::ZeroTarget);
        }
        if columns.nrows() != target.len() {
            return Err(SpanProgramError::ColumnDimension {
                index: 0,
                expected: target.len(),
                found: columns.nrows(),
            });
        }
        if literal_sets.len() != columns.ncols() {
            return Err(SpanProgramError::LiteralSetCount {
                expected: columns.ncols(),
                found: literal_sets.len(),
            });
        }
        let mut sets = literal_sets;
        let mut num_inputs = 0;
        for set in &mut sets {
            set.sort();
            set.dedup();
            for lit in set.iter() {
                if lit.var == 0 {
                    return Err(SpanProgramError::ZeroVariable);
                }
                num_inputs = num_inputs.max(lit.var);
            }
        }
        Ok(SpanProgram {
            target,
            columns,
            literal_sets: sets,
            num_inputs,
        })
    }

    /// Builds a program from `(column, literal set)` pairs.
    pub fn from_columns(
        target: CVec,
        cols: Vec<(CVec, Vec<Literal>)>,
    ) -> Result<Self, SpanProgramError> {
        let dim = target.len();
        for (index, (v, _)) in cols.iter().enumerate() {
            if v.len() != dim {
                return Err(SpanProgramError::ColumnDimension {
                    index,
                    expected: dim,
                    found: v.len(),
                });
            }
        }
        let (vectors, sets): (Vec<CVec>, Vec<Vec<Literal>>) = cols.into_iter().unzip();
        let columns = if vectors.is_empty() {
            CMat::zeros(dim, 0)
        } else {
            CMat::from_columns(&vectors)
        };
        SpanProgram::new(target, columns, sets)
    }

    /// The target vector `t`.
    pub fn target(&self) -> &CVec {
        &self.target
    }

    /// The grouped-input matrix `A`, one column per grouped input.
    pub fn columns(&self) -> &CMat {
        &self.columns
    }

    /// The literal sets `X_j`, parallel to the columns.
    pub fn literal_sets(&self) -> &[Vec<Literal>] {
        &self.literal_sets
    }

    /// Vector-space dimension `1 + |C|`.
    pub fn dim(&self) -> usize {
        self.target.len()
    }

    /// Number of grouped inputs `|J|`.
    pub fn num_groups(&self) -> usize {
        self.columns.ncols()
    }

    /// Largest variable index read by the program.
    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    /// True iff the target is exactly `(1, 0, …, 0)`.
    pub fn is_normalized(&self) -> bool {
        self.target[0] == cr(1.0) && self.target.iter().skip(1).all(|z| *z == cr(0.0))
    }

    fn check_input(&self, x: &[bool]) -> Result<(), SpanProgramError> {
        if x.len() < self.num_inputs {
            return Err(SpanProgramError::InputLength {
                needed: self.num_inputs,
                found: x.len(),
            });
        }
        Ok(())
    }

    /// Per-column availability: true iff every literal in `X_j` holds under `x`.
    pub fn availability(&self, x: &[bool]) -> Result<Vec<bool>, SpanProgramError> {
        self.check_input(x)?;
        Ok(self
            .literal_sets
            .iter()
            .map(|set| set.iter().all(|lit| lit.eval(x)))
            .collect())
    }

    /// The matrix `A·Π(x)`: unavailable columns zeroed out.
    pub fn masked_columns(&self, x: &[bool]) -> Result<CMat, SpanProgramError> {
        let avail = self.availability(x)?;
        let mut m = self.columns.clone();
        for (j, ok) in avail.iter().enumerate() {
            if !ok {
                m.column_mut(j).fill(cr(0.0));
            }
        }
        Ok(m)
    }

    /// Evaluates `f_P(x)`: true iff `t` lies in the span of the available
    /// columns, decided by comparing `rank(AΠ)` against `rank([AΠ | t])`.
    pub fn evaluate(&self, x: &[bool]) -> Result<bool, SpanProgramError> {
        let masked = self.masked_columns(x)?;
        let mut augmented = CMat::zeros(self.dim(), self.num_groups() + 1);
        augmented.columns_mut(0, self.num_groups()).copy_from(&masked);
        augmented
            .column_mut(self.num_groups())
            .copy_from(&self.target);
        Ok(crate::linalg::rank(&masked) == crate::linalg::rank(&augmented))
    }

    /// Returns an equivalent program with target `(1, 0, …, 0)`.
    ///
    /// Applies the unitary basis change sending `t/‖t‖` to `e_O`, then scales
    /// row `O` by `1/‖t‖`. Both steps preserve `f_P` on every input and
    /// preserve every witness size under identical grouped-input weights.
    pub fn normalize_target(&self) -> SpanProgram {
        if self.is_normalized() {
            return self.clone();
        }
        let dim = self.dim();
        let norm = self.target.norm();
        let u = &self.target / cr(norm);
        let alpha = if u[0].norm() > 0.0 {
            u[0] / cr(u[0].norm())
        } else {
            cr(1.0)
        };
        let mut v = u.clone();
        v[0] -= alpha;
        let reflector = if v.norm() > 1e-15 {
            let vv = &v * v.adjoint();
            CMat::identity(dim, dim) - vv.scale(2.0 / v.norm_squared())
        } else {
            CMat::identity(dim, dim)
        };
        let mut columns = &reflector * &self.columns;
        let row_scale = alpha.conj() / cr(norm);
        for j in 0..columns.ncols() {
            columns[(0, j)] *= row_scale;
        }
        let mut target = CVec::zeros(dim);
        target[0] = cr(1.0);
        SpanProgram {
            target,
            columns,
            literal_sets: self.literal_sets.clone(),
            num_inputs: self.num_inputs,
        }
    }

    /// The dual program `P†` with `f_{P†}(x) = ¬f_P(x)` on every input.
    ///
    /// Mechanical construction (the read-off of the graph obtained by placing
    /// a NOT gadget at the output and below every input, complementing all
    /// literals): on the normalized program with coordinates `{O} ∪ C` and
    /// groups `J`, the dual lives on coordinates `{O'} ∪ J` and has
    /// - one free column per old coordinate `r`, with entry `1` on `O'` iff
    ///   `r = O` and entry `conj(A[r, j])` on coordinate `j`;
    /// - one column `e_j` per literal occurrence `ℓ ∈ X_j`, labeled by the
    ///   complementary literal.
    pub fn dual(&self) -> SpanProgram {
        let p = self.normalize_target();
        let groups = p.num_groups();
        let dim_new = 1 + groups;
        let mut cols: Vec<(CVec, Vec<Literal>)> = Vec::new();
        for r in 0..p.dim() {
            let mut col = CVec::zeros(dim_new);
            if r == 0 {
                col[0] = cr(1.0);
            }
            for j in 0..groups {
                col[1 + j] = p.columns[(r, j)].conj();
            }
            cols.push((col, Vec::new()));
        }
        for (j, set) in p.literal_sets.iter().enumerate() {
            for lit in set {
                let mut col = CVec::zeros(dim_new);
                col[1 + j] = cr(1.0);
                cols.push((col, vec![lit.complement()]));
            }
        }
        let mut target = CVec::zeros(dim_new);
        target[0] = cr(1.0);
        let mut dual =
            SpanProgram::from_columns(target, cols).expect("dual assembly is dimension-consistent");
        dual.num_inputs = self.num_inputs;
        dual
    }

    /// Scales the output row (coordinate `O`) of the column matrix by a
    /// nonzero real factor, keeping the target fixed.
    ///
    /// On a normalized program this is an invertible diagonal row scaling, so
    /// `f_P` is unchanged on every input; every true-case witness size is
    /// multiplied by `1/factor²` and every false-case one by `factor²`.
    pub fn scale_output_row(&self, factor: f64) -> SpanProgram {
        assert!(factor != 0.0, "output-row scale must be nonzero");
        let p = self.normalize_target();
        let mut columns = p.columns.clone();
        for j in 0..columns.ncols() {
            columns[(0, j)] *= cr(factor);
        }
        SpanProgram {
            target: p.target,
            columns,
            literal_sets: p.literal_sets,
            num_inputs: p.num_inputs,
        }
    }

    /// Rewrites every literal `x_k` as `map[k−1]` (and `x̄_k` as its
    /// complement), leaving vectors untouched.
    ///
    /// The map may send several old variables to the same new variable, which
    /// is how a composed read-once program is specialized onto shared inputs:
    /// `f_relabeled(x) = f(map(x))` pointwise. `num_inputs` becomes the
    /// largest variable index the map mentions.
    pub fn relabel(&self, map: &[Literal]) -> Result<SpanProgram, SpanProgramError> {
        if map.len() < self.num_inputs {
            return Err(SpanProgramError::ArityMismatch {
                expected: self.num_inputs,
                found: map.len(),
            });
        }
        if map.iter().any(|lit| lit.var == 0) {
            return Err(SpanProgramError::ZeroVariable);
        }
        let sets = self
            .literal_sets
            .iter()
            .map(|set| {
                set.iter()
                    .map(|lit| {
                        let image = map[lit.var - 1];
                        if lit.neg {
                            image.complement()
                        } else {
                            image
                        }
                    })
                    .collect()
            })
            .collect();
        let mut relabeled = SpanProgram::new(self.target.clone(), self.columns.clone(), sets)?;
        relabeled.num_inputs = map.iter().map(|lit| lit.var).max().unwrap_or(0);
        Ok(relabeled)
    }

    /// Structurally expands every grouped input with ≥ 2 literals into
    /// singleton-labeled columns, preserving `f_P` exactly.
    ///
    /// A group `v_j` with literals `ℓ_1 … ℓ_m` becomes a telescoping chain on
    /// `m − 1` fresh coordinates: `c_1 = v_j + e_{r_1}` (labeled `ℓ_1`),
    /// `c_k = e_{r_k} − e_{r_{k−1}}` (labeled `ℓ_k`), `c_m = −e_{r_{m−1}}`
    /// (labeled `ℓ_m`). The chain sums to `v_j` when every literal holds and
    /// contributes nothing otherwise.
    pub fn expand_grouped(&self) -> SpanProgram {
        let extra: usize = self
            .literal_sets
            .iter()
            .map(|s| s.len().saturating_sub(1))
            .sum();
        if extra == 0 {
            return self.clone();
        }
        let dim = self.dim() + extra;
        let mut cols: Vec<(CVec, Vec<Literal>)> = Vec::new();
        let mut next_coord = self.dim();
        for (j, set) in self.literal_sets.iter().enumerate() {
            let old = self.columns.column(j);
            if set.len() <= 1 {
                let mut col = CVec::zeros(dim);
                for r in 0..self.dim() {
                    col[r] = old[r];
                }
                cols.push((col, set.clone()));
                continue;
            }
            let m = set.len();
            let chain_start = next_coord;
            next_coord += m - 1;
            for (k, lit) in set.iter().enumerate() {
                let mut col = CVec::zeros(dim);
                if k == 0 {
                    for r in 0..self.dim() {
                        col[r] = old[r];
                    }
                    col[chain_start] = cr(1.0);
                } else {
                    col[chain_start + k - 1] = cr(-1.0);
                    if k < m - 1 {
                        col[chain_start + k] = cr(1.0);
                    }
                }
                cols.push((col, vec![*lit]));
            }
        }
        let mut target = CVec::zeros(dim);
        for r in 0..self.dim() {
            target[r] = self.target[r];
        }
        let mut expanded = SpanProgram::from_columns(target, cols)
            .expect("expansion assembly is dimension-consistent");
        expanded.num_inputs = self.num_inputs;
        expanded
    }
}

/// Composes `outer` with one inner argument per outer variable.
///
/// Each literal occurrence of outer variable `k` is handled by its own copy
/// of `inners[k−1]`:
/// - a [`Inner::Leaf`] wire keeps the literal, relabeled to the composed
///   variable numbering;
/// - a positive occurrence of a [`Inner::Program`] wire is replaced by a copy
///   of that program: the occurrence's literal is dropped from `X_j`, the
///   outer column gains entry `1` on the copy's output coordinate (the
///   output-edge identification), and the copy's columns are appended on
///   fresh coordinates;
/// - a negated occurrence uses the copy's [`SpanProgram::dual`] instead,
///   which is exactly the NOT-gadget insertion on the graph side.
///
/// Inner variables are renumbered in argument order: inner `k` reads the
/// composed variables `offset_k + 1 ..= offset_k + arity_k`. Copies of the
/// same inner share variables, so an outer program with several occurrences
/// of one variable stays well-defined.
pub fn compose(outer: &SpanProgram, inners: &[Inner]) -> Result<SpanProgram, SpanProgramError> {
    if inners.len() != outer.num_inputs() {
        return Err(SpanProgramError::ArityMismatch {
            expected: outer.num_inputs(),
            found: inners.len(),
        });
    }
    let mut offsets = vec![0usize; inners.len() + 1];
    for (k, inner) in inners.iter().enumerate() {
        offsets[k + 1] = offsets[k] + inner.arity();
    }
    let relabel = |lit: &Literal| Literal {
        var: offsets[lit.var - 1] + 1,
        neg: lit.neg,
    };

    // One prepared copy per program-literal occurrence, in (column, literal)
    // scan order: the normalized inner (or its dual) with variables shifted.
    struct Occurrence {
        outer_col: usize,
        copy: SpanProgram,
    }
    let mut occurrences: Vec<Occurrence> = Vec::new();
    let mut kept_sets: Vec<Vec<Literal>> = Vec::new();
    for (j, set) in outer.literal_sets().iter().enumerate() {
        let mut kept = Vec::new();
        for lit in set {
            match &inners[lit.var - 1] {
                Inner::Leaf => kept.push(relabel(lit)),
                Inner::Program(p) => {
                    let base = if lit.neg {
                        p.dual()
                    } else {
                        p.normalize_target()
                    };
                    let shift = offsets[lit.var - 1];
                    let shifted_sets: Vec<Vec<Literal>> = base
                        .literal_sets()
                        .iter()
                        .map(|s| {
                            s.iter()
                                .map(|l| Literal {
                                    var: l.var + shift,
                                    neg: l.neg,
                                })
                                .collect()
                        })
                        .collect();
                    let copy = SpanProgram::new(
                        base.target().clone(),
                        base.columns().clone(),
                        shifted_sets,
                    )
                    .expect("relabeling preserves validity");
                    occurrences.push(Occurrence {
                        outer_col: j,
                        copy,
                    });
                }
            }
        }
        kept_sets.push(kept);
    }

    let dim_total: usize =
        outer.dim() + occurrences.iter().map(|o| o.copy.dim()).sum::<usize>();
    let cols_total: usize =
        outer.num_groups() + occurrences.iter().map(|o| o.copy.num_groups()).sum::<usize>();
    let mut columns = CMat::zeros(dim_total, cols_total);
    let mut sets: Vec<Vec<Literal>> = Vec::with_capacity(cols_total);

    for j in 0..outer.num_groups() {
        for r in 0..outer.dim() {
            columns[(r, j)] = outer.columns()[(r, j)];
        }
        sets.push(kept_sets[j].clone());
    }
    let mut row_off = outer.dim();
    let mut col_off = outer.num_groups();
    for occ in &occurrences {
        // Output-edge identification: weight-1 entry linking the outer column
        // to the copy's output coordinate.
        columns[(row_off, occ.outer_col)] = cr(1.0);
        for jj in 0..occ.copy.num_groups() {
            for rr in 0..occ.copy.dim() {
                columns[(row_off + rr, col_off + jj)] = occ.copy.columns()[(rr, jj)];
            }
            sets.push(occ.copy.literal_sets()[jj].clone());
        }
        row_off += occ.copy.dim();
        col_off += occ.copy.num_groups();
    }

    let mut target = CVec::zeros(dim_total);
    for r in 0..outer.dim() {
        target[r] = outer.target()[r];
    }
    let mut composed =
        SpanProgram::new(target, columns, sets).expect("composition assembly is consistent");
    composed.num_inputs = offsets[inners.len()];
    Ok(composed)
}

#[derive(Serialize, Deserialize)]
struct ColumnRepr {
    vector: Vec<[f64; 2]>,
    literals: Vec<Literal>,
}

#[derive(Serialize, Deserialize)]
struct SpanProgramRepr {
    target: Vec<[f64; 2]>,
    columns: Vec<ColumnRepr>,
}

impl Serialize for SpanProgram {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let repr = SpanProgramRepr {
            target: self.target.iter().map(|z| [z.re, z.im]).collect(),
            columns: (0..self.num_groups())
                .map(|j| ColumnRepr {
                    vector: self.columns.column(j).iter().map(|z| [z.re, z.im]).collect(),
                    literals: self.literal_sets[j].clone(),
                })
                .collect(),
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SpanProgram {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = SpanProgramRepr::deserialize(deserializer)?;
        let target = CVec::from_vec(repr.target.iter().map(|p| c(p[0], p[1])).collect());
        let cols = repr
            .columns
            .into_iter()
            .map(|col| {
                (
                    CVec::from_vec(col.vector.iter().map(|p| c(p[0], p[1])).collect()),
                    col.literals,
                )
            })
            .collect();
        SpanProgram::from_columns(target, cols).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::cr;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// The 3-majority program: target (1, 0), columns (1/√3, ω^k) on literal
    /// x_{k+1}, with ω = e^{2πi/3}.
    fn maj_program() -> SpanProgram {
        let s = 1.0 / 3.0f64.sqrt();
        let omega = c(-0.5, 3.0f64.sqrt() / 2.0);
        SpanProgram::from_columns(
            CVec::from_vec(vec![cr(1.0), cr(0.0)]),
            vec![
                (CVec::from_vec(vec![cr(s), cr(1.0)]), vec![Literal::pos(1)]),
                (CVec::from_vec(vec![cr(s), omega]), vec![Literal::pos(2)]),
                (
                    CVec::from_vec(vec![cr(s), omega.conj()]),
                    vec![Literal::pos(3)],
                ),
            ],
        )
        .unwrap()
    }

    fn bits(n: usize, value: usize) -> Vec<bool> {
        (0..n).map(|i| (value >> (n - 1 - i)) & 1 == 1).collect()
    }

    #[test]
    fn maj_program_matches_majority() {
        let p = maj_program();
        for v in 0..8 {
            let x = bits(3, v);
            let expect = x.iter().filter(|&&b| b).count() >= 2;
            assert_eq!(p.evaluate(&x).unwrap(), expect, "input {v:03b}");
        }
    }

    #[test]
    fn empty_literal_set_is_always_available() {
        let p = SpanProgram::from_columns(
            CVec::from_vec(vec![cr(2.0)]),
            vec![(CVec::from_vec(vec![cr(2.0)]), vec![])],
        )
        .unwrap();
        assert!(p.evaluate(&[]).unwrap());
        assert!(p.evaluate(&[true, false]).unwrap());
    }

    #[test]
    fn short_input_is_rejected() {
        let p = maj_program();
        assert!(matches!(
            p.evaluate(&[true]),
            Err(SpanProgramError::InputLength { needed: 3, found: 1 })
        ));
    }

    #[test]
    fn zero_target_is_rejected() {
        let err = SpanProgram::from_columns(CVec::zeros(2), vec![]).unwrap_err();
        assert!(matches!(err, SpanProgramError::ZeroTarget));
    }

    #[test]
    fn normalize_swaps_coordinates_for_flipped_target() {
        let p = SpanProgram::from_columns(
            CVec::from_vec(vec![cr(0.0), cr(1.0)]),
            vec![
                (CVec::from_vec(vec![cr(3.0), cr(4.0)]), vec![Literal::pos(1)]),
            ],
        )
        .unwrap();
        let n = p.normalize_target();
        assert!(n.is_normalized());
        assert!((n.columns()[(0, 0)] - cr(4.0)).norm() < 1e-12);
        assert!((n.columns()[(1, 0)] - cr(3.0)).norm() < 1e-12);
    }

    #[test]
    fn normalize_keeps_already_normalized_program() {
        let p = maj_program();
        let n = p.normalize_target();
        assert_eq!(n.columns(), p.columns());
        assert_eq!(n.target(), p.target());
    }

    fn random_program(rng: &mut ChaCha8Rng, dim: usize, cols: usize, vars: usize) -> SpanProgram {
        loop {
            let target =
                CVec::from_fn(dim, |_, _| c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)));
            if target.norm() < 0.3 {
                continue;
            }
            let column_list = (0..cols)
                .map(|_| {
                    let v = CVec::from_fn(dim, |_, _| {
                        c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
                    });
                    let set = if rng.gen_bool(0.15) {
                        vec![]
                    } else {
                        vec![Literal {
                            var: rng.gen_range(1..=vars),
                            neg: rng.gen_bool(0.5),
                        }]
                    };
                    (v, set)
                })
                .collect();
            let mut p = SpanProgram::from_columns(target, column_list).unwrap();
            p.num_inputs = vars;
            return p;
        }
    }

    #[test]
    fn normalize_preserves_evaluation_on_random_programs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let p = random_program(&mut rng, 3, 4, 3);
            let n = p.normalize_target();
            for v in 0..8 {
                let x = bits(3, v);
                assert_eq!(p.evaluate(&x).unwrap(), n.evaluate(&x).unwrap());
            }
        }
    }

    #[test]
    fn dual_of_majority_computes_complement() {
        let p = maj_program();
        let d = p.dual();
        assert_eq!(d.dim(), 4);
        assert_eq!(d.num_groups(), 5);
        for v in 0..8 {
            let x = bits(3, v);
            assert_eq!(d.evaluate(&x).unwrap(), !p.evaluate(&x).unwrap(), "input {v:03b}");
        }
        // Shape of the dual: two free columns (one per old coordinate) and
        // three singleton columns labeled by the complemented literals.
        assert!(d.literal_sets()[0].is_empty());
        assert!(d.literal_sets()[1].is_empty());
        for (k, set) in d.literal_sets().iter().skip(2).enumerate() {
            assert_eq!(set.as_slice(), &[Literal::neg(k + 1)]);
        }
    }

    #[test]
    fn double_dual_restores_function() {
        let p = maj_program();
        let dd = p.dual().dual();
        for v in 0..8 {
            let x = bits(3, v);
            assert_eq!(dd.evaluate(&x).unwrap(), p.evaluate(&x).unwrap());
        }
    }

    #[test]
    fn dual_of_constant_true_is_constant_false() {
        let p = SpanProgram::from_columns(
            CVec::from_vec(vec![cr(1.0)]),
            vec![(CVec::from_vec(vec![cr(1.0)]), vec![])],
        )
        .unwrap();
        assert!(p.evaluate(&[]).unwrap());
        assert!(!p.dual().evaluate(&[]).unwrap());
    }

    #[test]
    fn dual_on_random_programs_negates() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let p = random_program(&mut rng, 3, 4, 3);
            let d = p.dual();
            for v in 0..8 {
                let x = bits(3, v);
                assert_eq!(
                    d.evaluate(&x).unwrap(),
                    !p.evaluate(&x).unwrap(),
                    "dual failed on input {v:03b}"
                );
            }
        }
    }

    #[test]
    fn compose_majority_with_inner_majority() {
        let maj = maj_program();
        let composed = compose(
            &maj,
            &[Inner::Leaf, Inner::Leaf, Inner::Program(maj.clone())],
        )
        .unwrap();
        assert_eq!(composed.dim(), 4);
        assert_eq!(composed.num_groups(), 6);
        assert_eq!(composed.num_inputs(), 5);

        // Outer columns keep their literals x1, x2; the third becomes free.
        assert_eq!(composed.literal_sets()[0].as_slice(), &[Literal::pos(1)]);
        assert_eq!(composed.literal_sets()[1].as_slice(), &[Literal::pos(2)]);
        assert!(composed.literal_sets()[2].is_empty());
        for (k, set) in composed.literal_sets().iter().skip(3).enumerate() {
            assert_eq!(set.as_slice(), &[Literal::pos(k + 3)]);
        }

        // Block structure: outer coordinates on top, the copy below, linked
        // by a weight-1 entry on the copy's output coordinate.
        let a = composed.columns();
        assert!((a[(2, 2)] - cr(1.0)).norm() < 1e-15);
        for j in 0..3 {
            assert_eq!(a[(2, j)], if j == 2 { cr(1.0) } else { cr(0.0) });
            assert_eq!(a[(3, j)], cr(0.0));
            for r in 0..2 {
                assert_eq!(a[(r, j)], maj.columns()[(r, j)]);
                assert_eq!(a[(r, 3 + j)], cr(0.0));
            }
            for r in 0..2 {
                assert_eq!(a[(2 + r, 3 + j)], maj.columns()[(r, j)]);
            }
        }

        for v in 0..32 {
            let x = bits(5, v);
            let inner = x[2] as u8 + x[3] as u8 + x[4] as u8 >= 2;
            let expect = x[0] as u8 + x[1] as u8 + inner as u8 >= 2;
            assert_eq!(composed.evaluate(&x).unwrap(), expect, "input {v:05b}");
        }
    }

    #[test]
    fn compose_with_all_leaves_is_identity() {
        let maj = maj_program();
        let composed = compose(&maj, &[Inner::Leaf, Inner::Leaf, Inner::Leaf]).unwrap();
        assert_eq!(composed.columns(), maj.columns());
        assert_eq!(composed.target(), maj.target());
        assert_eq!(composed.literal_sets(), maj.literal_sets());
    }

    #[test]
    fn compose_arity_mismatch_is_rejected() {
        let maj = maj_program();
        assert!(matches!(
            compose(&maj, &[Inner::Leaf]),
            Err(SpanProgramError::ArityMismatch { expected: 3, found: 1 })
        ));
    }

    #[test]
    fn negated_occurrence_uses_the_dual_copy() {
        // Outer program: f(y) = ¬y via the single literal ȳ1.
        let outer = SpanProgram::from_columns(
            CVec::from_vec(vec![cr(1.0)]),
            vec![(CVec::from_vec(vec![cr(1.0)]), vec![Literal::neg(1)])],
        )
        .unwrap();
        // Inner: AND of two variables as one grouped input.
        let and2 = SpanProgram::from_columns(
            CVec::from_vec(vec![cr(1.0)]),
            vec![(
                CVec::from_vec(vec![cr(1.0)]),
                vec![Literal::pos(1), Literal::pos(2)],
            )],
        )
        .unwrap();
        let composed = compose(&outer, &[Inner::Program(and2)]).unwrap();
        for v in 0..4 {
            let x = bits(2, v);
            assert_eq!(composed.evaluate(&x).unwrap(), !(x[0] && x[1]), "input {v:02b}");
        }
    }

    #[test]
    fn relabel_specializes_onto_shared_negated_inputs() {
        let p = maj_program();
        let q = p
            .relabel(&[Literal::neg(2), Literal::neg(3), Literal::pos(4)])
            .unwrap();
        assert_eq!(q.num_inputs(), 4);
        assert_eq!(q.columns(), p.columns());
        for v in 0..16 {
            let x = bits(4, v);
            let expect = (!x[1]) as u8 + (!x[2]) as u8 + x[3] as u8 >= 2;
            assert_eq!(q.evaluate(&x).unwrap(), expect, "input {v:04b}");
        }
        // Double negation cancels: relabeling x̄1 by x̄2 yields x2.
        let flip = SpanProgram::from_columns(
            CVec::from_vec(vec![cr(1.0)]),
            vec![(CVec::from_vec(vec![cr(1.0)]), vec![Literal::neg(1)])],
        )
        .unwrap();
        let double = flip.relabel(&[Literal::neg(2)]).unwrap();
        assert_eq!(double.literal_sets()[0].as_slice(), &[Literal::pos(2)]);
    }

    #[test]
    fn relabel_rejects_short_map() {
        let p = maj_program();
        assert!(matches!(
            p.relabel(&[Literal::pos(1)]),
            Err(SpanProgramError::ArityMismatch { expected: 3, found: 1 })
        ));
    }

    #[test]
    fn grouped_expansion_preserves_function() {
        let g = {
            // (x1 ∧ x2 ∧ x3) ∨ (x̄1 ∧ x̄2) with two non-singleton groups.
            let a1 = (1.0 + 1.0 / 3.0f64.sqrt()).powf(0.25);
            let a2 = (3.0f64.sqrt() - 1.0).sqrt();
            SpanProgram::from_columns(
                CVec::from_vec(vec![cr(1.0), cr(0.0)]),
                vec![
                    (
                        CVec::from_vec(vec![cr(a1), cr(a2)]),
                        vec![Literal::pos(1), Literal::pos(2)],
                    ),
                    (
                        CVec::from_vec(vec![cr(a1 * a2), cr(0.0)]),
                        vec![Literal::neg(1), Literal::neg(2)],
                    ),
                    (CVec::from_vec(vec![cr(0.0), cr(1.0)]), vec![Literal::pos(3)]),
                ],
            )
            .unwrap()
        };
        let e = g.expand_grouped();
        assert!(e.literal_sets().iter().all(|s| s.len() <= 1));
        assert_eq!(e.dim(), g.dim() + 2);
        for v in 0..8 {
            let x = bits(3, v);
            let expect = (x[0] && x[1] && x[2]) || (!x[0] && !x[1]);
            assert_eq!(g.evaluate(&x).unwrap(), expect);
            assert_eq!(e.evaluate(&x).unwrap(), expect, "expanded, input {v:03b}");
        }
    }

    #[test]
    fn json_round_trip_preserves_program() {
        let p = maj_program();
        let text = serde_json::to_string(&p).unwrap();
        let q: SpanProgram = serde_json::from_str(&text).unwrap();
        assert_eq!(p.target(), q.target());
        assert_eq!(p.columns(), q.columns());
        assert_eq!(p.literal_sets(), q.literal_sets());
    }

    #[test]
    fn json_shape_matches_documented_schema() {
        let p = maj_program();
        let value: serde_json::Value = serde_json::to_value(&p).unwrap();
        assert!(value["target"].is_array());
        assert_eq!(value["target"][0][0], 1.0);
        assert_eq!(value["columns"][0]["literals"][0]["var"], 1);
        assert_eq!(value["columns"][0]["literals"][0]["neg"], false);
        assert!(value["columns"][0]["vector"][1].is_array());
    }
}
