//! Span-program witness sizes with grouped-input complexities.
//!
//! For each input `x` the witness size is a weighted least-squares quantity:
//! in the true case the minimum `Ĝ^{1/2}`-weighted squared length of a
//! coefficient vector reaching the target, in the false case the same for a
//! separating functional. Each case has two independent closed-form
//! expressions (pseudoinverse routes); [`witness_size`] evaluates both and
//! insists they agree, and [`witness_size_variational`] re-derives the value
//! by explicit constrained least squares over a null-space parameterization
//! as a third, structurally different route.

use crate::linalg::{cr, lstsq, kernel_basis, pinv, pinv_with_cutoff, CMat, CVec};
use crate::spanprog::{SpanProgram, SpanProgramError};
use serde::ser::SerializeStruct;
use serde::Serialize;
use thiserror::Error;

/// Tolerance for the runtime agreement check between the two closed forms,
/// relative with floor 1 (witness sizes of interest are of order 1..16).
pub const EXPRESSION_TOL: f64 = 1e-9;

/// Feasibility tolerance for witness residuals, relative to the column scale.
pub const FEASIBILITY_TOL: f64 = 1e-8;

/// Largest input count for exhaustive maximization.
pub const MAX_ENUM_INPUTS: usize = 16;

/// Errors from witness-size computations.
#[derive(Debug, Error)]
pub enum WitnessError {
    #[error(transparent)]
    Program(#[from] SpanProgramError),
    /// Input costs must be strictly positive.
    #[error("input cost for x{var} must be positive, got {value}")]
    NonpositiveCost { var: usize, value: f64 },
    /// The cost vector must cover every variable the program reads.
    #[error("cost vector covers {found} inputs but the program reads x1..x{needed}")]
    CostLength { needed: usize, found: usize },
    /// Group-weight vectors must match the number of grouped inputs.
    #[error("got {found} group weights for {expected} grouped inputs")]
    WeightLength { expected: usize, found: usize },
    /// The two closed-form expressions disagreed beyond [`EXPRESSION_TOL`].
    #[error("witness-size expressions disagree: primary {primary}, alternative {alternative}")]
    ExpressionMismatch { primary: f64, alternative: f64 },
    /// The rank test and the witness feasibility residual disagree.
    #[error("span-membership test and witness residual disagree on input {x} (residual {residual:.3e})")]
    CaseMismatch { x: String, residual: f64 },
    /// Exhaustive maximization is capped at [`MAX_ENUM_INPUTS`] inputs.
    #[error("program reads {found} inputs; exhaustive maximization is capped at {cap}")]
    TooManyInputs { found: usize, cap: usize },
}

/// Per-input subformula complexities Ŝ, indexed by variable.
///
/// Composed subformula complexities are always ≥ 1, but any strictly
/// positive cost is admitted so that parameterized gate programs can be
/// checked at sub-unit cost ratios.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexityVector {
    costs: Vec<f64>,
}

impl ComplexityVector {
    /// Builds a cost vector; `costs[k]` is the complexity of `x_{k+1}`.
    pub fn new(costs: Vec<f64>) -> Result<Self, WitnessError> {
        for (k, &value) in costs.iter().enumerate() {
            if !(value > 0.0) || !value.is_finite() {
                return Err(WitnessError::NonpositiveCost { var: k + 1, value });
            }
        }
        Ok(ComplexityVector { costs })
    }

    /// The balanced unit-cost vector on `n` inputs.
    pub fn ones(n: usize) -> Self {
        ComplexityVector {
            costs: vec![1.0; n],
        }
    }

    /// Number of inputs covered.
    pub fn len(&self) -> usize {
        self.costs.len()
    }

    /// True iff the vector covers no inputs.
    pub fn is_empty(&self) -> bool {
        self.costs.is_empty()
    }

    /// The cost Ŝ of variable `var` (1-based).
    pub fn cost(&self, var: usize) -> f64 {
        self.costs[var - 1]
    }

    /// Scales every cost by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        ComplexityVector {
            costs: self.costs.iter().map(|s| s * factor).collect(),
        }
    }

    fn check_covers(&self, p: &SpanProgram) -> Result<(), WitnessError> {
        if self.costs.len() < p.num_inputs() {
            return Err(WitnessError::CostLength {
                needed: p.num_inputs(),
                found: self.costs.len(),
            });
        }
        Ok(())
    }
}

/// Which case of the witness-size definition applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseTag {
    True,
    False,
}

/// Witness size on one input, with the optimizing witness vector.
#[derive(Clone, Debug)]
pub struct WitnessReport {
    /// The input, most significant variable (`x1`) first.
    pub x: Vec<bool>,
    pub case_tag: CaseTag,
    /// The witness size `wsize_x`.
    pub value: f64,
    /// True case: the coefficient vector `w` (one entry per grouped input).
    /// False case: the separating vector `w'` (one entry per coordinate).
    pub witness: CVec,
    /// Feasibility residual of the witness constraints.
    pub residual: f64,
}

impl WitnessReport {
    /// The input as a `0`/`1` string, `x1` first.
    pub fn input_string(&self) -> String {
        self.x.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

impl Serialize for WitnessReport {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("WitnessReport", 5)?;
        s.serialize_field("x", &self.input_string())?;
        s.serialize_field("case", &self.case_tag)?;
        s.serialize_field("value", &self.value)?;
        s.serialize_field(
            "witness",
            &self.witness.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
        )?;
        s.serialize_field("residual", &self.residual)?;
        s.end()
    }
}

/// Grouped-input complexities Ĝ_j(x), one per grouped input.
///
/// A true grouped input (every literal satisfied) has weight the sum of its
/// literals' costs, or 1 when the literal set is empty. A false one has the
/// harmonic combination `(Σ_{false i} Ŝ_i^{-1})^{-1}` over its false
/// literals only.
pub fn grouped_complexity(
    p: &SpanProgram,
    x: &[bool],
    u: &ComplexityVector,
) -> Result<Vec<f64>, WitnessError> {
    u.check_covers(p)?;
    let avail = p.availability(x)?;
    let mut weights = Vec::with_capacity(p.num_groups());
    for (j, set) in p.literal_sets().iter().enumerate() {
        let w = if avail[j] {
            if set.is_empty() {
                1.0
            } else {
                set.iter().map(|lit| u.cost(lit.var)).sum()
            }
        } else {
            let inv: f64 = set
                .iter()
                .filter(|lit| !lit.eval(x))
                .map(|lit| 1.0 / u.cost(lit.var))
                .sum();
            1.0 / inv
        };
        weights.push(w);
    }
    Ok(weights)
}

struct Cases {
    normalized: SpanProgram,
    avail: Vec<bool>,
    s: Vec<f64>,
    truth: bool,
}

fn prepare(p: &SpanProgram, x: &[bool], ghat: &[f64]) -> Result<Cases, WitnessError> {
    if ghat.len() != p.num_groups() {
        return Err(WitnessError::WeightLength {
            expected: p.num_groups(),
            found: ghat.len(),
        });
    }
    for (j, &g) in ghat.iter().enumerate() {
        if !(g > 0.0) || !g.is_finite() {
            return Err(WitnessError::NonpositiveCost {
                var: j + 1,
                value: g,
            });
        }
    }
    let normalized = p.normalize_target();
    let avail = normalized.availability(x)?;
    let truth = normalized.evaluate(x)?;
    Ok(Cases {
        normalized,
        avail,
        s: ghat.iter().map(|g| g.sqrt()).collect(),
        truth,
    })
}

fn scale_columns(m: &CMat, factors: &[f64]) -> CMat {
    let mut out = m.clone();
    for (j, &f) in factors.iter().enumerate() {
        out.column_mut(j).scale_mut(f);
    }
    out
}

fn mask_columns(m: &CMat, keep: &[bool]) -> CMat {
    let mut out = m.clone();
    for (j, &k) in keep.iter().enumerate() {
        if !k {
            out.column_mut(j).fill(cr(0.0));
        }
    }
    out
}

/// Constraint rows of `A`: the column matrix with the output row zeroed.
fn a_cj(a: &CMat) -> CMat {
    let mut out = a.clone();
    out.row_mut(0).fill(cr(0.0));
    out
}

/// The vector |o⟩ = (⟨t|A)† for a normalized program: conjugated output row.
fn o_vec(a: &CMat) -> CVec {
    a.row(0).adjoint()
}

fn agree(primary: f64, alternative: f64) -> Result<f64, WitnessError> {
    let scale = primary.abs().max(alternative.abs()).max(1.0);
    if (primary - alternative).abs() > EXPRESSION_TOL * scale {
        return Err(WitnessError::ExpressionMismatch {
            primary,
            alternative,
        });
    }
    Ok(primary)
}

/// Witness size with explicit per-group weights Ĝ (the `S²` diagonal).
///
/// Evaluates both closed forms for the active case and errors if they
/// disagree beyond [`EXPRESSION_TOL`]; the returned value is the primary
/// pseudoinverse expression.
pub fn witness_size_with_group_weights(
    p: &SpanProgram,
    x: &[bool],
    ghat: &[f64],
) -> Result<WitnessReport, WitnessError> {
    let cases = prepare(p, x, ghat)?;
    let pn = &cases.normalized;
    let a = pn.columns();
    let t = pn.target();
    let s_inv: Vec<f64> = cases.s.iter().map(|s| 1.0 / s).collect();
    let col_scale = a
        .iter()
        .fold(0.0f64, |acc, z| acc.max(z.norm()))
        .max(1.0);

    if cases.truth {
        // Primary: ‖(A Π S⁻¹)⁺ t‖² with minimizer w = S⁻¹(A Π S⁻¹)⁺ t.
        let apsi = scale_columns(&mask_columns(a, &cases.avail), &s_inv);
        let y = pinv(&apsi) * t;
        let value = y.norm_squared();
        let witness = CVec::from_fn(pn.num_groups(), |j, _| y[j] * cr(s_inv[j]));

        // Alternative: ‖(Π − (ā_CJ Π S⁻¹)⁺ ā_CJ Π S⁻¹) S⁻¹ |o⟩‖⁻².
        let acj = a_cj(a);
        let acj_psi = scale_columns(&mask_columns(&acj, &cases.avail), &s_inv);
        let proj = {
            let mut pi = CMat::zeros(pn.num_groups(), pn.num_groups());
            for (j, &ok) in cases.avail.iter().enumerate() {
                if ok {
                    pi[(j, j)] = cr(1.0);
                }
            }
            pi - pinv(&acj_psi) * &acj_psi
        };
        let so = CVec::from_fn(pn.num_groups(), |j, _| o_vec(a)[j] * cr(s_inv[j]));
        let alt = 1.0 / (proj * so).norm_squared();
        let value = agree(value, alt)?;

        let residual = (pn.masked_columns(x)? * &witness - t).norm();
        if residual > FEASIBILITY_TOL * col_scale {
            return Err(WitnessError::CaseMismatch {
                x: bitstring(x),
                residual,
            });
        }
        Ok(WitnessReport {
            x: x.to_vec(),
            case_tag: CaseTag::True,
            value,
            witness,
            residual,
        })
    } else {
        // Primary: ‖(1 + (Π̄ (A S)⁺ A S − 1)⁺ Π)(A S)⁺ t‖⁻².
        let a_s = scale_columns(a, &cases.s);
        let p2 = pinv(&a_s) * &a_s;
        let groups = pn.num_groups();
        let mut pibar_p2 = p2.clone();
        let mut pi = CMat::zeros(groups, groups);
        for (j, &ok) in cases.avail.iter().enumerate() {
            if ok {
                pibar_p2.row_mut(j).fill(cr(0.0));
                pi[(j, j)] = cr(1.0);
            }
        }
        let m = &pibar_p2 - CMat::identity(groups, groups);
        let m1 = CMat::identity(groups, groups) + pinv(&m) * &pi;
        let value = 1.0 / (m1 * (pinv(&a_s) * t)).norm_squared();

        // Alternative:
        // ‖(1 − (Δ̄ ā_CJ S)⁺ Δ̄ ā_CJ S) S (1 − ā_CJ†(Π ā_CJ†)⁺) |o⟩‖².
        let acj = a_cj(a);
        let acj_pi = mask_columns(&acj, &cases.avail);
        let delta = &acj_pi * pinv(&acj_pi);
        let delta_bar = CMat::identity(pn.dim(), pn.dim()) - &delta;
        let acj_s = scale_columns(&acj, &cases.s);
        // `Δ̄ ā_CJ S` can vanish identically, leaving only rounding noise;
        // cut ranks relative to the scale of `ā_CJ S` before projection.
        let derived_cutoff = crate::linalg::RANK_TOL_REL * acj_s.norm().max(1.0);
        let dbas = &delta_bar * &acj_s;
        let reducer =
            CMat::identity(groups, groups) - pinv_with_cutoff(&dbas, derived_cutoff) * &dbas;
        let pi_acj_dag = &pi * acj.adjoint();
        let core = CMat::identity(groups, groups) - acj.adjoint() * pinv(&pi_acj_dag);
        let o = o_vec(a);
        let mut s_core_o = &core * &o;
        for j in 0..groups {
            s_core_o[j] *= cr(cases.s[j]);
        }
        let alt = (&reducer * &s_core_o).norm_squared();
        let value = agree(value, alt)?;

        // Minimizer w′ = t − (Π ā_CJ†)⁺ Π|o⟩ − (S ā_CJ† Δ̄)⁺ S(1 − ā_CJ†(Π ā_CJ†)⁺)|o⟩.
        let mut pio = o.clone();
        for (j, &ok) in cases.avail.iter().enumerate() {
            if !ok {
                pio[j] = cr(0.0);
            }
        }
        let mut s_acj_dag = acj.adjoint();
        for j in 0..groups {
            s_acj_dag.row_mut(j).scale_mut(cases.s[j]);
        }
        let sadb = &s_acj_dag * &delta_bar;
        let witness =
            t - pinv(&pi_acj_dag) * &pio - pinv_with_cutoff(&sadb, derived_cutoff) * &s_core_o;

        let mut residual = (crate::linalg::inner(t, &witness) - cr(1.0)).norm();
        let pa_dag_w = {
            let mut v = a.adjoint() * &witness;
            for (j, &ok) in cases.avail.iter().enumerate() {
                if !ok {
                    v[j] = cr(0.0);
                }
            }
            v
        };
        residual = residual.max(pa_dag_w.norm());
        if residual > FEASIBILITY_TOL * col_scale {
            return Err(WitnessError::CaseMismatch {
                x: bitstring(x),
                residual,
            });
        }
        Ok(WitnessReport {
            x: x.to_vec(),
            case_tag: CaseTag::False,
            value,
            witness,
            residual,
        })
    }
}

/// Witness size `wsize_x` with grouped weights derived from per-input costs.
pub fn witness_size(
    p: &SpanProgram,
    x: &[bool],
    u: &ComplexityVector,
) -> Result<WitnessReport, WitnessError> {
    let ghat = grouped_complexity(p, x, u)?;
    witness_size_with_group_weights(p, x, &ghat)
}

/// Independent variational evaluation of the same minimum: parameterize the
/// constraint set by a null-space basis and solve one unconstrained least
/// squares problem.
pub fn witness_size_variational(
    p: &SpanProgram,
    x: &[bool],
    u: &ComplexityVector,
) -> Result<f64, WitnessError> {
    let ghat = grouped_complexity(p, x, u)?;
    let cases = prepare(p, x, &ghat)?;
    let pn = &cases.normalized;
    let a = pn.columns();
    let t = pn.target();
    let groups = pn.num_groups();

    if cases.truth {
        // min ‖S w‖² over A Π w = t, via w = w₀ + K z.
        let a_pi = pn.masked_columns(x)?;
        let w0 = lstsq(&a_pi, t);
        let kernel = kernel_basis(&a_pi);
        let sdiag = |v: &CVec| CVec::from_fn(groups, |j, _| v[j] * cr(cases.s[j]));
        let sw0 = sdiag(&w0);
        let mut sk = kernel.clone();
        for j in 0..groups {
            sk.row_mut(j).scale_mut(cases.s[j]);
        }
        let z = lstsq(&sk, &(-&sw0));
        Ok((sw0 + sk * z).norm_squared())
    } else {
        // min ‖S A† w′‖² over ⟨t|w′⟩ = 1, Π A† w′ = 0.
        let dim = pn.dim();
        let mut constraints = CMat::zeros(1 + groups, dim);
        for r in 0..dim {
            constraints[(0, r)] = t[r].conj();
        }
        let a_dag = a.adjoint();
        for (j, &ok) in cases.avail.iter().enumerate() {
            if ok {
                for r in 0..dim {
                    constraints[(1 + j, r)] = a_dag[(j, r)];
                }
            }
        }
        let mut rhs = CVec::zeros(1 + groups);
        rhs[0] = cr(1.0);
        let w0 = lstsq(&constraints, &rhs);
        let kernel = kernel_basis(&constraints);
        let weigh = |v: &CVec| {
            let mut out = a.adjoint() * v;
            for j in 0..groups {
                out[j] *= cr(cases.s[j]);
            }
            out
        };
        let sw0 = weigh(&w0);
        let cols: Vec<CVec> = (0..kernel.ncols())
            .map(|j| weigh(&kernel.column(j).into_owned()))
            .collect();
        if cols.is_empty() {
            return Ok(sw0.norm_squared());
        }
        let sk = CMat::from_columns(&cols);
        let z = lstsq(&sk, &(-&sw0));
        Ok((sw0 + sk * z).norm_squared())
    }
}

fn bitstring(x: &[bool]) -> String {
    x.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn enumerate_inputs(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0..(1usize << n)).map(move |v| (0..n).map(|i| (v >> (n - 1 - i)) & 1 == 1).collect())
}

/// `wsize P = max_x wsize_x P` by exhaustive enumeration (≤ 16 inputs).
pub fn max_witness_size(p: &SpanProgram, u: &ComplexityVector) -> Result<f64, WitnessError> {
    let n = p.num_inputs();
    if n > MAX_ENUM_INPUTS {
        return Err(WitnessError::TooManyInputs {
            found: n,
            cap: MAX_ENUM_INPUTS,
        });
    }
    let mut worst: f64 = 0.0;
    for x in enumerate_inputs(n) {
        worst = worst.max(witness_size(p, &x, u)?.value);
    }
    Ok(worst)
}

/// Result of balancing the worst true case against the worst false case by
/// rescaling the output row.
#[derive(Clone, Debug, Serialize)]
pub struct BalancedWitness {
    /// Balanced witness size `√(T·F)` (or the one-sided maximum when the
    /// function is constant).
    pub value: f64,
    /// Worst true-case witness size of the unscaled program.
    pub true_max: f64,
    /// Worst false-case witness size of the unscaled program.
    pub false_max: f64,
    /// Output-row scale `(T/F)^{1/4}` applied to reach the balance.
    pub scale: f64,
}

/// Balances a program's worst true case against its worst false case.
///
/// Scaling the output row by `γ` multiplies true-case witness sizes by
/// `1/γ²` and false-case ones by `γ²`, so `γ = (T/F)^{1/4}` makes both
/// extremes equal `√(T·F)`.
pub fn balanced_max_witness_size(
    p: &SpanProgram,
    u: &ComplexityVector,
) -> Result<BalancedWitness, WitnessError> {
    let n = p.num_inputs();
    if n > MAX_ENUM_INPUTS {
        return Err(WitnessError::TooManyInputs {
            found: n,
            cap: MAX_ENUM_INPUTS,
        });
    }
    let mut true_max: f64 = 0.0;
    let mut false_max: f64 = 0.0;
    for x in enumerate_inputs(n) {
        let report = witness_size(p, &x, u)?;
        match report.case_tag {
            CaseTag::True => true_max = true_max.max(report.value),
            CaseTag::False => false_max = false_max.max(report.value),
        }
    }
    let (value, scale) = if true_max == 0.0 {
        (false_max, 1.0)
    } else if false_max == 0.0 {
        (true_max, 1.0)
    } else {
        ((true_max * false_max).sqrt(), (true_max / false_max).powf(0.25))
    };
    Ok(BalancedWitness {
        value,
        true_max,
        false_max,
        scale,
    })
}
