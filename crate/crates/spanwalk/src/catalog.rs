//! Certified gate catalog: optimal span programs and adversary certificates
//! for small boolean functions, keyed by canonicalized truth tables.
//!
//! The catalog has four layers:
//!
//! - **Truth-table conventions.** An arity-`k` function is stored as a
//!   `2^k`-bit integer whose bit `2^k − 1 − v` gives the value on the input
//!   with index `v = Σ xᵢ 2^{k−i}` (so `x1` is the most significant input
//!   bit). [`canonical_function_id3`]/[`canonical_function_id4`] reduce a
//!   table to the minimum over all input permutations, input complementations
//!   and output complementation.
//! - **Adversary certificates.** [`AdversaryCertificate`] stores the nonzero
//!   bipartite block of a spectral adversary matrix together with per-input
//!   costs; [`certificate_ratio`] evaluates the certified lower bound
//!   `‖Γ‖ / max_i (1/αᵢ)‖Γ∘Dᵢ‖`.
//! - **Program builders.** Weight-instantiated span programs for the certified
//!   gates (AND/OR/PARITY with arbitrary costs, majority, equality,
//!   threshold, and the four-bit special functions), plus
//!   [`substitute_programs`], which composes an outer program with inner
//!   programs by splicing each inner copy's output coordinate directly into
//!   the column that read the corresponding literal. This inlined splice is
//!   what keeps composed witness sizes exactly `√(ΣBᵢ²)` (OR of subprograms),
//!   `ΣBᵢ` (PARITY chains) and so on, with no per-link overhead.
//! - **The entry table.** Seventeen [`CatalogEntry`] rows pair a program with
//!   its adversary certificate; [`verify_catalog`] recomputes truth tables,
//!   balanced witness sizes, certificate ratios and closed forms and reports
//!   any deviation. All weights are generated from closed forms at load time;
//!   no decimal constants are baked in.

use std::collections::HashMap;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::formula::{Formula, FormulaError, GateKind, GateNode};
use crate::linalg::{c, cr, spectral_norm, CMat, CVec};
use crate::spanprog::{Literal, SpanProgram, SpanProgramError};
use crate::witness::{balanced_max_witness_size, ComplexityVector, WitnessError};

/// Errors raised by catalog lookups, certificate evaluation and composition.
#[derive(Debug, Error)]
pub enum CatalogError {
    /// A span-program operation failed while assembling a catalog program.
    #[error("span program construction failed: {0}")]
    Program(#[from] SpanProgramError),
    /// A witness-size computation failed.
    #[error("witness-size computation failed: {0}")]
    Witness(#[from] WitnessError),
    /// A formula operation failed.
    #[error("formula error: {0}")]
    Formula(#[from] FormulaError),
    /// A formula had the wrong number of variables for the requested table.
    #[error("expected a formula over exactly {expected} variables, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    /// A truth table does not fit the requested arity.
    #[error("truth table {value} does not fit arity {arity}")]
    TruthTableRange { arity: usize, value: u16 },
    /// The certificate is structurally inconsistent with the function.
    #[error("invalid adversary certificate: {reason}")]
    InvalidCertificate { reason: String },
    /// No catalog entry carries the given function id.
    #[error("no catalog entry for function id {id}")]
    NoSuchEntry { id: u16 },
    /// A substitution supplied the wrong number of wires.
    #[error("substitution expects {expected} wires, found {found}")]
    WireCount { expected: usize, found: usize },
    /// A complement program reads a different number of inputs than its
    /// positive partner.
    #[error("complement program reads {found} inputs, expected {expected}")]
    ComplementArity { expected: usize, found: usize },
    /// The outer program reads a wire negated but no complement program was
    /// supplied for it.
    #[error("negated occurrence of wire {wire} but no complement program was supplied")]
    MissingComplement { wire: usize },
    /// A wire's variables never appear in the composed program.
    #[error("composed program never reads variable {var}")]
    UnreadVariable { var: usize },
    /// The gate is realised structurally (graph gadget / dual), not by a
    /// catalog span program.
    #[error("gate {gate} is realised structurally, not by a catalog span program")]
    StructuralGate { gate: String },
    /// No certified program exists for this gate at these costs.
    #[error("gate {gate} has no certified program for costs {costs:?}")]
    UnsupportedCosts { gate: String, costs: Vec<f64> },
    /// The function's equivalence class is outside the certified catalog.
    #[error("no certified program for truth table {tt} (canonical id {canonical})")]
    NoProgramForClass { tt: u16, canonical: u16 },
    /// The cost vector length does not match the gate arity.
    #[error("cost vector length {found} does not match gate arity {expected}")]
    CostLength { expected: usize, found: usize },
}

// ---------------------------------------------------------------------------
// Truth-table conventions
// ---------------------------------------------------------------------------

/// Value of variable `var` (1-based) inside the input index `v` at the given
/// arity: `x1` is the most significant bit of `v`.
fn input_bit(v: u16, arity: usize, var: usize) -> bool {
    debug_assert!((1..=arity).contains(&var));
    (v >> (arity - var)) & 1 == 1
}

/// Bit of the truth table `t` (width `2^arity`) on input index `v`.
fn tt_bit(t: u16, arity: usize, v: u16) -> bool {
    let rows = 1u32 << arity;
    (t as u32 >> (rows - 1 - v as u32)) & 1 == 1
}

/// Evaluates a three-bit truth table on an assignment `(x1, x2, x3)`.
pub fn tt3_value(t: u8, x: [bool; 3]) -> bool {
    let v = ((x[0] as u16) << 2) | ((x[1] as u16) << 1) | (x[2] as u16);
    tt_bit(t as u16, 3, v)
}

/// Evaluates a four-bit truth table on an assignment `(x1, x2, x3, x4)`.
pub fn tt4_value(t: u16, x: [bool; 4]) -> bool {
    let v = ((x[0] as u16) << 3) | ((x[1] as u16) << 2) | ((x[2] as u16) << 1) | (x[3] as u16);
    tt_bit(t, 4, v)
}

/// Pads a three-bit table to the four-bit table of the same function with a
/// fourth, ignored variable.
pub fn tt3_to_tt4(t: u8) -> u16 {
    let mut out = 0u16;
    for b in 0..8u16 {
        if (t >> b) & 1 == 1 {
            out |= 0b11 << (2 * b);
        }
    }
    out
}

/// Truth table of a three-variable formula.
pub fn truth_table3(f: &Formula) -> Result<u8, CatalogError> {
    if f.num_inputs() != 3 {
        return Err(CatalogError::ArityMismatch {
            expected: 3,
            found: f.num_inputs(),
        });
    }
    let mut out = 0u8;
    for v in 0..8u16 {
        let x: Vec<bool> = (1..=3).map(|i| input_bit(v, 3, i)).collect();
        if f.evaluate_classically(&x)? {
            out |= 1 << (7 - v);
        }
    }
    Ok(out)
}

/// Truth table of a four-variable formula.
pub fn truth_table4(f: &Formula) -> Result<u16, CatalogError> {
    if f.num_inputs() != 4 {
        return Err(CatalogError::ArityMismatch {
            expected: 4,
            found: f.num_inputs(),
        });
    }
    let mut out = 0u16;
    for v in 0..16u16 {
        let x: Vec<bool> = (1..=4).map(|i| input_bit(v, 4, i)).collect();
        if f.evaluate_classically(&x)? {
            out |= 1 << (15 - v);
        }
    }
    Ok(out)
}

/// Truth table of a span program read as a function of `arity` variables
/// (trailing variables beyond `num_inputs` are ignored padding).
pub fn span_program_tt(p: &SpanProgram, arity: usize) -> Result<u16, CatalogError> {
    if p.num_inputs() > arity || arity > 4 {
        return Err(CatalogError::ArityMismatch {
            expected: arity,
            found: p.num_inputs(),
        });
    }
    let mut out = 0u16;
    for v in 0..(1u16 << arity) {
        let x: Vec<bool> = (1..=arity).map(|i| input_bit(v, arity, i)).collect();
        if p.evaluate(&x)? {
            out |= 1 << ((1 << arity) - 1 - v);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Canonicalization
// ---------------------------------------------------------------------------

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 1 {
        return vec![vec![0]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for slot in 0..n {
            let mut q = p.clone();
            q.insert(slot, n - 1);
            out.push(q);
        }
    }
    out
}

/// The 48 input maps for arity 3: `map[v]` is the index read by the original
/// function when the transformed one is read at `v`.
fn input_maps3() -> &'static [[u8; 8]] {
    static MAPS: OnceLock<Vec<[u8; 8]>> = OnceLock::new();
    MAPS.get_or_init(|| {
        let mut maps = Vec::with_capacity(48);
        for perm in permutations(3) {
            for mask in 0..8u16 {
                let mut map = [0u8; 8];
                for (v, slot) in map.iter_mut().enumerate() {
                    let mut w = 0u16;
                    for (j, &src) in perm.iter().enumerate() {
                        let bit = (((v as u16) >> (2 - src)) & 1) ^ ((mask >> j) & 1);
                        w |= bit << (2 - j);
                    }
                    *slot = w as u8;
                }
                maps.push(map);
            }
        }
        maps
    })
}

/// The 384 input maps for arity 4.
fn input_maps4() -> &'static [[u8; 16]] {
    static MAPS: OnceLock<Vec<[u8; 16]>> = OnceLock::new();
    MAPS.get_or_init(|| {
        let mut maps = Vec::with_capacity(384);
        for perm in permutations(4) {
            for mask in 0..16u16 {
                let mut map = [0u8; 16];
                for (v, slot) in map.iter_mut().enumerate() {
                    let mut w = 0u16;
                    for (j, &src) in perm.iter().enumerate() {
                        let bit = (((v as u16) >> (3 - src)) & 1) ^ ((mask >> j) & 1);
                        w |= bit << (3 - j);
                    }
                    *slot = w as u8;
                }
                maps.push(map);
            }
        }
        maps
    })
}

fn apply_map3(map: &[u8; 8], t: u8) -> u8 {
    let mut out = 0u8;
    for v in 0..8usize {
        if (t >> (7 - map[v] as usize)) & 1 == 1 {
            out |= 1 << (7 - v);
        }
    }
    out
}

fn apply_map4(map: &[u8; 16], t: u16) -> u16 {
    let mut out = 0u16;
    for v in 0..16usize {
        if (t >> (15 - map[v] as usize)) & 1 == 1 {
            out |= 1 << (15 - v);
        }
    }
    out
}

/// Minimum of a three-bit table's orbit under the 96 transforms (48 input
/// maps × output complementation).
pub fn canonical_function_id3(t: u8) -> u8 {
    let mut best = u8::MAX;
    for map in input_maps3() {
        let g = apply_map3(map, t);
        best = best.min(g).min(!g);
    }
    best
}

/// Minimum of a four-bit table's orbit under the 768 transforms (384 input
/// maps × output complementation).
pub fn canonical_function_id4(t: u16) -> u16 {
    let mut best = u16::MAX;
    for map in input_maps4() {
        let g = apply_map4(map, t);
        best = best.min(g).min(!g);
    }
    best
}

/// Finds an ignored variable of a four-bit table and drops it, returning the
/// variable index and the restricted three-bit table.
fn drop_dummy_var4(t: u16) -> Option<(usize, u8)> {
    for var in 1..=4usize {
        let flip = 1u16 << (4 - var);
        if (0..16u16).all(|v| tt_bit(t, 4, v) == tt_bit(t, 4, v ^ flip)) {
            let live: Vec<usize> = (1..=4).filter(|&w| w != var).collect();
            let mut t3 = 0u8;
            for u in 0..8u16 {
                let mut v = 0u16;
                for (j, &w) in live.iter().enumerate() {
                    if (u >> (2 - j)) & 1 == 1 {
                        v |= 1 << (4 - w);
                    }
                }
                if tt_bit(t, 4, v) {
                    t3 |= 1 << (7 - u);
                }
            }
            return Some((var, t3));
        }
    }
    None
}

// ---------------------------------------------------------------------------
// The three-bit class table and certified adversary values
// ---------------------------------------------------------------------------

/// One equivalence class of three-bit functions with its certified adversary
/// value.
#[derive(Clone, Debug, Serialize)]
pub struct ThreeBitClass {
    /// Truth table of the stated representative formula (not necessarily the
    /// canonical minimum).
    pub literal_tt: u8,
    /// Human-readable representative.
    pub name: &'static str,
    /// Certified adversary value (equal to the optimal witness size).
    pub adv: f64,
}

/// The fourteen equivalence classes of functions on at most three bits.
pub fn three_bit_classes() -> &'static [ThreeBitClass] {
    static CLASSES: OnceLock<Vec<ThreeBitClass>> = OnceLock::new();
    CLASSES.get_or_init(|| {
        let row = |literal_tt, name, adv| ThreeBitClass {
            literal_tt,
            name,
            adv,
        };
        vec![
            row(0, "constant 0", 0.0),
            row(15, "x1", 1.0),
            row(3, "x1 AND x2", 2f64.sqrt()),
            row(60, "x1 XOR x2", 2.0),
            row(1, "x1 AND x2 AND x3", 3f64.sqrt()),
            row(31, "x1 OR (x2 AND x3)", 3f64.sqrt()),
            row(27, "if x3 then x2 else x1", 2.0),
            row(23, "MAJ(x1, x2, x3)", 2.0),
            row(129, "EQUAL(x1, x2, x3)", 3.0 / 2f64.sqrt()),
            row(
                193,
                "(x1 AND x2 AND x3) OR (NOT x1 AND NOT x2)",
                (3.0 + 3f64.sqrt()).sqrt(),
            ),
            row(111, "x1 OR (x2 XOR x3)", 5f64.sqrt()),
            row(30, "x1 XOR (x2 AND x3)", 1.0 + 2f64.sqrt()),
            row(22, "EXACT2(x1, x2, x3)", 7f64.sqrt()),
            row(105, "x1 XOR x2 XOR x3", 3.0),
        ]
    })
}

/// Certified adversary value of any three-bit function, by class lookup.
pub fn adv3(t: u8) -> f64 {
    static TABLE: OnceLock<[f64; 256]> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut table = [f64::NAN; 256];
        for class in three_bit_classes() {
            for map in input_maps3() {
                let g = apply_map3(map, class.literal_tt);
                table[g as usize] = class.adv;
                table[(!g) as usize] = class.adv;
            }
        }
        assert!(
            table.iter().all(|v| v.is_finite()),
            "the fourteen classes cover all 256 three-bit tables"
        );
        table
    });
    table[t as usize]
}

/// Certified adversary value of a four-bit function, when one exists.
///
/// Tables that ignore a variable reduce to [`adv3`]; tables in one of the
/// certified four-bit catalog classes use that entry's reference value
/// (closed form where stated, certificate ratio otherwise). Anything else has
/// no certified value.
pub fn adv4(t: u16) -> Option<f64> {
    if let Some((_, t3)) = drop_dummy_var4(t) {
        return Some(adv3(t3));
    }
    static TABLE: OnceLock<HashMap<u16, f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        catalog()
            .iter()
            .filter(|e| e.arity == 4)
            .map(|e| {
                let value = e
                    .reference_adv(1.0)
                    .expect("catalog entry reference value evaluates");
                (e.function_id, value)
            })
            .collect()
    });
    table.get(&canonical_function_id4(t)).copied()
}

// ---------------------------------------------------------------------------
// Adversary certificates
// ---------------------------------------------------------------------------

/// The nonzero bipartite block of a spectral adversary matrix with costs.
///
/// `block[(r, c)]` weighs the input pair `(rows[r], cols[c])`; every input
/// pair carrying a nonzero weight must disagree on the function value. The
/// full matrix is the symmetric embedding of this block, so its spectral norm
/// equals the block's largest singular value.
#[derive(Clone, Debug)]
pub struct AdversaryCertificate {
    /// Function arity (1 to 4).
    pub arity: usize,
    /// Input indices labeling block rows.
    pub rows: Vec<u16>,
    /// Input indices labeling block columns.
    pub cols: Vec<u16>,
    /// The weight block, `rows.len() × cols.len()`.
    pub block: CMat,
    /// Positive per-variable costs `α`.
    pub costs: Vec<f64>,
}

/// Evaluates the certified adversary lower bound
/// `‖Γ‖ / max_i (1/αᵢ)·‖Γ∘Dᵢ‖`, where `Γ∘Dᵢ` keeps exactly the entries whose
/// row and column inputs disagree in variable `i`.
pub fn certificate_ratio(cert: &AdversaryCertificate, f_tt: u16) -> Result<f64, CatalogError> {
    let arity = cert.arity;
    if !(1..=4).contains(&arity) {
        return Err(CatalogError::InvalidCertificate {
            reason: format!("arity {arity} out of range 1..=4"),
        });
    }
    if arity < 4 && (f_tt >> (1u32 << arity)) != 0 {
        return Err(CatalogError::TruthTableRange { arity, value: f_tt });
    }
    if cert.costs.len() != arity || cert.costs.iter().any(|&a| !(a > 0.0)) {
        return Err(CatalogError::InvalidCertificate {
            reason: "costs must be positive, one per variable".into(),
        });
    }
    let limit = 1u16 << arity;
    if cert.rows.iter().chain(&cert.cols).any(|&v| v >= limit) {
        return Err(CatalogError::InvalidCertificate {
            reason: format!("input index out of range for arity {arity}"),
        });
    }
    if cert.block.nrows() != cert.rows.len() || cert.block.ncols() != cert.cols.len() {
        return Err(CatalogError::InvalidCertificate {
            reason: "block shape does not match row/column labels".into(),
        });
    }
    let mut any_nonzero = false;
    for (r, &rv) in cert.rows.iter().enumerate() {
        for (cdx, &cv) in cert.cols.iter().enumerate() {
            if cert.block[(r, cdx)].norm() > 0.0 {
                any_nonzero = true;
                if tt_bit(f_tt, arity, rv) == tt_bit(f_tt, arity, cv) {
                    return Err(CatalogError::InvalidCertificate {
                        reason: format!(
                            "nonzero weight between inputs {rv} and {cv} with equal function value"
                        ),
                    });
                }
            }
        }
    }
    if !any_nonzero {
        return Err(CatalogError::InvalidCertificate {
            reason: "adversary matrix is zero".into(),
        });
    }
    let norm = spectral_norm(&cert.block);
    let mut denom: f64 = 0.0;
    for var in 1..=arity {
        let mut masked = cert.block.clone();
        for (r, &rv) in cert.rows.iter().enumerate() {
            for (cdx, &cv) in cert.cols.iter().enumerate() {
                if input_bit(rv, arity, var) == input_bit(cv, arity, var) {
                    masked[(r, cdx)] = cr(0.0);
                }
            }
        }
        denom = denom.max(spectral_norm(&masked) / cert.costs[var - 1]);
    }
    if denom <= 0.0 {
        return Err(CatalogError::InvalidCertificate {
            reason: "every per-variable mask of the adversary matrix is zero".into(),
        });
    }
    Ok(norm / denom)
}

// ---------------------------------------------------------------------------
// Core program builders
// ---------------------------------------------------------------------------

fn rvec(xs: &[f64]) -> CVec {
    CVec::from_iterator(xs.len(), xs.iter().map(|&x| cr(x)))
}

fn build(target: CVec, cols: Vec<(CVec, Vec<Literal>)>) -> SpanProgram {
    SpanProgram::from_columns(target, cols).expect("catalog builder data is dimension-consistent")
}

/// The identity program on one variable: witness size `c` at cost `c`.
pub fn unit_program() -> SpanProgram {
    build(rvec(&[1.0]), vec![(rvec(&[1.0]), vec![Literal::pos(1)])])
}

/// AND of its inputs at the given positive costs; witness size `√(Σcᵢ²)` on
/// every worst-case input (all-true, and each single-false).
pub fn and_program(costs: &[f64]) -> SpanProgram {
    assert!(
        !costs.is_empty() && costs.iter().all(|&x| x > 0.0),
        "AND costs must be positive"
    );
    let k = costs.len();
    let big = costs.iter().map(|x| x * x).sum::<f64>().sqrt();
    let cols = costs
        .iter()
        .enumerate()
        .map(|(j, &cost)| {
            let mut v = CVec::zeros(k);
            v[j] = cr((big / cost).sqrt());
            (v, vec![Literal::pos(j + 1)])
        })
        .collect();
    build(CVec::from_element(k, cr(1.0)), cols)
}

/// OR of its inputs at the given positive costs; witness size `√(Σcᵢ²)`.
pub fn or_program(costs: &[f64]) -> SpanProgram {
    assert!(
        !costs.is_empty() && costs.iter().all(|&x| x > 0.0),
        "OR costs must be positive"
    );
    let quart = costs.iter().map(|x| x * x).sum::<f64>().sqrt().sqrt();
    let cols = costs
        .iter()
        .enumerate()
        .map(|(j, &cost)| (rvec(&[cost.sqrt() / quart]), vec![Literal::pos(j + 1)]))
        .collect();
    build(rvec(&[1.0]), cols)
}

/// PARITY of `k` inputs; witness size `Σcᵢ` on **every** input, for any
/// costs. Built as a chain of two-input parity programs; the `k = 2` base has
/// two grouped columns `{x1, x̄2}` and `{x̄1, x2}`.
pub fn parity_program(k: usize) -> SpanProgram {
    assert!(k >= 1, "PARITY needs at least one input");
    match k {
        1 => unit_program(),
        2 => build(
            rvec(&[1.0]),
            vec![
                (rvec(&[1.0]), vec![Literal::pos(1), Literal::neg(2)]),
                (rvec(&[1.0]), vec![Literal::neg(1), Literal::pos(2)]),
            ],
        ),
        _ => {
            let inner = parity_program(k - 1);
            let mut map: Vec<Literal> = (1..k).map(Literal::pos).collect();
            map[0] = Literal::neg(1);
            let inner_neg = inner
                .relabel(&map)
                .expect("parity complement relabel is well-formed");
            substitute_programs(
                &parity_program(2),
                &[
                    WireSub::with_complement(inner, inner_neg),
                    WireSub::Leaf,
                ],
            )
            .expect("parity chain substitution is well-formed")
        }
    }
}

/// Majority of three inputs at equal costs; witness size `2`.
pub fn maj_program() -> SpanProgram {
    let w = 1.0 / 3f64.sqrt();
    let omega = c(-0.5, 3f64.sqrt() / 2.0);
    let mut cols = Vec::new();
    let mut phase = cr(1.0);
    for var in 1..=3 {
        let mut v = CVec::zeros(2);
        v[0] = cr(w);
        v[1] = phase;
        cols.push((v, vec![Literal::pos(var)]));
        phase *= omega;
    }
    build(rvec(&[1.0, 0.0]), cols)
}

/// Majority of three inputs at costs `(B, B, βB)`; witness size
/// `½(√(8+β²)+β)·B`. The first two costs must be equal.
pub fn maj_unbalanced_program(beta: f64) -> SpanProgram {
    assert!(beta > 0.0, "cost ratio must be positive");
    let alpha = ((8.0 + beta * beta).sqrt() - beta).sqrt() / (2.0 * 2f64.sqrt());
    let i = c(0.0, 1.0);
    let mut col1 = CVec::zeros(2);
    col1[0] = cr(alpha);
    col1[1] = i;
    let mut col2 = CVec::zeros(2);
    col2[0] = cr(alpha);
    col2[1] = -i;
    let col3 = rvec(&[(0.5 + beta * alpha * alpha).sqrt(), 2.0 * alpha]);
    build(
        rvec(&[1.0, 0.0]),
        vec![
            (col1, vec![Literal::pos(1)]),
            (col2, vec![Literal::pos(2)]),
            (col3, vec![Literal::pos(3)]),
        ],
    )
}

/// EQUAL on `k ≥ 2` inputs at equal costs; witness size `k/√(k−1)`.
pub fn equal_program(k: usize) -> SpanProgram {
    assert!(k >= 2, "EQUAL needs at least two inputs");
    let alpha = ((k - 1) as f64).powf(0.25);
    let pos: Vec<Literal> = (1..=k).map(Literal::pos).collect();
    let neg: Vec<Literal> = (1..=k).map(Literal::neg).collect();
    build(
        rvec(&[1.0]),
        vec![(rvec(&[alpha]), pos), (rvec(&[alpha]), neg)],
    )
}

/// EQUAL on three inputs at costs `(B, B, βB)`; the weight `w` switches at
/// the same thresholds as the certified value.
fn equal3_program_beta(beta: f64) -> SpanProgram {
    assert!(beta > 0.0, "cost ratio must be positive");
    let w = if beta <= (2.0 / 5.0f64).sqrt() {
        ((beta + (2.0 - beta * beta).sqrt()) / (2.0 * (1.0 - beta * beta))).sqrt()
    } else if beta < 2.0 {
        (1.0 / beta).sqrt()
    } else {
        (0.5f64).sqrt()
    };
    build(
        rvec(&[1.0, 0.0, 0.0]),
        vec![
            (rvec(&[0.0, w, 0.0]), vec![Literal::pos(3)]),
            (
                rvec(&[1.0, 1.0, 0.0]),
                vec![Literal::pos(1), Literal::pos(2)],
            ),
            (
                rvec(&[1.0, 0.0, 1.0]),
                vec![Literal::neg(1), Literal::neg(2)],
            ),
            (rvec(&[0.0, 0.0, w]), vec![Literal::neg(3)]),
        ],
    )
}

/// The two-level AND/OR-of-AND function `(y1∧y2∧y3) ∨ (ȳ1∧ȳ2)` on arguments
/// `(y1, y2, y3) = (x2, x3, x1)`, at costs `(β, 1, 1)`.
fn g_program_beta(beta: f64) -> SpanProgram {
    assert!(beta > 0.0, "cost ratio must be positive");
    let s = (9.0 + 2.0 * beta * beta + beta.powi(4)).sqrt();
    let w1 = 0.5 * (1.0 + beta * beta + s).sqrt();
    // With u = w2², the weights satisfy (2 + βu)/w1² = 2 and
    // βw1² = u(w1² + ½); then the maxima are 2 (true side) and w1² + 1
    // (false side), whose product is the certified value squared.
    let w2 = ((-3.0 + beta * beta + s) / (2.0 * beta)).sqrt();
    build(
        rvec(&[1.0, 0.0]),
        vec![
            (rvec(&[0.0, 1.0]), vec![Literal::pos(1)]),
            (rvec(&[w1, w2]), vec![Literal::pos(2), Literal::pos(3)]),
            (rvec(&[1.0, 0.0]), vec![Literal::neg(2), Literal::neg(3)]),
        ],
    )
}

/// Threshold 2-of-4 at equal costs; balanced witness size `√6`.
pub fn thr2of4_program() -> SpanProgram {
    let i = c(0.0, 1.0);
    let row2 = [cr(1.0), cr(1.0), cr(1.0), cr(-1.0), i, -i, i, i];
    let row3 = [i, -i, i, i, cr(1.0), cr(1.0), cr(1.0), cr(-1.0)];
    let mut cols = Vec::new();
    for j in 0..8 {
        let mut v = CVec::zeros(3);
        v[0] = cr(1.0);
        v[1] = row2[j];
        v[2] = row3[j];
        cols.push((v, vec![Literal::pos(j / 2 + 1)]));
    }
    build(rvec(&[1.0, 0.0, 0.0]), cols)
}

// ---------------------------------------------------------------------------
// Inline composition
// ---------------------------------------------------------------------------

/// What to substitute for one outer variable in [`substitute_programs`].
#[derive(Clone, Debug)]
pub enum WireSub {
    /// Keep the wire as a literal input (one composed variable).
    Leaf,
    /// Replace the wire by a subprogram; `negative` computes the complement
    /// and is required iff the outer program reads the wire negated.
    Program {
        /// Program for the wire itself.
        positive: SpanProgram,
        /// Program for the complemented wire, if negated occurrences exist.
        negative: Option<SpanProgram>,
    },
}

impl WireSub {
    /// A subprogram wire with no complement available.
    pub fn positive(p: SpanProgram) -> Self {
        WireSub::Program {
            positive: p,
            negative: None,
        }
    }

    /// A subprogram wire with an explicit complement program.
    pub fn with_complement(p: SpanProgram, n: SpanProgram) -> Self {
        WireSub::Program {
            positive: p,
            negative: Some(n),
        }
    }

    fn arity(&self) -> usize {
        match self {
            WireSub::Leaf => 1,
            WireSub::Program { positive, .. } => positive.num_inputs(),
        }
    }
}

/// Composes `outer` with one substitution per outer variable by splicing each
/// inner copy directly into the column that read the wire.
///
/// The outer program is first normalized and expanded so that every column
/// carries at most one literal. A column `(v, {ℓ})` whose literal refers to a
/// program wire is replaced by a copy of that wire's program (the complement
/// program for a negated occurrence): the copy's output coordinate is
/// identified with the carried vector `v`, its remaining coordinates are
/// fresh, and its literals are renumbered into the wire's variable block.
/// Because the copy's output row *rides* `v` instead of linking to it through
/// an extra free column, witness sizes compose without overhead: the inner
/// true witness enters scaled by the coefficient `v` would have carried, and
/// the inner false witness sees exactly the inherited target weight `⟨v, w′⟩`.
///
/// Copies of the same wire share variables, so outer programs that read a
/// wire several times (with either polarity) stay well-defined.
pub fn substitute_programs(
    outer: &SpanProgram,
    subs: &[WireSub],
) -> Result<SpanProgram, CatalogError> {
    if subs.len() != outer.num_inputs() {
        return Err(CatalogError::WireCount {
            expected: outer.num_inputs(),
            found: subs.len(),
        });
    }
    for sub in subs {
        if let WireSub::Program {
            positive,
            negative: Some(n),
        } = sub
        {
            if n.num_inputs() != positive.num_inputs() {
                return Err(CatalogError::ComplementArity {
                    expected: positive.num_inputs(),
                    found: n.num_inputs(),
                });
            }
        }
    }
    let outer2 = outer.normalize_target().expand_grouped();
    let mut offsets = vec![0usize; subs.len() + 1];
    for (k, sub) in subs.iter().enumerate() {
        offsets[k + 1] = offsets[k] + sub.arity();
    }
    let total_vars = offsets[subs.len()];

    // First pass: pick the inner program for each column and count fresh
    // coordinates.
    let base_dim = outer2.dim();
    let mut picks: Vec<Option<SpanProgram>> = Vec::with_capacity(outer2.num_groups());
    let mut dim = base_dim;
    for set in outer2.literal_sets() {
        debug_assert!(set.len() <= 1, "expansion leaves at most one literal");
        let pick = match set.first() {
            Some(lit) => match &subs[lit.var - 1] {
                WireSub::Leaf => None,
                WireSub::Program { positive, negative } => {
                    let inner = if lit.neg {
                        negative
                            .as_ref()
                            .ok_or(CatalogError::MissingComplement { wire: lit.var })?
                    } else {
                        positive
                    };
                    let inner = inner.normalize_target();
                    dim += inner.dim() - 1;
                    Some(inner)
                }
            },
            None => None,
        };
        picks.push(pick);
    }

    let mut cols: Vec<(CVec, Vec<Literal>)> = Vec::new();
    let mut next = base_dim;
    for (j, set) in outer2.literal_sets().iter().enumerate() {
        let v = outer2.columns().column(j);
        match (&picks[j], set.first()) {
            (Some(inner), Some(lit)) => {
                let offset = offsets[lit.var - 1];
                let private = next;
                next += inner.dim() - 1;
                for (jj, iset) in inner.literal_sets().iter().enumerate() {
                    let icol = inner.columns().column(jj);
                    let mut g = CVec::zeros(dim);
                    for r in 0..base_dim {
                        g[r] = icol[0] * v[r];
                    }
                    for r in 1..inner.dim() {
                        g[private + r - 1] = icol[r];
                    }
                    let lits = iset
                        .iter()
                        .map(|l| Literal {
                            var: offset + l.var,
                            neg: l.neg,
                        })
                        .collect();
                    cols.push((g, lits));
                }
            }
            (None, lit) => {
                let mut g = CVec::zeros(dim);
                for r in 0..base_dim {
                    g[r] = v[r];
                }
                let lits = match lit {
                    Some(l) => vec![Literal {
                        var: offsets[l.var - 1] + 1,
                        neg: l.neg,
                    }],
                    None => Vec::new(),
                };
                cols.push((g, lits));
            }
            (Some(_), None) => unreachable!("a pick implies a literal"),
        }
    }
    let mut target = CVec::zeros(dim);
    target[0] = cr(1.0);
    let composed = SpanProgram::from_columns(target, cols)?;
    let mut read = vec![false; total_vars + 1];
    for set in composed.literal_sets() {
        for lit in set {
            read[lit.var] = true;
        }
    }
    if let Some(var) = (1..=total_vars).find(|&v| !read[v]) {
        return Err(CatalogError::UnreadVariable { var });
    }
    Ok(composed)
}

/// Removes always-available columns (empty literal sets) by passing to the
/// quotient of the target space by their span.
///
/// A column with no literals is available on every input, so the target is
/// reachable iff its image in the quotient space is reachable from the
/// images of the remaining columns — the computed function is unchanged.
/// False witnesses were already orthogonal to the removed columns, so they
/// correspond exactly with equal values; true witnesses stop paying the unit
/// weight the empty group otherwise carries. Listings whose always-on column
/// inflates the true-side witness reach their intended complexity only after
/// this projection.
pub fn quotient_free_columns(p: &SpanProgram) -> Result<SpanProgram, CatalogError> {
    let free: Vec<usize> = p
        .literal_sets()
        .iter()
        .enumerate()
        .filter(|(_, set)| set.is_empty())
        .map(|(j, _)| j)
        .collect();
    if free.is_empty() {
        return Ok(p.clone());
    }
    let dim = p.dim();
    let mut span: Vec<CVec> = Vec::new();
    for &j in &free {
        let mut v: CVec = p.columns().column(j).into_owned();
        for b in &span {
            let overlap = b.dotc(&v);
            v -= b * overlap;
        }
        let n = v.norm();
        if n > 1e-12 {
            span.push(v.unscale(n));
        }
    }
    let k = span.len();
    let mut comp: Vec<CVec> = Vec::new();
    for r in 0..dim {
        if comp.len() == dim - k {
            break;
        }
        let mut v = CVec::zeros(dim);
        v[r] = cr(1.0);
        for b in span.iter().chain(&comp) {
            let overlap = b.dotc(&v);
            v -= b * overlap;
        }
        let n = v.norm();
        if n > 1e-8 {
            comp.push(v.unscale(n));
        }
    }
    if comp.len() != dim - k {
        return Err(CatalogError::InvalidCertificate {
            reason: "free-column span does not admit a stable complement".into(),
        });
    }
    let project = |v: &CVec| CVec::from_iterator(dim - k, comp.iter().map(|b| b.dotc(v)));
    let target = project(p.target());
    let cols = p
        .literal_sets()
        .iter()
        .enumerate()
        .filter(|(j, _)| !free.contains(j))
        .map(|(j, set)| (project(&p.columns().column(j).into_owned()), set.clone()))
        .collect();
    Ok(SpanProgram::from_columns(target, cols)?)
}

/// Balances a program at unit costs: returns the output-rescaled program and
/// its balanced witness size.
fn balance_unit(p: &SpanProgram) -> (SpanProgram, f64) {
    let u = ComplexityVector::ones(p.num_inputs());
    let b = balanced_max_witness_size(p, &u).expect("catalog programs stay within enumeration caps");
    if (b.scale - 1.0).abs() < 1e-12 {
        (p.clone(), b.value)
    } else {
        (p.scale_output_row(b.scale), b.value)
    }
}

// ---------------------------------------------------------------------------
// Four-bit entry programs
// ---------------------------------------------------------------------------

fn prog_975() -> SpanProgram {
    build(
        rvec(&[1.0, 0.0, 0.0]),
        vec![
            (rvec(&[0.0, 1.0, 0.0]), vec![Literal::pos(1)]),
            (rvec(&[1.0, 1.0, 0.0]), vec![Literal::pos(3)]),
            (rvec(&[1.0, 0.0, 1.0]), vec![Literal::neg(3)]),
            (rvec(&[0.0, 0.0, 1.0]), vec![Literal::pos(2)]),
        ],
    )
}

fn prog_828(beta: f64) -> SpanProgram {
    assert!(beta > 0.0, "cost ratio must be positive");
    let root = (8.0 * beta * beta + 1.0).sqrt();
    let w1 = ((root - 1.0) / (2.0 * beta)).sqrt();
    let w2 = (1.0 / (root + 3.0)).sqrt();
    let i = c(0.0, 1.0);
    let mut col3 = CVec::zeros(3);
    col3[0] = cr(w2);
    col3[1] = i;
    let mut col4 = CVec::zeros(3);
    col4[0] = cr(w2);
    col4[1] = -i;
    build(
        rvec(&[1.0, 0.0, 0.0]),
        vec![
            (
                rvec(&[1.0, 0.0, w1]),
                vec![Literal::neg(1), Literal::neg(2)],
            ),
            (rvec(&[0.0, 0.0, 1.0]), vec![Literal::neg(3)]),
            (col3, vec![Literal::pos(1)]),
            (col4, vec![Literal::pos(2)]),
            (rvec(&[w1 / 2f64.sqrt(), w1, 0.0]), vec![Literal::pos(3)]),
        ],
    )
}

fn prog_393() -> SpanProgram {
    let w = (1.5f64).sqrt();
    build(
        rvec(&[1.0, 0.0, 0.0]),
        vec![
            (
                rvec(&[1.0, 1.0, 0.0]),
                vec![Literal::pos(1), Literal::pos(2)],
            ),
            (rvec(&[0.0, w, 0.0]), vec![Literal::pos(3)]),
            (
                rvec(&[1.0, 0.0, 1.0]),
                vec![Literal::neg(1), Literal::neg(2)],
            ),
            (rvec(&[0.0, 0.0, w]), vec![Literal::pos(4)]),
        ],
    )
}

/// The listing for this entry carries an always-on column; the quotient by
/// its span (see [`quotient_free_columns`]) realises the certified
/// complexity, which the raw listing misses because the empty group's unit
/// weight charges the true-side witness.
fn prog_989() -> SpanProgram {
    let q = 2f64.powf(0.25);
    let r = 2f64.powf(-0.25);
    let listed = build(
        rvec(&[1.0, 0.0, 0.0]),
        vec![
            (rvec(&[0.0, 0.0, q]), vec![Literal::neg(1), Literal::pos(2)]),
            (rvec(&[1.0, 1.0, 1.0]), vec![]),
            (rvec(&[1.0, r, 0.0]), vec![Literal::neg(2)]),
            (rvec(&[1.0, r, 0.0]), vec![Literal::neg(3)]),
            (rvec(&[q, 1.0, 0.0]), vec![Literal::pos(4)]),
            (rvec(&[1.0, 1.0, 0.0]), vec![Literal::neg(4)]),
        ],
    );
    quotient_free_columns(&listed).expect("the always-on column projects out")
}

fn prog_1968() -> SpanProgram {
    let w = 3f64.sqrt() / 2.0;
    build(
        rvec(&[1.0, 0.0, 0.0]),
        vec![
            (
                rvec(&[1.0, 1.0, 0.0]),
                vec![Literal::pos(1), Literal::pos(2)],
            ),
            (rvec(&[0.0, w, 0.0]), vec![Literal::pos(3)]),
            (rvec(&[0.0, w, 0.0]), vec![Literal::pos(4)]),
            (
                rvec(&[1.0, 0.0, 1.0]),
                vec![Literal::neg(1), Literal::neg(2)],
            ),
            (rvec(&[0.0, 0.0, w]), vec![Literal::neg(3)]),
            (rvec(&[0.0, 0.0, w]), vec![Literal::pos(4)]),
        ],
    )
}

fn prog_1910() -> SpanProgram {
    build(
        rvec(&[1.0]),
        vec![
            (
                rvec(&[2f64.sqrt()]),
                vec![
                    Literal::pos(1),
                    Literal::pos(2),
                    Literal::pos(3),
                    Literal::pos(4),
                ],
            ),
            (rvec(&[1.0]), vec![Literal::neg(1), Literal::neg(2)]),
            (rvec(&[1.0]), vec![Literal::neg(3), Literal::neg(4)]),
        ],
    )
}

fn prog_317() -> SpanProgram {
    let (and3, s1) = balance_unit(&and_program(&[1.0, 1.0, 1.0]));
    let (maj, s2) = balance_unit(&maj_program());
    let composed = substitute_programs(
        &or_program(&[s1, s2]),
        &[WireSub::positive(and3), WireSub::positive(maj)],
    )
    .expect("composed catalog route is well-formed");
    composed
        .relabel(&[
            Literal::pos(1),
            Literal::pos(2),
            Literal::pos(3),
            Literal::neg(2),
            Literal::neg(3),
            Literal::pos(4),
        ])
        .expect("composed catalog route relabels onto four variables")
}

fn prog_5790() -> SpanProgram {
    build(
        rvec(&[1.0, 0.0, 0.0]),
        vec![
            (rvec(&[1.0, 1.0, 0.0]), vec![Literal::pos(1)]),
            (rvec(&[0.0, 1.0, 0.0]), vec![Literal::pos(2), Literal::neg(3)]),
            (rvec(&[0.0, 1.0, 0.0]), vec![Literal::neg(2), Literal::pos(3)]),
            (rvec(&[1.0, 0.0, 1.0]), vec![Literal::neg(1)]),
            (rvec(&[0.0, 0.0, 1.0]), vec![Literal::pos(2), Literal::pos(4)]),
            (rvec(&[0.0, 0.0, 1.0]), vec![Literal::neg(2), Literal::neg(3)]),
        ],
    )
}

fn prog_385() -> SpanProgram {
    let root = 73f64.sqrt();
    let denom = 2f64.powf(0.75) * 3f64.sqrt();
    let wa = (49.0 + 5.0 * root).powf(0.25) / denom;
    let wb = (61.0 + 7.0 * root).powf(0.25) / denom;
    build(
        rvec(&[1.0, 0.0]),
        vec![
            (
                rvec(&[1.0, 0.0]),
                vec![Literal::pos(2), Literal::pos(3), Literal::pos(4)],
            ),
            (rvec(&[0.0, wa]), vec![Literal::pos(1)]),
            (
                rvec(&[wb, 1.0]),
                vec![Literal::neg(2), Literal::neg(3), Literal::neg(4)],
            ),
        ],
    )
}

fn prog_1639() -> SpanProgram {
    let i = c(0.0, 1.0);
    let mut col3 = CVec::zeros(2);
    col3[0] = cr(0.5);
    col3[1] = i;
    let mut col4 = CVec::zeros(2);
    col4[0] = cr(0.5);
    col4[1] = -i;
    build(
        rvec(&[1.0, 0.0]),
        vec![
            (rvec(&[1.0, 0.0]), vec![Literal::pos(1), Literal::pos(2)]),
            (
                rvec(&[5f64.sqrt() / 2.0, 1.0]),
                vec![Literal::neg(1), Literal::neg(2)],
            ),
            (col3, vec![Literal::pos(3)]),
            (col4, vec![Literal::pos(4)]),
        ],
    )
}

fn prog_6014() -> SpanProgram {
    let i = c(0.0, 1.0);
    let r = 2f64.powf(-0.25);
    let s3 = 3f64.sqrt();
    let row3 = [cr(1.0), cr(1.0), cr(1.0), cr(-1.0), i, -i, i, i];
    let row4 = [i, -i, i, i, cr(1.0), cr(1.0), cr(1.0), cr(-1.0)];
    let mut cols = Vec::new();
    for j in 0..8 {
        let mut v = CVec::zeros(4);
        v[1] = cr(1.0);
        v[2] = row3[j];
        v[3] = row4[j];
        cols.push((v, vec![Literal::pos(j / 2 + 1)]));
    }
    for var in 1..=4 {
        let mut v = CVec::zeros(4);
        v[0] = cr(r);
        v[1] = cr(s3);
        cols.push((v, vec![Literal::neg(var)]));
    }
    build(rvec(&[1.0, 0.0, 0.0, 0.0]), cols)
}

fn prog_278() -> SpanProgram {
    let (thr, s1) = balance_unit(&thr2of4_program());
    let (and4, s2) = balance_unit(&and_program(&[1.0; 4]));
    let composed = substitute_programs(
        &or_program(&[s1, s2]),
        &[WireSub::positive(thr), WireSub::positive(and4)],
    )
    .expect("composed catalog route is well-formed");
    composed
        .relabel(&[
            Literal::pos(1),
            Literal::pos(2),
            Literal::pos(3),
            Literal::pos(4),
            Literal::neg(1),
            Literal::neg(2),
            Literal::neg(3),
            Literal::neg(4),
        ])
        .expect("composed catalog route relabels onto four variables")
}

fn prog_5736() -> SpanProgram {
    let (thr1, s1) = balance_unit(&thr2of4_program());
    let (thr2, s2) = balance_unit(&thr2of4_program());
    let composed = substitute_programs(
        &and_program(&[s1, s2]),
        &[WireSub::positive(thr1), WireSub::positive(thr2)],
    )
    .expect("composed catalog route is well-formed");
    composed
        .relabel(&[
            Literal::pos(1),
            Literal::pos(2),
            Literal::pos(3),
            Literal::pos(4),
            Literal::neg(1),
            Literal::neg(2),
            Literal::neg(3),
            Literal::neg(4),
        ])
        .expect("composed catalog route relabels onto four variables")
}

// ---------------------------------------------------------------------------
// Certificates for the entries
// ---------------------------------------------------------------------------

fn cert(
    arity: usize,
    rows: &[u16],
    cols: &[u16],
    entries: &[f64],
    costs: &[f64],
) -> AdversaryCertificate {
    let m = rows.len();
    let n = cols.len();
    assert_eq!(entries.len(), m * n, "certificate block shape mismatch");
    let block = CMat::from_fn(m, n, |r, cdx| cr(entries[r * n + cdx]));
    AdversaryCertificate {
        arity,
        rows: rows.to_vec(),
        cols: cols.to_vec(),
        block,
        costs: costs.to_vec(),
    }
}

fn cert_831(beta: f64) -> AdversaryCertificate {
    cert(
        3,
        &[0b100, 0b010, 0b001],
        &[0b011, 0b101, 0b110],
        &[0.0, beta, 1.0, beta, 0.0, 1.0, 1.0, 1.0, 0.0],
        &[1.0, 1.0, beta],
    )
}

fn cert_975(beta: f64) -> AdversaryCertificate {
    cert(
        3,
        &[0b100, 0b011],
        &[0b010, 0b101],
        &[1.0, beta, beta, 1.0],
        &[1.0, 1.0, beta],
    )
}

/// Three certificates cover the cost range: a 4×2 block for small `β`, a 6×2
/// block in the middle, and a 2×2 block for `β ≥ 2`.
fn cert_960(beta: f64) -> AdversaryCertificate {
    let costs = [1.0, 1.0, beta];
    if beta <= (2.0 / 5.0f64).sqrt() {
        let q = (2.0 - beta * beta).sqrt();
        cert(
            3,
            &[0b100, 0b010, 0b011, 0b101],
            &[0b000, 0b111],
            &[q, beta, q, beta, beta, q, beta, q],
            &costs,
        )
    } else if beta < 2.0 {
        let alpha = ((4.0 - beta * beta) / (5.0 * beta * beta - 2.0)).sqrt();
        cert(
            3,
            &[0b100, 0b010, 0b001, 0b011, 0b101, 0b110],
            &[0b000, 0b111],
            &[
                2.0 * alpha,
                alpha,
                2.0 * alpha,
                alpha,
                2.0,
                1.0,
                alpha,
                2.0 * alpha,
                alpha,
                2.0 * alpha,
                1.0,
                2.0,
            ],
            &costs,
        )
    } else {
        cert(
            3,
            &[0b001, 0b110],
            &[0b000, 0b111],
            &[beta, 1.0, 1.0, beta],
            &costs,
        )
    }
}

fn cert_963(beta: f64) -> AdversaryCertificate {
    cert(
        3,
        &[0b011, 0b101, 0b110],
        &[0b000, 0b001, 0b111],
        &[0.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0, beta],
        &[1.0, 1.0, beta],
    )
}

fn cert_828(beta: f64) -> AdversaryCertificate {
    cert(
        3,
        &[0b001, 0b010, 0b100, 0b111],
        &[0b110, 0b101, 0b011],
        &[0.0, 1.0, 1.0, 1.0, 0.0, beta, 1.0, beta, 0.0, beta, 1.0, 1.0],
        &[1.0, 1.0, beta],
    )
}

fn cert_393(_beta: f64) -> AdversaryCertificate {
    let w = 2.0 * 2f64.sqrt();
    cert(
        4,
        &[1, 14, 3, 15],
        &[2, 13, 7, 11],
        &[
            1.0, 3.0, 0.0, 0.0, //
            3.0, 1.0, 0.0, 0.0, //
            w, 0.0, 3.0, 3.0, //
            0.0, w, 3.0, 3.0,
        ],
        &[1.0; 4],
    )
}

fn cert_989(_beta: f64) -> AdversaryCertificate {
    cert(
        4,
        &[3, 6, 13],
        &[2, 7, 12],
        &[1.0, 1.0, 0.0, 1.0, 1.0, 1.0, 0.0, 1.0, 1.0],
        &[1.0; 4],
    )
}

fn cert_1968(_beta: f64) -> AdversaryCertificate {
    let s7 = 7f64.sqrt();
    cert(
        4,
        &[2, 12, 9, 5, 7, 11],
        &[0, 14, 3, 13],
        &[
            3.0 * s7,
            2.0 * s7,
            3.0 * s7,
            0.0, //
            2.0 * s7,
            3.0 * s7,
            0.0,
            3.0 * s7, //
            5.0,
            0.0,
            2.0,
            7.0, //
            5.0,
            0.0,
            2.0,
            7.0, //
            0.0,
            5.0,
            7.0,
            2.0, //
            0.0,
            5.0,
            7.0,
            2.0,
        ],
        &[1.0; 4],
    )
}

fn cert_1910(_beta: f64) -> AdversaryCertificate {
    cert(
        4,
        &[7, 11, 13, 14],
        &[1, 2, 4, 8, 3, 12, 15],
        &[
            0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, //
            0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 1.0, //
            1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, //
            0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0,
        ],
        &[1.0; 4],
    )
}

fn cert_317(_beta: f64) -> AdversaryCertificate {
    cert(
        4,
        &[8, 3, 5, 14],
        &[7, 10, 12],
        &[0.0, 1.0, 1.0, 1.0, 1.0, 0.0, 1.0, 0.0, 1.0, 1.0, 1.0, 1.0],
        &[1.0; 4],
    )
}

fn cert_5790(_beta: f64) -> AdversaryCertificate {
    cert(
        4,
        &[0, 7, 11, 12],
        &[3, 4, 8, 15],
        &[
            1.0, 1.0, 1.0, 0.0, //
            1.0, 1.0, 0.0, 1.0, //
            1.0, 0.0, 1.0, 1.0, //
            0.0, 1.0, 1.0, 1.0,
        ],
        &[1.0; 4],
    )
}

fn cert_385(_beta: f64) -> AdversaryCertificate {
    let s2 = 2f64.sqrt();
    cert(
        4,
        &[0, 9, 10, 12],
        &[7, 8, 15],
        &[s2, s2, 0.0, 0.0, s2, 1.0, 0.0, s2, 1.0, 0.0, s2, 1.0],
        &[1.0; 4],
    )
}

fn cert_279(_beta: f64) -> AdversaryCertificate {
    cert(
        4,
        &[3, 5, 6, 12, 10, 9],
        &[7, 11, 13, 14],
        &[
            1.0, 1.0, 0.0, 0.0, //
            1.0, 0.0, 1.0, 0.0, //
            1.0, 0.0, 0.0, 1.0, //
            0.0, 0.0, 1.0, 1.0, //
            0.0, 1.0, 0.0, 1.0, //
            0.0, 1.0, 1.0, 0.0,
        ],
        &[1.0; 4],
    )
}

fn cert_1639(_beta: f64) -> AdversaryCertificate {
    cert(
        4,
        &[1, 2, 7, 11, 12, 13, 14],
        &[0, 5, 9, 6, 10],
        &[
            1.0, 1.0, 1.0, 0.0, 0.0, //
            1.0, 0.0, 0.0, 1.0, 1.0, //
            0.0, 1.0, 0.0, 1.0, 0.0, //
            0.0, 0.0, 1.0, 0.0, 1.0, //
            1.0, 0.0, 0.0, 0.0, 0.0, //
            0.0, 1.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, 0.0, 1.0, 1.0,
        ],
        &[1.0; 4],
    )
}

fn cert_6014(_beta: f64) -> AdversaryCertificate {
    let s = 1.0 / 3f64.sqrt();
    cert(
        4,
        &[3, 5, 6, 12, 10, 9],
        &[8, 4, 2, 1, 15],
        &[
            0.0, 0.0, 1.0, 1.0, s, //
            0.0, 1.0, 0.0, 1.0, s, //
            0.0, 1.0, 1.0, 0.0, s, //
            1.0, 1.0, 0.0, 0.0, s, //
            1.0, 0.0, 1.0, 0.0, s, //
            1.0, 0.0, 0.0, 1.0, s,
        ],
        &[1.0; 4],
    )
}

fn cert_278(_beta: f64) -> AdversaryCertificate {
    cert(
        4,
        &[3, 5, 6, 12, 10, 9, 15],
        &[7, 11, 13, 14],
        &[
            1.0, 1.0, 0.0, 0.0, //
            1.0, 0.0, 1.0, 0.0, //
            1.0, 0.0, 0.0, 1.0, //
            0.0, 0.0, 1.0, 1.0, //
            0.0, 1.0, 0.0, 1.0, //
            0.0, 1.0, 1.0, 0.0, //
            1.0, 1.0, 1.0, 1.0,
        ],
        &[1.0; 4],
    )
}

fn cert_5736(_beta: f64) -> AdversaryCertificate {
    cert(
        4,
        &[3, 5, 6, 12, 10, 9],
        &[8, 4, 2, 1, 7, 11, 13, 14],
        &[
            0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0, //
            0.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.0, //
            0.0, 1.0, 1.0, 0.0, 1.0, 0.0, 0.0, 1.0, //
            1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0, //
            1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0, //
            1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0,
        ],
        &[1.0; 4],
    )
}

// ---------------------------------------------------------------------------
// The entry table
// ---------------------------------------------------------------------------

/// One certified catalog row: a span program and an adversary certificate for
/// a single equivalence class of functions.
///
/// Parameterized entries carry one distinguished input whose cost is `β`
/// while the others stay at `1`; fixed entries ignore the `β` argument of
/// [`CatalogEntry::program`] and [`CatalogEntry::certificate`].
pub struct CatalogEntry {
    /// Canonical truth-table id of the function class (four-bit numbering;
    /// three-bit entries use the id of their padded table).
    pub function_id: u16,
    /// Representative formula or description.
    pub name: &'static str,
    /// Number of inputs (3 or 4).
    pub arity: usize,
    /// Whether the entry is cost-parameterized by `β`.
    pub parameterized: bool,
    /// Variable whose certificate cost is `β` (parameterized entries).
    pub certificate_beta_var: usize,
    /// Variable whose cost is `β` when measuring the program's witness size.
    pub program_beta_var: usize,
    cert_tt: u16,
    program_builder: fn(f64) -> SpanProgram,
    certificate_builder: fn(f64) -> AdversaryCertificate,
    adv_closed: Option<fn(f64) -> f64>,
}

impl CatalogEntry {
    /// Instantiates the entry's span program at cost ratio `β`.
    pub fn program(&self, beta: f64) -> SpanProgram {
        (self.program_builder)(beta)
    }

    /// Instantiates the entry's adversary certificate at cost ratio `β`.
    pub fn certificate(&self, beta: f64) -> AdversaryCertificate {
        (self.certificate_builder)(beta)
    }

    /// The literal truth table the certificate's input labels follow.
    pub fn certificate_truth_table(&self) -> u16 {
        self.cert_tt
    }

    /// Stated closed-form adversary value at `β`, if the entry has one.
    pub fn closed_form(&self, beta: f64) -> Option<f64> {
        self.adv_closed.map(|f| f(beta))
    }

    /// Cost vector for measuring the program's witness size at `β`.
    pub fn program_costs(&self, beta: f64) -> ComplexityVector {
        let mut costs = vec![1.0; self.arity];
        if self.parameterized {
            costs[self.program_beta_var - 1] = beta;
        }
        ComplexityVector::new(costs).expect("catalog costs are positive")
    }

    /// Reference adversary value at `β`: the closed form where stated, the
    /// certificate ratio otherwise.
    pub fn reference_adv(&self, beta: f64) -> Result<f64, CatalogError> {
        match self.closed_form(beta) {
            Some(v) => Ok(v),
            None => certificate_ratio(&self.certificate(beta), self.cert_tt),
        }
    }

    /// Truth table computed by the entry's program (independent of `β`).
    pub fn program_truth_table(&self, beta: f64) -> Result<u16, CatalogError> {
        span_program_tt(&self.program(beta), self.arity)
    }
}

fn adv_831(beta: f64) -> f64 {
    0.5 * ((8.0 + beta * beta).sqrt() + beta)
}

fn adv_975(beta: f64) -> f64 {
    beta + 1.0
}

fn adv_960(beta: f64) -> f64 {
    if beta <= (2.0 / 5.0f64).sqrt() {
        beta + (2.0 - beta * beta).sqrt()
    } else if beta <= 2.0 {
        (1.5 * (2.0 + beta * beta)).sqrt()
    } else {
        beta + 1.0
    }
}

fn adv_963(beta: f64) -> f64 {
    let b2 = beta * beta;
    (0.5 * (5.0 + b2 + (9.0 + 2.0 * b2 + b2 * b2).sqrt())).sqrt()
}

fn adv_828(beta: f64) -> f64 {
    (3.0 + beta * beta + (1.0 + 8.0 * beta * beta).sqrt()).sqrt()
}

/// The seventeen certified entries: five cost-parameterized three-bit
/// functions followed by twelve four-bit functions.
pub fn catalog() -> &'static [CatalogEntry] {
    static ENTRIES: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    ENTRIES.get_or_init(|| {
        let parameterized = |function_id,
                             name,
                             cert_tt: u16,
                             program_beta_var,
                             program_builder,
                             certificate_builder,
                             adv_closed: fn(f64) -> f64| CatalogEntry {
            function_id,
            name,
            arity: 3,
            parameterized: true,
            certificate_beta_var: 3,
            program_beta_var,
            cert_tt,
            program_builder,
            certificate_builder,
            adv_closed: Some(adv_closed),
        };
        let fixed = |function_id,
                     name,
                     cert_tt: u16,
                     program_builder,
                     certificate_builder,
                     adv_closed: Option<fn(f64) -> f64>| CatalogEntry {
            function_id,
            name,
            arity: 4,
            parameterized: false,
            certificate_beta_var: 1,
            program_beta_var: 1,
            cert_tt,
            program_builder,
            certificate_builder,
            adv_closed,
        };
        vec![
            parameterized(
                831,
                "MAJ(x1, x2, x3)",
                23,
                3,
                |b| maj_unbalanced_program(b),
                cert_831,
                adv_831,
            ),
            parameterized(
                975,
                "if x3 then x2 else x1",
                27,
                3,
                |_| prog_975(),
                cert_975,
                adv_975,
            ),
            parameterized(
                960,
                "EQUAL(x1, x2, x3)",
                129,
                3,
                equal3_program_beta,
                cert_960,
                adv_960,
            ),
            parameterized(
                963,
                "(x1 AND x2 AND x3) OR (NOT x1 AND NOT x2)",
                193,
                1,
                g_program_beta,
                cert_963,
                adv_963,
            ),
            parameterized(
                828,
                "EXACT2(x1, x2, x3)",
                22,
                3,
                prog_828,
                cert_828,
                adv_828,
            ),
            fixed(
                393,
                "(x1 AND x2 AND x3) OR (NOT x1 AND NOT x2 AND x4)",
                20483,
                |_| prog_393(),
                cert_393,
                None,
            ),
            fixed(989, "four-bit class 989", 44456, |_| prog_989(), cert_989, None),
            fixed(
                1968,
                "(x1 AND x2 AND (x3 OR x4)) OR (NOT x1 AND NOT x2 AND (NOT x3 OR x4))",
                53255,
                |_| prog_1968(),
                cert_1968,
                None,
            ),
            fixed(
                1910,
                "(x1 AND x2 AND x3 AND x4) OR (NOT x1 AND NOT x2) OR (NOT x3 AND NOT x4)",
                63625,
                |_| prog_1910(),
                cert_1910,
                None,
            ),
            fixed(
                317,
                "(x1 AND x2 AND x3) OR MAJ(NOT x2, NOT x3, x4)",
                54487,
                |_| prog_317(),
                cert_317,
                Some(|_| 7f64.sqrt()),
            ),
            fixed(
                5790,
                "(x1 AND (x2 XOR x3)) OR (NOT x1 AND ((x2 AND x4) OR (NOT x2 AND NOT x3)))",
                50492,
                |_| prog_5790(),
                cert_5790,
                None,
            ),
            fixed(
                385,
                "(x2 AND x3 AND x4) OR (x1 AND NOT x2 AND NOT x3 AND NOT x4)",
                385,
                |_| prog_385(),
                cert_385,
                None,
            ),
            fixed(
                279,
                "2-of-4 threshold",
                279,
                |_| thr2of4_program(),
                cert_279,
                Some(|_| 6f64.sqrt()),
            ),
            fixed(
                1639,
                "(x1 AND x2) OR MAJ(NOT x1 AND NOT x2, x3, x4)",
                28959,
                |_| prog_1639(),
                cert_1639,
                None,
            ),
            fixed(
                6014,
                "EXACT2 OR EXACT3 (of 4)",
                6014,
                |_| prog_6014(),
                cert_6014,
                None,
            ),
            fixed(
                278,
                "exactly 1 of 4",
                278,
                |_| prog_278(),
                cert_278,
                Some(|_| 10f64.sqrt()),
            ),
            fixed(
                5736,
                "EXACT2(x1, x2, x3, x4)",
                5736,
                |_| prog_5736(),
                cert_5736,
                Some(|_| 12f64.sqrt()),
            ),
        ]
    })
}

/// Looks up a catalog entry by function id.
pub fn entry(function_id: u16) -> Result<&'static CatalogEntry, CatalogError> {
    catalog()
        .iter()
        .find(|e| e.function_id == function_id)
        .ok_or(CatalogError::NoSuchEntry { id: function_id })
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

/// Result of re-deriving one catalog entry at one cost ratio.
#[derive(Clone, Debug, Serialize)]
pub struct EntryCheck {
    /// Entry id.
    pub function_id: u16,
    /// Entry description (annotated with the error message on failure).
    pub name: String,
    /// Cost ratio used.
    pub beta: f64,
    /// Truth table computed from the program.
    pub program_truth_table: u16,
    /// Canonicalization of that table.
    pub canonical_id: u16,
    /// Whether the canonical id equals the entry id.
    pub canonical_matches: bool,
    /// Balanced witness size of the program at the entry's costs.
    pub witness_size: f64,
    /// Certified lower bound from the adversary certificate.
    pub certificate_ratio: f64,
    /// Stated closed form, when the entry has one.
    pub closed_form: Option<f64>,
    /// `|witness_size − reference|` where the reference is the closed form if
    /// present, else the certificate ratio.
    pub witness_vs_reference: f64,
    /// `|certificate_ratio − closed_form|` (zero without a closed form).
    pub ratio_vs_closed: f64,
    /// Whether all checks passed at the pinned tolerances.
    pub pass: bool,
}

fn check_entry(e: &CatalogEntry, beta: f64) -> EntryCheck {
    let failed = |msg: String| EntryCheck {
        function_id: e.function_id,
        name: format!("{} ({msg})", e.name),
        beta,
        program_truth_table: 0,
        canonical_id: 0,
        canonical_matches: false,
        witness_size: f64::NAN,
        certificate_ratio: f64::NAN,
        closed_form: e.closed_form(beta),
        witness_vs_reference: f64::NAN,
        ratio_vs_closed: f64::NAN,
        pass: false,
    };
    let program = e.program(beta);
    let tt = match span_program_tt(&program, e.arity) {
        Ok(tt) => tt,
        Err(err) => return failed(err.to_string()),
    };
    let canonical_id = if e.arity == 3 {
        canonical_function_id4(tt3_to_tt4(tt as u8))
    } else {
        canonical_function_id4(tt)
    };
    let canonical_matches = canonical_id == e.function_id;
    let witness_size = match balanced_max_witness_size(&program, &e.program_costs(beta)) {
        Ok(b) => b.value,
        Err(err) => return failed(err.to_string()),
    };
    let ratio = match certificate_ratio(&e.certificate(beta), e.cert_tt) {
        Ok(r) => r,
        Err(err) => return failed(err.to_string()),
    };
    let closed = e.closed_form(beta);
    let reference = closed.unwrap_or(ratio);
    let witness_vs_reference = (witness_size - reference).abs();
    let ratio_vs_closed = closed.map(|v| (ratio - v).abs()).unwrap_or(0.0);
    let wsize_tol = if closed.is_some() { 1e-9 } else { 1e-6 };
    let pass = canonical_matches
        && witness_vs_reference <= wsize_tol
        && ratio_vs_closed <= 1e-6
        && (witness_size - ratio).abs() <= 1e-6;
    EntryCheck {
        function_id: e.function_id,
        name: e.name.to_string(),
        beta,
        program_truth_table: tt,
        canonical_id,
        canonical_matches,
        witness_size,
        certificate_ratio: ratio,
        closed_form: closed,
        witness_vs_reference,
        ratio_vs_closed,
        pass,
    }
}

/// Re-derives every catalog entry (at `β ∈ {1/2, 1, 2}` for parameterized
/// entries) and reports: the program's truth table and canonicalization, its
/// balanced witness size, the certificate ratio, and the closed form.
pub fn verify_catalog() -> Vec<EntryCheck> {
    let mut out = Vec::new();
    for e in catalog() {
        let betas: &[f64] = if e.parameterized {
            &[0.5, 1.0, 2.0]
        } else {
            &[1.0]
        };
        for &beta in betas {
            out.push(check_entry(e, beta));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Programs for gate kinds and whole formulas
// ---------------------------------------------------------------------------

fn approx_equal_costs(costs: &[f64]) -> bool {
    costs
        .windows(2)
        .all(|w| (w[0] - w[1]).abs() <= 1e-12 * w[0].max(w[1]).max(1.0))
}

fn relabel_maps3() -> &'static [Vec<Literal>] {
    static MAPS: OnceLock<Vec<Vec<Literal>>> = OnceLock::new();
    MAPS.get_or_init(|| {
        let mut maps = Vec::with_capacity(48);
        for perm in permutations(3) {
            for mask in 0..8usize {
                maps.push(
                    (0..3)
                        .map(|j| Literal {
                            var: perm[j] + 1,
                            neg: (mask >> j) & 1 == 1,
                        })
                        .collect(),
                );
            }
        }
        maps
    })
}

fn relabel_maps4() -> &'static [Vec<Literal>] {
    static MAPS: OnceLock<Vec<Vec<Literal>>> = OnceLock::new();
    MAPS.get_or_init(|| {
        let mut maps = Vec::with_capacity(384);
        for perm in permutations(4) {
            for mask in 0..16usize {
                maps.push(
                    (0..4)
                        .map(|j| Literal {
                            var: perm[j] + 1,
                            neg: (mask >> j) & 1 == 1,
                        })
                        .collect(),
                );
            }
        }
        maps
    })
}

/// Table of `g(x) = f(x′)` where `x′_j = x_{map[j].var} ⊕ map[j].neg` — the
/// same convention as [`SpanProgram::relabel`].
fn relabel_tt(t: u16, arity: usize, map: &[Literal]) -> u16 {
    let mut out = 0u16;
    for v in 0..(1u16 << arity) {
        let mut w = 0u16;
        for (j, lit) in map.iter().enumerate() {
            if input_bit(v, arity, lit.var) ^ lit.neg {
                w |= 1 << (arity - 1 - j);
            }
        }
        if tt_bit(t, arity, w) {
            out |= 1 << ((1 << arity) - 1 - v);
        }
    }
    out
}

struct ClassBase {
    tt: u16,
    build: fn() -> SpanProgram,
}

fn base_and2() -> SpanProgram {
    and_program(&[1.0, 1.0])
}
fn base_or2() -> SpanProgram {
    or_program(&[1.0, 1.0])
}
fn base_xor2() -> SpanProgram {
    parity_program(2)
}
fn base_and3() -> SpanProgram {
    and_program(&[1.0, 1.0, 1.0])
}
fn base_or3() -> SpanProgram {
    or_program(&[1.0, 1.0, 1.0])
}
fn base_or1_and2() -> SpanProgram {
    substitute_programs(
        &or_program(&[1.0, 2f64.sqrt()]),
        &[WireSub::Leaf, WireSub::positive(base_and2())],
    )
    .expect("class base composition is well-formed")
}
fn base_and1_or2() -> SpanProgram {
    substitute_programs(
        &and_program(&[1.0, 2f64.sqrt()]),
        &[WireSub::Leaf, WireSub::positive(base_or2())],
    )
    .expect("class base composition is well-formed")
}
fn base_or1_xor2() -> SpanProgram {
    substitute_programs(
        &or_program(&[1.0, 2.0]),
        &[WireSub::Leaf, WireSub::positive(base_xor2())],
    )
    .expect("class base composition is well-formed")
}
fn base_and1_xor2() -> SpanProgram {
    substitute_programs(
        &and_program(&[1.0, 2.0]),
        &[WireSub::Leaf, WireSub::positive(base_xor2())],
    )
    .expect("class base composition is well-formed")
}
fn base_xor1_and2() -> SpanProgram {
    let neg = base_or2()
        .relabel(&[Literal::neg(1), Literal::neg(2)])
        .expect("complement of AND2 relabels");
    substitute_programs(
        &parity_program(2),
        &[
            WireSub::Leaf,
            WireSub::with_complement(base_and2(), neg),
        ],
    )
    .expect("class base composition is well-formed")
}
fn base_ite() -> SpanProgram {
    prog_975()
}
fn base_maj() -> SpanProgram {
    maj_program()
}
fn base_equal3() -> SpanProgram {
    equal_program(3)
}
fn base_g() -> SpanProgram {
    g_program_beta(1.0)
}
fn base_exact2of3() -> SpanProgram {
    prog_828(1.0)
}
fn base_parity3() -> SpanProgram {
    parity_program(3)
}

/// Certified three-bit base programs, bucketed by the canonical id of the
/// table each base computes.
fn tt3_base_table() -> &'static HashMap<u8, Vec<ClassBase>> {
    static TABLE: OnceLock<HashMap<u8, Vec<ClassBase>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let builders: &[fn() -> SpanProgram] = &[
            unit_program,
            base_and2,
            base_or2,
            base_xor2,
            base_and3,
            base_or3,
            base_or1_and2,
            base_and1_or2,
            base_or1_xor2,
            base_and1_xor2,
            base_xor1_and2,
            base_ite,
            base_maj,
            base_equal3,
            base_g,
            base_exact2of3,
            base_parity3,
        ];
        let mut table: HashMap<u8, Vec<ClassBase>> = HashMap::new();
        for &builder in builders {
            let tt = span_program_tt(&builder(), 3).expect("class bases evaluate") as u8;
            table
                .entry(canonical_function_id3(tt))
                .or_default()
                .push(ClassBase {
                    tt: tt as u16,
                    build: builder,
                });
        }
        table
    })
}

fn entry_program_at_unit(id: u16) -> fn() -> SpanProgram {
    match id {
        393 => prog_393,
        989 => prog_989,
        1968 => prog_1968,
        1910 => prog_1910,
        317 => prog_317,
        5790 => prog_5790,
        385 => prog_385,
        279 => thr2of4_program,
        1639 => prog_1639,
        6014 => prog_6014,
        278 => prog_278,
        5736 => prog_5736,
        _ => unreachable!("only four-bit entries have unit builders"),
    }
}

/// Certified four-bit base programs (the twelve four-bit entries), bucketed
/// by canonical id.
fn tt4_base_table() -> &'static HashMap<u16, Vec<ClassBase>> {
    static TABLE: OnceLock<HashMap<u16, Vec<ClassBase>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table: HashMap<u16, Vec<ClassBase>> = HashMap::new();
        for e in catalog().iter().filter(|e| e.arity == 4) {
            let builder = entry_program_at_unit(e.function_id);
            let tt = span_program_tt(&builder(), 4).expect("entry programs evaluate");
            table
                .entry(canonical_function_id4(tt))
                .or_default()
                .push(ClassBase { tt, build: builder });
        }
        table
    })
}

/// Searches the class bases for a relabeling (or a relabeled dual) computing
/// the literal table `t`.
fn search_class(
    t: u16,
    arity: usize,
    bases: &[ClassBase],
    maps: &'static [Vec<Literal>],
) -> Option<SpanProgram> {
    let full = ((1u32 << (1 << arity)) - 1) as u16;
    for base in bases {
        for map in maps {
            if relabel_tt(base.tt, arity, map) == t {
                let p = (base.build)()
                    .relabel(map)
                    .expect("class search relabels are well-formed");
                return Some(p);
            }
        }
    }
    for base in bases {
        for map in maps {
            if relabel_tt(base.tt, arity, map) == (t ^ full) {
                let p = (base.build)()
                    .relabel(map)
                    .expect("class search relabels are well-formed");
                return Some(p.dual());
            }
        }
    }
    None
}

fn tt3_program_for(t: u8) -> Result<SpanProgram, CatalogError> {
    let canonical = canonical_function_id3(t);
    let bases = tt3_base_table()
        .get(&canonical)
        .ok_or(CatalogError::NoProgramForClass {
            tt: t as u16,
            canonical: canonical as u16,
        })?;
    search_class(t as u16, 3, bases, relabel_maps3()).ok_or(CatalogError::NoProgramForClass {
        tt: t as u16,
        canonical: canonical as u16,
    })
}

fn tt4_program_for(t: u16) -> Result<SpanProgram, CatalogError> {
    if let Some((dummy, t3)) = drop_dummy_var4(t) {
        let p3 = tt3_program_for(t3)?;
        let live: Vec<Literal> = (1..=4)
            .filter(|&v| v != dummy)
            .map(Literal::pos)
            .collect();
        return Ok(p3.relabel(&live)?);
    }
    let canonical = canonical_function_id4(t);
    let bases = tt4_base_table()
        .get(&canonical)
        .ok_or(CatalogError::NoProgramForClass { tt: t, canonical })?;
    search_class(t, 4, bases, relabel_maps4())
        .ok_or(CatalogError::NoProgramForClass { tt: t, canonical })
}

fn maj_for_costs(costs: &[f64]) -> Result<SpanProgram, CatalogError> {
    let eq = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.max(b).max(1.0);
    if eq(costs[0], costs[1]) && eq(costs[1], costs[2]) {
        return Ok(maj_program());
    }
    let (pair, odd) = if eq(costs[0], costs[1]) {
        ((0, 1), 2)
    } else if eq(costs[0], costs[2]) {
        ((0, 2), 1)
    } else if eq(costs[1], costs[2]) {
        ((1, 2), 0)
    } else {
        return Err(CatalogError::UnsupportedCosts {
            gate: "MAJ".into(),
            costs: costs.to_vec(),
        });
    };
    let beta = costs[odd] / costs[pair.0];
    let map = vec![
        Literal::pos(pair.0 + 1),
        Literal::pos(pair.1 + 1),
        Literal::pos(odd + 1),
    ];
    Ok(maj_unbalanced_program(beta).relabel(&map)?)
}

fn equal_for_costs(k: usize, costs: &[f64]) -> Result<SpanProgram, CatalogError> {
    if approx_equal_costs(costs) {
        return Ok(equal_program(k));
    }
    if k != 3 {
        return Err(CatalogError::UnsupportedCosts {
            gate: format!("EQUAL({k})"),
            costs: costs.to_vec(),
        });
    }
    let eq = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.max(b).max(1.0);
    let (pair, odd) = if eq(costs[0], costs[1]) {
        ((0, 1), 2)
    } else if eq(costs[0], costs[2]) {
        ((0, 2), 1)
    } else if eq(costs[1], costs[2]) {
        ((1, 2), 0)
    } else {
        return Err(CatalogError::UnsupportedCosts {
            gate: "EQUAL(3)".into(),
            costs: costs.to_vec(),
        });
    };
    let beta = costs[odd] / costs[pair.0];
    let map = vec![
        Literal::pos(pair.0 + 1),
        Literal::pos(pair.1 + 1),
        Literal::pos(odd + 1),
    ];
    Ok(equal3_program_beta(beta).relabel(&map)?)
}

/// Returns the weight-instantiated certified program for a gate at the given
/// child costs.
///
/// AND, OR and PARITY accept arbitrary positive costs. MAJ and EQUAL(3)
/// require at least two equal costs (the certified constructions do not
/// extend to three distinct costs); other EQUAL arities and the table gates
/// require all costs equal. NOT is realised structurally (as a graph gadget,
/// or by dualizing the child program) and has no catalog program.
pub fn catalog_program_for(
    kind: &GateKind,
    child_costs: &[f64],
) -> Result<SpanProgram, CatalogError> {
    let k = kind.arity();
    if child_costs.len() != k {
        return Err(CatalogError::CostLength {
            expected: k,
            found: child_costs.len(),
        });
    }
    if child_costs.iter().any(|&x| !(x > 0.0)) {
        return Err(CatalogError::UnsupportedCosts {
            gate: kind.to_string(),
            costs: child_costs.to_vec(),
        });
    }
    match kind {
        GateKind::Not => Err(CatalogError::StructuralGate {
            gate: "NOT".into(),
        }),
        GateKind::And(_) => Ok(and_program(child_costs)),
        GateKind::Or(_) => Ok(or_program(child_costs)),
        GateKind::Parity(_) => Ok(parity_program(k)),
        GateKind::Maj3 => maj_for_costs(child_costs),
        GateKind::EqualK(_) => equal_for_costs(k, child_costs),
        GateKind::Tt3(t) => {
            if !approx_equal_costs(child_costs) {
                return Err(CatalogError::UnsupportedCosts {
                    gate: kind.to_string(),
                    costs: child_costs.to_vec(),
                });
            }
            tt3_program_for(*t)
        }
        GateKind::Tt4(t) => {
            if !approx_equal_costs(child_costs) {
                return Err(CatalogError::UnsupportedCosts {
                    gate: kind.to_string(),
                    costs: child_costs.to_vec(),
                });
            }
            tt4_program_for(*t)
        }
    }
}

/// Certified balanced witness size of a gate at unit child costs, measured
/// from the class's base program (table gates report their equivalence
/// class's optimal value).
pub fn certified_gate_wsize(kind: &GateKind) -> Result<f64, CatalogError> {
    match kind {
        GateKind::Not => Ok(1.0),
        GateKind::And(k) | GateKind::Or(k) => {
            Ok(balance_unit(&and_program(&vec![1.0; *k])).1)
        }
        GateKind::Parity(k) => Ok(balance_unit(&parity_program(*k)).1),
        GateKind::Maj3 => Ok(balance_unit(&maj_program()).1),
        GateKind::EqualK(k) => Ok(balance_unit(&equal_program(*k)).1),
        GateKind::Tt3(t) => {
            let canonical = canonical_function_id3(*t);
            let bases =
                tt3_base_table()
                    .get(&canonical)
                    .ok_or(CatalogError::NoProgramForClass {
                        tt: *t as u16,
                        canonical: canonical as u16,
                    })?;
            Ok(balance_unit(&(bases[0].build)()).1)
        }
        GateKind::Tt4(t) => {
            if let Some((_, t3)) = drop_dummy_var4(*t) {
                return certified_gate_wsize(&GateKind::Tt3(t3));
            }
            let canonical = canonical_function_id4(*t);
            let bases = tt4_base_table()
                .get(&canonical)
                .ok_or(CatalogError::NoProgramForClass { tt: *t, canonical })?;
            Ok(balance_unit(&(bases[0].build)()).1)
        }
    }
}

fn collect_leaves(node: &GateNode, out: &mut Vec<usize>) {
    match node {
        GateNode::Leaf(v) => out.push(*v),
        GateNode::Gate { children, .. } => {
            for child in children {
                collect_leaves(child, out);
            }
        }
    }
}

fn negated_unit_program() -> SpanProgram {
    build(rvec(&[1.0]), vec![(rvec(&[1.0]), vec![Literal::neg(1)])])
}

fn node_program(node: &GateNode) -> Result<(SpanProgram, f64), CatalogError> {
    match node {
        GateNode::Leaf(_) => Ok((unit_program(), 1.0)),
        GateNode::Gate { kind, children } if matches!(kind, GateKind::Not) => {
            if matches!(children[0], GateNode::Leaf(_)) {
                return Ok((negated_unit_program(), 1.0));
            }
            let (p, _) = node_program(&children[0])?;
            let (balanced, size) = balance_checked(&p.dual())?;
            Ok((balanced, size))
        }
        GateNode::Gate { kind, children } => {
            enum Child {
                Leaf,
                NegLeaf,
                Prog(SpanProgram),
            }
            let mut subs = Vec::with_capacity(children.len());
            let mut costs = Vec::with_capacity(children.len());
            let mut programs: Vec<Child> = Vec::with_capacity(children.len());
            for child in children {
                match child {
                    GateNode::Leaf(_) => {
                        costs.push(1.0);
                        programs.push(Child::Leaf);
                    }
                    GateNode::Gate {
                        kind: GateKind::Not,
                        children: inner,
                    } if matches!(inner[0], GateNode::Leaf(_)) => {
                        costs.push(1.0);
                        programs.push(Child::NegLeaf);
                    }
                    _ => {
                        let (p, s) = node_program(child)?;
                        costs.push(s);
                        programs.push(Child::Prog(p));
                    }
                }
            }
            let outer = catalog_program_for(kind, &costs)?;
            let mut negated = vec![false; children.len()];
            for set in outer.literal_sets() {
                for lit in set {
                    if lit.neg {
                        negated[lit.var - 1] = true;
                    }
                }
            }
            for (p, needs_neg) in programs.into_iter().zip(negated) {
                subs.push(match p {
                    Child::Leaf => WireSub::Leaf,
                    // A negation directly on a leaf has an exact complement
                    // pair; no dual is needed in either polarity.
                    Child::NegLeaf => {
                        WireSub::with_complement(negated_unit_program(), unit_program())
                    }
                    Child::Prog(p) => {
                        if needs_neg {
                            let d = p.dual();
                            WireSub::with_complement(p, d)
                        } else {
                            WireSub::positive(p)
                        }
                    }
                });
            }
            let composed = substitute_programs(&outer, &subs)?;
            balance_checked(&composed)
        }
    }
}

fn balance_checked(p: &SpanProgram) -> Result<(SpanProgram, f64), CatalogError> {
    let u = ComplexityVector::ones(p.num_inputs());
    let b = balanced_max_witness_size(p, &u)?;
    if (b.scale - 1.0).abs() < 1e-12 {
        Ok((p.clone(), b.value))
    } else {
        Ok((p.scale_output_row(b.scale), b.value))
    }
}

/// Builds a composed span program for a whole formula, balancing every
/// subprogram, and returns it with its balanced witness size (an upper bound
/// on the optimal witness size of the formula's function).
///
/// Each gate uses its certified catalog program as the outer skeleton; leaf
/// wires pass through as literals (so negations on leaves are free), and
/// negated non-leaf wires use the child program's dual, whose measured
/// witness size is carried honestly into the parent's costs.
pub fn formula_program(f: &Formula) -> Result<(SpanProgram, f64), CatalogError> {
    let (program, size) = node_program(f.root())?;
    let mut leaves = Vec::new();
    collect_leaves(f.root(), &mut leaves);
    let map: Vec<Literal> = leaves.into_iter().map(Literal::pos).collect();
    Ok((program.relabel(&map)?, size))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::witness::{max_witness_size, witness_size};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // -- truth-table conventions --------------------------------------------

    #[test]
    fn table_bits_follow_the_row_numbering() {
        // 23 = MAJ on three bits: true on inputs {011, 101, 110, 111}.
        for v in 0..8u16 {
            let ones = v.count_ones();
            assert_eq!(tt_bit(23, 3, v), ones >= 2, "input {v:03b}");
        }
        // 279 = threshold 3-of-4.
        for v in 0..16u16 {
            assert_eq!(tt_bit(279, 4, v), v.count_ones() >= 3, "input {v:04b}");
        }
        assert!(tt3_value(23, [true, true, false]));
        assert!(!tt3_value(23, [true, false, false]));
        assert!(tt4_value(279, [true, true, true, false]));
        assert!(!tt4_value(279, [false, false, true, true]));
    }

    #[test]
    fn padding_adds_an_ignored_fourth_variable() {
        assert_eq!(tt3_to_tt4(23), 831);
        assert_eq!(tt3_to_tt4(27), 975);
        for t in [0u8, 1, 23, 129, 204, 255] {
            let padded = tt3_to_tt4(t);
            for v in 0..16u16 {
                assert_eq!(tt_bit(padded, 4, v), tt_bit(t as u16, 3, v >> 1));
            }
        }
    }

    #[test]
    fn formula_truth_tables_match_hand_values() {
        let maj = parse_formula("MAJ(x1, x2, x3)").unwrap();
        assert_eq!(truth_table3(&maj).unwrap(), 23);
        let thr = parse_formula("TT4:279(x1, x2, x3, x4)").unwrap();
        assert_eq!(truth_table4(&thr).unwrap(), 279);
        let and_or = parse_formula("AND(x1, OR(x2, x3))").unwrap();
        assert_eq!(truth_table3(&and_or).unwrap(), 7);
        assert!(matches!(
            truth_table3(&thr),
            Err(CatalogError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn span_program_tables_pad_trailing_variables() {
        assert_eq!(span_program_tt(&unit_program(), 3).unwrap(), 0b00001111);
        assert_eq!(span_program_tt(&maj_program(), 3).unwrap(), 23);
    }

    // -- canonicalization ---------------------------------------------------

    #[test]
    fn three_bit_canonicalization_matches_an_orbit_marking_oracle() {
        // Oracle: sweep tables in ascending order; the first table reaching
        // each orbit is the canonical id of everything in that orbit.
        let mut oracle = [u16::MAX; 256];
        for t in 0..=255u8 {
            if oracle[t as usize] != u16::MAX {
                continue;
            }
            for map in input_maps3() {
                let g = apply_map3(map, t);
                for member in [g, !g] {
                    if oracle[member as usize] == u16::MAX {
                        oracle[member as usize] = t as u16;
                    }
                }
            }
        }
        let mut classes = std::collections::HashSet::new();
        for t in 0..=255u8 {
            assert_eq!(canonical_function_id3(t) as u16, oracle[t as usize], "t={t}");
            classes.insert(oracle[t as usize]);
        }
        assert_eq!(classes.len(), 14);
    }

    #[test]
    fn four_bit_canonicalization_matches_an_orbit_marking_oracle() {
        let mut oracle = vec![u32::MAX; 65536];
        for t in 0..=65535u16 {
            if oracle[t as usize] != u32::MAX {
                continue;
            }
            for map in input_maps4() {
                let g = apply_map4(map, t);
                for member in [g, !g] {
                    if oracle[member as usize] == u32::MAX {
                        oracle[member as usize] = t as u32;
                    }
                }
            }
        }
        let mut classes = std::collections::HashSet::new();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for t in 0..=65535u16 {
            classes.insert(oracle[t as usize]);
            // Exhaustively comparing all 65536 values is slow under the
            // per-value 384-map scan, so compare a dense random sample plus
            // every orbit representative.
            if oracle[t as usize] == t as u32 || rng.gen_ratio(1, 8) {
                assert_eq!(
                    canonical_function_id4(t) as u32,
                    oracle[t as usize],
                    "t={t}"
                );
            }
        }
        assert_eq!(classes.len(), 222);
    }

    #[test]
    fn canonicalization_matches_the_stated_examples() {
        // The four-bit table of x1 ∧ ¬x3 is 204 and canonicalizes to 15.
        assert_eq!(canonical_function_id4(204), 15);
        assert_eq!(canonical_function_id4(15), 15);
        assert_eq!(canonical_function_id4(0), 0);
        assert_eq!(canonical_function_id3(204), canonical_function_id3(51));
    }

    // -- three-bit classes and certified values -----------------------------

    #[test]
    fn the_fourteen_classes_partition_all_three_bit_tables() {
        let ids: std::collections::HashSet<u8> = three_bit_classes()
            .iter()
            .map(|c| canonical_function_id3(c.literal_tt))
            .collect();
        assert_eq!(ids.len(), 14);
        for t in 0..=255u8 {
            assert!(adv3(t).is_finite());
        }
    }

    #[test]
    fn certified_three_bit_values_match_hand_checks() {
        assert_abs_diff_eq!(adv3(23), 2.0, epsilon = 1e-12); // MAJ
        assert_abs_diff_eq!(adv3(105), 3.0, epsilon = 1e-12); // PARITY
        assert_abs_diff_eq!(adv3(1), 3f64.sqrt(), epsilon = 1e-12); // AND3
        assert_abs_diff_eq!(adv3(129), 3.0 / 2f64.sqrt(), epsilon = 1e-12); // EQUAL
        assert_abs_diff_eq!(adv3(204), 1.0, epsilon = 1e-12); // ¬x2
        assert_abs_diff_eq!(adv3(22), 7f64.sqrt(), epsilon = 1e-12); // EXACT2
        // Complementation preserves the certified value.
        for t in 0..=255u8 {
            assert_eq!(adv3(t), adv3(!t));
        }
    }

    #[test]
    fn four_bit_values_reduce_dummies_and_use_catalog_classes() {
        assert_eq!(adv4(831), Some(2.0)); // padded MAJ
        // 204 = x1 ∧ ¬x3 ignores x2 and x4: two live variables, AND2 class.
        assert_eq!(adv4(204), Some(2f64.sqrt()));
        assert_abs_diff_eq!(adv4(279).unwrap(), 6f64.sqrt(), epsilon = 1e-9);
        assert_abs_diff_eq!(adv4(5736).unwrap(), 12f64.sqrt(), epsilon = 1e-9);
        // AND of four variables has no dummy and no catalog class.
        assert_eq!(adv4(1), None);
    }

    // -- certificates -------------------------------------------------------

    #[test]
    fn trivial_identity_certificate_scores_one() {
        let cert = cert(1, &[0], &[1], &[1.0], &[1.0]);
        // f(x) = x has table 0b01.
        assert_abs_diff_eq!(certificate_ratio(&cert, 0b01).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_pattern_violations_and_zero_matrices_are_rejected() {
        let bad = cert(1, &[0], &[1], &[1.0], &[1.0]);
        // Constant function: 0 and 1 share the value, so the entry is illegal.
        assert!(matches!(
            certificate_ratio(&bad, 0b00),
            Err(CatalogError::InvalidCertificate { .. })
        ));
        let zero = cert(1, &[0], &[1], &[0.0], &[1.0]);
        assert!(matches!(
            certificate_ratio(&zero, 0b01),
            Err(CatalogError::InvalidCertificate { .. })
        ));
    }

    #[test]
    fn parameterized_certificate_ratios_match_their_closed_forms() {
        for beta in [0.5, 1.0, 2.0] {
            assert_abs_diff_eq!(
                certificate_ratio(&cert_831(beta), 23).unwrap(),
                adv_831(beta),
                epsilon = 1e-9
            );
            assert_abs_diff_eq!(
                certificate_ratio(&cert_975(beta), 27).unwrap(),
                adv_975(beta),
                epsilon = 1e-9
            );
            assert_abs_diff_eq!(
                certificate_ratio(&cert_960(beta), 129).unwrap(),
                adv_960(beta),
                epsilon = 1e-9
            );
            assert_abs_diff_eq!(
                certificate_ratio(&cert_963(beta), 193).unwrap(),
                adv_963(beta),
                epsilon = 1e-9
            );
            assert_abs_diff_eq!(
                certificate_ratio(&cert_828(beta), 22).unwrap(),
                adv_828(beta),
                epsilon = 1e-9
            );
        }
    }

    #[test]
    fn fixed_certificate_ratios_match_their_stated_norms() {
        assert_abs_diff_eq!(
            certificate_ratio(&cert_279(1.0), 279).unwrap(),
            6f64.sqrt(),
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            certificate_ratio(&cert_317(1.0), 54487).unwrap(),
            7f64.sqrt(),
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            certificate_ratio(&cert_278(1.0), 278).unwrap(),
            10f64.sqrt(),
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            certificate_ratio(&cert_5736(1.0), 5736).unwrap(),
            12f64.sqrt(),
            epsilon = 1e-9
        );
    }

    // -- core builders ------------------------------------------------------

    #[test]
    fn basic_gate_programs_have_their_stated_witness_sizes() {
        let u2 = ComplexityVector::ones(2);
        let u3 = ComplexityVector::ones(3);
        assert_abs_diff_eq!(
            max_witness_size(&and_program(&[1.0, 1.0]), &u2).unwrap(),
            2f64.sqrt(),
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(
            max_witness_size(&or_program(&[1.0, 1.0]), &u2).unwrap(),
            2f64.sqrt(),
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(
            max_witness_size(&parity_program(2), &u2).unwrap(),
            2.0,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(
            max_witness_size(&maj_program(), &u3).unwrap(),
            2.0,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(
            max_witness_size(&equal_program(3), &u3).unwrap(),
            3.0 / 2f64.sqrt(),
            epsilon = 1e-10
        );
        // Weighted OR: column weights are √c over the fourth root of Σc².
        let or = or_program(&[1.0, 1.0]);
        let expected = 1.0 / 2f64.powf(0.25);
        assert_abs_diff_eq!(or.columns()[(0, 0)].re, expected, epsilon = 1e-12);
    }

    #[test]
    fn parity_chain_is_exactly_additive_on_every_input() {
        let p = parity_program(3);
        assert_eq!(span_program_tt(&p, 3).unwrap(), 105);
        let u = ComplexityVector::ones(3);
        for v in 0..8u16 {
            let x: Vec<bool> = (1..=3).map(|i| input_bit(v, 3, i)).collect();
            let report = witness_size(&p, &x, &u).unwrap();
            assert_abs_diff_eq!(report.value, 3.0, epsilon = 1e-9);
        }
        let p4 = parity_program(4);
        assert_eq!(span_program_tt(&p4, 4).unwrap(), 27030);
        let u4 = ComplexityVector::ones(4);
        assert_abs_diff_eq!(max_witness_size(&p4, &u4).unwrap(), 4.0, epsilon = 1e-9);
    }

    #[test]
    fn inline_or_composition_is_exact() {
        // x1 ∨ (x2 ∧ x3): sizes 1 and √2 compose to √3 exactly.
        let p = base_or1_and2();
        assert_eq!(span_program_tt(&p, 3).unwrap(), 31);
        let u = ComplexityVector::ones(3);
        assert_abs_diff_eq!(
            max_witness_size(&p, &u).unwrap(),
            3f64.sqrt(),
            epsilon = 1e-9
        );
        // x1 ∨ (x2 ⊕ x3): sizes 1 and 2 compose to √5 exactly.
        let q = base_or1_xor2();
        assert_eq!(span_program_tt(&q, 3).unwrap(), 111);
        assert_abs_diff_eq!(
            max_witness_size(&q, &u).unwrap(),
            5f64.sqrt(),
            epsilon = 1e-9
        );
        // x1 ⊕ (x2 ∧ x3): parity composition is additive, 1 + √2.
        let r = base_xor1_and2();
        assert_eq!(span_program_tt(&r, 3).unwrap(), 30);
        assert_abs_diff_eq!(
            max_witness_size(&r, &u).unwrap(),
            1.0 + 2f64.sqrt(),
            epsilon = 1e-9
        );
    }

    #[test]
    fn quotienting_free_columns_preserves_the_function_and_lowers_the_witness() {
        // Rebuild the always-on-column listing behind the 989 entry.
        let q = 2f64.powf(0.25);
        let r = 2f64.powf(-0.25);
        let listed = build(
            rvec(&[1.0, 0.0, 0.0]),
            vec![
                (rvec(&[0.0, 0.0, q]), vec![Literal::neg(1), Literal::pos(2)]),
                (rvec(&[1.0, 1.0, 1.0]), vec![]),
                (rvec(&[1.0, r, 0.0]), vec![Literal::neg(2)]),
                (rvec(&[1.0, r, 0.0]), vec![Literal::neg(3)]),
                (rvec(&[q, 1.0, 0.0]), vec![Literal::pos(4)]),
                (rvec(&[1.0, 1.0, 0.0]), vec![Literal::neg(4)]),
            ],
        );
        let quotient = quotient_free_columns(&listed).unwrap();
        assert_eq!(quotient.dim(), 2);
        assert_eq!(quotient.num_groups(), 5);
        assert_eq!(
            span_program_tt(&listed, 4).unwrap(),
            span_program_tt(&quotient, 4).unwrap()
        );
        let u = ComplexityVector::ones(4);
        let raw = balanced_max_witness_size(&listed, &u).unwrap().value;
        let reduced = balanced_max_witness_size(&quotient, &u).unwrap().value;
        // The empty group's unit weight costs the raw listing a 2^{1/4}
        // factor; the quotient hits the certified value exactly.
        assert_abs_diff_eq!(reduced, 1.0 + 2f64.sqrt(), epsilon = 1e-9);
        assert_abs_diff_eq!(raw, q * (1.0 + 2f64.sqrt()), epsilon = 1e-9);
        // Programs without free columns pass through untouched.
        let p = maj_program();
        let same = quotient_free_columns(&p).unwrap();
        assert_eq!(same.num_groups(), p.num_groups());
        assert_eq!(same.dim(), p.dim());
    }

    #[test]
    fn missing_complements_and_unread_wires_are_rejected() {
        let outer = parity_program(2);
        let err = substitute_programs(&outer, &[WireSub::positive(base_and2()), WireSub::Leaf]);
        assert!(matches!(err, Err(CatalogError::MissingComplement { wire: 1 })));
        let err = substitute_programs(&outer, &[WireSub::Leaf]);
        assert!(matches!(err, Err(CatalogError::WireCount { .. })));
    }

    // -- entries ------------------------------------------------------------

    #[test]
    fn program_truth_tables_are_frozen() {
        let expected: &[(u16, u16)] = &[
            (831, 23),
            (975, 39),
            (960, 129),
            (963, 137),
            (828, 151),
            (393, 20483),
            (989, 44456),
            (1968, 53255),
            (1910, 63625),
            (317, 54487),
            (5790, 50492),
            (385, 385),
            (279, 6015),
            (1639, 28959),
            (6014, 6014),
            (278, 38783),
            (5736, 5736),
        ];
        let mut mismatches = Vec::new();
        for &(id, want) in expected {
            let e = entry(id).unwrap();
            let got = e.program_truth_table(1.0).unwrap();
            if got != want {
                mismatches.push((id, want, got));
            }
            if e.parameterized {
                for beta in [0.5, 2.0] {
                    assert_eq!(
                        e.program_truth_table(beta).unwrap(),
                        got,
                        "entry {id} truth table must not depend on β"
                    );
                }
            }
        }
        assert!(
            mismatches.is_empty(),
            "program truth tables changed (id, expected, got): {mismatches:?}"
        );
    }

    #[test]
    fn every_catalog_entry_verifies() {
        let report = verify_catalog();
        assert_eq!(report.len(), 5 * 3 + 12);
        let failures: Vec<String> = report
            .iter()
            .filter(|c| !c.pass)
            .map(|c| {
                format!(
                    "#{} β={} tt={} canon={} wsize={} ratio={} closed={:?}",
                    c.function_id,
                    c.beta,
                    c.program_truth_table,
                    c.canonical_id,
                    c.witness_size,
                    c.certificate_ratio,
                    c.closed_form
                )
            })
            .collect();
        assert!(failures.is_empty(), "catalog failures:\n{}", failures.join("\n"));
    }

    #[test]
    fn entry_lookup_reports_missing_ids() {
        assert!(entry(279).is_ok());
        assert!(matches!(entry(7), Err(CatalogError::NoSuchEntry { id: 7 })));
    }

    // -- gate programs ------------------------------------------------------

    #[test]
    fn every_nonconstant_three_bit_table_gets_a_program() {
        for t in 1..=254u8 {
            let p = catalog_program_for(&GateKind::Tt3(t), &[1.0, 1.0, 1.0])
                .unwrap_or_else(|e| panic!("t={t}: {e}"));
            assert_eq!(span_program_tt(&p, 3).unwrap(), t as u16, "t={t}");
        }
    }

    #[test]
    fn sampled_four_bit_tables_get_programs_exactly_when_certified() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let covered: std::collections::HashSet<u16> =
            tt4_base_table().keys().copied().collect();
        let mut hits = 0;
        for _ in 0..300 {
            let t: u16 = rng.gen();
            let reducible = drop_dummy_var4(t).is_some();
            let in_catalog = covered.contains(&canonical_function_id4(t));
            match catalog_program_for(&GateKind::Tt4(t), &[1.0; 4]) {
                Ok(p) => {
                    assert!(reducible || in_catalog, "t={t}");
                    assert_eq!(span_program_tt(&p, 4).unwrap(), t, "t={t}");
                    hits += 1;
                }
                Err(CatalogError::NoProgramForClass { .. }) => {
                    assert!(!reducible && !in_catalog, "t={t}");
                }
                Err(e) => panic!("t={t}: {e}"),
            }
        }
        assert!(hits > 0, "the sample should hit certified classes");
        // Every entry's own literal table resolves to itself.
        for e in catalog().iter().filter(|e| e.arity == 4) {
            let tt = e.program_truth_table(1.0).unwrap();
            let p = catalog_program_for(&GateKind::Tt4(tt), &[1.0; 4]).unwrap();
            assert_eq!(span_program_tt(&p, 4).unwrap(), tt);
        }
    }

    #[test]
    fn majority_cost_patterns_follow_the_certified_rules() {
        let p = catalog_program_for(&GateKind::Maj3, &[1.0, 1.0, 2.0]).unwrap();
        assert_eq!(span_program_tt(&p, 3).unwrap(), 23);
        let u = ComplexityVector::new(vec![1.0, 1.0, 2.0]).unwrap();
        let b = balanced_max_witness_size(&p, &u).unwrap();
        assert_abs_diff_eq!(b.value, adv_831(2.0), epsilon = 1e-9);
        // The odd cost may sit anywhere.
        let q = catalog_program_for(&GateKind::Maj3, &[2.0, 1.0, 1.0]).unwrap();
        assert_eq!(span_program_tt(&q, 3).unwrap(), 23);
        let uq = ComplexityVector::new(vec![2.0, 1.0, 1.0]).unwrap();
        let bq = balanced_max_witness_size(&q, &uq).unwrap();
        assert_abs_diff_eq!(bq.value, adv_831(2.0), epsilon = 1e-9);
        // Three distinct costs are not certified.
        assert!(matches!(
            catalog_program_for(&GateKind::Maj3, &[1.0, 2.0, 3.0]),
            Err(CatalogError::UnsupportedCosts { .. })
        ));
        assert!(matches!(
            catalog_program_for(&GateKind::Not, &[1.0]),
            Err(CatalogError::StructuralGate { .. })
        ));
    }

    #[test]
    fn certified_gate_sizes_match_their_adversary_values() {
        assert_abs_diff_eq!(
            certified_gate_wsize(&GateKind::Maj3).unwrap(),
            2.0,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            certified_gate_wsize(&GateKind::EqualK(3)).unwrap(),
            3.0 / 2f64.sqrt(),
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            certified_gate_wsize(&GateKind::And(3)).unwrap(),
            3f64.sqrt(),
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            certified_gate_wsize(&GateKind::Tt4(279)).unwrap(),
            6f64.sqrt(),
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            certified_gate_wsize(&GateKind::Parity(3)).unwrap(),
            3.0,
            epsilon = 1e-9
        );
    }

    // -- formula composition ------------------------------------------------

    #[test]
    fn composed_formula_programs_compute_their_formulas() {
        let f = parse_formula("AND(x2, OR(x1, x3))").unwrap();
        let (p, size) = formula_program(&f).unwrap();
        assert_eq!(span_program_tt(&p, 3).unwrap(), 19);
        assert_abs_diff_eq!(size, 3f64.sqrt(), epsilon = 1e-9);

        let f = parse_formula("EQUAL(x1, x2, x3)").unwrap();
        let (p, size) = formula_program(&f).unwrap();
        assert_eq!(span_program_tt(&p, 3).unwrap(), 129);
        assert_abs_diff_eq!(size, 3.0 / 2f64.sqrt(), epsilon = 1e-9);
    }

    #[test]
    fn a_two_level_majority_tree_composes_to_witness_size_four() {
        let f = parse_formula("MAJ(MAJ(x1,x2,x3), MAJ(x4,x5,x6), MAJ(x7,x8,x9))").unwrap();
        let (p, size) = formula_program(&f).unwrap();
        assert_eq!(p.num_inputs(), 9);
        assert_abs_diff_eq!(size, 4.0, epsilon = 1e-9);
        // Spot-check correctness on a few inputs.
        let maj = |a: bool, b: bool, c2: bool| (a & b) | (a & c2) | (b & c2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let x: Vec<bool> = (0..9).map(|_| rng.gen()).collect();
            let want = maj(
                maj(x[0], x[1], x[2]),
                maj(x[3], x[4], x[5]),
                maj(x[6], x[7], x[8]),
            );
            assert_eq!(p.evaluate(&x).unwrap(), want);
        }
    }

    #[test]
    fn negations_on_leaves_are_free_and_on_gates_use_duals() {
        let f = parse_formula("PARITY(x1, NOT(x2))").unwrap();
        let (p, size) = formula_program(&f).unwrap();
        // x1 ⊕ ¬x2 on two variables: table 1001 = 9.
        assert_eq!(span_program_tt(&p, 2).unwrap(), 0b1001);
        assert_abs_diff_eq!(size, 2.0, epsilon = 1e-9);

        let f = parse_formula("NOT(AND(x1, x2))").unwrap();
        let (p, _) = formula_program(&f).unwrap();
        assert_eq!(span_program_tt(&p, 2).unwrap(), 0b1110);
    }
}
