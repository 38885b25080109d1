//! Read-once formulas over the extended gate set.
//!
//! A formula is a tree whose leaves are the input variables `x1..xN` (each
//! appearing exactly once) and whose internal nodes are gates drawn from a
//! fixed catalog: NOT, AND, OR, PARITY of any fan-in, three-bit majority,
//! k-bit EQUAL, and arbitrary three- or four-bit gates written as explicit
//! truth tables.  This module provides the concrete syntax (`parse_formula` /
//! `Display`), classical evaluation used as ground truth by the simulator
//! tests, and the adversary-bound bookkeeping: per-gate adversary values,
//! the balance check requiring all children of every gate to have equal
//! adversary bounds, and the composed bound for balanced formulas.

use serde::Serialize;
use thiserror::Error;

use crate::catalog;

/// Default cap on the fan-in of EQUAL gates.  Large EQUAL gates are legal in
/// principle but blow up the simulation graphs, so the parser refuses them
/// unless explicitly configured otherwise.
pub const DEFAULT_EQUAL_ARITY_CAP: usize = 8;

/// Errors from parsing, validating, or analyzing formulas.
#[derive(Debug, Error)]
pub enum FormulaError {
    /// The text does not conform to the formula grammar.
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    /// A gate name outside the catalog.
    #[error("unknown gate name `{name}` at byte {pos}")]
    UnknownGate { pos: usize, name: String },
    /// A gate applied to the wrong number of children.
    #[error("gate {gate} expects {expected} children, found {found}")]
    ArityMismatch {
        gate: String,
        expected: String,
        found: usize,
    },
    /// A leaf variable used more than once (formulas must be read-once).
    #[error("variable x{var} appears more than once; formulas are read-once")]
    RepeatedVariable { var: usize },
    /// Leaf variables must be exactly x1..xN with no gaps.
    #[error("variable indices must be contiguous from x1; x{var} is missing but x{max} is used")]
    MissingVariable { var: usize, max: usize },
    /// Variables are numbered from one.
    #[error("variable index 0 at byte {pos}; variables are numbered from x1")]
    ZeroVariable { pos: usize },
    /// Truth-table value out of range for the declared input count.
    #[error("truth-table value {value} does not fit a {bits}-bit gate table")]
    TruthTableRange { pos: usize, bits: usize, value: u64 },
    /// Constant gates are degenerate (adversary value zero) and rejected.
    #[error("gate {gate} is constant and cannot appear in a formula")]
    ConstantGate { gate: String },
    /// EQUAL fan-in above the configured cap.
    #[error("EQUAL fan-in {k} exceeds the configured cap {cap}")]
    EqualArityCap { k: usize, cap: usize },
    /// Input bitstring length does not match the formula arity.
    #[error("input length {found} does not match formula arity {expected}")]
    InputLength { expected: usize, found: usize },
    /// The composed adversary bound is only defined for balanced formulas.
    #[error("formula is not adversary-balanced: {0}")]
    Unbalanced(String),
    /// The gate's adversary value is not certified by the catalog.
    #[error("no certified adversary value for gate {gate}")]
    NoCertifiedValue { gate: String },
}

/// The gate alphabet.  Fan-in is part of the kind for the variadic gates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    /// Logical negation, fan-in 1.
    Not,
    /// Conjunction of `k >= 2` inputs.
    And(usize),
    /// Disjunction of `k >= 2` inputs.
    Or(usize),
    /// Exclusive-or of `k >= 2` inputs.
    Parity(usize),
    /// Majority of exactly three inputs.
    Maj3,
    /// True iff all `k >= 2` inputs are equal.
    EqualK(usize),
    /// Arbitrary three-bit gate given by its 8-bit truth table.
    Tt3(u8),
    /// Arbitrary four-bit gate given by its 16-bit truth table.
    Tt4(u16),
}

impl GateKind {
    /// Number of children this gate takes.
    pub fn arity(&self) -> usize {
        match self {
            GateKind::Not => 1,
            GateKind::And(k) | GateKind::Or(k) | GateKind::Parity(k) | GateKind::EqualK(k) => *k,
            GateKind::Maj3 | GateKind::Tt3(_) => 3,
            GateKind::Tt4(_) => 4,
        }
    }
}

impl std::fmt::Display for GateKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GateKind::Not => write!(f, "NOT"),
            GateKind::And(_) => write!(f, "AND"),
            GateKind::Or(_) => write!(f, "OR"),
            GateKind::Parity(_) => write!(f, "PARITY"),
            GateKind::Maj3 => write!(f, "MAJ"),
            GateKind::EqualK(_) => write!(f, "EQUAL"),
            GateKind::Tt3(t) => write!(f, "TT3:{t}"),
            GateKind::Tt4(t) => write!(f, "TT4:{t}"),
        }
    }
}

/// A node of the formula tree: either a leaf variable (1-based index) or a
/// gate applied to child subtrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GateNode {
    /// Input variable `x<index>`; indices are 1-based.
    Leaf(usize),
    /// Internal gate node.
    Gate {
        kind: GateKind,
        children: Vec<GateNode>,
    },
}

impl GateNode {
    /// Children of this node (empty for leaves).
    pub fn children(&self) -> &[GateNode] {
        match self {
            GateNode::Leaf(_) => &[],
            GateNode::Gate { children, .. } => children,
        }
    }

    /// The gate kind, or `None` for a leaf.
    pub fn kind(&self) -> Option<GateKind> {
        match self {
            GateNode::Leaf(_) => None,
            GateNode::Gate { kind, .. } => Some(*kind),
        }
    }
}

impl std::fmt::Display for GateNode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GateNode::Leaf(v) => write!(f, "x{v}"),
            GateNode::Gate { kind, children } => {
                write!(f, "{kind}(")?;
                for (i, child) in children.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{child}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A validated read-once formula on variables `x1..xN`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    root: GateNode,
    num_inputs: usize,
}

impl std::fmt::Display for Formula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.root)
    }
}

impl Formula {
    /// Validate a hand-built tree: gate arities, read-once variable use,
    /// contiguous variable indices, no constant gates, EQUAL fan-in cap.
    pub fn from_root(root: GateNode) -> Result<Formula, FormulaError> {
        Formula::from_root_with_equal_cap(root, DEFAULT_EQUAL_ARITY_CAP)
    }

    /// As [`Formula::from_root`] with an explicit EQUAL fan-in cap.
    pub fn from_root_with_equal_cap(
        root: GateNode,
        equal_cap: usize,
    ) -> Result<Formula, FormulaError> {
        validate_node(&root, equal_cap)?;
        let mut vars = Vec::new();
        collect_vars(&root, &mut vars)?;
        let mut seen = vec![false; vars.len()];
        let max = vars.iter().copied().max().unwrap_or(0);
        for &v in &vars {
            if v > vars.len() {
                // Some index below `max` must then be missing; report it below.
                continue;
            }
            if seen[v - 1] {
                return Err(FormulaError::RepeatedVariable { var: v });
            }
            seen[v - 1] = true;
        }
        if max != vars.len() {
            // Either a repeat above the length or a gap; find the smallest
            // missing index for the report.
            let mut present = vec![false; max];
            for &v in &vars {
                if present[v - 1] {
                    return Err(FormulaError::RepeatedVariable { var: v });
                }
                present[v - 1] = true;
            }
            let missing = present.iter().position(|&p| !p).unwrap_or(0) + 1;
            return Err(FormulaError::MissingVariable { var: missing, max });
        }
        Ok(Formula {
            root,
            num_inputs: max,
        })
    }

    /// The root node.
    pub fn root(&self) -> &GateNode {
        &self.root
    }

    /// Number of input variables `N` (leaves are exactly `x1..xN`).
    pub fn num_inputs(&self) -> usize {
        self.num_inputs
    }

    /// Ordinary boolean evaluation of the tree.  `bits[i]` is the value of
    /// `x(i+1)`; the length must match the formula arity exactly.
    pub fn evaluate_classically(&self, bits: &[bool]) -> Result<bool, FormulaError> {
        if bits.len() != self.num_inputs {
            return Err(FormulaError::InputLength {
                expected: self.num_inputs,
                found: bits.len(),
            });
        }
        Ok(eval_node(&self.root, bits))
    }
}

fn validate_node(node: &GateNode, equal_cap: usize) -> Result<(), FormulaError> {
    let GateNode::Gate { kind, children } = node else {
        return Ok(());
    };
    let found = children.len();
    match kind {
        GateKind::Not if found != 1 => {
            return Err(FormulaError::ArityMismatch {
                gate: kind.to_string(),
                expected: "exactly 1".into(),
                found,
            });
        }
        GateKind::And(k) | GateKind::Or(k) | GateKind::Parity(k) => {
            if *k < 2 || found != *k {
                return Err(FormulaError::ArityMismatch {
                    gate: kind.to_string(),
                    expected: "at least 2 (matching the declared fan-in)".into(),
                    found,
                });
            }
        }
        GateKind::EqualK(k) => {
            if *k < 2 || found != *k {
                return Err(FormulaError::ArityMismatch {
                    gate: kind.to_string(),
                    expected: "at least 2 (matching the declared fan-in)".into(),
                    found,
                });
            }
            if *k > equal_cap {
                return Err(FormulaError::EqualArityCap {
                    k: *k,
                    cap: equal_cap,
                });
            }
        }
        GateKind::Maj3 | GateKind::Tt3(_) if found != 3 => {
            return Err(FormulaError::ArityMismatch {
                gate: kind.to_string(),
                expected: "exactly 3".into(),
                found,
            });
        }
        GateKind::Tt4(_) if found != 4 => {
            return Err(FormulaError::ArityMismatch {
                gate: kind.to_string(),
                expected: "exactly 4".into(),
                found,
            });
        }
        _ => {}
    }
    match kind {
        GateKind::Tt3(t) if *t == 0 || *t == u8::MAX => {
            return Err(FormulaError::ConstantGate {
                gate: kind.to_string(),
            });
        }
        GateKind::Tt4(t) if *t == 0 || *t == u16::MAX => {
            return Err(FormulaError::ConstantGate {
                gate: kind.to_string(),
            });
        }
        _ => {}
    }
    for child in children {
        validate_node(child, equal_cap)?;
    }
    Ok(())
}

fn collect_vars(node: &GateNode, out: &mut Vec<usize>) -> Result<(), FormulaError> {
    match node {
        GateNode::Leaf(0) => Err(FormulaError::ZeroVariable { pos: 0 }),
        GateNode::Leaf(v) => {
            out.push(*v);
            Ok(())
        }
        GateNode::Gate { children, .. } => {
            for child in children {
                collect_vars(child, out)?;
            }
            Ok(())
        }
    }
}

fn eval_node(node: &GateNode, bits: &[bool]) -> bool {
    match node {
        GateNode::Leaf(v) => bits[*v - 1],
        GateNode::Gate { kind, children } => {
            let vals: Vec<bool> = children.iter().map(|c| eval_node(c, bits)).collect();
            match kind {
                GateKind::Not => !vals[0],
                GateKind::And(_) => vals.iter().all(|&b| b),
                GateKind::Or(_) => vals.iter().any(|&b| b),
                GateKind::Parity(_) => vals.iter().fold(false, |acc, &b| acc ^ b),
                GateKind::Maj3 => vals.iter().filter(|&&b| b).count() >= 2,
                GateKind::EqualK(_) => vals.iter().all(|&b| b) || vals.iter().all(|&b| !b),
                GateKind::Tt3(t) => catalog::tt3_value(*t, [vals[0], vals[1], vals[2]]),
                GateKind::Tt4(t) => catalog::tt4_value(*t, [vals[0], vals[1], vals[2], vals[3]]),
            }
        }
    }
}

/// Parse a formula from text using the default EQUAL fan-in cap.
///
/// Grammar: `formula := gate | var`, `var := "x" digits`,
/// `gate := NAME "(" formula ("," formula)* ")"`, with `NAME` one of
/// `NOT`, `AND`, `OR`, `PARITY`, `MAJ`, `EQUAL`, `TT3:<0..255>`,
/// `TT4:<0..65535>`.  Names are case-insensitive and whitespace may appear
/// between tokens.
pub fn parse_formula(text: &str) -> Result<Formula, FormulaError> {
    parse_formula_with_equal_cap(text, DEFAULT_EQUAL_ARITY_CAP)
}

/// As [`parse_formula`] with an explicit EQUAL fan-in cap.
pub fn parse_formula_with_equal_cap(text: &str, cap: usize) -> Result<Formula, FormulaError> {
    let mut parser = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let root = parser.parse_expr()?;
    parser.skip_ws();
    if parser.pos != parser.bytes.len() {
        return Err(FormulaError::Syntax {
            pos: parser.pos,
            message: "unexpected trailing input".into(),
        });
    }
    Formula::from_root_with_equal_cap(root, cap)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_whitespace())
        {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn take_digits(&mut self) -> Option<(u64, bool)> {
        let start = self.pos;
        let mut value: u64 = 0;
        let mut overflow = false;
        while let Some(b @ b'0'..=b'9') = self.peek() {
            value = value
                .saturating_mul(10)
                .saturating_add(u64::from(b - b'0'));
            if value == u64::MAX {
                overflow = true;
            }
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            Some((value, overflow))
        }
    }

    fn parse_expr(&mut self) -> Result<GateNode, FormulaError> {
        self.skip_ws();
        let start = self.pos;
        let mut word = String::new();
        while self
            .peek()
            .is_some_and(|b| b.is_ascii_alphanumeric())
        {
            word.push(self.bytes[self.pos] as char);
            self.pos += 1;
        }
        if word.is_empty() {
            return Err(FormulaError::Syntax {
                pos: start,
                message: "expected a gate name or a variable like x1".into(),
            });
        }
        // Variable: "x" followed by digits only.
        let rest = &word[1..];
        if (word.starts_with('x') || word.starts_with('X'))
            && !rest.is_empty()
            && rest.bytes().all(|b| b.is_ascii_digit())
        {
            let value: u64 = rest.parse().map_err(|_| FormulaError::Syntax {
                pos: start,
                message: format!("variable index `{rest}` is too large"),
            })?;
            if value == 0 {
                return Err(FormulaError::ZeroVariable { pos: start });
            }
            let var = usize::try_from(value).map_err(|_| FormulaError::Syntax {
                pos: start,
                message: format!("variable index `{rest}` is too large"),
            })?;
            return Ok(GateNode::Leaf(var));
        }
        let upper = word.to_ascii_uppercase();
        let table = match upper.as_str() {
            "TT3" | "TT4" => {
                if self.peek() != Some(b':') {
                    return Err(FormulaError::Syntax {
                        pos: self.pos,
                        message: format!("expected `:` and a table value after {upper}"),
                    });
                }
                self.pos += 1;
                let digit_pos = self.pos;
                let Some((value, overflow)) = self.take_digits() else {
                    return Err(FormulaError::Syntax {
                        pos: digit_pos,
                        message: format!("expected a table value after {upper}:"),
                    });
                };
                let bits = if upper == "TT3" { 3 } else { 4 };
                let limit = if bits == 3 {
                    u64::from(u8::MAX)
                } else {
                    u64::from(u16::MAX)
                };
                if overflow || value > limit {
                    return Err(FormulaError::TruthTableRange {
                        pos: digit_pos,
                        bits,
                        value,
                    });
                }
                Some((bits, value))
            }
            _ => None,
        };
        self.skip_ws();
        if self.peek() != Some(b'(') {
            return Err(FormulaError::Syntax {
                pos: self.pos,
                message: format!("expected `(` after gate name `{word}`"),
            });
        }
        self.pos += 1;
        let mut children = vec![self.parse_expr()?];
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b',') => {
                    self.pos += 1;
                    children.push(self.parse_expr()?);
                }
                Some(b')') => {
                    self.pos += 1;
                    break;
                }
                _ => {
                    return Err(FormulaError::Syntax {
                        pos: self.pos,
                        message: "expected `,` or `)` in gate argument list".into(),
                    });
                }
            }
        }
        let n = children.len();
        let kind = match (upper.as_str(), table) {
            ("NOT", _) => GateKind::Not,
            ("AND", _) => GateKind::And(n),
            ("OR", _) => GateKind::Or(n),
            ("PARITY", _) => GateKind::Parity(n),
            ("MAJ", _) => GateKind::Maj3,
            ("EQUAL", _) => GateKind::EqualK(n),
            (_, Some((3, value))) => GateKind::Tt3(value as u8),
            (_, Some((4, value))) => GateKind::Tt4(value as u16),
            _ => {
                return Err(FormulaError::UnknownGate {
                    pos: start,
                    name: word,
                });
            }
        };
        Ok(GateNode::Gate { kind, children })
    }
}

/// Per-gate record produced by [`check_adversary_balanced`].
#[derive(Debug, Clone, Serialize)]
pub struct GateBalanceEntry {
    /// Position of the gate in the tree, e.g. `root.2.1` (1-based child
    /// positions from the root).
    pub path: String,
    /// Printed gate name.
    pub gate: String,
    /// Adversary bounds of the child subformulas, in child order.
    pub child_advs: Vec<f64>,
    /// Whether the child bounds agree within tolerance at this gate.
    pub balanced: bool,
}

/// Adversary bound of a single gate with unit-cost (balanced) inputs.
///
/// Values are exact closed forms evaluated in double precision.  Three- and
/// four-bit truth-table gates are looked up in the gate catalog; a four-bit
/// table outside the certified catalog yields
/// [`FormulaError::NoCertifiedValue`].
pub fn gate_adv(kind: &GateKind) -> Result<f64, FormulaError> {
    Ok(match kind {
        GateKind::Not => 1.0,
        GateKind::And(k) | GateKind::Or(k) => (*k as f64).sqrt(),
        GateKind::Parity(k) => *k as f64,
        GateKind::Maj3 => 2.0,
        GateKind::EqualK(k) => *k as f64 / ((*k - 1) as f64).sqrt(),
        GateKind::Tt3(t) => catalog::adv3(*t),
        GateKind::Tt4(t) => {
            catalog::adv4(*t).ok_or_else(|| FormulaError::NoCertifiedValue {
                gate: kind.to_string(),
            })?
        }
    })
}

/// Check that every gate's children have equal adversary bounds within the
/// relative tolerance `tol`.  Returns the overall verdict together with a
/// pre-order report covering every gate.
pub fn check_adversary_balanced(
    f: &Formula,
    tol: f64,
) -> Result<(bool, Vec<GateBalanceEntry>), FormulaError> {
    let mut entries = Vec::new();
    let (_, ok) = balance_walk(f.root(), tol, "root".to_string(), &mut entries)?;
    Ok((ok, entries))
}

/// Composed adversary bound of a balanced formula: the product of gate
/// adversary bounds along any root-to-leaf path (all paths agree when the
/// formula is balanced).  Errors if any gate is unbalanced at tolerance
/// `tol`, listing the violating gates.
pub fn formula_adv(f: &Formula, tol: f64) -> Result<f64, FormulaError> {
    let mut entries = Vec::new();
    let (value, ok) = balance_walk(f.root(), tol, "root".to_string(), &mut entries)?;
    if !ok {
        let violations: Vec<String> = entries
            .iter()
            .filter(|e| !e.balanced)
            .map(|e| {
                format!(
                    "{} at {} has child adversary bounds {:?}",
                    e.gate, e.path, e.child_advs
                )
            })
            .collect();
        return Err(FormulaError::Unbalanced(violations.join("; ")));
    }
    Ok(value)
}

/// Recursive worker: returns (adversary bound of the subtree, balanced?).
/// For an unbalanced gate the bound is still reported, using the largest
/// child bound, so that the report stays informative; callers treat it as
/// meaningful only when the balance flag is set.
fn balance_walk(
    node: &GateNode,
    tol: f64,
    path: String,
    entries: &mut Vec<GateBalanceEntry>,
) -> Result<(f64, bool), FormulaError> {
    let GateNode::Gate { kind, children } = node else {
        return Ok((1.0, true));
    };
    let mut child_entries = Vec::new();
    let mut advs = Vec::with_capacity(children.len());
    let mut all_ok = true;
    for (i, child) in children.iter().enumerate() {
        let (a, ok) = balance_walk(child, tol, format!("{path}.{}", i + 1), &mut child_entries)?;
        advs.push(a);
        all_ok &= ok;
    }
    let max = advs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = advs.iter().copied().fold(f64::INFINITY, f64::min);
    let here_ok = (max - min) <= tol * max.max(1.0);
    entries.push(GateBalanceEntry {
        path,
        gate: kind.to_string(),
        child_advs: advs,
        balanced: here_ok,
    });
    entries.append(&mut child_entries);
    Ok((gate_adv(kind)? * max, all_ok && here_ok))
}
