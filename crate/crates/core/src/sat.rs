//! SAT instances in product-of-sums form.
//!
//! A formula is a conjunction of clauses; each clause keeps the variable
//! indices of its plain literals (`positives`) and complemented literals
//! (`negatives`) as sets. Evaluation goes through the mod-2 polynomial
//!
//! ```text
//! f(x) = prod_i ( 1 + prod_{a in S_i} (1 + x_a) * prod_{b in T_i} x_b )   (mod 2)
//! ```
//!
//! which is 1 exactly on the assignments satisfying every clause. The
//! inner product of clause i equals 1 precisely when that clause is
//! violated, so each outer factor flags clause-i satisfaction.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest variable count [`CnfFormula::count_roots`] will enumerate.
pub const EXHAUSTIVE_BOUND: u32 = 24;

#[derive(Debug, Error)]
pub enum SatError {
    /// DIMACS text rejected; `line` is 1-based.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("variable {var} out of range 1..={n}")]
    VariableOutOfRange { var: u32, n: u32 },
    #[error("clause has no literals")]
    EmptyClause,
    #[error("formula needs at least one variable")]
    NoVariables,
    #[error("assignment has {got} bits but the formula has {expected} variables")]
    AssignmentLength { expected: usize, got: usize },
    #[error("n={n} exceeds the exhaustive enumeration bound {bound}")]
    ExhaustiveBound { n: u32, bound: u32 },
    #[error("invalid formula JSON: {0}")]
    Json(#[from] serde_json::Error),
}

fn parse_err(line: usize, msg: impl Into<String>) -> SatError {
    SatError::Parse { line, msg: msg.into() }
}

/// One disjunction. `positives` holds indices appearing as plain
/// literals, `negatives` those appearing complemented. A variable may
/// sit in both sets (tautological clause); duplicates collapse by the
/// set representation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Clause {
    #[serde(rename = "pos")]
    positives: BTreeSet<u32>,
    #[serde(rename = "neg")]
    negatives: BTreeSet<u32>,
}

impl Clause {
    /// Build a clause from its literal index sets. Rejects the clause
    /// with no literals at all: the polynomial form has no encoding for
    /// it (empty products would force the whole formula to 0).
    pub fn new(
        positives: impl IntoIterator<Item = u32>,
        negatives: impl IntoIterator<Item = u32>,
    ) -> Result<Self, SatError> {
        let clause = Clause {
            positives: positives.into_iter().collect(),
            negatives: negatives.into_iter().collect(),
        };
        if clause.positives.is_empty() && clause.negatives.is_empty() {
            return Err(SatError::EmptyClause);
        }
        Ok(clause)
    }

    pub fn positives(&self) -> &BTreeSet<u32> {
        &self.positives
    }

    pub fn negatives(&self) -> &BTreeSet<u32> {
        &self.negatives
    }

    /// Direct disjunction semantics: true when some plain literal is 1
    /// or some complemented literal is 0. `bits[k]` is variable k+1.
    pub fn satisfied_by(&self, bits: &[bool]) -> bool {
        self.positives.iter().any(|&a| bits[(a - 1) as usize])
            || self.negatives.iter().any(|&b| !bits[(b - 1) as usize])
    }

    fn max_var(&self) -> u32 {
        let p = self.positives.iter().next_back().copied().unwrap_or(0);
        let q = self.negatives.iter().next_back().copied().unwrap_or(0);
        p.max(q)
    }
}

/// A value for every variable; `bits[k]` is variable k+1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    bits: Vec<bool>,
}

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Assignment { bits }
    }

    /// Unpack the n low bits of `index` with variable 1 in the most
    /// significant position, matching the basis-index convention of the
    /// state-vector simulator.
    pub fn from_index(index: u64, n: u32) -> Self {
        let bits = (0..n).map(|k| index >> (n - 1 - k) & 1 == 1).collect();
        Assignment { bits }
    }

    /// Pack back to an integer, variable 1 most significant.
    pub fn index(&self) -> u64 {
        self.bits
            .iter()
            .fold(0, |acc, &b| (acc << 1) | u64::from(b))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}

/// A CNF instance: variable count plus ordered clause list. The list
/// may be empty (the formula is then identically 1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CnfFormula {
    n: u32,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(n: u32, clauses: Vec<Clause>) -> Result<Self, SatError> {
        if n == 0 {
            return Err(SatError::NoVariables);
        }
        for clause in &clauses {
            let max = clause.max_var();
            if max > n {
                return Err(SatError::VariableOutOfRange { var: max, n });
            }
        }
        Ok(CnfFormula { n, clauses })
    }

    pub fn var_count(&self) -> u32 {
        self.n
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Parse DIMACS CNF: optional `c` comment lines, one
    /// `p cnf <vars> <clauses>` header, then clauses as signed integers
    /// terminated by 0. Clauses may span lines or share one. The
    /// declared clause count is not enforced.
    pub fn parse_dimacs(text: &str) -> Result<Self, SatError> {
        let mut header: Option<u32> = None;
        let mut clauses = Vec::new();
        let mut pos = BTreeSet::new();
        let mut neg = BTreeSet::new();
        let mut open = false;
        let mut last_line = 0;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            last_line = line;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('c') {
                continue;
            }
            if trimmed.starts_with('p') {
                if header.is_some() {
                    return Err(parse_err(line, "duplicate `p cnf` header"));
                }
                let fields: Vec<&str> = trimmed.split_whitespace().collect();
                if fields.len() != 4 || fields[1] != "cnf" {
                    return Err(parse_err(line, "malformed header, expected `p cnf <vars> <clauses>`"));
                }
                let n: u32 = fields[2]
                    .parse()
                    .map_err(|_| parse_err(line, format!("invalid variable count `{}`", fields[2])))?;
                // The declared clause count only gets a syntax check.
                fields[3]
                    .parse::<u64>()
                    .map_err(|_| parse_err(line, format!("invalid clause count `{}`", fields[3])))?;
                if n == 0 {
                    return Err(parse_err(line, "variable count must be positive"));
                }
                header = Some(n);
                continue;
            }
            let Some(n) = header else {
                return Err(parse_err(line, "clause data before `p cnf` header"));
            };
            for tok in trimmed.split_whitespace() {
                let lit: i64 = tok
                    .parse()
                    .map_err(|_| parse_err(line, format!("unexpected token `{tok}`")))?;
                if lit == 0 {
                    if pos.is_empty() && neg.is_empty() {
                        return Err(parse_err(line, "clause with no literals"));
                    }
                    clauses.push(Clause {
                        positives: std::mem::take(&mut pos),
                        negatives: std::mem::take(&mut neg),
                    });
                    open = false;
                } else {
                    let var = lit.unsigned_abs();
                    if var > u64::from(n) {
                        return Err(parse_err(line, format!("variable {var} out of range 1..={n}")));
                    }
                    if lit > 0 {
                        pos.insert(var as u32);
                    } else {
                        neg.insert(var as u32);
                    }
                    open = true;
                }
            }
        }

        if open {
            return Err(parse_err(last_line, "clause not terminated by 0 before end of input"));
        }
        let Some(n) = header else {
            return Err(parse_err(last_line.max(1), "missing `p cnf` header"));
        };
        CnfFormula::new(n, clauses)
    }

    /// Render back to DIMACS; positives first, then negated negatives,
    /// both ascending. `parse_dimacs` on the output reproduces `self`.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p cnf {} {}", self.n, self.clauses.len());
        for clause in &self.clauses {
            for &a in &clause.positives {
                let _ = write!(out, "{a} ");
            }
            for &b in &clause.negatives {
                let _ = write!(out, "-{b} ");
            }
            let _ = writeln!(out, "0");
        }
        out
    }

    /// Canonical JSON form `{"n":..,"clauses":[{"pos":[..],"neg":[..]}]}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("formula serialization cannot fail")
    }

    /// Parse the canonical JSON form, revalidating all invariants.
    pub fn from_json(text: &str) -> Result<Self, SatError> {
        #[derive(Deserialize)]
        struct RawClause {
            pos: Vec<u32>,
            neg: Vec<u32>,
        }
        #[derive(Deserialize)]
        struct RawFormula {
            n: u32,
            clauses: Vec<RawClause>,
        }
        let raw: RawFormula = serde_json::from_str(text)?;
        let clauses = raw
            .clauses
            .into_iter()
            .map(|c| Clause::new(c.pos, c.neg))
            .collect::<Result<Vec<_>, _>>()?;
        CnfFormula::new(raw.n, clauses)
    }

    /// Evaluate the mod-2 polynomial at `x`. Products are ANDs and
    /// `1 + z` is `1 ^ z` over the field with two elements.
    pub fn evaluate(&self, x: &Assignment) -> Result<bool, SatError> {
        if x.len() != self.n as usize {
            return Err(SatError::AssignmentLength {
                expected: self.n as usize,
                got: x.len(),
            });
        }
        let bit = |v: u32| u8::from(x.bits[(v - 1) as usize]);
        let mut f = 1u8;
        for clause in &self.clauses {
            let mut inner = 1u8;
            for &a in &clause.positives {
                inner &= 1 ^ bit(a);
            }
            for &b in &clause.negatives {
                inner &= bit(b);
            }
            f &= 1 ^ inner;
        }
        Ok(f == 1)
    }

    /// Number of satisfying assignments by exhaustive enumeration over
    /// all 2^n points, with the default bound of [`EXHAUSTIVE_BOUND`].
    pub fn count_roots(&self) -> Result<u64, SatError> {
        self.count_roots_bounded(EXHAUSTIVE_BOUND)
    }

    /// Exhaustive root count with a caller-chosen bound. Bounds above
    /// 32 are clamped (the packed evaluator is 32-bit).
    pub fn count_roots_bounded(&self, bound: u32) -> Result<u64, SatError> {
        let bound = bound.min(32);
        if self.n > bound {
            return Err(SatError::ExhaustiveBound { n: self.n, bound });
        }
        let eval = PackedEvaluator::new(self);
        Ok((0..1u64 << self.n).filter(|&x| eval.eval(x as u32)).count() as u64)
    }
}

/// Clause masks over assignments packed as integers, variable 1 in the
/// most significant of the n low bits. Clause i is violated at x
/// exactly when every positive literal reads 0 and every negative
/// literal reads 1, which two mask comparisons decide. A variable in
/// both sets makes the clause unviolable, matching its constant factor
/// 1 in the polynomial.
pub(crate) struct PackedEvaluator {
    masks: Vec<(u32, u32)>,
}

impl PackedEvaluator {
    /// Callers keep n within 32; every public entry point bounds n
    /// before building one of these.
    pub(crate) fn new(f: &CnfFormula) -> Self {
        debug_assert!(f.n <= 32);
        let bit = |v: u32| 1u32 << (f.n - v);
        let masks = f
            .clauses
            .iter()
            .map(|c| {
                let pos = c.positives.iter().fold(0, |m, &a| m | bit(a));
                let neg = c.negatives.iter().fold(0, |m, &b| m | bit(b));
                (pos, neg)
            })
            .collect();
        PackedEvaluator { masks }
    }

    pub(crate) fn eval(&self, x: u32) -> bool {
        !self
            .masks
            .iter()
            .any(|&(pos, neg)| x & pos == 0 && x & neg == neg)
    }
}
