//! Flag-variety descriptors and the two splitting-field reductions.
//!
//! `X_{d_1,...,d_k}(A)` denotes the variety of flags of right ideals of A
//! with reduced dimensions d_1 < ... < d_k. Two reductions bring any such
//! variety into a normal form:
//!
//! * the flag collapses to a single generalized Severi-Brauer variety
//!   `X_d(A)` with d = gcd(ind A, d_1, ..., d_k);
//! * `X_d(A)` splits into a product over the primary components,
//!   `X_{e_1}(A_1) x ... x X_{e_r}(A_r)` with e_j = gcd(d, q_j).
//!
//! Both reductions preserve the class of splitting fields, and that is
//! checkable here: [`equivalent`] decides equivalence by enumerating every
//! [`FieldState`] of the underlying decomposition.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::arith::{gcd, AlgebraClass, FieldState, PrimaryFactor};
use crate::error::{Error, Result};

/// Signature of a partial flag variety in n-space: strictly increasing
/// reduced dimensions d_1 < ... < d_k with d_k <= n.
///
/// d_k = n is permitted only as the degenerate point variety (the ideal of
/// full reduced dimension is the algebra itself).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FlagSpec {
    n: u64,
    dims: Vec<u64>,
}

impl FlagSpec {
    /// Canonicalizes by sorting; duplicate entries are rejected rather than
    /// deduplicated (flags are strictly increasing chains of ideals).
    pub fn new(n: u64, mut dims: Vec<u64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidFlag("ambient dimension must be positive".into()));
        }
        if dims.is_empty() {
            return Err(Error::InvalidFlag("empty flag signature".into()));
        }
        dims.sort_unstable();
        if dims.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidFlag(format!(
                "duplicate reduced dimension in {dims:?}"
            )));
        }
        if dims[0] == 0 {
            return Err(Error::InvalidFlag("reduced dimensions start at 1".into()));
        }
        if *dims.last().unwrap() > n {
            return Err(Error::InvalidFlag(format!(
                "largest reduced dimension {} exceeds n = {n}",
                dims.last().unwrap()
            )));
        }
        Ok(FlagSpec { n, dims })
    }

    pub fn grassmannian(n: u64, d: u64) -> Result<Self> {
        FlagSpec::new(n, vec![d])
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn dims(&self) -> &[u64] {
        &self.dims
    }

    /// gcd of the reduced dimensions.
    pub fn dims_gcd(&self) -> u64 {
        self.dims.iter().copied().fold(0, gcd)
    }

    /// Dimension of the split partial flag variety: sum of d_i(d_{i+1}-d_i)
    /// with d_{k+1} = n. Equals the number of index pairs lying in distinct
    /// blocks of the composition (d_1, d_2-d_1, ..., n-d_k).
    pub fn dimension(&self) -> u64 {
        let mut total = 0;
        for (i, d) in self.dims.iter().enumerate() {
            let next = self.dims.get(i + 1).copied().unwrap_or(self.n);
            total += d * (next - d);
        }
        total
    }

    /// Whether the flag acquires a point over an extension under which the
    /// algebra keeps residual index m: true iff m divides every d_i.
    pub fn has_point(&self, residual_index: u64) -> Result<bool> {
        if residual_index == 0 || self.n % residual_index != 0 {
            return Err(Error::NotADivisor {
                divisor: residual_index,
                of: self.n,
            });
        }
        Ok(self.dims.iter().all(|d| d % residual_index == 0))
    }

    /// The point variety X_n in n-space.
    pub fn degenerate_point(n: u64) -> Result<Self> {
        FlagSpec::new(n, vec![n])
    }
}

impl fmt::Display for FlagSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.dims.iter().map(u64::to_string).collect();
        write!(f, "X_{{{}}}", dims.join(","))
    }
}

/// One factor of a variety expression: a flag variety over an algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarietyFactor {
    pub algebra: AlgebraClass,
    pub flag: FlagSpec,
}

/// A formal product of flag varieties over component algebras.
/// The empty product is the point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarietyExpr {
    factors: Vec<VarietyFactor>,
}

impl VarietyExpr {
    pub fn new(factors: Vec<VarietyFactor>) -> Result<Self> {
        for f in &factors {
            if f.flag.n() != f.algebra.index_value() {
                return Err(Error::InvalidFlag(format!(
                    "flag lives in dimension {} but the algebra has index {}",
                    f.flag.n(),
                    f.algebra.index_value()
                )));
            }
        }
        Ok(VarietyExpr { factors })
    }

    pub fn point() -> Self {
        VarietyExpr { factors: Vec::new() }
    }

    pub fn single(algebra: AlgebraClass, flag: FlagSpec) -> Result<Self> {
        VarietyExpr::new(vec![VarietyFactor { algebra, flag }])
    }

    pub fn factors(&self) -> &[VarietyFactor] {
        &self.factors
    }

    pub fn is_point(&self) -> bool {
        self.factors.is_empty()
    }

    /// Merged primary decomposition of every factor algebra, keyed by prime.
    ///
    /// Two factors mentioning the same prime must agree on the component
    /// index q at that prime; otherwise the expressions do not live over a
    /// common algebra and comparison is rejected.
    pub fn primary_context(&self) -> Result<Vec<PrimaryFactor>> {
        let mut context: Vec<PrimaryFactor> = Vec::new();
        for f in &self.factors {
            for component in f.algebra.primary_decomposition() {
                match context.iter().find(|c| c.prime == component.prime) {
                    Some(existing) if existing.power != component.power => {
                        return Err(Error::IncompatibleDecomposition(format!(
                            "prime {}: component indices {} and {}",
                            component.prime, existing.power, component.power
                        )));
                    }
                    Some(_) => {}
                    None => context.push(component),
                }
            }
        }
        context.sort_by_key(|c| c.prime);
        Ok(context)
    }

    /// A product has a point iff each factor does.
    pub fn has_point_in_state(&self, state: &FieldState) -> Result<bool> {
        for f in &self.factors {
            let m = state.residual_index_of(&f.algebra)?;
            if !f.flag.has_point(m)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for VarietyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "pt");
        }
        let single = self.factors.len() == 1;
        let parts: Vec<String> = self
            .factors
            .iter()
            .enumerate()
            .map(|(j, factor)| {
                let name = if single {
                    "A".to_string()
                } else {
                    format!("A_{}[ind {}]", j + 1, factor.algebra.index_value())
                };
                format!("{}({})", factor.flag, name)
            })
            .collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// One rewrite step: rule name, expressions before and after, and the
/// mathematical justification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub rule: String,
    pub before: VarietyExpr,
    pub after: VarietyExpr,
    pub justification: String,
}

/// An ordered chain of rewrite steps; consecutive steps chain exactly.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionTrace {
    steps: Vec<ReductionStep>,
}

impl ReductionTrace {
    pub fn new() -> Self {
        ReductionTrace::default()
    }

    pub fn push(&mut self, step: ReductionStep) -> Result<()> {
        if let Some(last) = self.steps.last() {
            if last.after != step.before {
                return Err(Error::Internal(
                    "reduction trace steps do not chain".into(),
                ));
            }
        }
        self.steps.push(step);
        Ok(())
    }

    pub fn steps(&self) -> &[ReductionStep] {
        &self.steps
    }

    pub fn extend(&mut self, other: ReductionTrace) -> Result<()> {
        for step in other.steps {
            self.push(step)?;
        }
        Ok(())
    }

    pub fn lines(&self) -> Vec<String> {
        self.steps
            .iter()
            .map(|s| format!("{}: {} -> {}  [{}]", s.rule, s.before, s.after, s.justification))
            .collect()
    }
}

/// Collapse a flag to the single Severi-Brauer variety X_d(A) with
/// d = gcd(ind A, d_1, ..., d_k). The two have the same splitting fields:
/// a point of either over K amounts to ind A_K dividing d.
pub fn reduce_flag(algebra: &AlgebraClass, spec: &FlagSpec) -> Result<(VarietyExpr, ReductionTrace)> {
    let n = algebra.index_value();
    if spec.n() != n {
        return Err(Error::InvalidFlag(format!(
            "flag in dimension {} over an algebra of index {n}",
            spec.n()
        )));
    }
    let d = gcd(n, spec.dims_gcd());
    let before = VarietyExpr::single(algebra.clone(), spec.clone())?;
    let after = VarietyExpr::single(algebra.clone(), FlagSpec::grassmannian(n, d)?)?;
    let mut trace = ReductionTrace::new();
    trace.push(ReductionStep {
        rule: "flag-gcd-reduction".into(),
        before,
        after: after.clone(),
        justification: format!(
            "X_{{d_1,...,d_k}}(A) ~ X_d(A) for d = gcd(ind A, d_1,...,d_k) = {d} (KMRT98 Th. 1.17)"
        ),
    })?;
    Ok((after, trace))
}

/// Split X_d(A) along the primary decomposition of A: each component A_j of
/// index q_j contributes X_{e_j}(A_j) with e_j = gcd(d, q_j). Factors with
/// e_j = q_j are split (degenerate points) and are retained here; consumers
/// that count dimension drop them.
pub fn decompose_primary_variety(
    algebra: &AlgebraClass,
    d: u64,
) -> Result<(VarietyExpr, ReductionTrace)> {
    let n = algebra.index_value();
    if d == 0 || d >= n {
        return Err(Error::DimensionOutOfRange {
            d,
            index: n,
            max: n.saturating_sub(1),
        });
    }
    let before = VarietyExpr::single(algebra.clone(), FlagSpec::grassmannian(n, d)?)?;
    let mut factors = Vec::new();
    let mut parts = Vec::new();
    for component in algebra.primary_decomposition() {
        let e = gcd(d, component.power);
        parts.push(format!("e = gcd({d}, {}) = {e}", component.power));
        factors.push(VarietyFactor {
            algebra: AlgebraClass::with_index(component.power)?,
            flag: FlagSpec::grassmannian(component.power, e)?,
        });
    }
    let after = VarietyExpr::new(factors)?;
    let mut trace = ReductionTrace::new();
    trace.push(ReductionStep {
        rule: "primary-decomposition".into(),
        before,
        after: after.clone(),
        justification: format!(
            "X_d(A) ~ X_{{e_1}}(A_1) x ... x X_{{e_r}}(A_r) by multiplicativity of the index; {}",
            parts.join(", ")
        ),
    })?;
    Ok((after, trace))
}

/// Decide whether two expressions have the same class of splitting fields,
/// by checking that they acquire points over exactly the same field states.
pub fn equivalent(v: &VarietyExpr, w: &VarietyExpr) -> Result<bool> {
    let mut context = v.primary_context()?;
    for component in w.primary_context()? {
        match context.iter().find(|c| c.prime == component.prime) {
            Some(existing) if existing.power != component.power => {
                return Err(Error::IncompatibleDecomposition(format!(
                    "prime {}: component indices {} and {}",
                    component.prime, existing.power, component.power
                )));
            }
            Some(_) => {}
            None => context.push(component),
        }
    }
    context.sort_by_key(|c| c.prime);
    for state in FieldState::enumerate(&context) {
        if v.has_point_in_state(&state)? != w.has_point_in_state(&state)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Upper bound for the canonical dimension of a decomposed product:
/// the dimension sum over the factors, e_j(q_j - e_j).
///
/// Requires decomposed form: every factor a single reduced dimension over a
/// primary algebra, with pairwise distinct primes.
pub fn upper_bound_cdim(v: &VarietyExpr) -> Result<u64> {
    let mut seen_primes = Vec::new();
    let mut total = 0u64;
    for f in v.factors() {
        let decomposition = f.algebra.primary_decomposition();
        if decomposition.len() != 1 {
            return Err(Error::NotDecomposed(format!(
                "factor algebra of index {} is not primary",
                f.algebra.index_value()
            )));
        }
        if f.flag.dims().len() != 1 {
            return Err(Error::NotDecomposed(format!(
                "factor {} is not a single Severi-Brauer variety",
                f.flag
            )));
        }
        let prime = decomposition[0].prime;
        if seen_primes.contains(&prime) {
            return Err(Error::NotDecomposed(format!(
                "two factors share the prime {prime}"
            )));
        }
        seen_primes.push(prime);
        let q = decomposition[0].power;
        let e = f.flag.dims()[0];
        total += e * (q - e);
    }
    Ok(total)
}
