//! Rule database for canonical p-dimension of flag varieties.
//!
//! Evaluation is a fixed pipeline. The flag is collapsed to a single
//! Severi-Brauer variety, that variety is split along the primary
//! decomposition, split factors are dropped, and for a prime p everything
//! away from p is removed by a p-coprime extension. What remains is matched
//! against the known exact values, in a fixed priority order:
//!
//! * R1 - nothing remains: the variety is split, cdim = 0;
//! * R2 - e = 1: the Severi-Brauer case, cdim_p = q - 1;
//! * R3 - p = 2, q = 2e, e a 2-power: X_e is 2-incompressible, cdim_2 = e^2;
//! * R4 - otherwise only the dimension upper bound e(q - e) is known;
//! * R5 - for p = 0, exact when the best prime lower bound meets the
//!   product upper bound;
//! * R6 - for p = 0, ind A = 6, d = 1 in characteristic 0, cdim = 3.
//!
//! No lower bound is ever invented: where no rule applies the interval
//! floor is 0.

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, AlgebraClass};
use crate::error::{Error, Result};
use crate::flags::{
    decompose_primary_variety, reduce_flag, upper_bound_cdim, FlagSpec, ReductionStep,
    ReductionTrace, VarietyExpr,
};

/// A canonical p-dimension question: which variety, which p, and whether
/// the base field is known to have characteristic zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CdimQuery {
    pub algebra: AlgebraClass,
    pub flag: FlagSpec,
    /// Zero asks for canonical dimension itself.
    pub p: u64,
    pub char_zero: bool,
}

/// A rule invocation, recorded in the order applied.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleApplication {
    pub id: String,
    pub citation: String,
}

/// Exact value or interval, with provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CdimResult {
    pub lower: u64,
    pub upper: u64,
    pub exact: bool,
    pub rules_applied: Vec<RuleApplication>,
    pub trace: ReductionTrace,
    pub notes: Vec<String>,
}

impl CdimResult {
    pub fn display_value(&self) -> String {
        if self.exact {
            format!("{}", self.lower)
        } else {
            format!("[{}, {}]", self.lower, self.upper)
        }
    }
}

struct Evaluation {
    rules: Vec<RuleApplication>,
    notes: Vec<String>,
    trace: ReductionTrace,
}

impl Evaluation {
    fn rule(&mut self, id: &str, citation: &str) {
        self.rules.push(RuleApplication {
            id: id.into(),
            citation: citation.into(),
        });
    }
}

/// A surviving primary factor: X_e over a component of index q = p^k.
#[derive(Debug, Clone, Copy)]
struct Survivor {
    prime: u64,
    q: u64,
    e: u64,
}

fn power_of_two_exponent(e: u64) -> Option<u32> {
    (e >= 2 && e.is_power_of_two()).then(|| e.trailing_zeros())
}

/// Exact cdim_p of a single surviving p-primary factor, when a rule gives
/// one. Priority: R2 before R3.
fn exact_primary_cdim(s: &Survivor) -> Option<(u64, &'static str, &'static str)> {
    if s.e == 1 {
        return Some((
            s.q - 1,
            "R2",
            "cdim_p(X_1(A)) = q - 1 for ind A = q a power of p (BR05 Th. 11.4; K00 Th. 2.1)",
        ));
    }
    if s.q == 2 * s.e && power_of_two_exponent(s.e).is_some() {
        return Some((
            s.e * s.e,
            "R3",
            "Theorem: X_e 2-incompressible for ind A = 2e a power of 2, so cdim_2 = e^2",
        ));
    }
    None
}

/// Evaluate a query against the rule database.
pub fn cdim(query: &CdimQuery) -> Result<CdimResult> {
    if query.p != 0 && !is_prime(query.p) {
        return Err(Error::InvalidPrimeParameter(query.p));
    }
    let index = query.algebra.index_value();
    if query.flag.n() != index {
        return Err(Error::InvalidFlag(format!(
            "flag in dimension {} over an algebra of index {index}",
            query.flag.n()
        )));
    }

    let mut eval = Evaluation {
        rules: Vec::new(),
        notes: Vec::new(),
        trace: ReductionTrace::new(),
    };

    // R0: collapse the flag, split along the primary decomposition, drop
    // split factors.
    let (reduced, trace) = reduce_flag(&query.algebra, &query.flag)?;
    eval.trace.extend(trace)?;
    eval.rule(
        "R0-reduce",
        "X_{d_1,...,d_k}(A) ~ X_d(A), d = gcd(ind A, d_1,...,d_k) (KMRT98 Th. 1.17)",
    );
    let d = reduced.factors()[0].flag.dims()[0];

    let mut survivors: Vec<Survivor> = Vec::new();
    if d < index {
        let (decomposed, trace) = decompose_primary_variety(&query.algebra, d)?;
        eval.trace.extend(trace)?;
        eval.rule(
            "R0-decompose",
            "X_d(A) ~ X_{e_1}(A_1) x ... x X_{e_r}(A_r), e_j = gcd(d, q_j)",
        );
        let all: Vec<Survivor> = query
            .algebra
            .primary_decomposition()
            .iter()
            .zip(decomposed.factors())
            .map(|(component, factor)| Survivor {
                prime: component.prime,
                q: component.power,
                e: factor.flag.dims()[0],
            })
            .collect();
        let kept: Vec<Survivor> = all.iter().copied().filter(|s| s.e < s.q).collect();
        if kept.len() < all.len() {
            let after = survivors_expr(&kept)?;
            eval.trace.push(ReductionStep {
                rule: "drop-split-factors".into(),
                before: decomposed,
                after,
                justification: "factors with e_j = q_j are split and contribute 0".into(),
            })?;
        }
        survivors = kept;
    }
    // d = index means every reduced dimension is a multiple of the index:
    // the flag always has points and nothing survives.

    if query.p != 0 {
        let kept: Vec<Survivor> = survivors
            .iter()
            .copied()
            .filter(|s| s.prime == query.p)
            .collect();
        if kept.len() < survivors.len() {
            let before = survivors_expr(&survivors)?;
            let after = survivors_expr(&kept)?;
            eval.trace.push(ReductionStep {
                rule: "p-coprime-splitting".into(),
                before,
                after,
                justification: format!(
                    "p-coprime splitting: a finite extension of degree prime to {p} splits every \
                     component away from {p} without changing cdim_{p}",
                    p = query.p
                ),
            })?;
            eval.rule(
                "R0-split",
                "p-coprime splitting removes components at other primes \
                 (KM06 Ex. 5.10; Merkurjev, Prop. 1.5(2))",
            );
        }
        evaluate_at_prime(&kept, eval)
    } else {
        evaluate_at_zero(query, d, &survivors, eval)
    }
}

fn survivors_expr(survivors: &[Survivor]) -> Result<VarietyExpr> {
    let factors = survivors
        .iter()
        .map(|s| {
            Ok(crate::flags::VarietyFactor {
                algebra: AlgebraClass::with_index(s.q)?,
                flag: FlagSpec::grassmannian(s.q, s.e)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    VarietyExpr::new(factors)
}

fn evaluate_at_prime(kept: &[Survivor], mut eval: Evaluation) -> Result<CdimResult> {
    debug_assert!(kept.len() <= 1);
    let Some(survivor) = kept.first() else {
        eval.rule("R1", "split: cdim = 0");
        return Ok(CdimResult {
            lower: 0,
            upper: 0,
            exact: true,
            rules_applied: eval.rules,
            trace: eval.trace,
            notes: eval.notes,
        });
    };
    if let Some((value, id, citation)) = exact_primary_cdim(survivor) {
        eval.rule(id, citation);
        return Ok(CdimResult {
            lower: value,
            upper: value,
            exact: true,
            rules_applied: eval.rules,
            trace: eval.trace,
            notes: eval.notes,
        });
    }
    let upper = survivor.e * (survivor.q - survivor.e);
    eval.rule(
        "R4",
        "only the dimension bound is known: cdim_p <= dim X_e(A) = e(q - e)",
    );
    Ok(CdimResult {
        lower: 0,
        upper,
        exact: false,
        rules_applied: eval.rules,
        trace: eval.trace,
        notes: eval.notes,
    })
}

fn evaluate_at_zero(
    query: &CdimQuery,
    d: u64,
    survivors: &[Survivor],
    mut eval: Evaluation,
) -> Result<CdimResult> {
    if survivors.is_empty() {
        eval.rule("R1", "split: cdim = 0");
        return Ok(CdimResult {
            lower: 0,
            upper: 0,
            exact: true,
            rules_applied: eval.rules,
            trace: eval.trace,
            notes: eval.notes,
        });
    }
    let product = survivors_expr(survivors)?;
    let upper = upper_bound_cdim(&product)?;
    let mut lower = 0u64;
    for s in survivors {
        if let Some((value, id, citation)) = exact_primary_cdim(s) {
            eval.rule(
                id,
                &format!("{citation}; cdim >= cdim_{{{}}} = {value}", s.prime),
            );
            lower = lower.max(value);
        }
    }
    let index = query.algebra.index_value();
    if lower == upper {
        eval.rule("R5", "the prime lower bound meets the product upper bound");
        return Ok(CdimResult {
            lower,
            upper,
            exact: true,
            rules_applied: eval.rules,
            trace: eval.trace,
            notes: eval.notes,
        });
    }
    if index == 6 && d == 1 {
        if query.char_zero {
            eval.rule(
                "R6",
                "cdim(X_1(A)) = 3 for ind A = 6 over a field of characteristic 0 (CKM07 Th. 1.3)",
            );
            return Ok(CdimResult {
                lower: upper,
                upper,
                exact: true,
                rules_applied: eval.rules,
                trace: eval.trace,
                notes: eval.notes,
            });
        }
        eval.notes.push(
            "R6 skipped: the ind A = 6 equality (CKM07 Th. 1.3) requires characteristic 0"
                .into(),
        );
    }
    if d == 1 {
        eval.notes.push(
            "equality of the upper bound for d = 1, p = 0 is conjectured for every A (CKM07) \
             but is not a rule here"
                .into(),
        );
    }
    Ok(CdimResult {
        lower,
        upper,
        exact: false,
        rules_applied: eval.rules,
        trace: eval.trace,
        notes: eval.notes,
    })
}

/// Human-readable derivation: the reduction chain, each rule with its
/// citation, the outcome, and any notes.
pub fn explain(result: &CdimResult) -> String {
    let mut out = String::new();
    if !result.trace.steps().is_empty() {
        out.push_str("reduction:\n");
        for line in result.trace.lines() {
            out.push_str("  ");
            out.push_str(&line);
            out.push('\n');
        }
    }
    out.push_str("rules:\n");
    for rule in &result.rules_applied {
        out.push_str(&format!("  {}: {}\n", rule.id, rule.citation));
    }
    out.push_str(&format!(
        "result: cdim = {}{}\n",
        result.display_value(),
        if result.exact { " (exact)" } else { " (interval)" },
    ));
    for note in &result.notes {
        out.push_str(&format!("note: {note}\n"));
    }
    out
}
