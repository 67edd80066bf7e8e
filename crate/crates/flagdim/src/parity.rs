//! Index-arithmetic parity certificates for 2-incompressibility.
//!
//! A degree-zero self-correspondence of X_e is controlled summand by
//! summand through the middle Chow decomposition of X_e x X_e. For each
//! summand this module produces a certificate that the multiplicities of a
//! cycle and its transpose agree mod 2: the diagonal summand by symmetry,
//! the middle flag summands and the twisted diagonal by a divisibility
//! contradiction. Multiplicities are never computed as integers; only their
//! parity is certified, and every numeric fact in a certificate re-derives
//! from index arithmetic alone, so a certificate can be re-checked without
//! trusting its producer.

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, AlgebraClass, FactoredIndex};
use crate::error::{Error, Result};
use crate::flags::FlagSpec;
use crate::motive::{middle_chow_decomposition, ChowSummand};

/// A named value inside a certificate step, re-derivable by the verifier.
/// Serialized as either a bare integer or a prime-factorization map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum FactValue {
    Int(u64),
    Factored(FactoredIndex),
}

impl FactValue {
    pub fn value(&self) -> u64 {
        match self {
            FactValue::Int(v) => *v,
            FactValue::Factored(f) => f.value(),
        }
    }
}

impl<'de> serde::Deserialize<'de> for FactValue {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        use serde::de::Error as DeError;
        // integer map keys do not survive serde's untagged buffering, so
        // probe with string keys and validate afterwards
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(u64),
            Map(std::collections::BTreeMap<String, u32>),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Int(v) => Ok(FactValue::Int(v)),
            Raw::Map(m) => {
                let mut factors = std::collections::BTreeMap::new();
                for (key, exponent) in m {
                    let p: u64 = key
                        .parse()
                        .map_err(|_| D::Error::custom(format!("non-integer key {key:?}")))?;
                    factors.insert(p, exponent);
                }
                FactoredIndex::from_prime_powers(factors)
                    .map(FactValue::Factored)
                    .map_err(D::Error::custom)
            }
        }
    }
}

/// One deduction in a parity argument.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityStep {
    pub claim: String,
    pub justification: String,
    pub numeric_facts: Vec<(String, FactValue)>,
}

/// Which summand of the middle Chow decomposition a certificate covers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CertificateSummand {
    Diagonal,
    TwistedDiagonal,
    Flag(ChowSummand),
}

/// Outcome of a parity argument. `inconclusive` is a first-class verdict:
/// the arguments here are one-directional, and their failure to apply is
/// not a compressibility proof.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    CongruentBySymmetry,
    BothEven,
    Inconclusive,
}

impl Verdict {
    pub fn establishes_congruence(self) -> bool {
        matches!(self, Verdict::CongruentBySymmetry | Verdict::BothEven)
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::CongruentBySymmetry => "congruent-by-symmetry",
            Verdict::BothEven => "both-even",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// A chain of index-arithmetic deductions establishing (or declining to
/// establish) the mod-2 multiplicity congruence on one summand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityCertificate {
    pub summand: CertificateSummand,
    pub verdict: Verdict,
    pub steps: Vec<ParityStep>,
}

/// The assembled theorem instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncompressibilityVerdict {
    pub e: u64,
    pub index: FactoredIndex,
    pub incompressible_2: bool,
    pub certificates: Vec<ParityCertificate>,
    /// (cdim_2, cdim, dim) of X_e.
    pub cdim_chain: (u64, u64, u64),
}

fn fact_int(name: &str, v: u64) -> (String, FactValue) {
    (name.into(), FactValue::Int(v))
}

fn fact_factored(name: &str, v: FactoredIndex) -> (String, FactValue) {
    (name.into(), FactValue::Factored(v))
}

/// Some(l) when the flag is the middle-summand shape (e-l, e, e+l).
fn middle_shape(e: u64, flag: &FlagSpec) -> Option<u64> {
    match *flag.dims() {
        [lo, mid, hi] if mid == e && lo < e && hi == 2 * e - lo => Some(e - lo),
        _ => None,
    }
}

/// Certify that every 0-cycle on X_e(A) has even degree, by contradiction:
/// an odd-degree closed point would yield an odd-degree extension K with
/// ind A_K | e, but an odd-degree extension preserves the 2-primary part of
/// the index, so that part would divide e.
///
/// When the 2-primary part does divide e the contradiction evaporates and
/// the verdict is `inconclusive` (no claim that an odd-degree point exists).
pub fn even_degree_ch0(algebra: &AlgebraClass, e: u64) -> Result<ParityCertificate> {
    let index = algebra.index_value();
    if e == 0 || index % e != 0 {
        return Err(Error::NotADivisor {
            divisor: e,
            of: index,
        });
    }
    let two_part = algebra.odd_extension_index_floor();
    let two = two_part.value();
    let mut steps = vec![
        ParityStep {
            claim: format!(
                "if some element of CH_0(X_{e}) had odd degree, X_{e}(A) would have a closed \
                 point of odd degree, hence a point over an odd-degree extension K/F with \
                 ind A_K | {e}"
            ),
            justification: "KMRT98 Prop. 1.17: X_e(A)(K) nonempty iff ind A_K divides e".into(),
            numeric_facts: vec![
                fact_factored("ind_A", algebra.index().clone()),
                fact_int("e", e),
            ],
        },
        ParityStep {
            claim: format!(
                "an odd-degree extension does not reduce the 2-primary part of the index, \
                 so {two} | ind A_K"
            ),
            justification: "S99 Th. 3.15a: a degree prime to ind preserves the matching primary \
                            part"
                .into(),
            numeric_facts: vec![fact_factored("two_primary_part", two_part.clone())],
        },
    ];
    if e % two != 0 {
        steps.push(ParityStep {
            claim: format!(
                "contradiction: {two} | ind A_K | {e} is impossible since {two} does not \
                 divide {e}; every element of CH_0(X_{e}) has even degree"
            ),
            justification: "divisibility contradiction".into(),
            numeric_facts: vec![fact_int("e_mod_two_part", e % two)],
        });
        Ok(ParityCertificate {
            summand: CertificateSummand::TwistedDiagonal,
            verdict: Verdict::BothEven,
            steps,
        })
    } else {
        steps.push(ParityStep {
            claim: format!(
                "the 2-primary part {two} divides {e}, so no contradiction arises; \
                 the argument does not apply"
            ),
            justification: "hypothesis of the contradiction fails".into(),
            numeric_facts: vec![fact_int("e_mod_two_part", 0)],
        });
        Ok(ParityCertificate {
            summand: CertificateSummand::TwistedDiagonal,
            verdict: Verdict::Inconclusive,
            steps,
        })
    }
}

/// Certify the mod-2 vanishing of multiplicities coming from a flag summand
/// X_{d_1,...,d_k}(A) with d = gcd(e, d_1,...,d_k) < e, over the function
/// field of X_e(A). Requires ind A = 2e with e a 2-power, the regime in
/// which ind A_{F(X_e)} = gcd(2e, e) = e is available.
pub fn flag_summand_parity(
    algebra: &AlgebraClass,
    e: u64,
    flag: &FlagSpec,
) -> Result<ParityCertificate> {
    let index = algebra.index_value();
    if index != 2 * e {
        return Err(Error::HypothesisViolated(format!(
            "ind A = {index} is not 2e = {}",
            2 * e
        )));
    }
    if !e.is_power_of_two() {
        return Err(Error::HypothesisViolated(format!("e = {e} is not a power of 2")));
    }
    if flag.n() != index {
        return Err(Error::InvalidFlag(format!(
            "flag in dimension {} over an algebra of index {index}",
            flag.n()
        )));
    }
    let generic_index = algebra.index_over_function_field(e)?;
    let d = flag.dims().iter().fold(e, |acc, &x| gcd(acc, x));
    if d == e {
        return Err(Error::HypothesisViolated(format!(
            "d = gcd(e, d_1,...,d_k) = {d} equals e; the parity argument requires d < e"
        )));
    }

    let mut gcd_facts = vec![fact_int("d", d)];
    // middle summands have the shape (e-l, e, e+l); record the simplified
    // form gcd(e, l) alongside the direct one
    if let Some(l) = middle_shape(e, flag) {
        gcd_facts.push(fact_int("l", l));
        gcd_facts.push(fact_int("gcd_e_l", gcd(e, l)));
    }

    let dims_text = flag
        .dims()
        .iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(",");
    let steps = vec![
        ParityStep {
            claim: format!(
                "over K_0 := F(X_{e}(A)) the algebra has index gcd(2e, e) = {}",
                generic_index.value()
            ),
            justification: "SV92 Th. 2.5: the index over the function field of X_e(A) is \
                            gcd(ind A, e)"
                .into(),
            numeric_facts: vec![
                fact_factored("ind_A", algebra.index().clone()),
                fact_int("e", e),
                fact_factored("ind_over_function_field", generic_index.clone()),
            ],
        },
        ParityStep {
            claim: format!("d := gcd(e, {dims_text}) = {d} and d < e holds"),
            justification: "gcd of the flag signature against e".into(),
            numeric_facts: gcd_facts,
        },
        ParityStep {
            claim: format!(
                "an odd-degree 0-cycle on X_{{{dims_text}}}(A) over K_0 would give an odd \
                 extension K/K_0 with a rational point, forcing ind A_K | {d}"
            ),
            justification: "KMRT98 Th. 1.17 through the flag reduction \
                            X_{d_1,...,d_k}(A) ~ X_d(A)"
                .into(),
            numeric_facts: vec![],
        },
        ParityStep {
            claim: format!(
                "contradiction: an odd-degree extension cannot reduce the 2-power index {}, \
                 and {} does not divide {d}; hence mult(delta) == 0 == mult(delta^t) (mod 2)",
                generic_index.value(),
                generic_index.value()
            ),
            justification: "S99 Th. 3.15a".into(),
            numeric_facts: vec![fact_int("d_mod_generic_index", d % generic_index.value())],
        },
    ];
    // the parity argument lives in CH_0 of the flag variety over F(X_e);
    // assemblers working down the middle decomposition re-tag the summand
    Ok(ParityCertificate {
        summand: CertificateSummand::Flag(ChowSummand {
            flag_type: flag.clone(),
            homological_degree: 0,
            split_rank: 1u32.into(),
        }),
        verdict: Verdict::BothEven,
        steps,
    })
}

/// Assemble the full 2-incompressibility verdict for X_e(A) with
/// ind A = 2e, e = 2^a, a >= 1: one certificate per summand of the middle
/// Chow decomposition of X_e x X_e.
pub fn certify_incompressible(algebra: &AlgebraClass, e: u64) -> Result<IncompressibilityVerdict> {
    let index = algebra.index_value();
    if index != 2 * e {
        return Err(Error::HypothesisViolated(format!(
            "outside theorem hypotheses: ind A = {index} but 2e = {}",
            2 * e
        )));
    }
    if e < 2 || !e.is_power_of_two() {
        return Err(Error::HypothesisViolated(format!(
            "outside theorem hypotheses: e = {e} must be 2^a with a >= 1"
        )));
    }
    let summands = middle_chow_decomposition(e as usize)?;
    let dim = e * e;
    let mut certificates = Vec::with_capacity(summands.len());

    // first summand: the diagonal embedding
    certificates.push(ParityCertificate {
        summand: CertificateSummand::Diagonal,
        verdict: Verdict::CongruentBySymmetry,
        steps: vec![ParityStep {
            claim: format!(
                "the summand CH_{{{dim}}}(X_{e}) embeds into CH_{{{dim}}}(X_{e} x X_{e}) via \
                 the diagonal morphism; a diagonal class equals its own transpose, so the \
                 multiplicities agree"
            ),
            justification: "symmetry of the diagonal embedding".into(),
            numeric_facts: vec![fact_int("e", e)],
        }],
    });

    // middle summands: one flag parity certificate per 0 < l < e
    for summand in summands.iter().take(summands.len() - 1).skip(1) {
        let mut certificate = flag_summand_parity(algebra, e, &summand.flag_type)?;
        certificate.summand = CertificateSummand::Flag(summand.clone());
        certificates.push(certificate);
    }

    // last summand: CH_0(X_e) through the even-degree proposition plus the
    // transfer to multiplicities
    let mut last = even_degree_ch0(algebra, e)?;
    if last.verdict != Verdict::BothEven {
        return Err(Error::Internal(
            "even-degree certificate inconclusive inside the theorem regime".into(),
        ));
    }
    last.steps.push(ParityStep {
        claim: format!(
            "for gamma in CH_0(X_{e}) with image delta, deg(gamma) is even and CH_0 of the \
             split form is generated by a degree-1 class, so the image of gamma over a \
             splitting field is divisible by 2; multiplicity is stable under extension, hence \
             mult(delta) and mult(delta^t) are both even"
        ),
        justification: "divisibility-by-2 transfer through a splitting field".into(),
        numeric_facts: vec![],
    });
    certificates.push(last);

    let incompressible_2 = certificates.iter().all(|c| c.verdict.establishes_congruence());
    Ok(IncompressibilityVerdict {
        e,
        index: algebra.index().clone(),
        incompressible_2,
        certificates,
        cdim_chain: (dim, dim, dim),
    })
}

/// Independent verifier walk: re-derive every named numeric fact in every
/// certificate from index arithmetic and re-check the divisibility facts
/// that the verdicts rest on.
pub fn verify_certificates(verdict: &IncompressibilityVerdict) -> Result<()> {
    let algebra = AlgebraClass::new(verdict.index.clone());
    let e = verdict.e;
    let expected_summands = e as usize + 1;
    if verdict.certificates.len() != expected_summands {
        return Err(Error::CertificateCheck(format!(
            "{} certificates for e = {e}; expected {expected_summands}",
            verdict.certificates.len()
        )));
    }
    for certificate in &verdict.certificates {
        let flag = match &certificate.summand {
            CertificateSummand::Flag(s) => {
                let rank = crate::motive::poincare_polynomial(&s.flag_type)?
                    .coeff(s.homological_degree as usize);
                if rank != s.split_rank {
                    return Err(Error::CertificateCheck(format!(
                        "split rank of {} in degree {}: recorded {}, recomputed {rank}",
                        s.flag_type, s.homological_degree, s.split_rank
                    )));
                }
                Some(&s.flag_type)
            }
            _ => None,
        };
        for step in &certificate.steps {
            for (name, value) in &step.numeric_facts {
                recheck_fact(&algebra, e, flag, name, value)?;
            }
        }
        match certificate.verdict {
            Verdict::BothEven => {
                let ok = match &certificate.summand {
                    CertificateSummand::TwistedDiagonal => {
                        e % algebra.odd_extension_index_floor().value() != 0
                    }
                    CertificateSummand::Flag(s) => {
                        let d = s.flag_type.dims().iter().fold(e, |acc, &x| gcd(acc, x));
                        d < algebra.index_over_function_field(e)?.value()
                    }
                    CertificateSummand::Diagonal => false,
                };
                if !ok {
                    return Err(Error::CertificateCheck(format!(
                        "both-even verdict without a supporting divisibility contradiction \
                         on {:?}",
                        certificate.summand
                    )));
                }
            }
            Verdict::CongruentBySymmetry => {
                if !matches!(certificate.summand, CertificateSummand::Diagonal) {
                    return Err(Error::CertificateCheck(
                        "symmetry verdict outside the diagonal summand".into(),
                    ));
                }
            }
            Verdict::Inconclusive => {
                return Err(Error::CertificateCheck(
                    "inconclusive certificate inside an incompressibility verdict".into(),
                ));
            }
        }
    }
    if verdict.incompressible_2
        != verdict
            .certificates
            .iter()
            .all(|c| c.verdict.establishes_congruence())
    {
        return Err(Error::CertificateCheck(
            "incompressibility flag does not match the certificate verdicts".into(),
        ));
    }
    let dim = e * e;
    if verdict.cdim_chain != (dim, dim, dim) {
        return Err(Error::CertificateCheck(format!(
            "cdim chain {:?} does not equal ({dim}, {dim}, {dim})",
            verdict.cdim_chain
        )));
    }
    Ok(())
}

fn recheck_fact(
    algebra: &AlgebraClass,
    e: u64,
    flag: Option<&FlagSpec>,
    name: &str,
    recorded: &FactValue,
) -> Result<()> {
    let expected: Option<FactValue> = match name {
        "ind_A" => Some(FactValue::Factored(algebra.index().clone())),
        "e" => Some(FactValue::Int(e)),
        "two_primary_part" => Some(FactValue::Factored(algebra.odd_extension_index_floor())),
        "e_mod_two_part" => Some(FactValue::Int(
            e % algebra.odd_extension_index_floor().value(),
        )),
        "ind_over_function_field" => Some(FactValue::Factored(
            algebra.index_over_function_field(e)?,
        )),
        "d" => flag.map(|f| FactValue::Int(f.dims().iter().fold(e, |acc, &x| gcd(acc, x)))),
        "l" => flag.and_then(|f| middle_shape(e, f)).map(FactValue::Int),
        "gcd_e_l" => flag
            .and_then(|f| middle_shape(e, f))
            .map(|l| FactValue::Int(gcd(e, l))),
        "d_mod_generic_index" => match flag {
            Some(f) => {
                let d = f.dims().iter().fold(e, |acc, &x| gcd(acc, x));
                Some(FactValue::Int(d % algebra.index_over_function_field(e)?.value()))
            }
            None => None,
        },
        _ => None,
    };
    match expected {
        Some(expected) if &expected == recorded => Ok(()),
        Some(expected) => Err(Error::CertificateCheck(format!(
            "fact {name}: recorded {recorded:?}, recomputed {expected:?}"
        ))),
        None => Err(Error::CertificateCheck(format!(
            "fact {name} has no recomputation rule in this context"
        ))),
    }
}
