//! Motivic decomposition of X_e x X_e and its numerical shadow.
//!
//! The product of two copies of the split Grassmannian of middle-dimensional
//! ideals decomposes into e+1 summands, one per double coset of the cut-at-e
//! parabolic: the diagonal copy of M(X_e), the twisted diagonal M(X_e)(e^2),
//! and a flag-variety motive M(X_{e-l,e,e+l})(l^2) for each l in between,
//! the Tate shift being the length of the coset representative.
//!
//! None of this is taken on faith: the split Chow ranks of every summand
//! are Gaussian-multinomial coefficients, and [`verify_rank_identity`]
//! checks the decomposition coefficient-wise against the square of the
//! Grassmannian's Poincare polynomial.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};
use crate::flags::FlagSpec;
use crate::weyl::{enumerate_double_cosets, RootSubset};

/// Polynomial with nonnegative integer coefficients, exact at any size.
/// The trailing coefficient is nonzero unless the polynomial is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerPolynomial {
    coeffs: Vec<BigUint>,
}

impl IntegerPolynomial {
    pub fn zero() -> Self {
        IntegerPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntegerPolynomial {
            coeffs: vec![BigUint::one()],
        }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigUint>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntegerPolynomial { coeffs }
    }

    pub fn from_u64_coeffs(coeffs: &[u64]) -> Self {
        IntegerPolynomial::from_coeffs(coeffs.iter().map(|&c| BigUint::from(c)).collect())
    }

    /// 1 + t + ... + t^(k-1), the q-analog of k.
    pub fn q_int(k: usize) -> Self {
        IntegerPolynomial {
            coeffs: vec![BigUint::one(); k.max(1)],
        }
    }

    /// [k]_t! = [1]_t [2]_t ... [k]_t. Prefix factorials are cached: every
    /// flag variety in an ambient of dimension n divides the same [n]_t!.
    pub fn q_factorial(k: usize) -> Self {
        use std::sync::{Mutex, OnceLock};
        static CACHE: OnceLock<Mutex<Vec<IntegerPolynomial>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(vec![IntegerPolynomial::one()]));
        let mut cache = cache.lock().expect("q-factorial cache poisoned");
        while cache.len() <= k {
            let next = cache
                .last()
                .expect("nonempty cache")
                .mul(&IntegerPolynomial::q_int(cache.len()));
            cache.push(next);
        }
        cache[k].clone()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the zero polynomial is reported as 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigUint {
        self.coeffs.get(k).cloned().unwrap_or_else(BigUint::zero)
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn add(&self, other: &IntegerPolynomial) -> IntegerPolynomial {
        let mut coeffs = vec![BigUint::zero(); self.coeffs.len().max(other.coeffs.len())];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        IntegerPolynomial::from_coeffs(coeffs)
    }

    pub fn mul(&self, other: &IntegerPolynomial) -> IntegerPolynomial {
        if self.is_zero() || other.is_zero() {
            return IntegerPolynomial::zero();
        }
        let mut coeffs = vec![BigUint::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntegerPolynomial::from_coeffs(coeffs)
    }

    /// Multiplication by t^s.
    pub fn shifted(&self, s: usize) -> IntegerPolynomial {
        if self.is_zero() {
            return IntegerPolynomial::zero();
        }
        let mut coeffs = vec![BigUint::zero(); s];
        coeffs.extend(self.coeffs.iter().cloned());
        IntegerPolynomial { coeffs }
    }

    /// Exact division; a nonzero remainder is an internal error, since every
    /// division performed here is of a q-factorial multiple.
    pub fn div_exact(&self, divisor: &IntegerPolynomial) -> Result<IntegerPolynomial> {
        if divisor.is_zero() {
            return Err(Error::Internal("division by the zero polynomial".into()));
        }
        if self.is_zero() {
            return Ok(IntegerPolynomial::zero());
        }
        if self.coeffs.len() < divisor.coeffs.len() {
            return Err(Error::Internal("inexact polynomial division".into()));
        }
        let lead = divisor.coeffs.last().expect("nonzero divisor");
        let mut rem = self.coeffs.clone();
        let quot_len = self.coeffs.len() - divisor.coeffs.len() + 1;
        let mut quot = vec![BigUint::zero(); quot_len];
        for k in (0..quot_len).rev() {
            let top = rem[k + divisor.coeffs.len() - 1].clone();
            if top.is_zero() {
                continue;
            }
            if (&top % lead) != BigUint::zero() {
                return Err(Error::Internal("inexact polynomial division".into()));
            }
            let q = &top / lead;
            for (j, d) in divisor.coeffs.iter().enumerate() {
                let sub = d * &q;
                if rem[k + j] < sub {
                    return Err(Error::Internal("inexact polynomial division".into()));
                }
                rem[k + j] -= sub;
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::Internal("inexact polynomial division".into()));
        }
        Ok(IntegerPolynomial::from_coeffs(quot))
    }

    /// Value at t = 1: the total number of cells.
    pub fn total(&self) -> BigUint {
        self.coeffs.iter().sum()
    }

    pub fn is_palindromic(&self) -> bool {
        let n = self.coeffs.len();
        (0..n / 2).all(|i| self.coeffs[i] == self.coeffs[n - 1 - i])
    }
}

impl fmt::Display for IntegerPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(BigUint::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Poincare polynomial of the split partial flag variety: the Gaussian
/// multinomial [n]_t! / ([d_1]_t! [d_2-d_1]_t! ... [n-d_k]_t!), computed by
/// exact division of q-factorials.
pub fn poincare_polynomial(spec: &FlagSpec) -> Result<IntegerPolynomial> {
    let n = spec.n() as usize;
    let mut cuts: Vec<usize> = vec![0];
    cuts.extend(spec.dims().iter().map(|&d| d as usize));
    cuts.push(n);
    let mut out = IntegerPolynomial::q_factorial(n);
    for w in cuts.windows(2) {
        out = out.div_exact(&IntegerPolynomial::q_factorial(w[1] - w[0]))?;
    }
    Ok(out)
}

/// One motivic summand: a flag-variety motive with a Tate shift.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MotiveSummand {
    pub flag_type: FlagSpec,
    pub shift: u64,
}

/// The decomposition of M(X_e x X_e), e+1 summands ordered diagonal first,
/// middle terms by l ascending, twisted diagonal last.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MotiveDecomposition {
    pub e: usize,
    pub summands: Vec<MotiveSummand>,
}

impl fmt::Display for MotiveDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .summands
            .iter()
            .map(|s| {
                if s.shift == 0 {
                    format!("M({})", s.flag_type)
                } else {
                    format!("M({})({})", s.flag_type, s.shift)
                }
            })
            .collect();
        write!(f, "M(X_{{{e}}} x X_{{{e}}}) = {}", parts.join(" + "), e = self.e)
    }
}

/// Decompose M(X_e x X_e) along the double cosets of the cut-at-e
/// parabolic. Each coset contributes the motive of the flag variety of its
/// associated subset, shifted by the length of its representative.
pub fn decompose_square(e: usize) -> Result<MotiveDecomposition> {
    if e == 0 {
        return Err(Error::InvalidFlag("e must be at least 1".into()));
    }
    let subset = RootSubset::maximal_parabolic(2 * e, e)?;
    let summands = enumerate_double_cosets(2 * e, &subset)?
        .into_iter()
        .map(|c| MotiveSummand {
            flag_type: c.flag_type,
            shift: c.length as u64,
        })
        .collect();
    Ok(MotiveDecomposition { e, summands })
}

/// One summand of the middle-dimensional Chow group, with its split rank.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChowSummand {
    pub flag_type: FlagSpec,
    pub homological_degree: u64,
    #[serde(with = "biguint_decimal")]
    pub split_rank: BigUint,
}

/// Decomposition of CH_{e^2}(X_e x X_e): the summand shifted by s
/// contributes its Chow group in homological degree e^2 - s, and the split
/// rank of that group is the matching coefficient of the summand's Poincare
/// polynomial.
pub fn middle_chow_decomposition(e: usize) -> Result<Vec<ChowSummand>> {
    let motive = decompose_square(e)?;
    let middle = (e * e) as u64;
    motive
        .summands
        .into_iter()
        .map(|s| {
            let degree = middle - s.shift;
            let rank = poincare_polynomial(&s.flag_type)?.coeff(degree as usize);
            Ok(ChowSummand {
                flag_type: s.flag_type,
                homological_degree: degree,
                split_rank: rank,
            })
        })
        .collect()
}

/// Per-degree comparison of the two sides of the rank identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankIdentityReport {
    pub e: usize,
    pub lhs: IntegerPolynomial,
    pub rhs: IntegerPolynomial,
}

impl RankIdentityReport {
    pub fn rows(&self) -> Vec<(usize, BigUint, BigUint)> {
        (0..=self.lhs.degree().max(self.rhs.degree()))
            .map(|d| (d, self.lhs.coeff(d), self.rhs.coeff(d)))
            .collect()
    }

    pub fn total(&self) -> BigUint {
        self.lhs.total()
    }
}

/// Check, coefficient by coefficient, that
/// P(Gr(e,2e))^2 = P(Gr(e,2e)) (1 + t^(e^2)) + sum_l t^(l^2) P(X_{e-l,e,e+l})
/// A mismatch is an internal error: the decomposition and the polynomial
/// arithmetic cannot disagree unless one of them is buggy.
pub fn verify_rank_identity(e: usize) -> Result<RankIdentityReport> {
    if e == 0 {
        return Err(Error::InvalidFlag("e must be at least 1".into()));
    }
    let n = 2 * e as u64;
    let gr = poincare_polynomial(&FlagSpec::grassmannian(n, e as u64)?)?;
    let lhs = gr.mul(&gr);
    let mut rhs = gr.add(&gr.shifted(e * e));
    for l in 1..e {
        let flag = FlagSpec::new(n, vec![(e - l) as u64, e as u64, (e + l) as u64])?;
        rhs = rhs.add(&poincare_polynomial(&flag)?.shifted(l * l));
    }
    if lhs != rhs {
        let bad = (0..=lhs.degree().max(rhs.degree()))
            .find(|&d| lhs.coeff(d) != rhs.coeff(d))
            .unwrap_or(0);
        return Err(Error::Internal(format!(
            "rank identity fails at e = {e}, degree {bad}: {} vs {}",
            lhs.coeff(bad),
            rhs.coeff(bad)
        )));
    }
    Ok(RankIdentityReport { e, lhs, rhs })
}

mod biguint_decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};
    use std::str::FromStr;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        BigUint::from_str(&text).map_err(D::Error::custom)
    }
}
