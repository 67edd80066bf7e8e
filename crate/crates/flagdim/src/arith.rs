//! Exact arithmetic of factored indices.
//!
//! A central division algebra is modeled by its index alone, stored as a
//! prime factorization so that divisibility questions are answered without
//! ever leaving the integers. The [`FieldState`] type is a finite stand-in
//! for a field extension: it records, for each primary component of the
//! algebra, the residual index the component keeps over the extension.
//! Every splitting statement handled here depends only on that data.

use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize};
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Largest accepted input, 2^63. The indices that matter here are tiny
/// prime powers; anything bigger is a caller bug.
const MAX_VALUE: u64 = 1 << 63;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// A positive integer stored as its prime factorization.
///
/// The empty map is 1. Keys are primes, exponents are at least 1, and
/// `value()` reconstructs the integer exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct FactoredIndex {
    factors: BTreeMap<u64, u32>,
}

impl FactoredIndex {
    pub fn one() -> Self {
        FactoredIndex {
            factors: BTreeMap::new(),
        }
    }

    /// Build from an explicit factorization, validating the invariants.
    pub fn from_prime_powers(factors: BTreeMap<u64, u32>) -> Result<Self> {
        for (p, e) in &factors {
            if !is_prime(*p) {
                return Err(Error::NotPrime(*p));
            }
            if *e == 0 {
                return Err(Error::ZeroValue);
            }
        }
        Ok(FactoredIndex { factors })
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn value(&self) -> u64 {
        self.factors
            .iter()
            .map(|(p, e)| p.pow(*e))
            .product::<u64>()
    }

    pub fn factors(&self) -> &BTreeMap<u64, u32> {
        &self.factors
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors.get(&p).copied().unwrap_or(0)
    }

    /// The p-primary part, i.e. p^(v_p of the value).
    pub fn primary_part(&self, p: u64) -> FactoredIndex {
        let mut factors = BTreeMap::new();
        if let Some(&e) = self.factors.get(&p) {
            factors.insert(p, e);
        }
        FactoredIndex { factors }
    }

    pub fn gcd(&self, other: &FactoredIndex) -> FactoredIndex {
        let factors = self
            .factors
            .iter()
            .filter_map(|(p, e)| {
                let f = other.exponent_of(*p);
                (f > 0).then(|| (*p, (*e).min(f)))
            })
            .collect();
        FactoredIndex { factors }
    }

    pub fn divides(&self, other: &FactoredIndex) -> bool {
        self.factors
            .iter()
            .all(|(p, e)| other.exponent_of(*p) >= *e)
    }
}

impl fmt::Display for FactoredIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| {
                if *e == 1 {
                    p.to_string()
                } else {
                    format!("{p}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl<'de> Deserialize<'de> for FactoredIndex {
    fn deserialize<D>(deserializer: D) -> std::result::Result<Self, D::Error>
    where
        D: Deserializer<'de>,
    {
        let factors = BTreeMap::<u64, u32>::deserialize(deserializer)?;
        FactoredIndex::from_prime_powers(factors).map_err(D::Error::custom)
    }
}

/// Exact prime factorization by trial division.
pub fn factor(n: u64) -> Result<FactoredIndex> {
    if n == 0 {
        return Err(Error::ZeroValue);
    }
    if n > MAX_VALUE {
        return Err(Error::ValueTooLarge(n));
    }
    let mut factors = BTreeMap::new();
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.insert(p, e);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        factors.insert(m, 1);
    }
    Ok(FactoredIndex { factors })
}

/// One primary component of a decomposition: q = prime^k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimaryFactor {
    pub prime: u64,
    pub power: u64,
}

/// The Brauer class of a central division algebra, known by its index.
///
/// Degree, exponent and the algebra itself are not represented: every
/// statement implemented in this crate depends only on index divisibility.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraClass {
    index: FactoredIndex,
}

impl AlgebraClass {
    pub fn new(index: FactoredIndex) -> Self {
        AlgebraClass { index }
    }

    pub fn with_index(n: u64) -> Result<Self> {
        Ok(AlgebraClass { index: factor(n)? })
    }

    pub fn index(&self) -> &FactoredIndex {
        &self.index
    }

    pub fn index_value(&self) -> u64 {
        self.index.value()
    }

    /// A = A_1 (x) ... (x) A_r with ind A_j = q_j powers of distinct primes,
    /// ordered by prime ascending.
    pub fn primary_decomposition(&self) -> Vec<PrimaryFactor> {
        self.index
            .factors()
            .iter()
            .map(|(p, e)| PrimaryFactor {
                prime: *p,
                power: p.pow(*e),
            })
            .collect()
    }

    /// The p-primary part of the index; 1 when p does not divide it.
    ///
    /// Passing to a finite p-coprime extension splits every primary
    /// component at the other primes, which is why only this part matters
    /// for canonical p-dimension.
    pub fn p_primary_part(&self, p: u64) -> Result<FactoredIndex> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(self.index.primary_part(p))
    }

    /// The part of the index guaranteed to survive any odd-degree extension:
    /// the 2-primary part. For every odd-degree K/F the 2-primary part of
    /// ind A_K equals this value, so ind A_K is divisible by it.
    pub fn odd_extension_index_floor(&self) -> FactoredIndex {
        self.index.primary_part(2)
    }

    /// Index of A over the function field of X_e(A): gcd(ind A, e).
    ///
    /// Faithful in the regime the certificate engine relies on, ind A = 2e
    /// with e a 2-power; other uses of the gcd formula are an extrapolation.
    pub fn index_over_function_field(&self, e: u64) -> Result<FactoredIndex> {
        let n = self.index_value();
        if e == 0 || n % e != 0 {
            return Err(Error::NotADivisor { divisor: e, of: n });
        }
        Ok(self.index.gcd(&factor(e)?))
    }
}

impl fmt::Display for AlgebraClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A[ind {}]", self.index_value())
    }
}

/// Finite model of a field extension K/F: for each primary component A_j of
/// index q_j, the residual index m_j = ind (A_j)_K, a divisor of q_j.
///
/// All divisor tuples are treated as achievable extension behaviors, which
/// makes equivalence of variety expressions decidable by enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldState {
    residuals: Vec<(PrimaryFactor, u64)>,
}

impl FieldState {
    pub fn new(decomposition: &[PrimaryFactor], residuals: &[u64]) -> Result<Self> {
        if decomposition.len() != residuals.len() {
            return Err(Error::Internal(format!(
                "field state arity mismatch: {} factors, {} residuals",
                decomposition.len(),
                residuals.len()
            )));
        }
        for (factor, &m) in decomposition.iter().zip(residuals) {
            if m == 0 || factor.power % m != 0 {
                return Err(Error::NotADivisor {
                    divisor: m,
                    of: factor.power,
                });
            }
        }
        Ok(FieldState {
            residuals: decomposition.iter().copied().zip(residuals.iter().copied()).collect(),
        })
    }

    /// Every divisor tuple over the decomposition, in lexicographic order.
    pub fn enumerate(decomposition: &[PrimaryFactor]) -> Vec<FieldState> {
        let divisor_lists: Vec<Vec<u64>> = decomposition
            .iter()
            .map(|f| (0..=f.power.ilog(f.prime)).map(|k| f.prime.pow(k)).collect())
            .collect();
        let mut states = vec![Vec::new()];
        for divisors in &divisor_lists {
            states = states
                .into_iter()
                .flat_map(|prefix| {
                    divisors.iter().map(move |m| {
                        let mut next = prefix.clone();
                        next.push(*m);
                        next
                    })
                })
                .collect();
        }
        states
            .into_iter()
            .map(|residuals| FieldState::new(decomposition, &residuals).expect("divisors by construction"))
            .collect()
    }

    pub fn residuals(&self) -> &[(PrimaryFactor, u64)] {
        &self.residuals
    }

    /// ind B_K for an algebra B whose primary components are among this
    /// state's: the product of the residual indices at the primes of B.
    ///
    /// Multiplicativity of the index over the primary decomposition is what
    /// justifies the product.
    pub fn residual_index_of(&self, algebra: &AlgebraClass) -> Result<u64> {
        let mut out = 1u64;
        for (p, e) in algebra.index().factors() {
            let q = p.pow(*e);
            let slot = self
                .residuals
                .iter()
                .find(|(f, _)| f.prime == *p)
                .ok_or_else(|| {
                    Error::IncompatibleDecomposition(format!(
                        "prime {p} of the factor algebra is absent from the field state"
                    ))
                })?;
            if slot.0.power != q {
                return Err(Error::IncompatibleDecomposition(format!(
                    "prime {p}: component index {} vs expected {q}",
                    slot.0.power
                )));
            }
            out *= slot.1;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn factor_small_values() {
        assert_eq!(factor(1).unwrap(), FactoredIndex::one());
        let six = factor(6).unwrap();
        assert_eq!(six.factors().get(&2), Some(&1));
        assert_eq!(six.factors().get(&3), Some(&1));
        assert_eq!(six.factors().len(), 2);
        let twelve = factor(12).unwrap();
        assert_eq!(twelve.exponent_of(2), 2);
        assert_eq!(twelve.exponent_of(3), 1);
        assert!(factor(0).is_err());
        assert!(factor((1 << 63) + 1).is_err());
    }

    #[test]
    fn factor_value_round_trip_to_a_million() {
        for n in 1..=1_000_000u64 {
            assert_eq!(factor(n).unwrap().value(), n, "round trip failed at {n}");
        }
    }

    #[test]
    fn primary_decomposition_examples() {
        let six = AlgebraClass::with_index(6).unwrap();
        assert_eq!(
            six.primary_decomposition(),
            vec![
                PrimaryFactor { prime: 2, power: 2 },
                PrimaryFactor { prime: 3, power: 3 }
            ]
        );
        let eight = AlgebraClass::with_index(8).unwrap();
        assert_eq!(
            eight.primary_decomposition(),
            vec![PrimaryFactor { prime: 2, power: 8 }]
        );
        assert!(AlgebraClass::with_index(1)
            .unwrap()
            .primary_decomposition()
            .is_empty());
    }

    #[test]
    fn p_primary_parts() {
        let twelve = AlgebraClass::with_index(12).unwrap();
        assert_eq!(twelve.p_primary_part(2).unwrap().value(), 4);
        assert_eq!(twelve.p_primary_part(3).unwrap().value(), 3);
        let seven = AlgebraClass::with_index(7).unwrap();
        assert_eq!(seven.p_primary_part(2).unwrap().value(), 1);
        assert!(twelve.p_primary_part(4).is_err());
        assert!(twelve.p_primary_part(1).is_err());
    }

    #[test]
    fn p_parts_multiply_back_to_the_index() {
        for n in 1..=512u64 {
            let a = AlgebraClass::with_index(n).unwrap();
            let product: u64 = a
                .primary_decomposition()
                .iter()
                .map(|f| a.p_primary_part(f.prime).unwrap().value())
                .product();
            assert_eq!(product, n);
        }
    }

    #[test]
    fn odd_extension_floor_examples() {
        for (n, expected) in [(8, 8), (6, 2), (9, 1)] {
            let a = AlgebraClass::with_index(n).unwrap();
            assert_eq!(a.odd_extension_index_floor().value(), expected);
        }
    }

    #[test]
    fn odd_extension_floor_idempotent_and_divides() {
        for n in 1..=512u64 {
            let a = AlgebraClass::with_index(n).unwrap();
            let floor = a.odd_extension_index_floor();
            assert_eq!(n % floor.value(), 0);
            let again = AlgebraClass::new(floor.clone()).odd_extension_index_floor();
            assert_eq!(again, floor);
        }
    }

    #[test]
    fn function_field_index_examples() {
        let four = AlgebraClass::with_index(4).unwrap();
        assert_eq!(four.index_over_function_field(2).unwrap().value(), 2);
        let sixteen = AlgebraClass::with_index(16).unwrap();
        assert_eq!(sixteen.index_over_function_field(8).unwrap().value(), 8);
        let two = AlgebraClass::with_index(2).unwrap();
        assert_eq!(two.index_over_function_field(1).unwrap().value(), 1);
        assert!(four.index_over_function_field(3).is_err());
    }

    #[test]
    fn field_state_enumeration_counts() {
        // 12 = 2^2 * 3: divisors per component (1,2,4) x (1,3)
        let decomp = AlgebraClass::with_index(12).unwrap().primary_decomposition();
        let states = FieldState::enumerate(&decomp);
        assert_eq!(states.len(), 6);
        let a = AlgebraClass::with_index(12).unwrap();
        let values: Vec<u64> = states
            .iter()
            .map(|s| s.residual_index_of(&a).unwrap())
            .collect();
        assert_eq!(values, vec![1, 3, 2, 6, 4, 12]);
    }

    #[test]
    fn serde_rejects_non_prime_keys() {
        let ok: std::result::Result<FactoredIndex, _> = serde_json::from_str(r#"{"2":2,"3":1}"#);
        assert_eq!(ok.unwrap().value(), 12);
        let bad: std::result::Result<FactoredIndex, _> = serde_json::from_str(r#"{"4":1}"#);
        assert!(bad.is_err());
        let zero: std::result::Result<FactoredIndex, _> = serde_json::from_str(r#"{"3":0}"#);
        assert!(zero.is_err());
    }

    proptest! {
        #[test]
        fn field_state_accepts_exactly_divisors(p in prop::sample::select(vec![2u64, 3, 5, 7]),
                                                k in 1u32..5,
                                                m in 1u64..200) {
            let q = p.pow(k);
            let decomp = [PrimaryFactor { prime: p, power: q }];
            let state = FieldState::new(&decomp, &[m]);
            prop_assert_eq!(state.is_ok(), q % m == 0);
        }

        #[test]
        fn gcd_of_factored_matches_integer_gcd(a in 1u64..100_000, b in 1u64..100_000) {
            let fa = factor(a).unwrap();
            let fb = factor(b).unwrap();
            prop_assert_eq!(fa.gcd(&fb).value(), gcd(a, b));
        }
    }
}
