//! Type A_{n-1} root-system combinatorics.
//!
//! The Weyl group is S_n acting on basis labels 1..n; the simple root
//! alpha_k is eps_k - eps_{k+1}, and its reflection is the adjacent
//! transposition (k, k+1). A maximal parabolic subset Pi \ {alpha_m} cuts
//! out the subgroup S_m x S_{n-m}, and its double cosets in S_n are indexed
//! by an overlap parameter l: the minimal-length representative of coset l
//! exchanges the l-element blocks on either side of the cut and has length
//! exactly l^2.
//!
//! Two backends enumerate the cosets: the closed-form block-swap list (any
//! n) and an exhaustive orbit scan of S_n (small n), kept as an independent
//! check on the count and the representatives.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::flags::FlagSpec;

/// A permutation of 1..n in one-line notation: `images[i]` is the image of
/// i+1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &v in &images {
            if v == 0 || v > n || seen[v] {
                return Err(Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection of 1..{n}"
                )));
            }
            seen[v] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Image of the 1-based point x.
    pub fn apply(&self, x: usize) -> usize {
        self.images[x - 1]
    }

    /// self after other: (self * other)(x) = self(other(x)).
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.n(), other.n());
        Permutation {
            images: other.images.iter().map(|&x| self.images[x - 1]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v - 1] = i + 1;
        }
        Permutation { images }
    }

    pub fn is_involution(&self) -> bool {
        self.compose(self) == Permutation::identity(self.n())
    }

    /// Coxeter length: the number of inversions.
    pub fn length(&self) -> usize {
        let mut count = 0;
        for i in 0..self.images.len() {
            for j in i + 1..self.images.len() {
                if self.images[i] > self.images[j] {
                    count += 1;
                }
            }
        }
        count
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.images.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A set of simple roots of A_{n-1}, identified by their indices in
/// {1, ..., n-1}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSubset {
    n: usize,
    members: BTreeSet<usize>,
}

impl RootSubset {
    pub fn new(n: usize, members: BTreeSet<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::UnsupportedSubset("rank parameter must be positive".into()));
        }
        if let Some(&k) = members.iter().find(|&&k| k == 0 || k >= n) {
            return Err(Error::UnsupportedSubset(format!(
                "alpha_{k} does not exist in rank {}",
                n - 1
            )));
        }
        Ok(RootSubset { n, members })
    }

    /// The full set of simple roots Pi.
    pub fn full(n: usize) -> Result<Self> {
        RootSubset::new(n, (1..n).collect())
    }

    /// Pi \ {alpha_m}: the parabolic type of the Grassmannian X_m.
    pub fn maximal_parabolic(n: usize, m: usize) -> Result<Self> {
        if m == 0 || m >= n {
            return Err(Error::UnsupportedSubset(format!(
                "alpha_{m} does not exist in rank {}",
                n.saturating_sub(1)
            )));
        }
        RootSubset::new(n, (1..n).filter(|&k| k != m).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    pub fn contains(&self, k: usize) -> bool {
        self.members.contains(&k)
    }

    /// Indices removed from Pi, sorted ascending. Under the parabolic/flag
    /// correspondence these are exactly the flag signature.
    pub fn removed(&self) -> Vec<usize> {
        (1..self.n).filter(|k| !self.members.contains(k)).collect()
    }

    /// Flag variety of the parabolic type Pi \ T: signature T.
    pub fn flag_type(&self) -> Result<FlagSpec> {
        let removed = self.removed();
        if removed.is_empty() {
            // type Pi is the degenerate point variety
            return FlagSpec::degenerate_point(self.n as u64);
        }
        FlagSpec::new(self.n as u64, removed.iter().map(|&k| k as u64).collect())
    }

    /// Some(m) when this subset is Pi \ {alpha_m}.
    pub fn as_maximal_parabolic(&self) -> Option<usize> {
        let removed = self.removed();
        (removed.len() == 1).then(|| removed[0])
    }
}

impl fmt::Display for RootSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let removed: Vec<String> = self
            .removed()
            .iter()
            .map(|k| format!("alpha_{k}"))
            .collect();
        if removed.is_empty() {
            write!(f, "Pi")
        } else {
            write!(f, "Pi\\{{{}}}", removed.join(","))
        }
    }
}

/// The reflection of alpha_k: the adjacent transposition (k, k+1).
pub fn simple_reflection(n: usize, k: usize) -> Result<Permutation> {
    if k == 0 || k >= n {
        return Err(Error::RootIndexOutOfRange { k, n });
    }
    let mut images: Vec<usize> = (1..=n).collect();
    images.swap(k - 1, k);
    Ok(Permutation { images })
}

/// Minimal double-coset representative number i (0-based) for the cut at e
/// in S_2e: exchanges the tuple (e-i, ..., e) with (e+1, ..., e+1+i) and
/// fixes everything else. Equals the product of the reflection word given
/// by [`representative_word`].
pub fn coset_representative(e: usize, i: usize) -> Result<Permutation> {
    if e == 0 || i >= e {
        return Err(Error::RootIndexOutOfRange { k: i, n: e });
    }
    Ok(block_swap(2 * e, e, i + 1))
}

/// The permutation of 1..n exchanging the l elements left of the cut at m
/// with the l elements right of it.
fn block_swap(n: usize, m: usize, l: usize) -> Permutation {
    debug_assert!(l <= m && l <= n - m);
    let mut images: Vec<usize> = (1..=n).collect();
    for t in 0..l {
        images[m - l + t] = m + 1 + t;
        images[m + t] = m - l + 1 + t;
    }
    Permutation { images }
}

/// The reflection word for [`coset_representative`], as simple-root
/// indices: blocks (alpha_{e+j}, alpha_{e+j-1}, ..., alpha_{e-i+j}) for
/// j = 0, ..., i, concatenated.
pub fn representative_word(e: usize, i: usize) -> Result<Vec<usize>> {
    if e == 0 || i >= e {
        return Err(Error::RootIndexOutOfRange { k: i, n: e });
    }
    let mut word = Vec::new();
    for j in 0..=i {
        for k in (e - i + j..=e + j).rev() {
            word.push(k);
        }
    }
    Ok(word)
}

/// Multiply a reflection word into a single permutation.
pub fn word_product(n: usize, word: &[usize]) -> Result<Permutation> {
    let mut out = Permutation::identity(n);
    for &k in word {
        out = out.compose(&simple_reflection(n, k)?);
    }
    Ok(out)
}

/// {alpha in S : w(alpha) is a simple root lying in S}, where
/// w(eps_j - eps_{j+1}) = eps_{w(j)} - eps_{w(j+1)}.
///
/// For the block-swap representatives this reproduces the closed form
/// Pi \ {alpha_{e-l}, alpha_e, alpha_{e+l}}; the closed form is normative
/// and the agreement is enforced by tests.
pub fn associated_subset(w: &Permutation, subset: &RootSubset) -> Result<RootSubset> {
    if w.n() != subset.n() {
        return Err(Error::UnsupportedSubset(format!(
            "permutation of 1..{} against a subset of rank {}",
            w.n(),
            subset.n() - 1
        )));
    }
    let members = subset
        .members()
        .iter()
        .copied()
        .filter(|&j| w.apply(j + 1) == w.apply(j) + 1 && subset.contains(w.apply(j)))
        .collect();
    RootSubset::new(subset.n(), members)
}

/// One double-coset summand: the overlap parameter l, the minimal
/// representative, its length, the associated subset and its flag type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetSummand {
    pub index_l: usize,
    pub representative: Permutation,
    pub length: usize,
    pub subset: RootSubset,
    pub flag_type: FlagSpec,
}

/// Enumerate the double cosets W_P \ W / W_P for the maximal parabolic
/// subset S = Pi \ {alpha_m}, ordered by l ascending.
///
/// Cosets of S_m x S_{n-m} in S_n correspond to 2x2 contingency matrices
/// [[m-l, l], [l, n-m-l]]; there are min(m, n-m) + 1 of them, and the
/// block swap of size l is the minimal representative of coset l.
pub fn enumerate_double_cosets(n: usize, subset: &RootSubset) -> Result<Vec<CosetSummand>> {
    if subset.n() != n {
        return Err(Error::UnsupportedSubset(format!(
            "subset rank {} does not match n = {n}",
            subset.n()
        )));
    }
    let m = subset.as_maximal_parabolic().ok_or_else(|| {
        Error::UnsupportedSubset(format!("{subset} is not a maximal parabolic type"))
    })?;
    let max_l = m.min(n - m);
    let mut out = Vec::with_capacity(max_l + 1);
    for l in 0..=max_l {
        let representative = block_swap(n, m, l);
        let length = representative.length();
        debug_assert_eq!(length, l * l);
        let assoc = associated_subset(&representative, subset)?;
        let flag_type = assoc.flag_type()?;
        out.push(CosetSummand {
            index_l: l,
            representative,
            length,
            subset: assoc,
            flag_type,
        });
    }
    Ok(out)
}

/// Exhaustive backend: partition all of S_n into double cosets of the
/// parabolic subgroup generated by the reflections in `subset`, by orbit
/// closure under left and right multiplication. Cosets are returned sorted
/// by minimal length, each as (minimal-length representative, size).
///
/// Independent of the contingency-matrix bijection; n is expected to be
/// small (n! elements are materialized).
pub fn brute_force_double_cosets(
    n: usize,
    subset: &RootSubset,
) -> Result<Vec<(Permutation, usize)>> {
    if subset.n() != n {
        return Err(Error::UnsupportedSubset(format!(
            "subset rank {} does not match n = {n}",
            subset.n()
        )));
    }
    let all = all_permutations(n);
    let id_of: HashMap<Vec<usize>, usize> = all
        .iter()
        .enumerate()
        .map(|(i, p)| (p.images.clone(), i))
        .collect();
    let generators: Vec<Permutation> = subset
        .members()
        .iter()
        .map(|&k| simple_reflection(n, k))
        .collect::<Result<_>>()?;

    let mut seen = vec![false; all.len()];
    let mut cosets = Vec::new();
    for start in 0..all.len() {
        if seen[start] {
            continue;
        }
        let mut stack = vec![start];
        seen[start] = true;
        let mut members = Vec::new();
        while let Some(idx) = stack.pop() {
            members.push(idx);
            for g in &generators {
                for next in [g.compose(&all[idx]), all[idx].compose(g)] {
                    let j = id_of[&next.images];
                    if !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        let size = members.len();
        let representative = members
            .into_iter()
            .map(|i| &all[i])
            .min_by_key(|p| (p.length(), p.images.clone()))
            .expect("nonempty coset")
            .clone();
        cosets.push((representative, size));
    }
    cosets.sort_by_key(|(p, _)| (p.length(), p.images.clone()));
    Ok(cosets)
}

fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (1..=n).collect();
    heap_permutations(&mut current, n, &mut out);
    out
}

fn heap_permutations(current: &mut Vec<usize>, k: usize, out: &mut Vec<Permutation>) {
    if k == 1 {
        out.push(Permutation {
            images: current.clone(),
        });
        return;
    }
    for i in 0..k {
        heap_permutations(current, k - 1, out);
        if k % 2 == 0 {
            current.swap(i, k - 1);
        } else {
            current.swap(0, k - 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_reflection_examples() {
        assert_eq!(simple_reflection(4, 2).unwrap().images(), &[1, 3, 2, 4]);
        assert_eq!(simple_reflection(2, 1).unwrap().images(), &[2, 1]);
        assert!(simple_reflection(4, 0).is_err());
        assert!(simple_reflection(4, 4).is_err());
    }

    #[test]
    fn braid_relation_in_s3() {
        let s1 = simple_reflection(3, 1).unwrap();
        let s2 = simple_reflection(3, 2).unwrap();
        let lhs = s1.compose(&s2).compose(&s1);
        let rhs = s2.compose(&s1).compose(&s2);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn representative_examples() {
        assert_eq!(coset_representative(2, 0).unwrap().images(), &[1, 3, 2, 4]);
        assert_eq!(coset_representative(2, 1).unwrap().images(), &[3, 4, 1, 2]);
        // e=4, i=1: blocks (3,4) and (5,6) swapped, the rest fixed
        let w = coset_representative(4, 1).unwrap();
        assert_eq!(w.images(), &[1, 2, 5, 6, 3, 4, 7, 8]);
        assert!(coset_representative(2, 2).is_err());
    }

    #[test]
    fn representatives_match_their_reflection_words() {
        for e in 1..=8 {
            for i in 0..e {
                let from_word = word_product(2 * e, &representative_word(e, i).unwrap()).unwrap();
                let direct = coset_representative(e, i).unwrap();
                assert_eq!(from_word, direct, "e={e} i={i}");
            }
        }
    }

    #[test]
    fn representatives_are_involutions_with_square_lengths() {
        for e in 1..=8 {
            for i in 0..e {
                let w = coset_representative(e, i).unwrap();
                assert!(w.is_involution());
                assert_eq!(w.length(), (i + 1) * (i + 1));
            }
        }
    }

    #[test]
    fn length_examples() {
        assert_eq!(Permutation::identity(5).length(), 0);
        assert_eq!(coset_representative(2, 1).unwrap().length(), 4);
    }

    #[test]
    fn associated_subset_examples() {
        // e=2, i=0: everything is removed, the full flag (1,2,3)
        let s = RootSubset::maximal_parabolic(4, 2).unwrap();
        let w = coset_representative(2, 0).unwrap();
        let assoc = associated_subset(&w, &s).unwrap();
        assert!(assoc.members().is_empty());
        assert_eq!(assoc.flag_type().unwrap().dims(), &[1, 2, 3]);

        // e=2, i=1: back to Pi \ {alpha_2}, the flag (2)
        let w = coset_representative(2, 1).unwrap();
        let assoc = associated_subset(&w, &s).unwrap();
        assert_eq!(assoc, s);
        assert_eq!(assoc.flag_type().unwrap().dims(), &[2]);

        // e=4, i=1: Pi \ {alpha_2, alpha_4, alpha_6}, the flag (2,4,6)
        let s8 = RootSubset::maximal_parabolic(8, 4).unwrap();
        let w = coset_representative(4, 1).unwrap();
        let assoc = associated_subset(&w, &s8).unwrap();
        assert_eq!(assoc.removed(), vec![2, 4, 6]);
        assert_eq!(assoc.flag_type().unwrap().dims(), &[2, 4, 6]);
    }

    #[test]
    fn associated_subset_closed_form_up_to_e8() {
        for e in 1..=8usize {
            let s = RootSubset::maximal_parabolic(2 * e, e).unwrap();
            assert_eq!(associated_subset(&Permutation::identity(2 * e), &s).unwrap(), s);
            for i in 0..e {
                let l = i + 1;
                let w = coset_representative(e, i).unwrap();
                let assoc = associated_subset(&w, &s).unwrap();
                let expected: Vec<usize> = if l == e {
                    vec![e]
                } else {
                    vec![e - l, e, e + l]
                };
                assert_eq!(assoc.removed(), expected, "e={e} l={l}");
            }
        }
    }

    #[test]
    fn enumeration_counts_and_order() {
        for e in [1usize, 2, 4] {
            let s = RootSubset::maximal_parabolic(2 * e, e).unwrap();
            let summands = enumerate_double_cosets(2 * e, &s).unwrap();
            assert_eq!(summands.len(), e + 1);
            for (l, summand) in summands.iter().enumerate() {
                assert_eq!(summand.index_l, l);
                assert_eq!(summand.length, l * l);
            }
            assert_eq!(summands[0].flag_type.dims(), &[e as u64]);
            assert_eq!(summands[e].flag_type.dims(), &[e as u64]);
        }
        let bad = RootSubset::full(4).unwrap();
        assert!(enumerate_double_cosets(4, &bad).is_err());
    }

    #[test]
    fn brute_force_agrees_with_bijection() {
        for n in 2..=6usize {
            for m in 1..n {
                let s = RootSubset::maximal_parabolic(n, m).unwrap();
                let brute = brute_force_double_cosets(n, &s).unwrap();
                let listed = enumerate_double_cosets(n, &s).unwrap();
                assert_eq!(brute.len(), listed.len(), "n={n} m={m}");
                for (summand, (rep, _)) in listed.iter().zip(&brute) {
                    assert_eq!(&summand.representative, rep, "n={n} m={m}");
                }
                let total: usize = brute.iter().map(|(_, size)| size).sum();
                assert_eq!(total, (1..=n).product::<usize>());
            }
        }
    }

    #[test]
    fn non_maximal_parabolic_brute_force_still_partitions() {
        // sanity: the orbit scan itself is not limited to maximal types
        let s = RootSubset::new(4, [1].into_iter().collect()).unwrap();
        let cosets = brute_force_double_cosets(4, &s).unwrap();
        let total: usize = cosets.iter().map(|(_, size)| size).sum();
        assert_eq!(total, 24);
        assert_eq!(cosets.len(), 7);
    }
}
