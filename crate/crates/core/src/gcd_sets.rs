//! Finite sets `S` in which, for every `s ∈ S` and every divisor `d | s`,
//! exactly one `t ∈ S` has `gcd(s, t) = d`.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GcdSetError {
    #[error("set elements must be positive")]
    NonPositive,
    #[error("duplicate element {0}")]
    Duplicate(u64),
    #[error("need the same positive number of p and q primes (got {p} and {q})")]
    PrimeCount { p: usize, q: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} is repeated")]
    RepeatedPrime(u64),
    #[error("product overflows u64")]
    Overflow,
}

/// Strictly increasing list of distinct positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSet", into = "RawSet")]
pub struct GcdSet {
    elements: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct RawSet {
    elements: Vec<u64>,
}

impl TryFrom<RawSet> for GcdSet {
    type Error = GcdSetError;
    fn try_from(raw: RawSet) -> Result<Self, Self::Error> {
        GcdSet::new(raw.elements)
    }
}

impl From<GcdSet> for RawSet {
    fn from(set: GcdSet) -> Self {
        RawSet { elements: set.elements }
    }
}

impl GcdSet {
    pub fn new(mut elements: Vec<u64>) -> Result<Self, GcdSetError> {
        if elements.contains(&0) {
            return Err(GcdSetError::NonPositive);
        }
        elements.sort_unstable();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(GcdSetError::Duplicate(w[0]));
        }
        Ok(Self { elements })
    }

    pub fn empty() -> Self {
        Self { elements: Vec::new() }
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// Positive divisors in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Prime factorization as `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

pub fn divisor_count(n: u64) -> u64 {
    factorize(n).iter().map(|&(_, e)| e as u64 + 1).product()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub s: u64,
    pub d: u64,
    /// Number of `t ∈ S` with `gcd(s, t) = d`; the property needs exactly 1.
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub violations: Vec<Violation>,
}

pub fn verify_property(set: &GcdSet) -> Verdict {
    let mut violations = Vec::new();
    for &s in set.elements() {
        let mut counts: BTreeMap<u64, usize> = divisors(s).into_iter().map(|d| (d, 0)).collect();
        for &t in set.elements() {
            // gcd(s, t) always divides s, so every key already exists
            *counts.get_mut(&s.gcd(&t)).expect("gcd divides s") += 1;
        }
        violations.extend(counts.into_iter().filter(|&(_, c)| c != 1).map(|(d, count)| Violation { s, d, count }));
    }
    Verdict { holds: violations.is_empty(), violations }
}

/// All `2^k` products `Π_{i∈I} p_i · Π_{j∉I} q_j` over subsets `I ⊆ [k]`.
pub fn construct(p: &[u64], q: &[u64]) -> Result<GcdSet, GcdSetError> {
    if p.is_empty() || p.len() != q.len() {
        return Err(GcdSetError::PrimeCount { p: p.len(), q: q.len() });
    }
    let mut seen = BTreeSet::new();
    for &x in p.iter().chain(q) {
        if !is_prime(x) {
            return Err(GcdSetError::NotPrime(x));
        }
        if !seen.insert(x) {
            return Err(GcdSetError::RepeatedPrime(x));
        }
    }
    let k = p.len();
    if k >= 64 {
        return Err(GcdSetError::Overflow);
    }
    let mut elements = Vec::with_capacity(1 << k);
    for mask in 0u64..(1 << k) {
        let mut s: u64 = 1;
        for i in 0..k {
            let factor = if mask >> i & 1 == 1 { p[i] } else { q[i] };
            s = s.checked_mul(factor).ok_or(GcdSetError::Overflow)?;
        }
        elements.push(s);
    }
    GcdSet::new(elements)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructuralReport {
    /// Every element has exactly `|S|` positive divisors.
    pub divisor_counts_match: bool,
    pub all_squarefree: bool,
    /// The shared number of prime factors, if all elements agree.
    pub common_prime_count: Option<u32>,
    /// `|S| = 2^k` for that shared `k`.
    pub size_is_power_of_two: bool,
    pub passed: bool,
}

pub fn structural_checks(set: &GcdSet) -> StructuralReport {
    let size = set.len() as u64;
    let factorizations: Vec<_> = set.elements().iter().map(|&s| factorize(s)).collect();
    let divisor_counts_match = set.elements().iter().all(|&s| divisor_count(s) == size);
    let all_squarefree = factorizations.iter().all(|f| f.iter().all(|&(_, e)| e == 1));
    let prime_counts: BTreeSet<u32> = factorizations.iter().map(|f| f.len() as u32).collect();
    let common_prime_count = (prime_counts.len() == 1).then(|| *prime_counts.first().unwrap());
    let size_is_power_of_two = common_prime_count.is_some_and(|k| k < 64 && size == 1 << k);
    StructuralReport {
        divisor_counts_match,
        all_squarefree,
        common_prime_count,
        size_is_power_of_two,
        passed: divisor_counts_match && all_squarefree && size_is_power_of_two,
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SearchMode {
    /// Only consider elements with exactly `size` divisors.
    #[default]
    Pruned,
    /// Every subset of `1..=max_element`; feasible only for tiny bounds.
    Unpruned,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SizeOutcome {
    pub size: usize,
    pub candidates: usize,
    pub subsets_checked: u64,
    /// Lexicographically first valid set of this size, if any.
    pub witness: Option<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SizeSearch {
    pub max_element: u64,
    pub max_size: usize,
    /// The empty set satisfies the property vacuously; it is not searched.
    pub empty_set_valid: bool,
    pub per_size: Vec<SizeOutcome>,
}

impl SizeSearch {
    pub fn achievable(&self) -> BTreeSet<usize> {
        self.per_size.iter().filter(|o| o.witness.is_some()).map(|o| o.size).collect()
    }
}

pub fn search_sizes(max_element: u64, max_size: usize, mode: SearchMode) -> SizeSearch {
    let per_size = (1..=max_size)
        .map(|size| {
            let candidates: Vec<u64> = match mode {
                SearchMode::Pruned => (1..=max_element).filter(|&x| divisor_count(x) == size as u64).collect(),
                SearchMode::Unpruned => (1..=max_element).collect(),
            };
            let mut subsets_checked = 0;
            let mut witness = None;
            let mut idx: Vec<usize> = (0..size).collect();
            if size <= candidates.len() {
                loop {
                    subsets_checked += 1;
                    let set = GcdSet { elements: idx.iter().map(|&k| candidates[k]).collect() };
                    if verify_property(&set).holds {
                        witness = Some(set.elements);
                        break;
                    }
                    if !next_combination(&mut idx, candidates.len()) {
                        break;
                    }
                }
            }
            SizeOutcome { size, candidates: candidates.len(), subsets_checked, witness }
        })
        .collect();
    SizeSearch { max_element, max_size, empty_set_valid: verify_property(&GcdSet::empty()).holds, per_size }
}

/// Advance `idx` to the next increasing index tuple below `n`.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for pos in (0..k).rev() {
        if idx[pos] < n - k + pos {
            idx[pos] += 1;
            for later in pos + 1..k {
                idx[later] = idx[later - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[u64]) -> GcdSet {
        GcdSet::new(xs.to_vec()).unwrap()
    }

    #[test]
    fn verify_examples() {
        assert!(verify_property(&set(&[10, 14, 15, 21])).holds);
        assert!(verify_property(&GcdSet::empty()).holds);
        assert!(verify_property(&set(&[1])).holds);
        let v = verify_property(&set(&[2, 4]));
        assert!(!v.holds);
        assert!(v.violations.contains(&Violation { s: 4, d: 1, count: 0 }));
    }

    #[test]
    fn gcd_table_for_ten() {
        let s = set(&[10, 14, 15, 21]);
        let gcds: Vec<u64> = [21, 14, 15, 10].iter().map(|t| 10u64.gcd(t)).collect();
        assert_eq!(gcds, vec![1, 2, 5, 10]);
        assert!(verify_property(&s).holds);
    }

    #[test]
    fn construct_examples() {
        assert_eq!(construct(&[2], &[3]).unwrap(), set(&[2, 3]));
        assert_eq!(construct(&[2, 5], &[3, 7]).unwrap(), set(&[10, 14, 15, 21]));
        let s = construct(&[2, 5, 11], &[3, 7, 13]).unwrap();
        assert_eq!(s.len(), 8);
        assert!(verify_property(&s).holds);
    }

    #[test]
    fn construct_errors() {
        assert_eq!(construct(&[2, 2], &[3, 5]), Err(GcdSetError::RepeatedPrime(2)));
        assert_eq!(construct(&[4], &[3]), Err(GcdSetError::NotPrime(4)));
        assert_eq!(construct(&[2], &[3, 5]), Err(GcdSetError::PrimeCount { p: 1, q: 2 }));
        assert_eq!(construct(&[], &[]), Err(GcdSetError::PrimeCount { p: 0, q: 0 }));
    }

    #[test]
    fn structural_examples() {
        let r = structural_checks(&set(&[10, 14, 15, 21]));
        assert!(r.passed);
        assert_eq!(r.common_prime_count, Some(2));
        let r = structural_checks(&set(&[1]));
        assert!(r.passed);
        assert_eq!(r.common_prime_count, Some(0));
        assert!(!structural_checks(&set(&[4, 9])).all_squarefree);
    }

    #[test]
    fn arithmetic_helpers() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisor_count(36), 9);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert!(is_prime(97) && !is_prime(1) && !is_prime(91));
    }

    #[test]
    fn set_validation() {
        assert_eq!(GcdSet::new(vec![3, 0]), Err(GcdSetError::NonPositive));
        assert_eq!(GcdSet::new(vec![3, 3]), Err(GcdSetError::Duplicate(3)));
        assert_eq!(set(&[21, 10]).elements(), &[10, 21]);
        let parsed: Result<GcdSet, _> = serde_json::from_str(r#"{"elements":[5,5]}"#);
        assert!(parsed.is_err());
        let parsed: GcdSet = serde_json::from_str(r#"{"elements":[15,10,21,14]}"#).unwrap();
        assert_eq!(serde_json::to_string(&parsed).unwrap(), r#"{"elements":[10,14,15,21]}"#);
    }

    #[test]
    fn small_search() {
        let out = search_sizes(50, 4, SearchMode::Pruned);
        assert_eq!(out.achievable(), BTreeSet::from([1, 2, 4]));
        assert!(out.empty_set_valid);
        assert_eq!(out.per_size[0].witness, Some(vec![1]));
        assert_eq!(out.per_size[1].witness, Some(vec![2, 3]));
        // 6 = 2·3, 10 = 2·5, 21 = 3·7, 35 = 5·7 comes before 10, 14, 15, 21
        assert_eq!(out.per_size[3].witness, Some(vec![6, 10, 21, 35]));
    }

    #[test]
    fn size_three_needs_prime_squares() {
        let out = search_sizes(100, 3, SearchMode::Pruned);
        let three = &out.per_size[2];
        assert_eq!(three.candidates, 4);
        assert_eq!(three.subsets_checked, 4);
        assert!(three.witness.is_none());
    }

    #[test]
    fn unpruned_agrees_on_tiny_bounds() {
        let a = search_sizes(12, 3, SearchMode::Pruned);
        let b = search_sizes(12, 3, SearchMode::Unpruned);
        assert_eq!(a.achievable(), b.achievable());
    }

    #[test]
    fn combinations_enumerate_all() {
        let mut idx = vec![0, 1];
        let mut count = 1;
        while next_combination(&mut idx, 5) {
            count += 1;
        }
        assert_eq!(count, 10);
    }
}
