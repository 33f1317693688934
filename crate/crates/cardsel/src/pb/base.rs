//! Mixed-radix bases: digit conversion and optimal base search.

use std::collections::BTreeMap;

/// Primes available as radices.
pub const PRIMES: [u64; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];

/// Search states kept before falling back to fewer primes.
const STATE_CAP: usize = 200_000;

/// Radices `r_0 … r_{m-1}` with weights `w_0 = 1, w_{i+1} = w_i · r_i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct MixedRadixBase {
    radices: Vec<u64>,
    weights: Vec<u64>,
}

impl MixedRadixBase {
    /// Panics on a radix below 2 or weight overflow.
    pub fn new(radices: Vec<u64>) -> MixedRadixBase {
        let mut weights = vec![1u64];
        for &r in &radices {
            assert!(r >= 2, "radix must be at least 2");
            let w = weights.last().unwrap().checked_mul(r).expect("base weight overflow");
            weights.push(w);
        }
        MixedRadixBase { radices, weights }
    }

    pub fn radices(&self) -> &[u64] {
        &self.radices
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// Number of radices; digit vectors have one more entry.
    pub fn len(&self) -> usize {
        self.radices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radices.is_empty()
    }

    /// Top weight `w_m`.
    pub fn top_weight(&self) -> u64 {
        *self.weights.last().unwrap()
    }
}

/// Digits `d_0 … d_m` of `v`; the last digit is unbounded.
pub fn to_digits(mut v: u64, base: &MixedRadixBase) -> Vec<u64> {
    let mut digits = Vec::with_capacity(base.len() + 1);
    for &r in base.radices() {
        digits.push(v % r);
        v /= r;
    }
    digits.push(v);
    digits
}

/// `Σ d_i · w_i`; `None` on overflow or a length mismatch.
pub fn value_of(digits: &[u64], base: &MixedRadixBase) -> Option<u64> {
    if digits.len() != base.len() + 1 {
        return None;
    }
    digits.iter().zip(base.weights()).try_fold(0u64, |acc, (&d, &w)| acc.checked_add(d.checked_mul(w)?))
}

/// Sum of all digits of all coefficients in `base`.
pub fn base_cost(coeffs: &[u64], base: &MixedRadixBase) -> u64 {
    coeffs.iter().map(|&c| to_digits(c, base).iter().sum::<u64>()).sum()
}

#[derive(Clone, Debug)]
struct Path {
    partial: u64,
    radices: Vec<u64>,
}

fn better(a: (u64, &[u64]), b: (u64, &[u64])) -> bool {
    (a.0, a.1.len(), a.1) < (b.0, b.1.len(), b.1)
}

/// Search over products of `primes`; `None` when the state cap is hit.
fn search(coeffs: &[(u64, u64)], max: u64, primes: &[u64]) -> Option<MixedRadixBase> {
    let mut states: BTreeMap<u64, Path> = BTreeMap::new();
    states.insert(1, Path { partial: 0, radices: Vec::new() });
    let mut best: Option<(u64, Vec<u64>)> = None;
    let mut cursor = 0u64;
    while let Some((&w, path)) = states.range(cursor + 1..).next() {
        cursor = w;
        let path = path.clone();
        let rest: u64 = coeffs.iter().map(|&(c, n)| (c / w) * n).sum();
        let total = path.partial + rest;
        if best.as_ref().is_none_or(|(bc, br)| better((total, &path.radices), (*bc, br))) {
            best = Some((total, path.radices.clone()));
        }
        for &r in primes {
            let Some(next) = w.checked_mul(r).filter(|&nw| nw <= max) else { break };
            let step: u64 = coeffs.iter().map(|&(c, n)| ((c / w) % r) * n).sum();
            let mut radices = path.radices.clone();
            radices.push(r);
            let cand = Path { partial: path.partial + step, radices };
            match states.get(&next) {
                Some(old) if !better((cand.partial, &cand.radices), (old.partial, &old.radices)) => {}
                _ => {
                    states.insert(next, cand);
                }
            }
            if states.len() > STATE_CAP {
                return None;
            }
        }
    }
    best.map(|(_, radices)| MixedRadixBase::new(radices))
}

/// Number of products of `primes` not above `max`, or `None` past `cap`.
fn count_smooth(max: u64, primes: &[u64], cap: usize) -> Option<usize> {
    fn go(w: u64, max: u64, primes: &[u64], count: &mut usize, cap: usize) -> bool {
        *count += 1;
        if *count > cap {
            return false;
        }
        for (i, &p) in primes.iter().enumerate() {
            match w.checked_mul(p) {
                Some(nw) if nw <= max => {
                    if !go(nw, max, &primes[i..], count, cap) {
                        return false;
                    }
                }
                _ => break,
            }
        }
        true
    }
    let mut count = 0;
    go(1, max, primes, &mut count, cap).then_some(count)
}

/// Base over primes below 50 minimizing the total digit sum, with weights
/// bounded by the largest coefficient. Ties prefer shorter bases, then the
/// lexicographically smaller radix list.
pub fn find_base(coeffs: &[u64]) -> MixedRadixBase {
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for &c in coeffs.iter().filter(|&&c| c > 0) {
        *counts.entry(c).or_default() += 1;
    }
    let Some(&max) = counts.keys().next_back() else { return MixedRadixBase::default() };
    let grouped: Vec<(u64, u64)> = counts.into_iter().collect();
    for n_primes in (1..=PRIMES.len()).rev() {
        if count_smooth(max, &PRIMES[..n_primes], STATE_CAP).is_none() {
            continue;
        }
        if let Some(base) = search(&grouped, max, &PRIMES[..n_primes]) {
            return base;
        }
    }
    MixedRadixBase::default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digits_example() {
        let b = MixedRadixBase::new(vec![3, 5]);
        assert_eq!(to_digits(164, &b), vec![2, 4, 10]);
        assert_eq!(value_of(&[2, 4, 10], &b), Some(164));
        assert_eq!(to_digits(0, &b), vec![0, 0, 0]);
    }

    #[test]
    fn unary_base_for_ones() {
        assert!(find_base(&[1, 1, 1]).is_empty());
        assert!(find_base(&[]).is_empty());
    }

    #[test]
    fn small_set() {
        let coeffs = [2, 2, 2, 2, 5, 18];
        let b = find_base(&coeffs);
        assert!(base_cost(&coeffs, &b) <= 8);
        assert_eq!(base_cost(&coeffs, &MixedRadixBase::new(vec![2, 3, 3])), 8);
    }

    #[test]
    fn huge_coefficients_terminate() {
        let b = find_base(&[(1 << 62) - 1, 123_456_789_012, 3]);
        assert!(b.top_weight() < (1 << 62));
    }
}
