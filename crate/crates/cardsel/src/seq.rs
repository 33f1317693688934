//! Sequence operators over finite sequences (1-based indices, as in the
//! network algorithms) and 0-1 sortedness predicates.

use thiserror::Error;

/// A finite 0-1 sequence.
pub type BitSeq = Vec<bool>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeqError {
    #[error("index {index} out of range for length {len}")]
    OutOfRange { index: usize, len: usize },
    #[error("zip requires non-increasing column lengths")]
    IncreasingColumns,
}

/// `pref(i, x) = x_1..x_i`.
pub fn pref<T: Clone>(i: usize, x: &[T]) -> Result<Vec<T>, SeqError> {
    if i > x.len() {
        return Err(SeqError::OutOfRange { index: i, len: x.len() });
    }
    Ok(x[..i].to_vec())
}

/// `suff(i, x) = x_i..x_n`; `i = n+1` gives the empty sequence.
pub fn suff<T: Clone>(i: usize, x: &[T]) -> Result<Vec<T>, SeqError> {
    if i == 0 || i > x.len() + 1 {
        return Err(SeqError::OutOfRange { index: i, len: x.len() });
    }
    Ok(x[i - 1..].to_vec())
}

/// Elements at odd 1-based positions.
pub fn odd<T: Clone>(x: &[T]) -> Vec<T> {
    x.iter().step_by(2).cloned().collect()
}

/// Elements at even 1-based positions.
pub fn even<T: Clone>(x: &[T]) -> Vec<T> {
    x.iter().skip(1).step_by(2).cloned().collect()
}

/// First `⌊n/2⌋` elements.
pub fn left<T: Clone>(x: &[T]) -> Vec<T> {
    x[..x.len() / 2].to_vec()
}

/// Elements after the first `⌊n/2⌋`.
pub fn right<T: Clone>(x: &[T]) -> Vec<T> {
    x[x.len() / 2..].to_vec()
}

/// Row-major interleaving of columns with non-increasing lengths.
pub fn zip<T: Clone>(cols: &[Vec<T>]) -> Result<Vec<T>, SeqError> {
    if cols.windows(2).any(|w| w[0].len() < w[1].len()) {
        return Err(SeqError::IncreasingColumns);
    }
    let rows = cols.first().map_or(0, |c| c.len());
    let mut out = Vec::with_capacity(cols.iter().map(Vec::len).sum());
    for r in 0..rows {
        for c in cols {
            if let Some(v) = c.get(r) {
                out.push(v.clone());
            }
        }
    }
    Ok(out)
}

/// Removes every occurrence of `b`.
pub fn drop<T: Clone + PartialEq>(b: &T, x: &[T]) -> Vec<T> {
    x.iter().filter(|v| *v != b).cloned().collect()
}

/// Number of ones.
pub fn ones(x: &[bool]) -> usize {
    x.iter().filter(|&&b| b).count()
}

/// Non-increasing order.
pub fn is_sorted(x: &[bool]) -> bool {
    x.windows(2).all(|w| w[0] >= w[1])
}

/// The first `k` positions are sorted and none of them is smaller than any
/// later position.
pub fn is_top_k_sorted(x: &[bool], k: usize) -> bool {
    let k = k.min(x.len());
    if !is_sorted(&x[..k]) {
        return false;
    }
    if k == 0 {
        return true;
    }
    x[k - 1] || x[k..].iter().all(|&b| !b)
}

/// Bits of `v` as a sequence of length `n` (bit `i` at position `i`).
pub fn bits_of(v: u64, n: usize) -> BitSeq {
    (0..n).map(|i| (v >> i) & 1 == 1).collect()
}

/// Parses a string of `0`/`1` characters.
pub fn parse_bits(s: &str) -> BitSeq {
    s.chars().filter(|c| *c == '0' || *c == '1').map(|c| c == '1').collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zip_row_major() {
        let cols = vec![vec!['a', 'b', 'c'], vec!['d', 'e'], vec!['f']];
        assert_eq!(zip(&cols).unwrap(), vec!['a', 'd', 'f', 'b', 'e', 'c']);
        assert_eq!(zip(&[vec![1], vec![2, 3]]), Err(SeqError::IncreasingColumns));
    }

    #[test]
    fn prefix_suffix_drop() {
        let x = parse_bits("101");
        assert_eq!(pref(2, &x).unwrap(), parse_bits("10"));
        assert_eq!(suff(2, &x).unwrap(), parse_bits("01"));
        assert_eq!(suff(4, &x).unwrap(), BitSeq::new());
        assert!(suff(5, &x).is_err());
        assert!(pref(4, &x).is_err());
        assert_eq!(drop(&false, &parse_bits("1001")), parse_bits("11"));
    }

    #[test]
    fn odd_even_left_right() {
        let x = [1, 2, 3, 4, 5];
        assert_eq!(odd(&x), vec![1, 3, 5]);
        assert_eq!(even(&x), vec![2, 4]);
        assert_eq!(left(&x), vec![1, 2]);
        assert_eq!(right(&x), vec![3, 4, 5]);
    }

    #[test]
    fn top_k_sortedness() {
        assert!(is_top_k_sorted(&parse_bits("110100"), 2));
        assert!(!is_top_k_sorted(&parse_bits("101100"), 2));
        assert!(!is_top_k_sorted(&parse_bits("100100"), 2));
        assert!(is_top_k_sorted(&parse_bits("000"), 2));
        assert!(is_top_k_sorted(&parse_bits("011"), 0));
    }
}
