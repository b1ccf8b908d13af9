use serde::Serialize;

use super::charts::PushforwardPoly;
use crate::error::{Error, Result};
use crate::multipoly::MultiIndex;

/// A multi-index `m` with `q_m != 0` that dominates every other nonzero
/// exponent of `Q` in the lexicographic order read along `sigma`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdmissibleIndex {
    pub m: MultiIndex,
    /// Zero-based axis order `sigma(1), ..., sigma(d)`.
    pub sigma: Vec<usize>,
    pub q_m: f64,
}

impl AdmissibleIndex {
    /// `1/(|m| + 1)`.
    pub fn kappa(&self) -> f64 {
        1.0 / (self.m.total() as f64 + 1.0)
    }
}

/// Whether `m` beats `beta` along `sigma`: `m_sigma(1) > beta_sigma(1)`, or
/// the first differing entry along `sigma` is larger in `m`.
pub fn dominates(m: &MultiIndex, beta: &MultiIndex, sigma: &[usize]) -> bool {
    for &k in sigma {
        if m[k] != beta[k] {
            return m[k] > beta[k];
        }
    }
    false
}

/// Permutations of `0..d` in lexicographic order.
pub fn permutations(d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..d).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (1..d).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
        let j = (i..d).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// Tries every permutation in lexicographic order, takes the
/// `sigma`-lexicographically largest nonzero exponent and checks it against
/// all other nonzero exponents. Constant or zero `Q` has no admissible index.
pub fn admissible_index(q: &PushforwardPoly) -> Result<AdmissibleIndex> {
    if q.terms().iter().all(|(a, _)| a.is_zero()) {
        return Err(Error::NoAdmissibleIndex);
    }
    for sigma in permutations(q.dim()) {
        let key = |a: &MultiIndex| sigma.iter().map(|&k| a[k]).collect::<Vec<_>>();
        let (m, q_m) = q.terms().iter().max_by_key(|(a, _)| key(a)).cloned().unwrap();
        if q.terms().iter().all(|(b, _)| *b == m || dominates(&m, b, &sigma)) {
            return Ok(AdmissibleIndex { m, sigma, q_m });
        }
    }
    Err(Error::NoAdmissibleIndex)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_order() {
        assert_eq!(
            permutations(3),
            vec![vec![0, 1, 2], vec![0, 2, 1], vec![1, 0, 2], vec![1, 2, 0], vec![2, 0, 1], vec![2, 1, 0]]
        );
        assert_eq!(permutations(1), vec![vec![0]]);
    }

    #[test]
    fn examples() {
        let q = PushforwardPoly::from_terms(1, &[(&[1], -2.0)]).unwrap();
        let a = admissible_index(&q).unwrap();
        assert_eq!((a.m, a.q_m), (MultiIndex::from([1]), -2.0));

        let q = PushforwardPoly::from_terms(2, &[(&[2, 1], 1.0), (&[1, 0], 1.0)]).unwrap();
        let a = admissible_index(&q).unwrap();
        assert_eq!((a.m, a.sigma), (MultiIndex::from([2, 1]), vec![0, 1]));

        let q = PushforwardPoly::from_terms(1, &[(&[0], 5.0)]).unwrap();
        assert!(matches!(admissible_index(&q), Err(Error::NoAdmissibleIndex)));
        let q = PushforwardPoly::from_terms(2, &[]).unwrap();
        assert!(matches!(admissible_index(&q), Err(Error::NoAdmissibleIndex)));
    }

    #[test]
    fn order_follows_sigma() {
        let m = MultiIndex::from([1, 3]);
        let b = MultiIndex::from([2, 0]);
        assert!(!dominates(&m, &b, &[0, 1]));
        assert!(dominates(&m, &b, &[1, 0]));
    }
}
