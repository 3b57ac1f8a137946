use std::fmt;

use nalgebra::DMatrix;

use crate::{Error, Result};

/// Element of the hyperoctahedral group: a permutation `pi` of `0..k` and a
/// sign per source index.
///
/// Acting on vectors, `(g W)[pi[i]] = signs[i] * W[i]`; as a matrix,
/// `P[(pi[i], i)] = signs[i]`. Composition is the matrix product.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    pi: Vec<usize>,
    signs: Vec<i8>,
}

impl SignedPermutation {
    pub fn new(pi: Vec<usize>, signs: Vec<i8>) -> Result<Self> {
        let k = pi.len();
        if signs.len() != k {
            return Err(Error::InvalidPermutation(format!("{k} images but {} signs", signs.len())));
        }
        let mut seen = vec![false; k];
        for &p in &pi {
            if p >= k || seen[p] {
                return Err(Error::InvalidPermutation(format!("{pi:?} is not a bijection")));
            }
            seen[p] = true;
        }
        if let Some(s) = signs.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::InvalidPermutation(format!("sign {s} is not +-1")));
        }
        Ok(SignedPermutation { pi, signs })
    }

    pub fn identity(k: usize) -> Self {
        SignedPermutation { pi: (0..k).collect(), signs: vec![1; k] }
    }

    /// Swaps `a` and `b` (zero-based), no sign changes.
    pub fn transposition(k: usize, a: usize, b: usize) -> Self {
        let mut g = Self::identity(k);
        g.pi.swap(a, b);
        g
    }

    /// Flips the sign of component `i` (zero-based).
    pub fn flip(k: usize, i: usize) -> Self {
        let mut g = Self::identity(k);
        g.signs[i] = -1;
        g
    }

    pub fn k(&self) -> usize {
        self.pi.len()
    }

    pub fn pi(&self) -> &[usize] {
        &self.pi
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn is_identity(&self) -> bool {
        self.pi.iter().enumerate().all(|(i, &p)| i == p) && self.signs.iter().all(|&s| s == 1)
    }

    /// Image in the symmetric group.
    pub fn permutation(&self) -> SignedPermutation {
        SignedPermutation { pi: self.pi.clone(), signs: vec![1; self.k()] }
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let k = self.k();
        let mut m = DMatrix::zeros(k, k);
        for (i, (&p, &s)) in self.pi.iter().zip(&self.signs).enumerate() {
            m[(p, i)] = s as f64;
        }
        m
    }

    /// `self * other` as matrices: `other` acts first.
    pub fn compose(&self, other: &SignedPermutation) -> Result<SignedPermutation> {
        if self.k() != other.k() {
            return Err(Error::GroupSizeMismatch(self.k(), other.k()));
        }
        let pi = other.pi.iter().map(|&j| self.pi[j]).collect();
        let signs = other.pi.iter().zip(&other.signs).map(|(&j, &s)| s * self.signs[j]).collect();
        Ok(SignedPermutation { pi, signs })
    }

    /// Transpose of the matrix.
    pub fn inverse(&self) -> SignedPermutation {
        let k = self.k();
        let mut pi = vec![0; k];
        let mut signs = vec![1; k];
        for (i, (&p, &s)) in self.pi.iter().zip(&self.signs).enumerate() {
            pi[p] = i;
            signs[p] = s;
        }
        SignedPermutation { pi, signs }
    }

    /// All `2^k k!` elements; intended for small `k`.
    pub fn all(k: usize) -> Vec<SignedPermutation> {
        let mut perms = Vec::new();
        permutations(&mut (0..k).collect(), 0, &mut perms);
        let mut out = Vec::with_capacity(perms.len() << k);
        for pi in perms {
            for mask in 0..(1usize << k) {
                let signs = (0..k).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
                out.push(SignedPermutation { pi: pi.clone(), signs });
            }
        }
        out
    }
}

fn permutations(cur: &mut Vec<usize>, start: usize, out: &mut Vec<Vec<usize>>) {
    if start == cur.len() {
        out.push(cur.clone());
        return;
    }
    for i in start..cur.len() {
        cur.swap(start, i);
        permutations(cur, start + 1, out);
        cur.swap(start, i);
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (&p, &s)) in self.pi.iter().zip(&self.signs).enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}{}", if s < 0 { "-" } else { "+" }, p + 1)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_element(k: usize) -> impl Strategy<Value = SignedPermutation> {
        (Just((0..k).collect::<Vec<_>>()).prop_shuffle(), proptest::collection::vec(prop::bool::ANY, k))
            .prop_map(|(pi, s)| SignedPermutation::new(pi, s.into_iter().map(|b| if b { -1 } else { 1 }).collect()).unwrap())
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(SignedPermutation::new(vec![0, 0], vec![1, 1]).is_err());
        assert!(SignedPermutation::new(vec![0, 1], vec![1, 2]).is_err());
    }

    #[test]
    fn group_of_order_eight_matches_matrix_products() {
        let all = SignedPermutation::all(2);
        assert_eq!(all.len(), 8);
        for g in &all {
            for h in &all {
                let prod = g.compose(h).unwrap();
                assert_eq!(prod.matrix(), g.matrix() * h.matrix());
            }
        }
    }

    #[test]
    fn transposition_times_signed_transposition() {
        let g = SignedPermutation::transposition(2, 0, 1);
        let h = SignedPermutation::new(vec![1, 0], vec![-1, 1]).unwrap();
        // [[0,1],[1,0]] * [[0,1],[-1,0]] = [[-1,0],[0,1]].
        let prod = g.compose(&h).unwrap();
        assert_eq!(prod, SignedPermutation::flip(2, 0));
    }

    #[test]
    fn disjoint_transpositions_commute() {
        let a = SignedPermutation::transposition(4, 0, 1);
        let b = SignedPermutation::transposition(4, 2, 3);
        assert_eq!(a.compose(&b).unwrap(), b.compose(&a).unwrap());
    }

    #[test]
    fn size_mismatch() {
        let a = SignedPermutation::identity(2);
        let b = SignedPermutation::identity(3);
        assert_eq!(a.compose(&b).unwrap_err().name(), "SizeMismatch");
    }

    #[test]
    fn inverse_of_special_elements() {
        assert!(SignedPermutation::identity(3).inverse().is_identity());
        let f = SignedPermutation::flip(3, 1);
        assert_eq!(f.inverse(), f);
    }

    proptest! {
        #[test]
        fn inverse_and_associativity(g in arb_element(5), h in arb_element(5), l in arb_element(5)) {
            prop_assert!(g.compose(&g.inverse()).unwrap().is_identity());
            prop_assert_eq!(g.inverse().inverse(), g.clone());
            prop_assert_eq!(g.inverse().matrix(), g.matrix().transpose());
            let left = g.compose(&h).unwrap().compose(&l).unwrap();
            let right = g.compose(&h.compose(&l).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
