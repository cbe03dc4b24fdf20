//! The symmetric monotonicity cone: formulas invariant under system
//! permutations, described in the `n`-dimensional coordinates `a_1..a_n`
//! where `a_k` is the shared coefficient of every `k`-element subset. Both
//! the facets (binomial rows) and the generators have closed forms.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cone::{HRep, VRep};
use crate::functional::Functional;
use crate::lattice::SystemSet;
use crate::monotonicity::MonoError;
use crate::rational::{QVec, Rat};

/// A permutation-invariant coefficient pattern: entry `k-1` is the common
/// coefficient of all `k`-element subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricVector {
    pub n: usize,
    pub a: QVec,
}

impl SymmetricVector {
    pub fn new(n: usize, a: QVec) -> Result<Self, MonoError> {
        if a.len() != n {
            return Err(MonoError::UnsupportedSystemCount { n: a.len(), min: n, max: n });
        }
        Ok(SymmetricVector { n, a })
    }
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Facets in symmetric coordinates: for `1 <= k <= n-1` the inequality
/// `sum_{j=1..k} C(n-1, j-1) a_j >= 0`, and the `k = n` row as the balance
/// equality. The coefficient of `a_j` counts the `j`-element subsets of an
/// `(n-1)`-element ground set extended by the anchor.
pub fn symmetric_facets(n: usize) -> Result<HRep, MonoError> {
    if n < 2 {
        return Err(MonoError::UnsupportedSystemCount { n, min: 2, max: usize::MAX });
    }
    let row = |k: usize| -> QVec {
        (1..=n)
            .map(|j| {
                if j <= k {
                    Rat::from_integer(binomial(n - 1, j - 1))
                } else {
                    Rat::zero()
                }
            })
            .collect()
    };
    let mut h = HRep::new(n);
    for k in 1..n {
        h.inequalities.push(row(k));
    }
    h.equalities.push(row(n));
    Ok(h)
}

/// Generators in symmetric coordinates: ray `l` (for `1 <= l <= n-1`) has
/// `a_l = 1/l`, `a_{l+1} = -1/(n-l)` and zeroes elsewhere. These are the
/// unique generators up to positive scaling.
pub fn symmetric_generators(n: usize) -> Result<VRep, MonoError> {
    if n < 2 {
        return Err(MonoError::UnsupportedSystemCount { n, min: 2, max: usize::MAX });
    }
    let rays: Vec<QVec> = (1..n)
        .map(|l| {
            let mut v = vec![Rat::zero(); n];
            v[l - 1] = Rat::new(BigInt::one(), BigInt::from(l));
            v[l] = -Rat::new(BigInt::one(), BigInt::from(n - l));
            v
        })
        .collect();
    Ok(VRep { dim: n, rays, lineality: vec![] })
}

/// Expands symmetric coordinates into a full functional: `alpha_I = a_|I|`.
pub fn embed_symmetric(s: &SymmetricVector) -> Result<Functional, MonoError> {
    let mut f = Functional::zero(s.n)?;
    for subset in SystemSet::all_nonempty(s.n) {
        f.set_coeff(&subset, s.a[subset.len() - 1].clone());
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::{self, DdOptions};
    use crate::rational::{canonical_form, rat, rint};

    #[test]
    fn facet_rows_match_the_closed_form() {
        // n=2: a_1 >= 0 and a_1 + a_2 = 0.
        let h = symmetric_facets(2).unwrap();
        assert_eq!(h.inequalities, vec![vec![rint(1), rint(0)]]);
        assert_eq!(h.equalities, vec![vec![rint(1), rint(1)]]);

        // n=3: a_1 >= 0; a_1 + 2 a_2 >= 0; a_1 + 2 a_2 + a_3 = 0.
        let h = symmetric_facets(3).unwrap();
        assert_eq!(
            h.inequalities,
            vec![vec![rint(1), rint(0), rint(0)], vec![rint(1), rint(2), rint(0)]]
        );
        assert_eq!(h.equalities, vec![vec![rint(1), rint(2), rint(1)]]);

        // n=5, row k=3: a_1 + 4 a_2 + 6 a_3 >= 0.
        let h = symmetric_facets(5).unwrap();
        assert_eq!(
            h.inequalities[2],
            vec![rint(1), rint(4), rint(6), rint(0), rint(0)]
        );

        assert!(symmetric_facets(1).is_err());
    }

    #[test]
    fn generator_rows_match_the_closed_form() {
        // n=2: the single ray (1, -1).
        let v = symmetric_generators(2).unwrap();
        assert_eq!(v.rays, vec![vec![rint(1), rint(-1)]]);

        // n=3, l=2: (0, 1/2, -1).
        let v = symmetric_generators(3).unwrap();
        assert_eq!(v.rays[1], vec![rint(0), rat(1, 2), rint(-1)]);

        // n=4, l=1: (1, -1/3, 0, 0).
        let v = symmetric_generators(4).unwrap();
        assert_eq!(v.rays[0], vec![rint(1), rat(-1, 3), rint(0), rint(0)]);
    }

    #[test]
    fn dd_of_facets_reproduces_generators_up_to_scaling() {
        let opts = DdOptions::default();
        for n in 2..=10 {
            let h = symmetric_facets(n).unwrap();
            let v = cone::dd_convert(&h, &opts).unwrap();
            assert!(v.lineality.is_empty(), "n={n}: symmetric cone is pointed");
            let mut expected: Vec<QVec> = symmetric_generators(n)
                .unwrap()
                .rays
                .iter()
                .map(|r| canonical_form(r))
                .collect();
            expected.sort();
            assert_eq!(v.rays, expected, "n={n}");
        }
    }

    #[test]
    fn embedding_examples() {
        // (1,-1) embeds to the mutual information pattern.
        let s = SymmetricVector::new(2, vec![rint(1), rint(-1)]).unwrap();
        let f = embed_symmetric(&s).unwrap();
        assert_eq!(f.coeffs(), &[rint(1), rint(1), rint(-1)]);

        // (0,1,-2) embeds to the dual total correlation.
        let s = SymmetricVector::new(3, vec![rint(0), rint(1), rint(-2)]).unwrap();
        let j = embed_symmetric(&s).unwrap();
        let pair = |a: usize, b: usize| SystemSet::from_indices(&[a, b], 3).unwrap();
        assert_eq!(j.coeff(&pair(1, 2)), &rint(1));
        assert_eq!(j.coeff(&pair(2, 3)), &rint(1));
        assert_eq!(j.coeff(&pair(1, 3)), &rint(1));
        assert_eq!(j.coeff(&SystemSet::full(3).unwrap()), &rint(-2));
        assert_eq!(j.coeff(&SystemSet::singleton(1, 3).unwrap()), &rint(0));

        // Zero embeds to zero, and every embedding is permutation-invariant.
        let z = SymmetricVector::new(3, vec![rint(0); 3]).unwrap();
        assert!(embed_symmetric(&z).unwrap().is_zero());
        for sigma in crate::lattice::Permutation::all(3) {
            assert_eq!(j.permuted(&sigma).unwrap(), j);
        }
    }

    #[test]
    fn embedded_generators_are_monotones() {
        for n in 2..=5 {
            let v = symmetric_generators(n).unwrap();
            let systems: Vec<usize> = (1..=n).collect();
            for ray in &v.rays {
                let s = SymmetricVector::new(n, ray.clone()).unwrap();
                let f = embed_symmetric(&s).unwrap();
                let verdicts = crate::monotonicity::check_monotone(&f, &systems).unwrap();
                assert!(verdicts.iter().all(|(_, v)| v.is_satisfied()), "n={n}");
            }
        }
    }
}
