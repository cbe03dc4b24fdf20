//! Named linear entropic formulas, built from conditional-information
//! building blocks so the identities between them stay executable.

use num_traits::One;
use thiserror::Error;

use crate::functional::{Functional, FunctionalError};
use crate::lattice::{LatticeError, SystemSet};
use crate::rational::{rint, Rat};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Functional(#[from] FunctionalError),
    #[error("systems {0:?} must be distinct and disjoint from the conditioning set")]
    IndexClash(Vec<usize>),
    #[error("unknown catalog formula {0:?}")]
    UnknownName(String),
    #[error("{name} needs at least {min} systems, got {got}")]
    TooFewSystems { name: String, min: usize, got: usize },
}

/// `S(target | given)` as a coefficient pattern: `e_{target+given} - e_given`
/// (with `e_empty = 0`).
pub fn conditional_entropy(
    target: &SystemSet,
    given: &SystemSet,
    n: usize,
) -> Result<Functional, CatalogError> {
    let mut f = Functional::zero(n)?;
    let all = target.union(given);
    if !all.is_empty() {
        f.set_coeff(&SystemSet::new(all.mask(), n)?, Rat::one());
    }
    if !given.is_empty() {
        let g = SystemSet::new(given.mask(), n)?;
        f.set_coeff(&g, f.coeff(&g) - Rat::one());
    }
    Ok(f)
}

/// `I(i;j) = S(i) + S(j) - S(ij)`.
pub fn mutual_information(i: usize, j: usize, n: usize) -> Result<Functional, CatalogError> {
    conditional_mutual_information(i, j, &[], n)
}

/// `I(i;j|K) = S(iK) + S(jK) - S(K) - S(ijK)`, with the `S(K)` term omitted
/// for empty `K`.
pub fn conditional_mutual_information(
    i: usize,
    j: usize,
    cond: &[usize],
    n: usize,
) -> Result<Functional, CatalogError> {
    if i == j || cond.contains(&i) || cond.contains(&j) {
        let mut all = vec![i, j];
        all.extend_from_slice(cond);
        return Err(CatalogError::IndexClash(all));
    }
    let k = SystemSet::from_indices(cond, n)?;
    let si = SystemSet::singleton(i, n)?;
    let sj = SystemSet::singleton(j, n)?;
    let mut f = Functional::zero(n)?;
    let add = |f: &mut Functional, s: SystemSet, c: i64| {
        if !s.is_empty() {
            f.set_coeff(&s, f.coeff(&s) + rint(c));
        }
    };
    add(&mut f, si.union(&k), 1);
    add(&mut f, sj.union(&k), 1);
    add(&mut f, k, -1);
    add(&mut f, si.union(&sj).union(&k), -1);
    Ok(f)
}

/// Mutual information between two disjoint groups:
/// `I(A;B) = S(A) + S(B) - S(AB)`.
pub fn group_mutual_information(
    a: &[usize],
    b: &[usize],
    n: usize,
) -> Result<Functional, CatalogError> {
    let sa = SystemSet::from_indices(a, n)?;
    let sb = SystemSet::from_indices(b, n)?;
    if sa.mask() & sb.mask() != 0 || sa.is_empty() || sb.is_empty() {
        let mut all = a.to_vec();
        all.extend_from_slice(b);
        return Err(CatalogError::IndexClash(all));
    }
    let mut f = Functional::zero(n)?;
    f.set_coeff(&sa, Rat::one());
    f.set_coeff(&sb, Rat::one());
    f.set_coeff(&sa.union(&sb), -Rat::one());
    Ok(f)
}

/// The three-party dual total correlation
/// `J(1;2;3) = S(12) + S(23) + S(13) - 2 S(123)`, on `n >= 3` systems.
pub fn dual_total_correlation(n: usize) -> Result<Functional, CatalogError> {
    require(n, 3, "dual-total-correlation")?;
    let mut f = Functional::zero(n)?;
    for pair in [[1, 2], [2, 3], [1, 3]] {
        f.set_coeff(&SystemSet::from_indices(&pair, n)?, Rat::one());
    }
    f.set_coeff(&SystemSet::from_indices(&[1, 2, 3], n)?, rint(-2));
    Ok(f)
}

/// The four-party monotone
/// `U(1;2;3;4) = S(12) + S(34) + S(13) - S(123) - S(134)`, on `n >= 4`
/// systems. Equal to `I(2;3|1) + I(1;34)` and to `I(1;4|3) + I(3;12)`.
pub fn u_monotone(n: usize) -> Result<Functional, CatalogError> {
    require(n, 4, "u-monotone")?;
    let a = conditional_mutual_information(2, 3, &[1], n)?;
    let b = group_mutual_information(&[1], &[3, 4], n)?;
    Ok(a.add(&b)?)
}

/// The right-hand side of the first non-Shannon-type information inequality:
/// `2 I(1;2|3) + I(1;3|2) + I(2;3|1) + I(1;2|4) + I(3;4) - I(1;2)`, on
/// `n >= 4` systems. Balanced, yet not monotonic for any system.
pub fn zhang_yeung(n: usize) -> Result<Functional, CatalogError> {
    require(n, 4, "zhang-yeung")?;
    let terms = [
        (conditional_mutual_information(1, 2, &[3], n)?, rint(2)),
        (conditional_mutual_information(1, 3, &[2], n)?, rint(1)),
        (conditional_mutual_information(2, 3, &[1], n)?, rint(1)),
        (conditional_mutual_information(1, 2, &[4], n)?, rint(1)),
        (mutual_information(3, 4, n)?, rint(1)),
        (mutual_information(1, 2, n)?, rint(-1)),
    ];
    let mut acc = Functional::zero(n)?;
    for (f, c) in terms {
        acc = acc.add(&f.scaled(&c))?;
    }
    Ok(acc)
}

fn require(n: usize, min: usize, name: &str) -> Result<(), CatalogError> {
    if n < min {
        Err(CatalogError::TooFewSystems { name: name.to_string(), min, got: n })
    } else {
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub min_n: usize,
    pub description: &'static str,
}

pub const ENTRIES: &[CatalogEntry] = &[
    CatalogEntry {
        name: "mutual-information",
        min_n: 2,
        description: "I(1;2) = S(1) + S(2) - S(12)",
    },
    CatalogEntry {
        name: "dual-total-correlation",
        min_n: 3,
        description: "J(1;2;3) = S(12) + S(23) + S(13) - 2S(123)",
    },
    CatalogEntry {
        name: "u-monotone",
        min_n: 4,
        description: "U(1;2;3;4) = S(12) + S(34) + S(13) - S(123) - S(134)",
    },
    CatalogEntry {
        name: "zhang-yeung",
        min_n: 4,
        description: "2I(1;2|3) + I(1;3|2) + I(2;3|1) + I(1;2|4) + I(3;4) - I(1;2)",
    },
];

/// Looks a formula up by its CLI name, instantiated on `n` systems
/// (defaulting to the formula's minimum).
pub fn lookup(name: &str, n: Option<usize>) -> Result<Functional, CatalogError> {
    let entry = ENTRIES
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| CatalogError::UnknownName(name.to_string()))?;
    let n = n.unwrap_or(entry.min_n);
    match entry.name {
        "mutual-information" => mutual_information(1, 2, n),
        "dual-total-correlation" => dual_total_correlation(n),
        "u-monotone" => u_monotone(n),
        "zhang-yeung" => zhang_yeung(n),
        _ => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monotonicity::check_monotone;
    use crate::rational::rint;

    fn set(indices: &[usize], n: usize) -> SystemSet {
        SystemSet::from_indices(indices, n).unwrap()
    }

    /// One-time expansion checks against hand-entered coefficient tables.
    #[test]
    fn expansions_match_hand_entered_tables() {
        let mi = mutual_information(1, 2, 2).unwrap();
        assert_eq!(mi.coeffs(), &[rint(1), rint(1), rint(-1)]);

        let mi23 = mutual_information(2, 3, 4).unwrap();
        for (s, expected) in [
            (set(&[2], 4), 1),
            (set(&[3], 4), 1),
            (set(&[2, 3], 4), -1),
            (set(&[1], 4), 0),
            (set(&[1, 2, 3, 4], 4), 0),
        ] {
            assert_eq!(mi23.coeff(&s), &rint(expected));
        }

        let ssa = conditional_mutual_information(1, 2, &[3], 3).unwrap();
        for (s, expected) in [
            (set(&[1, 3], 3), 1),
            (set(&[2, 3], 3), 1),
            (set(&[3], 3), -1),
            (set(&[1, 2, 3], 3), -1),
            (set(&[1], 3), 0),
        ] {
            assert_eq!(ssa.coeff(&s), &rint(expected));
        }

        // Empty conditioning collapses to plain mutual information.
        assert_eq!(
            conditional_mutual_information(1, 2, &[], 2).unwrap(),
            mutual_information(1, 2, 2).unwrap()
        );

        let j = dual_total_correlation(3).unwrap();
        for (s, expected) in [
            (set(&[1, 2], 3), 1),
            (set(&[2, 3], 3), 1),
            (set(&[1, 3], 3), 1),
            (set(&[1, 2, 3], 3), -2),
            (set(&[1], 3), 0),
        ] {
            assert_eq!(j.coeff(&s), &rint(expected));
        }

        let u = u_monotone(4).unwrap();
        for (s, expected) in [
            (set(&[1, 2], 4), 1),
            (set(&[3, 4], 4), 1),
            (set(&[1, 3], 4), 1),
            (set(&[1, 2, 3], 4), -1),
            (set(&[1, 3, 4], 4), -1),
            (set(&[1], 4), 0),
            (set(&[1, 4], 4), 0),
        ] {
            assert_eq!(u.coeff(&s), &rint(expected));
        }

        let zy = zhang_yeung(4).unwrap();
        for (s, expected) in [
            (set(&[1], 4), -2),
            (set(&[2], 4), -2),
            (set(&[3], 4), -1),
            (set(&[4], 4), 0),
            (set(&[1, 2], 4), 3),
            (set(&[1, 3], 4), 3),
            (set(&[2, 3], 4), 3),
            (set(&[1, 4], 4), 1),
            (set(&[2, 4], 4), 1),
            (set(&[3, 4], 4), -1),
            (set(&[1, 2, 3], 4), -4),
            (set(&[1, 2, 4], 4), -1),
            (set(&[1, 3, 4], 4), 0),
            (set(&[2, 3, 4], 4), 0),
            (set(&[1, 2, 3, 4], 4), 0),
        ] {
            assert_eq!(zy.coeff(&s), &rint(expected), "coefficient of {s}");
        }
    }

    #[test]
    fn index_clashes_are_rejected() {
        assert!(mutual_information(1, 1, 2).is_err());
        assert!(conditional_mutual_information(1, 2, &[1], 3).is_err());
        assert!(group_mutual_information(&[1, 2], &[2, 3], 3).is_err());
        assert!(u_monotone(3).is_err());
    }

    #[test]
    fn u_identities_hold_coefficientwise() {
        let u = u_monotone(4).unwrap();
        let first = conditional_mutual_information(2, 3, &[1], 4)
            .unwrap()
            .add(&group_mutual_information(&[1], &[3, 4], 4).unwrap())
            .unwrap();
        assert_eq!(u, first);
        let second = conditional_mutual_information(1, 4, &[3], 4)
            .unwrap()
            .add(&group_mutual_information(&[3], &[1, 2], 4).unwrap())
            .unwrap();
        assert_eq!(u, second);
    }

    #[test]
    fn catalog_monotonicity_verdicts() {
        let mi = mutual_information(1, 2, 2).unwrap();
        assert!(check_monotone(&mi, &[1, 2]).unwrap().iter().all(|(_, v)| v.is_satisfied()));

        let j = dual_total_correlation(3).unwrap();
        assert!(check_monotone(&j, &[1, 2, 3]).unwrap().iter().all(|(_, v)| v.is_satisfied()));

        let u = u_monotone(4).unwrap();
        assert!(check_monotone(&u, &[1, 2, 3, 4]).unwrap().iter().all(|(_, v)| v.is_satisfied()));

        let zy = zhang_yeung(4).unwrap();
        assert!(zy.is_balanced());
        let verdicts = check_monotone(&zy, &[1, 2, 3, 4]).unwrap();
        assert!(verdicts.iter().all(|(_, v)| !v.is_satisfied()));
    }

    #[test]
    fn balance_defects() {
        for f in [
            mutual_information(1, 2, 2).unwrap(),
            dual_total_correlation(3).unwrap(),
            u_monotone(4).unwrap(),
            zhang_yeung(4).unwrap(),
        ] {
            assert!(f.is_balanced(), "{f:?}");
        }
    }

    #[test]
    fn j_evaluations() {
        use crate::rational::rat;
        use crate::witness::{evaluate, shannon_entropy_vector, JointDistribution};
        let j = dual_total_correlation(3).unwrap();
        // Product of three uniform bits: J vanishes.
        let product = JointDistribution::product_of_uniform(&[2, 2, 2]).unwrap();
        let (v, _) = evaluate(&j, &shannon_entropy_vector(&product).unwrap()).unwrap();
        assert_eq!(v, rint(0));
        // Three perfectly correlated bits: J = 1.
        let copy = JointDistribution::new(
            vec![1, 2, 3],
            vec![2, 2, 2],
            vec![(vec![0, 0, 0], rat(1, 2)), (vec![1, 1, 1], rat(1, 2))],
        )
        .unwrap();
        let (v, _) = evaluate(&j, &shannon_entropy_vector(&copy).unwrap()).unwrap();
        assert_eq!(v, rint(1));
    }

    #[test]
    fn lookup_by_name() {
        assert_eq!(lookup("mutual-information", None).unwrap(), mutual_information(1, 2, 2).unwrap());
        assert_eq!(lookup("u-monotone", None).unwrap(), u_monotone(4).unwrap());
        assert_eq!(lookup("zhang-yeung", Some(5)).unwrap(), zhang_yeung(5).unwrap());
        assert!(lookup("nonesuch", None).is_err());
        assert!(lookup("u-monotone", Some(3)).is_err());
    }

    #[test]
    fn zhang_yeung_violation_certificates_verify() {
        let zy = zhang_yeung(4).unwrap();
        for i in 1..=4 {
            let cert = crate::witness::violation_certificate(&zy, &[i]).unwrap().unwrap();
            assert_eq!(cert.system, i);
            cert.verify().unwrap();
        }
    }
}
