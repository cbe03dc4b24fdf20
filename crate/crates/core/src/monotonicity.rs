//! The monotonicity cones themselves: single-system facets indexed by lower
//! sets, their intersection over all systems, the explicit generator sets,
//! exact decomposition certificates, the partial-trace lift, and extremal ray
//! enumeration with permutation-orbit grouping.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::cone::{
    self, CombinationOutcome, ConeError, DdOptions, HRep, VRep,
};
use crate::functional::{Functional, FunctionalError};
use crate::lattice::{
    enumerate_lower_sets, subsets_containing, LatticeError, LowerSetFamily, Permutation,
    SystemSet, MAX_LOWER_SET_SYSTEMS, MAX_SYSTEMS,
};
use crate::rational::{format_rat, QVec, Rat};

#[derive(Debug, Error)]
pub enum MonoError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Functional(#[from] FunctionalError),
    #[error("system count {n} unsupported here (expected {min}..={max})")]
    UnsupportedSystemCount { n: usize, min: usize, max: usize },
    #[error("no systems selected")]
    NoSystems,
    #[error("not a monotone: {0}")]
    NotAMonotone(MonotonicityViolation),
    #[error("internal invariant breach: {0}")]
    InvariantBreach(String),
}

/// Facets of the single-system monotonicity cone for system `i` among `n`
/// systems: one inequality per nontrivial proper lower set `L` of `P_i(N)`
/// (the indicator row of `L`, meaning `sum over I in L of alpha_I >= 0`),
/// plus the balance equality (indicator of all of `P_i(N)`).
///
/// The empty lower set is omitted (it reads `0 >= 0`) and the full lower set
/// is omitted because its inequality is absorbed into the equality row.
/// Inequality rows follow the canonical lower-set order (cardinality, then
/// member bitset).
pub fn single_system_facets(i: usize, n: usize) -> Result<HRep, MonoError> {
    let dim = (1usize << n) - 1;
    let lower_sets = enumerate_lower_sets(i, n)?;
    let mut h = HRep::new(dim);
    for family in &lower_sets {
        if family.is_empty() || family.is_full() {
            continue;
        }
        h.inequalities.push(indicator_row(family, dim));
    }
    let full = LowerSetFamily::from_subsets(i, n, subsets_containing(i, n)?)?;
    h.equalities.push(indicator_row(&full, dim));
    Ok(h)
}

fn indicator_row(family: &LowerSetFamily, dim: usize) -> QVec {
    let mut row = vec![Rat::zero(); dim];
    for member in family.members() {
        row[member.coord()] = Rat::one();
    }
    row
}

/// Concatenated facets of the selected systems: the formulas monotonic under
/// local processing of every selected system.
pub fn monotonicity_cone(systems: &[usize], n: usize) -> Result<HRep, MonoError> {
    if systems.is_empty() {
        return Err(MonoError::NoSystems);
    }
    let mut sorted: Vec<usize> = systems.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut out: Option<HRep> = None;
    for &i in &sorted {
        let h = single_system_facets(i, n)?;
        out = Some(match out {
            None => h,
            Some(acc) => cone::intersect(&acc, &h)?,
        });
    }
    Ok(out.expect("nonempty system list"))
}

/// The constraint a functional failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolatedConstraint {
    /// A lower-set inequality came out negative.
    LowerSet(LowerSetFamily),
    /// The per-system balance equality has a nonzero defect.
    Balance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotonicityViolation {
    pub system: usize,
    pub constraint: ViolatedConstraint,
    /// The offending row value (lower-set sum or balance defect).
    pub value: Rat,
}

impl fmt::Display for MonotonicityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.constraint {
            ViolatedConstraint::LowerSet(family) => write!(
                f,
                "system {}: lower-set inequality {} sums to {}",
                self.system,
                family,
                format_rat(&self.value)
            ),
            ViolatedConstraint::Balance => write!(
                f,
                "system {}: balance equality has defect {}",
                self.system,
                format_rat(&self.value)
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SystemVerdict {
    Satisfied,
    Violated(MonotonicityViolation),
}

impl SystemVerdict {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, SystemVerdict::Satisfied)
    }
}

/// Checks monotonicity of `f` under local processing of each listed system.
/// A violated system reports its first offending lower set (in canonical
/// order) or, failing only the equality, the balance defect.
pub fn check_monotone(
    f: &Functional,
    systems: &[usize],
) -> Result<Vec<(usize, SystemVerdict)>, MonoError> {
    let n = f.n();
    if n > MAX_LOWER_SET_SYSTEMS {
        return Err(MonoError::UnsupportedSystemCount { n, min: 1, max: MAX_LOWER_SET_SYSTEMS });
    }
    let mut out = Vec::with_capacity(systems.len());
    for &i in systems {
        out.push((i, check_single_system(f, i)?));
    }
    Ok(out)
}

fn check_single_system(f: &Functional, i: usize) -> Result<SystemVerdict, MonoError> {
    let n = f.n();
    for family in enumerate_lower_sets(i, n)? {
        if family.is_empty() || family.is_full() {
            continue;
        }
        let sum = lower_set_sum(f, &family);
        if sum.is_negative() {
            return Ok(SystemVerdict::Violated(MonotonicityViolation {
                system: i,
                constraint: ViolatedConstraint::LowerSet(family),
                value: sum,
            }));
        }
    }
    let defect = &f.balance_defect()[i - 1];
    if !defect.is_zero() {
        return Ok(SystemVerdict::Violated(MonotonicityViolation {
            system: i,
            constraint: ViolatedConstraint::Balance,
            value: defect.clone(),
        }));
    }
    Ok(SystemVerdict::Satisfied)
}

/// `sum over members I of the family` of `alpha_I`.
pub fn lower_set_sum(f: &Functional, family: &LowerSetFamily) -> Rat {
    let mut acc = Rat::zero();
    for member in family.members() {
        acc += f.coeff(&member);
    }
    acc
}

/// One generator of the single-system cone for system `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SystemGenerator {
    /// `+e_K` for a nonempty `K` not containing `i`.
    Plus(SystemSet),
    /// `-e_K` for a nonempty `K` not containing `i`.
    Minus(SystemSet),
    /// `e_I - e_{I + j}` for `i` in `I`, `j` outside `I`: the coefficient
    /// pattern of the negated conditional entropy `-S(j | I)`.
    ConditionalDrop { set: SystemSet, attached: usize },
}

impl SystemGenerator {
    pub fn to_functional(&self, n: usize) -> Functional {
        let mut f = Functional::zero(n).expect("validated n");
        match self {
            SystemGenerator::Plus(k) => f.set_coeff(k, Rat::one()),
            SystemGenerator::Minus(k) => f.set_coeff(k, -Rat::one()),
            SystemGenerator::ConditionalDrop { set, attached } => {
                f.set_coeff(set, Rat::one());
                f.set_coeff(&set.with(*attached), -Rat::one());
            }
        }
        f
    }
}

/// The explicit generator list of the single-system monotonicity cone: sign
/// pairs on every subset avoiding `i`, plus all conditional-entropy drops
/// anchored at `i`. Order: sign pairs by ascending mask (`+` before `-`),
/// then drops by ascending set mask and attached system.
pub fn single_system_generator_list(
    i: usize,
    n: usize,
) -> Result<Vec<SystemGenerator>, MonoError> {
    if n == 0 || n > MAX_SYSTEMS {
        return Err(MonoError::UnsupportedSystemCount { n, min: 1, max: MAX_SYSTEMS });
    }
    if i == 0 || i > n {
        return Err(LatticeError::SystemOutOfRange { index: i, n }.into());
    }
    let mut gens = Vec::new();
    for k in SystemSet::all_nonempty(n) {
        if !k.contains(i) {
            gens.push(SystemGenerator::Plus(k));
            gens.push(SystemGenerator::Minus(k));
        }
    }
    for set in subsets_containing(i, n)? {
        for j in 1..=n {
            if !set.contains(j) {
                gens.push(SystemGenerator::ConditionalDrop { set, attached: j });
            }
        }
    }
    Ok(gens)
}

/// Generator description (`R_i`) matching [`single_system_facets`]; rays in
/// the order of [`single_system_generator_list`].
pub fn single_system_generators(i: usize, n: usize) -> Result<VRep, MonoError> {
    let gens = single_system_generator_list(i, n)?;
    let rays: Vec<QVec> = gens
        .iter()
        .map(|g| g.to_functional(n).into_coeffs())
        .collect();
    Ok(VRep { dim: (1 << n) - 1, rays, lineality: vec![] })
}

/// Exact certificate that a functional is monotonic under processing of one
/// system: `alpha = sum v * (e_I - e_{I+j}) + sum w_K * e_K` with `v >= 0`,
/// `i` in every `I`, and no `K` containing `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionCertificate {
    pub system: usize,
    pub n: usize,
    /// `(attached system j, set I, coefficient)`; coefficient is positive.
    pub conditional_drops: Vec<(usize, SystemSet, Rat)>,
    /// `(subset K, coefficient)`; unrestricted sign.
    pub free_terms: Vec<(SystemSet, Rat)>,
}

impl DecompositionCertificate {
    /// Rebuilds the functional the certificate claims to decompose.
    pub fn reconstruct(&self) -> Result<Functional, MonoError> {
        let mut acc = Functional::zero(self.n)?;
        for (j, set, c) in &self.conditional_drops {
            if c.is_negative() {
                return Err(MonoError::InvariantBreach(
                    "negative conditional-drop coefficient".into(),
                ));
            }
            let gen = SystemGenerator::ConditionalDrop { set: *set, attached: *j };
            acc = acc.add(&gen.to_functional(self.n).scaled(c))?;
        }
        for (k, c) in &self.free_terms {
            let mut term = Functional::zero(self.n)?;
            term.set_coeff(k, c.clone());
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    pub fn verify(&self, target: &Functional) -> Result<(), MonoError> {
        let rebuilt = self.reconstruct()?;
        if &rebuilt != target {
            return Err(MonoError::InvariantBreach(
                "decomposition does not reconstruct the functional".into(),
            ));
        }
        Ok(())
    }
}

impl Serialize for DecompositionCertificate {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Drop {
            attached: usize,
            set: Vec<usize>,
            coeff: String,
        }
        #[derive(Serialize)]
        struct Cert {
            system: usize,
            n: usize,
            conditional_drops: Vec<Drop>,
            free_terms: BTreeMap<String, String>,
        }
        Cert {
            system: self.system,
            n: self.n,
            conditional_drops: self
                .conditional_drops
                .iter()
                .map(|(j, set, c)| Drop {
                    attached: *j,
                    set: set.indices(),
                    coeff: format_rat(c),
                })
                .collect(),
            free_terms: self
                .free_terms
                .iter()
                .map(|(k, c)| {
                    let key = k
                        .indices()
                        .iter()
                        .map(|i| i.to_string())
                        .collect::<Vec<_>>()
                        .join(",");
                    (key, format_rat(c))
                })
                .collect(),
        }
        .serialize(s)
    }
}

/// Decomposes a monotone into the generator representation for system `i`.
/// Fails with [`MonoError::NotAMonotone`] when the precondition does not
/// hold; an infeasible solve afterwards would contradict the facet
/// characterization and is reported as an invariant breach.
pub fn decompose_monotone(
    f: &Functional,
    i: usize,
) -> Result<DecompositionCertificate, MonoError> {
    let n = f.n();
    match check_single_system(f, i)? {
        SystemVerdict::Satisfied => {}
        SystemVerdict::Violated(v) => return Err(MonoError::NotAMonotone(v)),
    }
    let gens = single_system_generator_list(i, n)?;
    let vrep = single_system_generators(i, n)?;
    let outcome = cone::solve_nonneg_combination(&vrep, f.coeffs())?;
    let coeffs = match outcome {
        CombinationOutcome::Combination(c) => c.ray_coeffs,
        CombinationOutcome::Separated { .. } => {
            return Err(MonoError::InvariantBreach(
                "facet check passed but generator solve is infeasible".into(),
            ))
        }
    };
    let mut conditional_drops = Vec::new();
    let mut free: BTreeMap<SystemSet, Rat> = BTreeMap::new();
    for (gen, c) in gens.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        match gen {
            SystemGenerator::Plus(k) => {
                *free.entry(*k).or_insert_with(Rat::zero) += &c;
            }
            SystemGenerator::Minus(k) => {
                *free.entry(*k).or_insert_with(Rat::zero) -= &c;
            }
            SystemGenerator::ConditionalDrop { set, attached } => {
                conditional_drops.push((*attached, *set, c));
            }
        }
    }
    let free_terms: Vec<(SystemSet, Rat)> =
        free.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    let cert = DecompositionCertificate { system: i, n, conditional_drops, free_terms };
    cert.verify(f)?;
    Ok(cert)
}

/// Lifts a formula to `n + 1` systems so that evaluating the lift on an
/// entropy vector gives `f(before tracing) - f(after tracing)` when system
/// `n + 1` is the auxiliary part attached to system `i`:
/// `beta = sum over I containing i of alpha_I * (e_{I + (n+1)} - e_I)`.
pub fn lift_partial_trace(f: &Functional, i: usize) -> Result<Functional, MonoError> {
    let n = f.n();
    if n + 1 > MAX_SYSTEMS {
        return Err(MonoError::UnsupportedSystemCount { n, min: 1, max: MAX_SYSTEMS - 1 });
    }
    if i == 0 || i > n {
        return Err(LatticeError::SystemOutOfRange { index: i, n }.into());
    }
    let aux = n + 1;
    let mut out = Functional::zero(aux)?;
    for (set, c) in f.terms() {
        if !set.contains(i) {
            continue;
        }
        let base = SystemSet::new(set.mask(), aux)?;
        let lifted = base.with(aux);
        let mut term = Functional::zero(aux)?;
        term.set_coeff(&lifted, c.clone());
        term.set_coeff(&base, -c.clone());
        out = out.add(&term)?;
    }
    Ok(out)
}

/// Extremal rays of the full monotonicity cone (all systems `1..=n`), as
/// canonical functionals in deterministic order.
pub fn enumerate_monotone_rays(n: usize, opts: &DdOptions) -> Result<Vec<Functional>, MonoError> {
    if n == 0 || n > 5 {
        return Err(MonoError::UnsupportedSystemCount { n, min: 1, max: 5 });
    }
    let systems: Vec<usize> = (1..=n).collect();
    let h = monotonicity_cone(&systems, n)?;
    let v = cone::dd_convert(&h, opts)?;
    if !v.lineality.is_empty() {
        return Err(MonoError::InvariantBreach(
            "monotonicity cone is expected to be pointed".into(),
        ));
    }
    v.rays
        .into_iter()
        .map(|ray| Functional::from_coeffs(n, ray).map_err(MonoError::from))
        .collect()
}

/// A permutation orbit of rays with its canonical representative: the
/// lexicographically least canonical form over all system permutations.
#[derive(Clone, Debug)]
pub struct RayOrbit {
    pub representative: Functional,
    pub members: Vec<Functional>,
}

impl RayOrbit {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

impl Serialize for RayOrbit {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Orbit<'a> {
            representative: &'a Functional,
            size: usize,
            members: &'a [Functional],
        }
        Orbit { representative: &self.representative, size: self.size(), members: &self.members }
            .serialize(s)
    }
}

/// Partitions rays into orbits under system permutations. Orbits are sorted
/// by representative, members by canonical form.
pub fn group_orbits(rays: &[Functional]) -> Result<Vec<RayOrbit>, MonoError> {
    let mut orbits: BTreeMap<QVec, Vec<Functional>> = BTreeMap::new();
    for ray in rays {
        let rep = orbit_representative(ray)?;
        orbits.entry(rep.coeffs().to_vec()).or_default().push(ray.canonical());
    }
    let mut out = Vec::new();
    for (rep_coeffs, mut members) in orbits {
        members.sort_by(|a, b| a.coeffs().cmp(b.coeffs()));
        members.dedup();
        out.push(RayOrbit {
            representative: Functional::from_coeffs(members[0].n(), rep_coeffs)?,
            members,
        });
    }
    Ok(out)
}

/// Lexicographically least canonical form over every permutation image.
pub fn orbit_representative(f: &Functional) -> Result<Functional, MonoError> {
    let mut best: Option<Functional> = None;
    for sigma in Permutation::all(f.n()) {
        let image = f.permuted(&sigma)?.canonical();
        let better = match &best {
            None => true,
            Some(b) => image.coeffs() < b.coeffs(),
        };
        if better {
            best = Some(image);
        }
    }
    Ok(best.expect("at least the identity permutation"))
}

/// Serialization helper: a list of functionals as a JSON array.
pub fn serialize_functionals<S: Serializer>(
    rays: &[Functional],
    s: S,
) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(rays.len()))?;
    for ray in rays {
        seq.serialize_element(ray)?;
    }
    seq.end()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::Membership;
    use crate::rational::{rint, zero_vec};

    fn set(indices: &[usize], n: usize) -> SystemSet {
        SystemSet::from_indices(indices, n).unwrap()
    }

    fn mutual_information() -> Functional {
        Functional::from_terms(
            2,
            [
                (set(&[1], 2), rint(1)),
                (set(&[2], 2), rint(1)),
                (set(&[1, 2], 2), rint(-1)),
            ],
        )
        .unwrap()
    }

    fn dual_total_correlation() -> Functional {
        Functional::from_terms(
            3,
            [
                (set(&[1, 2], 3), rint(1)),
                (set(&[2, 3], 3), rint(1)),
                (set(&[1, 3], 3), rint(1)),
                (set(&[1, 2, 3], 3), rint(-2)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn facet_counts_follow_lower_set_counts() {
        // (1,2): inequality alpha_1 >= 0 plus equality alpha_1 + alpha_12 = 0.
        let h = single_system_facets(1, 2).unwrap();
        assert_eq!(h.inequalities.len(), 1);
        assert_eq!(h.equalities.len(), 1);
        assert_eq!(h.inequalities[0], vec![rint(1), rint(0), rint(0)]);
        assert_eq!(h.equalities[0], vec![rint(1), rint(0), rint(1)]);

        // (1,3): 6 lower sets minus empty and full.
        let h = single_system_facets(1, 3).unwrap();
        assert_eq!(h.inequalities.len(), 4);
        assert_eq!(h.equalities.len(), 1);
        // Equality row: +1 exactly on {1},{1,2},{1,3},{1,2,3}.
        let eq = &h.equalities[0];
        for s in SystemSet::all_nonempty(3) {
            let expected = if s.contains(1) { rint(1) } else { rint(0) };
            assert_eq!(eq[s.coord()], expected, "coordinate {s}");
        }
        // The singleton lower set appears as a row with +1 on {1} only.
        let mut singleton = zero_vec(7);
        singleton[set(&[1], 3).coord()] = rint(1);
        assert!(h.inequalities.contains(&singleton));

        // (1,4): 20 lower sets minus empty and full.
        let h = single_system_facets(1, 4).unwrap();
        assert_eq!(h.inequalities.len(), 18);
        assert_eq!(h.equalities.len(), 1);
    }

    #[test]
    fn n2_cone_is_the_mutual_information_ray() {
        let h = monotonicity_cone(&[1, 2], 2).unwrap();
        let v = cone::dd_convert(&h, &DdOptions::default()).unwrap();
        assert!(v.lineality.is_empty());
        assert_eq!(v.rays, vec![mutual_information().into_coeffs()]);
    }

    #[test]
    fn single_system_cone_contains_conditional_drop() {
        // e_1 - e_12 lies in the system-1 cone for n=2.
        let h = monotonicity_cone(&[1], 2).unwrap();
        let drop = SystemGenerator::ConditionalDrop { set: set(&[1], 2), attached: 2 }
            .to_functional(2);
        assert_eq!(cone::contains(&h, drop.coeffs()).unwrap(), Membership::Satisfied);
        let mi = mutual_information();
        assert_eq!(cone::contains(&h, mi.coeffs()).unwrap(), Membership::Satisfied);
    }

    #[test]
    fn check_monotone_examples() {
        let mi = mutual_information();
        let verdicts = check_monotone(&mi, &[1, 2]).unwrap();
        assert!(verdicts.iter().all(|(_, v)| v.is_satisfied()));

        // e_2 does not involve system 1 at all.
        let e2 = Functional::from_terms(2, [(set(&[2], 2), rint(1))]).unwrap();
        let verdicts = check_monotone(&e2, &[1]).unwrap();
        assert!(verdicts[0].1.is_satisfied());

        // e_12 fails the balance equality for system 1.
        let e12 = Functional::from_terms(2, [(set(&[1, 2], 2), rint(1))]).unwrap();
        match &check_monotone(&e12, &[1]).unwrap()[0].1 {
            SystemVerdict::Violated(v) => {
                assert_eq!(v.constraint, ViolatedConstraint::Balance);
                assert_eq!(v.value, rint(1));
            }
            other => panic!("expected violation, got {other:?}"),
        }

        let j = dual_total_correlation();
        let verdicts = check_monotone(&j, &[1, 2, 3]).unwrap();
        assert!(verdicts.iter().all(|(_, v)| v.is_satisfied()));
    }

    #[test]
    fn check_monotone_is_scale_invariant() {
        let j = dual_total_correlation();
        let scaled = j.scaled(&crate::rational::rat(7, 3));
        for ((_, a), (_, b)) in check_monotone(&j, &[1, 2, 3])
            .unwrap()
            .iter()
            .zip(check_monotone(&scaled, &[1, 2, 3]).unwrap().iter())
        {
            assert_eq!(a.is_satisfied(), b.is_satisfied());
        }
    }

    #[test]
    fn generator_counts() {
        // n=2, i=1: sign pairs on {2} plus drops (I={1},j=2), (I={1,2},j none).
        let gens = single_system_generator_list(1, 2).unwrap();
        assert_eq!(gens.len(), 2 + 1);
        // n=4, i=1: 2*(2^3 - 1) sign columns + sum over I of |N \ I| drops.
        let gens = single_system_generator_list(1, 4).unwrap();
        assert_eq!(gens.len(), 14 + 12);
    }

    #[test]
    fn theorem_facets_and_generators_form_a_dd_pair() {
        let opts = DdOptions::default();
        for n in 1..=3 {
            for i in 1..=n {
                let h = single_system_facets(i, n).unwrap();
                let r = single_system_generators(i, n).unwrap();
                let report = cone::verify_dd_pair(&h, &r, &opts).unwrap();
                assert!(report.passed(), "n={n} i={i}: {report}");
            }
        }
    }

    #[test]
    fn decompose_mutual_information() {
        let mi = mutual_information();
        let cert = decompose_monotone(&mi, 1).unwrap();
        cert.verify(&mi).unwrap();
        // I(1;2) = (e_1 - e_12) + e_2.
        assert_eq!(cert.conditional_drops, vec![(2, set(&[1], 2), rint(1))]);
        assert_eq!(cert.free_terms, vec![(set(&[2], 2), rint(1))]);
    }

    #[test]
    fn decompose_rejects_non_monotones() {
        let e12 = Functional::from_terms(2, [(set(&[1, 2], 2), rint(1))]).unwrap();
        match decompose_monotone(&e12, 1) {
            Err(MonoError::NotAMonotone(v)) => {
                assert_eq!(v.constraint, ViolatedConstraint::Balance)
            }
            other => panic!("expected NotAMonotone, got {other:?}"),
        }
    }

    #[test]
    fn lift_partial_trace_of_mutual_information() {
        // I(1;2) lifts to +1 on {1,aux}, -1 on {1}, -1 on {1,2,aux}, +1 on
        // {1,2}: the conditional mutual information I(aux;2|1).
        let mi = mutual_information();
        let lifted = lift_partial_trace(&mi, 1).unwrap();
        assert_eq!(lifted.n(), 3);
        let expected = Functional::from_terms(
            3,
            [
                (set(&[1, 3], 3), rint(1)),
                (set(&[1], 3), rint(-1)),
                (set(&[1, 2, 3], 3), rint(-1)),
                (set(&[1, 2], 3), rint(1)),
            ],
        )
        .unwrap();
        assert_eq!(lifted, expected);
    }

    #[test]
    fn lift_partial_trace_edge_cases() {
        // No coordinate of e_2 contains system 1: the lift is zero.
        let e2 = Functional::from_terms(2, [(set(&[2], 2), rint(1))]).unwrap();
        assert!(lift_partial_trace(&e2, 1).unwrap().is_zero());

        // Single system: e_1 lifts to e_{1,aux} - e_1.
        let e1 = Functional::from_terms(1, [(set(&[1], 1), rint(1))]).unwrap();
        let lifted = lift_partial_trace(&e1, 1).unwrap();
        let expected = Functional::from_terms(
            2,
            [(set(&[1, 2], 2), rint(1)), (set(&[1], 2), rint(-1))],
        )
        .unwrap();
        assert_eq!(lifted, expected);
    }

    #[test]
    fn n1_cone_is_zero() {
        let h = monotonicity_cone(&[1], 1).unwrap();
        let v = cone::dd_convert(&h, &DdOptions::default()).unwrap();
        assert!(v.is_zero_cone());
        assert!(enumerate_monotone_rays(1, &DdOptions::default()).unwrap().is_empty());
    }

    #[test]
    fn n3_rays_include_j_and_the_mutual_information_orbit() {
        let rays = enumerate_monotone_rays(3, &DdOptions::default()).unwrap();
        let j = dual_total_correlation();
        assert!(rays.contains(&j), "J should be an extremal ray");
        let mi12 = mutual_information().extended(3).unwrap();
        assert!(rays.contains(&mi12));
        // Every ray is balanced and extremal.
        let h = monotonicity_cone(&[1, 2, 3], 3).unwrap();
        for ray in &rays {
            assert!(ray.is_balanced());
            assert!(cone::is_extremal(&h, ray.coeffs()).unwrap());
        }

        let orbits = group_orbits(&rays).unwrap();
        let sizes: Vec<usize> = orbits.iter().map(|o| o.size()).collect();
        assert_eq!(sizes.iter().sum::<usize>(), rays.len());
        // The mutual-information orbit has 3 members; J is a fixed point.
        assert!(orbits.iter().any(|o| o.size() == 3 && o.members.contains(&mi12)));
        assert!(orbits.iter().any(|o| o.members == vec![j.clone()]));
    }

    #[test]
    fn orbit_representative_is_permutation_invariant() {
        let f = Functional::from_terms(
            3,
            [(set(&[1], 3), rint(1)), (set(&[1, 2], 3), rint(-1))],
        )
        .unwrap();
        let rep = orbit_representative(&f).unwrap();
        for sigma in Permutation::all(3) {
            let image = f.permuted(&sigma).unwrap();
            assert_eq!(orbit_representative(&image).unwrap(), rep);
        }
    }
}
