//! Classical probability witnesses: joint distributions, exact Shannon
//! entropy vectors, facet-tightness witnesses built from replicated XOR
//! secret sharing, and self-verifying violation certificates.
//!
//! Entropies are exact rationals whenever every marginal probability is a
//! power of 1/2 (true for every built-in witness); otherwise they fall back
//! to fixed-point dyadic approximations with an explicit precision and the
//! exactness flag cleared.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::functional::{Functional, FunctionalError};
use crate::lattice::{subsets_containing, LatticeError, LowerSetFamily, SystemSet};
use crate::monotonicity::{self, MonoError, ViolatedConstraint};
use crate::rational::{format_rat, parse_rat, QVec, Rat};

/// Default fractional bits for approximate entropies.
pub const DEFAULT_PRECISION_BITS: u32 = 64;

#[derive(Debug, Error)]
pub enum WitnessError {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("family {family} cannot witness a facet: {reason}")]
    NotAFacetFamily { family: String, reason: String },
    #[error("certificate failed re-verification: {0}")]
    CertificateInvalid(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Functional(#[from] FunctionalError),
    #[error(transparent)]
    Mono(#[from] MonoError),
}

/// A finite-support distribution over labelled discrete variables. Labels
/// are system indices (`1..=n`, plus `n+1` for an attached auxiliary part).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointDistribution {
    variables: Vec<usize>,
    cardinalities: Vec<usize>,
    atoms: Vec<(Vec<usize>, Rat)>,
}

impl JointDistribution {
    pub fn new(
        variables: Vec<usize>,
        cardinalities: Vec<usize>,
        atoms: Vec<(Vec<usize>, Rat)>,
    ) -> Result<Self, WitnessError> {
        let d = JointDistribution { variables, cardinalities, atoms };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<(), WitnessError> {
        let bad = |reason: &str| WitnessError::InvalidDistribution(reason.to_string());
        if self.variables.len() != self.cardinalities.len() {
            return Err(bad("variables and cardinalities differ in length"));
        }
        let mut labels = self.variables.clone();
        labels.sort_unstable();
        labels.dedup();
        if labels.len() != self.variables.len() {
            return Err(bad("duplicate variable labels"));
        }
        if labels != (1..=self.variables.len()).collect::<Vec<_>>() {
            return Err(bad("variable labels must form a contiguous range 1..=m"));
        }
        if self.cardinalities.iter().any(|&c| c == 0) {
            return Err(bad("zero cardinality"));
        }
        if self.atoms.is_empty() {
            return Err(bad("no atoms"));
        }
        let mut total = Rat::zero();
        let mut seen = std::collections::HashSet::new();
        for (outcome, p) in &self.atoms {
            if outcome.len() != self.variables.len() {
                return Err(bad("outcome arity mismatch"));
            }
            for (x, &c) in outcome.iter().zip(&self.cardinalities) {
                if *x >= c {
                    return Err(bad("outcome exceeds cardinality"));
                }
            }
            if !p.is_positive() {
                return Err(bad("probabilities must be positive"));
            }
            if !seen.insert(outcome.clone()) {
                return Err(bad("duplicate outcome"));
            }
            total += p;
        }
        if !total.is_one() {
            return Err(bad("probabilities do not sum to 1"));
        }
        Ok(())
    }

    pub fn variables(&self) -> &[usize] {
        &self.variables
    }

    pub fn cardinalities(&self) -> &[usize] {
        &self.cardinalities
    }

    pub fn atoms(&self) -> &[(Vec<usize>, Rat)] {
        &self.atoms
    }

    pub fn variable_count(&self) -> usize {
        self.variables.len()
    }

    /// Independent product of uniform variables with the given cardinalities
    /// (labels `1..=m`); cardinality 1 makes a variable constant.
    pub fn product_of_uniform(cardinalities: &[usize]) -> Result<Self, WitnessError> {
        let m = cardinalities.len();
        let total: usize = cardinalities.iter().product();
        if total == 0 {
            return Err(WitnessError::InvalidDistribution("zero cardinality".into()));
        }
        let p = Rat::new(BigInt::one(), BigInt::from(total));
        let mut atoms = Vec::with_capacity(total);
        let mut outcome = vec![0usize; m];
        loop {
            atoms.push((outcome.clone(), p.clone()));
            let mut k = m;
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                outcome[k] += 1;
                if outcome[k] < cardinalities[k] {
                    break;
                }
                outcome[k] = 0;
            }
            if outcome.iter().all(|&x| x == 0) {
                break;
            }
        }
        JointDistribution::new((1..=m).collect(), cardinalities.to_vec(), atoms)
    }

    /// Position of the variable labelled `label`.
    fn position(&self, label: usize) -> Option<usize> {
        self.variables.iter().position(|&v| v == label)
    }

    /// Marginal probabilities of the variables in `labels`.
    fn marginal(&self, labels: &[usize]) -> Vec<Rat> {
        let positions: Vec<usize> =
            labels.iter().map(|&l| self.position(l).expect("validated label")).collect();
        let mut acc: BTreeMap<Vec<usize>, Rat> = BTreeMap::new();
        for (outcome, p) in &self.atoms {
            let key: Vec<usize> = positions.iter().map(|&pos| outcome[pos]).collect();
            *acc.entry(key).or_insert_with(Rat::zero) += p;
        }
        acc.into_values().collect()
    }
}

#[derive(Serialize, Deserialize)]
struct AtomJson {
    outcome: Vec<usize>,
    p: String,
}

#[derive(Serialize, Deserialize)]
struct JointDistributionJson {
    variables: Vec<usize>,
    cardinalities: Vec<usize>,
    atoms: Vec<AtomJson>,
}

impl Serialize for JointDistribution {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        JointDistributionJson {
            variables: self.variables.clone(),
            cardinalities: self.cardinalities.clone(),
            atoms: self
                .atoms
                .iter()
                .map(|(outcome, p)| AtomJson { outcome: outcome.clone(), p: format_rat(p) })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for JointDistribution {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = JointDistributionJson::deserialize(d)?;
        let atoms = raw
            .atoms
            .into_iter()
            .map(|a| Ok((a.outcome, parse_rat(&a.p).map_err(D::Error::custom)?)))
            .collect::<Result<Vec<_>, D::Error>>()?;
        JointDistribution::new(raw.variables, raw.cardinalities, atoms).map_err(D::Error::custom)
    }
}

/// Entropies of every nonempty subset of variables, in bits. `exact` is set
/// only when every contributing marginal probability is a power of 1/2;
/// otherwise the values carry `precision_bits` fractional bits of accuracy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntropyVector {
    pub n: usize,
    pub values: QVec,
    pub exact: bool,
    pub precision_bits: Option<u32>,
}

impl EntropyVector {
    pub fn value(&self, s: &SystemSet) -> &Rat {
        &self.values[s.coord()]
    }
}

impl Serialize for EntropyVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Json {
            n: usize,
            exact: bool,
            #[serde(skip_serializing_if = "Option::is_none")]
            precision_bits: Option<u32>,
            values: BTreeMap<String, String>,
        }
        let values = SystemSet::all_nonempty(self.n)
            .map(|set| {
                let key = set
                    .indices()
                    .iter()
                    .map(|i| i.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                (key, format_rat(&self.values[set.coord()]))
            })
            .collect();
        Json { n: self.n, exact: self.exact, precision_bits: self.precision_bits, values }
            .serialize(s)
    }
}

/// `floor(log2(q))` for a positive rational.
fn floor_log2(q: &Rat) -> i64 {
    let num = q.numer();
    let den = q.denom();
    let mut e = num.bits() as i64 - den.bits() as i64;
    // Adjust so that den * 2^e <= num < den * 2^(e+1).
    let scaled = |e: i64| -> std::cmp::Ordering {
        // compare num against den * 2^e
        if e >= 0 {
            num.cmp(&(den << e as u32))
        } else {
            (num << (-e) as u32).cmp(den)
        }
    };
    while scaled(e) == std::cmp::Ordering::Less {
        e -= 1;
    }
    while scaled(e + 1) != std::cmp::Ordering::Less {
        e += 1;
    }
    e
}

/// Fixed-point base-2 logarithm of a positive rational with `frac_bits`
/// fractional bits; the absolute error is below `2^(1 - frac_bits)`.
pub fn log2_fixed(q: &Rat, frac_bits: u32) -> Rat {
    assert!(q.is_positive(), "log2 of a nonpositive rational");
    let e = floor_log2(q);
    // Mantissa x = q / 2^e in [1, 2), held as floor(x * 2^p) with guard bits.
    let p = frac_bits + 16;
    let (num, den) = (q.numer().clone(), q.denom().clone());
    let (shift_num, shift_den) = if e >= 0 { (0u32, e as u32) } else { ((-e) as u32, 0u32) };
    let mut x: BigInt = ((num << (p + shift_num)) / (den << shift_den)).max(BigInt::one() << p);
    let two_p = BigInt::one() << (p + 1);
    let mut frac = BigInt::zero();
    for _ in 0..frac_bits {
        x = (&x * &x) >> p;
        frac <<= 1;
        if x >= two_p {
            x >>= 1;
            frac += 1;
        }
    }
    Rat::from_integer(BigInt::from(e)) + Rat::new(frac, BigInt::one() << frac_bits)
}

/// `log2(1/p)` exactly when `p` is a power of 1/2.
fn dyadic_neg_log2(p: &Rat) -> Option<u64> {
    if !p.numer().is_one() {
        return None;
    }
    let den = p.denom();
    let bits = den.bits();
    if den == &(BigInt::one() << (bits - 1)) {
        Some(bits - 1)
    } else {
        None
    }
}

fn marginal_entropy(probs: &[Rat], precision_bits: u32) -> (Rat, bool) {
    let mut exact_sum = Rat::zero();
    let mut exact = true;
    for p in probs {
        match dyadic_neg_log2(p) {
            Some(k) => exact_sum += p * Rat::from_integer(BigInt::from(k)),
            None => {
                exact = false;
                break;
            }
        }
    }
    if exact {
        return (exact_sum, true);
    }
    let mut approx = Rat::zero();
    for p in probs {
        if p.is_one() {
            continue;
        }
        approx += p * -log2_fixed(p, precision_bits);
    }
    (approx, false)
}

/// Shannon entropy of every nonempty subset of variables, at the default
/// precision for any non-dyadic marginals.
pub fn shannon_entropy_vector(d: &JointDistribution) -> Result<EntropyVector, WitnessError> {
    shannon_entropy_vector_with_precision(d, DEFAULT_PRECISION_BITS)
}

pub fn shannon_entropy_vector_with_precision(
    d: &JointDistribution,
    precision_bits: u32,
) -> Result<EntropyVector, WitnessError> {
    d.validate()?;
    let m = d.variable_count();
    let mut values = vec![Rat::zero(); (1 << m) - 1];
    let mut all_exact = true;
    for set in SystemSet::all_nonempty(m) {
        let probs = d.marginal(&set.indices());
        let (h, exact) = marginal_entropy(&probs, precision_bits);
        all_exact &= exact;
        values[set.coord()] = h;
    }
    Ok(EntropyVector {
        n: m,
        values,
        exact: all_exact,
        precision_bits: if all_exact { None } else { Some(precision_bits) },
    })
}

/// Exact dot product `f . s`; the result inherits the vector's exactness.
pub fn evaluate(f: &Functional, s: &EntropyVector) -> Result<(Rat, bool), WitnessError> {
    if f.n() != s.n {
        return Err(WitnessError::DimensionMismatch { expected: f.n(), got: s.n });
    }
    Ok((crate::rational::dot(f.coeffs(), &s.values), s.exact))
}

/// Witness distribution for the facet indexed by a nontrivial proper lower
/// set `L` of `P_i(N)`: variables `{1..n}` plus the auxiliary `n+1`, with
/// `X_i` constant, `X_{n+1}` a uniform secret bit, and the remaining
/// variables holding replicated XOR shares for the access structure whose
/// qualified sets are `{J - i : J outside L}`. The resulting conditional
/// entropies are `H(aux | X_I) = 1` exactly for `I` in `L` and `0` for the
/// other members of `P_i(N)`.
pub fn facet_witness_distribution(
    family: &LowerSetFamily,
) -> Result<JointDistribution, WitnessError> {
    let not_witnessable = |reason: &str| WitnessError::NotAFacetFamily {
        family: family.to_string(),
        reason: reason.to_string(),
    };
    if !family.is_lower_set() {
        return Err(not_witnessable("not a lower set"));
    }
    if family.is_empty() || family.is_full() {
        return Err(not_witnessable("empty or full families index no facet"));
    }
    let i = family.anchor();
    let n = family.n();
    build_share_distribution(i, n, &minimal_qualified_sets(family)?)
}

/// Inclusion-minimal elements of `{J - anchor : J in P_i(N), J not in L}`,
/// sorted by mask.
fn minimal_qualified_sets(family: &LowerSetFamily) -> Result<Vec<SystemSet>, WitnessError> {
    let i = family.anchor();
    let n = family.n();
    let qualified: Vec<SystemSet> = subsets_containing(i, n)?
        .into_iter()
        .filter(|j| !family.contains(j))
        .map(|j| j.without(i))
        .collect();
    let minimal: Vec<SystemSet> = qualified
        .iter()
        .filter(|m| !qualified.iter().any(|o| o.mask() != m.mask() && o.is_subset_of(m)))
        .copied()
        .collect();
    Ok(minimal)
}

/// Distribution over `{1..n, n+1}` realizing the replicated XOR sharing of a
/// uniform secret bit (variable `n+1`) across the given minimal qualified
/// sets; variable `i` and variables in no qualified set are constants.
fn build_share_distribution(
    i: usize,
    n: usize,
    minimal: &[SystemSet],
) -> Result<JointDistribution, WitnessError> {
    let aux = n + 1;
    // Share slots per variable: (row, position-in-row) pairs in row order.
    let mut slots_per_var: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n + 2];
    for (row, m) in minimal.iter().enumerate() {
        for (pos, v) in m.indices().into_iter().enumerate() {
            slots_per_var[v].push((row, pos));
        }
    }
    // Free bits: the secret plus |M| - 1 fresh bits per row.
    let fresh_per_row: Vec<usize> = minimal.iter().map(|m| m.len() - 1).collect();
    let free_bits: usize = 1 + fresh_per_row.iter().sum::<usize>();

    let mut cardinalities = vec![0usize; n + 1];
    for v in 1..=n {
        cardinalities[v - 1] = if v == i { 1 } else { 1 << slots_per_var[v].len() };
    }
    cardinalities[aux - 1] = 2;

    let prob = Rat::new(BigInt::one(), BigInt::one() << free_bits);
    let mut atoms = Vec::with_capacity(1 << free_bits);
    for assignment in 0u64..(1 << free_bits) {
        let secret = (assignment & 1) as usize;
        // Shares per row: fresh bits for all but the last position, which
        // closes the XOR to the secret.
        let mut shares: Vec<Vec<usize>> = Vec::with_capacity(minimal.len());
        let mut bit_cursor = 1u32;
        for (row, m) in minimal.iter().enumerate() {
            let len = m.len();
            let mut row_shares = Vec::with_capacity(len);
            let mut acc = secret;
            for _ in 0..fresh_per_row[row] {
                let b = ((assignment >> bit_cursor) & 1) as usize;
                bit_cursor += 1;
                row_shares.push(b);
                acc ^= b;
            }
            row_shares.push(acc);
            shares.push(row_shares);
        }
        let outcome: Vec<usize> = (1..=aux)
            .map(|v| {
                if v == aux {
                    secret
                } else if v == i {
                    0
                } else {
                    let mut value = 0usize;
                    for (t, &(row, pos)) in slots_per_var[v].iter().enumerate() {
                        value |= shares[row][pos] << t;
                    }
                    value
                }
            })
            .collect();
        atoms.push((outcome, prob.clone()));
    }
    atoms.sort_by(|a, b| a.0.cmp(&b.0));
    JointDistribution::new((1..=aux).collect(), cardinalities, atoms)
}

/// The pair of product distributions exhibiting the balance constraint:
/// identical marginals away from system `i`, with `H(X_i) = 0` in the first
/// and `H(X_i) = 1` in the second. For any formula, `f(high) - f(low)`
/// equals the balance defect of system `i`.
pub fn balance_witness(
    i: usize,
    n: usize,
) -> Result<(JointDistribution, JointDistribution), WitnessError> {
    if i == 0 || i > n {
        return Err(WitnessError::Lattice(LatticeError::SystemOutOfRange { index: i, n }));
    }
    let mut low_cards = vec![2usize; n];
    low_cards[i - 1] = 1;
    let low = JointDistribution::product_of_uniform(&low_cards)?;
    let high = JointDistribution::product_of_uniform(&vec![2usize; n])?;
    Ok((low, high))
}

/// The local operation a violation certificate exhibits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalOperation {
    /// Tracing out the auxiliary part attached to system `i` (merged state
    /// is "before", traced state is "after"); the certificate is valid iff
    /// the formula increases, i.e. the lifted evaluation is negative.
    TraceOutAuxiliary,
    /// Attaching an independent uniform auxiliary to system `i` (traced
    /// state is "before" in time); valid iff the formula increases in that
    /// direction and the auxiliary is independent of everything else.
    AttachUniformAuxiliary,
}

/// Everything needed to re-verify a monotonicity violation from raw data:
/// the witness distribution over `n+1` variables, the entropy vectors with
/// the auxiliary merged into system `i` ("before") and removed ("after"),
/// and both formula values.
#[derive(Clone, Debug, Serialize)]
pub struct ViolationCertificate {
    pub functional: Functional,
    pub system: usize,
    pub operation: LocalOperation,
    pub violated_lower_set: Option<Vec<Vec<usize>>>,
    pub balance_defect: Option<String>,
    pub witness: JointDistribution,
    pub before: EntropyVector,
    pub after: EntropyVector,
    pub f_before: String,
    pub f_after: String,
}

impl ViolationCertificate {
    /// Recomputes every entropy and formula value from the atoms alone and
    /// checks the direction of the violation.
    pub fn verify(&self) -> Result<(), WitnessError> {
        let invalid = |reason: &str| WitnessError::CertificateInvalid(reason.to_string());
        self.witness.validate()?;
        let n = self.functional.n();
        if self.witness.variable_count() != n + 1 {
            return Err(invalid("witness must have one auxiliary variable"));
        }
        let full = shannon_entropy_vector(&self.witness)?;
        if !full.exact {
            return Err(invalid("witness entropies are not exact"));
        }
        let before = merge_auxiliary(&full, self.system)?;
        let after = drop_auxiliary(&full)?;
        if before.values != self.before.values || after.values != self.after.values {
            return Err(invalid("recorded entropy vectors do not match the distribution"));
        }
        let (f_before, _) = evaluate(&self.functional, &before)?;
        let (f_after, _) = evaluate(&self.functional, &after)?;
        if format_rat(&f_before) != self.f_before || format_rat(&f_after) != self.f_after {
            return Err(invalid("recorded formula values do not match"));
        }
        match self.operation {
            LocalOperation::TraceOutAuxiliary => {
                // Tracing maps before -> after; the formula must increase.
                if f_after <= f_before {
                    return Err(invalid("tracing the auxiliary does not increase the formula"));
                }
            }
            LocalOperation::AttachUniformAuxiliary => {
                if f_before <= f_after {
                    return Err(invalid("attaching the auxiliary does not increase the formula"));
                }
                // The attach map is a valid local operation only when the
                // auxiliary is independent of all other variables.
                let aux = SystemSet::singleton(n + 1, n + 1)?;
                let rest = SystemSet::full(n + 1)?.without(n + 1);
                let whole = SystemSet::full(n + 1)?;
                if full.value(&whole) != &(full.value(&aux) + full.value(&rest)) {
                    return Err(invalid("auxiliary is not independent of the other variables"));
                }
                if !full.value(&aux).is_positive() {
                    return Err(invalid("auxiliary carries no entropy"));
                }
            }
        }
        Ok(())
    }
}

/// Entropy vector over `n` systems with the auxiliary `n+1` merged into
/// system `i`: coordinate `I` reads `H(I + aux)` when `i` is in `I`.
pub fn merge_auxiliary(
    full: &EntropyVector,
    system: usize,
) -> Result<EntropyVector, WitnessError> {
    let n = full.n.checked_sub(1).filter(|&n| n >= 1).ok_or(
        WitnessError::DimensionMismatch { expected: 2, got: full.n },
    )?;
    let aux = full.n;
    let mut values = vec![Rat::zero(); (1 << n) - 1];
    for set in SystemSet::all_nonempty(n) {
        let wide = SystemSet::new(set.mask(), aux)?;
        let key = if set.contains(system) { wide.with(aux) } else { wide };
        values[set.coord()] = full.value(&key).clone();
    }
    Ok(EntropyVector { n, values, exact: full.exact, precision_bits: full.precision_bits })
}

/// Entropy vector over `n` systems with the auxiliary removed.
pub fn drop_auxiliary(full: &EntropyVector) -> Result<EntropyVector, WitnessError> {
    let n = full.n.checked_sub(1).filter(|&n| n >= 1).ok_or(
        WitnessError::DimensionMismatch { expected: 2, got: full.n },
    )?;
    let mut values = vec![Rat::zero(); (1 << n) - 1];
    for set in SystemSet::all_nonempty(n) {
        let wide = SystemSet::new(set.mask(), full.n)?;
        values[set.coord()] = full.value(&wide).clone();
    }
    Ok(EntropyVector { n, values, exact: full.exact, precision_bits: full.precision_bits })
}

/// Builds a verified violation certificate for the first system in `systems`
/// whose facet check fails, or `None` when the formula is monotonic for all
/// of them. Lower-set violations use the secret-sharing facet witness; pure
/// balance violations use the product ("balance bump") witness, traced out
/// or attached depending on the defect's sign.
pub fn violation_certificate(
    f: &Functional,
    systems: &[usize],
) -> Result<Option<ViolationCertificate>, WitnessError> {
    let verdicts = monotonicity::check_monotone(f, systems)?;
    let Some((system, violation)) = verdicts.into_iter().find_map(|(i, v)| match v {
        monotonicity::SystemVerdict::Satisfied => None,
        monotonicity::SystemVerdict::Violated(v) => Some((i, v)),
    }) else {
        return Ok(None);
    };

    let n = f.n();
    let (witness, operation, lower_set, defect) = match &violation.constraint {
        ViolatedConstraint::LowerSet(family) => (
            facet_witness_distribution(family)?,
            LocalOperation::TraceOutAuxiliary,
            Some(family.members().iter().map(|s| s.indices()).collect()),
            None,
        ),
        ViolatedConstraint::Balance => {
            // X_i constant, auxiliary a uniform bit, everything independent;
            // the lifted evaluation is exactly the balance defect.
            let mut cards = vec![2usize; n + 1];
            cards[system - 1] = 1;
            let witness = JointDistribution::product_of_uniform(&cards)?;
            let op = if violation.value.is_negative() {
                LocalOperation::TraceOutAuxiliary
            } else {
                LocalOperation::AttachUniformAuxiliary
            };
            (witness, op, None, Some(format_rat(&violation.value)))
        }
    };

    let full = shannon_entropy_vector(&witness)?;
    let before = merge_auxiliary(&full, system)?;
    let after = drop_auxiliary(&full)?;
    let (f_before, _) = evaluate(f, &before)?;
    let (f_after, _) = evaluate(f, &after)?;
    let cert = ViolationCertificate {
        functional: f.clone(),
        system,
        operation,
        violated_lower_set: lower_set,
        balance_defect: defect,
        witness,
        before,
        after,
        f_before: format_rat(&f_before),
        f_after: format_rat(&f_after),
    };
    cert.verify()?;
    Ok(Some(cert))
}
