//! Linear entropic formulas: one exact-rational coefficient per nonempty
//! subset of the systems, in canonical coordinate order.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::lattice::{LatticeError, Permutation, SystemSet, MAX_SYSTEMS};
use crate::rational::{canonical_form, format_rat, is_zero_vec, parse_rat, QVec, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FunctionalError {
    #[error("coefficient vector has length {got}, expected {expected} for n={n}")]
    WrongLength { got: usize, expected: usize, n: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("invalid subset key {key:?}: {reason}")]
    BadSubsetKey { key: String, reason: String },
    #[error("dimension mismatch: functional over n={left} vs n={right}")]
    DimensionMismatch { left: usize, right: usize },
}

/// A linear formula on entropy vectors, `f(S) = sum_I alpha_I S(I)` over the
/// nonempty subsets `I` of `{1..n}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Functional {
    n: usize,
    coeffs: QVec,
}

impl Functional {
    pub fn zero(n: usize) -> Result<Self, FunctionalError> {
        if n == 0 || n > MAX_SYSTEMS {
            return Err(LatticeError::SystemCountOutOfRange { n, max: MAX_SYSTEMS }.into());
        }
        Ok(Functional { n, coeffs: vec![Rat::zero(); (1usize << n) - 1] })
    }

    pub fn from_coeffs(n: usize, coeffs: QVec) -> Result<Self, FunctionalError> {
        if n == 0 || n > MAX_SYSTEMS {
            return Err(LatticeError::SystemCountOutOfRange { n, max: MAX_SYSTEMS }.into());
        }
        let expected = (1usize << n) - 1;
        if coeffs.len() != expected {
            return Err(FunctionalError::WrongLength { got: coeffs.len(), expected, n });
        }
        Ok(Functional { n, coeffs })
    }

    /// Builds from (subset, coefficient) pairs; omitted subsets are zero and
    /// repeated subsets accumulate.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self, FunctionalError>
    where
        I: IntoIterator<Item = (SystemSet, Rat)>,
    {
        let mut f = Functional::zero(n)?;
        for (s, c) in terms {
            if s.is_empty() {
                continue;
            }
            if s.n() != n {
                return Err(FunctionalError::DimensionMismatch { left: n, right: s.n() });
            }
            f.coeffs[s.coord()] += c;
        }
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> QVec {
        self.coeffs
    }

    pub fn coeff(&self, s: &SystemSet) -> &Rat {
        &self.coeffs[s.coord()]
    }

    pub fn set_coeff(&mut self, s: &SystemSet, c: Rat) {
        self.coeffs[s.coord()] = c;
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.coeffs)
    }

    /// Nonzero terms in coordinate order.
    pub fn terms(&self) -> impl Iterator<Item = (SystemSet, &Rat)> {
        SystemSet::all_nonempty(self.n)
            .zip(self.coeffs.iter())
            .filter(|(_, c)| !c.is_zero())
    }

    /// Ray identity form: scaled by the positive rational that makes all
    /// entries coprime integers.
    pub fn canonical(&self) -> Functional {
        Functional { n: self.n, coeffs: canonical_form(&self.coeffs) }
    }

    /// Coefficient of subset `sigma(I)` in the output equals the coefficient
    /// of `I` in the input.
    pub fn permuted(&self, sigma: &Permutation) -> Result<Functional, FunctionalError> {
        if sigma.n() != self.n {
            return Err(FunctionalError::DimensionMismatch { left: self.n, right: sigma.n() });
        }
        let mut out = Functional::zero(self.n)?;
        for (s, c) in self.terms() {
            let img = s.permuted(sigma);
            out.coeffs[img.coord()] = c.clone();
        }
        Ok(out)
    }

    /// Per-system coefficient sums: component `i` is `sum over I containing i`
    /// of `alpha_I`. The formula is balanced iff every component vanishes.
    pub fn balance_defect(&self) -> QVec {
        (1..=self.n)
            .map(|i| {
                let mut acc = Rat::zero();
                for (s, c) in SystemSet::all_nonempty(self.n).zip(self.coeffs.iter()) {
                    if s.contains(i) && !c.is_zero() {
                        acc += c;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_balanced(&self) -> bool {
        self.balance_defect().iter().all(Rat::is_zero)
    }

    pub fn add(&self, other: &Functional) -> Result<Functional, FunctionalError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Functional) -> Result<Functional, FunctionalError> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scaled(&self, c: &Rat) -> Functional {
        Functional { n: self.n, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    fn zip_with(
        &self,
        other: &Functional,
        op: impl Fn(&Rat, &Rat) -> Rat,
    ) -> Result<Functional, FunctionalError> {
        if self.n != other.n {
            return Err(FunctionalError::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(Functional {
            n: self.n,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| op(a, b)).collect(),
        })
    }

    /// Re-homes the formula on a larger system count, keeping coefficients on
    /// the same subsets.
    pub fn extended(&self, n: usize) -> Result<Functional, FunctionalError> {
        if n < self.n {
            return Err(FunctionalError::DimensionMismatch { left: self.n, right: n });
        }
        let mut out = Functional::zero(n)?;
        for (s, c) in self.terms() {
            let lifted = SystemSet::new(s.mask(), n)?;
            out.coeffs[lifted.coord()] = c.clone();
        }
        Ok(out)
    }
}

impl fmt::Debug for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Functional(n={}, ", self.n)?;
        let mut first = true;
        for (s, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{}*S{}", format_rat(c), s)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

fn subset_key(s: &SystemSet) -> String {
    s.indices().iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_subset_key(key: &str, n: usize) -> Result<SystemSet, FunctionalError> {
    let mut indices = Vec::new();
    for part in key.split(',') {
        let idx: usize = part.trim().parse().map_err(|_| FunctionalError::BadSubsetKey {
            key: key.to_string(),
            reason: format!("{part:?} is not a system index"),
        })?;
        indices.push(idx);
    }
    if indices.is_empty() {
        return Err(FunctionalError::BadSubsetKey {
            key: key.to_string(),
            reason: "empty subset".to_string(),
        });
    }
    Ok(SystemSet::from_indices(&indices, n)?)
}

/// JSON shape: `{"n": 4, "coeffs": {"1,2": "1", "1,2,3": "-1"}}`; omitted
/// subsets mean zero, values are exact rational strings.
#[derive(Serialize, Deserialize)]
struct FunctionalJson {
    n: usize,
    coeffs: BTreeMap<String, String>,
}

impl Serialize for Functional {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let coeffs = self
            .terms()
            .map(|(s, c)| (subset_key(&s), format_rat(c)))
            .collect();
        FunctionalJson { n: self.n, coeffs }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Functional {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = FunctionalJson::deserialize(deserializer)?;
        let mut f = Functional::zero(raw.n).map_err(D::Error::custom)?;
        for (key, value) in raw.coeffs {
            let s = parse_subset_key(&key, raw.n).map_err(D::Error::custom)?;
            let c = parse_rat(&value).map_err(D::Error::custom)?;
            f.set_coeff(&s, c);
        }
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rint};

    fn set(indices: &[usize], n: usize) -> SystemSet {
        SystemSet::from_indices(indices, n).unwrap()
    }

    fn mutual_information_12(n: usize) -> Functional {
        Functional::from_terms(
            n,
            [
                (set(&[1], n), rint(1)),
                (set(&[2], n), rint(1)),
                (set(&[1, 2], n), rint(-1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn coordinate_order_is_mask_order() {
        let f = mutual_information_12(2);
        assert_eq!(f.coeffs(), &[rint(1), rint(1), rint(-1)]);
        assert_eq!(f.coeff(&set(&[1, 2], 2)), &rint(-1));
    }

    #[test]
    fn permute_fixes_mutual_information() {
        let f = mutual_information_12(2);
        let swapped = f.permuted(&Permutation::swap(2, 1, 2).unwrap()).unwrap();
        assert_eq!(swapped, f);
        let id = f.permuted(&Permutation::identity(2)).unwrap();
        assert_eq!(id, f);
    }

    #[test]
    fn permute_relabels_u_pattern() {
        // S(12)+S(34)+S(13)-S(123)-S(134) relabeled by 1<->3, 2<->4 becomes
        // S(34)+S(12)+S(13)-S(134)-S(123): the same functional.
        let n = 4;
        let u = Functional::from_terms(
            n,
            [
                (set(&[1, 2], n), rint(1)),
                (set(&[3, 4], n), rint(1)),
                (set(&[1, 3], n), rint(1)),
                (set(&[1, 2, 3], n), rint(-1)),
                (set(&[1, 3, 4], n), rint(-1)),
            ],
        )
        .unwrap();
        let sigma = Permutation::swap(4, 1, 3)
            .unwrap()
            .compose(&Permutation::swap(4, 2, 4).unwrap());
        let image = u.permuted(&sigma).unwrap();
        assert_eq!(image, u);

        // A transposition that genuinely moves it: 1 <-> 2.
        let tau = Permutation::swap(4, 1, 2).unwrap();
        let moved = u.permuted(&tau).unwrap();
        assert_eq!(moved.coeff(&set(&[2, 3], 4)), &rint(1));
        assert_ne!(moved, u);
    }

    #[test]
    fn permute_is_group_action() {
        let f = Functional::from_terms(
            3,
            [
                (set(&[1], 3), rint(2)),
                (set(&[2, 3], 3), rat(1, 2)),
                (set(&[1, 2, 3], 3), rint(-1)),
            ],
        )
        .unwrap();
        let sigma = Permutation::new(vec![2, 3, 1]).unwrap();
        let tau = Permutation::swap(3, 1, 3).unwrap();
        let lhs = f.permuted(&sigma).unwrap().permuted(&tau).unwrap();
        let rhs = f.permuted(&tau.compose(&sigma)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn balance_defect_examples() {
        assert_eq!(mutual_information_12(2).balance_defect(), vec![rint(0), rint(0)]);

        let e1 = Functional::from_terms(2, [(set(&[1], 2), rint(1))]).unwrap();
        assert_eq!(e1.balance_defect(), vec![rint(1), rint(0)]);

        // J(1;2;3): each system sits in two pair terms (+1,+1) and the
        // triple (-2).
        let j = Functional::from_terms(
            3,
            [
                (set(&[1, 2], 3), rint(1)),
                (set(&[2, 3], 3), rint(1)),
                (set(&[1, 3], 3), rint(1)),
                (set(&[1, 2, 3], 3), rint(-2)),
            ],
        )
        .unwrap();
        assert_eq!(j.balance_defect(), vec![rint(0); 3]);
        assert!(j.is_balanced());
    }

    #[test]
    fn json_round_trip() {
        let f = Functional::from_terms(
            4,
            [
                (set(&[1, 2], 4), rint(1)),
                (set(&[3, 4], 4), rint(1)),
                (set(&[1, 3], 4), rat(1, 2)),
                (set(&[1, 2, 3], 4), rint(-1)),
                (set(&[1, 3, 4], 4), rint(-1)),
            ],
        )
        .unwrap();
        let json = serde_json::to_string(&f).unwrap();
        assert!(json.contains("\"1,2\":\"1\""));
        assert!(json.contains("\"1,3\":\"1/2\""));
        let back: Functional = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);

        let parsed: Functional =
            serde_json::from_str(r#"{"n":2,"coeffs":{"1":"1","2":"1","1,2":"-1"}}"#).unwrap();
        assert_eq!(parsed, mutual_information_12(2));

        assert!(serde_json::from_str::<Functional>(r#"{"n":2,"coeffs":{"5":"1"}}"#).is_err());
        assert!(serde_json::from_str::<Functional>(r#"{"n":2,"coeffs":{"1":"1/0"}}"#).is_err());
    }

    #[test]
    fn canonical_scales_to_coprime_integers() {
        let f = Functional::from_terms(
            2,
            [(set(&[1], 2), rat(1, 2)), (set(&[2], 2), rat(1, 2)), (set(&[1, 2], 2), rat(-1, 2))],
        )
        .unwrap();
        assert_eq!(f.canonical(), mutual_information_12(2));
    }
}
