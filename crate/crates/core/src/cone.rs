//! Exact rational polyhedral cone algebra: halfspace (`HRep`) and generator
//! (`VRep`) descriptions, double description conversion, duality, membership,
//! extremality tests and nonnegative-combination feasibility.
//!
//! All cones are homogeneous (apex at the origin). Equalities are handled by
//! projecting onto their kernel before the double description run, and the
//! lineality space of the projected cone is split off so the core insertion
//! loop only ever sees a pointed cone. Rays are kept in canonical form
//! (coprime integer entries, direction preserved), which makes ray identity
//! and output ordering exact and deterministic.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::linalg;
use crate::rational::{
    canonical_form, dot, format_rat, int_form, is_zero_vec, rats_from_ints, QVec, Rat,
};
use crate::simplex::{self, Feasibility};

#[derive(Debug, Error)]
pub enum ConeError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("zero row at index {index}")]
    ZeroRow { index: usize },
    #[error("intermediate ray count exceeded the cap of {limit}")]
    RayLimitExceeded { limit: usize },
    #[error("vector is zero")]
    ZeroVector,
    #[error("vector is not contained in the cone")]
    NotInCone,
    #[error("internal invariant breach: {0}")]
    Internal(String),
}

/// Halfspace description: `inequalities` rows mean `row . x >= 0`,
/// `equalities` rows mean `row . x = 0`.
#[derive(Clone, PartialEq, Eq)]
pub struct HRep {
    pub dim: usize,
    pub inequalities: Vec<QVec>,
    pub equalities: Vec<QVec>,
}

/// Generator description: the cone of all nonnegative combinations of `rays`
/// plus arbitrary combinations of the `lineality` basis.
#[derive(Clone, PartialEq, Eq)]
pub struct VRep {
    pub dim: usize,
    pub rays: Vec<QVec>,
    pub lineality: Vec<QVec>,
}

impl HRep {
    pub fn new(dim: usize) -> Self {
        HRep { dim, inequalities: Vec::new(), equalities: Vec::new() }
    }

    pub fn validate(&self) -> Result<(), ConeError> {
        for (index, row) in self.inequalities.iter().chain(&self.equalities).enumerate() {
            if row.len() != self.dim {
                return Err(ConeError::DimensionMismatch { expected: self.dim, got: row.len() });
            }
            if is_zero_vec(row) {
                return Err(ConeError::ZeroRow { index });
            }
        }
        Ok(())
    }

    pub fn row_count(&self) -> usize {
        self.inequalities.len() + self.equalities.len()
    }
}

impl VRep {
    /// Canonicalizes: rays to coprime integer form, sorted and deduplicated;
    /// lineality replaced by the echelon basis of its span.
    pub fn new(dim: usize, rays: Vec<QVec>, lineality: Vec<QVec>) -> Self {
        let mut canon_rays: Vec<QVec> = rays
            .iter()
            .map(|r| canonical_form(r))
            .filter(|r| !is_zero_vec(r))
            .collect();
        canon_rays.sort();
        canon_rays.dedup();
        let lin_ech = linalg::echelon(&lineality, dim);
        let mut canon_lin: Vec<QVec> = lin_ech.rows.iter().map(|r| canonical_form(r)).collect();
        canon_lin.sort();
        VRep { dim, rays: canon_rays, lineality: canon_lin }
    }

    pub fn validate(&self) -> Result<(), ConeError> {
        for (index, row) in self.rays.iter().chain(&self.lineality).enumerate() {
            if row.len() != self.dim {
                return Err(ConeError::DimensionMismatch { expected: self.dim, got: row.len() });
            }
            if is_zero_vec(row) {
                return Err(ConeError::ZeroRow { index });
            }
        }
        Ok(())
    }

    pub fn is_zero_cone(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }
}

impl fmt::Debug for HRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "HRep(dim={})", self.dim)?;
        for row in &self.inequalities {
            writeln!(f, "  >= 0: {}", fmt_row(row))?;
        }
        for row in &self.equalities {
            writeln!(f, "   = 0: {}", fmt_row(row))?;
        }
        Ok(())
    }
}

impl fmt::Debug for VRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "VRep(dim={})", self.dim)?;
        for row in &self.rays {
            writeln!(f, "  ray: {}", fmt_row(row))?;
        }
        for row in &self.lineality {
            writeln!(f, "  lin: {}", fmt_row(row))?;
        }
        Ok(())
    }
}

fn fmt_row(row: &[Rat]) -> String {
    row.iter().map(format_rat).collect::<Vec<_>>().join(" ")
}

#[derive(Serialize)]
struct HRepJson {
    dim: usize,
    inequalities: Vec<Vec<String>>,
    equalities: Vec<Vec<String>>,
}

impl Serialize for HRep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        HRepJson {
            dim: self.dim,
            inequalities: self.inequalities.iter().map(|r| r.iter().map(format_rat).collect()).collect(),
            equalities: self.equalities.iter().map(|r| r.iter().map(format_rat).collect()).collect(),
        }
        .serialize(s)
    }
}

#[derive(Serialize)]
struct VRepJson {
    dim: usize,
    rays: Vec<Vec<String>>,
    lineality: Vec<Vec<String>>,
}

impl Serialize for VRep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        VRepJson {
            dim: self.dim,
            rays: self.rays.iter().map(|r| r.iter().map(format_rat).collect()).collect(),
            lineality: self.lineality.iter().map(|r| r.iter().map(format_rat).collect()).collect(),
        }
        .serialize(s)
    }
}

/// Insertion order of inequality rows during a double description run. The
/// output is identical for every choice; only intermediate ray counts and
/// runtime differ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InsertionOrder {
    /// Ascending by nonzero count, ties broken by canonical row order.
    NonzeroAscending,
    /// Descending by nonzero count, ties broken by canonical row order.
    NonzeroDescending,
    /// Lexicographic on canonical rows.
    LexAscending,
    /// Reverse lexicographic on canonical rows.
    LexDescending,
    /// Rows exactly as given (after deduplication).
    InputOrder,
}

#[derive(Clone)]
pub struct DdOptions {
    /// Cap on the intermediate ray count.
    pub max_rays: usize,
    /// Worker threads for the pair loop; `None` or `Some(1)` run sequentially.
    /// Results are identical for every setting.
    pub jobs: Option<usize>,
    pub insertion_order: InsertionOrder,
    /// Called after each inserted row with (rows done, rows total, ray count).
    pub progress: Option<fn(usize, usize, usize)>,
}

impl Default for DdOptions {
    fn default() -> Self {
        DdOptions {
            max_rays: 1_000_000,
            jobs: None,
            // Lex order keeps intermediate ray counts far smaller than
            // nonzero-count orders on the monotonicity cones.
            insertion_order: InsertionOrder::LexAscending,
            progress: None,
        }
    }
}

/// Converts a halfspace description into its minimal generator description.
/// Every returned ray is extremal, and for pointed cones the ray set is
/// unique up to positive scaling. An empty system describes all of space.
pub fn dd_convert(h: &HRep, opts: &DdOptions) -> Result<VRep, ConeError> {
    h.validate()?;
    let d = h.dim;

    // Work inside the kernel of the equality rows.
    let kernel = linalg::kernel_basis(&h.equalities, d);
    let m = kernel.len();
    if m == 0 {
        return Ok(VRep::new(d, vec![], vec![]));
    }

    // Project the inequalities onto kernel coordinates and clear denominators.
    let mut proj: Vec<Vec<BigInt>> = h
        .inequalities
        .iter()
        .map(|row| {
            let v: QVec = kernel.iter().map(|k| dot(row, k)).collect();
            int_form(&v)
        })
        .filter(|r| !r.iter().all(Zero::is_zero))
        .collect();
    let nnz = |r: &Vec<BigInt>| r.iter().filter(|x| !x.is_zero()).count();
    match opts.insertion_order {
        InsertionOrder::NonzeroAscending => {
            proj.sort_by_key(|r| (nnz(r), r.clone()));
            proj.dedup();
        }
        InsertionOrder::NonzeroDescending => {
            proj.sort_by(|a, b| (nnz(b), a).cmp(&(nnz(a), b)));
            proj.dedup();
        }
        InsertionOrder::LexAscending => {
            proj.sort();
            proj.dedup();
        }
        InsertionOrder::LexDescending => {
            proj.sort_by(|a, b| b.cmp(a));
            proj.dedup();
        }
        InsertionOrder::InputOrder => {
            let mut seen: HashSet<Vec<BigInt>> = HashSet::new();
            proj.retain(|r| seen.insert(r.clone()));
        }
    }

    // Split off the lineality of the projected cone.
    let proj_rat: Vec<QVec> = proj.iter().map(|r| rats_from_ints(r)).collect();
    let lin = linalg::kernel_basis(&proj_rat, m);
    let lin_ech = linalg::echelon(&lin, m);
    let pivot: HashSet<usize> = lin_ech.pivots.iter().copied().collect();
    let complement: Vec<usize> = (0..m).filter(|c| !pivot.contains(c)).collect();

    let lineality_full: Vec<QVec> = lin
        .iter()
        .map(|l| combine(&kernel, l))
        .collect();

    if complement.is_empty() {
        return Ok(VRep::new(d, vec![], lineality_full));
    }

    // Pointed part: restrict rows to the complement coordinates.
    let pointed_rows: Vec<Vec<BigInt>> = proj
        .iter()
        .map(|r| complement.iter().map(|&c| r[c].clone()).collect())
        .collect();
    let pointed_dim = complement.len();
    debug_assert_eq!(
        linalg::rank_int(&pointed_rows, pointed_dim),
        pointed_dim,
        "projected cone must be pointed"
    );

    let pointed_rays = dd_pointed(&pointed_rows, pointed_dim, opts)?;

    // Lift back: complement coordinates -> kernel coordinates -> full space.
    let rays: Vec<QVec> = pointed_rays
        .iter()
        .map(|u| {
            let mut y = vec![Rat::zero(); m];
            for (j, &c) in complement.iter().enumerate() {
                y[c] = Rat::from_integer(u[j].clone());
            }
            combine(&kernel, &y)
        })
        .collect();

    Ok(VRep::new(d, rays, lineality_full))
}

/// `sum_t coeffs[t] * basis[t]`.
fn combine(basis: &[QVec], coeffs: &[Rat]) -> QVec {
    let dim = basis.first().map(|b| b.len()).unwrap_or(0);
    let mut out = vec![Rat::zero(); dim];
    for (c, b) in coeffs.iter().zip(basis) {
        if c.is_zero() {
            continue;
        }
        for (x, v) in out.iter_mut().zip(b) {
            if !v.is_zero() {
                *x += c * v;
            }
        }
    }
    out
}

fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let mut acc = BigInt::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

fn gcd_normalize(v: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in v.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
        }
    }
    if !g.is_zero() && g != BigInt::from(1) {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
}

fn bits_and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn bits_subset(sub: &[u64], sup: &[u64]) -> bool {
    sub.iter().zip(sup).all(|(s, t)| s & !t == 0)
}

fn bits_count(bits: &[u64]) -> usize {
    bits.iter().map(|w| w.count_ones() as usize).sum()
}

/// Bounds for the machine-integer fast path. Row entries are bounded so a
/// 26-term dot against a ray stays far inside `i128`; ray entries beyond the
/// bound trigger the arbitrary-precision fallback.
const SMALL_ROW_BOUND: i64 = 1 << 20;
const SMALL_RAY_BOUND: i128 = 1 << 40;

/// Prime modulus for the rank shortcut. Products of two residues fit in u64.
const RANK_PRIME: u64 = 2_147_483_629;

struct Overflow;

/// Rank over the prime field: never exceeds the rational rank, so reaching
/// the target rank is an exact proof; falling short defers to exact Bareiss.
fn rank_mod_p(rows: &[Vec<u64>], dim: usize) -> usize {
    let p = RANK_PRIME;
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let mut rank = 0usize;
    for col in 0..dim {
        let Some(pivot_row) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot_row);
        let inv = mod_inverse(m[rank][col], p);
        for c in col..dim {
            m[rank][c] = m[rank][c] * inv % p;
        }
        let (pivot_slice, rest) = m.split_at_mut(rank + 1);
        let pivot_row_ref = &pivot_slice[rank];
        for row in rest.iter_mut() {
            let factor = row[col];
            if factor != 0 {
                for c in col..dim {
                    row[c] = (row[c] + (p - factor) * pivot_row_ref[c] % p) % p;
                }
            }
        }
        rank += 1;
        if rank == m.len() || rank == dim {
            break;
        }
    }
    rank
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2) mod p.
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

struct SmallRay {
    vec: Vec<i64>,
    /// Tightness bitset over rows in processed order.
    tight: Vec<u64>,
}

fn set_bit(bits: &mut [u64], pos: usize) {
    bits[pos / 64] |= 1 << (pos % 64);
}

/// Shared insertion-loop state: decides adjacency of a (positive, negative)
/// ray pair against the processed rows. The combinatorial narrowing scan is
/// an equivalent cheap pre-filter; the algebraic rank test decides, with the
/// mod-p rank as a sound shortcut (it never exceeds the exact rank).
fn adjacent_small(
    rays: &[SmallRay],
    p: usize,
    q: usize,
    needed: usize,
    pos: usize,
    rows_mod: &[Vec<u64>],
    rows_big: &[Vec<BigInt>],
    processed: &[usize],
    dim: usize,
) -> Option<Vec<u64>> {
    let common = bits_and(&rays[p].tight, &rays[q].tight);
    if bits_count(&common) < needed {
        return None;
    }
    if rays
        .iter()
        .enumerate()
        .any(|(i, r)| i != p && i != q && bits_subset(&common, &r.tight))
    {
        return None;
    }
    let tight_idx: Vec<usize> = (0..pos)
        .filter(|t| common[t / 64] & (1 << (t % 64)) != 0)
        .map(|t| processed[t])
        .collect();
    let mod_rows: Vec<Vec<u64>> = tight_idx.iter().map(|&t| rows_mod[t].clone()).collect();
    if rank_mod_p(&mod_rows, dim) != needed {
        // The mod-p rank may undershoot; decide exactly.
        let exact_rows: Vec<Vec<BigInt>> =
            tight_idx.iter().map(|&t| rows_big[t].clone()).collect();
        if linalg::rank_int(&exact_rows, dim) != needed {
            return None;
        }
    }
    Some(common)
}

/// Machine-integer Motzkin loop; bails out with `Overflow` if any ray entry
/// leaves the safe range.
fn dd_pointed_small(
    rows: &[Vec<i64>],
    rows_big: &[Vec<BigInt>],
    basis_idx: &[usize],
    initial: Vec<Vec<BigInt>>,
    dim: usize,
    opts: &DdOptions,
    pool: Option<&rayon::ThreadPool>,
) -> Result<Result<Vec<Vec<BigInt>>, Overflow>, ConeError> {
    let m = rows.len();
    let words = (m + 63) / 64;
    let rows_mod: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x.rem_euclid(RANK_PRIME as i64) as u64).collect())
        .collect();

    let mut rays: Vec<SmallRay> = Vec::with_capacity(dim);
    for (j, col) in initial.iter().enumerate() {
        let mut vec = Vec::with_capacity(dim);
        for x in col {
            match i64::try_from(x) {
                Ok(v) if (v as i128).abs() <= SMALL_RAY_BOUND => vec.push(v),
                _ => return Ok(Err(Overflow)),
            }
        }
        let mut tight = vec![0u64; words];
        for t in 0..dim {
            if t != j {
                set_bit(&mut tight, t);
            }
        }
        rays.push(SmallRay { vec, tight });
    }

    let mut processed: Vec<usize> = basis_idx.to_vec();
    let in_basis: HashSet<usize> = basis_idx.iter().copied().collect();
    let remaining: Vec<usize> = (0..m).filter(|i| !in_basis.contains(i)).collect();

    for (done, &ri) in remaining.iter().enumerate() {
        let row = &rows[ri];
        let pos = processed.len();

        let dots: Vec<i128> = rays
            .iter()
            .map(|r| {
                row.iter()
                    .zip(&r.vec)
                    .map(|(&a, &b)| a as i128 * b as i128)
                    .sum()
            })
            .collect();
        let mut pos_idx = Vec::new();
        let mut neg_idx = Vec::new();
        for (i, &v) in dots.iter().enumerate() {
            if v > 0 {
                pos_idx.push(i);
            } else if v < 0 {
                neg_idx.push(i);
            } else {
                set_bit(&mut rays[i].tight, pos);
            }
        }

        if !neg_idx.is_empty() {
            let needed = dim.saturating_sub(2);
            let candidates: Vec<(usize, usize)> = pos_idx
                .iter()
                .flat_map(|&p| neg_idx.iter().map(move |&q| (p, q)))
                .collect();

            let make_ray = |&(p, q): &(usize, usize)| -> Option<Result<SmallRay, Overflow>> {
                let common = adjacent_small(
                    &rays, p, q, needed, pos, &rows_mod, rows_big, &processed, dim,
                )?;
                let mut coords: Vec<i128> = Vec::with_capacity(dim);
                for i in 0..dim {
                    let Some(a) = dots[p].checked_mul(rays[q].vec[i] as i128) else {
                        return Some(Err(Overflow));
                    };
                    let Some(b) = dots[q].checked_mul(rays[p].vec[i] as i128) else {
                        return Some(Err(Overflow));
                    };
                    let Some(c) = a.checked_sub(b) else {
                        return Some(Err(Overflow));
                    };
                    coords.push(c);
                }
                let mut g: i128 = 0;
                for &c in &coords {
                    g = gcd_i128(g, c.abs());
                }
                if g > 1 {
                    for c in coords.iter_mut() {
                        *c /= g;
                    }
                }
                if coords.iter().any(|c| c.abs() > SMALL_RAY_BOUND) {
                    return Some(Err(Overflow));
                }
                let mut tight = common;
                set_bit(&mut tight, pos);
                Some(Ok(SmallRay { vec: coords.iter().map(|&c| c as i64).collect(), tight }))
            };

            let produced: Vec<Result<SmallRay, Overflow>> = match pool {
                Some(pool) => pool.install(|| candidates.par_iter().filter_map(make_ray).collect()),
                None => candidates.iter().filter_map(make_ray).collect(),
            };
            let mut new_rays = Vec::with_capacity(produced.len());
            for r in produced {
                match r {
                    Ok(ray) => new_rays.push(ray),
                    Err(Overflow) => return Ok(Err(Overflow)),
                }
            }
            new_rays.sort_by(|a, b| a.vec.cmp(&b.vec));
            new_rays.dedup_by(|a, b| a.vec == b.vec);

            let keep: Vec<bool> = dots.iter().map(|&v| v >= 0).collect();
            let mut kept: Vec<SmallRay> = rays
                .into_iter()
                .zip(&keep)
                .filter(|(_, &k)| k)
                .map(|(r, _)| r)
                .collect();
            kept.extend(new_rays);
            rays = kept;
        }

        if rays.len() > opts.max_rays {
            return Err(ConeError::RayLimitExceeded { limit: opts.max_rays });
        }
        processed.push(ri);
        if let Some(cb) = opts.progress {
            cb(dim + done + 1, m, rays.len());
        }
    }

    let mut out: Vec<Vec<BigInt>> = rays
        .into_iter()
        .map(|r| r.vec.into_iter().map(BigInt::from).collect())
        .collect();
    out.sort();
    Ok(Ok(out))
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

struct PointedRay {
    vec: Vec<BigInt>,
    tight: Vec<u64>,
}

/// Arbitrary-precision Motzkin loop; used when the machine-integer path
/// overflows its bounds.
fn dd_pointed_big(
    rows: &[Vec<BigInt>],
    basis_idx: &[usize],
    initial: Vec<Vec<BigInt>>,
    dim: usize,
    opts: &DdOptions,
    pool: Option<&rayon::ThreadPool>,
) -> Result<Vec<Vec<BigInt>>, ConeError> {
    let m = rows.len();
    let words = (m + 63) / 64;

    let mut rays: Vec<PointedRay> = initial
        .into_iter()
        .enumerate()
        .map(|(j, vec)| {
            let mut tight = vec![0u64; words];
            for t in 0..dim {
                if t != j {
                    set_bit(&mut tight, t);
                }
            }
            PointedRay { vec, tight }
        })
        .collect();

    let mut processed: Vec<usize> = basis_idx.to_vec();
    let in_basis: HashSet<usize> = basis_idx.iter().copied().collect();
    let remaining: Vec<usize> = (0..m).filter(|i| !in_basis.contains(i)).collect();

    for (done, &ri) in remaining.iter().enumerate() {
        let row = &rows[ri];
        let pos = processed.len();

        let dots: Vec<BigInt> = rays.iter().map(|r| dot_int(row, &r.vec)).collect();
        let mut pos_idx = Vec::new();
        let mut neg_idx = Vec::new();
        for (i, v) in dots.iter().enumerate() {
            if v.is_positive() {
                pos_idx.push(i);
            } else if v.is_negative() {
                neg_idx.push(i);
            } else {
                set_bit(&mut rays[i].tight, pos);
            }
        }

        if !neg_idx.is_empty() {
            let needed = dim.saturating_sub(2);
            let candidates: Vec<(usize, usize)> = pos_idx
                .iter()
                .flat_map(|&p| neg_idx.iter().map(move |&q| (p, q)))
                .collect();

            let make_ray = |&(p, q): &(usize, usize)| -> Option<PointedRay> {
                let common = bits_and(&rays[p].tight, &rays[q].tight);
                if bits_count(&common) < needed {
                    return None;
                }
                if rays
                    .iter()
                    .enumerate()
                    .any(|(i, r)| i != p && i != q && bits_subset(&common, &r.tight))
                {
                    return None;
                }
                let tight_rows: Vec<Vec<BigInt>> = (0..pos)
                    .filter(|t| common[t / 64] & (1 << (t % 64)) != 0)
                    .map(|t| rows[processed[t]].clone())
                    .collect();
                if linalg::rank_int(&tight_rows, dim) != needed {
                    return None;
                }
                let mut coords: Vec<BigInt> = (0..dim)
                    .map(|i| &dots[p] * &rays[q].vec[i] - &dots[q] * &rays[p].vec[i])
                    .collect();
                gcd_normalize(&mut coords);
                let mut tight = common;
                set_bit(&mut tight, pos);
                Some(PointedRay { vec: coords, tight })
            };

            let mut new_rays: Vec<PointedRay> = match pool {
                Some(pool) => pool.install(|| candidates.par_iter().filter_map(make_ray).collect()),
                None => candidates.iter().filter_map(make_ray).collect(),
            };
            new_rays.sort_by(|a, b| a.vec.cmp(&b.vec));
            new_rays.dedup_by(|a, b| a.vec == b.vec);

            let keep: Vec<bool> = dots.iter().map(|v| !v.is_negative()).collect();
            let mut kept: Vec<PointedRay> = rays
                .into_iter()
                .zip(&keep)
                .filter(|(_, &k)| k)
                .map(|(r, _)| r)
                .collect();
            kept.extend(new_rays);
            rays = kept;
        }

        if rays.len() > opts.max_rays {
            return Err(ConeError::RayLimitExceeded { limit: opts.max_rays });
        }
        processed.push(ri);
        if let Some(cb) = opts.progress {
            cb(dim + done + 1, m, rays.len());
        }
    }

    let mut out: Vec<Vec<BigInt>> = rays.into_iter().map(|r| r.vec).collect();
    out.sort();
    Ok(out)
}

/// Motzkin-style incremental double description for a pointed cone
/// `{u : row . u >= 0}` whose rows have full column rank. Rows must be in
/// coprime integer form and free of duplicates. Returns the extremal rays in
/// canonical sorted order. Runs on machine integers when the data allows,
/// falling back to arbitrary precision on overflow; both paths produce the
/// same rays.
fn dd_pointed(
    rows: &[Vec<BigInt>],
    dim: usize,
    opts: &DdOptions,
) -> Result<Vec<Vec<BigInt>>, ConeError> {
    if dim == 0 {
        return Ok(vec![]);
    }

    // Greedy initial basis: the first `dim` linearly independent rows.
    let mut chosen: Vec<QVec> = Vec::new();
    let mut basis_idx: Vec<usize> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        if basis_idx.len() == dim {
            break;
        }
        chosen.push(rats_from_ints(row));
        if linalg::rank(&chosen, dim) > basis_idx.len() {
            basis_idx.push(i);
        } else {
            chosen.pop();
        }
    }
    if basis_idx.len() != dim {
        return Err(ConeError::Internal("pointed cone rows are rank deficient".into()));
    }
    let inverse = linalg::invert(&chosen)
        .ok_or_else(|| ConeError::Internal("basis inversion failed".into()))?;
    // Initial rays: columns of the basis inverse, in coprime integer form.
    let initial: Vec<Vec<BigInt>> = (0..dim)
        .map(|j| {
            let col: QVec = (0..dim).map(|i| inverse[i][j].clone()).collect();
            let mut vec = int_form(&col);
            gcd_normalize(&mut vec);
            vec
        })
        .collect();

    let parallel = matches!(opts.jobs, Some(k) if k >= 2);
    let pool = if parallel {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(opts.jobs.unwrap())
                .build()
                .map_err(|e| ConeError::Internal(format!("thread pool: {e}")))?,
        )
    } else {
        None
    };

    let small_rows: Option<Vec<Vec<i64>>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| i64::try_from(x).ok().filter(|v| v.abs() <= SMALL_ROW_BOUND))
                .collect()
        })
        .collect();
    if let Some(small) = small_rows {
        match dd_pointed_small(&small, rows, &basis_idx, initial.clone(), dim, opts, pool.as_ref())?
        {
            Ok(rays) => return Ok(rays),
            Err(Overflow) => {}
        }
    }
    dd_pointed_big(rows, &basis_idx, initial, dim, opts, pool.as_ref())
}

/// Facet description of the cone generated by `v`, via the dual cone: the
/// extremal rays of `{b : b . ray >= 0, b . lin = 0}` are the facets of the
/// original cone, and its lineality is the orthogonal complement of the
/// cone's span (the equality rows).
pub fn dual_convert(v: &VRep, opts: &DdOptions) -> Result<HRep, ConeError> {
    v.validate()?;
    let dual = HRep {
        dim: v.dim,
        inequalities: v.rays.clone(),
        equalities: v.lineality.clone(),
    };
    let gens = dd_convert(&dual, opts)?;
    Ok(HRep { dim: v.dim, inequalities: gens.rays, equalities: gens.lineality })
}

/// Outcome of a membership test against an `HRep`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Satisfied,
    Violated(RowViolation),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowViolation {
    pub kind: RowKind,
    /// Index within the inequality or equality list respectively.
    pub index: usize,
    pub row: QVec,
    pub value: Rat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowKind {
    Inequality,
    Equality,
}

/// Checks every constraint; reports the first violated row in canonical row
/// order (inequalities before equalities, each in stored order).
pub fn contains(h: &HRep, x: &[Rat]) -> Result<Membership, ConeError> {
    if x.len() != h.dim {
        return Err(ConeError::DimensionMismatch { expected: h.dim, got: x.len() });
    }
    for (index, row) in h.inequalities.iter().enumerate() {
        let value = dot(row, x);
        if value.is_negative() {
            return Ok(Membership::Violated(RowViolation {
                kind: RowKind::Inequality,
                index,
                row: row.clone(),
                value,
            }));
        }
    }
    for (index, row) in h.equalities.iter().enumerate() {
        let value = dot(row, x);
        if !value.is_zero() {
            return Ok(Membership::Violated(RowViolation {
                kind: RowKind::Equality,
                index,
                row: row.clone(),
                value,
            }));
        }
    }
    Ok(Membership::Satisfied)
}

/// True iff `r` spans an extremal ray of the cone: the constraints tight at
/// `r` must have rank exactly one less than the rank of all constraints.
/// For pointed full-rank cones this is the familiar `dim - 1` condition; the
/// relative form also handles cones with lineality.
pub fn is_extremal(h: &HRep, r: &[Rat]) -> Result<bool, ConeError> {
    if is_zero_vec(r) {
        return Err(ConeError::ZeroVector);
    }
    match contains(h, r)? {
        Membership::Satisfied => {}
        Membership::Violated(_) => return Err(ConeError::NotInCone),
    }
    let mut all_rows: Vec<QVec> = h.equalities.clone();
    all_rows.extend(h.inequalities.iter().cloned());
    let rank_all = linalg::rank(&all_rows, h.dim);

    let mut tight: Vec<QVec> = h.equalities.clone();
    for row in &h.inequalities {
        if dot(row, r).is_zero() {
            tight.push(row.clone());
        }
    }
    Ok(linalg::rank(&tight, h.dim) + 1 == rank_all)
}

/// Concatenation of two constraint systems over the same space.
pub fn intersect(a: &HRep, b: &HRep) -> Result<HRep, ConeError> {
    if a.dim != b.dim {
        return Err(ConeError::DimensionMismatch { expected: a.dim, got: b.dim });
    }
    a.validate()?;
    b.validate()?;
    let mut out = a.clone();
    out.inequalities.extend(b.inequalities.iter().cloned());
    out.equalities.extend(b.equalities.iter().cloned());
    Ok(out)
}

/// Irredundant facet description of the same cone, via a double description
/// round trip. Deterministic: equal cones produce identical output.
pub fn irredundant(h: &HRep, opts: &DdOptions) -> Result<HRep, ConeError> {
    let v = dd_convert(h, opts)?;
    dual_convert(&v, opts)
}

/// True iff the two halfspace descriptions carve out the same cone.
pub fn same_cone(a: &HRep, b: &HRep, opts: &DdOptions) -> Result<bool, ConeError> {
    if a.dim != b.dim {
        return Err(ConeError::DimensionMismatch { expected: a.dim, got: b.dim });
    }
    let va = dd_convert(a, opts)?;
    let vb = dd_convert(b, opts)?;
    Ok(generators_inside(&va, b)? && generators_inside(&vb, a)?)
}

fn generators_inside(v: &VRep, h: &HRep) -> Result<bool, ConeError> {
    for ray in &v.rays {
        if contains(h, ray)? != Membership::Satisfied {
            return Ok(false);
        }
    }
    for lin in &v.lineality {
        for row in h.inequalities.iter().chain(&h.equalities) {
            if !dot(row, lin).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A nonnegative combination of generators reproducing a target vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonNegCombination {
    /// One coefficient per ray of the `VRep`, all nonnegative.
    pub ray_coeffs: QVec,
    /// One unrestricted coefficient per lineality basis vector.
    pub lineality_coeffs: QVec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CombinationOutcome {
    Combination(NonNegCombination),
    /// A separating functional: nonnegative on every generator, zero on the
    /// lineality, strictly negative on the target.
    Separated { witness: QVec },
}

/// Writes `target` as `sum gamma_k ray_k + sum delta_j lin_j` with
/// `gamma >= 0`, or produces an exact Farkas-style separating witness.
pub fn solve_nonneg_combination(
    v: &VRep,
    target: &[Rat],
) -> Result<CombinationOutcome, ConeError> {
    v.validate()?;
    if target.len() != v.dim {
        return Err(ConeError::DimensionMismatch { expected: v.dim, got: target.len() });
    }
    let mut columns: Vec<QVec> = v.rays.clone();
    for l in &v.lineality {
        columns.push(l.clone());
    }
    for l in &v.lineality {
        columns.push(l.iter().map(|x| -x.clone()).collect());
    }
    match simplex::solve_nonneg(&columns, target) {
        Feasibility::Feasible(x) => {
            let r = v.rays.len();
            let l = v.lineality.len();
            let ray_coeffs = x[..r].to_vec();
            let lineality_coeffs: QVec =
                (0..l).map(|j| &x[r + j] - &x[r + l + j]).collect();
            Ok(CombinationOutcome::Combination(NonNegCombination { ray_coeffs, lineality_coeffs }))
        }
        Feasibility::Infeasible(y) => {
            let witness: QVec = y.iter().map(|x| -x.clone()).collect();
            debug_assert!(v.rays.iter().all(|r| !dot(&witness, r).is_negative()));
            debug_assert!(v.lineality.iter().all(|l| dot(&witness, l).is_zero()));
            debug_assert!(dot(&witness, target).is_negative());
            Ok(CombinationOutcome::Separated { witness })
        }
    }
}

/// True iff `target` lies in the cone generated by `v`.
pub fn in_generated_cone(v: &VRep, target: &[Rat]) -> Result<bool, ConeError> {
    Ok(matches!(
        solve_nonneg_combination(v, target)?,
        CombinationOutcome::Combination(_)
    ))
}

/// One discrepancy found while verifying a DD pair.
#[derive(Clone, Debug)]
pub enum DdPairIssue {
    /// A generator of the `VRep` violates a constraint row.
    GeneratorOutsideCone { generator: QVec, violation: RowViolation },
    /// A lineality vector of the `VRep` is not annihilated by every row.
    LinealityOutsideCone { vector: QVec },
    /// The lineality spaces of the two descriptions differ.
    LinealitySpaceMismatch { hrep_dim: usize, vrep_dim: usize },
    /// An extremal ray of the halfspace cone has no positive multiple among
    /// the generators (compared modulo the lineality space).
    MissingGenerator { ray: QVec },
    /// A generator that is not an extremal ray of the halfspace cone.
    NonExtremalGenerator { generator: QVec },
}

impl fmt::Display for DdPairIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DdPairIssue::GeneratorOutsideCone { generator, violation } => write!(
                f,
                "generator [{}] violates {} row {} (value {})",
                fmt_row(generator),
                match violation.kind {
                    RowKind::Inequality => "inequality",
                    RowKind::Equality => "equality",
                },
                violation.index,
                format_rat(&violation.value),
            ),
            DdPairIssue::LinealityOutsideCone { vector } => {
                write!(f, "lineality vector [{}] is not annihilated by all rows", fmt_row(vector))
            }
            DdPairIssue::LinealitySpaceMismatch { hrep_dim, vrep_dim } => write!(
                f,
                "lineality mismatch: halfspace cone has dimension {hrep_dim}, generators span {vrep_dim}"
            ),
            DdPairIssue::MissingGenerator { ray } => {
                write!(f, "extremal ray [{}] is missing from the generators", fmt_row(ray))
            }
            DdPairIssue::NonExtremalGenerator { generator } => {
                write!(f, "generator [{}] is not an extremal ray", fmt_row(generator))
            }
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct DdPairReport {
    pub issues: Vec<DdPairIssue>,
}

impl DdPairReport {
    pub fn passed(&self) -> bool {
        self.issues.is_empty()
    }
}

impl fmt::Display for DdPairReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            writeln!(f, "DD pair verified: descriptions agree")
        } else {
            writeln!(f, "DD pair mismatch ({} issues):", self.issues.len())?;
            for issue in &self.issues {
                writeln!(f, "  - {issue}")?;
            }
            Ok(())
        }
    }
}

/// Checks that `(a, r)` is a DD pair: every generator satisfies every
/// constraint, the lineality spaces agree, and the extremal rays of the
/// halfspace cone coincide with the generators up to positive scaling
/// (compared modulo the common lineality space). Mismatches are report
/// content, not errors.
pub fn verify_dd_pair(a: &HRep, r: &VRep, opts: &DdOptions) -> Result<DdPairReport, ConeError> {
    if a.dim != r.dim {
        return Err(ConeError::DimensionMismatch { expected: a.dim, got: r.dim });
    }
    a.validate()?;
    r.validate()?;
    let mut report = DdPairReport::default();

    for ray in &r.rays {
        if let Membership::Violated(violation) = contains(a, ray)? {
            report
                .issues
                .push(DdPairIssue::GeneratorOutsideCone { generator: ray.clone(), violation });
        }
    }
    for lin in &r.lineality {
        let ok = a
            .inequalities
            .iter()
            .chain(&a.equalities)
            .all(|row| dot(row, lin).is_zero());
        if !ok {
            report.issues.push(DdPairIssue::LinealityOutsideCone { vector: lin.clone() });
        }
    }

    // Lineality space of the halfspace cone: kernel of all rows.
    let mut all_rows: Vec<QVec> = a.inequalities.clone();
    all_rows.extend(a.equalities.iter().cloned());
    let lin_a = linalg::kernel_basis(&all_rows, a.dim);

    // Lineality space of the generated cone: declared lineality plus every
    // ray whose negation stays inside.
    let mut lin_r: Vec<QVec> = r.lineality.clone();
    for ray in &r.rays {
        let neg: QVec = ray.iter().map(|x| -x.clone()).collect();
        if in_generated_cone(r, &neg)? {
            lin_r.push(ray.clone());
        }
    }
    if !linalg::same_span(&lin_a, &lin_r, a.dim) {
        report.issues.push(DdPairIssue::LinealitySpaceMismatch {
            hrep_dim: linalg::rank(&lin_a, a.dim),
            vrep_dim: linalg::rank(&lin_r, a.dim),
        });
        return Ok(report);
    }

    // Extremal rays of the halfspace cone, modulo the lineality space.
    let lin_ech = linalg::echelon(&lin_a, a.dim);
    let extremal = dd_convert(a, opts)?;
    let reduce = |v: &QVec| canonical_form(&lin_ech.reduce(v));

    let mut expected: Vec<QVec> = extremal
        .rays
        .iter()
        .map(|ray| reduce(ray))
        .filter(|v| !is_zero_vec(v))
        .collect();
    expected.sort();
    expected.dedup();

    let mut got: Vec<QVec> = r
        .rays
        .iter()
        .map(|ray| reduce(ray))
        .filter(|v| !is_zero_vec(v))
        .collect();
    got.sort();
    got.dedup();

    for ray in &expected {
        if got.binary_search(ray).is_err() {
            report.issues.push(DdPairIssue::MissingGenerator { ray: ray.clone() });
        }
    }
    for gen in &got {
        if expected.binary_search(gen).is_err() {
            report.issues.push(DdPairIssue::NonExtremalGenerator { generator: gen.clone() });
        }
    }

    Ok(report)
}
