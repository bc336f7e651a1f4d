//! Reduction, equivalence, class enumeration and genus partition for
//! positive ternary forms.
//!
//! The canonical representative of a class is taken among the bases
//! `(v1, v2, v3)` attaining the successive minima `λ1 <= λ2 <= λ3`. Such a
//! basis gives `a = λ1`, `b = λ2`, `c = λ3` and automatically
//! `|t|, |s| <= a`, `|r| <= b`; among them the smallest form under
//! [`canonical_key`] is chosen, so equal classes give identical forms.

pub mod padic;

use std::collections::BTreeSet;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::prime_divisors;
use crate::error::{Error, Result};
use crate::forms::{det3, from_columns, mat_mul, IntegerTriple, Mat3, TernaryForm};
use padic::{local_symbol, LocalSymbol};

/// Default largest discriminant accepted by [`enumerate_classes`].
pub const DEFAULT_DISC_BOUND: i64 = 25_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalForm {
    pub form: TernaryForm,
    /// `form = original ∘ transform`.
    pub transform: Mat3,
}

/// Total order on reduced forms: nonnegative `r`, then `s`, then `t` are
/// preferred, then the lexicographically smallest coefficient tuple.
pub fn canonical_key(f: &TernaryForm) -> (bool, bool, bool, [i64; 6]) {
    (f.r() < 0, f.s() < 0, f.t() < 0, f.coeffs())
}

fn independent2(u: &IntegerTriple, v: &IntegerTriple) -> bool {
    let cross = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
    cross != [0, 0, 0]
}

/// Canonical representative of the class of `f` together with the basis
/// change that produces it.
pub fn reduce(f: &TernaryForm) -> CanonicalForm {
    let (g, m) = f.greedy_reduce();
    let vectors = g.short_vectors(g.c()).expect("bounded by a diagonal entry");

    // successive minima: first values at which the span reaches rank 1, 2, 3
    let mut minima = [0i64; 3];
    let mut basis: Vec<IntegerTriple> = Vec::new();
    for (v, val) in &vectors {
        let rank_up = match basis.len() {
            0 => true,
            1 => independent2(&basis[0], v),
            2 => det3(&from_columns(basis[0], basis[1], *v)) != 0,
            _ => false,
        };
        if rank_up {
            minima[basis.len()] = *val;
            basis.push(*v);
        }
        if basis.len() == 3 {
            break;
        }
    }
    debug_assert_eq!(basis.len(), 3);
    let of_norm = |n: i64| vectors.iter().filter(|(_, val)| *val == n).map(|(v, _)| *v).collect::<Vec<_>>();
    let (s1, s2, s3) = (of_norm(minima[0]), of_norm(minima[1]), of_norm(minima[2]));

    let mut best: Option<(TernaryForm, Mat3)> = None;
    for u in &s1 {
        for v in &s2 {
            if !independent2(u, v) {
                continue;
            }
            for w in &s3 {
                let n = from_columns(*u, *v, *w);
                if det3(&n).abs() != 1 {
                    continue;
                }
                let h = g.transform(&n).expect("unimodular change keeps definiteness");
                if best.as_ref().is_none_or(|(b, _)| canonical_key(&h) < canonical_key(b)) {
                    best = Some((h, n));
                }
            }
        }
    }
    let (form, n) = best.expect("successive minima of a ternary lattice are attained by a basis");
    CanonicalForm { form, transform: mat_mul(&m, &n) }
}

/// Whether `f` and `g` are integrally equivalent.
pub fn is_equivalent(f: &TernaryForm, g: &TernaryForm) -> bool {
    f.discriminant() == g.discriminant() && reduce(f).form == reduce(g).form
}

/// One canonical representative for each class of discriminant `d`, sorted
/// by coefficients. Uses the default bound on `d`.
pub fn enumerate_classes(d: i64) -> Result<Vec<TernaryForm>> {
    enumerate_classes_with_bound(d, DEFAULT_DISC_BOUND)
}

/// Exhaustive search over Minkowski-reduced coefficient boxes:
/// `a <= b <= c`, `|t|, |s| <= a`, `|r| <= b`, `f(±1, ±1, 1) >= c` and
/// `abc <= d/2`, with `c` solved from the discriminant.
pub fn enumerate_classes_with_bound(d: i64, bound: i64) -> Result<Vec<TernaryForm>> {
    if d < 1 {
        return Err(Error::range(format!("discriminant {d} must be positive")));
    }
    if d > bound {
        return Err(Error::BoundExceeded { disc: d, bound });
    }
    let a_max = (1..).take_while(|a: &i64| 2 * a * a * a <= d).last().unwrap_or(0);
    let found: BTreeSet<TernaryForm> = (1..=a_max)
        .into_par_iter()
        .flat_map_iter(|a| slice_candidates(d, a))
        .map(|f| reduce(&f).form)
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    Ok(found.into_iter().collect())
}

fn slice_candidates(d: i64, a: i64) -> Vec<TernaryForm> {
    let mut out = Vec::new();
    let mut b = a;
    while 2 * a * b * b <= d {
        for t in -a..=a {
            let den = 4 * a * b - t * t;
            for s in -a..=a {
                for r in -b..=b {
                    // c (4ab - t^2) = d - rst + a r^2 + b s^2
                    let num = d - r * s * t + a * r * r + b * s * s;
                    if num % den != 0 {
                        continue;
                    }
                    let c = num / den;
                    if c < b || 2 * a * b * c > d {
                        continue;
                    }
                    let minkowski = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
                        .iter()
                        .all(|&(e1, e2)| a + b + e1 * s + e2 * r + e1 * e2 * t >= 0);
                    if !minkowski {
                        continue;
                    }
                    if let Ok(f) = TernaryForm::new(a, b, c, r, s, t) {
                        debug_assert_eq!(f.discriminant(), d);
                        out.push(f);
                    }
                }
            }
        }
        b += 1;
    }
    out
}

/// Local invariants at every prime dividing `2d`.
pub fn local_signature(f: &TernaryForm) -> Vec<(u64, LocalSymbol)> {
    prime_divisors(2 * f.discriminant() as u64).into_iter().map(|p| (p, local_symbol(f, p))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenusRecord {
    pub discriminant: i64,
    pub classes: Vec<CanonicalForm>,
    pub aut_orders: Vec<u64>,
    /// Index sets of the spinor genera, when known.
    pub spinor_partition: Option<Vec<Vec<usize>>>,
}

/// The three classes of discriminant 128 and their spinor genera
/// `{x^2+y^2+32z^2, 2x^2+2y^2+9z^2+2yz-2zx}` and `{x^2+4y^2+9z^2-4yz}`.
const SPINOR_TABLE_128: [([i64; 6], usize); 3] =
    [([1, 1, 32, 0, 0, 0], 0), ([2, 2, 9, 2, -2, 0], 0), ([1, 4, 9, -4, 0, 0], 1)];

fn known_spinor_partition(classes: &[CanonicalForm]) -> Option<Vec<Vec<usize>>> {
    if classes.len() != SPINOR_TABLE_128.len() || classes.first()?.form.discriminant() != 128 {
        return None;
    }
    let mut parts = vec![Vec::new(), Vec::new()];
    for (coeffs, part) in SPINOR_TABLE_128 {
        let canon = reduce(&TernaryForm::from_coeffs(coeffs).ok()?).form;
        let idx = classes.iter().position(|c| c.form == canon)?;
        parts[part].push(idx);
    }
    for p in parts.iter_mut() {
        p.sort_unstable();
    }
    Some(parts)
}

/// The classes of discriminant `d(f)` sharing all local invariants of `f`.
pub fn genus_of(f: &TernaryForm) -> Result<GenusRecord> {
    genus_of_with_bound(f, DEFAULT_DISC_BOUND)
}

pub fn genus_of_with_bound(f: &TernaryForm, bound: i64) -> Result<GenusRecord> {
    let d = f.discriminant();
    let target = local_signature(f);
    let classes: Vec<CanonicalForm> = enumerate_classes_with_bound(d, bound)?
        .into_iter()
        .filter(|g| local_signature(g) == target)
        .map(|g| CanonicalForm { form: g, transform: crate::forms::IDENTITY })
        .collect();
    let aut_orders = classes.iter().map(|c| c.form.automorphisms().len() as u64).collect();
    let spinor_partition = known_spinor_partition(&classes);
    Ok(GenusRecord { discriminant: d, classes, aut_orders, spinor_partition })
}

/// Aut-weighted average `(Σ r(f_i, n)/|Aut f_i|) / (Σ 1/|Aut f_i|)`.
pub fn weighted_average(classes: &[(TernaryForm, u64)], n: i64) -> Result<Ratio<i128>> {
    if classes.is_empty() {
        return Err(Error::EmptyClassList);
    }
    let mut num = Ratio::from_integer(0i128);
    let mut mass = Ratio::from_integer(0i128);
    for (f, aut) in classes {
        if *aut == 0 {
            return Err(Error::Invalid("automorphism order must be positive".into()));
        }
        let w = Ratio::new(1, *aut as i128);
        num += w * f.represent_count(n)? as i128;
        mass += w;
    }
    Ok(num / mass)
}
