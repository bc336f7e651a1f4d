//! p-adic Jordan splittings of ternary Gram matrices and the local
//! invariants used to sort classes into genera.
//!
//! At an odd prime the invariant is, for every scale, the block dimension
//! and the quadratic character of the product of the block's units. At 2 it
//! is the list of Jordan scales together with the table of quadratic Gauss
//! sums `G(w) = Σ_{v mod 2^k} e(w f(v) / 2^k)` for `w = 2^j u`, which depend
//! only on `j` and `u mod 8`. The table is the Fourier transform of the
//! counting fingerprint `m -> #{v mod 2^k : f(v) ≡ m}`, so equal tables mean
//! equal fingerprints.

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::Serialize;

use crate::arith::{legendre, valuation};
use crate::forms::TernaryForm;

type Q = Ratio<i128>;

fn ord_q(x: &Q, p: u64) -> Option<u32> {
    if *x.numer() == 0 {
        return None;
    }
    let num = valuation(*x.numer(), p).unwrap_or(0);
    let den = valuation(*x.denom(), p).unwrap_or(0);
    // entries stay p-integral through the elimination
    Some(num.saturating_sub(den))
}

/// One orthogonal summand of a Jordan splitting of the Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JordanBlock {
    /// `p^scale · unit`, with the unit given as `numerator · denominator`
    /// (same square class at odd `p`, same residue class mod 8 at 2).
    Unit { scale: u32, unit: i128 },
    /// A 2-dimensional block `2^scale [[2α, β], [β, 2γ]]` with `β` odd; only
    /// at `p = 2`. `even_type` holds when `αγ` is even (hyperbolic plane).
    Plane { scale: u32, even_type: bool },
}

/// Jordan splitting of `A` over `Z_p` by symmetric elimination.
pub fn jordan_blocks(gram: [[i128; 3]; 3], p: u64) -> Vec<JordanBlock> {
    let mut m: Vec<Vec<Q>> = gram.iter().map(|row| row.iter().map(|&v| Q::from_integer(v)).collect()).collect();
    let mut blocks = Vec::new();
    while !m.is_empty() {
        let n = m.len();
        let mut best: Option<(u32, usize, usize)> = None;
        for i in 0..n {
            for j in i..n {
                if let Some(v) = ord_q(&m[i][j], p) {
                    let better = match best {
                        None => true,
                        Some((bv, bi, bj)) => v < bv || (v == bv && bi != bj && i == j),
                    };
                    if better {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let (v, i, j) = best.expect("Gram matrix is nondegenerate");
        if i == j {
            m.swap(0, i);
            for row in m.iter_mut() {
                row.swap(0, i);
            }
            let pivot = m[0][0];
            for k in 1..n {
                let factor = m[0][k] / pivot;
                for l in 0..n {
                    let delta = factor * m[0][l];
                    m[k][l] -= delta;
                }
                for l in 0..n {
                    let delta = factor * m[l][0];
                    m[l][k] -= delta;
                }
            }
            let unit = pivot / Q::from_integer((p as i128).pow(v));
            blocks.push(JordanBlock::Unit { scale: v, unit: unit.numer() * unit.denom() });
            m = m[1..].iter().map(|row| row[1..].to_vec()).collect();
        } else if p != 2 {
            // e_i <- e_i + e_j makes the diagonal entry reach the minimum
            for l in 0..n {
                let delta = m[j][l];
                m[i][l] += delta;
            }
            for l in 0..n {
                let delta = m[l][j];
                m[l][i] += delta;
            }
        } else {
            // move (i, j) to (0, 1) and split off the plane
            let mut order: Vec<usize> = vec![i, j];
            order.extend((0..n).filter(|&k| k != i && k != j));
            m = order.iter().map(|&r| order.iter().map(|&c| m[r][c]).collect()).collect();
            let (x, y, z) = (m[0][0], m[0][1], m[1][1]);
            let det = x * z - y * y;
            for k in 2..n {
                // e_k <- e_k - (c0 e_0 + c1 e_1) with B (c0, c1) = (m[0][k], m[1][k])
                let c0 = (z * m[0][k] - y * m[1][k]) / det;
                let c1 = (x * m[1][k] - y * m[0][k]) / det;
                for l in 0..n {
                    let delta = c0 * m[0][l] + c1 * m[1][l];
                    m[k][l] -= delta;
                }
                for l in 0..n {
                    let delta = c0 * m[l][0] + c1 * m[l][1];
                    m[l][k] -= delta;
                }
            }
            let scale = v;
            let odd_alpha = ord_q(&x, 2) == Some(scale + 1);
            let odd_gamma = ord_q(&z, 2) == Some(scale + 1);
            blocks.push(JordanBlock::Plane { scale, even_type: !(odd_alpha && odd_gamma) });
            m = m[2..].iter().map(|row| row[2..].to_vec()).collect();
        }
    }
    blocks
}

/// Element of `Z[ζ8]` as `2^exp · (c0 + c1 ζ + c2 ζ^2 + c3 ζ^3)` with the
/// coefficients not all even, or zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Cyclo8 {
    exp: u32,
    coeffs: [i64; 4],
}

impl Cyclo8 {
    pub const ZERO: Cyclo8 = Cyclo8 { exp: 0, coeffs: [0; 4] };

    fn new(exp: u32, coeffs: [i64; 4]) -> Self {
        Cyclo8 { exp, coeffs }.normalized()
    }

    fn normalized(mut self) -> Self {
        if self.coeffs == [0; 4] {
            return Self::ZERO;
        }
        while self.coeffs.iter().all(|c| c % 2 == 0) {
            self.coeffs = self.coeffs.map(|c| c / 2);
            self.exp += 1;
        }
        self
    }

    fn power_of_two(e: u32) -> Self {
        Cyclo8 { exp: e, coeffs: [1, 0, 0, 0] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs == [0; 4]
    }

    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::ZERO;
        }
        let mut out = [0i64; 4];
        for i in 0..4 {
            for j in 0..4 {
                let prod = self.coeffs[i] * other.coeffs[j];
                if i + j < 4 {
                    out[i + j] += prod;
                } else {
                    out[i + j - 4] -= prod;
                }
            }
        }
        Cyclo8::new(self.exp + other.exp, out)
    }

    /// ζ8^k for any integer exponent.
    fn root(k: i64) -> Self {
        let k = k.rem_euclid(8) as usize;
        let mut coeffs = [0i64; 4];
        if k < 4 {
            coeffs[k] = 1;
        } else {
            coeffs[k - 4] = -1;
        }
        Cyclo8 { exp: 0, coeffs }
    }

    fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return *other;
        }
        if other.is_zero() {
            return *self;
        }
        let e = self.exp.min(other.exp);
        let lift = |c: &Cyclo8| c.coeffs.map(|x| x << (c.exp - e));
        let (a, b) = (lift(self), lift(other));
        Cyclo8::new(e, [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]])
    }
}

/// `S(T, v) = Σ_{x mod 2^T} e(v x^2 / 2^T)` for odd `v`; depends on `v mod 8`.
pub fn quadratic_gauss_sum(t: u32, v: i64) -> Cyclo8 {
    if t >= 4 {
        return quadratic_gauss_sum(t - 2, v).mul(&Cyclo8::power_of_two(1));
    }
    direct_gauss_sum(t, v)
}

/// Direct summation in `Z[ζ8]`; `e(a / 2^T) = ζ8^(a 2^(3-T))` for `T <= 3`.
fn direct_gauss_sum(t: u32, v: i64) -> Cyclo8 {
    assert!(t <= 3);
    let modulus = 1i64 << t;
    let mut acc = Cyclo8::ZERO;
    for x in 0..modulus {
        let a = (v * x * x).rem_euclid(modulus);
        acc = acc.add(&Cyclo8::root(a << (3 - t)));
    }
    acc
}

/// `Σ_{v mod 2^k} e(w Q(v) / 2^k)` for one Jordan component of `f`, with
/// `w = 2^j u` and `u` odd.
fn component_sum(block: &JordanBlock, k: u32, j: u32, u: i64) -> Cyclo8 {
    match *block {
        JordanBlock::Unit { scale, unit } => {
            // the Gram entry 2^scale·unit is the f-coefficient 2^(scale-1)·unit
            let e = scale - 1;
            let unit_mod8 = (unit.rem_euclid(8)) as i64;
            match (k as i64) - (j + e) as i64 {
                t if t <= 0 => Cyclo8::power_of_two(k),
                t => {
                    let t = t as u32;
                    quadratic_gauss_sum(t, u * unit_mod8).mul(&Cyclo8::power_of_two(k - t))
                }
            }
        }
        JordanBlock::Plane { scale, even_type } => match (k as i64) - (j + scale) as i64 {
            t if t <= 0 => Cyclo8::power_of_two(2 * k),
            t => {
                let t = t as u32;
                let base = Cyclo8::power_of_two(2 * (k - t) + t);
                if even_type || t.is_multiple_of(2) {
                    base
                } else {
                    base.mul(&Cyclo8 { exp: 0, coeffs: [-1, 0, 0, 0] })
                }
            }
        },
    }
}

/// Local invariant of `f` at one prime; equal for locally equivalent forms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum LocalSymbol {
    /// Per scale: `(scale, dimension, character of the unit product)`.
    Odd(Vec<(u32, usize, i32)>),
    /// Jordan `(scale, dimension)` list and the Gauss-sum table indexed by
    /// `(j, u)` for `j <= k`, `u ∈ {1, 3, 5, 7}`.
    Two { scales: Vec<(u32, usize)>, gauss: Vec<Cyclo8> },
}

pub fn local_symbol(f: &TernaryForm, p: u64) -> LocalSymbol {
    let blocks = jordan_blocks(f.gram(), p);
    if p != 2 {
        let mut per_scale: BTreeMap<u32, (usize, i32)> = BTreeMap::new();
        for b in &blocks {
            if let JordanBlock::Unit { scale, unit } = *b {
                let entry = per_scale.entry(scale).or_insert((0, 1));
                entry.0 += 1;
                entry.1 *= legendre(unit, p);
            }
        }
        return LocalSymbol::Odd(per_scale.into_iter().map(|(s, (d, c))| (s, d, c)).collect());
    }
    let mut scales: BTreeMap<u32, usize> = BTreeMap::new();
    for b in &blocks {
        match *b {
            JordanBlock::Unit { scale, .. } => *scales.entry(scale).or_default() += 1,
            JordanBlock::Plane { scale, .. } => *scales.entry(scale).or_default() += 2,
        }
    }
    let k = valuation(2 * f.discriminant() as i128, 2).unwrap_or(0) + 3;
    let mut gauss = Vec::new();
    for j in 0..=k {
        for u in [1, 3, 5, 7] {
            let g = blocks.iter().fold(Cyclo8::power_of_two(0), |acc, b| acc.mul(&component_sum(b, k, j, u)));
            gauss.push(g);
        }
    }
    LocalSymbol::Two { scales: scales.into_iter().collect(), gauss }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::modulo;

    /// `Σ_{v mod 2^k} e(w f(v)/2^k)` by brute force, as a complex number.
    fn numeric_gauss(f: &TernaryForm, k: u32, w: i64) -> (f64, f64) {
        let m = 1i64 << k;
        let (mut re, mut im) = (0.0, 0.0);
        for x in 0..m {
            for y in 0..m {
                for z in 0..m {
                    let val = modulo(w as i128 * f.evaluate([x, y, z]).unwrap(), m as i128) as f64;
                    let ang = 2.0 * std::f64::consts::PI * val / m as f64;
                    re += ang.cos();
                    im += ang.sin();
                }
            }
        }
        (re, im)
    }

    fn to_complex(c: &Cyclo8) -> (f64, f64) {
        let scale = 2f64.powi(c.exp as i32);
        let (mut re, mut im) = (0.0, 0.0);
        for (i, &a) in c.coeffs.iter().enumerate() {
            let ang = std::f64::consts::PI * i as f64 / 4.0;
            re += a as f64 * ang.cos();
            im += a as f64 * ang.sin();
        }
        (re * scale, im * scale)
    }

    #[test]
    fn gauss_sum_recursion_matches_direct_sum() {
        for t in 0..=9u32 {
            for v in [1i64, 3, 5, 7, 9, 11] {
                let m = 1i64 << t;
                let (mut re, mut im) = (0.0, 0.0);
                for x in 0..m {
                    let ang = 2.0 * std::f64::consts::PI * ((v * x * x).rem_euclid(m)) as f64 / m as f64;
                    re += ang.cos();
                    im += ang.sin();
                }
                let (cr, ci) = to_complex(&quadratic_gauss_sum(t, v));
                assert!((re - cr).abs() < 1e-6 && (im - ci).abs() < 1e-6, "T={t} v={v}");
            }
        }
    }

    #[test]
    fn gauss_table_matches_brute_force() {
        let forms = [
            [1, 1, 1, 0, 0, 0],
            [1, 1, 2, 0, 0, 0],
            [2, 2, 9, 2, -2, 0],
            [1, 4, 9, -4, 0, 0],
            [1, 1, 1, 1, 1, 1],
            [3, 3, 4, 3, 1, 3],
            [1, 2, 3, 1, 1, 1],
        ];
        for c in forms {
            let f = TernaryForm::from_coeffs(c).unwrap();
            let blocks = jordan_blocks(f.gram(), 2);
            for k in 1..=4u32 {
                for w in 1..(1i64 << k) {
                    let j = w.trailing_zeros();
                    let u = w >> j;
                    let g = blocks.iter().fold(Cyclo8::power_of_two(0), |acc, b| acc.mul(&component_sum(b, k, j, u)));
                    let (cr, ci) = to_complex(&g);
                    let (re, im) = numeric_gauss(&f, k, w);
                    assert!((re - cr).abs() < 1e-6 && (im - ci).abs() < 1e-6, "{f} k={k} w={w}: {blocks:?}");
                }
            }
        }
    }

    #[test]
    fn odd_prime_symbols() {
        let f = TernaryForm::diagonal(1, 7, 14).unwrap();
        let g = TernaryForm::diagonal(2, 7, 7).unwrap();
        assert_eq!(local_symbol(&f, 7), local_symbol(&g, 7));
        let h = TernaryForm::diagonal(1, 1, 49).unwrap();
        assert_ne!(local_symbol(&f, 7), local_symbol(&h, 7));
    }

    #[test]
    fn two_adic_symbols_on_128() {
        let f1 = TernaryForm::diagonal(1, 1, 32).unwrap();
        let f2 = TernaryForm::new(2, 2, 9, 2, -2, 0).unwrap();
        let f3 = TernaryForm::new(1, 4, 9, -4, 0, 0).unwrap();
        assert_eq!(local_symbol(&f1, 2), local_symbol(&f2, 2));
        assert_eq!(local_symbol(&f1, 2), local_symbol(&f3, 2));
        let other = TernaryForm::diagonal(2, 2, 8).unwrap();
        assert_ne!(local_symbol(&f1, 2), local_symbol(&other, 2));
    }
}
