//! Positive definite integral ternary forms
//! `f(x,y,z) = ax^2 + by^2 + cz^2 + ryz + szx + txy` and diagonal quaternary
//! forms, with exact solution enumeration and isometry groups.
//!
//! The Gram matrix of `f` is `A = [[2a,t,s],[t,2b,r],[s,r,2c]]`, so that
//! `f(v) = v^T A v / 2` and the discriminant is `det(A)/2`.
//!
//! Enumeration never uses floating point for cutoffs. Completing the square
//! gives `x^2 <= n (4bc - r^2) / d` (and cyclically for y, z); for fixed `x`
//! the admissible `y` solve an integer quadratic inequality, and for fixed
//! `(x, y)` the last coordinate is the exact integer root of a quadratic.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{div_ceil, div_floor, exact_sqrt, isqrt_i128};
use crate::error::{Error, Result};

pub type IntegerTriple = [i64; 3];
pub type IntegerQuadruple = [i64; 4];
/// Integer 3x3 matrix, row-major. Columns are images of the basis vectors.
pub type Mat3 = [[i64; 3]; 3];

/// Largest accepted absolute value of a form coefficient.
pub const COEFF_LIMIT: i64 = 1 << 20;
/// Largest accepted represented value (`n <= 2^62`).
pub const VALUE_LIMIT: i128 = 1 << 62;
/// Enumeration refuses coordinate boxes wider than this.
const COORD_LIMIT: i128 = 1 << 40;

pub const IDENTITY: Mat3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[i64; 6]", into = "[i64; 6]")]
pub struct TernaryForm {
    a: i64,
    b: i64,
    c: i64,
    r: i64,
    s: i64,
    t: i64,
}

impl TernaryForm {
    /// Builds `ax^2+by^2+cz^2+ryz+szx+txy`, rejecting forms that are not
    /// positive definite or whose coefficients exceed [`COEFF_LIMIT`].
    pub fn new(a: i64, b: i64, c: i64, r: i64, s: i64, t: i64) -> Result<Self> {
        if [a, b, c, r, s, t].iter().any(|v| v.abs() > COEFF_LIMIT) {
            return Err(Error::range(format!("coefficients of {a},{b},{c},{r},{s},{t} exceed 2^20")));
        }
        let f = TernaryForm { a, b, c, r, s, t };
        if !f.is_positive_definite() {
            return Err(Error::NotPositiveDefinite(f.to_string()));
        }
        Ok(f)
    }

    pub fn diagonal(a: i64, b: i64, c: i64) -> Result<Self> {
        Self::new(a, b, c, 0, 0, 0)
    }

    pub fn from_coeffs(c: [i64; 6]) -> Result<Self> {
        Self::new(c[0], c[1], c[2], c[3], c[4], c[5])
    }

    pub fn coeffs(&self) -> [i64; 6] {
        [self.a, self.b, self.c, self.r, self.s, self.t]
    }

    pub fn a(&self) -> i64 {
        self.a
    }
    pub fn b(&self) -> i64 {
        self.b
    }
    pub fn c(&self) -> i64 {
        self.c
    }
    pub fn r(&self) -> i64 {
        self.r
    }
    pub fn s(&self) -> i64 {
        self.s
    }
    pub fn t(&self) -> i64 {
        self.t
    }

    pub fn is_diagonal(&self) -> bool {
        self.r == 0 && self.s == 0 && self.t == 0
    }

    /// Gram matrix `A` with even diagonal.
    pub fn gram(&self) -> [[i128; 3]; 3] {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let (r, s, t) = (self.r as i128, self.s as i128, self.t as i128);
        [[2 * a, t, s], [t, 2 * b, r], [s, r, 2 * c]]
    }

    fn is_positive_definite(&self) -> bool {
        let (a, b) = (self.a as i128, self.b as i128);
        let t = self.t as i128;
        a > 0 && 4 * a * b - t * t > 0 && self.disc_i128() > 0
    }

    fn disc_i128(&self) -> i128 {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let (r, s, t) = (self.r as i128, self.s as i128, self.t as i128);
        4 * a * b * c + r * s * t - a * r * r - b * s * s - c * t * t
    }

    /// `d(f) = det(A)/2`; for a diagonal form this is `4abc`.
    pub fn discriminant(&self) -> i64 {
        self.disc_i128() as i64
    }

    pub fn evaluate(&self, v: IntegerTriple) -> Result<i128> {
        let [x, y, z] = v.map(|c| c as i128);
        let term = |k: i64, u: i128, w: i128| (k as i128).checked_mul(u.checked_mul(w)?);
        [
            term(self.a, x, x),
            term(self.b, y, y),
            term(self.c, z, z),
            term(self.r, y, z),
            term(self.s, z, x),
            term(self.t, x, y),
        ]
        .into_iter()
        .try_fold(0i128, |acc, t| acc.checked_add(t?))
        .ok_or_else(|| Error::range(format!("evaluating {self} at {v:?} overflows")))
    }

    /// Bilinear form `B(u,v) = u^T A v`, so `B(v,v) = 2 f(v)`.
    pub fn bilinear(&self, u: IntegerTriple, v: IntegerTriple) -> i128 {
        let g = self.gram();
        let mut acc = 0i128;
        for i in 0..3 {
            for j in 0..3 {
                acc += u[i] as i128 * g[i][j] * v[j] as i128;
            }
        }
        acc
    }

    /// The form `v -> f(M v)`. The columns of `M` become the new basis.
    pub fn transform(&self, m: &Mat3) -> Result<Self> {
        let g = self.gram();
        let mut out = [[0i128; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = 0i128;
                for k in 0..3 {
                    for l in 0..3 {
                        acc += m[k][i] as i128 * g[k][l] * m[l][j] as i128;
                    }
                }
                out[i][j] = acc;
            }
        }
        let narrow = |v: i128| i64::try_from(v).map_err(|_| Error::range("transformed form overflows"));
        TernaryForm::new(
            narrow(out[0][0] / 2)?,
            narrow(out[1][1] / 2)?,
            narrow(out[2][2] / 2)?,
            narrow(out[1][2])?,
            narrow(out[0][2])?,
            narrow(out[0][1])?,
        )
    }

    fn check_value(&self, n: i128) -> Result<()> {
        if !(0..=VALUE_LIMIT).contains(&n) {
            return Err(Error::range(format!("n = {n} outside [0, 2^62]")));
        }
        Ok(())
    }

    /// Per-coordinate bounds `|x_i| <= floor(sqrt(n * minor_i / d))`.
    fn coordinate_bounds(&self, n: i128) -> Result<[i128; 3]> {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let (r, s, t) = (self.r as i128, self.s as i128, self.t as i128);
        let d = self.disc_i128();
        let minors = [4 * b * c - r * r, 4 * a * c - s * s, 4 * a * b - t * t];
        let mut out = [0i128; 3];
        for (slot, m) in out.iter_mut().zip(minors) {
            let bound = isqrt_i128(n * m / d).unwrap_or(0);
            if bound > COORD_LIMIT {
                return Err(Error::range(format!("enumeration box for n = {n} is too large")));
            }
            *slot = bound;
        }
        Ok(out)
    }

    /// Integer `y` range admissible for fixed `x` when `f <= n`: the roots of
    /// `(4bc-r^2) y^2 + (4ct-2rs) x y + (4ac-s^2) x^2 - 4cn <= 0`, widened by
    /// one unit of the integer square root so the range is a superset.
    fn y_range(&self, x: i128, n: i128) -> Option<(i128, i128)> {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let (r, s, t) = (self.r as i128, self.s as i128, self.t as i128);
        let p = 4 * b * c - r * r;
        let q = (4 * c * t - 2 * r * s) * x;
        let rr = (4 * a * c - s * s) * x * x - 4 * c * n;
        let disc = q * q - 4 * p * rr;
        let root = isqrt_i128(disc)?;
        let lo = div_ceil(-q - root - 1, 2 * p);
        let hi = div_floor(-q + root + 1, 2 * p);
        (lo <= hi).then_some((lo, hi))
    }

    /// Integer roots `z` of `f(x, y, z) = n`, ascending.
    fn z_roots(&self, x: i128, y: i128, n: i128) -> ([i128; 2], usize) {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let (r, s, t) = (self.r as i128, self.s as i128, self.t as i128);
        let lin = r * y + s * x;
        let rest = a * x * x + b * y * y + t * x * y - n;
        let disc = lin * lin - 4 * c * rest;
        let Some(q) = exact_sqrt(disc) else {
            return ([0; 2], 0);
        };
        let mut out = [0i128; 2];
        let mut k = 0;
        for num in [-lin - q, -lin + q] {
            if num % (2 * c) == 0 && (k == 0 || out[0] != num / (2 * c)) {
                out[k] = num / (2 * c);
                k += 1;
            }
        }
        (out, k)
    }

    /// Lazy lexicographic iterator over all `v` with `f(v) = n`.
    pub fn represent_iter(&self, n: i64) -> Result<RepresentIter> {
        let n = n as i128;
        self.check_value(n)?;
        let [xb, _, _] = self.coordinate_bounds(n)?;
        Ok(RepresentIter {
            form: *self,
            n,
            x: -xb,
            x_max: xb,
            y: 0,
            y_max: -1,
            buf: [0; 2],
            buf_len: 0,
            buf_pos: 0,
            buf_y: 0,
            started: false,
        })
    }

    /// Every integer triple with `f(v) = n`, in lexicographic order.
    pub fn represent_all(&self, n: i64) -> Result<Vec<IntegerTriple>> {
        Ok(self.represent_iter(n)?.collect())
    }

    /// `r(f, n)`, computed without materialising the solutions.
    pub fn represent_count(&self, n: i64) -> Result<u64> {
        let n128 = n as i128;
        self.check_value(n128)?;
        let [xb, _, _] = self.coordinate_bounds(n128)?;
        let mut count = 0u64;
        for x in -xb..=xb {
            if let Some((lo, hi)) = self.y_range(x, n128) {
                for y in lo..=hi {
                    count += self.z_roots(x, y, n128).1 as u64;
                }
            }
        }
        Ok(count)
    }

    /// Whether `f` represents `n` at all (stops at the first solution).
    pub fn represents(&self, n: i64) -> Result<bool> {
        Ok(self.represent_iter(n)?.next().is_some())
    }

    /// All nonzero `v` with `f(v) <= bound`, paired with `f(v)`, sorted by
    /// value and then lexicographically.
    pub fn short_vectors(&self, bound: i64) -> Result<Vec<(IntegerTriple, i64)>> {
        let n = bound as i128;
        self.check_value(n)?;
        let [xb, _, _] = self.coordinate_bounds(n)?;
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        let (r, s, t) = (self.r as i128, self.s as i128, self.t as i128);
        let mut out = Vec::new();
        for x in -xb..=xb {
            let Some((ylo, yhi)) = self.y_range(x, n) else { continue };
            for y in ylo..=yhi {
                let lin = r * y + s * x;
                let rest = a * x * x + b * y * y + t * x * y - n;
                let disc = lin * lin - 4 * c * rest;
                let Some(root) = isqrt_i128(disc) else { continue };
                let zlo = div_ceil(-lin - root - 1, 2 * c);
                let zhi = div_floor(-lin + root + 1, 2 * c);
                for z in zlo..=zhi {
                    let v = c * z * z + lin * z + rest + n;
                    if v > 0 && v <= n {
                        out.push(([x as i64, y as i64, z as i64], v as i64));
                    }
                }
            }
        }
        out.sort_by_key(|&(v, val)| (val, v));
        Ok(out)
    }

    /// A basis change making the diagonal small: repeated pairwise size
    /// reduction and sorting until no step lowers `f(b1)+f(b2)+f(b3)`.
    /// Returns the reduced form and `M` with `reduced = f∘M`.
    pub fn greedy_reduce(&self) -> (TernaryForm, Mat3) {
        let mut m = IDENTITY;
        let mut g = *self;
        loop {
            let mut improved = false;
            // sort basis by norm
            let diag = [g.a, g.b, g.c];
            let mut order = [0usize, 1, 2];
            order.sort_by_key(|&i| (diag[i], i));
            if order != [0, 1, 2] {
                let p = permutation_matrix(order);
                m = mat_mul(&m, &p);
                g = self.transform(&m).expect("unimodular change keeps definiteness");
            }
            for j in 0..3 {
                for i in 0..3 {
                    if i == j {
                        continue;
                    }
                    let gram = g.gram();
                    let (bij, nii) = (gram[i][j], gram[i][i]);
                    // f(b_j - q b_i) = f(b_j) - q B_ij + q^2 f(b_i)
                    let q = (2 * bij + nii).div_euclid(2 * nii);
                    if q != 0 && q * q * (nii / 2) - q * bij < 0 {
                        let mut e = IDENTITY;
                        e[i][j] = -(q as i64);
                        m = mat_mul(&m, &e);
                        g = self.transform(&m).expect("unimodular change keeps definiteness");
                        improved = true;
                    }
                }
            }
            // b3 against b3 ± b1 ± b2
            for (e1, e2) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let cand = [e1, e2, 1];
                let val = g.evaluate(cand).expect("small vector");
                if val < g.c as i128 {
                    let e = [[1, 0, e1], [0, 1, e2], [0, 0, 1]];
                    m = mat_mul(&m, &e);
                    g = self.transform(&m).expect("unimodular change keeps definiteness");
                    improved = true;
                }
            }
            if !improved {
                let diag = [g.a, g.b, g.c];
                if diag[0] <= diag[1] && diag[1] <= diag[2] {
                    return (g, m);
                }
            }
        }
    }

    /// The full integral isometry group `{M : M^T A M = A}`, sorted.
    ///
    /// Columns of an isometry are vectors of norms `a`, `b`, `c` with the
    /// prescribed pairwise inner products; the search runs on a greedily
    /// reduced basis and is conjugated back.
    pub fn automorphisms(&self) -> Vec<Mat3> {
        let (g, m) = self.greedy_reduce();
        let m_inv = unimodular_inverse(&m);
        let mut out: Vec<Mat3> = g
            .automorphisms_direct()
            .into_iter()
            .map(|n| mat_mul(&mat_mul(&m, &n), &m_inv))
            .collect();
        out.sort();
        out
    }

    fn automorphisms_direct(&self) -> Vec<Mat3> {
        let gram = self.gram();
        let cols = |v: i64| self.represent_all(v).expect("diagonal values are small");
        let (c1, c2, c3) = (cols(self.a), cols(self.b), cols(self.c));
        let mut out = Vec::new();
        for u in &c1 {
            for v in &c2 {
                if self.bilinear(*u, *v) != gram[0][1] {
                    continue;
                }
                for w in &c3 {
                    if self.bilinear(*u, *w) == gram[0][2] && self.bilinear(*v, *w) == gram[1][2] {
                        out.push(from_columns(*u, *v, *w));
                    }
                }
            }
        }
        out
    }

    /// Whether `M^T A M = A` holds exactly.
    pub fn is_automorphism(&self, m: &Mat3) -> bool {
        self.transform(m).map(|g| g == *self).unwrap_or(false)
    }
}

impl fmt::Display for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{},{},{}", self.a, self.b, self.c, self.r, self.s, self.t)
    }
}

impl FromStr for TernaryForm {
    type Err = Error;

    /// Parses `a,b,c,r,s,t`; the short form `a,b,c` denotes a diagonal form.
    fn from_str(s: &str) -> Result<Self> {
        let parts = parse_int_list(s)?;
        match parts.len() {
            3 => Self::new(parts[0], parts[1], parts[2], 0, 0, 0),
            6 => Self::new(parts[0], parts[1], parts[2], parts[3], parts[4], parts[5]),
            k => Err(Error::parse(s, format!("expected 6 (or 3) coefficients, got {k}"))),
        }
    }
}

impl TryFrom<[i64; 6]> for TernaryForm {
    type Error = Error;
    fn try_from(c: [i64; 6]) -> Result<Self> {
        Self::from_coeffs(c)
    }
}

impl From<TernaryForm> for [i64; 6] {
    fn from(f: TernaryForm) -> Self {
        f.coeffs()
    }
}

/// Lexicographic iterator returned by [`TernaryForm::represent_iter`].
pub struct RepresentIter {
    form: TernaryForm,
    n: i128,
    /// Row currently being scanned.
    x: i128,
    x_max: i128,
    /// Next `y` to scan in the current row.
    y: i128,
    y_max: i128,
    buf: [i128; 2],
    buf_len: usize,
    buf_pos: usize,
    buf_y: i128,
    started: bool,
}

impl Iterator for RepresentIter {
    type Item = IntegerTriple;

    fn next(&mut self) -> Option<IntegerTriple> {
        loop {
            if self.buf_pos < self.buf_len {
                let z = self.buf[self.buf_pos];
                self.buf_pos += 1;
                return Some([self.x as i64, self.buf_y as i64, z as i64]);
            }
            if self.y > self.y_max {
                if self.started {
                    self.x += 1;
                }
                self.started = true;
                if self.x > self.x_max {
                    return None;
                }
                match self.form.y_range(self.x, self.n) {
                    Some((lo, hi)) => {
                        self.y = lo;
                        self.y_max = hi;
                    }
                    None => continue,
                }
            }
            let (roots, k) = self.form.z_roots(self.x, self.y, self.n);
            self.buf = roots;
            self.buf_len = k;
            self.buf_pos = 0;
            self.buf_y = self.y;
            self.y += 1;
        }
    }
}

/// Positive diagonal quaternary form `d1 x^2 + d2 y^2 + d3 z^2 + d4 w^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[i64; 4]", into = "[i64; 4]")]
pub struct DiagonalQuaternary {
    weights: [i64; 4],
}

impl DiagonalQuaternary {
    pub fn new(weights: [i64; 4]) -> Result<Self> {
        if weights.iter().any(|&w| w < 1) {
            return Err(Error::Invalid(format!("weights {weights:?} must all be >= 1")));
        }
        if weights.iter().any(|&w| w > COEFF_LIMIT) {
            return Err(Error::range(format!("weights {weights:?} exceed 2^20")));
        }
        Ok(DiagonalQuaternary { weights })
    }

    pub fn weights(&self) -> [i64; 4] {
        self.weights
    }

    pub fn evaluate(&self, v: IntegerQuadruple) -> i128 {
        self.weights.iter().zip(v).map(|(&d, x)| d as i128 * x as i128 * x as i128).sum()
    }
}

impl fmt::Display for DiagonalQuaternary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.weights;
        write!(f, "{a},{b},{c},{d}")
    }
}

impl FromStr for DiagonalQuaternary {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts = parse_int_list(s)?;
        let weights: [i64; 4] =
            parts.try_into().map_err(|_| Error::parse(s, "expected 4 comma-separated weights"))?;
        Self::new(weights)
    }
}

impl TryFrom<[i64; 4]> for DiagonalQuaternary {
    type Error = Error;
    fn try_from(w: [i64; 4]) -> Result<Self> {
        Self::new(w)
    }
}

impl From<DiagonalQuaternary> for [i64; 4] {
    fn from(q: DiagonalQuaternary) -> Self {
        q.weights
    }
}

/// Parses an ASCII comma-separated integer list without spaces.
pub fn parse_int_list(s: &str) -> Result<Vec<i64>> {
    if s.is_empty() {
        return Err(Error::parse(s, "empty literal"));
    }
    s.split(',')
        .map(|p| {
            if p.is_empty() || p.contains(char::is_whitespace) {
                return Err(Error::parse(s, "empty field or whitespace"));
            }
            p.parse::<i64>().map_err(|e| Error::parse(s, e.to_string()))
        })
        .collect()
}

pub fn mat_mul(x: &Mat3, y: &Mat3) -> Mat3 {
    let mut out = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| x[i][k] * y[k][j]).sum();
        }
    }
    out
}

pub fn det3(m: &Mat3) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Inverse of a determinant ±1 matrix via the adjugate.
pub fn unimodular_inverse(m: &Mat3) -> Mat3 {
    let det = det3(m);
    assert!(det == 1 || det == -1, "matrix is not unimodular");
    let mut adj = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
            let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
            adj[i][j] = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
        }
    }
    adj.map(|row| row.map(|v| v * det))
}

pub fn from_columns(u: IntegerTriple, v: IntegerTriple, w: IntegerTriple) -> Mat3 {
    [[u[0], v[0], w[0]], [u[1], v[1], w[1]], [u[2], v[2], w[2]]]
}

pub fn apply(m: &Mat3, v: IntegerTriple) -> IntegerTriple {
    [0, 1, 2].map(|i| (0..3).map(|k| m[i][k] * v[k]).sum())
}

fn permutation_matrix(order: [usize; 3]) -> Mat3 {
    let mut p = [[0i64; 3]; 3];
    for (new, &old) in order.iter().enumerate() {
        p[old][new] = 1;
    }
    p
}
