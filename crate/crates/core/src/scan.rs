//! Brute-force restricted representations and range scans.
//!
//! `find_restricted` eliminates the variable with the largest linear
//! coefficient through the linear equation, loops over two of the remaining
//! variables and solves the last one exactly from the quadratic equation.
//! Square and power-of-four targets iterate over target values.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{exact_sqrt, is_square_small, isqrt_i128, mod_inverse};
use crate::constructive::{decompose, validate, AlgorithmId, Domain, Outcome, RestrictionSpec, Target, UnavailableStage};
use crate::error::{Error, Result};
use crate::forms::{parse_int_list, DiagonalQuaternary, IntegerQuadruple, COEFF_LIMIT};

pub const SHARD_WIDTH: i64 = 4096;

/// A quadruple with its form value and linear value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub n: i64,
    pub quad: IntegerQuadruple,
    pub linear_value: i64,
}

impl Witness {
    pub fn check(&self, form: &DiagonalQuaternary, restriction: &RestrictionSpec) -> bool {
        form.evaluate(self.quad) == self.n as i128
            && restriction.admits(&self.quad)
            && restriction.linear_value(&self.quad) == self.linear_value as i128
    }
}

/// Order `0, 1, -1, 2, -2, ...` restricted to `[lo, hi]` (with `lo <= 0`).
fn outward(lo: i64, hi: i64) -> impl Iterator<Item = i64> {
    let span = hi.max(-lo);
    std::iter::once(0).chain((1..=span).flat_map(|k| [k, -k])).filter(move |&x| x >= lo && x <= hi)
}

struct Plan {
    d: [i128; 4],
    c: [i128; 4],
    k: usize,
    j: usize,
    a: usize,
    b: usize,
    nat: bool,
}

impl Plan {
    fn new(form: &DiagonalQuaternary, r: &RestrictionSpec) -> Option<Plan> {
        let c = r.coefficients.map(|x| x as i128);
        let d = form.weights().map(|x| x as i128);
        let k = (0..4).filter(|&i| c[i] != 0).max_by_key(|&i| (c[i].abs(), std::cmp::Reverse(i)))?;
        let rest: Vec<usize> = (0..4).filter(|&i| i != k).collect();
        let j = *rest.iter().min_by_key(|&&i| (c[i].abs(), i)).expect("three left");
        let others: Vec<usize> = rest.into_iter().filter(|&i| i != j).collect();
        Some(Plan { d, c, k, j, a: others[0], b: others[1], nat: r.domain == Domain::Naturals })
    }

    fn nonneg_coeffs(&self) -> bool {
        self.c.iter().all(|&x| x >= 0)
    }

    /// First solution with linear value `v` in loop order.
    fn solve(&self, n: i128, v: i128) -> Option<IntegerQuadruple> {
        if self.c[self.j] == 0 {
            return self.solve_free(n as i64, v as i64);
        }
        let Plan { d, c, a, b, nat, .. } = *self;
        if nat && self.nonneg_coeffs() && v < 0 {
            return None;
        }
        let bound = |m: i128, w: i128| isqrt_i128(m / w).unwrap_or(0);
        let lin_cap = |ci: i128, rem: i128| if nat && self.nonneg_coeffs() && ci > 0 { Some(rem / ci) } else { None };

        let amax = bound(n, d[a]);
        let amax = lin_cap(c[a], v).map_or(amax, |cap| amax.min(cap));
        let alo = if nat { 0 } else { -amax };
        for xa in outward(alo as i64, amax as i64) {
            let xa = xa as i128;
            let ma = n - d[a] * xa * xa;
            let bmax = bound(ma, d[b]);
            let bmax = lin_cap(c[b], v - c[a] * xa).map_or(bmax, |cap| bmax.min(cap));
            if bmax < 0 {
                continue;
            }
            let blo = if nat { 0 } else { -bmax };
            for xb in outward(blo as i64, bmax as i64) {
                let xb = xb as i128;
                let m = ma - d[b] * xb * xb;
                let rr = v - c[a] * xa - c[b] * xb;
                if let Some(q) = self.finish(m, rr, xa, xb) {
                    return Some(q);
                }
            }
        }
        None
    }

    /// The common case `c_j = 0`: `x_k` is fixed by the linear equation, so
    /// `x_b` only runs through one residue class and `x_j` is a square root.
    /// Everything fits in `i64` under the limits `find_restricted` enforces.
    fn solve_free(&self, n: i64, v: i64) -> Option<IntegerQuadruple> {
        let d = self.d.map(|x| x as i64);
        let c = self.c.map(|x| x as i64);
        let Plan { k, j, a, b, nat, .. } = *self;
        let capped = nat && self.nonneg_coeffs();
        if capped && v < 0 {
            return None;
        }
        let ck = c[k];
        let mut amax = isqrt_i64(n / d[a]);
        if capped && c[a] > 0 {
            amax = amax.min(v / c[a]);
        }
        let alo = if nat { 0 } else { -amax };
        for xa in outward(alo, amax) {
            let ma = n - d[a] * xa * xa;
            let ra = v - c[a] * xa;
            let mut bmax = isqrt_i64(ma / d[b]);
            if capped && c[b] > 0 {
                bmax = bmax.min(ra.div_euclid(c[b]));
            }
            if bmax < 0 {
                continue;
            }
            let Some((x0, step)) = congruence(c[b], ra, ck) else { continue };
            let try_b = |xb: i64| -> Option<IntegerQuadruple> {
                let xk = (ra - c[b] * xb) / ck;
                if nat && xk < 0 {
                    return None;
                }
                let rest = ma - d[b] * xb * xb - d[k] * xk * xk;
                if rest < 0 || rest % d[j] != 0 || !is_square_small((rest / d[j]) as u64) {
                    return None;
                }
                let mut q = [0i64; 4];
                q[a] = xa;
                q[b] = xb;
                q[j] = isqrt_i64(rest / d[j]);
                q[k] = xk;
                Some(q)
            };
            let mut up = x0;
            let mut down = x0 - step;
            let lo = if nat { 0 } else { -bmax };
            while up <= bmax || down >= lo {
                if up <= bmax {
                    if let Some(q) = try_b(up) {
                        return Some(q);
                    }
                    up += step;
                }
                if !nat && down >= lo {
                    if let Some(q) = try_b(down) {
                        return Some(q);
                    }
                    down -= step;
                }
                if nat && up > bmax {
                    break;
                }
            }
        }
        None
    }

    /// Solves `d_j x_j^2 + d_k x_k^2 = m` with `c_j x_j + c_k x_k = rr`.
    fn finish(&self, m: i128, rr: i128, xa: i128, xb: i128) -> Option<IntegerQuadruple> {
        let Plan { d, c, k, j, a, b, nat } = *self;
        let (cj, ck, dj, dk) = (c[j], c[k], d[j], d[k]);
        let build = |xj: i128| -> Option<IntegerQuadruple> {
            let num = rr - cj * xj;
            if num % ck != 0 {
                return None;
            }
            let xk = num / ck;
            if nat && (xj < 0 || xk < 0) {
                return None;
            }
            if dj * xj * xj + dk * xk * xk != m {
                return None;
            }
            let mut q = [0i64; 4];
            q[a] = xa as i64;
            q[b] = xb as i64;
            q[j] = xj as i64;
            q[k] = xk as i64;
            Some(q)
        };
        if cj == 0 {
            if rr % ck != 0 {
                return None;
            }
            let xk = rr / ck;
            let rest = m - dk * xk * xk;
            if rest < 0 || rest % dj != 0 {
                return None;
            }
            let root = exact_sqrt(rest / dj)?;
            return build(root).or_else(|| if root != 0 { build(-root) } else { None });
        }
        // (dj ck^2 + dk cj^2) xj^2 - 2 dk cj rr xj + dk rr^2 - ck^2 m = 0
        let qa = dj * ck * ck + dk * cj * cj;
        let qb = -2 * dk * cj * rr;
        let qc = dk * rr * rr - ck * ck * m;
        let disc = qb * qb - 4 * qa * qc;
        if disc < 0 {
            return None;
        }
        let root = exact_sqrt(disc)?;
        let mut roots = [(-qb - root), (-qb + root)];
        if roots[0] > roots[1] {
            roots.swap(0, 1);
        }
        let mut found = None;
        for num in roots {
            if num % (2 * qa) == 0 {
                if let Some(q) = build(num / (2 * qa)) {
                    found = Some(q);
                    break;
                }
            }
        }
        found
    }
}

fn isqrt_i64(m: i64) -> i64 {
    if m <= 0 {
        0
    } else {
        isqrt_i128(m as i128).unwrap_or(0) as i64
    }
}

/// Solutions of `cb x ≡ ra (mod ck)` as `x ≡ x0 (mod step)` with
/// `0 <= x0 < step`.
fn congruence(cb: i64, ra: i64, ck: i64) -> Option<(i64, i64)> {
    let m = ck.abs();
    let g = num_integer::gcd(cb.rem_euclid(m), m);
    if ra.rem_euclid(g) != 0 {
        return None;
    }
    let step = m / g;
    if step == 1 {
        return Some((0, 1));
    }
    let inv = mod_inverse((cb / g) as i128, step as i128)? as i64;
    Some((((ra / g).rem_euclid(step) * inv).rem_euclid(step), step))
}

/// Largest `|linear value|` a solution of `form = n` can reach.
pub fn linear_bound(form: &DiagonalQuaternary, r: &RestrictionSpec, n: i64) -> i128 {
    let dmin = *form.weights().iter().min().expect("four weights") as i128;
    let per = crate::arith::isqrt_i128(n as i128 / dmin).unwrap_or(0);
    let per = if per * per * dmin < n as i128 { per + 1 } else { per };
    r.coefficients.iter().map(|c| (*c as i128).abs()).sum::<i128>() * per
}

/// Target values to try for `n`, in ascending order where infinite.
fn target_values(form: &DiagonalQuaternary, r: &RestrictionSpec, n: i64) -> Vec<i128> {
    let bound = linear_bound(form, r, n);
    let lo = if r.domain == Domain::Naturals && r.coefficients.iter().all(|&c| c >= 0) { 0 } else { -bound };
    match &r.target {
        Target::Fixed(v) => vec![*v as i128],
        Target::AnyOf(vs) => vs.iter().map(|&v| v as i128).filter(|v| *v >= lo && *v <= bound).collect(),
        Target::PerfectSquare => (0..).map(|m: i128| m * m).take_while(|&v| v <= bound).collect(),
        Target::PowerOfFour => {
            let mut out = vec![];
            let mut v = 1i128;
            while v <= bound {
                out.push(v);
                v *= 4;
            }
            out
        }
    }
}

/// A witness for `n` under `restriction`, or `None` after an exhaustive
/// search.
pub fn find_restricted(form: &DiagonalQuaternary, restriction: &RestrictionSpec, n: i64) -> Result<Option<Witness>> {
    if n < 0 {
        return Err(Error::range(format!("n = {n} is negative")));
    }
    if n as i128 > 1i128 << 52 {
        return Err(Error::range(format!("n = {n} too large for a brute-force search")));
    }
    if restriction.coefficients.iter().any(|c| c.abs() > COEFF_LIMIT) {
        return Err(Error::range(format!("linear coefficients must lie within ±{COEFF_LIMIT}")));
    }
    let Some(plan) = Plan::new(form, restriction) else {
        // All linear coefficients vanish: the linear value is 0.
        if !restriction.target.contains(0) {
            return Ok(None);
        }
        return Ok(find_unrestricted(form, restriction.domain, n).map(|quad| Witness { n, quad, linear_value: 0 }));
    };
    let bound = linear_bound(form, restriction, n);
    for v in target_values(form, restriction, n) {
        if v.abs() > bound {
            continue;
        }
        if let Some(quad) = plan.solve(n as i128, v) {
            let w = Witness { n, quad, linear_value: v as i64 };
            debug_assert!(w.check(form, restriction));
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn find_unrestricted(form: &DiagonalQuaternary, domain: Domain, n: i64) -> Option<IntegerQuadruple> {
    let any = RestrictionSpec { coefficients: [0, 0, 0, 1], target: Target::Fixed(0), domain };
    let d = form.weights();
    let w = isqrt_i128(n as i128 / d[3] as i128).unwrap_or(0) as i64;
    let lo = if domain == Domain::Naturals { 0 } else { -w };
    outward(lo, w).find_map(|xw| {
        let mut r = any.clone();
        r.target = Target::Fixed(xw);
        Plan::new(form, &r)?.solve(n as i128, xw as i128)
    })
}

/// Residue classes removed from a scan, e.g. `16:0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueFilter {
    pub modulus: i64,
    pub residues: Vec<i64>,
}

impl ResidueFilter {
    pub fn new(modulus: i64, residues: Vec<i64>) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::Invalid(format!("modulus {modulus} must be at least 2")));
        }
        let mut residues: Vec<i64> = residues.into_iter().map(|r| r.rem_euclid(modulus)).collect();
        residues.sort_unstable();
        residues.dedup();
        Ok(ResidueFilter { modulus, residues })
    }

    pub fn excludes(&self, n: i64) -> bool {
        self.residues.contains(&n.rem_euclid(self.modulus))
    }
}

impl FromStr for ResidueFilter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (m, rs) = s.split_once(':').ok_or_else(|| Error::parse(s, "expected M:R1,R2,..."))?;
        let m = m.trim().parse().map_err(|_| Error::parse(s, "bad modulus"))?;
        ResidueFilter::new(m, parse_int_list(rs)?)
    }
}

impl fmt::Display for ResidueFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rs: Vec<String> = self.residues.iter().map(|r| r.to_string()).collect();
        write!(f, "{}:{}", self.modulus, rs.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanProblem {
    pub form: DiagonalQuaternary,
    pub restriction: RestrictionSpec,
    pub lo: i64,
    pub hi: i64,
    #[serde(default)]
    pub exclude: Vec<ResidueFilter>,
    /// Witnesses are kept for `n` with `(n - lo) % witness_stride == 0`;
    /// 0 keeps none.
    #[serde(default)]
    pub witness_stride: i64,
}

impl ScanProblem {
    pub fn new(form: DiagonalQuaternary, restriction: RestrictionSpec, lo: i64, hi: i64) -> Result<Self> {
        if lo < 0 {
            return Err(Error::range(format!("range start {lo} is negative")));
        }
        Ok(ScanProblem { form, restriction, lo, hi, exclude: Vec::new(), witness_stride: 1024 })
    }

    pub fn excluded(&self, n: i64) -> bool {
        self.exclude.iter().any(|f| f.excludes(n))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanCounts {
    pub scanned: u64,
    pub excluded: u64,
    pub witnessed: u64,
    pub exceptions: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    pub problem: ScanProblem,
    pub exceptions: Vec<i64>,
    pub witnesses: BTreeMap<i64, Witness>,
    pub counts: ScanCounts,
    /// Not serialized, so reports compare byte-for-byte across runs.
    #[serde(skip)]
    pub wall_time: Duration,
}

struct Shard {
    exceptions: Vec<i64>,
    witnesses: Vec<Witness>,
    counts: ScanCounts,
}

fn run_shard(p: &ScanProblem, lo: i64, hi: i64) -> Result<Shard> {
    let mut s = Shard { exceptions: vec![], witnesses: vec![], counts: ScanCounts::default() };
    for n in lo..=hi {
        if p.excluded(n) {
            s.counts.excluded += 1;
            continue;
        }
        s.counts.scanned += 1;
        match find_restricted(&p.form, &p.restriction, n)? {
            Some(w) => {
                if !w.check(&p.form, &p.restriction) {
                    return Err(Error::Invalid(format!("witness for {n} failed re-validation")));
                }
                s.counts.witnessed += 1;
                if p.witness_stride > 0 && (n - p.lo) % p.witness_stride == 0 {
                    s.witnesses.push(w);
                }
            }
            None => {
                s.counts.exceptions += 1;
                s.exceptions.push(n);
            }
        }
    }
    Ok(s)
}

/// Scans `[lo, hi]` in fixed shards on `workers` threads. The report does
/// not depend on `workers`.
pub fn scan_range(p: &ScanProblem, workers: usize) -> Result<ScanReport> {
    if workers == 0 {
        return Err(Error::Invalid("workers must be at least 1".into()));
    }
    let start = Instant::now();
    let shards: Vec<(i64, i64)> = if p.lo > p.hi {
        vec![]
    } else {
        let mut v = vec![];
        let mut a = p.lo;
        while a <= p.hi {
            let b = a.saturating_add(SHARD_WIDTH - 1).min(p.hi);
            v.push((a, b));
            if b == p.hi {
                break;
            }
            a = b + 1;
        }
        v
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
    let results: Vec<Result<Shard>> = pool.install(|| shards.par_iter().map(|&(a, b)| run_shard(p, a, b)).collect());
    let mut report = ScanReport {
        problem: p.clone(),
        exceptions: vec![],
        witnesses: BTreeMap::new(),
        counts: ScanCounts::default(),
        wall_time: Duration::ZERO,
    };
    for shard in results {
        let shard = shard?;
        report.exceptions.extend(shard.exceptions);
        report.witnesses.extend(shard.witnesses.into_iter().map(|w| (w.n, w)));
        report.counts.scanned += shard.counts.scanned;
        report.counts.excluded += shard.counts.excluded;
        report.counts.witnessed += shard.counts.witnessed;
        report.counts.exceptions += shard.counts.exceptions;
    }
    report.wall_time = start.elapsed();
    Ok(report)
}

/// Per-`n` disagreement found by [`cross_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheckReport {
    pub variant: AlgorithmId,
    pub lo: i64,
    pub hi: i64,
    pub decomposed: u64,
    /// `n` where the construction was unavailable, with the stage.
    pub unavailable: Vec<(i64, UnavailableStage)>,
    /// Unavailable `n` for which brute force still finds a witness.
    pub unavailable_but_witnessed: Vec<i64>,
    /// `n` without any witness.
    pub brute_force_exceptions: Vec<i64>,
    /// Decompositions that failed validation.
    pub validation_failures: Vec<i64>,
    /// Decomposition succeeded but brute force found nothing.
    pub mismatches: Vec<i64>,
    /// Constructions that raised an error.
    pub errors: Vec<(i64, String)>,
}

impl CrossCheckReport {
    pub fn consistent(&self) -> bool {
        self.validation_failures.is_empty() && self.mismatches.is_empty() && self.errors.is_empty()
    }
}

enum Row {
    Found { valid: bool, witnessed: bool },
    Unavailable { stage: UnavailableStage, witnessed: bool },
    Failed(String),
}

/// Compares `decompose` with `find_restricted` for every `n` in `[lo, hi]`.
pub fn cross_check(variant: AlgorithmId, lo: i64, hi: i64) -> Result<CrossCheckReport> {
    let (form, restriction) =
        variant.restriction().ok_or_else(|| Error::NotATheoremVariant(variant.to_string()))?;
    let lo = lo.max(1);
    let rows: Vec<(i64, Result<Row>)> = (lo..=hi)
        .into_par_iter()
        .map(|n| {
            let row = (|| {
                let witnessed = find_restricted(&form, &restriction, n)?.is_some();
                Ok(match decompose(variant, n) {
                    Ok(Outcome::Found(d)) => Row::Found { valid: validate(&d, n), witnessed },
                    Ok(Outcome::Unavailable { stage, .. }) => Row::Unavailable { stage, witnessed },
                    Err(e) => Row::Failed(e.to_string()),
                })
            })();
            (n, row)
        })
        .collect();
    let mut rep = CrossCheckReport {
        variant,
        lo,
        hi,
        decomposed: 0,
        unavailable: vec![],
        unavailable_but_witnessed: vec![],
        brute_force_exceptions: vec![],
        validation_failures: vec![],
        mismatches: vec![],
        errors: vec![],
    };
    for (n, row) in rows {
        match row? {
            Row::Found { valid, witnessed } => {
                rep.decomposed += 1;
                if !valid {
                    rep.validation_failures.push(n);
                }
                if !witnessed {
                    rep.mismatches.push(n);
                    rep.brute_force_exceptions.push(n);
                }
            }
            Row::Unavailable { stage, witnessed } => {
                rep.unavailable.push((n, stage));
                if witnessed {
                    rep.unavailable_but_witnessed.push(n);
                } else {
                    rep.brute_force_exceptions.push(n);
                }
            }
            Row::Failed(msg) => rep.errors.push((n, msg)),
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad(w: [i64; 4]) -> DiagonalQuaternary {
        DiagonalQuaternary::new(w).unwrap()
    }

    fn spec(c: [i64; 4], t: Target, d: Domain) -> RestrictionSpec {
        RestrictionSpec::new(c, t, d).unwrap()
    }

    /// Exhaustive search over the whole box.
    fn brute(form: &DiagonalQuaternary, r: &RestrictionSpec, n: i64) -> bool {
        let b = (n as f64).sqrt() as i64 + 1;
        let lo = if r.domain == Domain::Naturals { 0 } else { -b };
        for x in lo..=b {
            for y in lo..=b {
                for z in lo..=b {
                    for w in lo..=b {
                        let q = [x, y, z, w];
                        if form.evaluate(q) == n as i128 && r.admits(&q) {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }

    #[test]
    fn examples() {
        let r = spec([1, 3, 5, 0], Target::PerfectSquare, Domain::Naturals);
        let w = find_restricted(&quad([1, 1, 1, 1]), &r, 14).unwrap().unwrap();
        assert!(w.check(&quad([1, 1, 1, 1]), &r));
        assert!(r.admits(&[2, 3, 1, 0]));

        let r = spec([0, 1, 1, 1], Target::Fixed(1), Domain::Integers);
        let w = find_restricted(&quad([1, 1, 1, 2]), &r, 1).unwrap().unwrap();
        assert_eq!(w.quad, [0, 1, 0, 0]);

        let r = spec([1, 3, 5, 0], Target::AnyOf(vec![1, 4]), Domain::Integers);
        assert!(find_restricted(&quad([1, 1, 1, 1]), &r, 0).unwrap().is_none());
    }

    #[test]
    fn agrees_with_box_search() {
        let cases = [
            (quad([1, 1, 1, 1]), spec([1, 3, 5, 0], Target::PerfectSquare, Domain::Naturals)),
            (quad([1, 1, 1, 1]), spec([1, 3, 5, 0], Target::AnyOf(vec![1, 4]), Domain::Integers)),
            (quad([1, 1, 1, 2]), spec([1, 2, 3, 0], Target::Fixed(1), Domain::Integers)),
            (quad([1, 1, 2, 3]), spec([1, 2, 0, 1], Target::Fixed(1), Domain::Integers)),
            (quad([1, 2, 3, 5]), spec([2, -3, 1, 4], Target::PowerOfFour, Domain::Integers)),
            (quad([1, 1, 3, 4]), spec([0, 1, 1, 2], Target::Fixed(1), Domain::Naturals)),
            (quad([1, 1, 1, 1]), spec([0, 0, 0, 0], Target::Fixed(0), Domain::Integers)),
            (quad([1, 2, 3, 5]), spec([2, -3, 0, 4], Target::PerfectSquare, Domain::Integers)),
            (quad([1, 2, 3, 5]), spec([2, -3, 0, 4], Target::Fixed(3), Domain::Naturals)),
            (quad([2, 1, 1, 3]), spec([0, 6, -4, 0], Target::AnyOf(vec![-2, 2, 10]), Domain::Integers)),
        ];
        for (form, r) in &cases {
            for n in 0..=60 {
                let got = find_restricted(form, r, n).unwrap();
                if let Some(w) = &got {
                    assert!(w.check(form, r), "{form} {r:?} {n}");
                }
                assert_eq!(got.is_some(), brute(form, r, n), "{form} {r:?} {n}");
            }
        }
    }

    #[test]
    fn deterministic_across_workers() {
        let mut p = ScanProblem::new(
            quad([1, 1, 1, 2]),
            spec([1, 2, 3, 0], Target::Fixed(1), Domain::Integers),
            1,
            9000,
        )
        .unwrap();
        p.witness_stride = 97;
        let one = serde_json::to_string(&scan_range(&p, 1).unwrap()).unwrap();
        for w in [4, 8] {
            assert_eq!(serde_json::to_string(&scan_range(&p, w).unwrap()).unwrap(), one);
        }
    }

    #[test]
    fn empty_range_and_filters() {
        let mut p = ScanProblem::new(
            quad([1, 1, 1, 1]),
            spec([1, 3, 5, 0], Target::AnyOf(vec![1, 4]), Domain::Integers),
            10,
            5,
        )
        .unwrap();
        let r = scan_range(&p, 2).unwrap();
        assert!(r.exceptions.is_empty());
        assert_eq!(r.counts, ScanCounts::default());

        p.lo = 1;
        p.hi = 200;
        p.exclude = vec!["16:0".parse().unwrap()];
        let r = scan_range(&p, 2).unwrap();
        assert_eq!(r.counts.excluded, 12);
        assert!(r.exceptions.iter().all(|n| n % 16 != 0));
        assert!(scan_range(&p, 0).is_err());
        assert!("1:0".parse::<ResidueFilter>().is_err());
    }

    #[test]
    fn cross_check_small() {
        let r = cross_check(AlgorithmId::T11iB, 1, 500).unwrap();
        assert!(r.consistent());
        assert_eq!(r.decomposed, 500);
        let r = cross_check(AlgorithmId::T12i, 1, 500).unwrap();
        assert!(r.consistent());
        assert!(r.unavailable.iter().all(|(n, s)| *s != UnavailableStage::NotCovered || n % 16 == 0));
        let r = cross_check(AlgorithmId::T12i, 10, 9).unwrap();
        assert!(r.consistent() && r.decomposed == 0);
        assert!(cross_check(AlgorithmId::L31, 1, 10).is_err());
    }
}
