//! Local (p-adic) representability, local densities by counting, the closed
//! form exception sets of the regular diagonal forms, and the spinor genus
//! count criterion.

use num_rational::Ratio;
use serde::Serialize;

use crate::arith::{factorize, is_prime, modulo, valuation};
use crate::error::{Error, Result};
use crate::forms::{IntegerTriple, TernaryForm};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalVerdict {
    pub p: u64,
    pub represented: bool,
    /// A triple with `f(w) ≡ n (mod p^k)`, present when `represented`.
    pub witness: Option<IntegerTriple>,
    pub k: u32,
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::CompositeModulus(p))
    }
}

fn ord(n: i128, p: u64) -> u32 {
    valuation(n, p).unwrap_or(0)
}

/// Counting depth `ord_p(2d) + ord_p(n) + 3`.
pub fn default_depth(f: &TernaryForm, n: i64, p: u64) -> u32 {
    ord(2 * f.discriminant() as i128, p) + ord(n as i128, p) + 3
}

/// Searches digit by digit for a primitive `v` with
/// `f(v) ≡ m (mod p^j)`. A node is accepted once `j >= 2e + 1`, where
/// `e = ord_p(A v)`: Hensel's lemma then lifts it to a `Z_p` solution.
struct HenselSearch<'a> {
    f: &'a TernaryForm,
    gram: [[i128; 3]; 3],
    p: i128,
    m: i128,
    max_depth: u32,
}

impl HenselSearch<'_> {
    fn grad_valuation(&self, v: &[i128; 3], limit: u32) -> u32 {
        let mut e = limit;
        for row in &self.gram {
            let g = row[0] * v[0] + row[1] * v[1] + row[2] * v[2];
            if g != 0 {
                e = e.min(ord(g, self.p as u64));
            }
        }
        e
    }

    fn value(&self, v: &[i128; 3]) -> i128 {
        let (a, b, c) = (self.f.a() as i128, self.f.b() as i128, self.f.c() as i128);
        let (r, s, t) = (self.f.r() as i128, self.f.s() as i128, self.f.t() as i128);
        a * v[0] * v[0] + b * v[1] * v[1] + c * v[2] * v[2] + r * v[1] * v[2] + s * v[2] * v[0] + t * v[0] * v[1]
    }

    /// Returns a saturated solution `(v, j)` modulo `p^j`.
    fn search(&self, v: [i128; 3], j: u32, pj: i128) -> Option<([i128; 3], u32)> {
        if j > 0 {
            let e = self.grad_valuation(&v, j);
            if e < j && j > 2 * e {
                return Some((v, j));
            }
            if j >= self.max_depth {
                return None;
            }
        }
        let p = self.p;
        let next = pj * p;
        for d0 in 0..p {
            for d1 in 0..p {
                for d2 in 0..p {
                    let w = [v[0] + pj * d0, v[1] + pj * d1, v[2] + pj * d2];
                    if j == 0 && w.iter().all(|&c| c == 0) {
                        // the primitive search skips the zero residue
                        continue;
                    }
                    if modulo(self.value(&w) - self.m, next) == 0 {
                        if let Some(found) = self.search(w, j + 1, next) {
                            return Some(found);
                        }
                    }
                }
            }
        }
        None
    }

    /// Lifts a saturated solution mod `p^j` to one mod `p^k`. With
    /// `e = ord_p(Av)` and `j >= 2e + 1`, correcting digit `j - e` moves the
    /// value by `p^j (Av·δ) / p^e` while the quadratic term stays below `p^(j+1)`.
    fn lift(&self, mut v: [i128; 3], mut j: u32, k: u32) -> [i128; 3] {
        let p = self.p;
        while j < k {
            let e = self.grad_valuation(&v, j);
            let step = p.pow(j - e);
            let next = p.pow(j + 1);
            'digit: for d0 in 0..p {
                for d1 in 0..p {
                    for d2 in 0..p {
                        let w = [v[0] + step * d0, v[1] + step * d1, v[2] + step * d2];
                        if modulo(self.value(&w) - self.m, next) == 0 {
                            v = w;
                            break 'digit;
                        }
                    }
                }
            }
            debug_assert_eq!(modulo(self.value(&v) - self.m, next), 0);
            j += 1;
        }
        v
    }
}

/// Whether `n` is represented by `f` over `Z_p`.
///
/// Every p-adic representation is `p^i` times a primitive representation of
/// `n / p^(2i)`, and a primitive solution has `ord_p(Av) <= ord_p(2d)`; so
/// the search depth `2 ord_p(2d) + 1` decides exactly. The reported witness
/// is lifted to depth `max(ord_p(2d) + ord_p(n) + 3, depth needed)`.
pub fn is_locally_represented(f: &TernaryForm, n: i64, p: u64) -> Result<LocalVerdict> {
    check_prime(p)?;
    if n < 0 {
        return Err(Error::range(format!("n = {n} is negative")));
    }
    let k = default_depth(f, n, p);
    if n == 0 {
        return Ok(LocalVerdict { p, represented: true, witness: Some([0, 0, 0]), k });
    }
    let pi = p as i128;
    let depth = 2 * ord(2 * f.discriminant() as i128, p) + 1;
    let ord_n = ord(n as i128, p);
    for i in 0..=ord_n / 2 {
        let scale = pi.pow(i);
        let m = n as i128 / (scale * scale);
        let search = HenselSearch { f, gram: f.gram(), p: pi, m, max_depth: depth };
        if let Some((v, j)) = search.search([0; 3], 0, 1) {
            let k = k.max(j + 2 * i);
            let target = k - 2 * i;
            let lifted = search.lift(v, j, target);
            let modulus = pi.pow(k);
            let witness = lifted.map(|c| modulo(c * scale, modulus) as i64);
            return Ok(LocalVerdict { p, represented: true, witness: Some(witness), k });
        }
    }
    Ok(LocalVerdict { p, represented: false, witness: None, k })
}

/// Represented over the reals and over every `Z_p`. Only `p | 2d` need to be
/// checked: at odd `p ∤ d` the form is unimodular of rank 3, hence universal.
pub fn is_eligible(f: &TernaryForm, n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let two_d = 2 * f.discriminant() as u64;
    factorize(two_d)
        .into_iter()
        .all(|(p, _)| is_locally_represented(f, n, p).map(|v| v.represented).unwrap_or(false))
}

/// Number of `z mod p^k` with `c2 z^2 + c1 z + c0 ≡ 0 (mod p^k)`.
fn count_roots(c2: i128, c1: i128, c0: i128, p: i128, k: u32) -> i128 {
    if k == 0 {
        return 1;
    }
    let pk = p.pow(k);
    let (c2, c1, c0) = (modulo(c2, pk), modulo(c1, pk), modulo(c0, pk));
    let mut total = 0;
    for z0 in 0..p {
        if modulo(c2 * z0 * z0 + c1 * z0 + c0, p) != 0 {
            continue;
        }
        // g(z0 + p w) = g(z0) + p g'(z0) w + p^2 c2 w^2, with w mod p^(k-1)
        let h0 = c2 * z0 * z0 + c1 * z0 + c0;
        let h1 = p * (2 * c2 * z0 + c1);
        let h2 = p * p * c2;
        let e = [h0, h1, h2]
            .iter()
            .map(|&h| if modulo(h, pk) == 0 { k } else { ord(modulo(h, pk), p as u64).min(k) })
            .min()
            .unwrap_or(k);
        if e >= k {
            total += p.pow(k - 1);
        } else {
            let pe = p.pow(e);
            total += p.pow(e - 1) * count_roots(h2 / pe, h1 / pe, h0 / pe, p, k - e);
        }
    }
    total
}

/// Number of `v mod p^k` with `f(v) ≡ n (mod p^k)`.
pub fn count_solutions_mod(f: &TernaryForm, n: i64, p: u64, k: u32) -> Result<i128> {
    check_prime(p)?;
    let pi = p as i128;
    let pk = pi
        .checked_pow(k)
        .filter(|&pk| pk <= 1 << 40)
        .ok_or_else(|| Error::range(format!("modulus {p}^{k} is too large")))?;
    let (a, b, c) = (f.a() as i128, f.b() as i128, f.c() as i128);
    let (r, s, t) = (f.r() as i128, f.s() as i128, f.t() as i128);
    let mut total = 0i128;
    for x in 0..pk {
        for y in 0..pk {
            let lin = modulo(r * y + s * x, pk);
            let rest = modulo(a * x * x + b * y * y + t * x * y - n as i128, pk);
            total += count_roots(c, lin, rest, pi, k);
        }
    }
    Ok(total)
}

/// `p^(-2k) #{v mod p^k : f(v) ≡ n}` as an exact rational.
pub fn local_density(f: &TernaryForm, n: i64, p: u64, k: u32) -> Result<Ratio<i128>> {
    if k == 0 {
        return Err(Error::Invalid("depth k must be at least 1".into()));
    }
    let count = count_solutions_mod(f, n, p, k)?;
    Ok(Ratio::new(count, (p as i128).pow(2 * k)))
}

/// The five regular diagonal forms with closed-form exception sets.
pub const DICKSON_TRIPLES: [(i64, i64, i64); 5] = [(1, 1, 2), (1, 1, 6), (1, 2, 6), (2, 3, 3), (1, 1, 16)];

fn strip_square_factor(mut n: i64, q: i64) -> i64 {
    while n != 0 && n % q == 0 {
        n /= q;
    }
    n
}

/// Membership of `n` in `E(a,b,c)`, the positive integers not represented by
/// `ax^2 + by^2 + cz^2`. The triple may be given in any order.
pub fn dickson_exception_member(triple: (i64, i64, i64), n: i64) -> Result<bool> {
    let mut sorted = [triple.0, triple.1, triple.2];
    sorted.sort_unstable();
    if n < 0 {
        return Err(Error::range(format!("n = {n} is negative")));
    }
    if n == 0 {
        return Ok(false);
    }
    let member = match sorted {
        [1, 1, 2] => strip_square_factor(n, 4) % 16 == 14,
        [1, 1, 6] => strip_square_factor(n, 9) % 9 == 3,
        [1, 2, 6] => strip_square_factor(n, 4) % 8 == 5,
        [2, 3, 3] => strip_square_factor(n, 9) % 3 == 1,
        [1, 1, 16] => strip_square_factor(n, 4) % 8 == 7 || n % 4 == 3 || n % 8 == 6 || n % 32 == 12,
        [a, b, c] => return Err(Error::UntabulatedTriple(a, b, c)),
    };
    Ok(member)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SpinorVerdict {
    MustBeSingle,
    PossiblyMultiple,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpinorCountBound {
    pub verdict: SpinorVerdict,
    pub reason: String,
}

/// A genus holds at least two spinor genera only if `r, s, t` are all even
/// with `16 | d`, or `p^3 | d` for some odd prime `p`.
pub fn spinor_genus_count_bound(f: &TernaryForm) -> SpinorCountBound {
    let d = f.discriminant();
    let even = f.r() % 2 == 0 && f.s() % 2 == 0 && f.t() % 2 == 0;
    if even && d % 16 == 0 {
        return SpinorCountBound {
            verdict: SpinorVerdict::PossiblyMultiple,
            reason: format!("r, s, t even and 16 | d = {d}"),
        };
    }
    if let Some((p, _)) = factorize(d as u64).into_iter().find(|&(p, e)| p > 2 && e >= 3) {
        return SpinorCountBound {
            verdict: SpinorVerdict::PossiblyMultiple,
            reason: format!("{p}^3 | d = {d}"),
        };
    }
    SpinorCountBound {
        verdict: SpinorVerdict::MustBeSingle,
        reason: format!("neither clause holds for d = {d}"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Lemma41Target {
    Target(i64),
    NotCovered,
}

/// Which of `70n - 2`, `70n - 32` is locally represented by `5x^2+7y^2+70z^2`
/// for the residue class of `n`.
pub fn lemma41_target(n: i64) -> Result<Lemma41Target> {
    if n < 1 {
        return Err(Error::range(format!("n = {n} must be positive")));
    }
    let too_big = || Error::range(format!("70n overflows for n = {n}"));
    let seventy_n = n.checked_mul(70).ok_or_else(too_big)?;
    Ok(match n % 16 {
        0 => Lemma41Target::NotCovered,
        r if r % 4 == 1 || r % 4 == 2 || r % 8 == 4 => Lemma41Target::Target(seventy_n - 2),
        _ => Lemma41Target::Target(seventy_n - 32),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(a: i64, b: i64, c: i64) -> TernaryForm {
        TernaryForm::diagonal(a, b, c).unwrap()
    }

    /// Brute-force count over the full box `(Z/p^k)^3`.
    fn brute_count(f: &TernaryForm, n: i64, p: u64, k: u32) -> i128 {
        let pk = (p as i64).pow(k);
        let mut count = 0;
        for x in 0..pk {
            for y in 0..pk {
                for z in 0..pk {
                    if modulo(f.evaluate([x, y, z]).unwrap() - n as i128, pk as i128) == 0 {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    #[test]
    fn counting_matches_brute_force() {
        let forms = [diag(1, 1, 1), diag(1, 1, 2), TernaryForm::new(2, 2, 9, 2, -2, 0).unwrap(), diag(5, 7, 70)];
        for f in &forms {
            for (p, k) in [(2, 1), (2, 3), (2, 4), (3, 2), (5, 2), (7, 1)] {
                for n in [0, 1, 2, 3, 4, 6, 8, 14] {
                    assert_eq!(count_solutions_mod(f, n, p, k).unwrap(), brute_count(f, n, p, k), "{f} n={n} p={p}");
                }
            }
        }
    }

    #[test]
    fn density_examples() {
        assert_eq!(local_density(&diag(1, 1, 1), 1, 5, 1).unwrap(), Ratio::new(6, 5));
        assert_eq!(local_density(&diag(1, 1, 2), 14, 2, 7).unwrap(), Ratio::from_integer(0));
        assert!(local_density(&diag(1, 1, 2), 0, 2, 3).unwrap() > Ratio::from_integer(0));
        assert!(matches!(local_density(&diag(1, 1, 1), 1, 6, 1), Err(Error::CompositeModulus(6))));
    }

    #[test]
    fn local_representation_examples() {
        let v = is_locally_represented(&diag(5, 7, 70), 68, 2).unwrap();
        assert!(v.represented);
        let w = v.witness.unwrap();
        let pk = 1i128 << v.k;
        assert_eq!(modulo(diag(5, 7, 70).evaluate(w).unwrap() - 68, pk), 0);
        assert!(!is_locally_represented(&diag(1, 1, 2), 14, 2).unwrap().represented);
        assert!(is_locally_represented(&diag(1, 1, 2), 0, 3).unwrap().represented);
        assert!(is_locally_represented(&diag(1, 1, 2), 5, 4).is_err());
    }

    #[test]
    fn eligibility_examples() {
        assert!(is_eligible(&diag(1, 7, 14), 32));
        assert!(!is_eligible(&diag(1, 1, 2), 14));
        assert!(!is_eligible(&diag(1, 1, 1), 7));
        assert!(!is_eligible(&diag(1, 1, 1), 28));
        assert!(is_eligible(&diag(1, 1, 1), 4));
    }

    #[test]
    fn dickson_examples() {
        assert!(dickson_exception_member((1, 2, 6), 5).unwrap());
        assert!(dickson_exception_member((2, 3, 3), 1).unwrap());
        for n in [7, 6, 12] {
            assert!(dickson_exception_member((1, 1, 16), n).unwrap());
        }
        assert!(!dickson_exception_member((1, 1, 16), 1).unwrap());
        assert!(matches!(dickson_exception_member((1, 1, 1), 7), Err(Error::UntabulatedTriple(1, 1, 1))));
    }

    #[test]
    fn spinor_examples() {
        assert_eq!(spinor_genus_count_bound(&diag(5, 7, 70)).verdict, SpinorVerdict::MustBeSingle);
        assert_eq!(spinor_genus_count_bound(&diag(1, 11, 55)).verdict, SpinorVerdict::MustBeSingle);
        assert_eq!(spinor_genus_count_bound(&diag(1, 26, 156)).verdict, SpinorVerdict::PossiblyMultiple);
        assert_eq!(spinor_genus_count_bound(&diag(1, 1, 27)).verdict, SpinorVerdict::PossiblyMultiple);
    }

    #[test]
    fn lemma41_examples() {
        assert_eq!(lemma41_target(1).unwrap(), Lemma41Target::Target(68));
        assert_eq!(lemma41_target(3).unwrap(), Lemma41Target::Target(178));
        assert_eq!(lemma41_target(16).unwrap(), Lemma41Target::NotCovered);
        assert_eq!(lemma41_target(8).unwrap(), Lemma41Target::Target(528));
        assert_eq!(lemma41_target(4).unwrap(), Lemma41Target::Target(278));
    }
}
