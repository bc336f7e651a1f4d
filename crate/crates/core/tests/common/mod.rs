//! Brute-force oracles and transcribed identities shared by the integration
//! tests. Nothing here calls the solver code paths under test.
#![allow(dead_code)]

use quadrep::constructive::tables::{self as tb, Lambda1Case, Lambda3Case, T12iCase};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub type Coeffs = [i64; 6];

pub fn eval(f: &Coeffs, v: [i64; 3]) -> i64 {
    let [a, b, c, r, s, t] = *f;
    let [x, y, z] = v;
    a * x * x + b * y * y + c * z * z + r * y * z + s * z * x + t * x * y
}

/// Largest `|v_i|` with `f(v) <= limit`, from the inverse Gram matrix.
fn coordinate_bounds(f: &Coeffs, limit: i64) -> [i64; 3] {
    let [a, b, c, r, s, t] = f.map(|x| x as f64);
    let g = [[2.0 * a, t, s], [t, 2.0 * b, r], [s, r, 2.0 * c]];
    let det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
        + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
    let cof = [
        g[1][1] * g[2][2] - g[1][2] * g[2][1],
        g[0][0] * g[2][2] - g[0][2] * g[2][0],
        g[0][0] * g[1][1] - g[0][1] * g[1][0],
    ];
    cof.map(|c| ((2.0 * limit as f64 * c / det).sqrt()).floor() as i64 + 1)
}

/// `r(f, n)` for every `0 <= n <= limit`, by enumerating a box.
pub fn rep_counts(f: &Coeffs, limit: usize) -> Vec<u64> {
    let mut counts = vec![0u64; limit + 1];
    let [bx, by, bz] = coordinate_bounds(f, limit as i64);
    for x in -bx..=bx {
        for y in -by..=by {
            for z in -bz..=bz {
                let v = eval(f, [x, y, z]);
                if v >= 0 && (v as usize) <= limit {
                    counts[v as usize] += 1;
                }
            }
        }
    }
    counts
}

/// Order of the isometry group, by testing every triple of columns with
/// the right lengths and inner products.
pub fn aut_order(f: &Coeffs) -> u64 {
    let [a, b, c, r, s, t] = *f;
    let gram = [[2 * a, t, s], [t, 2 * b, r], [s, r, 2 * c]];
    let bil = |u: [i64; 3], v: [i64; 3]| -> i64 {
        (0..3).map(|i| (0..3).map(|j| u[i] * gram[i][j] * v[j]).sum::<i64>()).sum()
    };
    let limit = a.max(b).max(c);
    let [bx, by, bz] = coordinate_bounds(f, limit);
    let mut by_len: Vec<Vec<[i64; 3]>> = vec![Vec::new(); 3];
    for x in -bx..=bx {
        for y in -by..=by {
            for z in -bz..=bz {
                let v = [x, y, z];
                let n = eval(f, v);
                for (i, d) in [a, b, c].into_iter().enumerate() {
                    if n == d {
                        by_len[i].push(v);
                    }
                }
            }
        }
    }
    let mut count = 0;
    for &u in &by_len[0] {
        for &v in &by_len[1] {
            if bil(u, v) != gram[0][1] {
                continue;
            }
            for &w in &by_len[2] {
                if bil(u, w) == gram[0][2] && bil(v, w) == gram[1][2] {
                    count += 1;
                }
            }
        }
    }
    count
}

/// `a/b == c/d` for positive denominators.
pub fn frac_eq(a: i128, b: i128, c: i128, d: i128) -> bool {
    a * d == c * b
}

/// Aut-weighted average `(sum r_i/aut_i) / (sum 1/aut_i)` as a fraction.
pub fn weighted_average(counts: &[u64], auts: &[u64]) -> (i128, i128) {
    let l: i128 = auts.iter().fold(1i128, |acc, &a| num_lcm(acc, a as i128));
    let num: i128 = counts.iter().zip(auts).map(|(&r, &a)| r as i128 * (l / a as i128)).sum();
    let den: i128 = auts.iter().map(|&a| l / a as i128).sum();
    let g = num_gcd(num, den);
    (num / g, den / g)
}

fn num_gcd(a: i128, b: i128) -> i128 {
    let (mut x, mut y) = (a.abs(), b.abs());
    while y != 0 {
        (x, y) = (y, x % y);
    }
    x
}

fn num_lcm(a: i128, b: i128) -> i128 {
    a / num_gcd(a, b) * b
}

// ---- identity suite -------------------------------------------------------

/// One polynomial identity `P(pre) = M * Q(quad) - K` together with the
/// linear restriction `L . quad = target`.
pub struct Identity {
    pub name: &'static str,
    pub precursor_weights: [i64; 3],
    pub m: i64,
    pub k: i64,
    pub quad_weights: [i64; 4],
    pub linear: [i64; 4],
    pub target: i64,
    /// Draws a parameter assignment and returns `(precursor, quadruple)`.
    pub sample: fn(&mut StdRng) -> ([i64; 3], [i64; 4]),
}

/// Transcribed identity tables; these literals do not come from the library.
pub fn theorem_identities() -> Vec<Identity> {
    fn p(r: &mut StdRng) -> i64 {
        r.gen_range(-2000..=2000)
    }
    fn pick<T: Copy>(r: &mut StdRng, xs: &[T]) -> T {
        xs[r.gen_range(0..xs.len())]
    }
    vec![
        Identity {
            name: "T11i_a",
            precursor_weights: [2, 3, 3],
            m: 12,
            k: 1,
            quad_weights: [1, 1, 1, 2],
            linear: [0, 1, 3, 2],
            target: 1,
            sample: |r| {
                let (u, x, z) = (p(r), p(r), p(r));
                (tb::t11i_a_precursor(u, x, z), tb::t11i_a_quad(u, x, z))
            },
        },
        Identity {
            name: "T11i_b",
            precursor_weights: [1, 8, 44],
            m: 88,
            k: 11,
            quad_weights: [1, 1, 1, 2],
            linear: [1, 1, 2, 2],
            target: 1,
            sample: |r| {
                let s = r.gen_range(0..=10);
                let (t, u, v) = (p(r), p(r), p(r));
                (tb::t11i_b_precursor(s, t, u, v), tb::t11i_b_quad(s, t, u, v))
            },
        },
        Identity {
            name: "T11i_c",
            precursor_weights: [1, 8, 44],
            m: 88,
            k: 44,
            quad_weights: [1, 1, 1, 2],
            linear: [1, 1, 2, 2],
            target: 2,
            sample: |r| {
                let s = r.gen_range(0..=10);
                let (t, u, v) = (p(r), p(r), p(r));
                (tb::t11i_c_precursor(s, t, u, v), tb::t11i_c_quad(s, t, u, v))
            },
        },
        Identity {
            name: "T11ii_λ1",
            precursor_weights: [1, 16, 80],
            m: 80,
            k: 15,
            quad_weights: [1, 1, 1, 3],
            linear: [0, 2, 1, 1],
            target: 1,
            sample: |r| {
                let case = pick(r, &[Lambda1Case::One, Lambda1Case::Nine]);
                let s = r.gen_range(0..=4);
                let (t, v, x) = (p(r), p(r), p(r));
                (tb::t11ii_l1_precursor(case, s, t, v, x), tb::t11ii_l1_quad(case, s, t, v, x))
            },
        },
        Identity {
            name: "T11ii_λ3",
            precursor_weights: [1, 6, 30],
            m: 120,
            k: 15,
            quad_weights: [1, 1, 1, 3],
            linear: [0, 2, 1, 3],
            target: 1,
            sample: |r| {
                let case = pick(r, &[Lambda3Case::Seven, Lambda3Case::Three]);
                let s = r.gen_range(0..=4);
                let (t, v, x) = (p(r), p(r), p(r));
                (tb::t11ii_l3_precursor(case, s, t, v, x), tb::t11ii_l3_quad(case, s, t, v, x))
            },
        },
        Identity {
            name: "T11iii_a",
            precursor_weights: [1, 1, 6],
            m: 6,
            k: 1,
            quad_weights: [1, 1, 2, 3],
            linear: [0, 1, 2, 3],
            target: 1,
            sample: |r| {
                let (v, w, x) = (p(r), p(r), p(r));
                (tb::t11iii_a_precursor(v, w, x), tb::t11iii_a_quad(v, w, x))
            },
        },
        Identity {
            name: "T11iii_b",
            precursor_weights: [1, 7, 56],
            m: 56,
            k: 24,
            quad_weights: [1, 1, 3, 4],
            linear: [0, 1, 1, 2],
            target: 1,
            sample: |r| {
                let s = pick(r, &[-3, -1, 1, 3]);
                let (t, v, x) = (p(r), p(r), p(r));
                (tb::t11iii_b_precursor(s, t, v, x), tb::t11iii_b_quad(s, t, v, x))
            },
        },
        Identity {
            name: "T12i (K=2)",
            precursor_weights: [5, 7, 70],
            m: 70,
            k: 2,
            quad_weights: [1, 1, 1, 1],
            linear: [1, 3, 5, 0],
            target: 1,
            sample: |r| {
                let case = pick(r, &[T12iCase::OneMod14, T12iCase::EightMod14]);
                let (u, v, w) = (p(r), p(r), p(r));
                (tb::t12i_precursor(case, u, v, w), tb::t12i_quad(case, u, v, w))
            },
        },
        Identity {
            name: "T12i (K=32)",
            precursor_weights: [5, 7, 70],
            m: 70,
            k: 32,
            quad_weights: [1, 1, 1, 1],
            linear: [1, 3, 5, 0],
            target: 4,
            sample: |r| {
                let case = pick(r, &[T12iCase::FourMod14, T12iCase::MinusThreeMod14]);
                let (u, v, w) = (p(r), p(r), p(r));
                (tb::t12i_precursor(case, u, v, w), tb::t12i_quad(case, u, v, w))
            },
        },
        Identity {
            name: "T12ii_23",
            precursor_weights: [2, 7, 84],
            m: 42,
            k: 3,
            quad_weights: [1, 1, 1, 2],
            linear: [1, 2, 3, 0],
            target: 1,
            sample: |r| {
                let (s, t, v, w) = (p(r), p(r), p(r), p(r));
                (tb::t12ii_23_precursor(s, t, v, w), tb::t12ii_23_quad(s, t, v, w))
            },
        },
        Identity {
            name: "T12ii_25",
            precursor_weights: [5, 6, 60],
            m: 30,
            k: 1,
            quad_weights: [1, 1, 1, 2],
            linear: [1, 2, 5, 0],
            target: 1,
            sample: |r| {
                let (u, v, w) = (p(r), p(r), p(r));
                (tb::t12ii_25_precursor(u, v, w), tb::t12ii_25_quad(u, v, w))
            },
        },
        Identity {
            name: "T12ii_34",
            precursor_weights: [1, 26, 156],
            m: 78,
            k: 3,
            quad_weights: [1, 1, 1, 2],
            linear: [1, 3, 4, 0],
            target: 1,
            sample: |r| {
                let (s, t, u, w) = (p(r), p(r), p(r), p(r));
                (tb::t12ii_34_precursor(s, t, u, w), tb::t12ii_34_quad(s, t, u, w))
            },
        },
        Identity {
            name: "T12ii_2yzw",
            precursor_weights: [1, 11, 55],
            m: 55,
            k: 10,
            quad_weights: [1, 1, 1, 2],
            linear: [0, 2, 1, 1],
            target: 1,
            sample: |r| {
                let s = r.gen_range(-2..=2);
                let (t, v, x) = (p(r), p(r), p(r));
                (tb::t12ii_2yzw_precursor(s, t, v, x), tb::t12ii_2yzw_quad(s, t, v, x))
            },
        },
        Identity {
            name: "T12iii_x2yw",
            precursor_weights: [1, 16, 160],
            m: 80,
            k: 15,
            quad_weights: [1, 1, 2, 3],
            linear: [1, 2, 0, 1],
            target: 1,
            sample: |r| {
                let s = r.gen_range(-1..=3);
                let (t, u, z) = (p(r), p(r), p(r));
                (tb::t12iii_x2yw_precursor(s, t, u, z), tb::t12iii_x2yw_quad(s, t, u, z))
            },
        },
        Identity {
            name: "T12iii_yzw",
            precursor_weights: [1, 11, 99],
            m: 99,
            k: 54,
            quad_weights: [1, 1, 2, 3],
            linear: [0, 1, 1, 1],
            target: 1,
            sample: |r| {
                let s = r.gen_range(0..=8);
                let (t, u, x) = (p(r), p(r), p(r));
                (tb::t12iii_yzw_precursor(s, t, u, x), tb::t12iii_yzw_quad(s, t, u, x))
            },
        },
        Identity {
            name: "T12iii_y2zw",
            precursor_weights: [1, 5, 30],
            m: 30,
            k: 9,
            quad_weights: [1, 1, 2, 3],
            linear: [0, 1, 2, 1],
            target: 1,
            sample: |r| {
                let s = pick(r, &[-2, -1, 1, 2]);
                let (t, u, x) = (p(r), p(r), p(r));
                (tb::t12iii_y2zw_precursor(s, t, u, x), tb::t12iii_y2zw_quad(s, t, u, x))
            },
        },
    ]
}

fn wsum3(w: [i64; 3], v: [i64; 3]) -> i128 {
    (0..3).map(|i| w[i] as i128 * (v[i] as i128).pow(2)).sum()
}

fn wsum4(w: [i64; 4], v: [i64; 4]) -> i128 {
    (0..4).map(|i| w[i] as i128 * (v[i] as i128).pow(2)).sum()
}

/// Number of failing assignments among `trials` random draws.
pub fn check_identity(id: &Identity, trials: usize, seed: u64) -> usize {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..trials)
        .filter(|_| {
            let (pre, quad) = (id.sample)(&mut rng);
            let lhs = wsum3(id.precursor_weights, pre);
            let rhs = id.m as i128 * wsum4(id.quad_weights, quad) - id.k as i128;
            let lin: i64 = (0..4).map(|i| id.linear[i] * quad[i]).sum();
            lhs != rhs || lin != id.target
        })
        .count()
}

/// Lemma maps `M * g(a,b,c) = f(map(a,b,c))`, with inputs drawn to satisfy
/// each map's integrality condition. Returns `(name, failures)`.
pub fn check_lemma_maps(trials: usize, seed: u64) -> Vec<(&'static str, usize)> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut p = move || rng.gen_range(-5000i64..=5000);
    let mut out = Vec::new();

    let mut fails = 0;
    for _ in 0..trials {
        let (a, mut b, c) = (p(), p(), p());
        if (a + 3 * b) % 2 != 0 {
            b += 1;
        }
        fails += usize::from(11 * wsum3([1, 2, 4], [a, b, c]) != wsum3([1, 8, 44], tb::l31_map(a, b, c)));
    }
    out.push(("L31", fails));

    let mut fails = 0;
    for _ in 0..trials {
        let (a, b, c) = (p(), p(), p());
        fails += usize::from(44 * wsum3([1, 2, 4], [a, b, c]) != wsum3([1, 8, 44], tb::l32_map(a, b, c)));
    }
    out.push(("L32", fails));

    let mut fails = 0;
    for _ in 0..trials {
        let (a, k, c) = (p(), p(), p());
        let b = 2 * a - 4 * k;
        fails += usize::from(5 * wsum3([1, 1, 16], [a, b, c]) != wsum3([1, 16, 80], tb::l33_map(a, b, c)));
    }
    out.push(("L33", fails));

    let mut fails = 0;
    for _ in 0..trials {
        let (a, b, c) = (p(), p(), p());
        fails += usize::from(15 * wsum3([1, 2, 6], [a, b, c]) != wsum3([1, 6, 30], tb::l34_map(a, b, c)));
    }
    out.push(("L34", fails));

    let mut fails = 0;
    for _ in 0..trials {
        let (y, k, h) = (p(), p(), p());
        let z = y + 4 * k;
        let x = 2 * h + ((y + z) / 2).rem_euclid(2);
        fails += usize::from(wsum3([2, 7, 7], [x, y, z]) != wsum3([1, 7, 14], tb::l35_transfer(x, y, z)));
    }
    out.push(("L35 transfer", fails));

    let mut fails = 0;
    for i in 0..trials {
        let (k, free, c) = (p(), p(), p());
        let (a, b) = if i % 2 == 0 { (free, 4 * k - 2 * free) } else { (4 * k + 2 * free, free) };
        let (img, _) = tb::l42_map(a, b, c);
        fails += usize::from(5 * wsum3([1, 1, 32], [a, b, c]) != wsum3([1, 16, 160], img));
    }
    out.push(("L42", fails));
    out
}

/// The printed substitution for the `s = ±1` rows of the `y+2z+w` proof.
pub fn printed_y2zw_quad(s: i64, t: i64, u: i64, x: i64) -> [i64; 4] {
    let (_, [a, b, c]) = tb::t12iii_y2zw_case(s);
    [x, a + 2 * t + u, b - t + u, c - 3 * u]
}
