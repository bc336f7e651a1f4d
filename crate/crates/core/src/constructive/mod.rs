//! Constructive decompositions with replayable traces.
//!
//! A construction is a chain of [`Stage`]s. The first stage consumes a
//! representation of a precursor value by a diagonal ternary form, found by
//! enumeration; every later stage consumes a sign variant of the previous
//! stage's output. Representations are scanned in lexicographic order and,
//! within one sign orbit, variants are tried with non-negative entries first
//! (descending lexicographic order). The first chain that passes every
//! residue condition is returned.

pub mod stages;
pub mod tables;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{exact_sqrt, is_square};
use crate::error::{Error, Result};
use crate::forms::{DiagonalQuaternary, IntegerQuadruple, IntegerTriple, TernaryForm};
use stages::{derive, precursor, Reject};
pub use stages::{NamedValue, Stage, StageKind};

/// Largest `n` accepted by the constructions; keeps `99n` well inside `i64`.
pub const MAX_N: i64 = 1 << 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum AlgorithmId {
    L31,
    L32,
    L33,
    L34,
    L35,
    L42,
    T11iA,
    T11iB,
    T11iC,
    T11iiL1,
    T11iiL3,
    T11iiiA,
    T11iiiB,
    T12i,
    T12ii23,
    T12ii25,
    T12ii34,
    T12ii2yzw,
    T12iiiX2yw,
    T12iiiYzw,
    T12iiiY2zw,
}

impl AlgorithmId {
    pub const ALL: [AlgorithmId; 21] = {
        use AlgorithmId::*;
        [
            L31, L32, L33, L34, L35, L42, T11iA, T11iB, T11iC, T11iiL1, T11iiL3, T11iiiA, T11iiiB, T12i, T12ii23,
            T12ii25, T12ii34, T12ii2yzw, T12iiiX2yw, T12iiiYzw, T12iiiY2zw,
        ]
    };
    pub const LEMMAS: [AlgorithmId; 6] = {
        use AlgorithmId::*;
        [L31, L32, L33, L34, L35, L42]
    };
    /// Variants valid for every `n >= 1`.
    pub const UNCONDITIONAL: [AlgorithmId; 7] = {
        use AlgorithmId::*;
        [T11iA, T11iB, T11iC, T11iiL1, T11iiL3, T11iiiA, T11iiiB]
    };
    /// Variants valid for sufficiently large `n`.
    pub const ASYMPTOTIC: [AlgorithmId; 8] = {
        use AlgorithmId::*;
        [T12i, T12ii23, T12ii25, T12ii34, T12ii2yzw, T12iiiX2yw, T12iiiYzw, T12iiiY2zw]
    };

    pub fn name(self) -> &'static str {
        use AlgorithmId::*;
        match self {
            L31 => "L31",
            L32 => "L32",
            L33 => "L33",
            L34 => "L34",
            L35 => "L35",
            L42 => "L42",
            T11iA => "T11i_a",
            T11iB => "T11i_b",
            T11iC => "T11i_c",
            T11iiL1 => "T11ii_λ1",
            T11iiL3 => "T11ii_λ3",
            T11iiiA => "T11iii_a",
            T11iiiB => "T11iii_b",
            T12i => "T12i",
            T12ii23 => "T12ii_23",
            T12ii25 => "T12ii_25",
            T12ii34 => "T12ii_34",
            T12ii2yzw => "T12ii_2yzw",
            T12iiiX2yw => "T12iii_x2yw",
            T12iiiYzw => "T12iii_yzw",
            T12iiiY2zw => "T12iii_y2zw",
        }
    }

    pub fn is_lemma(self) -> bool {
        Self::LEMMAS.contains(&self)
    }

    pub fn is_theorem(self) -> bool {
        !self.is_lemma()
    }

    pub fn is_unconditional(self) -> bool {
        Self::UNCONDITIONAL.contains(&self)
    }

    /// The quaternary form and linear restriction a theorem variant targets.
    pub fn restriction(self) -> Option<(DiagonalQuaternary, RestrictionSpec)> {
        use AlgorithmId::*;
        let (w, lin, target) = match self {
            T11iA => ([1, 1, 1, 2], [0, 1, 3, 2], Target::Fixed(1)),
            T11iB => ([1, 1, 1, 2], [1, 1, 2, 2], Target::Fixed(1)),
            T11iC => ([1, 1, 1, 2], [1, 1, 2, 2], Target::Fixed(2)),
            T11iiL1 => ([1, 1, 1, 3], [0, 2, 1, 1], Target::Fixed(1)),
            T11iiL3 => ([1, 1, 1, 3], [0, 2, 1, 3], Target::Fixed(1)),
            T11iiiA => ([1, 1, 2, 3], [0, 1, 2, 3], Target::Fixed(1)),
            T11iiiB => ([1, 1, 3, 4], [0, 1, 1, 2], Target::Fixed(1)),
            T12i => ([1, 1, 1, 1], [1, 3, 5, 0], Target::AnyOf(vec![1, 4])),
            T12ii23 => ([1, 1, 1, 2], [1, 2, 3, 0], Target::Fixed(1)),
            T12ii25 => ([1, 1, 1, 2], [1, 2, 5, 0], Target::Fixed(1)),
            T12ii34 => ([1, 1, 1, 2], [1, 3, 4, 0], Target::Fixed(1)),
            T12ii2yzw => ([1, 1, 1, 2], [0, 2, 1, 1], Target::Fixed(1)),
            T12iiiX2yw => ([1, 1, 2, 3], [1, 2, 0, 1], Target::Fixed(1)),
            T12iiiYzw => ([1, 1, 2, 3], [0, 1, 1, 1], Target::Fixed(1)),
            T12iiiY2zw => ([1, 1, 2, 3], [0, 1, 2, 1], Target::Fixed(1)),
            _ => return None,
        };
        let form = DiagonalQuaternary::new(w).expect("static weights");
        Some((form, RestrictionSpec { coefficients: lin, target, domain: Domain::Integers }))
    }

    /// Ternary form and value certified by a lemma: `(weights, M, K)` for
    /// `M n - K`.
    pub fn lemma_equation(self) -> Option<([i64; 3], i64, i64)> {
        use AlgorithmId::*;
        Some(match self {
            L31 => ([1, 8, 44], 88, 11),
            L32 => ([1, 8, 44], 88, 44),
            L33 => ([1, 16, 80], 80, 15),
            L34 => ([1, 6, 30], 120, 15),
            L35 => ([1, 7, 56], 56, 24),
            L42 => ([1, 16, 160], 80, 15),
            _ => return None,
        })
    }

    /// Admissible stage chains, in the order they are attempted.
    pub fn chains(self) -> Vec<Vec<StageKind>> {
        use AlgorithmId as A;
        use StageKind as S;
        let l35 = |tail: &[S]| {
            let mut direct = vec![S::L35];
            direct.extend_from_slice(tail);
            let mut transfer = vec![S::L35Transfer, S::L35];
            transfer.extend_from_slice(tail);
            vec![direct, transfer]
        };
        match self {
            A::L31 => vec![vec![S::L31]],
            A::L32 => vec![vec![S::L32]],
            A::L33 => vec![vec![S::L33]],
            A::L34 => vec![vec![S::L34]],
            A::L35 => l35(&[]),
            A::L42 => vec![vec![S::L42]],
            A::T11iA => vec![vec![S::T11iA]],
            A::T11iB => vec![vec![S::L31, S::T11iB]],
            A::T11iC => vec![vec![S::L32, S::T11iC]],
            A::T11iiL1 => vec![vec![S::L33, S::T11iiL1]],
            A::T11iiL3 => vec![vec![S::L34, S::T11iiL3]],
            A::T11iiiA => vec![vec![S::T11iiiA]],
            A::T11iiiB => l35(&[S::T11iiiB]),
            A::T12i => vec![vec![S::T12i]],
            A::T12ii23 => vec![vec![S::T12ii23]],
            A::T12ii25 => vec![vec![S::T12ii25]],
            A::T12ii34 => vec![vec![S::T12ii34]],
            A::T12ii2yzw => vec![vec![S::T12ii2yzw]],
            A::T12iiiX2yw => vec![vec![S::L42, S::T12iiiX2yw]],
            A::T12iiiYzw => vec![vec![S::T12iiiYzw]],
            A::T12iiiY2zw => vec![vec![S::Coprime3, S::T12iiiY2zw]],
        }
    }
}

impl fmt::Display for AlgorithmId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgorithmId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_lowercase().replace("lambda", "λ").replace("_l", "_λ");
        AlgorithmId::ALL
            .into_iter()
            .find(|id| id.name().to_lowercase() == key)
            .ok_or_else(|| Error::parse(s, "unknown algorithm id"))
    }
}

impl TryFrom<String> for AlgorithmId {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<AlgorithmId> for String {
    fn from(id: AlgorithmId) -> String {
        id.name().to_string()
    }
}

/// The set a linear form must land in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Fixed(i64),
    AnyOf(Vec<i64>),
    PerfectSquare,
    /// `{4^k : k >= 0}`.
    PowerOfFour,
}

impl Target {
    pub fn contains(&self, v: i128) -> bool {
        match self {
            Target::Fixed(x) => v == *x as i128,
            Target::AnyOf(xs) => xs.iter().any(|x| *x as i128 == v),
            Target::PerfectSquare => is_square(v),
            Target::PowerOfFour => crate::arith::is_power_of_four(v),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Fixed(v) => write!(f, "fixed:{v}"),
            Target::AnyOf(vs) => {
                let parts: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
                write!(f, "anyof:{}", parts.join(","))
            }
            Target::PerfectSquare => f.write_str("square"),
            Target::PowerOfFour => f.write_str("pow4"),
        }
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "square" => return Ok(Target::PerfectSquare),
            "pow4" => return Ok(Target::PowerOfFour),
            _ => {}
        }
        if let Some(v) = s.strip_prefix("fixed:") {
            let v = v.trim().parse().map_err(|_| Error::parse(s, "expected an integer"))?;
            return Ok(Target::Fixed(v));
        }
        if let Some(vs) = s.strip_prefix("anyof:") {
            let mut vals = crate::forms::parse_int_list(vs)?;
            if vals.is_empty() {
                return Err(Error::parse(s, "empty target set"));
            }
            vals.sort_unstable();
            vals.dedup();
            return Ok(Target::AnyOf(vals));
        }
        Err(Error::parse(s, "expected fixed:V, anyof:V1,V2,..., square or pow4"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    Integers,
    Naturals,
}

impl FromStr for Domain {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "int" | "integers" => Ok(Domain::Integers),
            "nat" | "naturals" => Ok(Domain::Naturals),
            _ => Err(Error::parse(s, "expected int or nat")),
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Domain::Integers => "int",
            Domain::Naturals => "nat",
        })
    }
}

/// `αx + βy + γz + δw ∈ target`, with variables in `domain`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictionSpec {
    pub coefficients: [i64; 4],
    pub target: Target,
    pub domain: Domain,
}

impl RestrictionSpec {
    pub fn new(coefficients: [i64; 4], target: Target, domain: Domain) -> Result<Self> {
        if let Target::AnyOf(v) = &target {
            if v.is_empty() {
                return Err(Error::Invalid("empty target set".into()));
            }
        }
        Ok(RestrictionSpec { coefficients, target, domain })
    }

    pub fn linear_value(&self, q: &IntegerQuadruple) -> i128 {
        (0..4).map(|i| self.coefficients[i] as i128 * q[i] as i128).sum()
    }

    /// Domain and target membership of `q`.
    pub fn admits(&self, q: &IntegerQuadruple) -> bool {
        if self.domain == Domain::Naturals && q.iter().any(|&x| x < 0) {
            return false;
        }
        self.target.contains(self.linear_value(q))
    }
}

/// A quadruple for a theorem variant together with the proof trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub n: i64,
    pub variant: AlgorithmId,
    pub quad: IntegerQuadruple,
    pub form: DiagonalQuaternary,
    pub restriction: RestrictionSpec,
    pub linear_value: i64,
    pub trace: Vec<Stage>,
}

/// Where a construction without guaranteed success stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnavailableStage {
    /// `n` lies in a residue class the variant excludes.
    NotCovered,
    /// The precursor value has no representation at all.
    Precursor,
    /// Representations exist but none lies in the required residue classes.
    Normalization,
}

impl fmt::Display for UnavailableStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnavailableStage::NotCovered => "not_covered",
            UnavailableStage::Precursor => "precursor",
            UnavailableStage::Normalization => "normalization",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Found(Decomposition),
    Unavailable { variant: AlgorithmId, n: i64, stage: UnavailableStage, detail: String },
}

impl Outcome {
    pub fn found(self) -> Option<Decomposition> {
        match self {
            Outcome::Found(d) => Some(d),
            Outcome::Unavailable { .. } => None,
        }
    }
}

/// Output triple of a lemma with its trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaOutput {
    pub lemma: AlgorithmId,
    pub n: i64,
    pub triple: IntegerTriple,
    pub weights: [i64; 3],
    pub value: i64,
    pub trace: Vec<Stage>,
}

/// `m = a^2 + 7b^2` with `a`, `b` odd and positive; smallest `b` first.
pub fn rewrite_both_odd(m: i64) -> Result<(i64, i64)> {
    if m <= 0 || m % 8 != 0 {
        return Err(Error::NotFound(m));
    }
    let mut b = 1i64;
    while 7 * (b as i128) * (b as i128) < m as i128 {
        if let Some(a) = exact_sqrt(m as i128 - 7 * (b as i128) * (b as i128)) {
            if a % 2 == 1 {
                return Ok((a as i64, b));
            }
        }
        b += 2;
    }
    Err(Error::NotFound(m))
}

/// `m = a^2 + 5b^2` with `3 ∤ ab` and `a, b > 0`; smallest `b` first.
pub fn rewrite_coprime3(m: i64) -> Result<(i64, i64)> {
    if m <= 0 {
        return Err(Error::NotFound(m));
    }
    let mut b = 1i64;
    while 5 * (b as i128) * (b as i128) < m as i128 {
        if b % 3 != 0 {
            if let Some(a) = exact_sqrt(m as i128 - 5 * (b as i128) * (b as i128)) {
                if a % 3 != 0 {
                    return Ok((a as i64, b));
                }
            }
        }
        b += 1;
    }
    Err(Error::NotFound(m))
}

/// Sign variants of `v`, non-negative entries first, without repeats.
pub fn sign_orbit(v: &[i64]) -> Vec<Vec<i64>> {
    let abs: Vec<i64> = v.iter().map(|x| x.abs()).collect();
    let mut out: Vec<Vec<i64>> = (0..1u32 << abs.len())
        .map(|mask| abs.iter().enumerate().map(|(i, &x)| if mask >> i & 1 == 1 { -x } else { x }).collect())
        .collect();
    out.sort_unstable_by(|a, b| b.cmp(a));
    out.dedup();
    out
}

enum ChainEnd {
    Found(Vec<Stage>),
    NoPrecursor(i128),
    NoNormalization,
}

fn identity_failure(msg: String) -> Error {
    Error::NormalizationFailed(msg)
}

fn dfs(chain: &[StageKind], n: i64, input: &[i64], acc: &mut Vec<Stage>) -> Result<bool> {
    match derive(chain[0], n, input) {
        Ok(stage) => {
            let next = stage.output.clone();
            acc.push(stage);
            if chain.len() == 1 {
                return Ok(true);
            }
            for v in sign_orbit(&next) {
                if dfs(&chain[1..], n, &v, acc)? {
                    return Ok(true);
                }
            }
            acc.pop();
            Ok(false)
        }
        Err(Reject::Normalization) => Ok(false),
        Err(Reject::Identity(msg)) => Err(identity_failure(msg)),
    }
}

fn run_chain(chain: &[StageKind], n: i64) -> Result<ChainEnd> {
    let (w, value) = precursor(chain[0], n).ok_or_else(|| Error::Invalid(format!("{:?} at n = {n}", chain[0])))?;
    if value < 0 {
        return Ok(ChainEnd::NoPrecursor(value));
    }
    let value64 = i64::try_from(value).map_err(|_| Error::range("precursor value"))?;
    let form = TernaryForm::diagonal(w[0], w[1], w[2])?;
    let mut seen = HashSet::new();
    let mut any = false;
    for rep in form.represent_iter(value64)? {
        any = true;
        if !seen.insert(rep.map(i64::abs)) {
            continue;
        }
        for v in sign_orbit(&rep) {
            let mut acc = Vec::new();
            if dfs(chain, n, &v, &mut acc)? {
                return Ok(ChainEnd::Found(acc));
            }
        }
    }
    Ok(if any { ChainEnd::NoNormalization } else { ChainEnd::NoPrecursor(value) })
}

fn check_n(n: i64) -> Result<()> {
    if !(1..=MAX_N).contains(&n) {
        return Err(Error::range(format!("n = {n} outside [1, 2^50]")));
    }
    Ok(())
}

/// First successful chain of `id`, or the most informative failure.
fn search(id: AlgorithmId, n: i64) -> Result<std::result::Result<Vec<Stage>, (UnavailableStage, String)>> {
    let mut normalization = false;
    let mut missing = Vec::new();
    for chain in id.chains() {
        match run_chain(&chain, n)? {
            ChainEnd::Found(trace) => return Ok(Ok(trace)),
            ChainEnd::NoNormalization => normalization = true,
            ChainEnd::NoPrecursor(v) => missing.push(v),
        }
    }
    Ok(Err(if normalization {
        (UnavailableStage::Normalization, "no precursor representation satisfies the residue conditions".into())
    } else {
        let vals: Vec<String> = missing.iter().map(|v| v.to_string()).collect();
        (UnavailableStage::Precursor, format!("precursor value {} is not represented", vals.join(", ")))
    }))
}

pub fn construct_lemma(id: AlgorithmId, n: i64) -> Result<LemmaOutput> {
    if !id.is_lemma() {
        return Err(Error::Invalid(format!("{id} is not a lemma")));
    }
    check_n(n)?;
    match search(id, n)? {
        Ok(trace) => Ok(lemma_output(id, n, trace)),
        Err((UnavailableStage::Precursor, _)) => {
            let (w, value) = precursor(id.chains()[0][0], n).expect("lemma precursor");
            Err(Error::PrecursorUnrepresentable {
                what: format!("{id}: {}x^2+{}y^2+{}z^2", w[0], w[1], w[2]),
                value: value as i64,
            })
        }
        Err((_, detail)) => Err(Error::NormalizationFailed(format!("{id} at n = {n}: {detail}"))),
    }
}

/// Which genus class supplies the `x^2+7y^2+14z^2` representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum L35Path {
    Direct,
    Transfer,
}

/// The both-odd construction forced through one path.
pub fn construct_l35_via(n: i64, path: L35Path) -> Result<Option<LemmaOutput>> {
    check_n(n)?;
    let chain = match path {
        L35Path::Direct => vec![StageKind::L35],
        L35Path::Transfer => vec![StageKind::L35Transfer, StageKind::L35],
    };
    Ok(match run_chain(&chain, n)? {
        ChainEnd::Found(trace) => Some(lemma_output(AlgorithmId::L35, n, trace)),
        _ => None,
    })
}

fn lemma_output(id: AlgorithmId, n: i64, trace: Vec<Stage>) -> LemmaOutput {
    let (weights, m, k) = id.lemma_equation().expect("lemma");
    let out = &trace.last().expect("nonempty trace").output;
    LemmaOutput { lemma: id, n, triple: [out[0], out[1], out[2]], weights, value: m * n - k, trace }
}

/// Side conditions and replay of a lemma output.
pub fn validate_lemma(out: &LemmaOutput) -> bool {
    let Some((weights, m, k)) = out.lemma.lemma_equation() else { return false };
    let Some(value) = m.checked_mul(out.n).map(|v| v - k) else { return false };
    let [x, y, z] = out.triple;
    let got: i128 = (0..3).map(|i| weights[i] as i128 * out.triple[i] as i128 * out.triple[i] as i128).sum();
    let side = match out.lemma {
        AlgorithmId::L31 => x.rem_euclid(8) == 1,
        AlgorithmId::L32 => x.rem_euclid(8) == 2,
        AlgorithmId::L35 => x % 2 != 0 && y % 2 != 0,
        _ => true,
    };
    let _ = z;
    out.weights == weights
        && out.value == value
        && got == value as i128
        && side
        && replay(out.lemma, out.n, &out.trace).is_ok_and(|v| v == out.triple)
}

/// Runs a theorem variant. Variants valid for all `n` fail with
/// [`Error::NormalizationFailed`]; the others report [`Outcome::Unavailable`].
pub fn decompose(id: AlgorithmId, n: i64) -> Result<Outcome> {
    if id.is_lemma() {
        return Err(Error::NotATheoremVariant(id.to_string()));
    }
    check_n(n)?;
    let unavailable = |stage, detail: String| Ok(Outcome::Unavailable { variant: id, n, stage, detail });
    if id == AlgorithmId::T12i && n % 16 == 0 {
        return unavailable(UnavailableStage::NotCovered, "16 divides n".into());
    }
    match search(id, n)? {
        Ok(trace) => {
            let (form, restriction) = id.restriction().expect("theorem variant");
            let out = &trace.last().expect("nonempty trace").output;
            let quad = [out[0], out[1], out[2], out[3]];
            let linear_value = restriction.linear_value(&quad) as i64;
            Ok(Outcome::Found(Decomposition { n, variant: id, quad, form, restriction, linear_value, trace }))
        }
        Err((stage, detail)) if id.is_unconditional() => {
            Err(Error::NormalizationFailed(format!("{id} at n = {n}: {stage}: {detail}")))
        }
        Err((stage, detail)) => unavailable(stage, detail),
    }
}

/// Re-runs every stage of `trace` from its recorded inputs and returns the
/// final output. Fails unless each stage reproduces its recorded values and
/// output exactly and consumes a sign variant of its predecessor's output.
pub fn replay(id: AlgorithmId, n: i64, trace: &[Stage]) -> std::result::Result<Vec<i64>, String> {
    let kinds: Vec<StageKind> = trace.iter().map(|s| s.step).collect();
    if !id.chains().contains(&kinds) {
        return Err(format!("stage sequence {kinds:?} does not belong to {id}"));
    }
    let mut prev: Option<&Vec<i64>> = None;
    for stage in trace {
        if let Some(p) = prev {
            let same = p.len() == stage.input.len() && p.iter().zip(&stage.input).all(|(a, b)| a.abs() == b.abs());
            if !same {
                return Err(format!("{:?}: input {:?} is not a sign variant of {:?}", stage.step, stage.input, p));
            }
        }
        let again = match derive(stage.step, n, &stage.input) {
            Ok(s) => s,
            Err(Reject::Normalization) => return Err(format!("{:?}: residue conditions fail", stage.step)),
            Err(Reject::Identity(msg)) => return Err(msg),
        };
        if &again != stage {
            return Err(format!("{:?}: recorded values differ from recomputation", stage.step));
        }
        prev = Some(&stage.output);
    }
    prev.cloned().ok_or_else(|| "empty trace".to_string())
}

/// True iff `d` is a correct decomposition of `n` with a consistent trace.
pub fn validate(d: &Decomposition, n: i64) -> bool {
    let Some((form, restriction)) = d.variant.restriction() else { return false };
    d.n == n
        && d.form == form
        && d.restriction == restriction
        && d.form.evaluate(d.quad) == n as i128
        && d.restriction.admits(&d.quad)
        && d.restriction.linear_value(&d.quad) == d.linear_value as i128
        && replay(d.variant, n, &d.trace).is_ok_and(|v| v == d.quad)
}
