//! Binary-expansion statistics of a genus and the closed-form automorphism bounds.

use std::fmt;
use std::sync::RwLock;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("genus must be at least 1")]
    ZeroGenus,
    #[error("genus {g} is below the minimum {min} for this bound")]
    GenusTooSmall { g: u64, min: u64 },
    #[error("genus {g} is below 8; the smooth bound is given by the small-genus table")]
    TableRegime { g: u64 },
    #[error("genus {g} matches several cases: {cases:?}")]
    Overlap { g: u64, cases: Vec<CaseTag> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GenusStats {
    pub g: u64,
    /// Number of 1s in the binary expansion.
    pub b: u32,
    pub k: u64,
    /// `ceil(g/2) - b`.
    pub h: i64,
    /// Fewest terms `a * 2^n`, `a` in {1, 3}, summing to `g`.
    pub l: u32,
    pub o: u64,
}

pub fn b(g: u64) -> u32 {
    g.count_ones()
}

pub fn k(g: u64) -> u64 {
    g - b(g) as u64
}

pub fn h(g: u64) -> i64 {
    g.div_ceil(2) as i64 - b(g) as i64
}

pub const DEFAULT_L_CAP: u64 = 1 << 20;

/// Memoised table of `l` for `0..=cap`.
#[derive(Debug, Clone)]
pub struct LTable {
    values: Vec<u8>,
}

impl LTable {
    pub fn new(cap: u64) -> Self {
        let n = cap as usize + 1;
        let mut values = vec![0u8; n];
        for g in 1..n {
            let mut best = u8::MAX;
            let mut p = 1usize;
            while p <= g {
                best = best.min(values[g - p] + 1);
                if 3 * p <= g {
                    best = best.min(values[g - 3 * p] + 1);
                }
                p <<= 1;
            }
            values[g] = best;
        }
        LTable { values }
    }

    pub fn cap(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    pub fn get(&self, g: u64) -> Option<u32> {
        self.values.get(g as usize).map(|&x| x as u32)
    }
}

static L_TABLE: RwLock<Option<LTable>> = RwLock::new(None);

pub fn l(g: u64) -> u32 {
    if let Some(v) = L_TABLE.read().unwrap().as_ref().and_then(|t| t.get(g)) {
        return v;
    }
    let mut guard = L_TABLE.write().unwrap();
    let have = guard.as_ref().map_or(0, LTable::cap);
    if have < g {
        let cap = (g + 1).next_power_of_two().max(1024);
        *guard = Some(LTable::new(cap));
    }
    guard.as_ref().unwrap().get(g).unwrap()
}

pub fn o(g: u64) -> u64 {
    g - l(g) as u64
}

pub fn genus_stats(g: u64) -> Result<GenusStats, NumericError> {
    if g == 0 {
        return Err(NumericError::ZeroGenus);
    }
    let l = l(g);
    Ok(GenusStats { g, b: b(g), k: k(g), h: h(g), l, o: g - l as u64 })
}

/// The arithmetic form of a genus that selects a bound's constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum CaseTag {
    /// `3 * 2^m + s`
    ThreePow {
        m: u32,
        s: u32,
    },
    /// `3 * (2^m + 1)`
    ThreePowPlusOneTimesThree {
        m: u32,
    },
    /// `3 * (2^m + 2^p)`
    ThreeSumPow {
        m: u32,
        p: u32,
    },
    /// `3 * (2^m + 2^p + 1)`
    ThreeSumPowPlusOne {
        m: u32,
        p: u32,
    },
    /// `9 * 2^m + s`
    NinePow {
        m: u32,
        s: u32,
    },
    /// `9 * (2^m + 2^p)`
    NineSumPow {
        m: u32,
        p: u32,
    },
    /// `5 * a * 2^m + 1`
    FivePowPlusOne {
        a: u32,
        m: u32,
    },
    /// One of 10, 11, 19, 20, 38.
    Exceptional {
        g: u64,
    },
    Otherwise {
        g: u64,
    },
}

impl CaseTag {
    /// The genus this tag describes.
    pub fn value(&self) -> u64 {
        let p2 = |e: u32| 1u64 << e;
        match *self {
            CaseTag::ThreePow { m, s } => 3 * p2(m) + s as u64,
            CaseTag::ThreePowPlusOneTimesThree { m } => 3 * (p2(m) + 1),
            CaseTag::ThreeSumPow { m, p } => 3 * (p2(m) + p2(p)),
            CaseTag::ThreeSumPowPlusOne { m, p } => 3 * (p2(m) + p2(p) + 1),
            CaseTag::NinePow { m, s } => 9 * p2(m) + s as u64,
            CaseTag::NineSumPow { m, p } => 9 * (p2(m) + p2(p)),
            CaseTag::FivePowPlusOne { a, m } => 5 * a as u64 * p2(m) + 1,
            CaseTag::Exceptional { g } | CaseTag::Otherwise { g } => g,
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CaseTag::ThreePow { m, s: 0 } => write!(f, "3·2^m with m={m}"),
            CaseTag::ThreePow { m, s } => write!(f, "3·2^m+{s} with m={m}"),
            CaseTag::ThreePowPlusOneTimesThree { m } => write!(f, "3(2^m+1) with m={m}"),
            CaseTag::ThreeSumPow { m, p } => write!(f, "3(2^m+2^p) with m={m}, p={p}"),
            CaseTag::ThreeSumPowPlusOne { m, p } => write!(f, "3(2^m+2^p+1) with m={m}, p={p}"),
            CaseTag::NinePow { m, s: 0 } => write!(f, "9·2^m with m={m}"),
            CaseTag::NinePow { m, s } => write!(f, "9·2^m+{s} with m={m}"),
            CaseTag::NineSumPow { m, p } => write!(f, "9(2^m+2^p) with m={m}, p={p}"),
            CaseTag::FivePowPlusOne { a, m } => write!(f, "5·{a}·2^m+1 with m={m}"),
            CaseTag::Exceptional { g } => write!(f, "exceptional g={g}"),
            CaseTag::Otherwise { g } => write!(f, "otherwise (g={g})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Part {
    /// Any stable curve with `3g - 3` nodes.
    Nodal,
    /// Only smooth components.
    Smooth,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundResult {
    pub c: BigRational,
    pub exponent_base: u64,
    /// `c * 2^exponent_base`, always an integer.
    pub value: BigUint,
    pub case_tag: CaseTag,
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn scaled_power(c: &BigRational, e: u64) -> BigUint {
    let num = c.numer().to_biguint().expect("positive constant") << e as usize;
    let den = c.denom().to_biguint().expect("positive constant");
    assert!((&num % &den) == BigUint::from(0u32), "bound must be integral");
    num / den
}

fn three_pow(n: u64) -> Option<u32> {
    (n.is_multiple_of(3) && (n / 3).is_power_of_two()).then(|| (n / 3).trailing_zeros())
}

/// `(m, p)` with `m > p` when `n = 2^m + 2^p`.
fn two_bits(n: u64) -> Option<(u32, u32)> {
    (n.count_ones() == 2).then(|| (63 - n.leading_zeros(), n.trailing_zeros()))
}

fn three_sum(n: u64) -> Option<(u32, u32)> {
    if n.is_multiple_of(3) {
        two_bits(n / 3)
    } else {
        None
    }
}

fn resolve(g: u64, matches: Vec<(CaseTag, BigRational)>) -> Result<(CaseTag, BigRational), NumericError> {
    match matches.len() {
        0 => Ok((CaseTag::Otherwise { g }, BigRational::one())),
        1 => Ok(matches.into_iter().next().unwrap()),
        _ => Err(NumericError::Overlap { g, cases: matches.into_iter().map(|(t, _)| t).collect() }),
    }
}

fn nodal_cases(g: u64) -> Vec<(CaseTag, BigRational)> {
    let mut out = Vec::new();
    if let Some(m) = three_pow(g) {
        out.push((CaseTag::ThreePow { m, s: 0 }, ratio(3, 1)));
    }
    if let Some(m) = g.checked_sub(1).and_then(three_pow) {
        if m > 0 {
            out.push((CaseTag::ThreePow { m, s: 1 }, ratio(3, 2)));
        }
    }
    if let Some((m, p)) = three_sum(g) {
        if m > p + 1 {
            out.push((CaseTag::ThreeSumPow { m, p }, ratio(3, 2)));
        }
    }
    out
}

fn smooth_cases(g: u64) -> Vec<(CaseTag, BigRational)> {
    let mut out = Vec::new();
    if let Some(m) = three_pow(g) {
        if m > 1 {
            out.push((CaseTag::ThreePow { m, s: 0 }, ratio(3, 1)));
        }
    }
    if g.is_multiple_of(3) && (g / 3).checked_sub(1).is_some_and(u64::is_power_of_two) {
        let m = (g / 3 - 1).trailing_zeros();
        if m > 1 {
            out.push((CaseTag::ThreePowPlusOneTimesThree { m }, ratio(3, 1)));
        }
    }
    for s in [1, 2] {
        if let Some(m) = g.checked_sub(s).and_then(three_pow) {
            if m > 1 {
                out.push((CaseTag::ThreePow { m, s: s as u32 }, ratio(3, 2)));
            }
        }
    }
    if let Some((m, p)) = three_sum(g) {
        if p > 0 && m > p + 1 {
            out.push((CaseTag::ThreeSumPow { m, p }, ratio(3, 2)));
        }
    }
    if g.is_multiple_of(3) {
        if let Some((m, p)) = (g / 3).checked_sub(1).and_then(two_bits) {
            if p > 0 && m > p + 1 {
                out.push((CaseTag::ThreeSumPowPlusOne { m, p }, ratio(3, 2)));
            }
        }
    }
    out
}

/// Bound on automorphism orders of trivalent genus-`g` graphs: with loops for
/// [`Part::Nodal`], loopless for [`Part::Smooth`].
pub fn classify_and_bound(g: u64, part: Part) -> Result<BoundResult, NumericError> {
    if g < 2 {
        return Err(NumericError::GenusTooSmall { g, min: 2 });
    }
    let (case_tag, c, exponent_base) = match part {
        Part::Nodal => {
            let (t, c) = resolve(g, nodal_cases(g))?;
            (t, c, g + k(g))
        }
        Part::Smooth => {
            if g < 8 {
                return Err(NumericError::TableRegime { g });
            }
            let (t, c) = resolve(g, smooth_cases(g))?;
            (t, c, (g as i64 + h(g)) as u64)
        }
    };
    let value = scaled_power(&c, exponent_base);
    Ok(BoundResult { c, exponent_base, value, case_tag })
}

pub const TS_EXCEPTIONS: [u64; 5] = [10, 11, 19, 20, 38];

fn ts_cases(g: u64) -> Vec<(CaseTag, BigRational)> {
    let mut out = Vec::new();
    let exceptional = TS_EXCEPTIONS.contains(&g);
    for s in 0..=2u64 {
        if let Some(r) = g.checked_sub(s) {
            if r % 9 == 0 && (r / 9).is_power_of_two() && !exceptional {
                out.push((CaseTag::NinePow { m: (r / 9).trailing_zeros(), s: s as u32 }, ratio(3, 1)));
            }
        }
    }
    for s in 0..=2u64 {
        if let Some(m) = g.checked_sub(s).and_then(three_pow) {
            if m >= 2 {
                out.push((CaseTag::ThreePow { m, s: s as u32 }, ratio(3, 2)));
            }
        }
    }
    if g.is_multiple_of(9) {
        if let Some((m, p)) = two_bits(g / 9) {
            if m - p >= 5 {
                out.push((CaseTag::NineSumPow { m, p }, ratio(3, 2)));
            }
        }
    }
    if exceptional {
        out.push((CaseTag::Exceptional { g }, ratio(3, 2)));
    }
    for a in [1u64, 3] {
        let r = g - 1;
        if r.is_multiple_of(5 * a) && (r / (5 * a)).is_power_of_two() {
            let m = (r / (5 * a)).trailing_zeros();
            if m >= 2 {
                out.push((CaseTag::FivePowPlusOne { a: a as u32, m }, ratio(5, 4)));
            }
        }
    }
    out
}

/// Bound on automorphism orders of simple trivalent graphs of genus `g >= 9`.
pub fn ts_bound(g: u64) -> Result<BoundResult, NumericError> {
    if g < 9 {
        return Err(NumericError::GenusTooSmall { g, min: 9 });
    }
    let (case_tag, c) = resolve(g, ts_cases(g))?;
    let exponent_base = o(g);
    let value = scaled_power(&c, exponent_base);
    Ok(BoundResult { c, exponent_base, value, case_tag })
}

/// `2^(g + h(g))`, the normaliser of the loopless ratios.
pub fn smooth_normaliser(g: u64) -> BigUint {
    BigUint::from(1u32) << (g as i64 + h(g)) as usize
}

/// Outcome of each clause of the binary-weight inequalities; `None` when
/// the clause's range excludes `(u, v)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InequalityClauses {
    /// `b(uv) <= b(u) b(v)` and `b(u+v) <= b(u) + b(v)`.
    pub weight: bool,
    /// `h(u+v) >= h(u) + h(v)`.
    pub superadditive: bool,
    /// `h(uv+1) - u h(v) >= (u+1)/2`, for `u >= 4`.
    pub product_plus_one: Option<bool>,
    /// `h(uv) - u h(v) >= ceil((u-1)/2)`, for `v >= 2`.
    pub product: Option<bool>,
}

impl InequalityClauses {
    pub fn all_hold(&self) -> bool {
        self.weight && self.superadditive && self.product_plus_one != Some(false) && self.product != Some(false)
    }
}

pub fn check_inequalities(u: u64, v: u64) -> InequalityClauses {
    let weight = b(u * v) <= b(u) * b(v) && b(u + v) <= b(u) + b(v);
    let superadditive = h(u + v) >= h(u) + h(v);
    let ui = u as i64;
    // (u+1)/2 compared exactly: 2 * lhs >= u + 1
    let product_plus_one = (u >= 4).then(|| 2 * (h(u * v + 1) - ui * h(v)) > ui);
    let product = (v >= 2).then(|| h(u * v) - ui * h(v) >= (u - 1).div_ceil(2) as i64);
    InequalityClauses { weight, superadditive, product_plus_one, product }
}

/// Exact rational `numerator / 2^(g + h(g))`.
pub fn smooth_ratio(numerator: &BigUint, g: u64) -> BigRational {
    BigRational::new(numerator.clone().into(), smooth_normaliser(g).into())
}

/// `c` as a lossy float, for display only.
pub fn approx(c: &BigRational) -> f64 {
    c.numer().to_f64().unwrap_or(f64::NAN) / c.denom().to_f64().unwrap_or(f64::NAN)
}
