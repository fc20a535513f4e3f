//! Exact counts and asymptotics for the plus-complement-plus bounds.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Lambert W at 1, to 40 places.
pub const W1_DIGITS: &str = "0.5671432904097838729999686622103555497538";
/// Leading constant of the asymptotic count, to 38 places.
pub const C1_DIGITS: &str = "1.12511909098678593170279439143182676599";

fn decimal(text: &str) -> BigRational {
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    let numer: BigInt = format!("{int}{frac}").parse().expect("decimal literal");
    let denom = BigInt::from(10u32).pow(frac.len() as u32);
    BigRational::new(numer, denom)
}

/// The two constants as exact decimals.
#[derive(Clone, Debug)]
pub struct BoundsConstants {
    pub w1: BigRational,
    pub c1: BigRational,
}

impl Default for BoundsConstants {
    fn default() -> Self {
        BoundsConstants {
            w1: decimal(W1_DIGITS),
            c1: decimal(C1_DIGITS),
        }
    }
}

fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

fn binomial(n: u32, k: u32) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `Σ_{k=1}^{n} C(n,k) · k! · (k+1)^{n-k}`: choose the distinguished
/// elements in order, then assign every other element to one of the `k`
/// chain levels or to none.
pub fn upper_count(n: u32) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidInput("upper_count needs n >= 1".into()));
    }
    Ok((1..=n)
        .map(|k| binomial(n, k) * factorial(k) * BigUint::from(k + 1).pow(n - k))
        .sum())
}

/// `n! · (n+2)^n`.
pub fn crude_bound(n: u32) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidInput("crude_bound needs n >= 1".into()));
    }
    Ok(factorial(n) * BigUint::from(n + 2).pow(n))
}

/// `upper_count(n) + 1`.
pub fn a072597(n: u32) -> Result<BigUint> {
    Ok(upper_count(n)? + 1u32)
}

/// `n! · [x^n] 1/(e^{-x} - x)` for `n = 0..=max_n`, by exact series
/// inversion. Independent of [`upper_count`].
pub fn egf_coefficients(max_n: u32) -> Vec<BigUint> {
    let len = max_n as usize + 1;
    // g(x) = e^{-x} - x
    let mut g: Vec<BigRational> = (0..len)
        .map(|j| {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            BigRational::new(BigInt::from(sign), BigInt::from(factorial(j as u32)))
        })
        .collect();
    if len > 1 {
        g[1] -= BigRational::one();
    }
    // h = 1/g with g_0 = 1: h_m = -Σ_{j=1}^{m} g_j h_{m-j}
    let mut h: Vec<BigRational> = Vec::with_capacity(len);
    h.push(BigRational::one());
    for m in 1..len {
        let s: BigRational = (1..=m).map(|j| &g[j] * &h[m - j]).sum();
        h.push(-s);
    }
    h.iter()
        .enumerate()
        .map(|(m, c)| {
            let v = c * BigRational::from_integer(BigInt::from(factorial(m as u32)));
            assert!(v.is_integer(), "coefficient {m} is not integral");
            v.to_integer()
                .to_biguint()
                .expect("nonnegative coefficient")
        })
        .collect()
}

/// `C1 · W(1)^{-n} · n!` as an exact rational in the stored constants.
pub fn asymptotic_estimate(n: u32) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::InvalidInput(
            "asymptotic_estimate needs n >= 1".into(),
        ));
    }
    let c = BoundsConstants::default();
    let fact = BigRational::from_integer(BigInt::from(factorial(n)));
    Ok(c.c1 * fact / c.w1.pow(n as i32))
}

/// `a072597(n) / estimate(n)`, computed exactly and then rounded.
pub fn asymptotic_ratio(n: u32) -> Result<f64> {
    let a = BigRational::from_integer(BigInt::from(a072597(n)?));
    let r = a / asymptotic_estimate(n)?;
    r.to_f64()
        .ok_or_else(|| Error::Internal("ratio not representable".into()))
}

/// Number of antichains of subsets of an `n`-set.
///
/// Up to `n = 4` every family of subsets is tested directly; `n = 5`
/// counts pairs of monotone functions on four variables, `f0 ≤ f1`.
pub fn dedekind(n: u32) -> Result<BigUint> {
    match n {
        0..=4 => Ok(BigUint::from(dedekind_brute_force(n))),
        5 => Ok(BigUint::from(dedekind_by_monotone_pairs(n))),
        _ => Err(Error::Unsupported(format!(
            "Dedekind numbers are computed only for n <= 5, got {n}"
        ))),
    }
}

/// Count of antichains among all `2^(2^n)` families of subsets of an n-set.
pub fn dedekind_brute_force(n: u32) -> u64 {
    assert!(n <= 4, "brute force is limited to n <= 4");
    let subsets = 1u32 << n;
    let mut count = 0;
    for family in 0u64..(1u64 << subsets) {
        let members: Vec<u32> = (0..subsets).filter(|&s| family >> s & 1 == 1).collect();
        let antichain = members
            .iter()
            .all(|&x| members.iter().all(|&y| x == y || (x & y) != x));
        if antichain {
            count += 1;
        }
    }
    count
}

/// Monotone Boolean functions on `vars` variables as truth tables.
fn monotone_functions(vars: u32) -> Vec<u32> {
    assert!(vars <= 4);
    let points = 1u32 << vars;
    let mut out = Vec::new();
    for table in 0u64..(1u64 << points) {
        let table = table as u32;
        let monotone = (0..points)
            .all(|x| table >> x & 1 == 0 || (0..vars).all(|v| table >> (x | (1 << v)) & 1 == 1));
        if monotone {
            out.push(table);
        }
    }
    out
}

fn dedekind_by_monotone_pairs(n: u32) -> u64 {
    let halves = monotone_functions(n - 1);
    let mut count = 0;
    for &f0 in &halves {
        for &f1 in &halves {
            if f0 & !f1 == 0 {
                count += 1;
            }
        }
    }
    count
}

/// `m^(n-m)` with `m = ⌈n/2⌉`.
pub fn lower_count(n: u32) -> Result<BigUint> {
    if n < 2 {
        return Err(Error::InvalidInput("lower_count needs n >= 2".into()));
    }
    let m = n.div_ceil(2);
    Ok(BigUint::from(m).pow(n - m))
}

/// Newton's method for `x · e^x = 1`.
pub fn lambert_w1_newton(start: f64) -> Result<f64> {
    let mut x = start;
    for _ in 0..100 {
        let ex = x.exp();
        let step = (x * ex - 1.0) / (ex * (x + 1.0));
        x -= step;
        if step.abs() < 1e-16 {
            return Ok(x);
        }
    }
    Err(Error::Internal(format!(
        "Newton iteration from {start} did not converge"
    )))
}

/// Solves for W(1) from 0.5 and confirms it against the stored digits.
pub fn lambert_w1_check() -> Result<f64> {
    let x = lambert_w1_newton(0.5)?;
    let stored: f64 = W1_DIGITS.parse().expect("decimal literal");
    if (x - stored).abs() > 1e-12 {
        return Err(Error::Internal(format!(
            "W(1) solved as {x}, stored digits give {stored}"
        )));
    }
    Ok(x)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundRow {
    pub n: u32,
    pub f: BigUint,
    pub a072597: BigUint,
    pub crude: BigUint,
    pub dedekind: Option<BigUint>,
    pub estimate: f64,
    pub ratio: f64,
}

pub fn bound_table(max_n: u32) -> Result<Vec<BoundRow>> {
    (1..=max_n)
        .map(|n| {
            Ok(BoundRow {
                n,
                f: upper_count(n)?,
                a072597: a072597(n)?,
                crude: crude_bound(n)?,
                dedekind: (n <= 5).then(|| dedekind(n)).transpose()?,
                estimate: asymptotic_estimate(n)?.to_f64().unwrap_or(f64::INFINITY),
                ratio: asymptotic_ratio(n)?,
            })
        })
        .collect()
}

pub const CSV_HEADER: &str = "n,f,a072597,crude,dedekind,estimate,ratio";

pub fn table_csv(rows: &[BoundRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let ded = r
            .dedekind
            .as_ref()
            .map_or_else(String::new, ToString::to_string);
        out.push_str(&format!(
            "{},{},{},{},{},{:.6e},{:.12}\n",
            r.n, r.f, r.a072597, r.crude, ded, r.estimate, r.ratio
        ));
    }
    out
}

pub fn table_text(rows: &[BoundRow]) -> String {
    let header = [
        "n", "f", "a072597", "crude", "dedekind", "estimate", "ratio",
    ];
    let cells: Vec<[String; 7]> = rows
        .iter()
        .map(|r| {
            [
                r.n.to_string(),
                r.f.to_string(),
                r.a072597.to_string(),
                r.crude.to_string(),
                r.dedekind
                    .as_ref()
                    .map_or_else(|| "-".into(), ToString::to_string),
                format!("{:.6e}", r.estimate),
                format!("{:.12}", r.ratio),
            ]
        })
        .collect();
    let mut widths: [usize; 7] = std::array::from_fn(|i| header[i].len());
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let mut out = String::new();
    let line = |cols: Vec<&str>| {
        cols.iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    out.push_str(&line(header.to_vec()));
    out.push('\n');
    for row in &cells {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}
