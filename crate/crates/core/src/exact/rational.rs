use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use super::CountVector;
use crate::error::{RcrError, Result};

/// Exact probability.
pub type RationalProb = BigRational;

/// Parses `"0.3"`, `"3/10"`, `"1"` or `"2.5e-1"` into an exact rational.
pub fn parse_probability(text: &str) -> Result<RationalProb> {
    let text = text.trim();
    let bad = || RcrError::invalid(format!("not a rational number: {text:?}"));
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: BigInt = format!("{int_part}{frac_part}0").parse().map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32 - 1;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        BigRational::from_integer(all * Pow::pow(&ten, scale as u32))
    } else {
        BigRational::new(all, Pow::pow(&ten, (-scale) as u32))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Decimal rendering rounded half-up to `digits` fractional digits, trailing zeros trimmed.
pub fn to_decimal(value: &BigRational, digits: usize) -> String {
    let negative = value.is_negative();
    let scale = Pow::pow(&BigInt::from(10), digits as u32);
    let scaled = value.abs() * BigRational::from_integer(scale.clone());
    let rounded = (scaled + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer();
    let int_part = &rounded / &scale;
    let frac_part = &rounded % &scale;
    let mut out = String::new();
    if negative && !rounded.is_zero() {
        out.push('-');
    }
    out.push_str(&int_part.to_string());
    if digits > 0 {
        let frac = format!("{:0>width$}", frac_part.to_string(), width = digits);
        let frac = frac.trim_end_matches('0');
        if !frac.is_empty() {
            out.push('.');
            out.push_str(frac);
        }
    }
    out
}

fn check_probability(p: &BigRational) -> Result<()> {
    if p.is_negative() || p > &BigRational::one() {
        return Err(RcrError::invalid(format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}

/// `(sum_i c_i p^i q^(n-i), sum_i i c_i p^i q^(n-i))` with `q = 1 - p`.
fn weighted_sums(c: &CountVector, p: &BigRational) -> (BigRational, BigRational) {
    let n = c.n();
    let q = BigRational::one() - p;
    let mut p_pow = vec![BigRational::one(); n + 1];
    let mut q_pow = vec![BigRational::one(); n + 1];
    for i in 1..=n {
        p_pow[i] = &p_pow[i - 1] * p;
        q_pow[i] = &q_pow[i - 1] * &q;
    }
    let mut mass = BigRational::zero();
    let mut first = BigRational::zero();
    for (i, ci) in c.counts().iter().enumerate() {
        if ci.is_zero() {
            continue;
        }
        let term = BigRational::from_integer(BigInt::from_biguint(Sign::Plus, ci.clone())) * &p_pow[i] * &q_pow[n - i];
        first += &term * BigRational::from_integer(BigInt::from(i));
        mass += term;
    }
    (mass, first)
}

/// Exact reliability `sum_i c_i p^i (1-p)^(n-i)`.
pub fn rcr_from_counts(c: &CountVector, p: &RationalProb) -> Result<RationalProb> {
    check_probability(p)?;
    Ok(weighted_sums(c, p).0)
}

/// Expected number of up vertices given that the up set is connected.
pub fn conditional_mean_size(c: &CountVector, p: &RationalProb) -> Result<RationalProb> {
    check_probability(p)?;
    let (mass, first) = weighted_sums(c, p);
    if mass.is_zero() {
        return Err(RcrError::UndefinedResult(format!(
            "reliability is zero at p = {p}; conditional mean undefined"
        )));
    }
    Ok(first / mass)
}

/// Root of `E[|X| / n | connected] = p`.
#[derive(Clone, Debug, PartialEq)]
pub struct PStar {
    pub value: f64,
    /// Sign changes of `E[|X|/n | connected] - p` seen on the scan grid.
    pub sign_changes: usize,
    /// True when no interior root exists and the root at `p = 1` is reported.
    pub boundary: bool,
}

/// Sign of `E[|X|/n | connected] - a/b`, computed in integers.
fn excess_sign(c: &CountVector, n: usize, a: &BigUint, b: &BigUint) -> Ordering {
    // Multiply both sums by b^n: terms become c_i a^i (b - a)^(n - i).
    let m = c.n();
    let d = b - a;
    let mut a_pow = vec![BigUint::one(); m + 1];
    let mut d_pow = vec![BigUint::one(); m + 1];
    for i in 1..=m {
        a_pow[i] = &a_pow[i - 1] * a;
        d_pow[i] = &d_pow[i - 1] * &d;
    }
    let mut mass = BigUint::zero();
    let mut first = BigUint::zero();
    for (i, ci) in c.counts().iter().enumerate() {
        if ci.is_zero() {
            continue;
        }
        let term = ci * &a_pow[i] * &d_pow[m - i];
        first += &term * BigUint::from(i);
        mass += term;
    }
    // first / (n mass) - a / b  has the sign of  b first - n a mass.
    let lhs = b * first;
    let rhs = BigUint::from(n) * a * mass;
    lhs.cmp(&rhs)
}

const SCAN_POINTS: u32 = 200;

/// Bisection for `p*` with exact rational evaluation at every probe.
///
/// The interval `(0, 1)` is scanned on a uniform grid; when several sign
/// changes appear, the bracket closest to `1/2` is refined.
pub fn p_star(c: &CountVector, n: usize, tol: f64) -> Result<PStar> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(RcrError::invalid("tolerance must be positive"));
    }
    if n == 0 || c.n() != n {
        return Err(RcrError::invalid(format!("count vector has n = {}, expected {n}", c.n())));
    }
    let denom = BigUint::from(SCAN_POINTS);
    let signs: Vec<Ordering> = (1..SCAN_POINTS)
        .map(|k| excess_sign(c, n, &BigUint::from(k), &denom))
        .collect();
    let mut brackets = Vec::new();
    for k in 1..signs.len() {
        let (s0, s1) = (signs[k - 1], signs[k]);
        if s0 == Ordering::Equal {
            brackets.push((k as u32, k as u32));
        } else if s1 != Ordering::Equal && s0 != s1 {
            brackets.push((k as u32, k as u32 + 1));
        }
    }
    if signs.last() == Some(&Ordering::Equal) {
        brackets.push((SCAN_POINTS - 1, SCAN_POINTS - 1));
    }
    let sign_changes = brackets.len();
    let Some(&(lo, hi)) = brackets.iter().min_by(|x, y| {
        let dx = ((x.0 + x.1) as f64 / (2 * SCAN_POINTS) as f64 - 0.5).abs();
        let dy = ((y.0 + y.1) as f64 / (2 * SCAN_POINTS) as f64 - 0.5).abs();
        dx.total_cmp(&dy)
    }) else {
        if c.get(n).is_zero() {
            return Err(RcrError::UndefinedResult(
                "no sign change of E[|X|/n | connected] - p in (0, 1)".into(),
            ));
        }
        // With c_n > 0 the conditional mean fraction equals 1 at p = 1.
        return Ok(PStar {
            value: 1.0,
            sign_changes: 0,
            boundary: true,
        });
    };
    if lo == hi {
        return Ok(PStar {
            value: lo as f64 / SCAN_POINTS as f64,
            sign_changes,
            boundary: false,
        });
    }
    let mut a_num = BigUint::from(lo);
    let mut b_num = BigUint::from(hi);
    let mut den = denom;
    let lo_sign = excess_sign(c, n, &a_num, &den);
    let two = BigUint::from(2u32);
    while ratio(&b_num, &den) - ratio(&a_num, &den) > tol {
        a_num = &a_num * &two;
        b_num = &b_num * &two;
        den = &den * &two;
        let mid = (&a_num + &b_num) / &two;
        match excess_sign(c, n, &mid, &den) {
            Ordering::Equal => {
                return Ok(PStar {
                    value: ratio(&mid, &den),
                    sign_changes,
                    boundary: false,
                })
            }
            s if s == lo_sign => a_num = mid,
            _ => b_num = mid,
        }
    }
    let value = (ratio(&a_num, &den) + ratio(&b_num, &den)) / 2.0;
    Ok(PStar {
        value,
        sign_changes,
        boundary: false,
    })
}

fn ratio(a: &BigUint, b: &BigUint) -> f64 {
    BigRational::new(BigInt::from(a.clone()), BigInt::from(b.clone()))
        .to_f64()
        .unwrap_or(f64::NAN)
}
