//! Exact rationals used for grid widths, tolerances and quality ratios.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Signed;

pub type Rational = Ratio<i128>;

/// Renders `r` rounded half away from zero to `digits` fractional digits.
pub fn to_decimal(r: &Rational, digits: u32) -> String {
    let scale = 10i128.pow(digits);
    let num = r.numer().abs() * scale;
    let den = *r.denom();
    let (mut q, rem) = num.div_rem(&den);
    if 2 * rem >= den {
        q += 1;
    }
    let sign = if r.is_negative() && q != 0 { "-" } else { "" };
    let (int, frac) = q.div_rem(&scale);
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac:0width$}", width = digits as usize)
    }
}

/// `num/den` in lowest terms.
pub fn to_fraction(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}
