//! Exact rational parameters such as `eps = 1/16`.

use num_rational::Ratio;

use crate::error::{Error, Result};

/// An error parameter `p/q`, always kept in lowest terms.
pub type Eps = Ratio<u32>;

/// Parses `p/q` (or a bare integer `p`) and checks `0 < eps <= 1`.
pub fn parse_eps(s: &str) -> Result<Eps> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let bad = || Error::param(format!("cannot parse {s:?} as a fraction p/q"));
    let p: u32 = p.parse().map_err(|_| bad())?;
    let q: u32 = q.parse().map_err(|_| bad())?;
    if q == 0 {
        return Err(bad());
    }
    let eps = Eps::new(p, q);
    check_eps(eps)?;
    Ok(eps)
}

pub fn check_eps(eps: Eps) -> Result<()> {
    if *eps.numer() == 0 || eps.numer() > eps.denom() {
        return Err(Error::param(format!("eps = {eps} must lie in (0, 1]")));
    }
    Ok(())
}

pub fn format_eps(eps: Eps) -> String {
    format!("{}/{}", eps.numer(), eps.denom())
}

/// `ceil(eps * x)`.
pub fn ceil_mul(eps: Eps, x: u64) -> u64 {
    let num = u128::from(*eps.numer()) * u128::from(x);
    num.div_ceil(u128::from(*eps.denom())) as u64
}

pub fn to_f64(eps: Eps) -> f64 {
    f64::from(*eps.numer()) / f64::from(*eps.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_eps("1/16").unwrap(), Eps::new(1, 16));
        assert_eq!(parse_eps("2/8").unwrap(), Eps::new(1, 4));
        assert_eq!(parse_eps("1").unwrap(), Eps::new(1, 1));
        assert_eq!(format_eps(Eps::new(3, 12)), "1/4");
        for bad in ["0/3", "5/4", "1/0", "abc", "0.5", ""] {
            assert!(parse_eps(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn ceil_mul_rounds_up() {
        assert_eq!(ceil_mul(Eps::new(1, 3), 9), 3);
        assert_eq!(ceil_mul(Eps::new(1, 3), 10), 4);
        assert_eq!(ceil_mul(Eps::new(1, 1), 0), 0);
        assert_eq!(
            ceil_mul(Eps::new(u32::MAX - 1, u32::MAX), u64::from(u32::MAX)),
            u64::from(u32::MAX - 1)
        );
    }
}
