use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::kernel::MatrixSource;

/// Eigenvalue profile `f(t)` of the circulant on `[0, 2 pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Symbol {
    /// `f(t) = t`
    #[default]
    Linear,
    /// `f(t) = 1`
    One,
    /// `f(t) = e^{it}`
    Shift,
    /// `f(t) = |sin(t / 2)|`
    AbsSin,
}

impl Symbol {
    pub fn eval(self, t: f64) -> Complex64 {
        match self {
            Self::Linear => Complex64::new(t, 0.0),
            Self::One => Complex64::new(1.0, 0.0),
            Self::Shift => Complex64::from_polar(1.0, t),
            Self::AbsSin => Complex64::new((0.5 * t).sin().abs(), 0.0),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Linear => "t",
            Self::One => "one",
            Self::Shift => "exp-it",
            Self::AbsSin => "abs-sin",
        })
    }
}

impl FromStr for Symbol {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "t" => Ok(Self::Linear),
            "one" => Ok(Self::One),
            "exp-it" => Ok(Self::Shift),
            "abs-sin" => Ok(Self::AbsSin),
            _ => Err(Error::Config(format!("unknown circulant symbol '{s}' (expected t, one, exp-it, abs-sin)"))),
        }
    }
}

/// First column of the `N x N` circulant with eigenvalues `f(2 pi k / N)`.
///
/// With `C(i, j) = c[(i - j) mod N]` the eigenvalues are the DFT of `c`, so
/// `c` is the inverse DFT of the sampled symbol.
pub fn circulant_first_col(big_n: usize, symbol: Symbol) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = (0..big_n).map(|k| symbol.eval(2.0 * PI * k as f64 / big_n as f64)).collect();
    FftPlanner::new().plan_fft_inverse(big_n).process(&mut c);
    let s = 1.0 / big_n as f64;
    c.iter_mut().for_each(|v| *v *= s);
    c
}

/// The upper-right `n x n` block of the `2n x 2n` circulant with symbol `f`.
pub fn gen_circulant_corner(n: usize, symbol: Symbol) -> Result<MatrixSource<Complex64>> {
    if n < 2 {
        return Err(Error::Config(format!("circulant corner needs n >= 2, got {n}")));
    }
    MatrixSource::circulant_corner(circulant_first_col(2 * n, symbol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::MatrixAccess;

    /// Direct DFT, `O(N^2)`.
    fn dft(c: &[Complex64]) -> Vec<Complex64> {
        let n = c.len();
        (0..n)
            .map(|k| {
                (0..n)
                    .map(|j| c[j] * Complex64::from_polar(1.0, -2.0 * PI * (j * k) as f64 / n as f64))
                    .sum()
            })
            .collect()
    }

    #[test]
    fn identity_symbol_gives_zero_corner() {
        let src = gen_circulant_corner(8, Symbol::One).unwrap();
        let a = src.materialize(64).unwrap();
        assert!(a.max_abs() <= 1e-15);
    }

    #[test]
    fn shift_symbol_gives_one_entry() {
        let n = 16;
        let a = gen_circulant_corner(n, Symbol::Shift).unwrap().materialize(n * n).unwrap();
        let big: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| a[(i, j)].norm() > 1e-12).collect();
        assert_eq!(big, vec![(n - 1, 0)]);
        assert!((a[(n - 1, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn corner_matches_direct_circulant() {
        let n = 32;
        let c = circulant_first_col(2 * n, Symbol::Linear);
        let src = gen_circulant_corner(n, Symbol::Linear).unwrap();
        let a = src.materialize(n * n).unwrap();
        let big = 2 * n;
        for i in 0..n {
            for j in 0..n {
                let direct = c[(i + big - (j + n)) % big];
                assert!((a[(i, j)] - direct).norm() <= 1e-12);
            }
        }
        assert_eq!(src.entry(3, 5).unwrap(), a[(3, 5)]);
    }

    #[test]
    fn eigenvalues_match_symbol() {
        for &big in &[16usize, 64, 1024] {
            let c = circulant_first_col(big, Symbol::Linear);
            let lam = dft(&c);
            for (k, l) in lam.iter().enumerate() {
                let t = 2.0 * PI * k as f64 / big as f64;
                assert!((l - Complex64::new(t, 0.0)).norm() <= 1e-10, "N = {big}, k = {k}");
            }
        }
    }

    #[test]
    fn symbol_names_round_trip() {
        for s in [Symbol::Linear, Symbol::One, Symbol::Shift, Symbol::AbsSin] {
            assert_eq!(s.to_string().parse::<Symbol>().unwrap(), s);
        }
        assert!("sin".parse::<Symbol>().is_err());
        assert!(gen_circulant_corner(1, Symbol::Linear).is_err());
    }
}
