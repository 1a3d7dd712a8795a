use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 64;

/// The prime `p` together with the digit budget used for expansions,
/// Hensel lifts and truncated iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeContext {
    p: u32,
    precision: u32,
}

impl PrimeContext {
    pub fn new(p: u32, precision: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if precision == 0 {
            return Err(Error::ZeroPrecision);
        }
        Ok(Self { p, precision })
    }

    pub fn with_default_precision(p: u32) -> Result<Self> {
        Self::new(p, DEFAULT_PRECISION)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn p_big(&self) -> BigInt {
        BigInt::from(self.p)
    }

    /// Number of p-adic digits `N`.
    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn with_precision(&self, precision: u32) -> Result<Self> {
        Self::new(self.p, precision)
    }

    /// `p^k` for `k >= 0`.
    pub fn p_pow(&self, k: u32) -> BigInt {
        num_traits::pow(self.p_big(), k as usize)
    }
}

impl fmt::Display for PrimeContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={} N={}", self.p, self.precision)
    }
}

/// Deterministic trial division; `p` fits in 32 bits so this is at most
/// 2^16 divisions.
pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let n = n as u64;
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}
