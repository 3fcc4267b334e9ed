use thiserror::Error;

use super::{Expr, Poly};
use crate::numeric::{random_zero_test, ZeroVerdict};

/// Parameters of the probabilistic fallback used when the canonical form
/// does not cancel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZeroTest {
    pub seed: u64,
    pub trials: usize,
    pub tol: f64,
}

impl Default for ZeroTest {
    fn default() -> Self {
        ZeroTest {
            seed: 0x5eed_c0de,
            trials: 16,
            tol: 1e-9,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ZeroError {
    /// Canonical form did not cancel, yet every sample evaluated to zero.
    #[error("zero test undetermined for `{0}`")]
    Undetermined(String),
}

impl Poly {
    /// Decides whether the expression vanishes identically.
    pub fn is_zero_with(&self, cfg: &ZeroTest) -> Result<bool, ZeroError> {
        if self.is_zero() {
            return Ok(true);
        }
        let cleared = self.clear_denominators();
        if cleared.is_zero() {
            return Ok(true);
        }
        let e = self.to_expr();
        match random_zero_test(&e, cfg.trials, cfg.seed, cfg.tol) {
            Ok(ZeroVerdict::NonZero(_)) => Ok(false),
            _ => Err(ZeroError::Undetermined(e.to_string())),
        }
    }

    pub fn is_identically_zero(&self) -> Result<bool, ZeroError> {
        self.is_zero_with(&ZeroTest::default())
    }
}

impl Expr {
    pub fn is_zero(&self) -> Result<bool, ZeroError> {
        self.to_poly().is_zero_with(&ZeroTest::default())
    }

    pub fn is_zero_with(&self, cfg: &ZeroTest) -> Result<bool, ZeroError> {
        self.to_poly().is_zero_with(cfg)
    }
}
