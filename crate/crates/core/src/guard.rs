//! Carries errors and error estimates out of integrand closures.

use std::cell::{Cell, RefCell};

use crate::error::{Error, Result};
use crate::EvalResult;

#[derive(Default)]
pub(crate) struct Guard {
    err: RefCell<Option<Error>>,
    worst: Cell<f64>,
}

impl Guard {
    pub fn new() -> Self {
        Self::default()
    }

    /// Unwraps an inner evaluation, remembering the first failure.
    pub fn take<T: Default>(&self, r: Result<EvalResult<T>>) -> T {
        match r {
            Ok(v) => {
                if v.err_est > self.worst.get() {
                    self.worst.set(v.err_est);
                }
                v.value
            }
            Err(e) => {
                let mut slot = self.err.borrow_mut();
                if slot.is_none() {
                    *slot = Some(e);
                }
                T::default()
            }
        }
    }

    /// Largest inner error estimate seen so far.
    pub fn worst(&self) -> f64 {
        self.worst.get()
    }

    pub fn check(&self) -> Result<()> {
        match self.err.borrow_mut().take() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}
