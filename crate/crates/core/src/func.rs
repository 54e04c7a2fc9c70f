//! Function traits accepted by the numerical routines.
//!
//! Plain closures `Fn(S) -> S` and `Fn(S, S) -> S` work directly. Parsed
//! expressions ([`ExprFn`]) implement both traits. Closures that can fail
//! are wrapped in [`Fallible`].

use crate::error::Result;
use crate::exprlang::ExprFn;
use crate::scalar::Scalar;

/// A real function of one variable.
pub trait UnaryFn<S> {
    fn call(&self, t: S) -> Result<S>;

    /// True when the function is known to be `t ↦ t`.
    fn is_identity(&self) -> bool {
        false
    }
}

/// A real function `f(t, y)`.
pub trait BinaryFn<S> {
    fn call(&self, t: S, y: S) -> Result<S>;
}

impl<S, F: Fn(S) -> S> UnaryFn<S> for F {
    fn call(&self, t: S) -> Result<S> {
        Ok(self(t))
    }
}

impl<S, F: Fn(S, S) -> S> BinaryFn<S> for F {
    fn call(&self, t: S, y: S) -> Result<S> {
        Ok(self(t, y))
    }
}

/// Adapter for closures returning `Result`.
#[derive(Debug, Clone, Copy)]
pub struct Fallible<F>(pub F);

impl<S, F: Fn(S) -> Result<S>> UnaryFn<S> for Fallible<F> {
    fn call(&self, t: S) -> Result<S> {
        (self.0)(t)
    }
}

/// The identity map `t ↦ t`; the weight of the classical operators.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Identity;

impl<S> UnaryFn<S> for Identity {
    fn call(&self, t: S) -> Result<S> {
        Ok(t)
    }

    fn is_identity(&self) -> bool {
        true
    }
}

/// A borrowed function, usable where an owned [`UnaryFn`] is expected.
#[derive(Debug, Clone, Copy)]
pub struct Borrowed<'a, F: ?Sized>(pub &'a F);

impl<S, F: UnaryFn<S> + ?Sized> UnaryFn<S> for Borrowed<'_, F> {
    fn call(&self, t: S) -> Result<S> {
        self.0.call(t)
    }

    fn is_identity(&self) -> bool {
        self.0.is_identity()
    }
}

impl<S: Scalar> UnaryFn<S> for ExprFn {
    fn call(&self, t: S) -> Result<S> {
        Ok(self.eval(&[t])?)
    }

    fn is_identity(&self) -> bool {
        self.is_identity()
    }
}

impl<S: Scalar> BinaryFn<S> for ExprFn {
    fn call(&self, t: S, y: S) -> Result<S> {
        Ok(self.eval(&[t, y])?)
    }
}
