//! Adagrad.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Adagrad {
    pub learning_rate: f64,
    pub epsilon: f64,
    accumulator: Vec<f64>,
}

impl Adagrad {
    pub fn new(learning_rate: f64, epsilon: f64, n_params: usize) -> Self {
        Adagrad {
            learning_rate,
            epsilon,
            accumulator: vec![0.0; n_params],
        }
    }

    /// Sum of squared gradients seen so far, per parameter.
    pub fn accumulator(&self) -> &[f64] {
        &self.accumulator
    }

    /// `acc += g²; p -= lr·g / (√acc + ε)`
    pub fn step(&mut self, params: &mut [f64], grad: &[f64]) -> Result<()> {
        let n = self.accumulator.len();
        if params.len() != n {
            return Err(Error::length("parameters", n, params.len()));
        }
        if grad.len() != n {
            return Err(Error::length("gradient", n, grad.len()));
        }
        for ((p, g), acc) in params.iter_mut().zip(grad).zip(&mut self.accumulator) {
            *acc += g * g;
            *p -= self.learning_rate * g / (acc.sqrt() + self.epsilon);
        }
        Ok(())
    }
}
