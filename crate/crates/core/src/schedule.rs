//! Fourier parameterisation of the layer schedule.
//!
//! At level `p` the angles are generated from `p` amplitudes each:
//!
//! ```text
//! gamma_k = sum_l u_l sin((l - 1/2)(k - 1/2) pi / p)
//! beta_k  = sum_l v_l cos((l - 1/2)(k - 1/2) pi / p)
//! ```

use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct FourierPoint {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl FourierPoint {
    pub fn new(u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::LengthMismatch { gammas: u.len(), betas: v.len() });
        }
        if u.iter().chain(&v).any(|x| !x.is_finite()) {
            return Err(Error::Numerical(format!("non-finite fourier point u={u:?} v={v:?}")));
        }
        Ok(FourierPoint { u, v })
    }

    pub fn zeros(level: usize) -> Self {
        FourierPoint { u: vec![0.0; level], v: vec![0.0; level] }
    }

    pub fn level(&self) -> usize {
        self.u.len()
    }

    /// The same point one level deeper: a zero appended to both amplitude sets.
    pub fn extended(&self) -> Self {
        let mut next = self.clone();
        next.u.push(0.0);
        next.v.push(0.0);
        next
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    gammas: Vec<f64>,
    betas: Vec<f64>,
}

impl Schedule {
    pub fn new(gammas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        if gammas.len() != betas.len() {
            return Err(Error::LengthMismatch { gammas: gammas.len(), betas: betas.len() });
        }
        Ok(Schedule { gammas, betas })
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn level(&self) -> usize {
        self.gammas.len()
    }
}

/// Direct `O(p^2)` evaluation of the sine/cosine transforms.
pub fn to_schedule(fp: &FourierPoint) -> Result<Schedule> {
    let p = fp.level();
    if p == 0 {
        return Err(Error::EmptyPoint);
    }
    let mut gammas = vec![0.0; p];
    let mut betas = vec![0.0; p];
    for (k, (gamma, beta)) in gammas.iter_mut().zip(betas.iter_mut()).enumerate() {
        for (l, (&u, &v)) in fp.u.iter().zip(&fp.v).enumerate() {
            let angle = (l as f64 + 0.5) * (k as f64 + 0.5) * PI / p as f64;
            *gamma += u * angle.sin();
            *beta += v * angle.cos();
        }
    }
    Schedule::new(gammas, betas)
}
