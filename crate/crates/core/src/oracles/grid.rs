use std::f64::consts::TAU;

use num_complex::Complex;

use crate::algebra::Element;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const DEFAULT_GRID_SIZE: usize = 64;

/// Samples on the `M×M` lattice `x = (p/M, q/M)` of the ordinary 2-torus.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    size: usize,
    values: Vec<Complex<f64>>,
}

impl GridFunction {
    pub fn from_fn(size: usize, f: impl Fn(usize, usize) -> Complex<f64>) -> Self {
        let values = (0..size * size).map(|i| f(i / size, i % size)).collect();
        GridFunction { size, values }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Value at `x = (p/M, q/M)`.
    pub fn get(&self, p: usize, q: usize) -> Complex<f64> {
        self.values[p * self.size + q]
    }

    pub fn map(&self, f: impl Fn(Complex<f64>) -> Complex<f64>) -> Self {
        GridFunction { size: self.size, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(Complex<f64>, Complex<f64>) -> Complex<f64>) -> Self {
        assert_eq!(self.size, other.size);
        GridFunction {
            size: self.size,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    /// Lattice average; exact for trigonometric polynomials of degree below `M`.
    pub fn mean(&self) -> Complex<f64> {
        self.values.iter().sum::<Complex<f64>>() / (self.values.len() as f64)
    }

    /// Rows `(x1, x2, value)` in lattice order.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64, Complex<f64>)> + '_ {
        let m = self.size;
        self.values.iter().enumerate().map(move |(i, &v)| ((i / m) as f64 / m as f64, (i % m) as f64 / m as f64, v))
    }
}

fn check_commutative_plane<T: Scalar>(a: &Element<T>) -> Result<()> {
    if a.dim() != 2 {
        return Err(Error::Dimension { expected: 2, got: a.dim() });
    }
    if !a.context().is_commutative() {
        return Err(Error::NotCommutative);
    }
    Ok(())
}

fn fourier_sum(size: usize, terms: &[(i64, i64, Complex<f64>)]) -> GridFunction {
    let m = size as i64;
    let roots: Vec<Complex<f64>> = (0..m).map(|k| Complex::from_polar(1.0, TAU * k as f64 / m as f64)).collect();
    GridFunction::from_fn(size, |p, q| {
        terms.iter().map(|&(m1, m2, c)| c * roots[(m1 * p as i64 + m2 * q as i64).rem_euclid(m) as usize]).sum()
    })
}

fn terms_of<T: Scalar>(a: &Element<T>) -> Vec<(i64, i64, Complex<f64>)> {
    a.iter().map(|(m, c)| (m[0] as i64, m[1] as i64, Complex::new(c.re.as_f64(), c.im.as_f64()))).collect()
}

/// Pointwise Fourier sums `sum_m c_m e^{2 pi i m·x}` at `θ = 0`.
pub fn evaluate_grid<T: Scalar>(a: &Element<T>, size: usize) -> Result<GridFunction> {
    check_commutative_plane(a)?;
    Ok(fourier_sum(size, &terms_of(a)))
}

/// Classical Gaussian curvature of the conformal metric `e^h δ_{jk}`.
#[derive(Clone, Debug)]
pub struct ClassicalCurvature {
    /// `K = −½ e^{−h} Δh`
    pub gaussian: GridFunction,
    /// `R_{1,2,1,2} = e^{2h} K`
    pub r1212: GridFunction,
    pub h: GridFunction,
}

/// `Δh` is taken exactly in Fourier space (`c_m ↦ −4π²|m|² c_m`).
pub fn classical_curvature<T: Scalar>(h: &Element<T>, size: usize) -> Result<ClassicalCurvature> {
    check_commutative_plane(h)?;
    let residual = h.self_adjoint_residual();
    if residual > h.context().tol() {
        return Err(Error::NotSelfAdjoint { residual: residual.as_f64() });
    }
    let terms = terms_of(h);
    let lap: Vec<_> =
        terms.iter().map(|&(m1, m2, c)| (m1, m2, c * (-2.0 * TAU * TAU / 2.0 * (m1 * m1 + m2 * m2) as f64))).collect();
    let hg = fourier_sum(size, &terms);
    let lg = fourier_sum(size, &lap);
    let gaussian = hg.zip_with(&lg, |h, l| -0.5 * (-h).exp() * l);
    let r1212 = gaussian.zip_with(&hg, |k, h| (2.0 * h).exp() * k);
    Ok(ClassicalCurvature { gaussian, r1212, h: hg })
}
