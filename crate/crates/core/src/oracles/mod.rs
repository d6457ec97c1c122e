//! Independent ground truth: commutative grid evaluation, the clock-and-shift
//! representation at rational theta, and closed forms for conformal metrics.
//!
//! Oracle arithmetic is done in `f64` whatever the engine scalar.

mod conformal;
mod grid;
mod matrix_rep;

use nalgebra::DMatrix;
use num_complex::Complex;

pub use conformal::{conformal_christoffel, conformal_closed_form, conformal_data, ConformalData};
pub use grid::{classical_curvature, evaluate_grid, ClassicalCurvature, GridFunction, DEFAULT_GRID_SIZE};
pub use matrix_rep::{build_matrix_rep, max_entry, normalized_trace, rational_approximant, represent, MatrixRep};

use crate::algebra::Element;
use crate::geometry::hermitian_eigenvalues;
use crate::scalar::Scalar;

const POSITIVITY_GRID: usize = 32;

/// Smallest eigenvalue of a matrix of algebra elements under a finite
/// stand-in for the C*-norm picture: pointwise evaluation at `θ = 0`, or the
/// block clock-and-shift image at the nearest rational `p/q` otherwise.
///
/// Only two-dimensional tori are supported; `None` otherwise. At irrational
/// theta this is a heuristic.
pub fn positivity_min_eigenvalue<T: Scalar>(rows: &[Vec<Element<T>>]) -> Option<f64> {
    let first = rows.first()?.first()?;
    let ctx = first.context();
    if ctx.dim() != 2 {
        return None;
    }
    let n = rows.len();
    if ctx.is_commutative() {
        let grids: Vec<Vec<GridFunction>> = rows
            .iter()
            .map(|r| r.iter().map(|e| evaluate_grid(e, POSITIVITY_GRID)).collect::<Result<_, _>>())
            .collect::<Result<_, _>>()
            .ok()?;
        let mut min = f64::INFINITY;
        for p in 0..POSITIVITY_GRID {
            for q in 0..POSITIVITY_GRID {
                let m: Vec<Vec<Complex<f64>>> =
                    (0..n).map(|i| (0..n).map(|j| grids[i][j].get(p, q)).collect()).collect();
                min = min.min(hermitian_eigenvalues(&m)[0]);
            }
        }
        return Some(min);
    }
    let w = ctx.working_cutoff().max(1) as usize;
    let (p, q) = rational_approximant(ctx.theta(0, 1).as_f64(), 2 * w + 2, 4 * w + 4);
    let rep = build_matrix_rep(p, q).ok()?;
    let mut block = DMatrix::<Complex<f64>>::zeros(n * q, n * q);
    for (i, row) in rows.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let img = matrix_rep::represent_unchecked(e, &rep);
            block.view_mut((i * q, j * q), (q, q)).copy_from(&img);
        }
    }
    let dense: Vec<Vec<Complex<f64>>> = (0..n * q).map(|i| (0..n * q).map(|j| block[(i, j)]).collect()).collect();
    Some(hermitian_eigenvalues(&dense)[0])
}
