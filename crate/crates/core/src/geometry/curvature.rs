use num_complex::Complex;
use rayon::prelude::*;

use super::connection::{levi_civita, Connection};
use super::fields::{Derivation, VectorField};
use super::metric::Metric;
use crate::algebra::Element;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `R(X, Y) Z = ∇_Y ∇_X Z − ∇_X ∇_Y Z + ∇_{[X,Y]} Z`.
pub fn curvature_operator<T: Scalar>(
    c: &Connection<T>,
    x: &Derivation<T>,
    y: &Derivation<T>,
    z: &VectorField<T>,
) -> Result<VectorField<T>> {
    let yx = c.apply(y, &c.apply(x, z)?)?;
    let xy = c.apply(x, &c.apply(y, z)?)?;
    let bracket = c.apply(&x.bracket(y)?, z)?;
    Ok(yx.sub(&xy).add(&bracket))
}

/// Components `R[j][k][l][m] = <R(∂_j, ∂_k) ∂_l, ∂_m>`, 0-based.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureTensor<T: Scalar> {
    n: usize,
    components: Vec<Element<T>>,
}

impl<T: Scalar> CurvatureTensor<T> {
    fn offset(&self, j: usize, k: usize, l: usize, m: usize) -> usize {
        ((j * self.n + k) * self.n + l) * self.n + m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, j: usize, k: usize, l: usize, m: usize) -> &Element<T> {
        &self.components[self.offset(j, k, l, m)]
    }

    /// All components with their 0-based indices, in lexicographic index order.
    pub fn iter(&self) -> impl Iterator<Item = ([usize; 4], &Element<T>)> {
        let n = self.n;
        self.components
            .iter()
            .enumerate()
            .map(move |(i, e)| ([i / (n * n * n), (i / (n * n)) % n, (i / n) % n, i % n], e))
    }

    pub fn max_tail(&self) -> T {
        self.components.iter().map(Element::tail).fold(T::zero(), T::max)
    }
}

/// Evaluates every component through [`curvature_operator`] on basis
/// derivations. With `parallel`, the `(j, k, l)` triples are spread over the
/// rayon pool; the result is identical either way.
pub fn curvature_tensor<T: Scalar>(c: &Connection<T>, g: &Metric<T>, parallel: bool) -> Result<CurvatureTensor<T>> {
    let n = g.dim();
    let ctx = g.context();
    let basis: Vec<Derivation<T>> = (0..n).map(|j| Derivation::basis(ctx, j)).collect::<Result<_>>()?;
    let fields: Vec<VectorField<T>> = (0..n).map(|l| VectorField::basis(ctx, l)).collect::<Result<_>>()?;
    let triples: Vec<(usize, usize, usize)> =
        (0..n).flat_map(|j| (0..n).flat_map(move |k| (0..n).map(move |l| (j, k, l)))).collect();

    let component_row = |&(j, k, l): &(usize, usize, usize)| -> Result<Vec<Element<T>>> {
        let r = curvature_operator(c, &basis[j], &basis[k], &fields[l])?;
        (0..n).map(|m| g.pair_with_basis(&r, m)).collect()
    };
    let rows: Vec<Vec<Element<T>>> = if parallel {
        triples.par_iter().map(component_row).collect::<Result<_>>()?
    } else {
        triples.iter().map(component_row).collect::<Result<_>>()?
    };
    Ok(CurvatureTensor { n, components: rows.into_iter().flatten().collect() })
}

/// ℓ1 residuals of the identities the Levi-Civita connection and its
/// curvature must satisfy (maxima over all index combinations).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ResidualReport {
    /// `Γ[j][k] − Γ[k][j]`
    pub torsion: f64,
    /// `∂_j g_{kl} − <∇_j ∂_k, ∂_l> − <∂_k, ∇_j ∂_l>`
    pub compatibility: f64,
    /// `<∇_j ∂_k, ∂_l>` minus its adjoint
    pub self_adjointness: f64,
    /// `R_{jklm} + R_{kljm} + R_{ljkm}`
    pub bianchi: f64,
    /// `R_{jklm} + R_{kjlm}`
    pub antisymmetry: f64,
}

impl ResidualReport {
    pub fn entries(&self) -> [(&'static str, f64); 5] {
        [
            ("torsion", self.torsion),
            ("compatibility", self.compatibility),
            ("self_adjointness", self.self_adjointness),
            ("bianchi", self.bianchi),
            ("antisymmetry", self.antisymmetry),
        ]
    }

    pub fn max(&self) -> f64 {
        self.entries().iter().map(|e| e.1).fold(0.0, f64::max)
    }
}

pub fn identity_residuals<T: Scalar>(
    c: &Connection<T>,
    g: &Metric<T>,
    r: &CurvatureTensor<T>,
) -> Result<ResidualReport> {
    let n = g.dim();
    let mut rep = ResidualReport::default();
    let up = |x: T| x.as_f64();
    for j in 0..n {
        for k in 0..n {
            rep.torsion = rep.torsion.max(up(c.christoffel(j, k).distance(c.christoffel(k, j))));
            for l in 0..n {
                let lowered = c.lowered(g, j, k, l)?;
                rep.self_adjointness = rep.self_adjointness.max(up(lowered.self_adjoint_residual()));
                let other = g.basis_pair_with(k, c.christoffel(j, l))?;
                let lhs = g.entry(k, l).derive(j)?;
                rep.compatibility = rep.compatibility.max(up((&(&lhs - &lowered) - &other).norm_l1()));
                for m in 0..n {
                    let cyc = &(r.get(j, k, l, m) + r.get(k, l, j, m)) + r.get(l, j, k, m);
                    rep.bianchi = rep.bianchi.max(up(cyc.norm_l1()));
                    rep.antisymmetry = rep.antisymmetry.max(up((r.get(j, k, l, m) + r.get(k, j, l, m)).norm_l1()));
                }
            }
        }
    }
    Ok(rep)
}

/// `tau(R_{1,2,1,2} e^{-h})` for the conformal metric `e^h δ_{jk}` on the 2-torus.
#[derive(Clone, Debug)]
pub struct GaussBonnet<T: Scalar> {
    pub value: Complex<T>,
    pub r1212: Element<T>,
    /// Largest truncation tail seen along the pipeline.
    pub truncation: T,
}

pub fn gauss_bonnet<T: Scalar>(h: &Element<T>) -> Result<GaussBonnet<T>> {
    if h.dim() != 2 {
        return Err(Error::Dimension { expected: 2, got: h.dim() });
    }
    let g = Metric::conformal(h)?;
    let c = levi_civita(&g)?;
    let r = curvature_tensor(&c, &g, false)?;
    let r1212 = r.get(0, 1, 0, 1).clone();
    let weighted = r1212.multiply(&h.scale_real(-T::one()).exp_sa()?)?;
    let truncation = r.max_tail().max(weighted.tail());
    Ok(GaussBonnet { value: weighted.trace(), r1212, truncation })
}
