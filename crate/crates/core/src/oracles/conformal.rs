use crate::algebra::Element;
use crate::error::{Error, Result};
use crate::geometry::VectorField;
use crate::scalar::Scalar;

/// `k_j = ∂_j(e^h) e^{−h}`, together with `e^h` and `e^{−h}`.
pub struct ConformalData<T: Scalar> {
    pub exp_h: Element<T>,
    pub exp_neg_h: Element<T>,
    pub k: [Element<T>; 2],
}

pub fn conformal_data<T: Scalar>(h: &Element<T>) -> Result<ConformalData<T>> {
    if h.dim() != 2 {
        return Err(Error::Dimension { expected: 2, got: h.dim() });
    }
    let exp_h = h.exp_sa()?;
    let exp_neg_h = h.scale_real(-T::one()).exp_sa()?;
    let k = [exp_h.derive(0)?.multiply(&exp_neg_h)?, exp_h.derive(1)?.multiply(&exp_neg_h)?];
    Ok(ConformalData { exp_h, exp_neg_h, k })
}

/// `R_{1,2,1,2} = −½(∂_2(k_2) + ∂_1(k_1)) e^h`, computed from algebra
/// operations only.
pub fn conformal_closed_form<T: Scalar>(h: &Element<T>) -> Result<Element<T>> {
    let d = conformal_data(h)?;
    let div = &d.k[1].derive(1)? + &d.k[0].derive(0)?;
    Ok(div.multiply(&d.exp_h)?.scale_real(T::of(-0.5)))
}

/// Closed-form Christoffel fields `Γ[j][k]` of `e^h δ_{jk}`:
/// `∇_1∂_1 = −∇_2∂_2 = ½(k_1∂_1 − k_2∂_2)`, `∇_1∂_2 = ∇_2∂_1 = ½(k_2∂_1 + k_1∂_2)`.
pub fn conformal_christoffel<T: Scalar>(h: &Element<T>) -> Result<[[VectorField<T>; 2]; 2]> {
    let d = conformal_data(h)?;
    let half = T::of(0.5);
    let [k1, k2] = d.k;
    let g11 = VectorField::new(vec![k1.scale_real(half), k2.scale_real(-half)])?;
    let g22 = g11.scale(num_complex::Complex::new(-T::one(), T::zero()));
    let g12 = VectorField::new(vec![k2.scale_real(half), k1.scale_real(half)])?;
    Ok([[g11, g12.clone()], [g12, g22]])
}
