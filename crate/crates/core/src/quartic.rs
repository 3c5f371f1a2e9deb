//! The quartic under the radical of the period integral in the coordinate
//! `z = sqrt(l² + y²)`.
//!
//! With `z0 = sqrt(l² + y0²)` the substitution `y dy = z dz` turns the
//! radicand `(y0² - y²)(1/l0 - 2/(z + z0))` of the speed into
//! `Q(z) / (z² - l²)` where
//!
//! ```text
//! Q(z) = (1/l0) (z0 - z)(z + z0 - 2 l0)(z - l)(z + l)
//! ```
//!
//! so the roots are known in closed form: `z0`, `2 l0 - z0`, `l` and `-l`.
//! Only `l` and `z0` lie in the integration interval `[l, z0]`.
//!
//! The coefficient algebra is generic over [`num_traits::Num`] so that the
//! expansion can be checked in exact rational arithmetic.

use num_traits::Num;

use crate::model::{Amplitude, StringParams};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct QuarticForm<T> {
    /// Coefficient of `z⁴`, equal to `-1 / l0`.
    pub lead: T,
    /// Coefficients in descending degree, `coeffs[0] == lead`.
    pub coeffs: [T; 5],
    /// `[z0, 2 l0 - z0, l, -l]`.
    pub roots: [T; 4],
    pub z0: T,
    /// Lower integration limit, equal to `l`.
    pub zl: T,
}

impl<T: Num + Clone> QuarticForm<T> {
    /// Expands the factored quartic for a wire with half-lengths `l0`, `l`
    /// released at the turning point `z0`.
    pub fn from_turning_point(l0: T, l: T, z0: T) -> Self {
        let one = T::one();
        let two = one.clone() + one.clone();
        let inv_l0 = one / l0.clone();
        let l_sq = l.clone() * l.clone();
        let lead = T::zero() - inv_l0.clone();
        let c3 = two.clone();
        let c2 = (z0.clone() * z0.clone() - two.clone() * l0.clone() * z0.clone() + l_sq.clone())
            * inv_l0.clone();
        let c1 = T::zero() - two.clone() * l_sq.clone();
        let c0 = T::zero() - l_sq * z0.clone() * (z0.clone() - two.clone() * l0.clone()) * inv_l0;
        let roots = [
            z0.clone(),
            two * l0 - z0.clone(),
            l.clone(),
            T::zero() - l.clone(),
        ];
        Self {
            lead: lead.clone(),
            coeffs: [lead, c3, c2, c1, c0],
            roots,
            z0,
            zl: l,
        }
    }

    /// Horner evaluation of the stored coefficients.
    pub fn eval(&self, z: &T) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |acc, c| acc * z.clone() + c.clone())
    }

    /// `lead * (z - a)(z - b)(z - c)(z - d)` from the stored roots.
    pub fn eval_factored(&self, z: &T) -> T {
        self.roots
            .iter()
            .fold(self.lead.clone(), |acc, r| acc * (z.clone() - r.clone()))
    }

    /// `Q(z) / ((z0 - z)(z - l))`: the factor left once the two roots that
    /// bound the integration interval are divided out.
    pub fn cofactor(&self, z: &T) -> T {
        let [_, b, _, d] = &self.roots;
        (T::zero() - self.lead.clone()) * (z.clone() - b.clone()) * (z.clone() - d.clone())
    }
}

/// Builds the quartic for a release from rest at `y0`.
pub fn build_quartic<T: Scalar>(params: &StringParams<T>, y0: Amplitude<T>) -> QuarticForm<T> {
    let z0 = params.half_length(y0.get());
    QuarticForm::from_turning_point(params.l0, params.l, z0)
}

/// Coefficients of the quartic exactly as originally published (descending
/// degree), including the constant term `l² z0 + l² / (2 l0)` and reading the
/// stray lower-case `l²` as `l²`. They do not reproduce the period integrand
/// and are kept for the erratum diagnostic only.
pub fn printed_coefficients<T: Scalar>(l0: T, l: T, z0: T) -> [T; 5] {
    let two = T::lit(2.0);
    let l_sq = l * l;
    [
        -T::one() / (two * l0),
        T::one(),
        l_sq / (two * l0) - z0,
        -l_sq,
        l_sq * z0 + l_sq / (two * l0),
    ]
}
