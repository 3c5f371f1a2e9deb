use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Gauss-Legendre rule on `[-1, 1]`, exact for polynomials of degree
/// `2 * order - 1`.
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Scalar> GaussLegendre<T> {
    /// Computes nodes as roots of `P_order` by Newton iteration from the
    /// Tricomi initial guesses.
    pub fn new(order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidConfig(format!(
                "Gauss-Legendre order must be at least 2 (got {order})"
            )));
        }
        let n = order;
        let one = T::one();
        let two = T::lit(2.0);
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        for i in 0..n.div_ceil(2) {
            let guess = (T::PI() * (T::lit(i as f64) + T::lit(0.75)) / (T::lit(n as f64) + T::lit(0.5))).cos();
            let mut x = guess;
            let mut deriv = one;
            for _ in 0..100 {
                let (p, dp) = legendre(n, x);
                deriv = dp;
                let dx = p / dp;
                x = x - dx;
                if dx.abs() <= T::epsilon() * x.abs().max(one) {
                    let (_, dp) = legendre(n, x);
                    deriv = dp;
                    break;
                }
            }
            let w = two / ((one - x * x) * deriv * deriv);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = T::zero();
        }
        Ok(Self { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Applies the rule on `[a, b]`.
    pub fn integrate<F: FnMut(T) -> T>(&self, mut f: F, a: T, b: T) -> T {
        let half = (b - a) / T::lit(2.0);
        let mid = (a + b) / T::lit(2.0);
        let sum = self
            .nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&x, &w)| acc + w * f(mid + half * x));
        sum * half
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre<T: Scalar>(n: usize, x: T) -> (T, T) {
    let one = T::one();
    let mut p0 = one;
    let mut p1 = x;
    for k in 2..=n {
        let k = T::lit(k as f64);
        let p2 = ((T::lit(2.0) * k - one) * x * p1 - (k - one) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = T::lit(n as f64) * (x * p1 - p0) / (x * x - one);
    (p1, dp)
}

/// Fixed-order Gauss-Legendre quadrature of `f` over `[a, b]`.
pub fn integrate_fixed<T, F>(f: F, a: T, b: T, order: usize) -> Result<T>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain("integration limits must be finite".into()));
    }
    if a > b {
        return Err(Error::Domain(format!(
            "lower limit {} exceeds upper limit {}",
            a.as_f64(),
            b.as_f64()
        )));
    }
    Ok(GaussLegendre::new(order)?.integrate(f, a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn constant_is_exact_for_any_order() {
        for order in 2..12 {
            let v = integrate_fixed(|_| 1.0, 0.0, 1.0, order).unwrap();
            assert_relative_eq!(v, 1.0, max_relative = 1e-15);
        }
    }

    #[test]
    fn odd_cubic_vanishes() {
        let v = integrate_fixed(|x: f64| x * x * x, -1.0, 1.0, 3).unwrap();
        assert!(v.abs() < 1e-16);
    }

    #[test]
    fn cosine_quarter_wave() {
        let v = integrate_fixed(f64::cos, 0.0, FRAC_PI_2, 8).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exact_up_to_degree_2n_minus_1() {
        for order in 2..10 {
            let deg = 2 * order - 1;
            let v = integrate_fixed(|x: f64| x.powi(deg as i32 - 1) * (deg as f64), 0.0, 1.0, order).unwrap();
            assert_relative_eq!(v, 1.0, max_relative = 1e-13);
        }
    }

    #[test]
    fn weights_sum_to_two() {
        let rule = GaussLegendre::<f64>::new(20).unwrap();
        let s: f64 = rule.weights().iter().sum();
        assert_relative_eq!(s, 2.0, max_relative = 1e-14);
        assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(integrate_fixed(|x: f64| x, 0.0, f64::INFINITY, 4).is_err());
        assert!(integrate_fixed(|x: f64| x, 1.0, 0.0, 4).is_err());
        assert!(integrate_fixed(|x: f64| x, 0.0, 1.0, 1).is_err());
    }
}
