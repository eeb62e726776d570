//! Exact fractional heat semigroup `K_α(t) = exp(−t Λ̃^α)` on a periodic line.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{abs_pow, Real};
use crate::spectral::SpecField1D;

pub(crate) fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if !(alpha > T::zero() && alpha <= T::lit(2.0)) {
        return Err(Error::OutOfRange {
            name: "alpha",
            value: alpha.as_f64(),
            range: "(0, 2]",
        });
    }
    Ok(())
}

/// `K_α(t) f`: every coefficient multiplied by `exp(−t|ξ|^α)`.
pub fn heat_propagate<T: Real>(f: &SpecField1D<T>, alpha: T, t: T) -> Result<SpecField1D<T>> {
    check_alpha(alpha)?;
    if !(t >= T::zero()) {
        return Err(Error::OutOfRange {
            name: "t",
            value: t.as_f64(),
            range: "[0, inf)",
        });
    }
    Ok(propagate_unchecked(f, alpha, t))
}

/// Same as [`heat_propagate`] but accepts negative times (backward probes
/// over short intervals).
pub(crate) fn propagate_unchecked<T: Real>(f: &SpecField1D<T>, alpha: T, t: T) -> SpecField1D<T> {
    if t == T::zero() {
        return f.clone();
    }
    f.apply(|xi| Complex::new((-t * abs_pow(xi, alpha)).exp(), T::zero()))
}

/// `−Λ̃^α ρ0`, the right-hand side of the background equation.
pub fn background_tendency<T: Real>(rho0: &SpecField1D<T>, alpha: T) -> Result<SpecField1D<T>> {
    check_alpha(alpha)?;
    Ok(rho0.apply(|xi| {
        let w = if xi == T::zero() {
            T::zero()
        } else {
            abs_pow(xi, alpha)
        };
        Complex::new(-w, T::zero())
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heat1d::Profile;
    use crate::spectral::{Field1D, Grid1D};
    use std::f64::consts::TAU;
    use std::sync::Arc;

    fn grid(n: usize, l: f64) -> Arc<Grid1D<f64>> {
        Arc::new(Grid1D::new(n, l).unwrap())
    }

    #[test]
    fn single_mode_decays_exponentially() {
        let g = grid(64, TAU);
        let f = Field1D::from_fn(g.clone(), |x| (2.0 * x).cos())
            .transform()
            .unwrap();
        for alpha in [0.5, 1.0, 1.5, 2.0] {
            let t = 0.3;
            let out = heat_propagate(&f, alpha, t).unwrap().inverse_transform();
            let factor = (-(2f64.powf(alpha)) * t).exp();
            for (x, v) in g.coords().iter().zip(out.values()) {
                assert!((v - factor * (2.0 * x).cos()).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn zero_time_is_identity_and_negative_time_rejected() {
        let g = grid(32, TAU);
        let f = Field1D::from_fn(g, |x| x.sin() + 0.1 * (5.0 * x).cos())
            .transform()
            .unwrap();
        let same = heat_propagate(&f, 1.3, 0.0).unwrap();
        assert_eq!(same.coeffs(), f.coeffs());
        assert!(heat_propagate(&f, 1.3, -1.0).is_err());
        assert!(heat_propagate(&f, 2.5, 1.0).is_err());
        assert!(heat_propagate(&f, 0.0, 1.0).is_err());
    }

    #[test]
    fn classical_heat_kernel_for_gaussian() {
        // Λ̃² = −∂²: a Gaussian of variance w² spreads to variance w² + 2t.
        let l = TAU * 20.0;
        let g = grid(2048, l);
        let w = 1.0;
        let f = Profile::gaussian(w, 1.0).sample(&g).transform().unwrap();
        let t = 1.0;
        let out = heat_propagate(&f, 2.0, t).unwrap().inverse_transform();
        let var = w * w + 2.0 * t;
        let c = l / 2.0;
        for (x, v) in g.coords().iter().zip(out.values()) {
            let exact = w / var.sqrt() * (-(x - c).powi(2) / (2.0 * var)).exp();
            assert!((v - exact).abs() < 1e-10, "x={x}: {v} vs {exact}");
        }
    }

    #[test]
    fn tendency_on_cosine_and_zero() {
        let g = grid(32, TAU);
        let zero = SpecField1D::<f64>::zeros(g.clone());
        assert_eq!(
            background_tendency(&zero, 1.0).unwrap().coeffs(),
            zero.coeffs()
        );
        let f = Field1D::from_fn(g.clone(), |x| x.cos())
            .transform()
            .unwrap();
        let out = background_tendency(&f, 1.0).unwrap().inverse_transform();
        for (x, v) in g.coords().iter().zip(out.values()) {
            assert!((v + x.cos()).abs() < 1e-13);
        }
    }

    #[test]
    fn tendency_matches_time_difference_of_semigroup() {
        let g = grid(128, TAU);
        let f = Profile::gaussian(0.5, 1.0).sample(&g).transform().unwrap();
        let alpha = 1.2;
        let tend = background_tendency(&f, alpha).unwrap().inverse_transform();
        let mut errs = vec![];
        for dt in [1e-3, 5e-4] {
            let ahead = heat_propagate(&f, alpha, dt).unwrap().inverse_transform();
            let f0 = f.inverse_transform();
            let err = ahead
                .values()
                .iter()
                .zip(f0.values())
                .zip(tend.values())
                .map(|((a, b), d)| ((a - b) / dt - d).abs())
                .fold(0.0, f64::max);
            errs.push(err);
        }
        // first-order forward difference
        let order = (errs[0] / errs[1]).log2();
        assert!((order - 1.0).abs() < 0.1, "order {order}");
    }
}
