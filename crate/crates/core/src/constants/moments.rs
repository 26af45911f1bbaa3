use crate::combinatorics::Weight;
use crate::error::{domain, Error, Result};
use crate::scalar::{RealScalar, Scalar};

/// Σ_{r=1}^{k} c_r y^r by Horner's scheme.
fn horner<T: Scalar>(coeffs: &[T], y: &T) -> T {
    let mut acc = T::zero();
    for c in coeffs.iter().rev() {
        acc = acc * y.clone() + c.clone();
    }
    acc * y.clone()
}

fn finite<T: Scalar>(value: T, what: &str) -> Result<T> {
    if value.finite() {
        Ok(value)
    } else {
        Err(Error::Range(format!("{what} is not finite in this precision")))
    }
}

fn polynomial<T: Scalar>(k: usize, y: T, weight: Weight) -> Result<T> {
    if y < T::zero() {
        return domain(format!("polynomial argument {y:?} is negative"));
    }
    let coeffs = T::moment_coefficients().row(k, weight)?;
    finite(horner(coeffs, &y), "moment polynomial")
}

/// `P_k(y) = Σ_r S(k,r) 2^r r! y^r`.
pub fn poly_p<T: Scalar>(k: usize, y: T) -> Result<T> {
    polynomial(k, y, Weight::Sieve)
}

/// `P̃_k(y) = Σ_r S(k,r) y^r`.
pub fn poly_p_tilde<T: Scalar>(k: usize, y: T) -> Result<T> {
    polynomial(k, y, Weight::Unit)
}

fn quotient<T: Scalar>(k: usize, omega: T, lambda: T, weight: Weight) -> Result<T> {
    let one = T::one();
    if !(omega > one.clone() + T::of_f64(1e-9)) {
        return domain(format!("omega = {omega:?} must exceed 1"));
    }
    if !(lambda > T::zero()) {
        return domain(format!("lambda = {lambda:?} must be positive"));
    }
    let coeffs = T::moment_coefficients().row(k, weight)?;
    // Σ_r c_r ω^r λ^{r-1}, accumulating the two powers separately
    let mut omega_pow = omega.clone();
    let mut lambda_pow = one.clone();
    let mut sum = T::zero();
    for c in coeffs {
        sum = sum + c.clone() * omega_pow.clone() * lambda_pow.clone();
        omega_pow = omega_pow * omega.clone();
        lambda_pow = lambda_pow * lambda.clone();
    }
    finite(sum / (omega - one), "moment quotient R")
}

/// `R_{k,ω}(λ) = P_k(ωλ) / ((ω−1)λ)`.
pub fn moment_r<T: Scalar>(k: usize, omega: T, lambda: T) -> Result<T> {
    quotient(k, omega, lambda, Weight::Sieve)
}

/// `R̃_{k,ω}(λ) = P̃_k(ωλ) / ((ω−1)λ)`.
pub fn moment_r_tilde<T: Scalar>(k: usize, omega: T, lambda: T) -> Result<T> {
    quotient(k, omega, lambda, Weight::Unit)
}

fn holder_ratio<T: RealScalar>(ell: usize, numerator: T, r: T) -> Result<T> {
    let l = T::of_u64(ell as u64);
    let value = numerator.powf(l / (l - T::one())) / r.powf(T::one() / (l - T::one()));
    finite(value, "delta")
}

/// `Δ_{ℓ,ω}(λ) = (λ/2 − 1/4)^{ℓ/(ℓ−1)} / R_{ℓ+1,ω}(λ)^{1/(ℓ−1)}`, for `λ > 1/2`.
pub fn delta<T: RealScalar>(ell: usize, omega: T, lambda: T) -> Result<T> {
    if ell < 2 {
        return domain(format!("ell = {ell} must be at least 2"));
    }
    let half = T::of_f64(0.5);
    if !(lambda > half) {
        return domain(format!("lambda = {lambda:?} must exceed 1/2"));
    }
    let r = moment_r(ell + 1, omega, lambda)?;
    holder_ratio(ell, lambda * half - T::of_f64(0.25), r)
}

/// `Δ̃_{ℓ,ω}(λ) = (λ/2)^{ℓ/(ℓ−1)} / R̃_{ℓ+1,ω}(λ)^{1/(ℓ−1)}`, for `λ > 0`.
pub fn delta_tilde<T: RealScalar>(ell: usize, omega: T, lambda: T) -> Result<T> {
    if ell < 2 {
        return domain(format!("ell = {ell} must be at least 2"));
    }
    if !(lambda > T::zero()) {
        return domain(format!("lambda = {lambda:?} must be positive"));
    }
    let r = moment_r_tilde(ell + 1, omega, lambda)?;
    holder_ratio(ell, lambda * T::of_f64(0.5), r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn polynomial_values() {
        assert_eq!(poly_p(1, 3.0).unwrap(), 6.0);
        assert_eq!(poly_p(2, 1.0).unwrap(), 10.0);
        assert_eq!(poly_p(3, 1.0).unwrap(), 74.0);
        assert_eq!(poly_p(3, 2.0).unwrap(), 484.0);
        assert_eq!(poly_p_tilde(2, 1.0).unwrap(), 2.0);
        assert_eq!(poly_p_tilde(1, 5.0).unwrap(), 5.0);
        assert_eq!(poly_p_tilde(4, 1.0).unwrap(), 15.0);
    }

    #[test]
    fn polynomial_errors() {
        assert!(matches!(poly_p(0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(poly_p(66, 1.0), Err(Error::Domain(_))));
        assert!(matches!(poly_p(2, -1.0), Err(Error::Domain(_))));
        // 2^65 65! overflows single precision
        assert!(matches!(poly_p(65, 1.0f32), Err(Error::Range(_))));
    }

    #[test]
    fn quotient_values() {
        assert_eq!(moment_r(2, 2.0, 1.0).unwrap(), 36.0);
        assert_eq!(moment_r(1, 2.0, 1.0).unwrap(), 4.0);
        let r3 = moment_r(3, 1.5, 0.5).unwrap();
        assert!(close(r3, poly_p(3, 0.75).unwrap() / 0.25, 1e-14));
        assert_eq!(moment_r_tilde(2, 2.0, 1.0).unwrap(), 6.0);
        assert_eq!(moment_r_tilde(1, 3.0, 2.0).unwrap(), 1.5);
        let rt = moment_r_tilde(3, 1.2, 1.0).unwrap();
        assert!(close(rt, poly_p_tilde(3, 1.2).unwrap() / 0.2, 1e-13));
        assert!(moment_r(2, 1.0, 1.0).is_err());
        assert!(moment_r(2, 0.5, 1.0).is_err());
        assert!(moment_r(2, 2.0, 0.0).is_err());
    }

    #[test]
    fn quotient_identity_is_exact_over_rationals() {
        let omega = BigRational::new(2491.into(), 2250.into());
        let lambda = BigRational::new(7.into(), 5.into());
        for k in 1..=20 {
            let r = moment_r(k, omega.clone(), lambda.clone()).unwrap();
            let p = poly_p(k, omega.clone() * lambda.clone()).unwrap();
            let one = BigRational::from_integer(1.into());
            assert_eq!(r * (omega.clone() - one) * lambda.clone(), p, "k={k}");
        }
    }

    #[test]
    fn delta_values() {
        // (1/4)^2 / R_{3,2}(1); R_{3,2}(1) = 2·2 + 3·8·4 + 48·8 = 484
        assert!(close(delta(2, 2.0, 1.0).unwrap(), 0.0625 / 484.0, 1e-14));
        // (1/2)^2 / R~_{3,2}(1); R~_{3,2}(1) = 2 + 3·4 + 8 = 22
        assert!(close(delta_tilde(2, 2.0, 1.0).unwrap(), 0.25 / 22.0, 1e-14));
        assert!(delta(2, 2.0, 0.5 + 1e-12).unwrap() < 1e-20);
        assert!(delta_tilde(2, 2.0, 1e-12).unwrap() < 1e-20);
        assert!(delta(2, 2.0, 0.5).is_err());
        assert!(delta(1, 2.0, 1.0).is_err());
        assert!(delta_tilde(2, 2.0, 0.0).is_err());
    }

    #[test]
    fn quoted_maxima_of_delta() {
        assert!((delta::<f64>(11, 5503.0 / 5000.0, 2.0).unwrap() - 0.01266456).abs() < 1e-8);
        assert!((delta_tilde::<f64>(10, 5939.0 / 5000.0, 2.0).unwrap() - 0.11604228).abs() < 1e-8);
    }
}
